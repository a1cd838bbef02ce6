"""Sparse entry tables for the local matrices.

Each entry is ``(row, col, sign, weight)`` with zero-based indices; the
matrix element is ``sign * weights[weight]``.
"""

VECTOR = (
    (0, 0, +1, "a"),
    (1, 1, +1, "b"),
    (1, 6, +1, "g"),
    (2, 2, +1, "b"),
    (2, 12, +1, "g"),
    (3, 3, +1, "b"),
    (3, 18, +1, "g"),
    (4, 4, +1, "b"),
    (4, 24, +1, "g"),
    (5, 5, +1, "e"),
    (5, 10, +1, "d"),
    (5, 15, +1, "d1"),
    (5, 20, +1, "d1"),
    (5, 25, +1, "d2"),
    (5, 30, +1, "g1"),
    (6, 1, +1, "barg"),
    (6, 6, +1, "b"),
    (7, 7, +1, "a"),
    (8, 8, +1, "b"),
    (8, 13, +1, "g"),
    (9, 9, +1, "b"),
    (9, 19, +1, "g"),
    (10, 5, +1, "bard"),
    (10, 10, +1, "e"),
    (10, 15, +1, "d"),
    (10, 20, +1, "d"),
    (10, 25, +1, "g2"),
    (10, 30, +1, "d2"),
    (11, 11, +1, "b"),
    (11, 31, +1, "g"),
    (12, 2, +1, "barg"),
    (12, 12, +1, "b"),
    (13, 8, +1, "barg"),
    (13, 13, +1, "b"),
    (14, 14, +1, "a"),
    (15, 5, +1, "bard1"),
    (15, 10, +1, "bard"),
    (15, 15, +1, "e"),
    (15, 20, +1, "g3"),
    (15, 25, +1, "d"),
    (15, 30, +1, "d1"),
    (16, 16, +1, "b"),
    (16, 26, +1, "g"),
    (17, 17, +1, "b"),
    (17, 32, +1, "g"),
    (18, 3, +1, "barg"),
    (18, 18, +1, "b"),
    (19, 9, +1, "barg"),
    (19, 19, +1, "b"),
    (20, 5, +1, "bard1"),
    (20, 10, +1, "bard"),
    (20, 15, +1, "barg3"),
    (20, 20, +1, "e"),
    (20, 25, +1, "d"),
    (20, 30, +1, "d1"),
    (21, 21, +1, "a"),
    (22, 22, +1, "b"),
    (22, 27, +1, "g"),
    (23, 23, +1, "b"),
    (23, 33, +1, "g"),
    (24, 4, +1, "barg"),
    (24, 24, +1, "b"),
    (25, 5, +1, "bard2"),
    (25, 10, +1, "barg2"),
    (25, 15, +1, "bard"),
    (25, 20, +1, "bard"),
    (25, 25, +1, "e"),
    (25, 30, +1, "d"),
    (26, 16, +1, "barg"),
    (26, 26, +1, "b"),
    (27, 22, +1, "barg"),
    (27, 27, +1, "b"),
    (28, 28, +1, "a"),
    (29, 29, +1, "b"),
    (29, 34, +1, "g"),
    (30, 5, +1, "barg1"),
    (30, 10, +1, "bard2"),
    (30, 15, +1, "bard1"),
    (30, 20, +1, "bard1"),
    (30, 25, +1, "bard"),
    (30, 30, +1, "e"),
    (31, 11, +1, "barg"),
    (31, 31, +1, "b"),
    (32, 17, +1, "barg"),
    (32, 32, +1, "b"),
    (33, 23, +1, "barg"),
    (33, 33, +1, "b"),
    (34, 29, +1, "barg"),
    (34, 34, +1, "b"),
    (35, 35, +1, "a"),
)

PLUS = (
    (0, 0, +1, "a1"),
    (1, 1, +1, "a1"),
    (2, 2, +1, "a1"),
    (3, 3, +1, "b1"),
    (3, 7, -1, "e1"),
    (3, 12, +1, "e2"),
    (4, 4, +1, "b1"),
    (4, 8, +1, "e1"),
    (4, 18, -1, "e2"),
    (5, 5, +1, "b1"),
    (5, 14, -1, "e1"),
    (5, 19, +1, "e2"),
    (6, 6, +1, "a1"),
    (7, 3, -1, "e3"),
    (7, 7, +1, "b1"),
    (7, 12, -1, "e1"),
    (8, 4, +1, "e3"),
    (8, 8, +1, "b1"),
    (8, 18, -1, "e1"),
    (9, 9, +1, "a1"),
    (10, 10, +1, "a1"),
    (11, 11, +1, "b1"),
    (11, 16, +1, "e1"),
    (11, 21, +1, "e2"),
    (12, 3, +1, "e4"),
    (12, 7, -1, "e3"),
    (12, 12, +1, "b1"),
    (13, 13, +1, "a1"),
    (14, 5, -1, "e3"),
    (14, 14, +1, "b1"),
    (14, 19, -1, "e1"),
    (15, 15, +1, "a1"),
    (16, 11, +1, "e3"),
    (16, 16, +1, "b1"),
    (16, 21, +1, "e1"),
    (17, 17, +1, "a1"),
    (18, 4, -1, "e4"),
    (18, 8, -1, "e3"),
    (18, 18, +1, "b1"),
    (19, 5, +1, "e4"),
    (19, 14, -1, "e3"),
    (19, 19, +1, "b1"),
    (20, 20, +1, "a1"),
    (21, 11, +1, "e4"),
    (21, 16, +1, "e3"),
    (21, 21, +1, "b1"),
    (22, 22, +1, "a1"),
    (23, 23, +1, "a1"),
)

MINUS = (
    (0, 0, +1, "a1"),
    (1, 1, +1, "a1"),
    (2, 2, +1, "b1"),
    (2, 7, +1, "e1"),
    (2, 12, +1, "e2"),
    (3, 3, +1, "a1"),
    (4, 4, +1, "b1"),
    (4, 9, -1, "e1"),  # -e1 makes the crossing pair with PLUS exact
    (4, 18, -1, "e2"),
    (5, 5, +1, "b1"),
    (5, 15, -1, "e1"),
    (5, 19, +1, "e2"),
    (6, 6, +1, "a1"),
    (7, 2, +1, "e3"),
    (7, 7, +1, "b1"),
    (7, 12, +1, "e1"),
    (8, 8, +1, "a1"),
    (9, 4, -1, "e3"),
    (9, 9, +1, "b1"),
    (9, 18, +1, "e1"),
    (10, 10, +1, "a1"),
    (11, 11, +1, "b1"),
    (11, 16, -1, "e1"),
    (11, 20, -1, "e2"),
    (12, 2, +1, "e4"),
    (12, 7, +1, "e3"),
    (12, 12, +1, "b1"),
    (13, 13, +1, "a1"),
    (14, 14, +1, "a1"),
    (15, 5, -1, "e3"),
    (15, 15, +1, "b1"),
    (15, 19, -1, "e1"),
    (16, 11, -1, "e3"),
    (16, 16, +1, "b1"),
    (16, 20, +1, "e1"),
    (17, 17, +1, "a1"),
    (18, 4, -1, "e4"),
    (18, 9, +1, "e3"),
    (18, 18, +1, "b1"),
    (19, 5, +1, "e4"),
    (19, 15, -1, "e3"),
    (19, 19, +1, "b1"),
    (20, 11, -1, "e4"),
    (20, 16, +1, "e3"),
    (20, 20, +1, "b1"),
    (21, 21, +1, "a1"),
    (22, 22, +1, "a1"),
    (23, 23, +1, "a1"),
)

PLUS_MINUS = (
    (0, 0, +1, "r1"),
    (1, 1, +1, "r1"),
    (2, 2, +1, "r1"),
    (3, 3, +1, "r2"),
    (3, 6, +1, "r3"),
    (3, 9, +1, "r4"),
    (3, 12, +1, "r5"),
    (4, 4, +1, "r1"),
    (5, 5, +1, "r1"),
    (6, 3, +1, "barr3"),
    (6, 6, +1, "r2"),
    (6, 9, -1, "r3"),
    (6, 12, -1, "r4"),
    (7, 7, +1, "r1"),
    (8, 8, +1, "r1"),
    (9, 3, +1, "barr4"),
    (9, 6, -1, "barr3"),
    (9, 9, +1, "r2"),
    (9, 12, -1, "r3"),
    (10, 10, +1, "r1"),
    (11, 11, +1, "r1"),
    (12, 3, +1, "barr5"),
    (12, 6, -1, "barr4"),
    (12, 9, -1, "barr3"),
    (12, 12, +1, "r2"),
    (13, 13, +1, "r1"),
    (14, 14, +1, "r1"),
    (15, 15, +1, "r1"),
)

SPINORIAL = (
    (0, 0, +1, "a2"),
    (1, 1, +1, "b2"),
    (1, 4, +1, "e5"),
    (2, 2, +1, "b2"),
    (2, 8, +1, "e5"),
    (3, 3, +1, "b2"),
    (3, 12, +1, "e5"),
    (4, 1, +1, "e6"),
    (4, 4, +1, "b2"),
    (5, 5, +1, "a2"),
    (6, 6, +1, "b2"),
    (6, 9, +1, "e5"),
    (7, 7, +1, "b2"),
    (7, 13, +1, "e5"),
    (8, 2, +1, "e6"),
    (8, 8, +1, "b2"),
    (9, 6, +1, "e6"),
    (9, 9, +1, "b2"),
    (10, 10, +1, "a2"),
    (11, 11, +1, "b2"),
    (11, 14, +1, "e5"),
    (12, 3, +1, "e6"),
    (12, 12, +1, "b2"),
    (13, 7, +1, "e6"),
    (13, 13, +1, "b2"),
    (14, 11, +1, "e6"),
    (14, 14, +1, "b2"),
    (15, 15, +1, "a2"),
)

SIMILARITY = (
    (0, 0, +1, "s0"),
    (1, 1, -1, "s0"),
    (2, 4, +1, "s0"),
    (3, 5, +1, "s0"),
    (4, 3, +1, "s1"),
    (4, 6, +1, "s2"),
    (4, 9, +1, "s3"),
    (4, 12, +1, "s4"),
    (5, 2, +1, "s0"),
    (6, 8, +1, "s0"),
    (7, 3, +1, "s5"),
    (7, 6, +1, "s6"),
    (7, 9, -1, "s5"),
    (7, 12, +1, "s6"),
    (8, 10, +1, "s0"),
    (9, 3, +1, "s7"),
    (9, 6, +1, "s8"),
    (9, 9, +1, "s9"),
    (9, 12, +1, "s10"),
    (10, 13, +1, "s0"),
    (11, 14, +1, "s0"),
    (12, 3, +1, "s11"),
    (12, 12, +1, "s12"),
    (13, 7, -1, "s0"),  # sign required for the intertwining property
    (14, 11, +1, "s0"),
    (15, 15, -1, "s0"),
)
