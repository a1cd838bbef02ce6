"""Exception types shared across the package."""


class Qd3Error(Exception):
    pass


class ZeroDivisor(Qd3Error):
    pass


class ExhaustedRetries(Qd3Error):
    pass


class InvalidParams(Qd3Error):
    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


class DimensionMismatch(Qd3Error):
    pass


class DuplicateSlot(Qd3Error):
    pass


class BadSlot(Qd3Error):
    pass


class NotCommuting(Qd3Error):
    pass


class IllConditionedBasis(Qd3Error):
    pass


class BranchCut(Qd3Error):
    pass


class Singular(Qd3Error):
    pass


class SingularT0(Qd3Error):
    pass


class NearPole(Qd3Error):
    pass


class CoincidentRoots(Qd3Error):
    pass


class CountingViolation(Qd3Error):
    pass
