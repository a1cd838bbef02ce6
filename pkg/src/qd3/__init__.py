"""Numerical workbench for the q-deformed D3(1) open vertex model.

Submodules, bottom-up: ``params``, ``la``, ``local_ops``, ``chain``,
``verify``, ``spectra``, ``cli``.
"""
__version__ = "0.1.0"

from .params import BoundaryParams, ModelParams, default_params, validate  # noqa: E402

__all__ = ["BoundaryParams", "ModelParams", "default_params", "validate", "__version__"]
