"""Residual assembly kernels with two interchangeable backends.

numpy_backend evaluates the two-point fluxes on vectorized batches and is
the reference path; numba_backend compiles the same math as scalar node
loops.  Both expose residual_1d and residual_2d with identical signatures
and are cross-checked in the test suite.
"""

import os

from ..errors import ConfigError

_CHOICES = ("auto", "numba", "numpy")
_loaded = {}


def resolve_backend(name=None):
    """Resolve a backend request to 'numba' or 'numpy'.

    None consults the BNES_KERNELS environment variable; 'auto' (the
    default) picks numba when it imports and falls back to numpy.
    """
    if name is None:
        name = os.environ.get("BNES_KERNELS", "auto").strip() or "auto"
    if name not in _CHOICES:
        raise ConfigError(
            f"unknown kernel backend {name!r}; expected one of {_CHOICES}")
    if name == "numpy":
        return "numpy"
    try:
        import numba  # noqa: F401
    except ImportError:
        if name == "numba":
            raise ConfigError("numba backend requested but numba is unavailable")
        return "numpy"
    return "numba"


def get_backend(name=None):
    """Kernel module for the resolved backend name."""
    resolved = resolve_backend(name)
    mod = _loaded.get(resolved)
    if mod is None:
        if resolved == "numba":
            from . import numba_backend as mod
        else:
            from . import numpy_backend as mod
        _loaded[resolved] = mod
    return mod
