"""Radial-sampling kernel with a compiled core and a numpy fallback.

The compiled extension is preferred when it imports cleanly; setting the
environment variable ``FPMCAL_NO_ACCEL=1`` before import forces the numpy
fallback (useful for benchmarking and debugging).
"""

from __future__ import annotations

import os

from . import numpy_backend

_BACKENDS = {"numpy": numpy_backend.radial_line_sums}

if not os.environ.get("FPMCAL_NO_ACCEL"):
    try:
        from . import _radial_cy

        _BACKENDS["cython"] = _radial_cy.radial_line_sums
    except ImportError:
        pass

BACKEND = "cython" if "cython" in _BACKENDS else "numpy"


def available_backends() -> tuple[str, ...]:
    return tuple(sorted(_BACKENDS))


def radial_line_sums(spec, centers, angles, radii, backend: str | None = None):
    """Dispatch to the selected backend (see numpy_backend for the contract)."""
    return _BACKENDS[backend or BACKEND](spec, centers, angles, radii)
