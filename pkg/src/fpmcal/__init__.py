"""Self-calibration of illumination angles for Fourier ptychographic microscopy.

Two cooperating calibrators: a pre-processing brightfield stage that locates
the DC-interference circle in each image spectrum, and an in-loop spectral
correlation stage that refines angles during phase retrieval.  A forward-model
simulator provides ground truth for every claim.
"""

from .optics import (
    ComplexField,
    KVector,
    Pupil,
    SystemParams,
    fft2c,
    ifft2c,
    k_space_step,
    make_pupil,
    pupil_radius_pixels,
)

__version__ = "0.1.0"

__all__ = [
    "ComplexField",
    "KVector",
    "Pupil",
    "SystemParams",
    "fft2c",
    "ifft2c",
    "k_space_step",
    "make_pupil",
    "pupil_radius_pixels",
    "__version__",
]
