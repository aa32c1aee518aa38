"""Optical units, k-space discretization, pupils, and centered transforms.

Conventions used everywhere in this package:

* Spatial frequencies ("k vectors") are stored in 1/um.  NA units (k times
  wavelength) and angle-grid steps (k / k_space_step) are derived views.
* Spectra are laid out with DC at the array center (``fftshift`` layout);
  the shift happens once, inside :func:`fft2c` / :func:`ifft2c`.
* Transforms are unitary (1/sqrt(N) each direction) so energies match
  across domains.
* One spectrum array bin spans ``1/fov`` in 1/um.  The smallest angle
  change the data can resolve is ``k_space_step = 2/fov``, i.e. two array
  bins; calibration searches step on that coarser lattice while radii and
  blur widths are measured in array bins.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import ApertureExceedsGridError, ConfigError

__all__ = [
    "SystemParams",
    "KVector",
    "Pupil",
    "ComplexField",
    "fft2c",
    "ifft2c",
    "k_space_step",
    "pupil_radius_pixels",
    "make_pupil",
]


@dataclass(frozen=True)
class SystemParams:
    """Optical constants that fix every unit conversion.

    Attributes:
        na_obj: objective numerical aperture, in (0, 1).
        wavelength_um: illumination wavelength in um.
        pixel_size_um: camera pixel pitch in um (after any binning).
        magnification: total system magnification.
        patch_pixels: side length M of the square processing patch (even, >= 64).
    """

    na_obj: float
    wavelength_um: float
    pixel_size_um: float
    magnification: float
    patch_pixels: int

    def __post_init__(self):
        if not 0.0 < self.na_obj < 1.0:
            raise ConfigError(f"na_obj must be in (0, 1), got {self.na_obj}")
        if self.wavelength_um <= 0.0:
            raise ConfigError(f"wavelength_um must be > 0, got {self.wavelength_um}")
        if self.pixel_size_um <= 0.0:
            raise ConfigError(f"pixel_size_um must be > 0, got {self.pixel_size_um}")
        if self.magnification <= 0.0:
            raise ConfigError(f"magnification must be > 0, got {self.magnification}")
        m = self.patch_pixels
        if m < 64 or m % 2 != 0:
            raise ConfigError(f"patch_pixels must be even and >= 64, got {m}")

    @property
    def fov_um(self) -> float:
        """Object-side field of view of the patch in um."""
        return self.patch_pixels * self.pixel_size_um / self.magnification

    @property
    def k_step(self) -> float:
        """Finest resolvable illumination-angle step, 2/fov in 1/um."""
        return 2.0 / self.fov_um

    @property
    def na_step(self) -> float:
        """:attr:`k_step` expressed in NA units."""
        return self.k_step * self.wavelength_um

    @property
    def array_bin(self) -> float:
        """Width of one spectrum array bin in 1/um (= k_step / 2)."""
        return 1.0 / self.fov_um

    def with_patch(self, patch_pixels: int) -> "SystemParams":
        return replace(self, patch_pixels=patch_pixels)


def k_space_step(params: SystemParams) -> float:
    """Angle-search discretization 2/fov in 1/um."""
    return params.k_step


def pupil_radius_pixels(params: SystemParams) -> float:
    """Pupil radius (NA_obj / wavelength) in spectrum array bins."""
    return params.na_obj / params.wavelength_um * params.fov_um


@dataclass(frozen=True)
class KVector:
    """An illumination spatial frequency (kx, ky) in 1/um."""

    kx: float
    ky: float

    @classmethod
    def from_na(cls, nax: float, nay: float, wavelength_um: float) -> "KVector":
        return cls(nax / wavelength_um, nay / wavelength_um)

    @classmethod
    def from_steps(cls, sx: float, sy: float, params: SystemParams) -> "KVector":
        dk = params.k_step
        return cls(sx * dk, sy * dk)

    def na(self, wavelength_um: float) -> tuple[float, float]:
        return (self.kx * wavelength_um, self.ky * wavelength_um)

    def na_magnitude(self, wavelength_um: float) -> float:
        return math.hypot(self.kx, self.ky) * wavelength_um

    def steps(self, params: SystemParams) -> tuple[float, float]:
        dk = params.k_step
        return (self.kx / dk, self.ky / dk)

    def __add__(self, other: "KVector") -> "KVector":
        return KVector(self.kx + other.kx, self.ky + other.ky)

    def __sub__(self, other: "KVector") -> "KVector":
        return KVector(self.kx - other.kx, self.ky - other.ky)

    def as_array(self) -> np.ndarray:
        return np.array([self.kx, self.ky], dtype=float)


def fft2c(field: np.ndarray) -> np.ndarray:
    """Centered unitary 2D FFT (DC ends up at the array center)."""
    return np.fft.fftshift(np.fft.fft2(np.fft.ifftshift(field), norm="ortho"))


def ifft2c(spectrum: np.ndarray) -> np.ndarray:
    """Inverse of :func:`fft2c`."""
    return np.fft.fftshift(np.fft.ifft2(np.fft.ifftshift(spectrum), norm="ortho"))


@dataclass(frozen=True)
class ComplexField:
    """A complex M x M field tagged with the domain it lives in."""

    data: np.ndarray
    domain: str  # "real" or "k"

    def __post_init__(self):
        if self.domain not in ("real", "k"):
            raise ConfigError(f"domain must be 'real' or 'k', got {self.domain!r}")
        if self.data.ndim != 2 or self.data.shape[0] != self.data.shape[1]:
            raise ConfigError(f"field must be square 2D, got shape {self.data.shape}")

    def to_k(self) -> "ComplexField":
        if self.domain == "k":
            return self
        return ComplexField(fft2c(self.data), "k")

    def to_real(self) -> "ComplexField":
        if self.domain == "real":
            return self
        return ComplexField(ifft2c(self.data), "real")

    def energy(self) -> float:
        return float(np.sum(np.abs(self.data) ** 2))


@dataclass(frozen=True)
class Pupil:
    """Ideal low-pass pupil: unit modulus on a centered disk, zero outside."""

    array: np.ndarray  # complex M x M
    radius_px: float  # in spectrum array bins
    support: np.ndarray  # bool M x M, 1 exactly where |k| <= radius


def _radius_grid(m: int) -> np.ndarray:
    c = m // 2
    y, x = np.ogrid[:m, :m]
    return np.hypot(y - c, x - c)


def make_pupil(params: SystemParams, radius_override: float | None = None) -> Pupil:
    """Build the ideal circular pupil, centered at DC.

    ``radius_override`` replaces the nominal radius from the system
    constants (used when the magnification or NA is known to be off).
    """
    m = params.patch_pixels
    radius = pupil_radius_pixels(params) if radius_override is None else float(radius_override)
    if radius <= 0.0:
        raise ApertureExceedsGridError(f"pupil radius must be > 0, got {radius}")
    if radius >= m / 2:
        raise ApertureExceedsGridError(
            f"pupil radius {radius:.2f} px does not fit in a {m}x{m} spectrum"
        )
    support = _radius_grid(m) <= radius
    return Pupil(array=support.astype(np.complex128), radius_px=radius, support=support)
