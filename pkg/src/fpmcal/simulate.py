"""Forward-model simulator: objects, illuminators, perturbations, rendering.

Every calibration claim in this package is tested against stacks rendered
here, where the true illumination angles are known.  Rendering follows the
standard coherent model: the object spectrum is shifted by the illumination
spatial frequency, low-passed by the pupil, and the squared modulus of the
resulting field is recorded.  Fractional-bin shifts are applied exactly via
a real-space phase ramp, so true angles are not forced onto the grid.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.ndimage import gaussian_filter

from .errors import ConfigError, CoverageError, UnphysicalNAError
from .optics import ComplexField, Pupil, SystemParams, fft2c, ifft2c

__all__ = [
    "BarGroup",
    "BarTargetLayout",
    "GroundTruthObject",
    "IlluminatorModel",
    "ImageStack",
    "NoiseConfig",
    "Perturbation",
    "apply_perturbation",
    "build_illuminator",
    "make_object",
    "render_stack",
    "spectrum",
    "super_resolution_factor",
]


# --------------------------------------------------------------------------
# Illuminator geometry


@dataclass(frozen=True)
class IlluminatorModel:
    """Source geometry: nominal NA vectors plus bookkeeping.

    ``k_na`` holds one (NA_x, NA_y) row per source.  ``board_ids`` is all
    zeros for planar grids; dome illuminators assign each source to the
    circuit board that carries it.  ``usable`` marks sources that remain
    physical (|NA| < 1) after perturbations.
    """

    kind: str  # "planar-grid" or "dome-boards"
    k_na: np.ndarray  # (n, 2)
    board_ids: np.ndarray  # (n,) int
    pitch_na: float
    extent_na: float
    usable: np.ndarray  # (n,) bool
    perturbation: "Perturbation | dict[int, Perturbation] | None" = None

    @property
    def n_sources(self) -> int:
        return self.k_na.shape[0]


def _lattice_in_disk(pitch: float, extent: float) -> np.ndarray:
    if extent <= 0.0 or pitch <= 0.0:
        return np.zeros((1, 2))
    nmax = int(math.floor(extent / pitch))
    ii, jj = np.meshgrid(np.arange(-nmax, nmax + 1), np.arange(-nmax, nmax + 1), indexing="ij")
    pts = np.column_stack([ii.ravel(), jj.ravel()]).astype(float) * pitch
    keep = np.hypot(pts[:, 0], pts[:, 1]) <= extent + 1e-12
    pts = pts[keep]
    order = np.lexsort((pts[:, 1], pts[:, 0], np.round(np.sum(pts**2, axis=1) * 1e9)))
    return pts[order]


def build_illuminator(
    kind: str = "planar-grid",
    pitch_na: float = 0.041,
    extent_na: float = 0.41,
    center_radius_na: float | None = None,
) -> IlluminatorModel:
    """Construct a source geometry.

    Planar grids contain every lattice point of the given pitch with
    |NA| <= extent.  Dome illuminators put a planar grid on a central board
    (|NA| <= center_radius_na, default extent/3) and split the remaining
    annulus into four quadrant boards.
    """
    if extent_na >= 1.0:
        raise UnphysicalNAError(f"illumination extent {extent_na} NA is >= 1")
    if extent_na < 0.0:
        raise ConfigError("extent_na must be >= 0")
    pts = _lattice_in_disk(pitch_na, extent_na)
    if kind == "planar-grid":
        boards = np.zeros(pts.shape[0], dtype=int)
    elif kind == "dome-boards":
        r0 = extent_na / 3.0 if center_radius_na is None else center_radius_na
        r = np.hypot(pts[:, 0], pts[:, 1])
        theta = np.arctan2(pts[:, 1], pts[:, 0])
        quadrant = ((theta + math.pi / 4) % (2 * math.pi) // (math.pi / 2)).astype(int)
        boards = np.where(r <= r0 + 1e-12, 0, 1 + quadrant)
    else:
        raise ConfigError(f"unknown illuminator kind {kind!r}")
    return IlluminatorModel(
        kind=kind,
        k_na=pts,
        board_ids=boards,
        pitch_na=pitch_na,
        extent_na=extent_na,
        usable=np.ones(pts.shape[0], dtype=bool),
    )


@dataclass(frozen=True)
class Perturbation:
    """Misalignment applied about DC in NA space: scale, then rotate, then shift."""

    rotation_deg: float = 0.0
    shift_na: tuple[float, float] = (0.0, 0.0)
    scale: float = 1.0

    def matrix(self) -> np.ndarray:
        a = math.radians(self.rotation_deg)
        c, s = math.cos(a), math.sin(a)
        return self.scale * np.array([[c, -s], [s, c]])

    def apply(self, k_na: np.ndarray) -> np.ndarray:
        return k_na @ self.matrix().T + np.asarray(self.shift_na)


def apply_perturbation(
    model: IlluminatorModel,
    p: "Perturbation | dict[int, Perturbation]",
) -> IlluminatorModel:
    """Perturb nominal source positions (globally, or per dome board)."""
    if isinstance(p, Perturbation):
        new_k = p.apply(model.k_na)
    else:
        new_k = model.k_na.copy()
        for board, bp in p.items():
            mask = model.board_ids == board
            new_k[mask] = bp.apply(model.k_na[mask])
    usable = np.hypot(new_k[:, 0], new_k[:, 1]) < 1.0
    if not usable.all():
        warnings.warn(
            f"{int((~usable).sum())} source(s) pushed to |NA| >= 1; marked unusable",
            stacklevel=2,
        )
    return replace(model, k_na=new_k, usable=usable & model.usable, perturbation=p)


# --------------------------------------------------------------------------
# Ground-truth objects


@dataclass(frozen=True)
class BarGroup:
    """One 3-bar resolution group: dark bars on a bright background."""

    period_px: float
    row0: int
    col0: int
    n_bars: int
    bar_len_px: int


@dataclass(frozen=True)
class BarTargetLayout:
    """Where each bar group sits on the object grid (bars run along rows)."""

    groups: tuple[BarGroup, ...]
    grid_n: int
    pixel_um: float

    def period_um(self, group: BarGroup) -> float:
        return group.period_px * self.pixel_um


@dataclass(frozen=True)
class GroundTruthObject:
    """Complex object on the super-resolved grid plus its descriptor."""

    field: ComplexField  # real-space, (q*M, q*M)
    kind: str
    layout: BarTargetLayout | None = None

    @property
    def grid_n(self) -> int:
        return self.field.data.shape[0]


def _siemens_star(n: int, spokes: int = 36, phase_amp: float = 1.0) -> np.ndarray:
    c = n // 2
    y, x = np.mgrid[:n, :n]
    theta = np.arctan2(y - c, x - c)
    phase = phase_amp * np.sign(np.sin(spokes * theta))
    r = np.hypot(y - c, x - c)
    phase[r > 0.47 * n] = 0.0
    return np.exp(1j * phase)


def _random_smooth(n: int, rng: np.random.Generator, corr_px: float = 1.2) -> np.ndarray:
    amp = gaussian_filter(rng.standard_normal((n, n)), corr_px)
    amp = (amp - amp.min()) / (amp.max() - amp.min())
    amp = 0.55 + 0.45 * amp
    pha = gaussian_filter(rng.standard_normal((n, n)), corr_px)
    pha = (pha - pha.mean()) / max(np.abs(pha).max(), 1e-12) * (0.9 * math.pi)
    return amp * np.exp(1j * pha)


def _bar_target(n: int, pixel_um: float, periods_px: tuple[float, ...]) -> tuple[np.ndarray, BarTargetLayout]:
    amp = np.ones((n, n))
    groups = []
    margin = max(8, n // 32)
    row = margin
    for period in periods_px:
        bar = max(1, int(round(period / 2)))
        period_px = 2 * bar
        n_bars = 3
        bar_len = min(6 * period_px, n // 4)
        height = n_bars * period_px
        if row + height + margin > n:
            break
        col0 = margin
        for b in range(n_bars):
            r0 = row + b * period_px
            amp[r0 : r0 + bar, col0 : col0 + bar_len] = 0.05
        groups.append(
            BarGroup(period_px=float(period_px), row0=row, col0=col0, n_bars=n_bars, bar_len_px=bar_len)
        )
        row += height + margin
    layout = BarTargetLayout(groups=tuple(groups), grid_n=n, pixel_um=pixel_um)
    return amp.astype(complex), layout


def make_object(
    kind: str,
    grid_n: int,
    pixel_um: float,
    seed: int = 0,
    bar_periods_px: tuple[float, ...] | None = None,
) -> GroundTruthObject:
    """Build a ground-truth object: amplitude in [0, 1], phase in [-pi, pi].

    Kinds: ``siemens-star-phase``, ``bar-target-amplitude``,
    ``random-smooth``.
    """
    layout = None
    if kind == "siemens-star-phase":
        data = _siemens_star(grid_n)
    elif kind == "random-smooth":
        data = _random_smooth(grid_n, np.random.default_rng(seed))
    elif kind == "bar-target-amplitude":
        periods = bar_periods_px or (32.0, 24.0, 16.0, 12.0, 8.0, 6.0, 4.0)
        data, layout = _bar_target(grid_n, pixel_um, tuple(periods))
    else:
        raise ConfigError(f"unknown object kind {kind!r}")
    return GroundTruthObject(field=ComplexField(data, "real"), kind=kind, layout=layout)


# --------------------------------------------------------------------------
# Rendering


@dataclass(frozen=True)
class NoiseConfig:
    """Optional measurement noise, applied after the forward model."""

    gaussian_rel: float = 0.0  # std as a fraction of the image mean
    poisson_photons: float | None = None  # expected photons at the image mean
    seed: int = 0


@dataclass(frozen=True)
class ImageStack:
    """Ordered intensity images with per-image expected angles.

    ``k_expected_na`` are the angles the calibrator starts from;
    ``k_true_na`` (simulation provenance) may differ when the expectation
    was perturbed.
    """

    images: np.ndarray  # (n, M, M) float64, non-negative
    k_expected_na: np.ndarray  # (n, 2)
    params: SystemParams
    k_true_na: np.ndarray | None = None
    board_ids: np.ndarray | None = None
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.images.ndim != 3:
            raise ConfigError("images must be (n, M, M)")
        if self.images.shape[0] != self.k_expected_na.shape[0]:
            raise ConfigError("one expected angle per image is required")
        if not np.isfinite(self.images).all() or (self.images < 0).any():
            raise ConfigError("intensities must be finite and non-negative")

    @property
    def n_images(self) -> int:
        return self.images.shape[0]


def super_resolution_factor(na_obj: float, na_illum: float) -> int:
    """Object-grid oversampling that keeps the shifted pupil alias-free."""
    q = math.ceil(2.0 * (na_obj + na_illum) / na_obj)
    return q + (q % 2)


def spectrum(image: np.ndarray) -> ComplexField:
    """Centered spectrum of an intensity image."""
    img = np.asarray(image, dtype=float)
    if not np.isfinite(img).all() or (img < 0).any():
        raise ConfigError("intensity image must be finite and non-negative")
    return ComplexField(fft2c(img), "k")


def _render_one(
    obj_spectrum: np.ndarray,
    k_na: np.ndarray,
    params: SystemParams,
    pupil: Pupil,
    ramp_row: np.ndarray,
    ramp_col: np.ndarray,
) -> np.ndarray:
    n_obj = obj_spectrum.shape[0]
    m = params.patch_pixels
    q = n_obj // m
    pos = np.asarray(k_na) / params.wavelength_um * params.fov_um  # array bins
    quant = np.round(pos).astype(int)
    frac = pos - quant
    c = n_obj // 2 - quant  # window center: object index of patch DC
    lo_r, lo_c = c[1] - m // 2, c[0] - m // 2
    window = obj_spectrum[lo_r : lo_r + m, lo_c : lo_c + m] / q
    if frac[0] != 0.0 or frac[1] != 0.0:
        w = ifft2c(window)
        w = w * np.exp(1j * 2.0 * np.pi * (frac[1] * ramp_row + frac[0] * ramp_col))
        window = fft2c(w)
    psi = ifft2c(window * pupil.array)
    return np.abs(psi) ** 2


def render_stack(
    obj: GroundTruthObject,
    model: IlluminatorModel,
    params: SystemParams,
    pupil: Pupil,
    noise: NoiseConfig | None = None,
    expected_model: IlluminatorModel | None = None,
) -> ImageStack:
    """Render the intensity stack for every usable source.

    Images are formed at the angles in ``model`` (the truth).  Expected
    angles default to the truth; pass ``expected_model`` (e.g. a perturbed
    copy) to give the calibrator a wrong starting map.
    """
    m = params.patch_pixels
    n_obj = obj.grid_n
    if n_obj % m != 0:
        raise CoverageError(f"object grid {n_obj} is not a multiple of the patch {m}")
    max_na = float(np.max(np.hypot(model.k_na[:, 0], model.k_na[:, 1]))) if model.n_sources else 0.0
    need = max_na / params.wavelength_um * params.fov_um + pupil.radius_px + 2
    if need > n_obj / 2:
        raise CoverageError(
            f"object bandwidth ({n_obj // 2} bins) cannot cover illumination "
            f"NA {max_na:.3f} plus the pupil ({need:.0f} bins needed)"
        )
    expected = model if expected_model is None else expected_model
    if expected.n_sources != model.n_sources:
        raise ConfigError("expected_model must match the true model source-for-source")

    keep = model.usable & expected.usable
    if not keep.all():
        warnings.warn(f"dropping {int((~keep).sum())} unusable source(s) from the stack", stacklevel=2)
    true_na = model.k_na[keep]
    expected_na = expected.k_na[keep]
    boards = model.board_ids[keep]

    obj_spec = fft2c(obj.field.data)
    idx = (np.arange(m) - m // 2) / m
    ramp_row = np.broadcast_to(idx[None, :], (m, m))  # varies along columns (x)
    ramp_col = np.broadcast_to(idx[:, None], (m, m))  # varies along rows (y)

    images = np.empty((true_na.shape[0], m, m))
    for i, k in enumerate(true_na):
        images[i] = _render_one(obj_spec, k, params, pupil, ramp_row, ramp_col)

    if noise is not None:
        rng = np.random.default_rng(noise.seed)
        if noise.poisson_photons:
            for i in range(images.shape[0]):
                mean = images[i].mean()
                if mean > 0:
                    scale = noise.poisson_photons / mean
                    images[i] = rng.poisson(images[i] * scale) / scale
        if noise.gaussian_rel > 0:
            for i in range(images.shape[0]):
                images[i] = images[i] + noise.gaussian_rel * images[i].mean() * rng.standard_normal((m, m))
            np.clip(images, 0.0, None, out=images)

    return ImageStack(
        images=images,
        k_expected_na=expected_na.copy(),
        params=params,
        k_true_na=true_na.copy(),
        board_ids=boards.copy(),
        meta={"object_kind": obj.kind},
    )
