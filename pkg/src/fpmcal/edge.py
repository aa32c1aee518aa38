"""Circular edge detection primitives: radial profiles and edge metrics.

A circle of radius R in a spectrum magnitude image shows up as a drop along
every radial line from its center.  Candidate centers are scored by summing
radial derivatives over many lines: the first-derivative metric (evaluated
at r = R) and the second-derivative metric (evaluated at r = R + sigma,
where sigma is the Gaussian blur width applied during preprocessing).  Both
peak at the true center.  Since the edge is a drop, the first-derivative
metric accumulates the negated derivative so that larger means stronger.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._accel import radial_line_sums

__all__ = [
    "EdgeMetrics",
    "RadialProfileSet",
    "candidate_grid",
    "conjugate_exclusion",
    "edge_metrics",
    "line_angles",
    "sample_profiles",
    "profile_derivatives",
]


@dataclass(frozen=True)
class RadialProfileSet:
    """Angle-summed radial samples around candidate centers.

    ``samples[c, j]`` is the sum over lines of the spectrum interpolated at
    radius ``radii[j]`` from ``centers_px[c]``; NaN rows mark candidates
    whose circle leaves the array.
    """

    centers_px: np.ndarray  # (n_cand, 2) as (row, col)
    angles: np.ndarray  # (n_ang,) radians
    radii: np.ndarray  # (n_rad,) array bins, uniform spacing
    samples: np.ndarray  # (n_cand, n_rad)

    @property
    def step_px(self) -> float:
        return float(self.radii[1] - self.radii[0])


@dataclass(frozen=True)
class EdgeMetrics:
    """E1/E2 maps over a candidate grid plus the grid definition."""

    e1: np.ndarray  # (n_cand,) first-derivative metric at r = R
    e2: np.ndarray  # (n_cand,) second-derivative metric at r = R + sigma
    valid: np.ndarray  # (n_cand,) bool
    centers_px: np.ndarray  # (n_cand, 2)
    grid_shape: tuple[int, int] | None = None


def line_angles(
    n_lines: int,
    exclude_toward: float | None = None,
    exclude_half_angle: float | None = None,
) -> np.ndarray:
    """N radial line angles, optionally dropping an arc.

    The arc ``exclude_toward +- exclude_half_angle`` (radians) is removed,
    wrapping across 2*pi.
    """
    angles = np.arange(n_lines) * (2.0 * np.pi / n_lines)
    if exclude_toward is None or exclude_half_angle is None:
        return angles
    delta = np.angle(np.exp(1j * (angles - exclude_toward)))
    return angles[np.abs(delta) > exclude_half_angle]


def conjugate_exclusion(
    center_na: np.ndarray,
    na_obj: float,
    margin_deg: float = 10.0,
) -> tuple[float, float] | None:
    """Arc to exclude because the conjugate circle's edge overlaps ours.

    Returns (direction, half_angle) in radians, or None when the two
    circles (centered at +-k with radius NA_obj) do not intersect.  The
    direction points from the candidate center toward its conjugate.
    """
    mag = float(np.hypot(center_na[0], center_na[1]))
    if mag >= na_obj:
        return None
    direction = math.atan2(-center_na[1], -center_na[0])
    half = math.acos(min(1.0, mag / (2.0 * na_obj))) + math.radians(margin_deg)
    return direction, half


def candidate_grid(
    center_px: np.ndarray,
    half_extent_steps: int,
    step_px: float,
) -> tuple[np.ndarray, tuple[int, int]]:
    """Square candidate grid around ``center_px`` (row, col).

    Steps are in array bins; the grid is row-major with shape
    ``(2*half_extent_steps + 1,) * 2``.
    """
    offs = np.arange(-half_extent_steps, half_extent_steps + 1) * step_px
    dy, dx = np.meshgrid(offs, offs, indexing="ij")
    centers = np.column_stack(
        [center_px[0] + dy.ravel(), center_px[1] + dx.ravel()]
    )
    return centers, (offs.size, offs.size)


def sample_profiles(
    spec: np.ndarray,
    centers_px: np.ndarray,
    angles: np.ndarray,
    radii: np.ndarray,
    backend: str | None = None,
) -> RadialProfileSet:
    """Sample angle-summed radial profiles (hot path, kernel-backed)."""
    samples = radial_line_sums(spec, centers_px, angles, radii, backend=backend)
    return RadialProfileSet(
        centers_px=np.atleast_2d(centers_px),
        angles=np.asarray(angles, dtype=float),
        radii=np.asarray(radii, dtype=float),
        samples=samples,
    )


def profile_derivatives(profiles: RadialProfileSet) -> tuple[np.ndarray, np.ndarray]:
    """Central-difference first and second derivatives along the radius axis.

    Both outputs keep the input shape; the outermost samples (where the
    stencil does not fit) are NaN.
    """
    f = profiles.samples
    h = profiles.step_px
    d1 = np.full_like(f, np.nan)
    d2 = np.full_like(f, np.nan)
    d1[:, 1:-1] = (f[:, 2:] - f[:, :-2]) / (2.0 * h)
    d2[:, 1:-1] = (f[:, 2:] - 2.0 * f[:, 1:-1] + f[:, :-2]) / (h * h)
    return d1, d2


def edge_metrics(
    spec: np.ndarray,
    centers_px: np.ndarray,
    angles: np.ndarray,
    radius_px: float,
    sigma_px: float,
    step_px: float = 0.5,
    grid_shape: tuple[int, int] | None = None,
    backend: str | None = None,
) -> EdgeMetrics:
    """E1/E2 edge metrics for candidate centers.

    Only the five stencil radii needed for the two derivatives are sampled:
    E1 is the negated central difference of the angle-summed profile at
    r = R, E2 the second difference at r = R + sigma.
    """
    h = step_px
    radii = np.array(
        [
            radius_px - h,
            radius_px + h,
            radius_px + sigma_px - h,
            radius_px + sigma_px,
            radius_px + sigma_px + h,
        ]
    )
    prof = sample_profiles(spec, centers_px, angles, radii, backend=backend)
    f = prof.samples
    e1 = -(f[:, 1] - f[:, 0]) / (2.0 * h)
    e2 = (f[:, 4] - 2.0 * f[:, 3] + f[:, 2]) / (h * h)
    valid = ~np.isnan(f[:, 0])
    return EdgeMetrics(
        e1=e1,
        e2=e2,
        valid=valid,
        centers_px=np.atleast_2d(centers_px),
        grid_shape=grid_shape,
    )
