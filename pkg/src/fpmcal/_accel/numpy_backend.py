"""Pure-numpy radial line sampler, the fallback for the compiled kernel.

Vectorized gather with bilinear interpolation; candidates are processed in
chunks so peak memory stays bounded for large scans.
"""

from __future__ import annotations

import numpy as np

_CHUNK = 256


def radial_line_sums(
    spec: np.ndarray,
    centers: np.ndarray,
    angles: np.ndarray,
    radii: np.ndarray,
) -> np.ndarray:
    """Sum bilinear samples of ``spec`` along radial lines.

    For candidate center c and radius r the samples lie at
    ``(c_row + r*sin(a), c_col + r*cos(a))`` for each angle a; the result
    accumulates them over angles.

    Args:
        spec: (M, M) float64 image (a preprocessed spectrum magnitude).
        centers: (n_cand, 2) float64 candidate centers as (row, col).
        angles: (n_ang,) float64 line angles in radians.
        radii: (n_rad,) float64 sample radii in array bins.

    Returns:
        (n_cand, n_rad) float64 sums; rows are NaN for candidates whose
        sample set touches the array border (circle not fully inside).
    """
    spec = np.ascontiguousarray(spec, dtype=np.float64)
    centers = np.atleast_2d(np.asarray(centers, dtype=np.float64))
    angles = np.asarray(angles, dtype=np.float64)
    radii = np.asarray(radii, dtype=np.float64)
    m = spec.shape[0]
    sin_a = np.sin(angles)
    cos_a = np.cos(angles)

    out = np.empty((centers.shape[0], radii.size), dtype=np.float64)
    flat = spec.ravel()
    for lo in range(0, centers.shape[0], _CHUNK):
        hi = min(lo + _CHUNK, centers.shape[0])
        cy = centers[lo:hi, 0][:, None, None]
        cx = centers[lo:hi, 1][:, None, None]
        ys = cy + radii[None, None, :] * sin_a[None, :, None]
        xs = cx + radii[None, None, :] * cos_a[None, :, None]
        y0 = np.floor(ys).astype(np.intp)
        x0 = np.floor(xs).astype(np.intp)
        ok = (
            (y0 >= 0) & (y0 <= m - 2) & (x0 >= 0) & (x0 <= m - 2)
        ).all(axis=(1, 2))
        y0c = np.clip(y0, 0, m - 2)
        x0c = np.clip(x0, 0, m - 2)
        fy = ys - y0
        fx = xs - x0
        base = y0c * m + x0c
        v00 = flat[base]
        v01 = flat[base + 1]
        v10 = flat[base + m]
        v11 = flat[base + m + 1]
        vals = (
            v00 * (1.0 - fy) * (1.0 - fx)
            + v01 * (1.0 - fy) * fx
            + v10 * fy * (1.0 - fx)
            + v11 * fy * fx
        )
        sums = vals.sum(axis=1)
        sums[~ok] = np.nan
        out[lo:hi] = sums
    return out
