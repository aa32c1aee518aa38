# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled radial line sampler (see numpy_backend for the contract)."""

import numpy as np

cimport numpy as cnp
from libc.math cimport cos, floor, sin

cnp.import_array()


def radial_line_sums(spec, centers, angles, radii):
    spec = np.ascontiguousarray(spec, dtype=np.float64)
    centers = np.ascontiguousarray(np.atleast_2d(centers), dtype=np.float64)
    angles = np.ascontiguousarray(angles, dtype=np.float64)
    radii = np.ascontiguousarray(radii, dtype=np.float64)
    out = np.zeros((centers.shape[0], radii.shape[0]), dtype=np.float64)
    _radial_line_sums(spec, centers, angles, radii, out)
    return out


cdef void _radial_line_sums(
    double[:, ::1] spec,
    double[:, ::1] centers,
    double[::1] angles,
    double[::1] radii,
    double[:, ::1] out,
) noexcept nogil:
    cdef Py_ssize_t m = spec.shape[0]
    cdef Py_ssize_t n_cand = centers.shape[0]
    cdef Py_ssize_t n_ang = angles.shape[0]
    cdef Py_ssize_t n_rad = radii.shape[0]
    cdef Py_ssize_t c, a, r, y0, x0
    cdef double cy, cx, sa, ca, ys, xs, fy, fx, v
    cdef bint bad

    for c in range(n_cand):
        cy = centers[c, 0]
        cx = centers[c, 1]
        bad = 0
        for a in range(n_ang):
            sa = sin(angles[a])
            ca = cos(angles[a])
            for r in range(n_rad):
                ys = cy + radii[r] * sa
                xs = cx + radii[r] * ca
                y0 = <Py_ssize_t>floor(ys)
                x0 = <Py_ssize_t>floor(xs)
                if y0 < 0 or y0 > m - 2 or x0 < 0 or x0 > m - 2:
                    bad = 1
                    break
                fy = ys - y0
                fx = xs - x0
                v = (
                    spec[y0, x0] * (1.0 - fy) * (1.0 - fx)
                    + spec[y0, x0 + 1] * (1.0 - fy) * fx
                    + spec[y0 + 1, x0] * fy * (1.0 - fx)
                    + spec[y0 + 1, x0 + 1] * fy * fx
                )
                out[c, r] += v
            if bad:
                break
        if bad:
            for r in range(n_rad):
                out[c, r] = <double>NAN


cdef extern from "math.h":
    double NAN
