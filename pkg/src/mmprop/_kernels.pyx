# cython: language_level=3
"""Compiled inner loops for spatial-map generation and lookup.

Arithmetic is written in the same order as ``_kernels_py`` so both backends
produce bit-identical results.
"""
import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, floor

cnp.import_array()


def ar1_filter_2d(field, double rho_x, double rho_y):
    """Separable first-order recursive filter (x along rows, then y).

    Each pass maps unit-variance white noise to a unit-variance field with
    autocorrelation ``rho**lag`` along that axis.
    """
    cdef cnp.ndarray[cnp.float64_t, ndim=2] a = np.array(field, dtype=np.float64, order="C", copy=True)
    cdef double[:, ::1] v = a
    cdef Py_ssize_t ny = v.shape[0], nx = v.shape[1], i, j
    cdef double sx = sqrt(1.0 - rho_x * rho_x)
    cdef double sy = sqrt(1.0 - rho_y * rho_y)
    with nogil:
        for i in range(ny):
            for j in range(1, nx):
                v[i, j] = rho_x * v[i, j - 1] + sx * v[i, j]
        for i in range(1, ny):
            for j in range(nx):
                v[i, j] = rho_y * v[i - 1, j] + sy * v[i, j]
    return a


def bilinear(field, double x0, double y0, double cell, xs, ys):
    """Bilinear interpolation between cell centers, clamped at the border."""
    cdef const double[:, ::1] v = np.ascontiguousarray(field, dtype=np.float64)
    cdef const double[::1] px = np.ascontiguousarray(xs, dtype=np.float64).ravel()
    cdef const double[::1] py = np.ascontiguousarray(ys, dtype=np.float64).ravel()
    cdef Py_ssize_t n = px.shape[0], k, i0, j0
    cdef Py_ssize_t ny = v.shape[0], nx = v.shape[1]
    out_arr = np.empty(n, dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef double u, w, tx, ty, top, bottom
    with nogil:
        for k in range(n):
            u = (px[k] - x0) / cell - 0.5
            w = (py[k] - y0) / cell - 0.5
            if u < 0.0:
                u = 0.0
            if u > nx - 1:
                u = nx - 1
            if w < 0.0:
                w = 0.0
            if w > ny - 1:
                w = ny - 1
            j0 = <Py_ssize_t>floor(u)
            i0 = <Py_ssize_t>floor(w)
            if j0 > nx - 2:
                j0 = nx - 2
            if i0 > ny - 2:
                i0 = ny - 2
            if j0 < 0:
                j0 = 0
            if i0 < 0:
                i0 = 0
            tx = u - j0
            ty = w - i0
            if nx == 1:
                tx = 0.0
            if ny == 1:
                ty = 0.0
            bottom = (1.0 - tx) * v[i0, j0] + tx * v[i0, j0 + (nx > 1)]
            top = (1.0 - tx) * v[i0 + (ny > 1), j0] + tx * v[i0 + (ny > 1), j0 + (nx > 1)]
            out[k] = (1.0 - ty) * bottom + ty * top
    return out_arr
