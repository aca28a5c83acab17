"""Pure-Python (numpy) fallback for :mod:`mmprop._kernels`.

Loops run over one axis and vectorize across the other; the arithmetic order
matches the compiled kernels exactly.
"""
import math

import numpy as np


def ar1_filter_2d(field, rho_x, rho_y):
    a = np.array(field, dtype=np.float64, order="C", copy=True)
    sx = math.sqrt(1.0 - rho_x * rho_x)
    sy = math.sqrt(1.0 - rho_y * rho_y)
    for j in range(1, a.shape[1]):
        a[:, j] = rho_x * a[:, j - 1] + sx * a[:, j]
    for i in range(1, a.shape[0]):
        a[i] = rho_y * a[i - 1] + sy * a[i]
    return a


def bilinear(field, x0, y0, cell, xs, ys):
    v = np.ascontiguousarray(field, dtype=np.float64)
    ny, nx = v.shape
    u = np.clip((np.ravel(xs).astype(np.float64) - x0) / cell - 0.5, 0.0, nx - 1)
    w = np.clip((np.ravel(ys).astype(np.float64) - y0) / cell - 0.5, 0.0, ny - 1)
    j0 = np.clip(np.floor(u).astype(np.intp), 0, max(nx - 2, 0))
    i0 = np.clip(np.floor(w).astype(np.intp), 0, max(ny - 2, 0))
    tx = u - j0 if nx > 1 else np.zeros_like(u)
    ty = w - i0 if ny > 1 else np.zeros_like(w)
    j1 = j0 + (nx > 1)
    i1 = i0 + (ny > 1)
    bottom = (1.0 - tx) * v[i0, j0] + tx * v[i0, j1]
    top = (1.0 - tx) * v[i1, j0] + tx * v[i1, j1]
    return (1.0 - ty) * bottom + ty * top
