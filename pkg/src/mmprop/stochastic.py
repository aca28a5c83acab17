"""Shadow-fading draws and spatially consistent LOS/shadowing maps.

A map holds two unit-variance Gaussian fields with exponential spatial
correlation. The LOS state of a cell is a Gaussian-copula threshold of the
first field against the deterministic LOS probability at that cell, so each
cell keeps the exact marginal P_LOS(d). The second field, scaled by sigma, is
the shadowing in dB.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np
from scipy.special import ndtri

from . import kernels
from .core import DomainError, Scenario, LinkGeometry
from .los_probability import default_los_model, get_los_model
from .pathloss import get_path_loss_model, mean_path_loss

#: Artifact defaults, not measured values. RMa has no default.
DEFAULT_CORRELATION_DISTANCE = {
    Scenario.UMI_STREET: 12.0,
    Scenario.UMI_OPEN_SQUARE: 12.0,
    Scenario.UMA: 50.0,
    Scenario.INH_MIXED: 10.0,
    Scenario.INH_OPEN: 10.0,
    Scenario.INH_MALL: 10.0,
}


def make_rng(seed=None) -> np.random.Generator:
    """Random source for every sampling routine; a 64-bit seed reproduces it."""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


@dataclass(frozen=True)
class ShadowFading:
    """Zero-mean Gaussian shadowing in dB."""

    sigma: float

    def __post_init__(self):
        if not (self.sigma >= 0 and math.isfinite(self.sigma)):
            raise DomainError(f"shadow-fading sigma must be finite and >= 0 dB (got {self.sigma})")

    def sample(self, rng, size=None):
        rng = make_rng(rng)
        if size is None:
            return self.sigma * float(rng.standard_normal())
        return self.sigma * rng.standard_normal(size)


def sample_path_loss(model, fc, geom: LinkGeometry, env=None, rng=None, sigma=None, size=None,
                     strict=False):
    """Mean path loss plus one (or ``size``) shadow-fading draws.

    ``sigma`` overrides the registered value; rows without one need it.
    """
    entry = get_path_loss_model(model)
    s = entry.sigma_sf if sigma is None else sigma
    if s is None:
        raise DomainError(f"{entry.id} has no shadow-fading sigma; pass sigma explicitly")
    mean = mean_path_loss(entry.id, fc, geom, env, strict=strict)
    draw = ShadowFading(float(s)).sample(make_rng(rng), size)
    return mean + draw


@dataclass(frozen=True)
class GridSpec:
    """Regular grid of ``width`` x ``height`` square cells of side ``cell`` m.

    Column ``j`` spans x in ``[x0 + j*cell, x0 + (j+1)*cell)``; row ``i`` is the
    same along y.
    """

    width: int
    height: int
    cell: float
    correlation_distance: float
    origin: Tuple[float, float] = (0.0, 0.0)

    def __post_init__(self):
        if not self.correlation_distance > 0:
            raise DomainError(f"correlation distance must be > 0 m (got {self.correlation_distance})")
        if not self.cell > 0:
            raise DomainError(f"cell size must be > 0 m (got {self.cell})")
        if self.cell > self.correlation_distance / 2.0:
            raise DomainError(
                f"cell size {self.cell:g} m exceeds half the correlation distance "
                f"({self.correlation_distance:g} m)"
            )
        if int(self.width) < 1 or int(self.height) < 1:
            raise DomainError("grid needs at least one cell in each direction")
        object.__setattr__(self, "width", int(self.width))
        object.__setattr__(self, "height", int(self.height))
        object.__setattr__(self, "origin", (float(self.origin[0]), float(self.origin[1])))

    @classmethod
    def centered(cls, size, cell, correlation_distance, center=(0.0, 0.0)):
        """Square grid of ``size`` cells per side centered on ``center``."""
        half = size * cell / 2.0
        return cls(size, size, cell, correlation_distance, (center[0] - half, center[1] - half))

    @property
    def shape(self):
        return (self.height, self.width)

    @property
    def extent(self):
        x0, y0 = self.origin
        return x0, x0 + self.width * self.cell, y0, y0 + self.height * self.cell

    def x_centers(self):
        return self.origin[0] + (np.arange(self.width) + 0.5) * self.cell

    def y_centers(self):
        return self.origin[1] + (np.arange(self.height) + 0.5) * self.cell


def correlated_field(shape, cell, correlation_distance, rng):
    """Unit-variance field with correlation exp(-(|dx| + |dy|) / d_cor).

    White noise goes through a first-order recursive filter along each axis.
    The recursion starts in its stationary state, so every cell has unit
    variance without any empirical rescaling.
    """
    if not correlation_distance > 0:
        raise DomainError(f"correlation distance must be > 0 m (got {correlation_distance})")
    rho = math.exp(-cell / correlation_distance)
    white = make_rng(rng).standard_normal(shape)
    return kernels.ar1_filter_2d(white, rho, rho)


def _frozen(a):
    a = np.ascontiguousarray(a)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class SpatialGrid:
    """Generated map. Arrays are read-only and indexed ``[row (y), column (x)]``."""

    spec: GridSpec
    seed: Optional[int]
    bs_position: Tuple[float, float]
    los_model: str
    sigma: float
    los: np.ndarray = field(repr=False)
    shadow_db: np.ndarray = field(repr=False)
    p_los: np.ndarray = field(repr=False)

    def __post_init__(self):
        for name in ("los", "shadow_db", "p_los"):
            object.__setattr__(self, name, _frozen(getattr(self, name)))

    def query(self, x, y):
        return query_map(self, x, y)

    def rows(self):
        """Yield ``(x, y, los, shadow_db)`` per cell, row-major from the origin."""
        xs, ys = self.spec.x_centers(), self.spec.y_centers()
        for i, y in enumerate(ys):
            for j, x in enumerate(xs):
                yield float(x), float(y), bool(self.los[i, j]), float(self.shadow_db[i, j])


def generate_consistency_map(scenario, spec: GridSpec, shadow_sigma, los_model=None,
                             bs_position=(0.0, 0.0), seed=None, h_ue=1.5) -> SpatialGrid:
    """Spatially consistent LOS-state and shadowing map.

    ``los_model`` defaults to the TR 38.901 row of ``scenario``. The whole map
    is a pure function of ``(spec, seed)`` and the model arguments.
    """
    if not shadow_sigma >= 0:
        raise DomainError(f"shadow sigma must be >= 0 dB (got {shadow_sigma})")
    mid = default_los_model(scenario) if los_model is None else los_model
    entry = get_los_model(mid)
    rng = make_rng(seed)
    # drawing order is part of the reproducibility contract: LOS first
    z_los = correlated_field(spec.shape, spec.cell, spec.correlation_distance, rng)
    z_sh = correlated_field(spec.shape, spec.cell, spec.correlation_distance, rng)

    bx, by = float(bs_position[0]), float(bs_position[1])
    dx = spec.x_centers() - bx
    dy = spec.y_centers() - by
    d2d = np.hypot(dx[np.newaxis, :], dy[:, np.newaxis])
    p = np.asarray(entry.evaluate(d2d, h_ue), dtype=float)
    # Phi(z) < p  <=>  z < Phi^-1(p); the quantile form is exact at p in {0, 1}
    los = z_los < ndtri(p)
    return SpatialGrid(
        spec=spec,
        seed=seed if not isinstance(seed, np.random.Generator) else None,
        bs_position=(bx, by),
        los_model=str(entry.id),
        sigma=float(shadow_sigma),
        los=los,
        shadow_db=float(shadow_sigma) * z_sh,
        p_los=p,
    )


def query_map(grid: SpatialGrid, x, y):
    """LOS state of the containing cell and bilinearly interpolated shadowing.

    Scalars give ``(bool, float)``; arrays give arrays of the broadcast shape.
    Points on the far edge belong to the last cell.
    """
    xa, ya = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
    x0, x1, y0, y1 = grid.spec.extent
    inside = (xa >= x0) & (xa <= x1) & (ya >= y0) & (ya <= y1)
    if not np.all(inside):
        raise DomainError(f"query point outside map extent x[{x0:g}, {x1:g}] y[{y0:g}, {y1:g}]")
    cell = grid.spec.cell
    j = np.minimum(np.floor((xa - x0) / cell).astype(np.intp), grid.spec.width - 1)
    i = np.minimum(np.floor((ya - y0) / cell).astype(np.intp), grid.spec.height - 1)
    los = grid.los[i, j]
    shadow = kernels.bilinear(grid.shadow_db, x0, y0, cell, xa.ravel(), ya.ravel()).reshape(xa.shape)
    if xa.ndim == 0:
        return bool(los), float(shadow)
    return los, shadow
