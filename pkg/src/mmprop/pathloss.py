"""Deterministic mean path loss models.

Generic families (CI, CIF, CIH, ABG, dual-slope) plus the composite formulas
published by the standards bodies. Every evaluator returns the mean loss in dB;
shadow fading is sampled separately in :mod:`mmprop.stochastic`.

Distance arguments accept scalars or numpy arrays.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Callable, Optional, Union

import numpy as np

from .core import (
    METIS_UMA_ENVIRONMENT,
    RMA_ENVIRONMENT,
    SPEED_OF_LIGHT,
    ApplicabilityError,
    ApplicabilityRange,
    ApplicabilityWarning,
    DomainError,
    EnvironmentConstants,
    Family,
    LinkGeometry,
    ModelId,
    Org,
    Scenario,
    UnknownModelError,
    Visibility,
    as_ghz,
)

log10 = np.log10


def _result(x, like):
    x = np.asarray(x, dtype=float)
    return float(x) if np.ndim(like) == 0 else x


def _distance(d, minimum=1.0, name="d"):
    a = np.asarray(d, dtype=float)
    if np.any(~np.isfinite(a)):
        raise DomainError(f"{name} must be finite")
    if minimum is None:
        if np.any(a <= 0):
            raise DomainError(f"{name} must be > 0 m")
    elif np.any(a < minimum):
        raise DomainError(f"{name} below {minimum:g} m reference (got {np.min(a):g})")
    return a


# --------------------------------------------------------------------------
# parameter sets


@dataclass(frozen=True)
class CIParams:
    n: float
    sigma_sf: float = 0.0

    def __post_init__(self):
        if self.n <= 0:
            raise DomainError("path loss exponent must be > 0")


@dataclass(frozen=True)
class CIFParams:
    n: float
    b: float
    f0: float
    sigma_sf: float = 0.0

    def __post_init__(self):
        if self.f0 <= 0:
            raise DomainError("f0 must be > 0 GHz")

    def exponent(self, fc):
        return self.n * (1.0 + self.b * (fc - self.f0) / self.f0)


@dataclass(frozen=True)
class CIHParams:
    n: float
    btx: float
    hb0: float
    sigma_sf: float = 0.0

    def __post_init__(self):
        if self.hb0 <= 0:
            raise DomainError("reference BS height must be > 0 m")

    def exponent(self, h_bs):
        return self.n * (1.0 + self.btx * (h_bs - self.hb0) / self.hb0)


@dataclass(frozen=True)
class ABGParams:
    alpha: float
    beta: float
    gamma: float
    sigma_sf: float = 0.0

    def __post_init__(self):
        if self.alpha <= 0:
            raise DomainError("alpha must be > 0")


@dataclass(frozen=True)
class DualSlopeParams:
    """Two-slope model. For ABG only ``second.alpha`` is used after the break."""

    family: str  # "cif" | "abg"
    first: Union[CIFParams, ABGParams]
    second: Union[CIFParams, ABGParams]
    dbp: float
    sigma_sf: float = 0.0

    def __post_init__(self):
        if self.family not in ("cif", "abg"):
            raise DomainError("dual-slope family must be 'cif' or 'abg'")
        if self.dbp <= 1.0:
            raise DomainError("breakpoint distance must exceed 1 m")

    @classmethod
    def cif(cls, n1, b1, n2, b2, f0, dbp, sigma_sf=0.0):
        return cls("cif", CIFParams(n1, b1, f0), CIFParams(n2, b2, f0), dbp, sigma_sf)

    @classmethod
    def abg(cls, alpha1, beta1, gamma, alpha2, dbp, sigma_sf=0.0):
        return cls("abg", ABGParams(alpha1, beta1, gamma), ABGParams(alpha2, 0.0, 0.0), dbp, sigma_sf)


# --------------------------------------------------------------------------
# generic families


def fspl_1m(fc):
    """Free-space path loss at 1 m: 32.4 + 20 log10(fc)."""
    return 32.4 + 20.0 * math.log10(as_ghz(fc))


def pl_ci(fc, d, p: CIParams):
    """Close-in model anchored at the 1 m free-space loss."""
    dd = _distance(d)
    return _result(fspl_1m(fc) + 10.0 * p.n * log10(dd), d)


def pl_cif(fc, d, p: CIFParams):
    """CI with an exponent linear in (fc - f0)/f0."""
    dd = _distance(d)
    fc = as_ghz(fc)
    return _result(fspl_1m(fc) + 10.0 * p.exponent(fc) * log10(dd), d)


def pl_cih(fc, d, h_bs, p: CIHParams):
    """CI with an exponent linear in the BS height offset from ``hb0``."""
    if not 10.0 <= h_bs <= 150.0:
        raise DomainError(f"CIH model requires 10 m <= hBS <= 150 m (got {h_bs})")
    dd = _distance(d)
    return _result(fspl_1m(fc) + 10.0 * p.exponent(h_bs) * log10(dd), d)


def pl_abg(fc, d, p: ABGParams):
    """Floating-intercept (alpha-beta-gamma) model."""
    dd = _distance(d)
    fc = as_ghz(fc)
    return _result(10.0 * p.alpha * log10(dd) + p.beta + 10.0 * p.gamma * math.log10(fc), d)


def _single_slope(fc, d, family, p):
    if family == "cif":
        return fspl_1m(fc) + 10.0 * p.exponent(fc) * log10(d)
    return 10.0 * p.alpha * log10(d) + p.beta + 10.0 * p.gamma * math.log10(fc)


def _second_slope(fc, family, p):
    if family == "cif":
        return 10.0 * p.exponent(fc)
    return 10.0 * p.alpha


def pl_dual_slope(fc, d, p: DualSlopeParams):
    """Dual-slope CIF/ABG, continuous at the breakpoint by construction."""
    dd = _distance(d)
    fc = as_ghz(fc)
    pre = _single_slope(fc, np.minimum(dd, p.dbp), p.family, p.first)
    post = _second_slope(fc, p.family, p.second) * log10(np.maximum(dd, p.dbp) / p.dbp)
    return _result(pre + post, d)


# --------------------------------------------------------------------------
# breakpoints


def _effective_heights(h_bs, h_ue):
    if h_bs <= 1.0 or h_ue <= 1.0:
        raise DomainError(f"breakpoint needs hBS, hUE > 1 m (got {h_bs}, {h_ue})")
    return h_bs - 1.0, h_ue - 1.0


def breakpoint_tr38901(fc, h_bs, h_ue):
    """d'BP = 4 h'BS h'UE fc / c with effective heights h - 1 m."""
    hb, hu = _effective_heights(h_bs, h_ue)
    return 4.0 * hb * hu * as_ghz(fc) * 1e9 / SPEED_OF_LIGHT


def breakpoint_metis(fc, h_bs, h_ue):
    """METIS frequency-scaled breakpoint: 0.87 exp(-log10(fc)/0.65) 4 h'BS h'UE / lambda."""
    fc = as_ghz(fc)
    hb, hu = _effective_heights(h_bs, h_ue)
    wavelength = SPEED_OF_LIGHT / (fc * 1e9)
    return 0.87 * math.exp(-math.log10(fc) / 0.65) * 4.0 * hb * hu / wavelength


def breakpoint_itur_rma(fc, h_bs, h_ue):
    """dBP = 2 pi hBS hUE fc / c (actual, not effective, heights)."""
    if h_bs <= 0 or h_ue <= 0:
        raise DomainError("antenna heights must be > 0 m")
    return 2.0 * math.pi * h_bs * h_ue * as_ghz(fc) * 1e9 / SPEED_OF_LIGHT


# --------------------------------------------------------------------------
# 3GPP TR 38.901 / TR 36.873 composites


def _tr38901_los(fc, d2d, d3d, h_bs, h_ue, intercept, slope1, correction):
    fc = as_ghz(fc)
    d2 = np.asarray(d2d, dtype=float)
    d3 = _distance(d3d, None, "d3D")
    dbp = breakpoint_tr38901(fc, h_bs, h_ue)
    flog = 20.0 * math.log10(fc)
    pl1 = intercept + slope1 * log10(d3) + flog
    pl2 = intercept + 40.0 * log10(d3) + flog - correction * math.log10(dbp**2 + (h_bs - h_ue) ** 2)
    # branch on d2D; both formulas take d3D
    return _result(np.where(d2 <= dbp, pl1, pl2), d3d)


def pl_tr38901_umi_los(fc, geom: LinkGeometry):
    return _tr38901_los(fc, geom.d2d, geom.d3d, geom.h_bs, geom.h_ue, 32.4, 21.0, 9.5)


def pl_tr38901_uma_los(fc, geom: LinkGeometry):
    return _tr38901_los(fc, geom.d2d, geom.d3d, geom.h_bs, geom.h_ue, 28.0, 22.0, 9.0)


def tr38901_breakpoint_mismatch(fc, h_bs, h_ue, scenario=Scenario.UMI_STREET):
    """PL2 - PL1 evaluated at d2D = d'BP (diagnostic; the formulas are not patched)."""
    if Scenario.parse(scenario) is Scenario.UMA:
        intercept, slope1, corr = 28.0, 22.0, 9.0
    else:
        intercept, slope1, corr = 32.4, 21.0, 9.5
    dbp = breakpoint_tr38901(fc, h_bs, h_ue)
    d3d = math.hypot(dbp, h_bs - h_ue)
    flog = 20.0 * math.log10(as_ghz(fc))
    pl1 = intercept + slope1 * math.log10(d3d) + flog
    pl2 = intercept + 40.0 * math.log10(d3d) + flog - corr * math.log10(dbp**2 + (h_bs - h_ue) ** 2)
    return pl2 - pl1


def tr38901_umi_nlos_raw(fc, d3d, h_ue):
    d = _distance(d3d, None, "d3D")
    return _result(35.3 * log10(d) + 22.4 + 21.3 * math.log10(as_ghz(fc)) - 0.3 * (h_ue - 1.5), d3d)


def tr38901_uma_nlos_raw(fc, d3d, h_ue):
    d = _distance(d3d, None, "d3D")
    return _result(13.54 + 39.08 * log10(d) + 20.0 * math.log10(as_ghz(fc)) - 0.6 * (h_ue - 1.5), d3d)


def tr38901_inh_los(fc, d3d):
    return pl_ci(fc, d3d, CIParams(1.73))


def tr38901_inh_nlos_raw(fc, d3d):
    d = _distance(d3d)
    return _result(17.30 + 38.3 * log10(d) + 24.9 * math.log10(as_ghz(fc)), d3d)


def pl_max_lower_bounded_nlos(fc, geom, los_model, nlos_model):
    """max(LOS, NLOS): the NLOS formula floored by the LOS path loss.

    ``los_model`` and ``nlos_model`` are callables ``(fc, geom) -> dB``.
    """
    return _result(np.maximum(los_model(fc, geom), nlos_model(fc, geom)), geom.d3d)


# --------------------------------------------------------------------------
# METIS


def metis_pl0(fc):
    """Path loss offset -1.38 log10(fc) + 3.34."""
    return -1.38 * math.log10(as_ghz(fc)) + 3.34


def pl_metis_umi_los(fc, d, h_bs=10.0, h_ue=1.5):
    """METIS UMi LOS: slope 22 up to the scaled breakpoint, slope 40 after,
    anchored at the pre-breakpoint value there."""
    fc = as_ghz(fc)
    dd = _distance(d, None)
    dbp = breakpoint_metis(fc, h_bs, h_ue)
    const = 28.0 + 20.0 * math.log10(fc) + metis_pl0(fc)
    pre = 22.0 * log10(np.minimum(dd, dbp)) + const
    post = 40.0 * log10(np.maximum(dd, dbp) / dbp)
    return _result(pre + post, d)


def metis_umi_nlos_raw(fc, d3d, h_ue):
    d = _distance(d3d, None, "d3D")
    return _result(36.7 * log10(d) + 23.15 + 26.0 * math.log10(as_ghz(fc)) - 0.3 * h_ue, d3d)


def pl_metis_umi_nlos(fc, d3d, h_ue, h_bs=10.0):
    los = pl_metis_umi_los(fc, d3d, h_bs, h_ue)
    return _result(np.maximum(los, metis_umi_nlos_raw(fc, d3d, h_ue)), d3d)


def metis_uma_nlos_raw(fc, d3d, h_bs, h_ue, env: EnvironmentConstants = METIS_UMA_ENVIRONMENT):
    d = _distance(d3d, None, "d3D")
    w, h = env.W, env.h
    val = (
        161.94
        - 7.1 * math.log10(w)
        + 7.5 * math.log10(h)
        - (24.37 - 3.7 * (h / h_bs) ** 2) * math.log10(h_bs)
        + (43.42 - 3.1 * math.log10(h_bs)) * (log10(d) - 3.0)
        + 20.0 * math.log10(as_ghz(fc))
        - 0.6 * h_ue
    )
    return _result(val, d3d)


def _d2d_from_d3d(d3d, h_bs, h_ue):
    d3 = np.asarray(d3d, dtype=float)
    return np.sqrt(np.maximum(d3 * d3 - (h_bs - h_ue) ** 2, 0.0))


def pl_metis_uma_nlos(fc, d3d, h_bs=25.0, h_ue=1.5, env: EnvironmentConstants = METIS_UMA_ENVIRONMENT):
    d2d = _d2d_from_d3d(d3d, h_bs, h_ue)
    los = _tr38901_los(fc, d2d, d3d, h_bs, h_ue, 28.0, 22.0, 9.0)
    return _result(np.maximum(los, metis_uma_nlos_raw(fc, d3d, h_bs, h_ue, env)), d3d)


def metis_mall_los(d2d):
    d = _distance(d2d, None, "d2D")
    return _result(68.8 + 18.4 * log10(d), d2d)


def metis_mall_nlos(d2d):
    d = _distance(d2d, None, "d2D")
    return _result(94.3 + 3.59 * log10(d), d2d)


# --------------------------------------------------------------------------
# ITU-R M.2135 rural macro


def _rma_pl1(fc, d3d, h):
    hp = h**1.72
    return (
        20.0 * log10(40.0 * math.pi * d3d * fc / 3.0)
        + min(0.03 * hp, 10.0) * log10(d3d)
        - min(0.044 * hp, 14.77)
        + 0.002 * math.log10(h) * d3d
    )


def pl_itur_rma_los(fc, d3d, env: EnvironmentConstants = RMA_ENVIRONMENT, h_bs=35.0, h_ue=1.5, d2d=None):
    """ITU-R RMa LOS; the breakpoint branch is selected on d2D."""
    fc = as_ghz(fc)
    d3 = _distance(d3d, None, "d3D")
    d2 = _d2d_from_d3d(d3, h_bs, h_ue) if d2d is None else np.asarray(d2d, dtype=float)
    dbp = breakpoint_itur_rma(fc, h_bs, h_ue)
    pl1 = _rma_pl1(fc, d3, env.h)
    pl2 = _rma_pl1(fc, dbp, env.h) + 40.0 * log10(d3 / dbp)
    return _result(np.where(d2 <= dbp, pl1, pl2), d3d)


def itur_rma_nlos_raw(fc, d3d, env: EnvironmentConstants = RMA_ENVIRONMENT, h_bs=35.0, h_ue=1.5):
    d = _distance(d3d, None, "d3D")
    W, h = env.W, env.h
    val = (
        161.04
        - 7.1 * math.log10(W)
        + 7.5 * math.log10(h)
        - (24.37 - 3.7 * (h / h_bs) ** 2) * math.log10(h_bs)
        + (43.42 - 3.1 * math.log10(h_bs)) * (log10(d) - 3.0)
        + 20.0 * math.log10(as_ghz(fc))
        - (3.2 * math.log10(11.75 * h_ue) ** 2 - 4.97)
    )
    return _result(val, d3d)


def pl_itur_rma_nlos(fc, d3d, env: EnvironmentConstants = RMA_ENVIRONMENT, h_bs=35.0, h_ue=1.5, d2d=None):
    los = pl_itur_rma_los(fc, d3d, env, h_bs, h_ue, d2d)
    return _result(np.maximum(los, itur_rma_nlos_raw(fc, d3d, env, h_bs, h_ue)), d3d)


# --------------------------------------------------------------------------
# IEEE 802.11ad


def pl_80211ad(fc, d, link="sta-sta", visibility="los"):
    """802.11ad indoor model. ``d`` is d2D for STA-STA and d3D for STA-AP."""
    fc = as_ghz(fc)
    link = Family.parse(link)
    vis = Visibility.parse(visibility)
    dd = _distance(d, None)
    flog = 20.0 * math.log10(fc)
    if vis is Visibility.LOS:
        val = 32.5 + flog + 20.0 * log10(dd)
    elif link is Family.STA_STA:
        val = 51.5 + flog + 6.0 * log10(dd)
    elif link is Family.STA_AP:
        val = 45.5 + flog + 14.0 * log10(dd)
    else:
        raise DomainError(f"unknown 802.11ad link type {link}")
    return _result(val, d)


# --------------------------------------------------------------------------
# registry


Evaluator = Callable[[float, LinkGeometry, Optional[EnvironmentConstants]], float]


@dataclass(frozen=True)
class PathLossModel:
    """One registered table row."""

    id: ModelId
    evaluate: Evaluator = field(repr=False, compare=False)
    sigma_sf: Optional[float]
    applicability: ApplicabilityRange
    params: object = None
    env_default: Optional[EnvironmentConstants] = None
    los_bound: Optional[ModelId] = None  # LOS model flooring this NLOS row


_ANY_D = ApplicabilityRange(d=(1.0, math.inf), d_kind="3d")


def _band(lo, hi, **kw):
    kw.setdefault("d", (1.0, math.inf))
    kw.setdefault("d_kind", "3d")
    return ApplicabilityRange(fc=(lo, hi), **kw)


def _ci(p):
    return lambda fc, g, env: pl_ci(fc, g.d3d, p)


def _cif(p):
    return lambda fc, g, env: pl_cif(fc, g.d3d, p)


def _cih(p):
    return lambda fc, g, env: pl_cih(fc, g.d3d, g.h_bs, p)


def _abg(p):
    return lambda fc, g, env: pl_abg(fc, g.d3d, p)


def _dual(p):
    return lambda fc, g, env: pl_dual_slope(fc, g.d3d, p)


def _build_registry():
    entries = []

    def add(org, scenario, vis, family, evaluate, sigma, rng, params=None, env=None, los_bound=None):
        scenarios = scenario if isinstance(scenario, tuple) else (scenario,)
        for sc in scenarios:
            bound = None if los_bound is None else ModelId(los_bound[0], sc, Visibility.LOS, los_bound[1])
            entries.append(
                PathLossModel(ModelId(org, sc, vis, family), evaluate, sigma, rng, params, env, bound)
            )

    def add_param(org, scenario, vis, family, p, rng):
        ev = {Family.CI: _ci, Family.CIF: _cif, Family.CIH: _cih, Family.ABG: _abg,
              Family.DUAL_CIF: _dual, Family.DUAL_ABG: _dual}[family](p)
        add(org, scenario, vis, family, ev, p.sigma_sf, rng, p)

    LOS, NLOS = Visibility.LOS, Visibility.NLOS
    UMI, UMI_OS, UMA = Scenario.UMI_STREET, Scenario.UMI_OPEN_SQUARE, Scenario.UMA
    OFFICE = (Scenario.INH_MIXED, Scenario.INH_OPEN)
    MALL, RMA = Scenario.INH_MALL, Scenario.RMA
    mm = _band(6.0, 100.0)

    # UMi, 5GCM
    add_param(Org.FIVEGCM, UMI, LOS, Family.CI, CIParams(2.1, 3.76), mm)
    add_param(Org.FIVEGCM, UMI, NLOS, Family.CI, CIParams(3.17, 8.09), mm)
    add_param(Org.FIVEGCM, UMI, NLOS, Family.ABG, ABGParams(3.53, 22.4, 2.13, 7.82), mm)
    add_param(Org.FIVEGCM, UMI_OS, LOS, Family.CI, CIParams(1.85, 4.2), mm)
    add_param(Org.FIVEGCM, UMI_OS, NLOS, Family.CI, CIParams(2.89, 7.1), mm)
    add_param(Org.FIVEGCM, UMI_OS, NLOS, Family.ABG, ABGParams(4.14, 3.66, 2.43, 7.0), mm)

    # UMi, 3GPP
    umi_3gpp = ApplicabilityRange(fc=(0.5, 100.0), d=(10.0, 5000.0), h_bs=(10.0, 10.0), h_ue=(1.5, 22.5))
    add(Org.TR38901, UMI, LOS, Family.STANDARD, lambda fc, g, env: pl_tr38901_umi_los(fc, g), 4.0, umi_3gpp)
    add(
        Org.TR38901, UMI, NLOS, Family.STANDARD,
        lambda fc, g, env: pl_max_lower_bounded_nlos(
            fc, g, pl_tr38901_umi_los, lambda f, gg: tr38901_umi_nlos_raw(f, gg.d3d, gg.h_ue)
        ),
        7.82, umi_3gpp, los_bound=(Org.TR38901, Family.STANDARD),
    )
    add_param(Org.TR38901, UMI, NLOS, Family.CI, CIParams(3.19, 8.2), umi_3gpp)

    # UMi, METIS
    add(
        Org.METIS, UMI, LOS, Family.STANDARD,
        lambda fc, g, env: pl_metis_umi_los(fc, g.d3d, g.h_bs, g.h_ue), 3.1,
        ApplicabilityRange(fc=(0.8, 60.0), d=(10.0, 500.0), d_kind="3d", h_ue=(1.5, 22.5)),
    )
    add(
        Org.METIS, UMI, NLOS, Family.STANDARD,
        lambda fc, g, env: pl_metis_umi_nlos(fc, g.d3d, g.h_ue, g.h_bs), 4.0,
        ApplicabilityRange(fc=(0.45, 6.0), d=(10.0, 2000.0), h_bs=(10.0, 10.0), h_ue=(1.5, 22.5)),
        los_bound=(Org.METIS, Family.STANDARD),
    )

    # UMi, mmMAGIC
    add_param(Org.MMMAGIC, UMI, LOS, Family.ABG, ABGParams(1.92, 32.9, 2.08, 2.0), mm)
    add_param(Org.MMMAGIC, UMI, NLOS, Family.ABG, ABGParams(4.5, 31.0, 2.0, 7.82), mm)

    # UMa, 5GCM
    add_param(Org.FIVEGCM, UMA, LOS, Family.CI, CIParams(2.0, 4.1), mm)
    add_param(Org.FIVEGCM, UMA, NLOS, Family.CI, CIParams(3.0, 6.8), mm)
    add_param(Org.FIVEGCM, UMA, NLOS, Family.ABG, ABGParams(3.4, 19.2, 2.3, 6.5), mm)

    # UMa, 3GPP
    uma_3gpp = ApplicabilityRange(fc=(0.5, 100.0), d=(10.0, 5000.0), h_bs=(25.0, 25.0), h_ue=(1.5, 22.5))
    add(Org.TR38901, UMA, LOS, Family.STANDARD, lambda fc, g, env: pl_tr38901_uma_los(fc, g), 4.0, uma_3gpp)
    add(
        Org.TR38901, UMA, NLOS, Family.STANDARD,
        lambda fc, g, env: pl_max_lower_bounded_nlos(
            fc, g, pl_tr38901_uma_los, lambda f, gg: tr38901_uma_nlos_raw(f, gg.d3d, gg.h_ue)
        ),
        6.0, uma_3gpp, los_bound=(Org.TR38901, Family.STANDARD),
    )
    add_param(Org.TR38901, UMA, NLOS, Family.CI, CIParams(3.0, 7.8), uma_3gpp)

    # UMa, METIS
    uma_metis = ApplicabilityRange(fc=(0.45, 6.0), d=(10.0, 5000.0), h_bs=(25.0, 25.0), h_ue=(1.5, 22.5))
    add(Org.METIS, UMA, LOS, Family.STANDARD, lambda fc, g, env: pl_tr38901_uma_los(fc, g), 4.0, uma_metis)
    add(
        Org.METIS, UMA, NLOS, Family.STANDARD,
        lambda fc, g, env: pl_max_lower_bounded_nlos(
            fc, g, pl_tr38901_uma_los,
            lambda f, gg: metis_uma_nlos_raw(f, gg.d3d, gg.h_bs, gg.h_ue, env or METIS_UMA_ENVIRONMENT),
        ),
        6.0, uma_metis, env=METIS_UMA_ENVIRONMENT, los_bound=(Org.METIS, Family.STANDARD),
    )

    # InH office, 3GPP
    inh_3gpp_los = ApplicabilityRange(fc=(0.5, 100.0), d=(1.0, 100.0), d_kind="3d")
    inh_3gpp_nlos = ApplicabilityRange(fc=(0.5, 100.0), d=(1.0, 86.0), d_kind="3d")
    add(Org.TR38901, OFFICE, LOS, Family.STANDARD, lambda fc, g, env: tr38901_inh_los(fc, g.d3d), 3.0,
        inh_3gpp_los, CIParams(1.73, 3.0))
    add(
        Org.TR38901, OFFICE, NLOS, Family.STANDARD,
        lambda fc, g, env: pl_max_lower_bounded_nlos(
            fc, g, lambda f, gg: tr38901_inh_los(f, gg.d3d), lambda f, gg: tr38901_inh_nlos_raw(f, gg.d3d)
        ),
        8.03, inh_3gpp_nlos, los_bound=(Org.TR38901, Family.STANDARD),
    )
    add_param(Org.TR38901, OFFICE, NLOS, Family.CI, CIParams(3.19, 8.29), inh_3gpp_nlos)

    # InH, 5GCM
    add_param(Org.FIVEGCM, OFFICE, LOS, Family.CI, CIParams(1.73, 3.02), mm)
    add_param(Org.FIVEGCM, OFFICE, NLOS, Family.CIF, CIFParams(3.19, 0.06, 24.2, 8.29), mm)
    add_param(Org.FIVEGCM, OFFICE, NLOS, Family.ABG, ABGParams(3.83, 17.30, 2.49, 8.03), mm)
    add_param(Org.FIVEGCM, OFFICE, NLOS, Family.DUAL_CIF,
              DualSlopeParams.cif(2.51, 0.06, 4.25, 0.04, 24.1, 7.8, 7.65), mm)
    add_param(Org.FIVEGCM, OFFICE, NLOS, Family.DUAL_ABG,
              DualSlopeParams.abg(1.7, 33.0, 2.49, 4.17, 6.9, 7.78), mm)
    add_param(Org.FIVEGCM, MALL, LOS, Family.CI, CIParams(1.73, 2.01), mm)
    add_param(Org.FIVEGCM, MALL, NLOS, Family.CIF, CIFParams(2.59, 0.01, 39.5, 7.40), mm)
    add_param(Org.FIVEGCM, MALL, NLOS, Family.ABG, ABGParams(3.21, 18.09, 2.24, 6.97), mm)
    add_param(Org.FIVEGCM, MALL, NLOS, Family.DUAL_CIF,
              DualSlopeParams.cif(2.43, -0.01, 8.36, 0.39, 39.5, 110.0, 6.26), mm)
    add_param(Org.FIVEGCM, MALL, NLOS, Family.DUAL_ABG,
              DualSlopeParams.abg(2.9, 22.17, 2.24, 11.47, 147.0, 6.36), mm)

    # InH shopping mall, METIS (63 GHz only)
    add(Org.METIS, MALL, LOS, Family.STANDARD, lambda fc, g, env: metis_mall_los(g.d2d), 2.0,
        ApplicabilityRange(fc=(63.0, 63.0), d=(1.5, 13.4), h_bs=(2.0, 2.0), h_ue=(2.0, 2.0)))
    add(Org.METIS, MALL, NLOS, Family.STANDARD, lambda fc, g, env: metis_mall_nlos(g.d2d), 2.0,
        ApplicabilityRange(fc=(63.0, 63.0), d=(4.0, 16.1), h_bs=(2.0, 2.0), h_ue=(2.0, 2.0)))

    # InH office, 802.11ad; STA-STA uses d2D, STA-AP uses d3D
    ad = (57.0, 63.0)
    add(Org.IEEE80211AD, OFFICE, LOS, Family.STA_STA, lambda fc, g, env: pl_80211ad(fc, g.d2d, "sta-sta", "los"),
        0.0, ApplicabilityRange(fc=ad, d=(1.0, math.inf)))
    add(Org.IEEE80211AD, OFFICE, LOS, Family.STA_AP, lambda fc, g, env: pl_80211ad(fc, g.d3d, "sta-ap", "los"),
        0.0, _band(*ad))
    add(Org.IEEE80211AD, OFFICE, NLOS, Family.STA_STA,
        lambda fc, g, env: pl_80211ad(fc, g.d2d, "sta-sta", "nlos"), 3.3,
        ApplicabilityRange(fc=ad, d=(1.0, math.inf)))
    add(Org.IEEE80211AD, OFFICE, NLOS, Family.STA_AP, lambda fc, g, env: pl_80211ad(fc, g.d3d, "sta-ap", "nlos"),
        3.0, _band(*ad))

    # InH office, mmMAGIC
    mm_inh_los = ABGParams(1.38, 33.6, 2.03, 1.18)
    add_param(Org.MMMAGIC, OFFICE, LOS, Family.ABG, mm_inh_los, mm)
    add(
        Org.MMMAGIC, OFFICE, NLOS, Family.STANDARD,
        lambda fc, g, env: pl_max_lower_bounded_nlos(
            fc, g, lambda f, gg: pl_abg(f, gg.d3d, mm_inh_los),
            lambda f, gg: pl_abg(f, gg.d3d, ABGParams(3.69, 15.2, 2.68)),
        ),
        8.03, mm, los_bound=(Org.MMMAGIC, Family.ABG),
    )

    # RMa, ITU-R M.2135 and its TR 38.901 adoption; no shadowing std is printed
    rma_common = dict(fc=(0.5, 30.0), h_bs=(10.0, 150.0), h_ue=(1.0, 10.0),
                      street_width=(5.0, 50.0), building_height=(5.0, 50.0))
    rma_los = ApplicabilityRange(d=(10.0, 10000.0), **rma_common)
    rma_nlos = ApplicabilityRange(d=(10.0, 5000.0), **rma_common)
    for org in (Org.ITURM2135, Org.TR38901):
        add(org, RMA, LOS, Family.STANDARD,
            lambda fc, g, env: pl_itur_rma_los(fc, g.d3d, env or RMA_ENVIRONMENT, g.h_bs, g.h_ue, g.d2d),
            None, rma_los, env=RMA_ENVIRONMENT)
        add(org, RMA, NLOS, Family.STANDARD,
            lambda fc, g, env: pl_itur_rma_nlos(fc, g.d3d, env or RMA_ENVIRONMENT, g.h_bs, g.h_ue, g.d2d),
            None, rma_nlos, env=RMA_ENVIRONMENT, los_bound=(org, Family.STANDARD))

    # RMa, NYU CIH
    cih_range = ApplicabilityRange(d=(1.0, math.inf), d_kind="3d", h_bs=(10.0, 150.0))
    add_param(Org.NYU, RMA, LOS, Family.CIH, CIHParams(2.31, -0.03, 35.0, 1.7), cih_range)
    add_param(Org.NYU, RMA, NLOS, Family.CIH, CIHParams(3.07, -0.049, 35.0, 6.7), cih_range)

    return {e.id: e for e in entries}


PATH_LOSS_MODELS = _build_registry()


def get_path_loss_model(model) -> PathLossModel:
    mid = ModelId.parse(model)
    try:
        return PATH_LOSS_MODELS[mid]
    except KeyError:
        raise UnknownModelError(f"no path loss model registered for {mid}") from None


def resolve_model(org, scenario, visibility, family=None) -> ModelId:
    """Fill in the family when omitted: the standard formula if registered,
    otherwise the only registered family."""
    if family is not None:
        return ModelId(org, scenario, visibility, family)
    probe = ModelId(org, scenario, visibility, Family.STANDARD)
    if probe in PATH_LOSS_MODELS:
        return probe
    matches = [m for m in PATH_LOSS_MODELS
               if (m.org, m.scenario, m.visibility) == (probe.org, probe.scenario, probe.visibility)]
    if len(matches) == 1:
        return matches[0]
    if not matches:
        raise UnknownModelError(f"no path loss model registered for {probe.org}:{probe.scenario}:{probe.visibility}")
    fams = ", ".join(str(m.family) for m in matches)
    raise UnknownModelError(f"ambiguous model; pass a family ({fams})")


def applicability_violations(entry: PathLossModel, fc, geom, env=None):
    return entry.applicability.violations(fc, geom, env if env is not None else entry.env_default)


def mean_path_loss(model, fc, geom: LinkGeometry, env: Optional[EnvironmentConstants] = None, strict=False):
    """Evaluate a registered model with its table parameters.

    Out-of-range inputs emit :class:`ApplicabilityWarning`, or raise
    :class:`ApplicabilityError` when ``strict``.
    """
    entry = get_path_loss_model(model)
    fc = as_ghz(fc)
    problems = applicability_violations(entry, fc, geom, env)
    if problems:
        if strict:
            raise ApplicabilityError(entry.id, problems)
        warnings.warn(f"{entry.id}: " + "; ".join(problems), ApplicabilityWarning, stacklevel=2)
    return float(entry.evaluate(fc, geom, env if env is not None else entry.env_default))
