"""LOS probability models as deterministic functions of 2D distance.

All evaluators accept scalars or numpy arrays and return the same shape.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .core import (
    ApplicabilityRange,
    DomainError,
    Family,
    LinkGeometry,
    ModelId,
    Org,
    Scenario,
    UnknownModelError,
    Visibility,
)


def _result(x, like):
    x = np.asarray(x, dtype=float)
    return float(x) if np.ndim(like) == 0 else x


def _distances(d2d):
    d = np.asarray(d2d, dtype=float)
    if np.any(d < 0) or np.any(~np.isfinite(d)):
        raise DomainError(f"d2D must be finite and >= 0 m, got {d2d!r}")
    return d


@dataclass(frozen=True)
class D1D2Params:
    d1: float
    d2: float
    squared: bool = False

    def __post_init__(self):
        if self.d1 <= 0 or self.d2 <= 0:
            raise DomainError("d1 and d2 must be > 0 m")


@dataclass(frozen=True)
class InHPiecewiseParams:
    """Three-branch indoor model: 1, exp decay, scaled exp decay."""

    variant: str
    near: float
    far: float
    decay_mid: float
    decay_far: float
    scale_far: float

    def __post_init__(self):
        if not 0 < self.near < self.far:
            raise DomainError("branch boundaries must be strictly increasing")


MIXED_OFFICE = InHPiecewiseParams("mixed-office", 1.2, 6.5, 4.7, 32.6, 0.32)
OPEN_OFFICE = InHPiecewiseParams("open-office", 5.0, 49.0, 70.8, 211.7, 0.54)


def _d1d2_base(d, d1, d2):
    # min(d1/d, 1) without dividing by zero; d = 0 collapses to 1
    ratio = d1 / np.maximum(d, d1)
    e = np.exp(-d / d2)
    return ratio * (1.0 - e) + e


def los_prob_d1d2(d2d, p: D1D2Params):
    """3GPP/ITU d1/d2 model; squared (NYU) when ``p.squared``."""
    d = _distances(d2d)
    base = _d1d2_base(d, p.d1, p.d2)
    if p.squared:
        base = base * base
    return _result(np.clip(base, 0.0, 1.0), d2d)


def uma_height_correction(d2d, h_ue):
    """C(d2D, hUE): zero below 13 m UE height, undefined above 23 m."""
    d = _distances(d2d)
    if h_ue > 23.0:
        raise DomainError(f"UMa LOS probability undefined for hUE > 23 m (got {h_ue})")
    if h_ue < 13.0:
        return _result(np.zeros_like(d), d2d)
    g = np.where(d > 18.0, 1.25e-6 * d**3 * np.exp(-d / 150.0), 0.0)
    return _result(((h_ue - 13.0) / 10.0) ** 1.5 * g, d2d)


def los_prob_uma(d2d, h_ue, p: D1D2Params, clamp=True):
    """UMa d1/d2 model with the UE-height correction (1 + C).

    The squared flag applies to the whole product. ``clamp=False`` exposes the
    raw product, which can exceed 1 for tall UEs.
    """
    d = _distances(d2d)
    c = np.asarray(uma_height_correction(d, h_ue))
    val = _d1d2_base(d, p.d1, p.d2) * (1.0 + c)
    if p.squared:
        val = val * val
    if clamp:
        val = np.clip(val, 0.0, 1.0)
    return _result(val, d2d)


def los_prob_inh(d2d, p: InHPiecewiseParams = MIXED_OFFICE):
    d = _distances(d2d)
    mid = np.exp(-(d - p.near) / p.decay_mid)
    far = np.exp(-(d - p.far) / p.decay_far) * p.scale_far
    val = np.where(d <= p.near, 1.0, np.where(d < p.far, mid, far))
    return _result(val, d2d)


def los_prob_rma(d2d):
    d = _distances(d2d)
    return _result(np.where(d <= 10.0, 1.0, np.exp(-(d - 10.0) / 1000.0)), d2d)


@dataclass(frozen=True)
class LosProbabilityModel:
    """Registry entry for one LOS probability row."""

    id: ModelId
    kind: str  # "d1d2" | "uma" | "inh" | "rma"
    params: object = None
    indoor_rule: bool = False
    applicability: ApplicabilityRange = ApplicabilityRange()
    sigma_sf: Optional[float] = None  # LOS-probability rows carry no shadowing

    def evaluate(self, d2d, h_ue=1.5):
        if self.kind == "d1d2":
            return los_prob_d1d2(d2d, self.params)
        if self.kind == "uma":
            return los_prob_uma(d2d, h_ue, self.params)
        if self.kind == "inh":
            return los_prob_inh(d2d, self.params)
        if self.kind == "rma":
            return los_prob_rma(d2d)
        raise UnknownModelError(f"unknown LOS probability kind {self.kind!r}")


def _mid(org, scenario, family):
    return ModelId(org, scenario, Visibility.LOS, family)


def _build_registry():
    umi = Scenario.UMI_STREET
    uma = Scenario.UMA
    uma_range = ApplicabilityRange(h_ue=(1.5, 23.0))
    entries = [
        # UMi
        LosProbabilityModel(_mid(Org.TR38901, umi, Family.D1D2), "d1d2", D1D2Params(18, 36), True),
        LosProbabilityModel(_mid(Org.FIVEGCM, umi, Family.D1D2), "d1d2", D1D2Params(20, 39)),
        LosProbabilityModel(
            _mid(Org.FIVEGCM, umi, Family.NYU_SQUARED), "d1d2", D1D2Params(22, 100, squared=True)
        ),
        LosProbabilityModel(
            _mid(Org.METIS, umi, Family.D1D2), "d1d2", D1D2Params(18, 36), True,
            ApplicabilityRange(d=(10.0, np.inf)),
        ),
        LosProbabilityModel(_mid(Org.MMMAGIC, umi, Family.D1D2), "d1d2", D1D2Params(20, 39), True),
        # UMa (mmMAGIC intentionally absent)
        LosProbabilityModel(
            _mid(Org.TR38901, uma, Family.D1D2), "uma", D1D2Params(18, 63), True, uma_range
        ),
        LosProbabilityModel(_mid(Org.FIVEGCM, uma, Family.D1D2), "uma", D1D2Params(20, 66), False, uma_range),
        LosProbabilityModel(
            _mid(Org.FIVEGCM, uma, Family.NYU_SQUARED), "uma",
            D1D2Params(20, 160, squared=True), False, uma_range,
        ),
        LosProbabilityModel(
            _mid(Org.METIS, uma, Family.D1D2), "uma", D1D2Params(18, 63), True,
            ApplicabilityRange(d=(35.0, np.inf), h_ue=(1.5, 23.0)),
        ),
        # InH
        LosProbabilityModel(_mid(Org.TR38901, Scenario.INH_MIXED, Family.PIECEWISE), "inh", MIXED_OFFICE),
        LosProbabilityModel(_mid(Org.TR38901, Scenario.INH_OPEN, Family.PIECEWISE), "inh", OPEN_OFFICE),
        LosProbabilityModel(_mid(Org.FIVEGCM, Scenario.INH_MIXED, Family.PIECEWISE), "inh", MIXED_OFFICE),
        LosProbabilityModel(_mid(Org.MMMAGIC, Scenario.INH_MIXED, Family.PIECEWISE), "inh", MIXED_OFFICE),
        # RMa
        LosProbabilityModel(_mid(Org.TR38901, Scenario.RMA, Family.EXPONENTIAL), "rma"),
        LosProbabilityModel(_mid(Org.ITURM2135, Scenario.RMA, Family.EXPONENTIAL), "rma"),
    ]
    return {e.id: e for e in entries}


LOS_PROBABILITY_MODELS = _build_registry()


def get_los_model(model) -> LosProbabilityModel:
    mid = ModelId.parse(model)
    try:
        return LOS_PROBABILITY_MODELS[mid]
    except KeyError:
        raise UnknownModelError(f"no LOS probability model registered for {mid}") from None


def los_probability(model, geom: LinkGeometry, indoor=False):
    """Evaluate a registered LOS probability model on a link.

    Rows with the indoor-user rule use ``geom.d2d_out`` in place of ``d2d``
    whenever it is present; ``indoor=True`` additionally requires it.
    """
    entry = get_los_model(model)
    d = geom.d2d
    if indoor:
        if not entry.indoor_rule:
            raise DomainError(f"{entry.id} defines no indoor-user rule")
        if geom.d2d_out is None:
            raise DomainError(f"{entry.id}: indoor user requires d2D_out")
    if entry.indoor_rule and geom.d2d_out is not None:
        d = geom.d2d_out
    return entry.evaluate(d, geom.h_ue)


def default_los_model(scenario) -> ModelId:
    """The TR 38.901 row for a scenario (UMi open square maps to street canyon)."""
    scenario = Scenario.parse(scenario)
    if scenario is Scenario.UMI_OPEN_SQUARE:
        scenario = Scenario.UMI_STREET
    for mid in LOS_PROBABILITY_MODELS:
        if mid.org is Org.TR38901 and mid.scenario is scenario:
            return mid
    raise UnknownModelError(f"no default LOS probability model for {scenario}")
