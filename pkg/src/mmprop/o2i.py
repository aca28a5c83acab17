"""Outdoor-to-indoor penetration loss.

Means and standard deviations are returned together; nothing is sampled here.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Sequence, Tuple

import numpy as np

from .core import DomainError, as_ghz


class Material(str, Enum):
    STANDARD_GLASS = "standard-glass"
    IRR_GLASS = "irr-glass"
    CONCRETE = "concrete"
    WOOD = "wood"


@dataclass(frozen=True)
class MaterialLoss:
    material: Material
    a: float  # dB
    b: float  # dB per GHz

    def loss(self, fc):
        return self.a + self.b * fc


MATERIALS = {
    Material.STANDARD_GLASS: MaterialLoss(Material.STANDARD_GLASS, 2.0, 0.2),
    Material.IRR_GLASS: MaterialLoss(Material.IRR_GLASS, 23.0, 0.3),
    Material.CONCRETE: MaterialLoss(Material.CONCRETE, 5.0, 4.0),
    Material.WOOD: MaterialLoss(Material.WOOD, 4.85, 0.12),
}

#: Non-perpendicular-incidence offset used by both printed composites.
DEFAULT_PL_NPI = 5.0


def material_loss(material, fc):
    """Penetration loss a + b*fc of one material (fc in GHz, not validated:
    the intercept at fc = 0 is allowed)."""
    return MATERIALS[Material(material)].loss(float(fc))


@dataclass(frozen=True)
class WallComposition:
    """Material fractions of an external wall; proportions sum to 1."""

    layers: Tuple[Tuple[Material, float], ...]

    def __post_init__(self):
        if not self.layers:
            raise DomainError("wall composition is empty")
        layers = tuple((Material(m), float(p)) for m, p in self.layers)
        if any(p < 0 for _, p in layers):
            raise DomainError("material proportions must be >= 0")
        if abs(sum(p for _, p in layers) - 1.0) > 1e-9:
            raise DomainError("material proportions must sum to 1")
        object.__setattr__(self, "layers", layers)

    @classmethod
    def of(cls, pairs: Sequence[Tuple[str, float]]):
        return cls(tuple(pairs))


LOW_LOSS_WALL = WallComposition(((Material.STANDARD_GLASS, 0.3), (Material.CONCRETE, 0.7)))
HIGH_LOSS_WALL = WallComposition(((Material.IRR_GLASS, 0.7), (Material.CONCRETE, 0.3)))


def wall_loss(composition: WallComposition, fc, pl_npi=DEFAULT_PL_NPI):
    """Composite external-wall loss: PL_npi - 10 log10(sum p_i 10^(-L_i/10))."""
    if not isinstance(composition, WallComposition):
        composition = WallComposition(tuple(composition))
    total = sum(p * 10.0 ** (-material_loss(m, fc) / 10.0) for m, p in composition.layers)
    return pl_npi - 10.0 * math.log10(total)


def bpl_parabolic(fc, a, b):
    """Building penetration loss 10 log10(A + B fc^2)."""
    return 10.0 * math.log10(a + b * float(fc) ** 2)


def mmmagic_o2i(fc, b_o2i=8.5, c_o2i=11.2):
    """mmMAGIC O2I loss B + C log10(fc)."""
    return b_o2i + c_o2i * math.log10(as_ghz(fc))


def mmmagic_o2i_sigma(fc, sigma=5.7, delta=2.3):
    """Frequency-dependent O2I shadow-fading std sigma + delta log10(fc)."""
    return sigma + delta * math.log10(as_ghz(fc))


class O2IVariant(str, Enum):
    TR38901_LOW = "tr38901-low"
    TR38901_HIGH = "tr38901-high"
    FIVEGCM_LOW = "5gcm-low"
    FIVEGCM_HIGH = "5gcm-high"
    MMMAGIC = "mmmagic"
    CAR = "car"
    CAR_METALIZED = "car-metalized"


@dataclass(frozen=True)
class O2IModelParams:
    variant: O2IVariant
    pl_npi: float
    indoor_slope: float  # dB per meter of indoor depth
    sigma_p: float

    def __post_init__(self):
        if self.sigma_p < 0:
            raise DomainError("sigma_p must be >= 0")


O2I_MODELS = {
    O2IVariant.TR38901_LOW: O2IModelParams(O2IVariant.TR38901_LOW, DEFAULT_PL_NPI, 0.5, 4.4),
    O2IVariant.TR38901_HIGH: O2IModelParams(O2IVariant.TR38901_HIGH, DEFAULT_PL_NPI, 0.5, 6.5),
    # indoor loss is not specified for 5GCM: default 0, overridable
    O2IVariant.FIVEGCM_LOW: O2IModelParams(O2IVariant.FIVEGCM_LOW, 0.0, 0.0, 4.0),
    O2IVariant.FIVEGCM_HIGH: O2IModelParams(O2IVariant.FIVEGCM_HIGH, 0.0, 0.0, 6.0),
    O2IVariant.MMMAGIC: O2IModelParams(O2IVariant.MMMAGIC, 0.0, 0.0, float("nan")),
    O2IVariant.CAR: O2IModelParams(O2IVariant.CAR, 0.0, 0.0, 5.0),
    O2IVariant.CAR_METALIZED: O2IModelParams(O2IVariant.CAR_METALIZED, 0.0, 0.0, 5.0),
}

_BPL_COEFFS = {O2IVariant.FIVEGCM_LOW: (5.0, 0.03), O2IVariant.FIVEGCM_HIGH: (10.0, 5.0)}


def penetration_loss(variant, fc, pl_npi=None):
    """Wall/building term of a variant, without indoor-depth loss."""
    variant = O2IVariant(variant)
    fc = as_ghz(fc)
    params = O2I_MODELS[variant]
    npi = params.pl_npi if pl_npi is None else pl_npi
    if variant is O2IVariant.TR38901_LOW:
        return wall_loss(LOW_LOSS_WALL, fc, npi)
    if variant is O2IVariant.TR38901_HIGH:
        return wall_loss(HIGH_LOSS_WALL, fc, npi)
    if variant in _BPL_COEFFS:
        return bpl_parabolic(fc, *_BPL_COEFFS[variant])
    if variant is O2IVariant.MMMAGIC:
        return mmmagic_o2i(fc)
    return car_penetration(0.0, variant is O2IVariant.CAR_METALIZED)[0]


def car_penetration(plb, metalized=False, fc=None):
    """In-car loss: mean PLb + 9 dB (20 dB for metalized windows), sigma 5 dB.

    ``fc`` is only checked for the metalized option (0.6-60 GHz).
    """
    if metalized and fc is not None and not 0.6 <= as_ghz(fc) <= 60.0:
        raise DomainError(f"metalized-window car loss is defined for 0.6-60 GHz (got {fc})")
    return float(plb) + (20.0 if metalized else 9.0), 5.0


def o2i_total(plb, variant, fc, d2d_in=0.0, indoor_slope=None, pl_npi=None):
    """Total O2I loss ``(mean_db, sigma_db)`` on top of the outdoor loss ``plb``.

    ``indoor_slope`` overrides the variant's dB-per-meter indoor loss (the
    5GCM variants default to 0).
    """
    variant = O2IVariant(variant)
    if d2d_in < 0:
        raise DomainError(f"indoor distance must be >= 0 m (got {d2d_in})")
    if variant in (O2IVariant.CAR, O2IVariant.CAR_METALIZED):
        return car_penetration(plb, variant is O2IVariant.CAR_METALIZED, fc)
    params = O2I_MODELS[variant]
    slope = params.indoor_slope if indoor_slope is None else float(indoor_slope)
    mean = float(plb) + penetration_loss(variant, fc, pl_npi) + slope * float(d2d_in)
    if variant is O2IVariant.MMMAGIC:
        sigma = mmmagic_o2i_sigma(fc)
    else:
        sigma = params.sigma_p
    return mean, sigma


def penetration_curve(variant, fcs):
    """Vector helper: penetration loss over an array of frequencies."""
    return np.array([penetration_loss(variant, f) for f in np.atleast_1d(fcs)])
