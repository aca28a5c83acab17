"""Domain types shared by every model: units, geometry, model keys, ranges.

Units are fixed throughout the package: carrier frequency in GHz, distances
and heights in meters, losses in dB.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Tuple

import numpy as np

#: Speed of light used by every breakpoint formula (m/s).
SPEED_OF_LIGHT = 3.0e8


class PropagationError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(PropagationError, ValueError):
    """An input lies outside the mathematical domain of a model."""


class ApplicabilityError(DomainError):
    """Strict-mode failure: inputs fall outside a model's validated range."""

    def __init__(self, model, violations):
        self.model = model
        self.violations = list(violations)
        super().__init__(f"{model}: " + "; ".join(self.violations))


class UnknownModelError(PropagationError, LookupError):
    """No registry entry matches the requested model key."""


class ApplicabilityWarning(UserWarning):
    """Inputs fall outside a model's validated range (non-strict mode)."""


class _Token(str, Enum):
    """String enum parsed from CLI-style tokens, with aliases."""

    @classmethod
    def parse(cls, token):
        if isinstance(token, cls):
            return token
        key = str(token).strip().lower().replace("_", "-")
        key = _ALIASES.get(cls.__name__, {}).get(key, key)
        for member in cls:
            if member.value == key:
                return member
        choices = ", ".join(m.value for m in cls)
        raise UnknownModelError(f"unknown {cls.__name__.lower()} {token!r} (choose from {choices})")

    def __str__(self):
        return self.value


class Org(_Token):
    TR38901 = "tr38901"
    FIVEGCM = "5gcm"
    METIS = "metis"
    MMMAGIC = "mmmagic"
    ITURM2135 = "itu-r"
    NYU = "nyu"
    IEEE80211AD = "802.11ad"


class Scenario(_Token):
    UMI_STREET = "umi-street"
    UMI_OPEN_SQUARE = "umi-open-square"
    UMA = "uma"
    INH_MIXED = "inh-mixed"
    INH_OPEN = "inh-open"
    INH_MALL = "inh-mall"
    RMA = "rma"


class Visibility(_Token):
    LOS = "los"
    NLOS = "nlos"
    O2I = "o2i"


class Family(_Token):
    # path loss families
    CI = "ci"
    CIF = "cif"
    CIH = "cih"
    ABG = "abg"
    DUAL_CIF = "dual-cif"
    DUAL_ABG = "dual-abg"
    STANDARD = "standard"
    STA_STA = "sta-sta"
    STA_AP = "sta-ap"
    # LOS probability families
    D1D2 = "d1d2"
    NYU_SQUARED = "nyu-squared"
    PIECEWISE = "piecewise"
    EXPONENTIAL = "exponential"


LOS_PROBABILITY_FAMILIES = frozenset(
    {Family.D1D2, Family.NYU_SQUARED, Family.PIECEWISE, Family.EXPONENTIAL}
)

_ALIASES = {
    "Org": {
        "3gpp": "tr38901",
        "38.901": "tr38901",
        "tr-38901": "tr38901",
        "fivegcm": "5gcm",
        "mmmagic": "mmmagic",
        "itur": "itu-r",
        "itu": "itu-r",
        "itu-r-m2135": "itu-r",
        "ieee80211ad": "802.11ad",
        "80211ad": "802.11ad",
        "ieee802.11ad": "802.11ad",
    },
    "Scenario": {
        "umi": "umi-street",
        "umi-street-canyon": "umi-street",
        "umi-sc": "umi-street",
        "umi-os": "umi-open-square",
        "inh": "inh-mixed",
        "inh-office": "inh-mixed",
        "inh-mixed-office": "inh-mixed",
        "inh-open-office": "inh-open",
        "inh-shopping-mall": "inh-mall",
    },
    "Family": {
        "nyu": "nyu-squared",
        "squared": "nyu-squared",
        "dual-slope-cif": "dual-cif",
        "dual-slope-abg": "dual-abg",
        "fi": "abg",
    },
}


@dataclass(frozen=True)
class ModelId:
    """Registry key: (organization, scenario, visibility, family)."""

    org: Org
    scenario: Scenario
    visibility: Visibility
    family: Family

    def __post_init__(self):
        object.__setattr__(self, "org", Org.parse(self.org))
        object.__setattr__(self, "scenario", Scenario.parse(self.scenario))
        object.__setattr__(self, "visibility", Visibility.parse(self.visibility))
        object.__setattr__(self, "family", Family.parse(self.family))

    def __str__(self):
        return f"{self.org}:{self.scenario}:{self.visibility}:{self.family}"

    @classmethod
    def parse(cls, text):
        """Parse ``org:scenario:visibility:family``."""
        if isinstance(text, ModelId):
            return text
        parts = str(text).split(":")
        if len(parts) != 4:
            raise UnknownModelError(
                f"model id {text!r} must look like org:scenario:visibility:family"
            )
        return cls(*parts)

    @property
    def is_los_probability(self):
        return self.family in LOS_PROBABILITY_FAMILIES


@dataclass(frozen=True)
class Frequency:
    """Carrier frequency in GHz."""

    value: float

    def __post_init__(self):
        v = float(self.value)
        if not math.isfinite(v) or v <= 0:
            raise DomainError(f"carrier frequency must be finite and > 0 GHz, got {self.value!r}")
        object.__setattr__(self, "value", v)

    def __float__(self):
        return self.value


def as_ghz(fc):
    """Validate a carrier frequency (float or :class:`Frequency`) and return GHz."""
    return Frequency(float(fc)).value


@dataclass(frozen=True)
class EnvironmentConstants:
    """Street width ``W`` and average building height ``h``, both in meters."""

    W: float = 20.0
    h: float = 5.0

    def __post_init__(self):
        if self.W <= 0 or self.h <= 0:
            raise DomainError("street width and building height must be > 0 m")


#: Rural macro defaults.
RMA_ENVIRONMENT = EnvironmentConstants(W=20.0, h=5.0)
#: METIS urban macro NLOS defaults.
METIS_UMA_ENVIRONMENT = EnvironmentConstants(W=20.0, h=20.0)


def derive_d3d(d2d, h_bs, h_ue):
    """3D separation from the horizontal distance and both antenna heights.

    Works elementwise on arrays; scalar inputs give a float.
    """
    d2d_a = np.asarray(d2d, dtype=float)
    if np.any(d2d_a < 0) or not np.all(np.isfinite(d2d_a)):
        raise DomainError(f"d2D must be finite and >= 0 m, got {d2d!r}")
    if np.any(np.asarray(h_bs) <= 0) or np.any(np.asarray(h_ue) <= 0):
        raise DomainError("antenna heights must be > 0 m")
    out = np.hypot(d2d_a, np.asarray(h_bs, dtype=float) - np.asarray(h_ue, dtype=float))
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class LinkGeometry:
    """Transmitter-receiver geometry.

    ``d3d`` is derived from ``d2d`` and the heights when omitted; when given it
    must agree with them to 1e-9 relative. ``d2d_out``/``d2d_in`` split the
    horizontal path of an indoor user at the building facade.
    """

    d2d: float
    h_bs: float
    h_ue: float
    d3d: Optional[float] = None
    d2d_out: Optional[float] = None
    d2d_in: Optional[float] = None

    def __post_init__(self):
        for name in ("d2d", "h_bs", "h_ue"):
            v = float(getattr(self, name))
            if not math.isfinite(v):
                raise DomainError(f"{name} must be finite")
            object.__setattr__(self, name, v)
        if self.d2d < 0:
            raise DomainError(f"d2D must be >= 0 m, got {self.d2d}")
        if self.h_bs <= 0 or self.h_ue <= 0:
            raise DomainError(f"antenna heights must be > 0 m, got hBS={self.h_bs}, hUE={self.h_ue}")
        expected = derive_d3d(self.d2d, self.h_bs, self.h_ue)
        if self.d3d is None:
            object.__setattr__(self, "d3d", expected)
        else:
            d3d = float(self.d3d)
            if abs(d3d - expected) > 1e-9 * max(expected, 1.0):
                raise DomainError(
                    f"d3D={d3d} inconsistent with d2D={self.d2d}, hBS={self.h_bs}, hUE={self.h_ue}"
                )
            object.__setattr__(self, "d3d", d3d)
        for name in ("d2d_out", "d2d_in"):
            v = getattr(self, name)
            if v is not None:
                v = float(v)
                if v < 0:
                    raise DomainError(f"{name} must be >= 0 m")
                object.__setattr__(self, name, v)
        if self.d2d_out is not None and self.d2d_in is not None:
            if abs(self.d2d_out + self.d2d_in - self.d2d) > 1e-9 * max(self.d2d, 1.0):
                raise DomainError("d2D_out + d2D_in must equal d2D")

    @classmethod
    def from_d3d(cls, d3d, h_bs, h_ue, **kwargs):
        """Build a geometry from the 3D distance, back-solving for d2D."""
        d3d = float(d3d)
        dh = float(h_bs) - float(h_ue)
        sq = d3d * d3d - dh * dh
        if sq < -1e-9 * max(d3d * d3d, 1.0):
            raise DomainError(
                f"d3D={d3d} m is shorter than the height difference {abs(dh)} m"
            )
        d2d = math.sqrt(max(sq, 0.0))
        return cls(d2d=d2d, h_bs=h_bs, h_ue=h_ue, d3d=derive_d3d(d2d, h_bs, h_ue), **kwargs)

    def distance(self, kind):
        return self.d3d if kind == "3d" else self.d2d


Interval = Tuple[float, float]


def _fmt(x):
    return f"{x:g}"


@dataclass(frozen=True)
class ApplicabilityRange:
    """Validated input ranges of one model; ``None`` means unconstrained.

    Bounds are inclusive. ``d_kind`` selects whether ``d`` constrains the 2D or
    the 3D distance.
    """

    fc: Optional[Interval] = None
    d: Optional[Interval] = None
    d_kind: str = "2d"
    h_bs: Optional[Interval] = None
    h_ue: Optional[Interval] = None
    street_width: Optional[Interval] = None
    building_height: Optional[Interval] = None
    notes: Tuple[str, ...] = field(default=())

    def __post_init__(self):
        for name in ("fc", "d", "h_bs", "h_ue", "street_width", "building_height"):
            iv = getattr(self, name)
            if iv is not None and iv[0] > iv[1]:
                raise ValueError(f"{name}: min {iv[0]} > max {iv[1]}")
        if self.d_kind not in ("2d", "3d"):
            raise ValueError("d_kind must be '2d' or '3d'")

    def violations(self, fc, geom, env=None):
        """Human-readable list of violated constraints (empty if applicable)."""
        out = []

        def check(label, value, iv, unit):
            if iv is None or value is None:
                return
            lo, hi = iv
            if not (lo <= value <= hi):
                span = _fmt(lo) if lo == hi else f"{_fmt(lo)}-{_fmt(hi)}"
                out.append(f"{label} out of {span} {unit} (got {_fmt(value)})")

        check("fc", float(fc), self.fc, "GHz")
        check("d3D" if self.d_kind == "3d" else "d2D", geom.distance(self.d_kind), self.d, "m")
        check("hBS", geom.h_bs, self.h_bs, "m")
        check("hUE", geom.h_ue, self.h_ue, "m")
        if env is not None:
            check("W", env.W, self.street_width, "m")
            check("h", env.h, self.building_height, "m")
        return out


#: Default antenna heights per scenario, (hBS, hUE) in meters.
SCENARIO_HEIGHTS = {
    Scenario.UMI_STREET: (10.0, 1.5),
    Scenario.UMI_OPEN_SQUARE: (10.0, 1.5),
    Scenario.UMA: (25.0, 1.5),
    Scenario.INH_MIXED: (3.0, 1.5),
    Scenario.INH_OPEN: (3.0, 1.5),
    Scenario.INH_MALL: (3.0, 1.5),
    Scenario.RMA: (35.0, 1.5),
}
