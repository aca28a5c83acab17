"""Standardized millimeter-wave propagation models.

Deterministic LOS probability, path loss and O2I models, shadow-fading
sampling, spatially consistent maps, and least-squares fitting.
"""
from .core import (
    ApplicabilityError,
    ApplicabilityRange,
    ApplicabilityWarning,
    DomainError,
    EnvironmentConstants,
    Family,
    Frequency,
    LinkGeometry,
    ModelId,
    Org,
    PropagationError,
    Scenario,
    UnknownModelError,
    Visibility,
    derive_d3d,
)
from .fitting import (
    FitResult,
    MeasurementRecord,
    fit_abg,
    fit_ci,
    fit_cif,
    fit_dual_slope,
    read_measurements,
)
from .los_probability import los_probability
from .o2i import O2IVariant, o2i_total, penetration_loss, wall_loss
from .pathloss import fspl_1m, mean_path_loss, resolve_model
from .registry import all_models, check_applicability, lookup
from .stochastic import (
    GridSpec,
    SpatialGrid,
    generate_consistency_map,
    make_rng,
    query_map,
    sample_path_loss,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
