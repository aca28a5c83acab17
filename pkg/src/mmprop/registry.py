"""Unified lookup over the path loss and LOS probability registries."""
from __future__ import annotations

from .core import ModelId, UnknownModelError, as_ghz
from .los_probability import LOS_PROBABILITY_MODELS
from .pathloss import PATH_LOSS_MODELS


def lookup(model):
    """Return the registry entry (path loss or LOS probability) for a model id."""
    mid = ModelId.parse(model)
    if mid in PATH_LOSS_MODELS:
        return PATH_LOSS_MODELS[mid]
    if mid in LOS_PROBABILITY_MODELS:
        return LOS_PROBABILITY_MODELS[mid]
    raise UnknownModelError(f"model {mid} is not registered")


def all_models():
    """Every registered model id, path loss first, in registration order."""
    return list(PATH_LOSS_MODELS) + list(LOS_PROBABILITY_MODELS)


def check_applicability(model, fc, geom, env=None):
    """List the constraints of ``model`` violated by ``(fc, geom, env)``.

    An empty list means the inputs are inside every printed range. Inputs are
    never modified.
    """
    entry = lookup(model)
    fc = as_ghz(fc)
    if env is None:
        env = getattr(entry, "env_default", None)
    return entry.applicability.violations(fc, geom, env)
