import math

import numpy as np
import pytest

from mmprop.core import (
    ApplicabilityRange,
    DomainError,
    EnvironmentConstants,
    Family,
    Frequency,
    LinkGeometry,
    ModelId,
    Org,
    Scenario,
    UnknownModelError,
    as_ghz,
    derive_d3d,
)
from mmprop.registry import all_models, check_applicability, lookup


@pytest.mark.parametrize(
    "args, expected",
    [((0, 10, 1.5), 8.5), ((100, 10, 1.5), 100.36059983878135), ((100, 1.5, 1.5), 100.0)],
)
def test_derive_d3d(args, expected):
    assert derive_d3d(*args) == pytest.approx(expected, rel=1e-12)


def test_derive_d3d_rejects_negative_distance():
    with pytest.raises(DomainError):
        derive_d3d(-1.0, 10, 1.5)


def test_derive_d3d_vectorized():
    out = derive_d3d(np.array([0.0, 100.0]), 10, 1.5)
    np.testing.assert_allclose(out, [8.5, 100.36059983878135], rtol=1e-12)


def test_frequency_validation():
    assert as_ghz(Frequency(28)) == 28.0
    for bad in (0, -1, float("nan"), float("inf")):
        with pytest.raises(DomainError):
            Frequency(bad)


def test_geometry_consistency():
    g = LinkGeometry(100, 10, 1.5)
    assert g.d3d**2 == pytest.approx(g.d2d**2 + 8.5**2, rel=1e-12)
    with pytest.raises(DomainError):
        LinkGeometry(100, 10, 1.5, d3d=100.0)
    with pytest.raises(DomainError):
        LinkGeometry(100, 10, 1.5, d2d_out=60, d2d_in=30)
    LinkGeometry(100, 10, 1.5, d2d_out=70, d2d_in=30)
    with pytest.raises(DomainError):
        LinkGeometry(100, 0, 1.5)


def test_geometry_from_d3d_round_trip():
    g = LinkGeometry.from_d3d(500, 35, 1.5)
    assert g.d3d == pytest.approx(500, rel=1e-12)
    assert g.d2d == pytest.approx(math.sqrt(500**2 - 33.5**2), rel=1e-12)
    with pytest.raises(DomainError):
        LinkGeometry.from_d3d(5, 35, 1.5)


def test_model_id_parse_and_aliases():
    mid = ModelId.parse("3gpp:umi:los:standard")
    assert mid.org is Org.TR38901 and mid.scenario is Scenario.UMI_STREET
    assert str(mid) == "tr38901:umi-street:los:standard"
    assert ModelId.parse(str(mid)) == mid
    with pytest.raises(UnknownModelError):
        ModelId.parse("5gcm:umi-street:los")
    with pytest.raises(UnknownModelError):
        ModelId.parse("acme:umi-street:los:ci")


def test_environment_defaults():
    env = EnvironmentConstants()
    assert (env.W, env.h) == (20.0, 5.0)
    with pytest.raises(DomainError):
        EnvironmentConstants(W=0)


def test_range_min_le_max():
    with pytest.raises(ValueError):
        ApplicabilityRange(fc=(6.0, 0.5))


def test_check_applicability_metis_fc():
    report = check_applicability("metis:umi-street:nlos:standard", 28, LinkGeometry(100, 10, 1.5))
    assert report == ["fc out of 0.45-6 GHz (got 28)"]


def test_check_applicability_clean():
    assert check_applicability("tr38901:umi-street:los:standard", 28, LinkGeometry(100, 10, 1.5)) == []


def test_check_applicability_rma_distance():
    report = check_applicability("itu-r:rma:nlos:standard", 24, LinkGeometry(6000, 35, 1.5))
    assert report == ["d2D out of 10-5000 m (got 6000)"]


def test_check_applicability_environment():
    report = check_applicability(
        "itu-r:rma:nlos:standard", 24, LinkGeometry(1000, 35, 1.5), EnvironmentConstants(W=60, h=5)
    )
    assert report == ["W out of 5-50 m (got 60)"]


def test_lookup_is_total_over_registered_ids():
    ids = all_models()
    assert len(ids) == len(set(ids))
    for mid in ids:
        assert lookup(mid).id == mid
        assert lookup(str(mid)).id == mid
    with pytest.raises(UnknownModelError):
        lookup("5gcm:rma:los:ci")


def test_los_probability_families_flagged():
    assert ModelId("tr38901", "uma", "los", "d1d2").is_los_probability
    assert not ModelId("5gcm", "uma", "los", Family.CI).is_los_probability
