import math

import numpy as np
import pytest

from mmprop.core import DomainError, LinkGeometry, UnknownModelError
from mmprop.los_probability import (
    LOS_PROBABILITY_MODELS,
    MIXED_OFFICE,
    OPEN_OFFICE,
    D1D2Params,
    default_los_model,
    los_prob_d1d2,
    los_prob_inh,
    los_prob_rma,
    los_prob_uma,
    los_probability,
    uma_height_correction,
)


@pytest.mark.parametrize(
    "d, params, expected",
    [
        (10, D1D2Params(18, 36), 1.0),
        (36, D1D2Params(18, 36), 0.6839397205857212),
        (100, D1D2Params(22, 100, squared=True), 0.2569942105311942),
        (0, D1D2Params(18, 36), 1.0),
        (0, D1D2Params(22, 100, squared=True), 1.0),
    ],
)
def test_d1d2(d, params, expected):
    assert los_prob_d1d2(d, params) == pytest.approx(expected, abs=1e-12)


@pytest.mark.parametrize(
    "d, h_ue, expected",
    [(100, 1.5, 0.34767083684423117), (100, 23, 0.5707960361245006), (10, 1.5, 1.0)],
)
def test_uma(d, h_ue, expected):
    assert los_prob_uma(d, h_ue, D1D2Params(18, 63)) == pytest.approx(expected, abs=1e-12)


def test_uma_correction_value():
    assert uma_height_correction(100, 23) == pytest.approx(1.25 * math.exp(-2 / 3), rel=1e-12)
    assert uma_height_correction(100, 12.9) == 0.0
    assert uma_height_correction(18, 23) == 0.0


def test_uma_above_23m_is_undefined():
    with pytest.raises(DomainError):
        los_prob_uma(100, 23.5, D1D2Params(18, 63))


def test_uma_clamp_and_raw():
    # C is large near d = 450 m; the raw product can exceed the clamped value
    d = np.linspace(19, 2000, 2000)
    raw = los_prob_uma(d, 23, D1D2Params(18, 63), clamp=False)
    clamped = los_prob_uma(d, 23, D1D2Params(18, 63))
    assert np.all(clamped <= 1.0)
    np.testing.assert_array_equal(np.minimum(raw, 1.0), clamped)


def test_uma_low_ue_equals_plain_d1d2():
    d = np.geomspace(0.1, 1e5, 500)
    np.testing.assert_array_equal(
        los_prob_uma(d, 1.5, D1D2Params(18, 63)), los_prob_d1d2(d, D1D2Params(18, 63))
    )


@pytest.mark.parametrize(
    "d, params, expected",
    [(1.0, MIXED_OFFICE, 1.0), (10, MIXED_OFFICE, 0.2874241595601194), (5, OPEN_OFFICE, 1.0)],
)
def test_inh(d, params, expected):
    assert los_prob_inh(d, params) == pytest.approx(expected, abs=1e-12)


def test_inh_mixed_discontinuity_as_printed():
    # 6.5 m belongs to the third branch (<= sign wins); just below it, the second
    assert los_prob_inh(6.5, MIXED_OFFICE) == pytest.approx(0.32, abs=1e-15)
    assert los_prob_inh(6.5 - 1e-9, MIXED_OFFICE) == pytest.approx(math.exp(-5.3 / 4.7), abs=1e-9)


@pytest.mark.parametrize("d, expected", [(10, 1.0), (1010, math.exp(-1)), (0, 1.0)])
def test_rma(d, expected):
    assert los_prob_rma(d) == pytest.approx(expected, abs=1e-12)


def test_rma_continuous_at_10m():
    assert los_prob_rma(10 + 1e-9) == pytest.approx(1.0, abs=1e-11)


def test_vectorized_matches_scalar():
    d = np.array([0.0, 5.0, 36.0, 400.0])
    vec = los_prob_d1d2(d, D1D2Params(18, 36))
    assert isinstance(vec, np.ndarray)
    assert [los_prob_d1d2(float(x), D1D2Params(18, 36)) for x in d] == list(vec)


def test_negative_distance_rejected():
    with pytest.raises(DomainError):
        los_prob_d1d2(-1, D1D2Params(18, 36))


def test_dispatch_examples():
    assert los_probability("tr38901:umi-street:los:d1d2", LinkGeometry(36, 10, 1.5)) == pytest.approx(
        0.6839397205857212, abs=1e-12
    )
    assert los_probability("5gcm:umi-street:los:d1d2", LinkGeometry(20, 10, 1.5)) == 1.0
    assert los_probability("metis:uma:los:d1d2", LinkGeometry(100, 25, 1.5)) == pytest.approx(
        0.34767083684423117, abs=1e-12
    )


def test_indoor_rule_uses_outdoor_distance():
    geom = LinkGeometry(100, 10, 1.5, d2d_out=36, d2d_in=64)
    p = los_probability("tr38901:umi-street:los:d1d2", geom, indoor=True)
    assert p == pytest.approx(0.6839397205857212, abs=1e-12)


def test_indoor_rule_errors():
    with pytest.raises(DomainError):
        los_probability("tr38901:umi-street:los:d1d2", LinkGeometry(100, 10, 1.5), indoor=True)
    with pytest.raises(DomainError):
        los_probability(
            "5gcm:umi-street:los:d1d2", LinkGeometry(100, 10, 1.5, d2d_out=36), indoor=True
        )


def test_unknown_model():
    with pytest.raises(UnknownModelError):
        los_probability("mmmagic:uma:los:d1d2", LinkGeometry(100, 25, 1.5))


def test_default_models():
    assert str(default_los_model("umi-open-square")) == "tr38901:umi-street:los:d1d2"
    assert str(default_los_model("rma")) == "tr38901:rma:los:exponential"


def test_d1d2_strictly_decreasing_past_d1():
    for params in (D1D2Params(18, 36), D1D2Params(20, 39), D1D2Params(22, 100, squared=True)):
        d = np.linspace(params.d1 + 0.01, 2000, 5000)
        assert np.all(np.diff(los_prob_d1d2(d, params)) < 0)
        assert np.all(los_prob_d1d2(np.linspace(0, params.d1, 100), params) == 1.0)


def test_squared_never_exceeds_base():
    d = np.geomspace(1e-3, 1e5, 2000)
    base = los_prob_d1d2(d, D1D2Params(22, 100))
    sq = los_prob_d1d2(d, D1D2Params(22, 100, squared=True))
    assert np.all(sq <= base)
    assert np.all((sq == base) == (base == 1.0))


def test_every_model_in_unit_interval():
    d = np.concatenate([[0.0], np.geomspace(1e-3, 1e5, 2000)])
    for entry in LOS_PROBABILITY_MODELS.values():
        for h_ue in (1.5, 13.0, 23.0):
            p = entry.evaluate(d, h_ue)
            assert np.all((p >= 0) & (p <= 1)), entry.id
