import json
import math

import pytest
from hypothesis import given, strategies as st

from ddestab.params import (
    MU_SECTOR_MAX,
    NormParams,
    ParamSet,
    Region,
    classify,
    criterion_delta,
    criterion_norm,
    critical_h,
    linear_boundary_theta,
    linear_criterion,
    local_stability_boundary,
    normalize,
    pi_curve,
    region_boundary_rows,
    sharp_boundary_theta,
    write_region_csv,
    write_region_json,
)

# frozen reference values (40-digit arithmetic, rounded to float)
SHARP_AT_MINUS_2 = 0.36464311358790925
LOCAL_THETA_AT_MINUS_2 = 0.29843605919227489
LOCAL_H_AT_MINUS_2 = 1.2091995761561452
CRITICAL_H_SMALL_DECAY = 1.5000791704166629
PI1_AT_01 = 0.89108910891089109
PI2_AT_01 = 0.85359848951156777
PI3_AT_01 = 0.86358974358974359


def test_param_validation():
    with pytest.raises(ValueError):
        ParamSet(a=1.0, delta=1.0, h=1.0)
    with pytest.raises(ValueError):
        ParamSet(a=-2.0, delta=0.0, h=1.0)
    with pytest.raises(ValueError):
        ParamSet(a=-2.0, delta=1.0, h=-1.0)
    with pytest.raises(ValueError):
        NormParams(a=-2.0, theta=1.5)
    with pytest.raises(ValueError):
        NormParams(a=0.5, theta=0.5)


def test_normalize_roundtrip_values():
    p = ParamSet(a=-3.0, delta=1.5, h=0.4)
    np_ = normalize(p)
    assert np_.a == pytest.approx(-2.0)
    assert np_.theta == pytest.approx(math.exp(-0.6))
    assert np_.mu() == pytest.approx(0.5)
    assert np_.delay == pytest.approx(0.6)


def test_criterion_matches_between_coordinates():
    for a, delta, h in [(-2.0, 1.0, 0.5), (-3.0, 0.7, 1.0), (-1.2, 2.0, 0.3), (-8.0, 1.0, 0.1)]:
        raw = criterion_delta(a, delta, h)
        nrm = criterion_norm(normalize(ParamSet(a=a, delta=delta, h=h)))
        assert raw == nrm


def test_sharp_boundary_value():
    assert sharp_boundary_theta(-2.0) == pytest.approx(SHARP_AT_MINUS_2, abs=2e-16)


def test_sharp_boundary_unconditional_branch():
    # slopes in [-1, 0) never exceed the threshold: every theta certified
    assert sharp_boundary_theta(-1.0) == 0.0
    assert sharp_boundary_theta(-0.5) < 0.0


def test_criterion_iff_threshold():
    for a in (-1.5, -2.0, -5.0, -20.0):
        thr = sharp_boundary_theta(a)
        assert criterion_norm(NormParams(a=a, theta=min(1.0 - 1e-9, thr + 1e-6)))
        assert not criterion_norm(NormParams(a=a, theta=thr - 1e-6))


def test_linear_criterion_iff_threshold():
    for a in (-1.5, -2.0, -5.0, -20.0):
        thr = linear_boundary_theta(a)
        assert linear_criterion(NormParams(a=a, theta=min(1.0 - 1e-9, thr + 1e-6)))
        assert not linear_criterion(NormParams(a=a, theta=thr - 1e-6))


def test_linear_boundary_matches_pi1():
    # the linear threshold against slope equals the upper band curve against mu
    for a in (-1.5, -2.0, -4.0, -10.0):
        mu = -1.0 / a
        assert linear_boundary_theta(a) == pytest.approx(pi_curve(1, mu), rel=1e-14)


def test_sharp_boundary_matches_pi2():
    for a in (-1.5, -2.0, -4.0, -10.0):
        mu = -1.0 / a
        assert sharp_boundary_theta(a) == pytest.approx(pi_curve(2, mu), rel=1e-13)


def test_critical_h_value():
    assert critical_h(-1.0, 1e-4) == pytest.approx(CRITICAL_H_SMALL_DECAY, abs=1e-11)


def test_critical_h_unconditional():
    assert critical_h(-0.5, 1.0) == math.inf


def test_critical_h_is_a_threshold():
    a, delta = -2.0, 1.0
    hc = critical_h(a, delta)
    assert criterion_delta(a, delta, hc * 0.999)
    assert not criterion_delta(a, delta, hc * 1.001)


def test_pi_curves_frozen_values():
    assert pi_curve(1, 0.1) == pytest.approx(PI1_AT_01, abs=2e-16)
    assert pi_curve(2, 0.1) == pytest.approx(PI2_AT_01, abs=2e-16)
    assert pi_curve(3, 0.1) == pytest.approx(PI3_AT_01, abs=2e-16)
    assert pi_curve(4, 0.5) == 0.8


def test_pi_curve_domain():
    with pytest.raises(ValueError):
        pi_curve(1, 0.0)
    with pytest.raises(ValueError):
        pi_curve(1, 1.5)
    with pytest.raises(ValueError):
        pi_curve(5, 0.5)


@given(mu=st.floats(1e-3, 1.0 - 1e-3))
def test_band_is_nonempty(mu):
    assert pi_curve(1, mu) > pi_curve(2, mu)


def test_mu_sector_max_is_curve_crossing():
    # curve 1 meets the 0.8 floor exactly at the corner cut-off
    assert pi_curve(1, MU_SECTOR_MAX) == pytest.approx(0.8, abs=1e-15)


def test_classify_regions():
    assert classify(NormParams(a=-2.0, theta=0.5)).tag is Region.LINEAR
    assert classify(NormParams(a=-2.0, theta=0.39)).tag is Region.CORE
    assert classify(NormParams(a=-10.0, theta=0.88)).tag is Region.SECTOR
    lab = classify(NormParams(a=-2.0, theta=0.3))
    assert lab.tag is Region.NOT_CERTIFIED
    assert not lab.certified
    assert lab.reason


def test_classify_certified_flag():
    assert classify(NormParams(a=-2.0, theta=0.5)).certified
    assert classify(NormParams(a=-2.0, theta=0.39)).certified


def test_classify_boundary_theta_is_rejected():
    # the criterion is strict: theta exactly on the curve is not certified
    a = -2.0
    thr = sharp_boundary_theta(a)
    assert classify(NormParams(a=a, theta=thr)).tag is Region.NOT_CERTIFIED


def test_classify_near_one_slope():
    # normalized slopes in (-1, 0) are certified for every theta
    lab = classify(NormParams(a=-0.9, theta=0.05))
    assert lab.certified


def test_local_boundary_values():
    assert local_stability_boundary(-2.0) == pytest.approx(LOCAL_THETA_AT_MINUS_2, abs=1e-14)
    assert -math.log(local_stability_boundary(-2.0)) == pytest.approx(
        LOCAL_H_AT_MINUS_2, abs=1e-13
    )


def test_local_boundary_hayes_limit():
    # steep feedback: the critical delay times the slope tends to pi/2
    a = -1e4
    h_loc = -math.log(local_stability_boundary(a))
    assert h_loc * (-a) == pytest.approx(math.pi / 2.0, abs=2e-4)


def test_global_below_local():
    # the certified threshold can only be more conservative than the linearized one
    for a in (-1.5, -2.0, -5.0, -50.0):
        assert sharp_boundary_theta(a) > local_stability_boundary(a)


def test_region_rows_and_files(tmp_path):
    mus = [0.1, 0.5, 0.9]
    rows = region_boundary_rows(mus)
    assert [r["mu"] for r in rows] == mus
    assert rows[0]["theta_pi1"] == pytest.approx(PI1_AT_01)

    csv_path = tmp_path / "region.csv"
    write_region_csv(csv_path, mus)
    text = csv_path.read_text().splitlines()
    assert text[0] == "mu,theta_pi1,theta_pi2,theta_pi3,theta_local"
    assert len(text) == 4

    json_path = tmp_path / "region.json"
    write_region_json(json_path, mus)
    data = json.loads(json_path.read_text())
    assert len(data["rows"]) == 3


def test_region_files_deterministic(tmp_path):
    mus = [i / 17 for i in range(1, 17)]
    p1, p2 = tmp_path / "a.csv", tmp_path / "b.csv"
    write_region_csv(p1, mus)
    write_region_csv(p2, mus)
    assert p1.read_bytes() == p2.read_bytes()
