import numpy as np
import pytest
from hypothesis import given, strategies as st

from finsler_polydisc.core import MetricParams, Rng
from finsler_polydisc.distortion import (
    ConvexMapping,
    HalfPlaneMoebius,
    Identity,
    LogHalf,
    derivative_diag,
    distortion_ratio,
    eval_convex,
    inner_inequalities,
    loewner_bounds,
    lower_witness,
    radial_terms,
    sample_convex_mapping,
    upper_witness,
    verify_distortion,
    verify_distortion_radial,
)
from finsler_polydisc.metrics import eval_F2

from .conftest import PARAM_GRID
from .strategies import disc_numbers, params

seeds = st.integers(0, 2**32 - 1)


def test_identity_factors():
    z = np.array([0.3j, -0.5])
    f = ConvexMapping.identity(2)
    assert np.array_equal(eval_convex(f, z), z)
    assert np.array_equal(derivative_diag(f, z), [1, 1])


def test_half_plane_derivative():
    f = ConvexMapping.half_plane([0.0])
    assert derivative_diag(f, [0.4])[0] == pytest.approx(1 / 0.6**2, rel=1e-15)


def test_log_normalized():
    f = ConvexMapping((LogHalf(),))
    assert eval_convex(f, [0])[0] == 0 and derivative_diag(f, [0])[0] == 1


def test_loewner_examples():
    lo, val, up = loewner_bounds(Identity(), 0.3 - 0.2j)
    assert val == 1 and lo < 1 < up
    lo, val, up = loewner_bounds(HalfPlaneMoebius(1.0), 0.6)
    assert val == pytest.approx(up, rel=1e-14)
    lo, val, up = loewner_bounds(LogHalf(), 0.5)
    assert val == pytest.approx(4 / 3, rel=1e-15) and lo < val < up
    with pytest.raises(ValueError):
        loewner_bounds(Identity(), 1.0)


@given(disc_numbers(0.99), disc_numbers(1.0))
def test_loewner_holds_for_half_plane_family(z, c):
    loewner_bounds(HalfPlaneMoebius(c), z)
    loewner_bounds(LogHalf(), z)


def test_factor_validation():
    with pytest.raises(ValueError):
        HalfPlaneMoebius(1.1)


def test_factor_derivatives_match_finite_difference():
    h = 1e-6
    for fac in (HalfPlaneMoebius(0.3 - 0.8j), LogHalf(), Identity()):
        z = 0.4 + 0.3j
        fd = (fac.value(z + h) - fac.value(z - h)) / (2 * h)
        assert fac.derivative(z) == pytest.approx(fd, rel=1e-8)


@pytest.mark.parametrize("b", [0.1, 0.5, 0.9])
@pytest.mark.parametrize("p", [MetricParams(0.0, 2), MetricParams(1.0, 3), MetricParams(3.0, 5)])
def test_pinned_witnesses(b, p):
    thetas = np.array([0.0, 1.1, -2.3])
    f = ConvexMapping.half_plane(thetas)
    v = np.array([1.0, 0.5j, -0.2])
    _, mid, up = distortion_ratio(p, f, upper_witness(thetas, b), v)
    assert mid == pytest.approx(up, rel=1e-10)
    lo, mid, _ = distortion_ratio(p, f, lower_witness(thetas, b), v)
    assert mid == pytest.approx(lo, rel=1e-10)


def test_identity_map_bounds_hold(gen):
    for p in PARAM_GRID[:4]:
        rep = verify_distortion(p, ConvexMapping.identity(3), 1000, Rng(1))
        assert not rep.violated


@given(seeds, st.integers(1, 4), params)
def test_random_mappings_respect_bounds(seed, m, p):
    f = sample_convex_mapping(Rng(seed), m)
    assert not verify_distortion(p, f, 300, Rng(seed, (1,))).violated
    assert not verify_distortion_radial(p, f, 300, Rng(seed, (2,))).violated


@pytest.mark.parametrize("b", [0.1, 0.5, 0.9])
def test_radial_right_equality(b):
    thetas = np.array([0.4, -1.0])
    f = ConvexMapping.half_plane(thetas)
    p = MetricParams(1.0, 2)
    (lo, mid, up), _ = radial_terms(p, f, upper_witness(thetas, b)[None, :])
    assert mid[0] == pytest.approx(up[0], rel=1e-10)


def test_radial_terms_vanish_at_origin():
    f = sample_convex_mapping(Rng(1), 3)
    (lo, mid, up), (slo, smid, sup) = radial_terms(MetricParams(1.0, 2), f, np.zeros((1, 3)))
    assert lo[0] == mid[0] == up[0] == 0.0
    assert slo[0] == smid[0] == sup[0] == 0.0


@given(disc_numbers(0.95), seeds)
def test_one_variable_reduction(z, seed):
    # m = 1, t = 0: the chain reduces to the one-variable Loewner distortion of |f'|^2
    f = sample_convex_mapping(Rng(seed), 1)
    r = abs(z)
    lo, mid, up = distortion_ratio(MetricParams(0.0, 2), f, [z], [1.0])
    assert mid == pytest.approx(abs(f.derivatives(np.array([z]))[0]) ** 2, rel=1e-12)
    assert lo == pytest.approx(1 / (1 + r) ** 4, rel=1e-12)
    assert up == pytest.approx(1 / (1 - r) ** 4, rel=1e-12)


@given(st.lists(disc_numbers(0.99), min_size=1, max_size=5))
def test_inner_inequalities_hold(z):
    upper, lower = inner_inequalities(np.array(z))
    assert np.all(upper >= -1e-12 / (1 - np.abs(z)) ** 4)
    assert np.all(lower >= -1e-12)


def test_middle_term_matches_definition():
    p = MetricParams(0.5, 3)
    f = sample_convex_mapping(Rng(7), 3)
    z = np.array([0.1, -0.3j, 0.5])
    v = np.array([1.0, 1j, -1.0])
    _, mid, _ = distortion_ratio(p, f, z, v)
    assert mid == pytest.approx(eval_F2(p, np.zeros(3), f.derivatives(z) * v).F2, rel=1e-15)


def test_json_round_trip():
    f = sample_convex_mapping(Rng(3), 5)
    assert ConvexMapping.from_dict(f.to_dict()).to_dict() == f.to_dict()
