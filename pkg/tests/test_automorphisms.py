import numpy as np
import pytest
from hypothesis import given, strategies as st

from finsler_polydisc.automorphisms import (
    AutElement,
    apply,
    compose,
    differential,
    invert,
    moebius_transport,
    sample_automorphism,
    sample_isotropy,
    transport_to,
)
from finsler_polydisc.core import DimensionMismatchError, MetricParams, Rng, uniform_disc
from finsler_polydisc.metrics import eval_F2, eval_phi2

from .strategies import params, point_and_vector

seeds = st.integers(0, 2**32 - 1)


def _points(seed, size, m):
    return uniform_disc(Rng(seed).generator(), (size, m), 0.95)


def test_transport_sends_center_to_origin():
    z0 = np.array([0.3 + 0.4j, -0.7, 0.1j])
    assert np.allclose(apply(moebius_transport(z0), z0).coords, 0.0, atol=1e-15)


def test_transport_of_origin_is_identity():
    assert moebius_transport([0.0, 0.0]) == AutElement.identity(2)


def test_transport_differential_at_center():
    z0 = np.array([0.3 + 0.4j, -0.7])
    v = np.array([1.0 - 2j, 0.5j])
    np.testing.assert_allclose(differential(moebius_transport(z0), z0, v), v / (1 - np.abs(z0) ** 2), rtol=1e-15)


def test_identity_and_permutation():
    z = np.array([0.1 + 0.2j, -0.5j])
    assert np.array_equal(apply(AutElement.identity(2), z).coords, z)
    swap = AutElement([0, 0], [0, 0], [1, 0])
    assert np.array_equal(apply(swap, z).coords, z[::-1])
    assert np.array_equal(differential(AutElement.identity(2), z, [1, 2j]), [1, 2j])


def test_bad_permutation_rejected():
    with pytest.raises(ValueError):
        AutElement([0, 0], [0, 0], [0, 0])


def test_dimension_mismatch():
    with pytest.raises(DimensionMismatchError):
        apply(AutElement.identity(2), [0.1, 0.2, 0.3])
    with pytest.raises(DimensionMismatchError):
        compose(AutElement.identity(2), AutElement.identity(3))


def test_invert_identity():
    assert invert(AutElement.identity(3)) == AutElement.identity(3)


@given(seeds, st.integers(1, 5))
def test_inverse_law(seed, m):
    g = sample_automorphism(Rng(seed), m)
    z = _points(seed, 100, m)
    np.testing.assert_allclose(compose(g, invert(g)).apply_array(z), z, atol=1e-10)
    np.testing.assert_allclose(compose(invert(g), g).apply_array(z), z, atol=1e-10)


@given(seeds, st.integers(1, 4))
def test_compose_matches_sequential_application(seed, m):
    g = sample_automorphism(Rng(seed, (0,)), m)
    h = sample_automorphism(Rng(seed, (1,)), m)
    z = _points(seed, 50, m)
    np.testing.assert_allclose(compose(g, h).apply_array(z), g.apply_array(h.apply_array(z)), atol=1e-10)


@given(seeds, st.integers(1, 4))
def test_associativity(seed, m):
    g, h, k = (sample_automorphism(Rng(seed, (i,)), m) for i in range(3))
    z = _points(seed, 50, m)
    np.testing.assert_allclose(compose(compose(g, h), k).apply_array(z), compose(g, compose(h, k)).apply_array(z), atol=1e-9)


@given(seeds, st.integers(1, 4))
def test_differential_chain_rule(seed, m):
    g = sample_automorphism(Rng(seed, (0,)), m, 0.8)
    h = sample_automorphism(Rng(seed, (1,)), m, 0.8)
    z = _points(seed, 1, m)[0] * 0.9
    v = np.arange(1, m + 1) * (1 - 0.5j)
    lhs = differential(compose(g, h), z, v)
    rhs = differential(g, h.apply_array(z), differential(h, z, v))
    np.testing.assert_allclose(lhs, rhs, rtol=1e-9, atol=1e-12)


@given(seeds, st.integers(1, 4))
def test_differential_matches_finite_difference(seed, m):
    g = sample_automorphism(Rng(seed), m, 0.8)
    z = _points(seed, 1, m)[0] * 0.8
    v = np.exp(1j * np.arange(m))
    h = 1e-6
    fd = (g.apply_array(z + h * v) - g.apply_array(z - h * v)) / (2 * h)
    np.testing.assert_allclose(differential(g, z, v), fd, rtol=1e-6, atol=1e-8)


def test_isotropy_properties():
    p = MetricParams(1.5, 3)
    g = sample_isotropy(Rng(3), 4)
    assert g.fixes_origin()
    assert np.array_equal(apply(g, np.zeros(4)).coords, np.zeros(4))
    assert compose(g, g).fixes_origin()
    v = np.array([1.0, -2j, 0.5, 3 + 1j])
    assert eval_phi2(p, differential(g, np.zeros(4), v)) == pytest.approx(eval_phi2(p, v), rel=1e-14)


def test_conjugated_map_fixes_origin():
    z0 = np.array([0.2 - 0.5j, 0.6])
    phi = sample_automorphism(Rng(9), 2)
    b = phi.apply_array(z0)
    conj = compose(compose(moebius_transport(b), phi), invert(moebius_transport(z0)))
    np.testing.assert_allclose(apply(conj, np.zeros(2)).coords, 0.0, atol=1e-12)


def test_transport_to():
    z0, w0 = np.array([0.5, -0.2j]), np.array([0.1j, 0.9])
    np.testing.assert_allclose(apply(transport_to(z0, w0), z0).coords, w0, atol=1e-12)


@given(params, point_and_vector(radius=0.9), seeds)
def test_metric_invariance(p, zv, seed):
    z, v = zv
    g = sample_automorphism(Rng(seed), z.size, 0.9)
    base = eval_F2(p, z, v).F2
    moved = eval_F2(p, g.apply_array(z), differential(g, z, v)).F2
    assert moved == pytest.approx(base, rel=1e-9)


@given(params, point_and_vector(radius=0.9))
def test_transport_identity(p, zv):
    z, v = zv
    F2 = eval_F2(p, z, v).F2
    assert eval_phi2(p, differential(moebius_transport(z), z, v)) == pytest.approx(F2, rel=1e-10)


def test_json_round_trip():
    g = sample_automorphism(Rng(4), 3)
    assert AutElement.from_dict(g.to_dict()) == g
