import json
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from finsler_polydisc.automorphisms import moebius_transport, sample_automorphism
from finsler_polydisc.core import DimensionMismatchError, DomainError, MetricParams, Rng, uniform_disc
from finsler_polydisc.distortion import ConvexMapping
from finsler_polydisc.maps import (
    MAP_FAMILIES,
    Composed,
    ConvexProduct,
    CoordMoebius,
    Extremal,
    HomogeneousPower,
    InadmissibleMapError,
    Linear,
    evaluate,
    jacobian,
    linear_part,
    map_from_dict,
    map_from_json,
    orthant_witness,
    pullback_F2,
    pushforward,
    row_sum_admissible,
    sample_linear_matrices,
    sample_map,
)
from finsler_polydisc.metrics import eval_F2

seeds = st.integers(0, 2**32 - 1)
families = st.sampled_from(MAP_FAMILIES)


def _fd_jacobian(f, z, h=1e-6):
    # holomorphic: df/dz^i = (f(z + h e_i) - f(z - h e_i)) / 2h along the real direction
    cols = []
    for i in range(f.m):
        e = np.zeros(f.m, dtype=complex)
        e[i] = h
        cols.append((f.apply_array(z + e) - f.apply_array(z - e)) / (2 * h))
    return np.stack(cols, axis=1)


def test_extremal_examples():
    f = Extremal(2, 4)
    assert np.array_equal(evaluate(f, [0.3, 0.5]), [0.3] * 4)
    J = jacobian(f, [0.3, 0.5])
    assert np.array_equal(J[:, 0], np.ones(4)) and np.array_equal(J[:, 1], np.zeros(4))
    assert np.array_equal(pushforward(f, [0, 0], [1, 0]), np.ones(4))
    assert row_sum_admissible(J)


def test_linear_identity():
    z = np.array([0.2j, -0.4])
    assert np.array_equal(evaluate(Linear(np.eye(2)), z), z)
    assert np.array_equal(jacobian(Linear(np.eye(2)), z), np.eye(2))


def test_row_sum_examples():
    assert row_sum_admissible([[0.5, 0.5]])
    assert not row_sum_admissible([[0.8, 0.3]])


def test_inadmissible_linear_rejected():
    with pytest.raises(InadmissibleMapError):
        evaluate(Linear([[0.8, 0.3]]), [0.0, 0.0])


def test_half_rows_stay_inside(gen):
    z = uniform_disc(gen, (1000, 2), 1 - 1e-9)
    assert np.all(np.abs(Linear([[0.5, 0.5]]).apply_array(z)) < 1)


def test_moebius_transport_jacobian():
    z0 = np.array([0.3 + 0.1j, -0.6j])
    f = moebius_transport(z0).as_map()
    np.testing.assert_allclose(jacobian(f, z0), np.diag(1 / (1 - np.abs(z0) ** 2)), rtol=1e-15)


def test_pullback_extremal_value():
    val = pullback_F2(MetricParams(1.0, 2), Extremal(2, 2), [0, 0], [1, 0])
    assert val == pytest.approx((2 + math.sqrt(2)) / 2, abs=1e-15)


def test_pullback_identity_and_zero_vector():
    p = MetricParams(0.5, 3)
    z, v = np.array([0.4, 0.1j]), np.array([1, 1j])
    assert pullback_F2(p, Linear(np.eye(2)), z, v) == pytest.approx(eval_F2(p, z, v).F2, rel=1e-15)
    assert np.array_equal(pushforward(sample_map(Rng(1), "composed", 2, 3), z, [0, 0]), np.zeros(3))


@given(seeds, st.integers(1, 4))
def test_pullback_by_automorphism_is_invariant(seed, m):
    p = MetricParams(1.0, 3)
    g = sample_automorphism(Rng(seed), m, 0.9).as_map()
    z = uniform_disc(Rng(seed, (1,)).generator(), m, 0.9)
    v = np.linspace(1, 2, m) * 1j
    assert pullback_F2(p, g, z, v) == pytest.approx(eval_F2(p, z, v).F2, rel=1e-9)


def test_linear_part_examples():
    lp = linear_part(Extremal(3, 2))
    assert np.array_equal(lp.matrix, [[1, 0, 0], [1, 0, 0]])
    th = np.array([0.3, -1.2])
    lp = linear_part(CoordMoebius(2, [0, 1], [0, 0], th))
    np.testing.assert_allclose(lp.matrix, np.diag(np.exp(1j * th)), atol=1e-15)
    assert row_sum_admissible(lp.matrix)
    A = sample_linear_matrices(np.random.default_rng(0), 1, 3, 2)[0]
    np.testing.assert_array_equal(linear_part(Linear(A)).matrix, A)
    with pytest.raises(ValueError):
        linear_part(CoordMoebius(1, [0], [0.5], [0.0]))


@given(seeds, families, st.integers(1, 4), st.integers(1, 4))
def test_linear_part_of_origin_fixing_maps_is_admissible(seed, family, m, n):
    f = sample_map(Rng(seed), family, m, n)
    try:
        lp = linear_part(f)
    except ValueError:
        return
    assert row_sum_admissible(lp.matrix)


@given(seeds, families, st.integers(1, 4), st.integers(1, 4))
def test_sampled_maps_send_interior_to_interior(seed, family, m, n):
    f = sample_map(Rng(seed), family, m, n)
    assert f.m == m and f.n == n
    z = uniform_disc(Rng(seed, (1,)).generator(), (100, m), 1 - 1e-9)
    assert np.all(np.abs(f.apply_array(z)) < 1)
    if isinstance(f, Linear):
        assert row_sum_admissible(f.matrix)


def test_sampling_is_deterministic():
    for family in MAP_FAMILIES:
        a = sample_map(Rng(11), family, 3, 2).to_dict()
        assert a == sample_map(Rng(11), family, 3, 2).to_dict()


def test_unknown_family():
    with pytest.raises(ValueError):
        sample_map(Rng(1), "proper", 2, 2)


@given(seeds, families, st.integers(1, 3), st.integers(1, 3))
def test_jacobian_matches_finite_difference(seed, family, m, n):
    f = sample_map(Rng(seed), family, m, n, 0.8)
    z = uniform_disc(Rng(seed, (2,)).generator(), m, 0.7)
    J = jacobian(f, z)
    np.testing.assert_allclose(J, _fd_jacobian(f, z), rtol=1e-6, atol=1e-7 * (1 + np.max(np.abs(J))))


@given(seeds, st.integers(1, 3), st.integers(1, 3), st.integers(1, 3))
def test_chain_rule(seed, m, mid, n):
    f = sample_map(Rng(seed, (0,)), "coord_moebius", m, mid)
    g = sample_map(Rng(seed, (1,)), "linear", mid, n)
    h = Composed((f, g))
    z = uniform_disc(Rng(seed, (2,)).generator(), m, 0.9)
    v = np.ones(m) * (0.3 + 1j)
    np.testing.assert_allclose(jacobian(h, z), jacobian(g, f.apply_array(z)) @ jacobian(f, z), rtol=1e-9, atol=1e-14)
    np.testing.assert_allclose(pushforward(h, z, v), pushforward(g, f.apply_array(z), pushforward(f, z, v)), rtol=1e-9, atol=1e-14)
    p = MetricParams(1.0, 2)
    assert pullback_F2(p, h, z, v) == pytest.approx(
        pullback_F2(p, g, f.apply_array(z), pushforward(f, z, v)), rel=1e-9, abs=1e-300
    )


def test_homogeneous_scaling():
    f = HomogeneousPower(Linear([[0.5, 0.25j]]), 3, [0.7])
    z = np.array([0.3, -0.4j])
    lam = 0.5 * np.exp(0.4j)
    np.testing.assert_allclose(f.apply_array(lam * z), lam**3 * f.apply_array(z), rtol=1e-14)
    with pytest.raises(ValueError):
        HomogeneousPower(CoordMoebius(1, [0], [0.0], [0.0]), 2)


def test_coord_moebius_validation():
    with pytest.raises(ValueError):
        CoordMoebius(2, [2], [0.0], [0.0])
    with pytest.raises(DimensionMismatchError):
        CoordMoebius(2, [0, 1], [0.0, 0.0], [0.0])


def test_convex_product_is_not_polydisc_valued():
    f = ConvexProduct(ConvexMapping.half_plane([0.0]))
    assert not f.maps_into_polydisc()
    assert evaluate(f, [0.9]) == pytest.approx(9.0)


def test_evaluate_rejects_boundary_image():
    # within the admissibility slack, yet the image of a point near the boundary leaves the disc
    with pytest.raises(DomainError):
        evaluate(Linear([[1.0 + 1e-13, 0.0]]), [1 - 1e-14, 0.0])


def test_lemma_witness_reaches_row_sum():
    A = np.array([[0.8 * np.exp(0.3j), 0.3 * np.exp(-2.0j)]])
    z = orthant_witness(A, 0)
    assert abs((A @ z)[0]) == pytest.approx(1.1, rel=1e-15)
    for eps in (1e-2, 1e-4, 1e-6):
        assert abs((A @ ((1 - eps) * z))[0]) > 1 - 1e-9


@given(seeds, families, st.integers(1, 3), st.integers(1, 3))
def test_json_round_trip(seed, family, m, n):
    f = sample_map(Rng(seed), family, m, n)
    g = map_from_json(json.dumps(f.to_dict()))
    z = uniform_disc(Rng(seed, (3,)).generator(), m, 0.9)
    assert g.to_dict() == f.to_dict()
    np.testing.assert_array_equal(g.apply_array(z), f.apply_array(z))


def test_json_round_trip_convex_product():
    f = ConvexProduct(ConvexMapping.half_plane([0.2, 1.0]))
    assert map_from_dict(f.to_dict()).to_dict() == f.to_dict()
    with pytest.raises(ValueError):
        map_from_dict({"type": "spline"})
