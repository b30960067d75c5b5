import numpy as np
import pytest
from hypothesis import assume, given, strategies as st

from finsler_polydisc.core import (
    DEFAULT_TOL,
    DimensionMismatchError,
    DomainError,
    MetricParams,
    PolydiscPoint,
    Rng,
    TangentVector,
    Tolerance,
    approx_eq,
    decode_complex,
    encode_complex,
    sample_polydisc_point,
)


def test_sample_respects_radius_cap():
    p = sample_polydisc_point(Rng(1), 3, 0.9)
    assert p.dim == 3
    assert np.max(np.abs(p.coords)) <= 0.9


def test_sample_is_deterministic():
    assert sample_polydisc_point(Rng(1), 3, 0.9) == sample_polydisc_point(Rng(1), 3, 0.9)


def test_sample_tiny_cap_is_near_origin():
    p = sample_polydisc_point(Rng(1), 1, 1e-12)
    assert abs(p.coords[0]) <= 1e-12


@pytest.mark.parametrize("cap", [1.0, 1.5, 0.0, -0.1])
def test_sample_rejects_bad_cap(cap):
    with pytest.raises(ValueError):
        sample_polydisc_point(Rng(1), 2, cap)


def test_sample_uniform_on_disc():
    pts = np.array([sample_polydisc_point(Rng(5, (i,)), 1, 0.5).coords[0] for i in range(4000)])
    # area-uniform: P(|z| < r/sqrt 2) = 1/2
    frac = np.mean(np.abs(pts) < 0.5 / np.sqrt(2))
    assert abs(frac - 0.5) < 0.03


def test_approx_eq_examples():
    assert approx_eq(1.0, 1.0)
    assert not approx_eq(1.0, 1.0 + 1e-6)
    assert approx_eq(0.0, 5e-11)


@given(st.floats(-1e6, 1e6), st.floats(-1e6, 1e6))
def test_approx_eq_is_symmetric(a, b):
    assert approx_eq(a, b) == approx_eq(b, a)


@given(st.lists(st.floats(0.0, 2 * np.pi), min_size=1, max_size=4), st.floats(1.0, 10.0))
def test_boundary_points_rejected(angles, scale):
    coords = np.exp(1j * np.array(angles))
    coords[0] *= scale
    # a rounded unit complex number can have modulus just below one
    assume(np.abs(coords)[0] >= 1.0)
    with pytest.raises(DomainError):
        PolydiscPoint(coords)


@pytest.mark.parametrize("bad", [[np.nan], [np.inf], [0.1, np.nan * 1j]])
def test_non_finite_rejected(bad):
    with pytest.raises(ValueError):
        PolydiscPoint(bad)
    with pytest.raises(ValueError):
        TangentVector(bad)


def test_point_is_immutable():
    p = PolydiscPoint([0.1, 0.2j])
    with pytest.raises(ValueError):
        p.coords[0] = 0.5


def test_tangent_vector_dimension_checked():
    with pytest.raises(DimensionMismatchError):
        TangentVector([1, 2, 3], base=PolydiscPoint([0.0, 0.0]))
    assert TangentVector([0, 0], base=PolydiscPoint([0.0, 0.0])).is_zero()


@pytest.mark.parametrize("t,k", [(-1.0, 2), (0.0, 1), (1.0, 2.5), (np.inf, 2), (0.0, True)])
def test_metric_params_validation(t, k):
    with pytest.raises(ValueError):
        MetricParams(t, k)


def test_tolerance_defaults_and_validation():
    assert DEFAULT_TOL == Tolerance(1e-10, 1e-9, 1e-5, 1e-12)
    with pytest.raises(ValueError):
        Tolerance(abs_eq=0.0)


def test_rng_streams_depend_only_on_path():
    a = Rng(7).split(3).generator().random(4)
    Rng(7).split(1).generator().random(100)
    b = Rng(7, (3,)).generator().random(4)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, Rng(7).split(4).generator().random(4))


def test_complex_encoding_round_trip():
    z = np.array([0.5 - 0.25j, -1e-3, 3j])
    assert np.array_equal(decode_complex(encode_complex(z)), z)
    assert np.array_equal(decode_complex([1.0, [0.0, 2.0]]), [1.0, 2j])
