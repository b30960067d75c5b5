import numpy as np
from hypothesis import strategies as st

from finsler_polydisc.core import MetricParams

params = st.builds(MetricParams, st.floats(0.0, 5.0), st.integers(2, 7))
dims = st.integers(1, 4)


def disc_numbers(radius=0.95):
    return st.tuples(st.floats(0.0, radius), st.floats(0.0, 2 * np.pi)).map(lambda p: p[0] * np.exp(1j * p[1]))


def complex_numbers(bound=10.0):
    return st.tuples(st.floats(-bound, bound), st.floats(-bound, bound)).map(lambda p: complex(*p))


@st.composite
def point_and_vector(draw, m=None, radius=0.95, nonzero=True):
    m = draw(dims) if m is None else m
    z = np.array(draw(st.lists(disc_numbers(radius), min_size=m, max_size=m)))
    v = np.array(draw(st.lists(complex_numbers(), min_size=m, max_size=m)))
    if nonzero and not np.any(np.abs(v) > 1e-3):
        v[0] = 1.0
    return z, v
