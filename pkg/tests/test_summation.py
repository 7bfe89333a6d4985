import random
from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from divsum.errors import NotC1Summable, NotPeriodic, NonzeroPeriodSum, NotSummable, PoleAtOne, WindowExhausted
from divsum.poly import Poly, RationalFn
from divsum.quasiexp import QuasiExpSeries, epsilon1
from divsum.scalar import I, ONE, exact
from divsum.sequences import SampledSeries
from divsum.summation import cesaro1, euler_sum, generating_function, periodic_sum, radius

from generators import random_q1
from oracles import cesaro_direct


def test_generating_function_geometric():
    g = generating_function(QuasiExpSeries.geometric(exact(-2)))
    assert g.fn == RationalFn(Poly([1]), Poly([1, 2]))
    assert g.poles.roots == ((exact(F(-1, 2)), 1),)
    assert g.at(exact(0)) == 1


def test_generating_function_window_matches_series():
    y = QuasiExpSeries([1, 2], [(exact(2), Poly([1, 1]))])
    assert generating_function(y.window(40)).fn == generating_function(y).fn
    assert generating_function(y).fn.series(8) == list(y.window(9).values)


def test_euler_known_values():
    assert euler_sum(QuasiExpSeries.geometric(exact(-2))).value == F(1, 3)
    assert euler_sum(SampledSeries([(-2) ** n for n in range(40)])).value == F(1, 3)
    assert euler_sum(SampledSeries([(-1) ** n for n in range(40)])).value == F(1, 2)
    assert euler_sum(QuasiExpSeries.geometric(I)).value == ONE / (ONE - I)
    assert euler_sum(QuasiExpSeries([1, 2], [(exact(2), Poly([1, 1]))])).value == 4


def test_euler_rejects_pole_at_one():
    for x in (QuasiExpSeries.polynomial([1]), QuasiExpSeries.polynomial([0, 1]), QuasiExpSeries.polynomial([0, 0, 1])):
        with pytest.raises(PoleAtOne, match="1 ∈ spec"):
            euler_sum(x)
    with pytest.raises(NotSummable):
        euler_sum(SampledSeries(list(range(40))))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_euler_equals_epsilon1(seed):
    x = random_q1(random.Random(seed))
    assert euler_sum(x).value == epsilon1(x).value


def test_radius():
    assert radius(QuasiExpSeries.geometric(exact(2))) == 0.5
    assert radius(QuasiExpSeries.finite([1, 2])) == float("inf")


def test_cesaro_grandi():
    v = cesaro1(np.array([(-1.0) ** n for n in range(100000)]))
    assert not v.exact and abs(v.value - 0.5) < 1e-8


def test_cesaro_matches_direct_means():
    rng = random.Random(2)
    x = random_q1(rng, "cesaro")
    vals = x.window_float(2 ** 14)
    direct = cesaro_direct(list(vals))
    v = cesaro1(vals, 1e-4).value
    assert abs(v - direct[-1]) < 1e-3
    assert abs(v - complex(epsilon1(x).value)) < 1e-4


def test_cesaro_rejections():
    with pytest.raises(NotC1Summable):
        cesaro1(np.arange(1000.0))
    with pytest.raises(NotC1Summable):
        cesaro1(np.array([(-1.0) ** n * n for n in range(1000)]))
    with pytest.raises(WindowExhausted):
        cesaro1(np.ones(8))


def test_periodic():
    v = periodic_sum([2, -1, -1] * 5, 3)
    assert v.exact and v.value == 1
    assert periodic_sum(SampledSeries([1, -1] * 4), 2).value == F(1, 2)
    with pytest.raises(NonzeroPeriodSum, match="1 ∈ spec"):
        periodic_sum([1, 1, 1], 3)
    with pytest.raises(NotPeriodic):
        periodic_sum([1, 2, 1, 3], 2)
    with pytest.raises(WindowExhausted):
        periodic_sum([1], 3)


@settings(max_examples=30, deadline=None)
@given(st.lists(st.fractions(-5, 5, max_denominator=6), min_size=1, max_size=6))
def test_periodic_equals_epsilon1(block):
    block = list(block)
    block[-1] -= sum(block)  # zero period sum
    w = SampledSeries(block * 40)
    p = len(block)
    if len(w) < 34 or all(v == 0 for v in block):
        return
    assert periodic_sum(w, p).value == epsilon1(w).value


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_poles_are_reciprocal_spectrum(seed):
    x = random_q1(random.Random(seed))
    gf = generating_function(x)
    want = sorted(((ONE / lam, pi.degree + 1) for lam, pi in x.modes), key=repr)
    assert sorted(gf.poles.roots, key=repr) == want
    assert gf.fn.series(12) == list(x.window(13).values)


@settings(max_examples=12, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_cesaro_agrees_on_long_windows(seed):
    x = random_q1(random.Random(seed), "cesaro")
    c = cesaro1(x.window_float(2 ** 17), 1e-6)
    assert abs(c.value - complex(epsilon1(x).value)) < 1e-6
