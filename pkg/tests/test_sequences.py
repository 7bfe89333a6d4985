from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from divsum.errors import NotConvergent, WindowExhausted
from divsum.scalar import exact
from divsum.sequences import (
    SampledSeries, SumValue, delta, delta_preimage, partial_sums, shift, standard_sum, tail_certificate,
)


def geo(r, N, c=1):
    return SampledSeries([exact(c) * exact(r) ** n for n in range(N)])


def test_window_bookkeeping():
    x = SampledSeries([1, 2, 3, 4])
    assert len(shift(x)) == 3 and shift(x).values == (2, 3, 4)
    assert delta(x).values == (-1, -1, -1)
    assert partial_sums(x) == [0, 1, 3, 6, 10]
    assert x.exact and not SampledSeries([0.5]).exact
    with pytest.raises(WindowExhausted):
        SampledSeries([])
    with pytest.raises(WindowExhausted):
        shift(SampledSeries([1]))


def test_unknown_method_rejected():
    with pytest.raises(ValueError):
        SumValue(1, "abel", True)


def test_standard_sum_exact_geometric_tail():
    v = standard_sum(geo(F(1, 2), 80))
    assert v.exact and v.value == 2
    v = standard_sum(geo(F(-1, 3), 60, 3))
    assert v.exact and v.value == F(9, 4)


def test_standard_sum_finite_support():
    v = standard_sum(SampledSeries([1, 2, 3] + [0] * 20))
    assert v.exact and v.value == 6


def test_standard_sum_float_estimate():
    x = SampledSeries([0.5 ** n + 0.25 ** n for n in range(120)])
    v = standard_sum(x)
    assert not v.exact
    assert abs(v.value - (2 + 4 / 3)) < 1e-12


def test_standard_sum_rejects_divergent():
    for vals in ([(-1) ** n for n in range(100)], [1] * 100, [F(1, n + 1) for n in range(100)]):
        with pytest.raises(NotConvergent):
            standard_sum(SampledSeries(vals))


def test_tail_certificate_kinds():
    assert tail_certificate(SampledSeries([1, 0, 0, 0, 0, 0, 0, 0]), 1e-9).kind == "finite"
    c = tail_certificate(geo(F(1, 2), 80), 1e-9)
    assert c.kind == "geometric" and c.exact and c.bound < 1e-9


def test_delta_preimage_exact():
    y = geo(F(1, 2), 60)
    x = delta_preimage(y)
    assert len(x) == 60
    assert x[0] == 2 and x[1] == 1
    assert delta(x).values == y.values[: len(x) - 1]


def test_delta_preimage_float_shortens():
    y = SampledSeries([0.5 ** n + 0.3 ** n for n in range(200)])
    x = delta_preimage(y)
    assert len(x) < 200
    d = delta(x).values
    assert max(abs(a - b) for a, b in zip(d, y.values)) < 1e-15
    assert abs(x[0] - (2 + 1 / 0.7)) < 1e-12


@given(st.lists(st.fractions(-50, 50, max_denominator=20), min_size=2, max_size=30))
def test_delta_and_partial_sum_identities(vals):
    x = SampledSeries(vals)
    d = delta(x)
    sx = shift(x)
    assert all(d[i] == x[i] - sx[i] for i in range(len(d)))
    s = partial_sums(x)
    assert all(s[n + 1] - s[n] == x[n] for n in range(len(x)))


@settings(max_examples=30, deadline=None)
@given(st.sampled_from([F(1, 2), F(-1, 3), F(3, 4), F(2, 5)]), st.fractions(-5, 5, max_denominator=6),
       st.lists(st.fractions(-5, 5, max_denominator=6), max_size=3))
def test_delta_of_preimage_exact(r, c, head):
    if c == 0:
        c = F(1)
    vals = [exact(h) + exact(c) * exact(r) ** n for n, h in enumerate(head)]
    vals += [exact(c) * exact(r) ** n for n in range(len(head), 120)]
    y = SampledSeries(vals)
    x = delta_preimage(y)
    assert delta(x).values == y.values[: len(x) - 1]
