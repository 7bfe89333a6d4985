from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from divsum.errors import DegreeCapExceeded
from divsum.poly import (
    Poly, RationalFn, binomial_to_monomial, find_roots, monomial_to_binomial, partial_fractions,
    poly_gcd, recombine, squarefree_decomposition,
)
from divsum.scalar import I, ONE, ZERO, GaussianRational as G, exact, format_scalar, parse_scalar

fracs = st.fractions(min_value=-20, max_value=20, max_denominator=12)
gauss = st.builds(G, fracs, fracs)


# scalars ---------------------------------------------------------------------

def test_gaussian_basic_arithmetic():
    z = G(F(1, 2), 1)
    assert z * z.conjugate() == G(F(5, 4))
    assert z ** -2 == G(F(-12, 25), F(-16, 25))
    assert ONE / (ONE - I) == G(F(1, 2), F(1, 2))
    assert I * I == -ONE
    assert G(3) == 3 and G(F(1, 2)) == F(1, 2)


def test_zero_division():
    with pytest.raises(ZeroDivisionError):
        ONE / ZERO


@given(gauss, gauss, gauss)
def test_field_axioms(a, b, c):
    assert (a + b) * c == a * c + b * c
    assert a * b == b * a
    assert (a - b) + b == a
    if b:
        assert (a / b) * b == a


@given(gauss)
def test_hash_matches_equality(a):
    b = G(a.real, a.imag)
    assert a == b and hash(a) == hash(b)
    if a.is_real():
        assert hash(a) == hash(a.real)


def test_format_and_parse():
    assert format_scalar(exact(F(1, 2)) + I * F(-1, 3)) == "1/2-1/3*i"
    assert format_scalar(-I) == "-i"
    assert format_scalar(exact(7)) == "7"
    assert format_scalar(0.5 + 0j) == "0.5"
    assert parse_scalar("3/4") == G(F(3, 4))
    assert parse_scalar([1, "1/2"]) == G(1, F(1, 2))
    assert parse_scalar(0.25) == 0.25 + 0j and isinstance(parse_scalar(0.25), complex)
    for bad in (True, "x", [1, 2, 3], None):
        with pytest.raises(ValueError):
            parse_scalar(bad)


@given(gauss)
def test_format_round_trip_real_part(a):
    s = format_scalar(exact(a.real))
    assert parse_scalar(s) == exact(a.real)


# polynomials -----------------------------------------------------------------

def test_poly_formatting():
    assert Poly([-1, -1, 1]).format() == "λ^2-λ-1"
    assert Poly([3, 4, 1]).format("n") == "n^2+4*n+3"
    assert Poly().is_zero() and Poly([0, 0]).is_zero()


def test_divmod_gcd_squarefree():
    q, r = divmod(Poly([1, 0, 0, 1]), Poly([1, 1]))
    assert q == Poly([1, -1, 1]) and r == Poly()
    assert poly_gcd(Poly([-1, 0, 1]), Poly([1, 2, 1])) == Poly([1, 1])
    parts = squarefree_decomposition(Poly([1, 1]) ** 2 * Poly([-2, 1]))
    assert parts == [(Poly([-2, 1]), 1), (Poly([1, 1]), 2)]


def test_shift_and_derivative():
    p = Poly([1, 2, 3])
    assert p.shift_arg(1) == Poly([6, 8, 3])
    assert p.derivative() == Poly([2, 6])


@settings(max_examples=60, deadline=None)
@given(st.lists(gauss, min_size=1, max_size=5), st.lists(gauss, min_size=1, max_size=4))
def test_divmod_identity(a, b):
    A, B = Poly(a), Poly(b)
    if B.is_zero():
        return
    q, r = divmod(A, B)
    assert q * B + r == A
    assert r.is_zero() or r.degree < B.degree


def test_roots_exact_and_float():
    assert find_roots(Poly([1, 0, 1])).roots == ((-I, 1), (I, 1))
    rs = find_roots(Poly([-2, 1]) ** 2 * Poly([1, 1]))
    assert rs.exact and rs.multiplicity(exact(2)) == 2 and rs.multiplicity(exact(-1)) == 1
    golden = find_roots(Poly([-1, -1, 1]))
    assert not golden.exact
    vals = sorted(complex(r).real for r, _ in golden)
    assert vals == pytest.approx([(1 - 5 ** 0.5) / 2, (1 + 5 ** 0.5) / 2], rel=1e-12)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.tuples(st.sampled_from([G(F(1, 2)), G(-2), I, G(1, 1), G(F(-1, 3)), G(3)]),
                          st.integers(1, 3)), min_size=1, max_size=3, unique_by=lambda t: t[0]))
def test_roots_from_roots_round_trip(spec):
    p = Poly.from_roots(spec)
    rs = find_roots(p)
    assert rs.exact
    assert sorted(rs.roots, key=repr) == sorted(((r, m) for r, m in spec), key=repr)


def test_degree_cap():
    with pytest.raises(DegreeCapExceeded):
        find_roots(Poly([1] + [0] * 64 + [1]))


def test_partial_fractions_double_pole():
    # t / (1 - 2t)^2 = -1/2 (1 - 2t)^-1 + 1/2 (1 - 2t)^-2
    f = RationalFn(Poly([0, 1]), Poly([1, -2]) ** 2)
    poly_part, terms = partial_fractions(f)
    assert poly_part.is_zero()
    assert terms == [(exact(2), 1, exact(F(-1, 2))), (exact(2), 2, exact(F(1, 2)))]
    assert recombine(poly_part, terms) == f
    assert f.series(5) == [0, 1, 4, 12, 32, 80]


def test_binomial_basis():
    assert monomial_to_binomial(Poly([0, 0, 1])) == [1, -3, 2]
    assert binomial_to_monomial([0, 1, 2]) == Poly([3, 4, 1])


@given(st.lists(fracs, min_size=1, max_size=5))
def test_binomial_round_trip(cs):
    p = Poly(cs)
    assert binomial_to_monomial(monomial_to_binomial(p)) == p


def test_float_poly_evaluation():
    p = Poly([1.0, -2.0, 1.0])
    assert not p.is_exact()
    assert abs(p(1.0)) < 1e-15
    assert np.allclose(p.to_complex(), [1, -2, 1])


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(-9, 9), min_size=3, max_size=9))
def test_float_roots_reexpand_to_monic(cs):
    from divsum.poly import DEFAULT_TOL
    p = Poly(cs[:-1] + [cs[-1] or 1])
    if p.degree < 1:
        return
    rs = find_roots(p)
    back = Poly([1])
    for r, m in rs:
        back = back * Poly([-complex(r), 1]) ** m
    want = p.monic().to_complex()
    got = back.to_complex()
    scale = max(1.0, float(np.abs(want).max()))
    assert np.abs(got - want).max() < 10 * DEFAULT_TOL * scale


@settings(max_examples=30, deadline=None)
@given(st.lists(fracs, min_size=17, max_size=17))
def test_binomial_round_trip_degree_16(cs):
    p = Poly(cs)
    assert binomial_to_monomial(monomial_to_binomial(p)) == p
