"""Euler, Cesàro (C,1) and periodic summation, generating functions, radius."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NotC1Summable, NotPeriodic, NonzeroPeriodSum, PoleAtOne, WindowExhausted
from .poly import Poly, RationalFn, RootSet, find_roots, monomial_to_binomial, recombine
from .quasiexp import DEG_MAX, QuasiExpSeries, _check_unambiguous, detect_recurrence
from .scalar import ONE, ZERO, is_exact
from .sequences import SampledSeries, SumValue, partial_sums

__all__ = [
    "GeneratingFunction",
    "generating_function",
    "euler_sum",
    "cesaro1",
    "periodic_sum",
    "radius",
]


@dataclass(frozen=True)
class GeneratingFunction:
    fn: RationalFn
    poles: RootSet
    head: Poly          # polynomial part contributed by the finite head
    terms: tuple        # (lam, k, c): c / (1 - lam t)**k

    def at(self, t):
        acc = self.head(t)
        for lam, k, c in self.terms:
            acc = acc + c / (ONE - lam * t) ** k
        return acc


def _gf_terms(q: QuasiExpSeries) -> list:
    terms = []
    for lam, pi in q.modes:
        for j, c in enumerate(monomial_to_binomial(pi)):
            if (is_exact(c) and c) or (not is_exact(c) and c != 0):
                terms.append((lam, j + 1, c))
    return terms


def _window_gf(x: SampledSeries, deg_max: int) -> GeneratingFunction:
    # Q(t) = t^D phi(1/t);  P = Q * X mod t^D
    phi = detect_recurrence(x, deg_max)
    D = len(phi.coeffs) - 1
    Q = Poly(list(reversed(phi.coeffs)))
    vals = x.values
    num = []
    for n in range(D):
        acc = ZERO
        for i in range(n + 1):
            acc = acc + Q[i] * vals[n - i]
        num.append(acc)
    fn = RationalFn(Poly(num), Q)
    poles = fn.poles()
    return GeneratingFunction(fn, poles, Poly(), ())


def generating_function(x, deg_max: int = DEG_MAX) -> GeneratingFunction:
    """Rational g̃(t) = sum x_n t^n.

    For a :class:`QuasiExpSeries` each mode is rewritten in the binomial
    basis, giving c_j / (1 - lam t)^{j+1} terms, and the head adds a
    polynomial.  The poles are read off the spectrum: t = 1/lam with
    multiplicity deg pi + 1.  An exact window goes through its minimal
    polynomial instead.
    """
    if isinstance(x, SampledSeries):
        return _window_gf(x, deg_max)
    head = Poly(list(x.head))
    terms = _gf_terms(x)
    fn = recombine(head, terms)
    poles = RootSet(tuple(
        sorted(((ONE / lam if is_exact(lam) else 1 / complex(lam), len(pi.coeffs)) for lam, pi in x.modes),
               key=lambda p: (round(complex(p[0]).real, 12), round(complex(p[0]).imag, 12)))
    ))
    return GeneratingFunction(fn, poles, head, tuple(terms))


def euler_sum(x, deg_max: int = DEG_MAX) -> SumValue:
    """g̃(1); refuses when t = 1 is a pole."""
    if isinstance(x, SampledSeries):
        gf = _window_gf(x, deg_max)
        d1 = gf.fn.den(ONE)
        if (is_exact(d1) and not d1) or (not is_exact(d1) and abs(d1) < 1e-12):
            raise PoleAtOne("1 ∈ spec(x): pole at t = 1")
        v = gf.fn(ONE)
        ex = is_exact(v)
        return SumValue(v if ex else complex(v), "euler", ex)
    _check_unambiguous(x)
    if ONE in x.spectrum():
        raise PoleAtOne("1 ∈ spec(x): pole at t = 1")
    v = GeneratingFunction(Poly(), RootSet(()), Poly(list(x.head)), tuple(_gf_terms(x))).at(ONE)
    ex = x.exact and is_exact(v)
    return SumValue(v if ex else complex(v), "euler", ex)


def _slope(m: np.ndarray, y: np.ndarray):
    mc = m - m.mean()
    slope = np.dot(mc, y - y.mean()) / np.dot(mc, mc)
    resid = y - y.mean() - slope * mc
    return slope, float(np.abs(resid).max())


def cesaro1(x, tol: float = 1e-6) -> SumValue:
    """(C,1) limit of (1/m) sum_{n<m} s_n, estimated from the window.

    Writes y_m = sum_{n<m} s_n, which is sigma*m + O(1) for a (C,1)-summable
    series with bounded oscillation; sigma is the regression slope of y on
    m.  The slopes over [N/4, N/2) and [N/2, N) must agree to ``tol`` and
    the residual oscillation must not grow from one block to the next.
    """
    v = np.asarray(x.values if isinstance(x, SampledSeries) else x, dtype=np.complex128)
    N = v.size
    if N < 16:
        raise WindowExhausted("cesaro1 needs at least 16 terms")
    s = np.concatenate(([0], np.cumsum(v)))[:N]     # s_0 .. s_{N-1}
    y = np.cumsum(s)                                # y[m-1] = sum_{n<m} s_n
    m = np.arange(1, N + 1, dtype=np.float64)
    a, b, c = N // 4, N // 2, N
    s1, r1 = _slope(m[a:b], y[a:b])
    s2, r2 = _slope(m[b:c], y[b:c])
    scale = max(1.0, abs(s2))
    if not np.isfinite(s2) or abs(s1 - s2) > tol * scale:
        raise NotC1Summable(f"block estimates {s1:.6g} and {s2:.6g} disagree beyond {tol:g}")
    if r2 > 1.5 * r1 + tol * N * scale:
        raise NotC1Summable(f"oscillation of partial-sum averages grows ({r1:.3g} -> {r2:.3g})")
    val = complex(s2)
    return SumValue(val, "cesaro1", False)


def periodic_sum(x, period: int) -> SumValue:
    """(1/p) * sum_{n=1}^{p-1} s_n for a p-periodic window with s_p = 0."""
    vals = x.values if isinstance(x, SampledSeries) else tuple(x)
    p = int(period)
    if p < 1:
        raise ValueError("period must be >= 1")
    if len(vals) < p:
        raise WindowExhausted(f"window of length {len(vals)} shorter than the period {p}")
    for n in range(len(vals) - p):
        if vals[n] != vals[n + p]:
            raise NotPeriodic(f"x_{n} != x_{n + p}")
    s = partial_sums(vals[:p])
    sp = s[p]
    if (is_exact(sp) and sp) or (not is_exact(sp) and abs(sp) > 1e-12):
        raise NonzeroPeriodSum(f"1 ∈ spec(x): s_{p} = {sp} != 0")
    total = ZERO
    for n in range(1, p):
        total = total + s[n]
    v = total / p
    ex = is_exact(v)
    return SumValue(v if ex else complex(v), "periodic", ex)


def radius(q: QuasiExpSeries) -> float:
    """Radius of convergence of g̃: 1 / max |lam|, infinite for finite series."""
    if not q.modes:
        return math.inf
    return 1.0 / max(abs(complex(lam)) for lam, _ in q.modes)
