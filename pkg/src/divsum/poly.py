"""Dense univariate polynomials, rational functions and root finding.

Coefficients are stored lowest degree first.  Everything works over exact
Gaussian rationals; a polynomial with any ``complex`` coefficient is treated
as approximate and the float code paths kick in.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .errors import DegreeCapExceeded, RootFindingError
from .scalar import ONE, ZERO, GaussianRational, I, exact, is_exact

__all__ = [
    "MAX_DEGREE",
    "Poly",
    "RationalFn",
    "RootSet",
    "poly_eval",
    "poly_divmod",
    "poly_gcd",
    "squarefree_decomposition",
    "find_roots",
    "partial_fractions",
    "recombine",
    "binomial_to_monomial",
    "monomial_to_binomial",
]

MAX_DEGREE = 64
DEFAULT_TOL = 1e-9
SNAP_DENOMINATOR = 64


def _coerce(c):
    if isinstance(c, (GaussianRational, complex)):
        return c
    if isinstance(c, float):
        return complex(c)
    return exact(c)


def _is_zero_coeff(c) -> bool:
    return not c if is_exact(c) else c == 0


class Poly:
    """Immutable dense polynomial; ``Poly([a0, a1, ...])`` is a0 + a1*x + ..."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [_coerce(c) for c in coeffs]
        while cs and _is_zero_coeff(cs[-1]):
            cs.pop()
        self.coeffs = tuple(cs)

    @classmethod
    def constant(cls, c) -> "Poly":
        return cls([c])

    @classmethod
    def x(cls) -> "Poly":
        return cls([ZERO, ONE])

    @classmethod
    def from_roots(cls, roots: Iterable[tuple[object, int]]) -> "Poly":
        """Monic product of (x - r)^m over ``(r, m)`` pairs."""
        p = cls([ONE])
        for r, m in roots:
            factor = cls([-_coerce(r), ONE])
            for _ in range(m):
                p = p * factor
        return p

    @property
    def degree(self):
        return len(self.coeffs) - 1 if self.coeffs else -math.inf

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_exact(self) -> bool:
        return all(is_exact(c) for c in self.coeffs)

    @property
    def lead(self):
        return self.coeffs[-1] if self.coeffs else ZERO

    def __len__(self):
        return len(self.coeffs)

    def __getitem__(self, k):
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else ZERO

    def __iter__(self):
        return iter(self.coeffs)

    def __eq__(self, other):
        if not isinstance(other, Poly):
            other = Poly([other])
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"Poly({self.format('x')})"

    def format(self, var: str = "λ") -> str:
        from .scalar import format_scalar

        if not self.coeffs:
            return "0"
        parts = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if _is_zero_coeff(c):
                continue
            mono = "" if k == 0 else (var if k == 1 else f"{var}^{k}")
            s = format_scalar(c)
            needs_paren = is_exact(c) and not c.is_real() and (c.real != 0 and c.imag != 0)
            if not is_exact(c):
                needs_paren = complex(c).imag != 0
            if mono and s in ("1",):
                term = mono
            elif mono and s == "-1":
                term = "-" + mono
            elif mono:
                term = f"({s})*{mono}" if needs_paren else f"{s}*{mono}"
            else:
                term = f"({s})" if needs_paren else s
            parts.append(term)
        out = parts[0]
        for t in parts[1:]:
            out += t if t.startswith("-") else "+" + t
        return out

    # arithmetic -----------------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, Poly):
            other = Poly([other])
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        return Poly([x + b[i] if i < len(b) else x for i, x in enumerate(a)])

    __radd__ = __add__

    def __neg__(self):
        return Poly([-c for c in self.coeffs])

    def __sub__(self, other):
        if not isinstance(other, Poly):
            other = Poly([other])
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Poly):
            c = _coerce(other)
            return Poly([x * c for x in self.coeffs])
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Poly()
        out = [ZERO] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if _is_zero_coeff(x):
                continue
            for j, y in enumerate(b):
                out[i + j] = out[i + j] + x * y
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        result = Poly([ONE])
        for _ in range(n):
            result = result * self
        return result

    def __divmod__(self, other):
        return poly_divmod(self, other)

    def __floordiv__(self, other):
        return poly_divmod(self, other)[0]

    def __mod__(self, other):
        return poly_divmod(self, other)[1]

    def __call__(self, z):
        return poly_eval(self, z)

    def monic(self) -> "Poly":
        if not self.coeffs:
            return self
        lc = self.coeffs[-1]
        return Poly([c / lc for c in self.coeffs])

    def derivative(self) -> "Poly":
        return Poly([c * k for k, c in enumerate(self.coeffs)][1:])

    def shift_arg(self, h=1) -> "Poly":
        """The polynomial n -> p(n + h) (Taylor shift)."""
        h = _coerce(h)
        result = Poly()
        for c in reversed(self.coeffs):
            result = result * Poly([h, ONE]) + Poly([c])
        return result

    def compose(self, other: "Poly") -> "Poly":
        result = Poly()
        for c in reversed(self.coeffs):
            result = result * other + Poly([c])
        return result

    def to_complex(self) -> np.ndarray:
        return np.array([complex(c) for c in self.coeffs], dtype=np.complex128)

    def scale_norm(self) -> float:
        return max((abs(complex(c)) for c in self.coeffs), default=0.0)


def poly_eval(p: Poly, z):
    """Horner evaluation; stays exact when both ``p`` and ``z`` are exact."""
    acc = ZERO
    for c in reversed(p.coeffs):
        acc = acc * z + c
    return acc


def poly_divmod(a: Poly, b: Poly) -> tuple[Poly, Poly]:
    if b.is_zero():
        raise ZeroDivisionError("polynomial division by the zero polynomial")
    rem = list(a.coeffs)
    db = len(b.coeffs) - 1
    lb = b.coeffs[-1]
    if len(rem) - 1 < db:
        return Poly(), a
    quot = [ZERO] * (len(rem) - db)
    for k in range(len(rem) - 1 - db, -1, -1):
        c = rem[k + db] / lb
        quot[k] = c
        if _is_zero_coeff(c):
            continue
        for j in range(db + 1):
            rem[k + j] = rem[k + j] - c * b.coeffs[j]
        rem[k + db] = ZERO if is_exact(c) else 0j
    return Poly(quot), Poly(rem[:db])


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Monic gcd by the Euclidean algorithm (exact coefficients only)."""
    if not (a.is_exact() and b.is_exact()):
        raise TypeError("poly_gcd needs exact coefficients")
    while not b.is_zero():
        a, b = b, poly_divmod(a, b)[1]
    return a.monic() if not a.is_zero() else a


def squarefree_decomposition(p: Poly) -> list[tuple[Poly, int]]:
    """Yun's algorithm: monic squarefree, pairwise coprime ``(f_i, i)``."""
    p = p.monic()
    if p.degree < 1:
        return []
    dp = p.derivative()
    a = poly_gcd(p, dp)
    b = p // a
    c = dp // a
    d = c - b.derivative()
    out = []
    i = 1
    while b.degree >= 1:
        a = poly_gcd(b, d)
        b_next = b // a
        c = d // a
        d = c - b_next.derivative()
        if a.degree >= 1:
            out.append((a, i))
        b = b_next
        i += 1
    return out


# root finding -------------------------------------------------------------

def _aberth(coeffs: np.ndarray, maxiter: int = 800) -> tuple[np.ndarray, bool]:
    """Aberth-Ehrlich simultaneous iteration; ``coeffs`` lowest first, monic."""
    n = len(coeffs) - 1
    high = coeffs[::-1]
    dhigh = np.polyder(high)
    mags = np.abs(coeffs[:-1])
    upper = 1.0 + mags.max()
    lower = abs(coeffs[0]) / (abs(coeffs[0]) + mags[1:].max(initial=0.0)) if coeffs[0] != 0 else 0.0
    r = max(math.sqrt(max(lower, 1e-300) * upper), 1e-3) if lower > 0 else min(1.0, upper)
    angles = 2 * np.pi * np.arange(n) / n + 0.4
    z = r * np.exp(1j * angles)
    converged = False
    for _ in range(maxiter):
        pv = np.polyval(high, z)
        dv = np.polyval(dhigh, z)
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = pv / dv
            diff = z[:, None] - z[None, :]
            np.fill_diagonal(diff, 1.0)
            inv = 1.0 / diff
            np.fill_diagonal(inv, 0.0)
            s = inv.sum(axis=1)
            w = ratio / (1.0 - ratio * s)
        w = np.where(np.isfinite(w), w, 1e-3 * (1 + np.abs(z)))
        w = np.where(pv == 0, 0, w)
        z = z - w
        if np.all(np.abs(w) <= 4e-16 * np.maximum(1.0, np.abs(z))):
            converged = True
            break
    # a few Newton steps to polish simple roots
    for _ in range(2):
        pv = np.polyval(high, z)
        dv = np.polyval(dhigh, z)
        step = np.where(dv != 0, pv / np.where(dv != 0, dv, 1), 0)
        z = z - step
    return z, converged


def _relative_residual(coeffs: np.ndarray, z: complex) -> float:
    az = abs(z)
    scale = sum(abs(c) * az**k for k, c in enumerate(coeffs))
    val = abs(np.polyval(coeffs[::-1], z))
    return val / scale if scale > 0 else val


def _snap_candidates(z: complex) -> list[GaussianRational]:
    re = Fraction(z.real).limit_denominator(SNAP_DENOMINATOR)
    im = Fraction(z.imag).limit_denominator(SNAP_DENOMINATOR)
    cands = [GaussianRational(re, im), GaussianRational(re, 0)]
    for u in (ONE, -ONE, I, -I):
        cands.append(u)
    return cands


@dataclass(frozen=True)
class RootSet:
    """Distinct roots with multiplicities; ``exact`` tells whether all snapped."""

    roots: tuple

    @property
    def degree(self) -> int:
        return sum(m for _, m in self.roots)

    @property
    def exact(self) -> bool:
        return all(is_exact(r) for r, _ in self.roots)

    def __iter__(self):
        return iter(self.roots)

    def __len__(self):
        return len(self.roots)

    def multiplicity(self, value, tol: float = 0.0) -> int:
        for r, m in self.roots:
            if is_exact(r) and is_exact(value):
                if r == value:
                    return m
            elif abs(complex(r) - complex(value)) <= tol:
                return m
        return 0


def _root_sort_key(item):
    z = complex(item[0])
    return (round(z.real, 12), round(z.imag, 12))


def _roots_squarefree_exact(f: Poly, tol: float) -> list:
    """Roots of an exact squarefree polynomial, snapped to exact when possible."""
    if f.degree == 1:
        return [-f.coeffs[0] / f.coeffs[1]]
    coeffs = f.monic().to_complex()
    z, ok = _aberth(coeffs)
    residuals = [_relative_residual(coeffs, zz) for zz in z]
    if not ok and max(residuals) > 1e3 * tol:
        raise RootFindingError("root iteration did not converge", residuals)
    real_poly = all(c.is_real() for c in f.coeffs)
    out = []
    remaining = f
    for zz in z:
        snapped = None
        for cand in _snap_candidates(complex(zz)):
            if abs(complex(cand) - zz) > max(1e-6, 1e3 * tol) * max(1.0, abs(zz)):
                continue
            if not poly_eval(remaining, cand):
                snapped = cand
                break
        if snapped is not None:
            out.append(snapped)
            remaining = remaining // Poly([-snapped, ONE])
            continue
        zz = complex(zz)
        if real_poly and abs(zz.imag) < tol * max(1.0, abs(zz)):
            zz = complex(zz.real, 0.0)
        out.append(zz)
    return out


def _roots_float(p: Poly, tol: float, cluster_tol: float) -> list[tuple[complex, int]]:
    coeffs = p.monic().to_complex()
    z, ok = _aberth(coeffs)
    residuals = [_relative_residual(coeffs, zz) for zz in z]
    if not ok and max(residuals) > 1e6 * tol:
        raise RootFindingError("root iteration did not converge", residuals)
    clusters: list[list[complex]] = []
    for zz in z:
        for cl in clusters:
            if abs(cl[0] - zz) <= cluster_tol * max(1.0, abs(zz)):
                cl.append(complex(zz))
                break
        else:
            clusters.append([complex(zz)])
    out = []
    for cl in clusters:
        c = sum(cl) / len(cl)
        snapped = None
        scale = p.scale_norm()
        for cand in _snap_candidates(c):
            val = abs(poly_eval(Poly(p.to_complex()), complex(cand))) / max(scale, 1e-300)
            if abs(complex(cand) - c) <= max(1e-6, 1e3 * tol) * max(1.0, abs(c)) and val < tol:
                snapped = cand
                break
        out.append((snapped if snapped is not None else c, len(cl)))
    return out


def find_roots(p: Poly, tol: float = DEFAULT_TOL, cluster_tol: float = 1e-6) -> RootSet:
    """Roots of ``p`` with multiplicities.

    Exact input goes through Yun's squarefree decomposition, so multiplicities
    are exact; each squarefree factor is solved by Aberth iteration and every
    root is tested against nearby rationals (denominator <= 64) and the
    units, keeping the exact value whenever it is an exact root.  Float
    input clusters the simultaneous-iteration output instead.
    """
    if p.degree < 1:
        raise ValueError("find_roots needs a polynomial of degree >= 1")
    if p.degree > MAX_DEGREE:
        raise DegreeCapExceeded(f"degree {p.degree} exceeds cap {MAX_DEGREE}")
    cs = list(p.coeffs)
    m0 = 0
    while _is_zero_coeff(cs[0]):
        cs.pop(0)
        m0 += 1
    core = Poly(cs)
    roots: list[tuple[object, int]] = []
    if m0:
        roots.append((ZERO if core.is_exact() else 0j, m0))
    if core.degree >= 1:
        if core.is_exact():
            for f, mult in squarefree_decomposition(core):
                roots.extend((r, mult) for r in _roots_squarefree_exact(f, tol))
        else:
            roots.extend(_roots_float(core, tol, cluster_tol))
    roots.sort(key=_root_sort_key)
    return RootSet(tuple(roots))


# rational functions -------------------------------------------------------

class RationalFn:
    """``num / den`` kept reduced (exact case) with a monic denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num: Poly, den: Poly | None = None, reduce: bool = True):
        if den is None:
            den = Poly([ONE])
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if reduce and num.is_exact() and den.is_exact() and den.degree >= 1 and not num.is_zero():
            g = poly_gcd(num, den)
            if g.degree >= 1:
                num = num // g
                den = den // g
        if num.is_zero():
            den = Poly([ONE])
        lc = den.lead
        self.num = num * (1 / lc) if lc != 1 else num
        self.den = den.monic()

    def __call__(self, t):
        d = poly_eval(self.den, t)
        if (is_exact(d) and not d) or d == 0:
            raise ZeroDivisionError("evaluation at a pole")
        return poly_eval(self.num, t) / d

    def __eq__(self, other):
        if not isinstance(other, RationalFn):
            return NotImplemented
        return self.num * other.den == other.num * self.den

    def __repr__(self):
        return f"RationalFn(({self.num.format('t')})/({self.den.format('t')}))"

    def __add__(self, other: "RationalFn") -> "RationalFn":
        return RationalFn(self.num * other.den + other.num * self.den, self.den * other.den)

    def series(self, order: int) -> list:
        """Taylor coefficients at t = 0 up to ``t**order`` inclusive."""
        d0 = self.den[0]
        if (is_exact(d0) and not d0) or d0 == 0:
            raise ValueError("denominator vanishes at t = 0")
        out = []
        for n in range(order + 1):
            acc = self.num[n]
            for k in range(1, min(n, len(self.den.coeffs) - 1) + 1):
                acc = acc - self.den[k] * out[n - k]
            out.append(acc / d0)
        return out

    def poles(self, tol: float = DEFAULT_TOL) -> RootSet:
        if self.den.degree < 1:
            return RootSet(())
        return find_roots(self.den, tol)

    def to_dict(self) -> dict:
        from .scalar import format_scalar

        return {
            "num": [format_scalar(c) for c in self.num.coeffs],
            "den": [format_scalar(c) for c in self.den.coeffs],
            "text": f"({self.num.format('t')})/({self.den.format('t')})",
        }


def _series_div(num: list, den: list, order: int) -> list:
    out = []
    for n in range(order):
        acc = num[n] if n < len(num) else ZERO
        for k in range(1, min(n, len(den) - 1) + 1):
            acc = acc - den[k] * out[n - k]
        out.append(acc / den[0])
    return out


def partial_fractions(f: RationalFn, tol: float = DEFAULT_TOL):
    """Split ``f`` into ``poly_part + sum coeff / (1 - pole*t)**order``.

    Returns ``(poly_part, terms)`` with ``terms`` a list of
    ``(pole, order, coeff)``.  The reciprocal basis requires ``den(0) != 0``.
    """
    d0 = f.den[0]
    if (is_exact(d0) and not d0) or d0 == 0:
        raise ValueError("den(0) = 0: a pole at t = 0 has no (1 - λt) expansion")
    poly_part, r = poly_divmod(f.num, f.den)
    if f.den.degree < 1:
        return poly_part, []
    troots = find_roots(f.den, tol)
    lams = [(1 / t, m) for t, m in troots]
    terms = []
    for j, (lam, m) in enumerate(lams):
        # t = (1 - u)/lam; expand h = f * (1 - lam t)^m as a series in u
        sub = Poly([1 / lam, -1 / lam])
        numer = r.compose(sub)
        other = Poly([d0])
        for l, (lam2, m2) in enumerate(lams):
            if l == j:
                continue
            fac = Poly([ONE]) - Poly([lam2]) * sub
            other = other * fac**m2
        h = _series_div(list(numer.coeffs), list(other.coeffs), m)
        for i in range(m):
            c = h[i]
            if (is_exact(c) and c) or (not is_exact(c) and c != 0):
                terms.append((lam, m - i, c))
    terms.sort(key=lambda t: (_root_sort_key((t[0],)), t[1]))
    return poly_part, terms


def recombine(poly_part: Poly, terms: Sequence) -> RationalFn:
    """Inverse of :func:`partial_fractions` over a common denominator."""
    total = RationalFn(poly_part)
    for lam, k, c in terms:
        total = total + RationalFn(Poly([c]), Poly([ONE, -lam]) ** k)
    return total


# binomial basis -----------------------------------------------------------

def _binom_poly(k: int) -> Poly:
    """C(k + n, k) as a polynomial in n."""
    p = Poly([ONE])
    for j in range(1, k + 1):
        p = p * Poly([ONE, exact(Fraction(1, j))])
    return p


def binomial_to_monomial(cs: Sequence) -> Poly:
    """pi(n) = sum_k cs[k] * C(k + n, k), returned in the monomial basis."""
    total = Poly()
    for k, c in enumerate(cs):
        total = total + _binom_poly(k) * _coerce(c)
    return total


def monomial_to_binomial(p: Poly) -> list:
    """Coefficients ``c`` with p(n) = sum_k c[k] * C(k + n, k)."""
    if p.is_zero():
        return []
    rem = p
    out = [ZERO] * len(p.coeffs)
    for k in range(len(p.coeffs) - 1, -1, -1):
        # leading coefficient of C(k+n, k) is 1/k!
        c = rem[k] * math.factorial(k)
        out[k] = c
        rem = rem - _binom_poly(k) * c
    return out
