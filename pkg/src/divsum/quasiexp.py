"""Quasiexponential series: recurrence detection, normal form, ε₁ and extensions.

A quasiexponential series has terms

    x_n = sum_k pi_k(n) * lam_k**n + zeta_n,

with finitely many nonzero, pairwise distinct ``lam_k``, nonzero polynomials
``pi_k`` and a finitely supported head ``zeta``.  :class:`QuasiExpSeries`
stores exactly this normal form.  Its minimal annihilating polynomial is
``lam**len(head) * prod (lam - lam_k)**(deg pi_k + 1)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    AlreadyExtendable,
    AmbiguousSpectrum,
    DegreeCapExceeded,
    InconsistentDecomposition,
    NotInQ1,
    NotRecurrentOnWindow,
    NotSummable,
    WindowExhausted,
)
from .linalg import Echelon, solve
from .poly import Poly, RootSet, find_roots
from .scalar import ONE, ZERO, exact, is_exact
from .sequences import SampledSeries, SumValue, partial_sums

__all__ = [
    "DEG_MAX",
    "QuasiExpSeries",
    "Spectrum",
    "SubspaceBasis",
    "ExtensionResult",
    "WindowVerdict",
    "berlekamp_massey",
    "detect_recurrence",
    "decompose",
    "from_window",
    "spectrum",
    "is_summable",
    "classify_window",
    "epsilon1",
    "epsilon1_formula",
    "apply_poly",
    "theta_xL",
    "extension_obstruction",
    "regularize",
]

DEG_MAX = 16
FLOAT_TOL = 1e-9
AMBIGUITY_RADIUS = 1e-6


def _coerce(c):
    if is_exact(c) or isinstance(c, complex):
        return c
    if isinstance(c, float):
        return complex(c)
    return exact(c)


def _zero(c, tol: float = 0.0) -> bool:
    return (not c) if is_exact(c) else abs(c) <= tol


def _key(z):
    z = complex(z)
    return (round(z.real, 12), round(z.imag, 12))


def _same(a, b, tol: float = 1e-12) -> bool:
    if is_exact(a) and is_exact(b):
        return a == b
    return abs(complex(a) - complex(b)) <= tol * max(1.0, abs(complex(a)))


@dataclass(frozen=True)
class Spectrum:
    """Spectral points with multiplicities; 0 stands for the finite head."""

    points: tuple

    def __contains__(self, value) -> bool:
        return any(_same(p, value, 0.0) if is_exact(p) and is_exact(value) else _same(p, value)
                   for p, _ in self.points)

    def __iter__(self):
        return iter(self.points)

    def __len__(self):
        return len(self.points)

    @property
    def values(self) -> list:
        return [p for p, _ in self.points]

    def multiplicity(self, value) -> int:
        for p, m in self.points:
            if _same(p, value):
                return m
        return 0


class QuasiExpSeries:
    """Normal form ``head + sum pi_k(n) lam_k**n`` (immutable)."""

    __slots__ = ("head", "modes")

    def __init__(self, head: Iterable = (), modes: Iterable = ()):
        head = [_coerce(h) for h in head]
        merged: list[list] = []
        for lam, pi in modes:
            lam = _coerce(lam)
            if not isinstance(pi, Poly):
                pi = Poly(pi)
            if pi.is_zero():
                continue
            if _zero(lam):
                # 0**n with 0**0 = 1 contributes pi(0) at n = 0 only
                if not head:
                    head = [ZERO]
                head[0] = head[0] + pi(ZERO)
                continue
            for item in merged:
                if _same(item[0], lam):
                    item[1] = item[1] + pi
                    break
            else:
                merged.append([lam, pi])
        while head and _zero(head[-1]):
            head.pop()
        self.head = tuple(head)
        self.modes = tuple(
            sorted(((lam, pi) for lam, pi in merged if not pi.is_zero()), key=lambda m: _key(m[0]))
        )

    # constructors ---------------------------------------------------------
    @classmethod
    def zero(cls) -> "QuasiExpSeries":
        return cls()

    @classmethod
    def geometric(cls, lam, c=1) -> "QuasiExpSeries":
        return cls((), [(lam, Poly([_coerce(c)]))])

    @classmethod
    def polynomial(cls, coeffs) -> "QuasiExpSeries":
        pi = coeffs if isinstance(coeffs, Poly) else Poly(coeffs)
        return cls((), [(ONE, pi)])

    @classmethod
    def finite(cls, values) -> "QuasiExpSeries":
        return cls(values, ())

    # basic structure ------------------------------------------------------
    @property
    def exact(self) -> bool:
        return all(is_exact(h) for h in self.head) and all(
            is_exact(lam) and pi.is_exact() for lam, pi in self.modes
        )

    def is_zero(self) -> bool:
        return not self.head and not self.modes

    def spectrum(self) -> Spectrum:
        pts = [(lam, len(pi.coeffs)) for lam, pi in self.modes]
        if self.head:
            pts.append((ZERO if self.exact else 0j, len(self.head)))
        pts.sort(key=lambda p: _key(p[0]))
        return Spectrum(tuple(pts))

    def min_poly(self) -> Poly:
        """Monic minimal annihilating polynomial (constant 1 for the zero series)."""
        roots = [(lam, len(pi.coeffs)) for lam, pi in self.modes]
        p = Poly.from_roots(roots)
        if self.head:
            p = Poly([ZERO] * len(self.head) + [ONE]) * p
        return p

    @property
    def order(self) -> int:
        return len(self.head) + sum(len(pi.coeffs) for _, pi in self.modes)

    def __eq__(self, other):
        if not isinstance(other, QuasiExpSeries):
            return NotImplemented
        return self.head == other.head and self.modes == other.modes

    def __hash__(self):
        return hash((self.head, self.modes))

    def __repr__(self):
        parts = [f"head={[str(h) for h in self.head]}"] if self.head else []
        for lam, pi in self.modes:
            parts.append(f"({pi.format('n')})*({lam})^n")
        return "QuasiExpSeries(" + " + ".join(parts or ["0"]) + ")"

    # sampling -------------------------------------------------------------
    def sample(self, n: int):
        acc = self.head[n] if n < len(self.head) else ZERO
        for lam, pi in self.modes:
            acc = acc + pi(n) * lam**n
        return acc

    def window(self, N: int) -> SampledSeries:
        vals = [self.head[n] if n < len(self.head) else ZERO for n in range(N)]
        for lam, pi in self.modes:
            pw = ONE
            for n in range(N):
                vals[n] = vals[n] + pi(n) * pw
                pw = pw * lam
        return SampledSeries(vals)

    def window_float(self, N: int) -> np.ndarray:
        """Complex float samples, vectorized; for long windows."""
        n = np.arange(N, dtype=np.float64)
        out = np.zeros(N, dtype=np.complex128)
        out[: min(N, len(self.head))] += [complex(h) for h in self.head[:N]]
        for lam, pi in self.modes:
            coeffs = pi.to_complex()[::-1]
            out += np.polyval(coeffs, n) * np.power(complex(lam), n)
        return out

    # algebra --------------------------------------------------------------
    def __add__(self, other: "QuasiExpSeries") -> "QuasiExpSeries":
        if not isinstance(other, QuasiExpSeries):
            return NotImplemented
        h = max(len(self.head), len(other.head))
        head = [
            (self.head[i] if i < len(self.head) else ZERO)
            + (other.head[i] if i < len(other.head) else ZERO)
            for i in range(h)
        ]
        return QuasiExpSeries(head, list(self.modes) + list(other.modes))

    def __mul__(self, c) -> "QuasiExpSeries":
        c = _coerce(c)
        return QuasiExpSeries([h * c for h in self.head], [(lam, pi * c) for lam, pi in self.modes])

    __rmul__ = __mul__

    def __neg__(self):
        return self * exact(-1)

    def __sub__(self, other):
        return self + (-other)

    def shift(self, k: int = 1) -> "QuasiExpSeries":
        """T**k: drop the first ``k`` terms."""
        q = self
        for _ in range(k):
            q = QuasiExpSeries(q.head[1:], [(lam, pi.shift_arg(1) * lam) for lam, pi in q.modes])
        return q


def apply_poly(p: Poly, x: QuasiExpSeries) -> QuasiExpSeries:
    """p(T) x."""
    out = QuasiExpSeries.zero()
    cur = x
    for j, c in enumerate(p.coeffs):
        if j:
            cur = cur.shift()
        if not _zero(c):
            out = out + cur * c
    return out


# recurrence detection -------------------------------------------------------

def berlekamp_massey(seq: Sequence, tol: float = 0.0) -> tuple[int, list]:
    """Shortest linear recurrence of ``seq`` over the field of its entries.

    Returns ``(L, C)`` with ``C[0] = 1`` and
    ``seq[n] + C[1] seq[n-1] + ... + C[L] seq[n-L] = 0`` for ``L <= n < N``.
    With ``tol > 0`` discrepancies are compared to zero relative to the size
    of the terms that produced them.
    """
    C = [ONE]
    B = [ONE]
    L = 0
    m = 1
    b = ONE
    for n in range(len(seq)):
        d = seq[n]
        scale = abs(complex(seq[n]))
        for i in range(1, L + 1):
            if i < len(C):
                term = C[i] * seq[n - i]
                d = d + term
                if tol:
                    scale += abs(complex(term))
        if (is_exact(d) and not d) or (not is_exact(d) and abs(d) <= tol * max(scale, 1e-300)):
            m += 1
            continue
        coef = d / b
        T = list(C)
        need = len(B) + m
        if len(C) < need:
            C = C + [ZERO] * (need - len(C))
        for i, bi in enumerate(B):
            C[i + m] = C[i + m] - coef * bi
        if 2 * L <= n:
            L = n + 1 - L
            B = T
            b = d
            m = 1
        else:
            m += 1
    C = C + [ZERO] * max(0, L + 1 - len(C))
    return L, C[: L + 1]


def detect_recurrence(x: SampledSeries, deg_max: int = DEG_MAX, tol: float = FLOAT_TOL) -> Poly:
    """Monic minimal phi with phi(T) x = 0 on the whole window.

    Needs ``len(x) >= 2 * deg_max + 2``.  Exact windows are handled over
    Q(i) without rounding; float windows use relative discrepancy tests.
    """
    N = len(x)
    if N < 2 * deg_max + 2:
        raise WindowExhausted(
            f"window of length {N} too short for deg_max={deg_max} (need {2 * deg_max + 2})"
        )
    vals = x.values
    L, C = berlekamp_massey(vals, 0.0 if x.exact else tol)
    if L > deg_max:
        raise NotRecurrentOnWindow(f"linear complexity {L} exceeds deg_max={deg_max}")
    phi = Poly(list(reversed(C)))
    # validate on every position of the window
    for n in range(N - L):
        acc = ZERO
        scale = 0.0
        for i, c in enumerate(phi.coeffs):
            acc = acc + c * vals[n + i]
            scale += abs(complex(c)) * abs(complex(vals[n + i]))
        if not _zero(acc, tol * max(scale, 1e-300)):
            raise NotRecurrentOnWindow(f"recurrence fails at position {n}")
    return phi


def decompose(phi: Poly, x: SampledSeries, roots: RootSet | None = None,
              tol: float = 1e-8) -> QuasiExpSeries:
    """Solve for the normal form of ``x`` given an annihilator ``phi``.

    The first ``deg phi`` samples determine head and mode coefficients; the
    rest of the window is used to verify the result.
    """
    D = len(phi.coeffs) - 1
    if D <= 0:
        if any(not _zero(v, tol) for v in x.values):
            raise InconsistentDecomposition("constant annihilator but nonzero window")
        return QuasiExpSeries.zero()
    if len(x) < D:
        raise WindowExhausted(f"need {D} samples to decompose, window has {len(x)}")
    if roots is None:
        roots = find_roots(phi)
    m0 = 0
    modes = []
    for r, m in roots:
        if _zero(r):
            m0 = m
        else:
            modes.append((r, m))
    use_exact = x.exact and all(is_exact(r) for r, _ in roots)
    rows = []
    for n in range(D):
        row = [ONE if n == j else ZERO for j in range(m0)]
        for lam, m in modes:
            pw = lam**n if use_exact else complex(lam) ** n
            for j in range(m):
                row.append(pw * (n**j))
        rows.append(row)
    rhs = list(x.values[:D])
    if use_exact:
        sol = solve(rows, rhs)
        if sol is None:
            raise InconsistentDecomposition("singular normal-form system")
    else:
        A = np.array([[complex(c) for c in r] for r in rows], dtype=np.complex128)
        bvec = np.array([complex(c) for c in rhs], dtype=np.complex128)
        try:
            sol = [complex(v) for v in np.linalg.solve(A, bvec)]
        except np.linalg.LinAlgError as exc:
            raise InconsistentDecomposition(str(exc)) from None
    head = sol[:m0]
    pos = m0
    mode_list = []
    for lam, m in modes:
        mode_list.append((lam, Poly(sol[pos:pos + m])))
        pos += m
    q = QuasiExpSeries(head, mode_list)
    _verify_window(q, x, use_exact, tol)
    return q


def _verify_window(q: QuasiExpSeries, x: SampledSeries, use_exact: bool, tol: float):
    N = len(x)
    if use_exact:
        if q.window(N).values != x.values:
            raise InconsistentDecomposition("resampled window differs from input")
        return
    got = q.window_float(N)
    want = np.array([complex(v) for v in x.values])
    scale = max(np.abs(want).max(), 1e-300)
    err = np.abs(got - want).max() / scale
    if not err <= tol:
        raise InconsistentDecomposition(f"relative resampling error {err:.3g} exceeds {tol:g}")


def from_window(x: SampledSeries, deg_max: int = DEG_MAX) -> QuasiExpSeries:
    phi = detect_recurrence(x, deg_max)
    return decompose(phi, x)


# summability and ε₁ -----------------------------------------------------------

def spectrum(q: QuasiExpSeries) -> Spectrum:
    return q.spectrum()


def _check_unambiguous(q: QuasiExpSeries):
    for lam, _ in q.modes:
        if not is_exact(lam) and abs(complex(lam) - 1) < AMBIGUITY_RADIUS:
            raise AmbiguousSpectrum(f"approximate spectral point {lam} within {AMBIGUITY_RADIUS:g} of 1")


def is_summable(q: QuasiExpSeries) -> bool:
    """False iff 1 is in the spectrum."""
    _check_unambiguous(q)
    return ONE not in q.spectrum()


@dataclass(frozen=True)
class WindowVerdict:
    summable: bool
    caveat: str | None
    series: QuasiExpSeries | None
    min_poly: Poly | None


def classify_window(x: SampledSeries, deg_max: int = DEG_MAX) -> WindowVerdict:
    """Summability of the series behind a window.

    A window without a recurrence of degree <= ``deg_max`` is reported
    summable with a caveat: outside Q every series is summable.
    """
    try:
        phi = detect_recurrence(x, deg_max)
    except NotRecurrentOnWindow:
        return WindowVerdict(True, "x ∉ Q on window", None, None)
    q = decompose(phi, x)
    return WindowVerdict(is_summable(q), None, q, phi)


def epsilon1_formula(phi: Poly, values: Sequence):
    """(1/phi(1)) * sum_{n=1}^{deg phi} a_n s_n for any annihilator phi with phi(1) != 0."""
    nu = len(phi.coeffs) - 1
    s = partial_sums(values[:nu])
    total = ZERO
    for n in range(1, nu + 1):
        total = total + phi.coeffs[n] * s[n]
    return total / phi(ONE)


def epsilon1(x, deg_max: int = DEG_MAX) -> SumValue:
    """The unique summation on Q1: (1/phi(1)) * sum_{n=1}^{deg phi} a_n s_n.

    Accepts a :class:`QuasiExpSeries` or a window.  An exact window is summed
    from its detected minimal polynomial directly, so irrational roots never
    enter and the decision phi(1) = 0 stays exact.
    """
    if isinstance(x, SampledSeries):
        if not x.exact:
            return epsilon1(from_window(x, deg_max))
        phi = detect_recurrence(x, deg_max)
        if not phi(ONE):
            raise NotSummable("1 ∈ spec(x)")
        return SumValue(epsilon1_formula(phi, x.values), "epsilon1", True)
    _check_unambiguous(x)
    if ONE in x.spectrum():
        raise NotSummable("1 ∈ spec(x)")
    phi = x.min_poly()
    nu = len(phi.coeffs) - 1
    value = epsilon1_formula(phi, x.window(nu).values) if nu else ZERO
    ex = x.exact and is_exact(value)
    return SumValue(value if ex else complex(value), "epsilon1", ex)


# extension theory on finite-dimensional subspaces ----------------------------

class SubspaceBasis:
    """Finite-dimensional T-invariant span of quasiexponential generators.

    Closure under T is built by appending shifts of each generator until the
    rank stops growing.
    """

    def __init__(self, generators: Iterable[QuasiExpSeries] = ()):
        self.generators = tuple(generators)
        W = max(1, 2 * sum(g.order for g in self.generators))
        self._window = W
        ech = Echelon()
        basis = []
        for g in self.generators:
            cur = g
            while True:
                if ech.insert(cur.window(W).values) is not None:
                    break
                basis.append(cur)
                cur = cur.shift()
        self.basis = tuple(basis)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def augmented(self, *extra: QuasiExpSeries) -> "SubspaceBasis":
        return SubspaceBasis(self.generators + tuple(extra))

    def in_q1(self) -> bool:
        return all(ONE not in g.spectrum() for g in self.generators)

    def contains(self, y: QuasiExpSeries) -> bool:
        W = self.dim + y.order + 1
        ech = Echelon()
        for b in self.basis:
            ech.insert(b.window(W).values)
        return ech.insert(y.window(W).values) is not None


def theta_xL(x: QuasiExpSeries, L: SubspaceBasis, deg_cap: int | None = None) -> Poly:
    """Monic minimal theta with theta(T) x in L (1 when x is already in L)."""
    cap = x.order if deg_cap is None else deg_cap
    W = L.dim + x.order + 1
    ech = Echelon()
    for b in L.basis:
        ech.insert(b.window(W).values)
    cur = x
    for j in range(cap + 1):
        if j:
            cur = cur.shift()
        rel = ech.insert(cur.window(W).values)
        if rel is not None:
            coeffs = [ZERO] * j + [ONE]
            for idx, w in rel.items():
                i = idx - L.dim
                if i >= 0:
                    coeffs[i] = coeffs[i] - w
            return Poly(coeffs)
    raise DegreeCapExceeded(f"no theta of degree <= {cap}")


@dataclass(frozen=True)
class ExtensionResult:
    theta: Poly
    theta_at_1: object
    obstruction: object | None   # None when not applicable (theta(1) != 0)
    extendable: bool
    unique: bool


def extension_obstruction(x: QuasiExpSeries, L: SubspaceBasis) -> ExtensionResult:
    """Can ε₁ on L extend to L[x]?  Decided by theta(1) and the obstruction value."""
    if not L.in_q1():
        raise NotInQ1("L must lie in Q1 so that its summation is ε₁")
    theta = theta_xL(x, L)
    t1 = theta(ONE)
    if not _zero(t1, 1e-12):
        return ExtensionResult(theta, t1, None, True, True)
    y = apply_poly(theta, x)
    nu = len(theta.coeffs) - 1
    s = partial_sums(x.window(nu))
    obs = epsilon1(y).value
    for n in range(1, nu + 1):
        obs = obs + theta.coeffs[n] * s[n]
    return ExtensionResult(theta, t1, obs, _zero(obs, 1e-9), False)


def _root_one_multiplicity(p: Poly) -> int:
    m = 0
    div = Poly([-ONE, ONE])
    while p.degree >= 1:
        q, r = divmod(p, div)
        if not r.is_zero() and not all(_zero(c, 1e-12) for c in r.coeffs):
            break
        p = q
        m += 1
    return m


def _falling_binomial(k: int) -> Poly:
    """C(n, k) as a polynomial in n."""
    p = Poly([ONE])
    for j in range(k):
        p = p * Poly([exact(-j), ONE])
    return p * (ONE / exact(math.factorial(k)))


def regularize(x: QuasiExpSeries, L: SubspaceBasis) -> Poly:
    """Polynomial pi (deg <= m-1) such that ε₁ on L extends to L[x - pi].

    Two stages: u = (T - 1)**m x strips the (lam - 1)**m factor of
    theta_{x,L} and is adjoined to L; then binomial correctors
    alpha * C(n, k - 1), with alpha the current obstruction, lower the
    multiplicity k of the root 1 step by step.
    """
    theta = theta_xL(x, L)
    if not _zero(theta(ONE), 1e-12):
        raise AlreadyExtendable("θ_{x,L}(1) ≠ 0")
    m = _root_one_multiplicity(theta)
    u = apply_poly(Poly([-ONE, ONE]) ** m, x)
    L2 = L.augmented(u)
    z = x
    pi = Poly()
    for _ in range(m + 1):
        th = theta_xL(z, L2)
        if not _zero(th(ONE), 1e-12):
            break
        k = _root_one_multiplicity(th)
        alpha = extension_obstruction(z, L2).obstruction
        corr = _falling_binomial(k - 1) * alpha
        pi = pi + corr
        z = z - QuasiExpSeries.polynomial(corr)
    return pi
