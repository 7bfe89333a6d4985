"""The cohomological equation psi(t) - psi(qt) = theta(t).

Over trigonometric polynomials the equation is decided orbit by orbit: each
frequency factors uniquely as p * q**i with q not dividing p, and theta is a
coboundary iff the cosine and the sine coefficients sum to zero along every
such orbit.  For a self-map of a finite set the criterion is that xi0 sums
to zero around every cycle.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .errors import MeanNonzero, NotASolution, ZeroInput
from .scalar import ZERO, exact, format_scalar, is_exact, parse_scalar

__all__ = [
    "TrigPoly",
    "QOrbitDecomposition",
    "CEVerdict",
    "FiniteDynSys",
    "FiniteCEResult",
    "coboundary_of",
    "q_orbit_decomposition",
    "solve_trig_ce",
    "nonmeasurability_verdict",
    "solve_finite_ce",
]

FLOAT_TOL = 1e-12


def _coef(c):
    if is_exact(c) or isinstance(c, complex):
        return c
    if isinstance(c, float):
        return complex(c)
    return parse_scalar(c) if isinstance(c, str) else exact(c)


def _nz(c) -> bool:
    return bool(c) if is_exact(c) else abs(c) > FLOAT_TOL


class TrigPoly:
    """c0 + sum_nu (a_nu cos(nu t) + b_nu sin(nu t)), positive integer nu."""

    __slots__ = ("terms", "c0")

    def __init__(self, terms: Mapping | None = None, c0=0):
        clean = {}
        for nu, (a, b) in (terms or {}).items():
            nu = int(nu)
            if nu <= 0:
                raise ValueError("frequencies must be positive integers")
            a, b = _coef(a), _coef(b)
            if nu in clean:
                a, b = clean[nu][0] + a, clean[nu][1] + b
            clean[nu] = (a, b)
        self.terms = {nu: ab for nu, ab in sorted(clean.items()) if _nz(ab[0]) or _nz(ab[1])}
        self.c0 = _coef(c0)

    @classmethod
    def cos(cls, nu: int, a=1) -> "TrigPoly":
        return cls({nu: (a, 0)})

    @classmethod
    def sin(cls, nu: int, b=1) -> "TrigPoly":
        return cls({nu: (0, b)})

    @classmethod
    def from_dict(cls, d: Mapping) -> "TrigPoly":
        terms: dict[int, list] = {}
        for nu, a in (d.get("cos") or {}).items():
            terms.setdefault(int(nu), [0, 0])[0] = parse_scalar(a)
        for nu, b in (d.get("sin") or {}).items():
            terms.setdefault(int(nu), [0, 0])[1] = parse_scalar(b)
        return cls({nu: tuple(ab) for nu, ab in terms.items()}, parse_scalar(d.get("c0", 0)))

    def to_dict(self) -> dict:
        out = {
            "cos": {str(nu): format_scalar(a) for nu, (a, b) in self.terms.items() if _nz(a)},
            "sin": {str(nu): format_scalar(b) for nu, (a, b) in self.terms.items() if _nz(b)},
        }
        if _nz(self.c0):
            out["c0"] = format_scalar(self.c0)
        return out

    @property
    def degree(self) -> int:
        return max(self.terms, default=0)

    @property
    def mean(self):
        return self.c0

    @property
    def frequencies(self) -> list[int]:
        return list(self.terms)

    @property
    def exact(self) -> bool:
        return is_exact(self.c0) and all(is_exact(a) and is_exact(b) for a, b in self.terms.values())

    def is_zero(self) -> bool:
        return not self.terms and not _nz(self.c0)

    def __eq__(self, other):
        if not isinstance(other, TrigPoly):
            return NotImplemented
        return self.terms == other.terms and self.c0 == other.c0

    def __repr__(self):
        parts = [str(self.c0)] if _nz(self.c0) else []
        for nu, (a, b) in self.terms.items():
            if _nz(a):
                parts.append(f"{a}*cos({nu}t)")
            if _nz(b):
                parts.append(f"{b}*sin({nu}t)")
        return "TrigPoly(" + (" + ".join(parts) or "0") + ")"

    def __add__(self, other: "TrigPoly") -> "TrigPoly":
        terms = dict(self.terms)
        for nu, (a, b) in other.terms.items():
            a0, b0 = terms.get(nu, (ZERO, ZERO))
            terms[nu] = (a0 + a, b0 + b)
        return TrigPoly(terms, self.c0 + other.c0)

    def __mul__(self, c) -> "TrigPoly":
        c = _coef(c)
        return TrigPoly({nu: (a * c, b * c) for nu, (a, b) in self.terms.items()}, self.c0 * c)

    __rmul__ = __mul__

    def __neg__(self):
        return self * exact(-1)

    def __sub__(self, other):
        return self + (-other)

    def dilate(self, q: int) -> "TrigPoly":
        """t -> theta(q t)."""
        return TrigPoly({nu * q: ab for nu, ab in self.terms.items()}, self.c0)

    def zero_mean(self) -> "TrigPoly":
        return TrigPoly(self.terms, 0)

    def l2_norm_sq(self):
        """Squared L2 norm for dt/2pi on the nonconstant part: sum (a^2 + b^2)/2."""
        total = ZERO
        for a, b in self.terms.values():
            total = total + (a * a + b * b) / 2
        return total

    def __call__(self, t):
        t = np.asarray(t, dtype=np.float64)
        out = np.full(t.shape, float(complex(self.c0).real))
        for nu, (a, b) in self.terms.items():
            fa, fb = complex(a).real, complex(b).real
            out = out + fa * np.cos(nu * t) + fb * np.sin(nu * t)
        return out if out.shape else float(out)


def coboundary_of(psi: TrigPoly, q: int) -> TrigPoly:
    """psi - psi(q .)."""
    return TrigPoly(psi.terms) - TrigPoly(psi.dilate(q).terms)


def _split(nu: int, q: int) -> tuple[int, int]:
    i = 0
    while nu % q == 0:
        nu //= q
        i += 1
    return nu, i


@dataclass(frozen=True)
class QOrbitDecomposition:
    q: int
    orbits: dict   # p -> [(i, a, b), ...] sorted by i

    def sums(self, p: int):
        a = b = ZERO
        for _, ai, bi in self.orbits[p]:
            a, b = a + ai, b + bi
        return a, b

    def to_dict(self) -> dict:
        return {
            "q": self.q,
            "orbits": {
                str(p): [[i, format_scalar(a), format_scalar(b)] for i, a, b in entries]
                for p, entries in self.orbits.items()
            },
        }


def _require_zero_mean(theta: TrigPoly):
    if _nz(theta.c0):
        raise MeanNonzero(f"mean value {theta.c0} != 0")


def q_orbit_decomposition(theta: TrigPoly, q: int) -> QOrbitDecomposition:
    if q < 2:
        raise ValueError("q must be an integer >= 2")
    _require_zero_mean(theta)
    orbits: dict[int, list] = {}
    for nu, (a, b) in theta.terms.items():
        p, i = _split(nu, q)
        orbits.setdefault(p, []).append((i, a, b))
    for entries in orbits.values():
        entries.sort()
    return QOrbitDecomposition(q, dict(sorted(orbits.items())))


@dataclass(frozen=True)
class CEVerdict:
    kind: str                        # Coboundary | NoMeasurableSolution | Unknown
    psi: TrigPoly | None = None
    reason: str | None = None        # RatioCondition | OrbitSumNonzero | free text for Unknown
    detail: dict = field(default_factory=dict)

    @property
    def is_coboundary(self) -> bool:
        return self.kind == "Coboundary"

    def to_dict(self, include_psi: bool = True) -> dict:
        out = {"verdict": self.kind}
        if self.reason:
            out["reason"] = self.reason
        if self.psi is not None and include_psi:
            out["psi"] = self.psi.to_dict()
        if self.detail:
            out["detail"] = self.detail
        return out


def solve_trig_ce(theta: TrigPoly, q: int) -> CEVerdict:
    """Decide and solve over trigonometric polynomials.

    On each orbit the solution has coefficients h_i = sum_{j<=i} a_{p,j}
    at frequency p q^i (same for the sines); the last prefix sum is the
    orbit sum and must vanish.  Gaps in the occupied indices simply repeat
    a prefix sum.
    """
    dec = q_orbit_decomposition(theta, q)
    psi_terms = {}
    for p, entries in dec.orbits.items():
        sa, sb = dec.sums(p)
        if _nz(sa) or _nz(sb):
            return CEVerdict(
                "NoMeasurableSolution",
                reason="OrbitSumNonzero",
                detail={"orbit": p, "cos_sum": format_scalar(sa), "sin_sum": format_scalar(sb),
                        "note": "no trigonometric-polynomial solution, hence no measurable one"},
            )
        if not (is_exact(sa) and is_exact(sb)) and (sa != 0 or sb != 0):
            return CEVerdict("Unknown", reason="orbit sum zero only within float tolerance",
                             detail={"orbit": p})
        by_i = {i: (a, b) for i, a, b in entries}
        ha = hb = ZERO
        for i in range(entries[-1][0]):
            a, b = by_i.get(i, (ZERO, ZERO))
            ha, hb = ha + a, hb + b
            if _nz(ha) or _nz(hb):
                psi_terms[p * q**i] = (ha, hb)
    psi = TrigPoly(psi_terms)
    if theta.exact and coboundary_of(psi, q) != theta:
        raise NotASolution("reconstructed psi fails forward verification")
    return CEVerdict("Coboundary", psi=psi)


def nonmeasurability_verdict(theta: TrigPoly, q: int) -> CEVerdict:
    """Ratio condition first, then the complete trigonometric solver.

    If no ratio of two frequencies is a power of q (all frequencies in
    distinct q-orbits) every solution is nonmeasurable.  A theta of degree
    below q always qualifies.
    """
    _require_zero_mean(theta)
    if theta.is_zero():
        raise ZeroInput("theta = 0 is trivially a coboundary (psi = 0)")
    dec = q_orbit_decomposition(theta, q)
    if all(len(e) == 1 for e in dec.orbits.values()):
        detail = {"frequencies": theta.frequencies}
        if theta.degree < q:
            detail["note"] = "degree < q: the ratio condition holds automatically"
        return CEVerdict("NoMeasurableSolution", reason="RatioCondition", detail=detail)
    return solve_trig_ce(theta, q)


# finite dynamical systems -------------------------------------------------

@dataclass(frozen=True)
class FiniteDynSys:
    f: tuple
    xi0: tuple
    points: tuple = ()

    def __init__(self, f, xi0, points=None):
        f = tuple(int(v) for v in f)
        if len(xi0) != len(f):
            raise ValueError("f and xi0 must have the same length")
        if any(not 0 <= v < len(f) for v in f):
            raise ValueError("f must map the point set into itself")
        object.__setattr__(self, "f", f)
        object.__setattr__(self, "xi0", tuple(_coef(v) for v in xi0))
        object.__setattr__(self, "points", tuple(points) if points is not None else tuple(range(len(f))))

    def __len__(self):
        return len(self.f)

    def cycles(self) -> list[list[int]]:
        """Cycles of the functional graph, each starting at its smallest index."""
        state = [0] * len(self.f)   # 0 new, 1 on stack, 2 done
        out = []
        for start in range(len(self.f)):
            path = []
            v = start
            while state[v] == 0:
                state[v] = 1
                path.append(v)
                v = self.f[v]
            if state[v] == 1:
                cyc = path[path.index(v):]
                k = cyc.index(min(cyc))
                out.append(cyc[k:] + cyc[:k])
            for w in path:
                state[w] = 2
        out.sort()
        return out


@dataclass(frozen=True)
class FiniteCEResult:
    solvable: bool
    psi: tuple | None = None
    witness: tuple | None = None      # offending cycle
    cycle_sum: object = None

    def to_dict(self) -> dict:
        if self.solvable:
            return {"verdict": "Solvable", "psi": [format_scalar(v) for v in self.psi]}
        return {"verdict": "Unsolvable", "witness_cycle": list(self.witness),
                "cycle_sum": format_scalar(self.cycle_sum)}


def solve_finite_ce(sys: FiniteDynSys) -> FiniteCEResult:
    """psi(a) - psi(f a) = xi0(a), or a cycle with nonzero xi0-sum."""
    f, xi = sys.f, sys.xi0
    n = len(f)
    cycles = sys.cycles()
    for cyc in cycles:
        total = ZERO
        for v in cyc:
            total = total + xi[v]
        if _nz(total):
            return FiniteCEResult(False, witness=tuple(cyc), cycle_sum=total)
    psi = [None] * n
    for cyc in cycles:
        psi[cyc[0]] = ZERO
        for k in range(len(cyc) - 1):
            psi[cyc[k + 1]] = psi[cyc[k]] - xi[cyc[k]]
    for start in range(n):
        path = []
        v = start
        while psi[v] is None:
            path.append(v)
            v = f[v]
        for w in reversed(path):
            psi[w] = psi[f[w]] + xi[w]
    for a in range(n):
        if _nz(psi[a] - psi[f[a]] - xi[a]):
            raise NotASolution(f"relation fails at point {a}")
    return FiniteCEResult(True, psi=tuple(psi))
