"""Orbital series theta(t) + theta(qt) + theta(q^2 t) + ... and empirical evidence.

Exact quantities (Parseval norms, lacunarity) are computed from the
frequency sets; numeric ones use integer-phase grids (see ``_kernels``) and
digit-stream orbits.  Empirical results are evidence, never proof.
"""
from __future__ import annotations

import csv
import io
import math
import os
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import _kernels
from .coboundary import (
    TrigPoly,
    coboundary_of,
    nonmeasurability_verdict,
    q_orbit_decomposition,
    solve_trig_ce,
)
from .errors import HypothesisViolation, MeanNonzero, NotASolution, ZeroInput
from .scalar import format_scalar, is_exact

__all__ = [
    "DEFAULT_SEED",
    "OrbitalSeriesSpec",
    "EmpiricalReport",
    "L2Norm",
    "orbital_partial_sum",
    "birkhoff_average",
    "expanded_spectrum",
    "l2_norm_orbital",
    "l2_norm_profile",
    "lacunarity_kappa",
    "grid_size",
    "level_set_measure",
    "level_set_profile",
    "summation_from_solution",
    "orbital_report",
    "default_seed",
]

DEFAULT_SEED = 20240501
TWO_PI = 2.0 * math.pi
QUAD_POINTS = 2**14
LEVEL_POINTS = 2**16
GRID_CAVEAT = "jittered uniform grid of N cells: resolution 1/N, sampling error about sqrt(p(1-p)/N)"


def default_seed() -> int:
    env = os.environ.get("DIVSUM_SEED")
    return int(env) if env not in (None, "") else DEFAULT_SEED


@dataclass(frozen=True)
class OrbitalSeriesSpec:
    theta: TrigPoly
    q: int

    def __post_init__(self):
        if int(self.q) < 2:
            raise ValueError("q must be an integer >= 2")

    @property
    def mean_zero(self) -> bool:
        c0 = self.theta.c0
        return (not c0) if is_exact(c0) else abs(c0) < 1e-15


def orbital_partial_sum(spec: OrbitalSeriesSpec, n: int, t: float) -> float:
    """theta_n(t) = sum_{k<n} theta(q^k t), reducing the argument each step."""
    if n < 0:
        raise ValueError("n must be >= 0")
    total = 0.0
    t = math.fmod(t, TWO_PI)
    for _ in range(n):
        total += spec.theta(t)
        t = math.fmod(spec.q * t, TWO_PI)
    return total


def _trig_arrays(phi: TrigPoly):
    freqs = np.array(list(phi.terms), dtype=np.float64)
    a = np.array([complex(v[0]).real for v in phi.terms.values()], dtype=np.float64)
    b = np.array([complex(v[1]).real for v in phi.terms.values()], dtype=np.float64)
    return freqs, a, b, float(complex(phi.c0).real)


def birkhoff_average(phi: TrigPoly, q: int, m: int, t0: float | None = None,
                     seed: int | None = None) -> float:
    """(1/m) sum_{n<m} phi(q^n t0 mod 2 pi).

    The orbit is the shift of the base-q digits of t0 / 2 pi.  The digits
    the float t0 actually determines are taken from it; the rest, which a
    double cannot carry, come from the seeded generator (a uniformly random
    point in t0's precision cell).  With ``t0=None`` the start is random too.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    q = int(q)
    rng = np.random.default_rng(default_seed() if seed is None else seed)
    D = _digit_depth(q)
    total = m + D
    if t0 is None:
        digits = rng.integers(0, q, size=total, dtype=np.int64)
    else:
        known = int(53 * math.log(2) / math.log(q))
        u = Fraction(math.fmod(t0, TWO_PI) / TWO_PI) % 1
        head = []
        for _ in range(min(known, total)):
            u *= q
            d = int(u)
            head.append(d)
            u -= d
        tail = rng.integers(0, q, size=total - len(head), dtype=np.int64)
        digits = np.concatenate((np.array(head, dtype=np.int64), tail))
    freqs, a, b, c0 = _trig_arrays(phi)
    return _kernels.birkhoff_digits(digits, q, D, m, freqs, a, b, c0)


def expanded_spectrum(spec: OrbitalSeriesSpec, n: int) -> TrigPoly:
    """theta_n as a trigonometric polynomial (colliding frequencies merged)."""
    out = TrigPoly()
    cur = spec.theta.zero_mean()
    for _ in range(n):
        out = out + cur
        cur = cur.dilate(spec.q)
    return out + TrigPoly({}, spec.theta.c0 * n)


def _distinct_orbits(theta: TrigPoly, q: int) -> bool:
    dec = q_orbit_decomposition(theta.zero_mean(), q)
    return all(len(e) == 1 for e in dec.orbits.values())


def _aliased(frequencies, N: int) -> bool:
    """True if two distinct frequencies (or one with itself) fold together mod N."""
    seen = {}
    for nu in frequencies:
        r = nu % N
        if r == 0 or 2 * r == N:
            return True
        key = min(r, N - r)
        if key in seen and seen[key] != nu:
            return True
        seen[key] = nu
    return False


@dataclass(frozen=True)
class L2Norm:
    n: int
    exact_sq: object          # exact squared norm (Parseval), a Scalar
    exact: float              # sqrt of exact_sq
    numeric: float            # grid quadrature
    disjoint: bool            # expanded spectra of the n shifts are pairwise disjoint
    aliased: bool             # the quadrature grid folds frequencies of theta_n


def _order_exceeds(q: int, N: int, bound: int) -> bool:
    x, o = q % N, 1
    while x != 1 and o <= bound:
        x = x * q % N
        o += 1
    return o > bound


def grid_size(q: int, target: int, n_max: int) -> int:
    """Quadrature grid for theta_n: ``target`` when q has multiplicative order
    above 2 * n_max modulo it (so q^k t_j never folds back), else the next prime
    with that property."""
    if math.gcd(q, target) == 1 and _order_exceeds(q, target, 2 * n_max):
        return target
    p = target + 1
    while not (_is_prime(p) and q % p and _order_exceeds(q, p, 2 * n_max)):
        p += 1
    return p


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    for d in range(2, int(p**0.5) + 1):
        if p % d == 0:
            return False
    return True


def _table(theta: TrigPoly, N: int) -> np.ndarray:
    t = TWO_PI * np.arange(N, dtype=np.float64) / N
    return np.asarray(theta(t), dtype=np.float64)


def l2_norm_profile(spec: OrbitalSeriesSpec, ns, grid: int = QUAD_POINTS) -> list[L2Norm]:
    """||theta_n||_2 for dt/2pi and each n: exact via Parseval, numeric via quadrature.

    The quadrature samples theta_n on the integer-phase grid, where it is
    exact for trigonometric polynomials whose frequencies stay distinct
    modulo N (``aliased`` reports when they do not).
    """
    ns = [int(n) for n in ns]
    if any(n < 0 for n in ns):
        raise ValueError("n must be >= 0")
    disjoint = _distinct_orbits(spec.theta, spec.q) if spec.theta.terms else True
    pos = sorted(n for n in set(ns) if n > 0)
    numeric = {0: 0.0}
    N = grid
    if pos:
        N = grid_size(spec.q, grid, pos[-1])
        _, sumsq = _kernels.orbit_stats(_table(spec.theta, N), spec.q, pos, [math.inf] * len(pos))
        numeric.update({n: math.sqrt(v / N) for n, v in zip(pos, sumsq)})
    out = []
    for n in ns:
        expanded = expanded_spectrum(spec, n)
        exact_sq = expanded.l2_norm_sq() + expanded.c0 * expanded.c0
        out.append(L2Norm(n, exact_sq, math.sqrt(float(complex(exact_sq).real)), numeric[n],
                          disjoint, n > 0 and _aliased(expanded.frequencies, N)))
    return out


def l2_norm_orbital(spec: OrbitalSeriesSpec, n: int, grid: int = QUAD_POINTS) -> L2Norm:
    return l2_norm_profile(spec, [n], grid)[0]


def lacunarity_kappa(spec: OrbitalSeriesSpec, window_n: int = 32) -> float:
    """min(2, inf of consecutive ratios in the expanded frequency set).

    The value is recomputed at ``2 * window_n``; consecutive ratios come
    from finitely many exponent patterns, so agreement of the two windows
    certifies the infimum.
    """
    if not spec.theta.terms:
        raise ZeroInput("theta has no frequencies")
    if not _distinct_orbits(spec.theta, spec.q):
        raise HypothesisViolation("some frequency ratio is a power of q")

    def kappa(n):
        omega = sorted({nu * spec.q**k for nu in spec.theta.terms for k in range(n)})
        best = Fraction(2)
        for lo, hi in zip(omega, omega[1:]):
            best = min(best, Fraction(hi, lo))
        return best

    k1, k2 = kappa(window_n), kappa(2 * window_n)
    if k1 != k2:
        raise HypothesisViolation(f"lacunarity not stable: {float(k1)} at n={window_n}, {float(k2)} at 2n")
    return float(k1)


def _digit_depth(q: int) -> int:
    D = int(62 // math.log2(q))
    while q**D > 2**62:
        D -= 1
    return D


def _jittered_orbits(N: int, q: int, steps: int, rng):
    """Start windows and digit tails for one uniform point in each cell [j/N, (j+1)/N).

    The float position fixes the leading base-q digits it can carry; deeper
    digits are drawn at random, like the rest of a generic expansion.
    """
    D = _digit_depth(q)
    known = min(D, int(48 // math.log2(q)))
    x = (np.arange(N, dtype=np.float64) + rng.random(N)) / N
    W = np.zeros(N, dtype=np.int64)
    for _ in range(known):
        x = x * q
        d = np.minimum(np.floor(x), q - 1).astype(np.int64)
        x -= d
        W = W * q + d
    for _ in range(D - known):
        W = W * q + rng.integers(0, q, size=N, dtype=np.int64)
    tail = rng.integers(0, q, size=(N, max(steps, 1)), dtype=np.int64)
    return W, tail, D


def level_set_profile(spec: OrbitalSeriesSpec, ns, gamma: float, grid: int = LEVEL_POINTS,
                      seed: int | None = None):
    """mes{t : |theta_n(t)| >= gamma sqrt(n)} for each n, from one pass over a jittered grid.

    Each of the ``grid`` cells of [0, 2 pi) contributes one point whose
    orbit is followed exactly as a base-q digit stream.  Returns a list of
    measure estimates in the order of ``ns``.
    """
    order = sorted(range(len(ns)), key=lambda i: ns[i])
    srt = [int(ns[i]) for i in order]
    if any(n < 1 for n in srt):
        raise ValueError("level sets need n >= 1")
    rng = np.random.default_rng(default_seed() if seed is None else seed)
    W0, tail, D = _jittered_orbits(grid, spec.q, srt[-1], rng)
    freqs, a, b, c0 = _trig_arrays(spec.theta)
    thr = [gamma * math.sqrt(n) for n in srt]
    counts = _kernels.level_counts(W0, tail, spec.q, D, srt, thr, freqs, a, b, c0)
    out = [0.0] * len(ns)
    for pos, i in enumerate(order):
        out[i] = float(counts[pos]) / grid
    return out


def level_set_measure(spec: OrbitalSeriesSpec, n: int, gamma: float, grid: int = LEVEL_POINTS,
                      seed: int | None = None) -> float:
    return level_set_profile(spec, [n], gamma, grid, seed)[0]


@dataclass(frozen=True)
class SolutionTable:
    t: list
    sigma: list               # psi(t) - mean psi
    sigma_qt: list
    theta: list
    axiom_residual: str       # symbolic residual, "0" when the identity holds exactly
    max_numeric_residual: float

    def to_dict(self) -> dict:
        return {
            "t": self.t, "sigma": self.sigma, "sigma_qt": self.sigma_qt, "theta": self.theta,
            "axiom_residual": self.axiom_residual, "max_numeric_residual": self.max_numeric_residual,
        }


def summation_from_solution(psi: TrigPoly, spec: OrbitalSeriesSpec, points: int = 16) -> SolutionTable:
    """sigma(X(t)) = psi(t) - mean(psi) for a solution psi, checked against the axiom."""
    hat = psi.zero_mean()
    residual = coboundary_of(hat, spec.q) - spec.theta
    if not residual.is_zero():
        raise NotASolution(f"psi - psi(q.) - theta = {residual}")
    t = TWO_PI * np.arange(points) / points
    s, sq, th = hat(t), hat(spec.q * t), spec.theta(t)
    return SolutionTable(
        [float(v) for v in t], [float(v) for v in s], [float(v) for v in sq], [float(v) for v in th],
        "0", float(np.abs(s - sq - th).max()),
    )


@dataclass
class EmpiricalReport:
    n_values: list
    l2_norms: list             # L2Norm per n
    level_gamma: float
    measures: list
    grid: int
    verdicts: dict = field(default_factory=dict)

    def rows(self):
        for n, norm, mes in zip(self.n_values, self.l2_norms, self.measures):
            yield {
                "n": n,
                "exact_norm": repr(norm.exact),
                "numeric_norm": repr(norm.numeric),
                "measure_estimate": repr(mes),
                "exact_norm_sq": format_scalar(norm.exact_sq),
            }

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=["n", "exact_norm", "numeric_norm", "measure_estimate", "exact_norm_sq"],
                           lineterminator="\n")
        w.writeheader()
        for row in self.rows():
            w.writerow(row)
        return buf.getvalue()


def orbital_report(spec: OrbitalSeriesSpec, n_max: int = 64, gamma: float | None = None,
                   seed: int | None = None, level_grid: int = LEVEL_POINTS,
                   quad_grid: int = QUAD_POINTS, birkhoff_m: int = 100_000):
    """Verdicts, exact norms and level-set evidence for one orbital series.

    Returns ``(report, bundle)``: the per-n table and a JSON-ready dict.
    """
    seed = default_seed() if seed is None else seed
    theta, q = spec.theta, spec.q
    bundle: dict = {"theta": theta.to_dict(), "q": q, "seed": seed}
    tau_sq = theta.zero_mean().l2_norm_sq()
    tau = math.sqrt(float(complex(tau_sq).real))
    if gamma is None:
        gamma = tau / 2
    if spec.mean_zero:
        bundle["summable_ae"] = {"verdict": True,
                                 "basis": "zero mean and an ergodic map: the orbital series is summable a.e."}
        try:
            bundle["ce"] = solve_trig_ce(theta, q).to_dict()
        except MeanNonzero:  # pragma: no cover
            pass
        try:
            bundle["nonmeasurability"] = nonmeasurability_verdict(theta, q).to_dict(include_psi=False)
        except ZeroInput as exc:
            bundle["nonmeasurability"] = {"verdict": "not applicable", "reason": str(exc)}
    else:
        reason = "nonzero mean: zero mean is necessary for a measurable solution and for summability"
        bundle["summable_ae"] = {"verdict": "not applicable", "reason": reason}
        bundle["ce"] = {"verdict": "not applicable", "reason": reason}
        bundle["nonmeasurability"] = {"verdict": "not applicable", "reason": reason}
    try:
        bundle["kappa"] = lacunarity_kappa(spec, max(1, min(n_max, 32)))
    except (HypothesisViolation, ZeroInput) as exc:
        bundle["kappa"] = None
        bundle["kappa_reason"] = str(exc)
    ns = list(range(1, n_max + 1))
    norms = l2_norm_profile(spec, ns, quad_grid)
    measures = level_set_profile(spec, ns, gamma, level_grid, seed) if ns else []
    bundle["tau_sq"] = format_scalar(tau_sq)
    bundle["level_sets"] = {
        "gamma": gamma, "grid": level_grid, "min_measure": min(measures) if measures else None,
        "caveat": GRID_CAVEAT, "kind": "empirical evidence, not proof",
    }
    bundle["birkhoff"] = {
        "m": birkhoff_m, "average": birkhoff_average(theta, q, birkhoff_m, seed=seed),
        "expected": float(complex(theta.c0).real), "kind": "empirical evidence, not proof",
    }
    ce = bundle.get("ce", {})
    if ce.get("verdict") == "Coboundary":
        psi = TrigPoly.from_dict(ce["psi"])
        bundle["summation_table"] = summation_from_solution(psi, spec).to_dict()
    report = EmpiricalReport(ns, norms, gamma, measures, level_grid, {
        k: bundle[k] for k in ("summable_ae", "ce", "nonmeasurability")
    })
    return report, bundle
