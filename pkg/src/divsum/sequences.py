"""Finite windows of series and the basic operators on them.

A :class:`SampledSeries` is the window ``(x_0, ..., x_{N-1})`` of some
infinite series.  Operators report precisely how much window they consume:
``shift`` and ``delta`` shrink it by one, ``partial_sums`` grows it by one
(``s_0 = 0`` is included).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import NoConvergenceCertificate, NotConvergent, WindowExhausted
from .scalar import ZERO, Scalar, exact, is_exact

__all__ = [
    "SampledSeries",
    "SumValue",
    "shift",
    "delta",
    "partial_sums",
    "tail_certificate",
    "delta_preimage",
    "standard_sum",
]

METHODS = ("standard", "cesaro1", "euler", "epsilon1", "periodic", "from_solution")


class SampledSeries:
    __slots__ = ("values",)

    def __init__(self, values: Iterable):
        vals = []
        for v in values:
            if isinstance(v, float):
                v = complex(v)
            elif not isinstance(v, complex) and not is_exact(v):
                v = exact(v)
            vals.append(v)
        if not vals:
            raise WindowExhausted("a window needs at least one entry")
        self.values = tuple(vals)

    def __len__(self):
        return len(self.values)

    def __getitem__(self, k):
        if isinstance(k, slice):
            return SampledSeries(self.values[k])
        return self.values[k]

    def __iter__(self):
        return iter(self.values)

    def __eq__(self, other):
        if isinstance(other, SampledSeries):
            return self.values == other.values
        return NotImplemented

    def __repr__(self):
        head = ", ".join(str(v) for v in self.values[:6])
        more = ", ..." if len(self.values) > 6 else ""
        return f"SampledSeries([{head}{more}], N={len(self.values)})"

    @property
    def exact(self) -> bool:
        return all(is_exact(v) for v in self.values)


@dataclass(frozen=True)
class SumValue:
    value: Scalar
    method: str
    exact: bool

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"unknown summation method {self.method!r}")


def shift(x: SampledSeries) -> SampledSeries:
    if len(x) < 2:
        raise WindowExhausted("shift needs a window of length >= 2")
    return SampledSeries(x.values[1:])


def delta(x: SampledSeries) -> SampledSeries:
    """(x_n - x_{n+1}); the window shrinks by one."""
    if len(x) < 2:
        raise WindowExhausted("delta needs a window of length >= 2")
    v = x.values
    return SampledSeries(v[i] - v[i + 1] for i in range(len(v) - 1))


def partial_sums(x: SampledSeries | Sequence) -> list:
    """[s_0, ..., s_N] with s_0 = 0."""
    out = [ZERO]
    acc = ZERO
    for v in x:
        acc = acc + v
        out.append(acc)
    return out


@dataclass(frozen=True)
class TailCertificate:
    kind: str          # "finite" | "geometric" | "cauchy"
    bound: float
    block: int         # trailing entries the certificate relied on
    tail: Scalar       # estimate of sum_{k >= N} y_k
    exact: bool        # tail estimate is exactly the true tail (constant ratio)


def tail_certificate(y: SampledSeries, tail_tol: float) -> TailCertificate:
    """Certify that the series behind ``y`` converges, to within ``tail_tol``.

    Geometric majorization is tried first: if consecutive ratios on the
    trailing quarter of the window stay below some r < 1 (with r**len at
    most 1/e across that block), the tail beyond
    the window is bounded by |y_{N-1}| r/(1-r).  Otherwise the partial sums
    over the trailing half must all stay within ``tail_tol`` of s_N.
    Raises :class:`NoConvergenceCertificate` when neither holds.
    """
    v = y.values
    n = len(v)
    start = max(0, n - max(2, n // 4))
    trail = v[start:]
    if all(is_exact(c) and not c for c in trail) or all(c == 0 for c in trail):
        return TailCertificate("finite", 0.0, len(trail), ZERO, all(is_exact(c) for c in trail))
    if n >= 3:
        ratios = []
        for a, b in zip(trail, trail[1:]):
            if abs(complex(a)) == 0:
                ratios = None
                break
            ratios.append(b / a)
        if ratios:
            r = max(abs(complex(q)) for q in ratios)
            # decay must be visible across the trailing block, not just r < 1
            if r < 1 and (1 - r) * len(trail) >= 1:
                bound = abs(complex(v[-1])) * r / (1 - r)
                if bound < tail_tol:
                    last = ratios[-1]
                    constant = all(is_exact(q) for q in ratios) and all(q == last for q in ratios)
                    tail = v[-1] * last / (1 - last)
                    return TailCertificate("geometric", bound, len(trail), tail, constant)
    s = partial_sums(v)
    s_end = s[-1]
    half = len(s) // 2
    spread = max(abs(complex(s_end - sk)) for sk in s[half:])
    if n >= 4 and spread < tail_tol:
        return TailCertificate("cauchy", spread, len(s) - half, ZERO, False)
    raise NoConvergenceCertificate(
        f"tail not certified below {tail_tol:g} (trailing partial-sum spread {spread:.3g})"
    )


def delta_preimage(y: SampledSeries, tail_tol: float = 1e-9) -> SampledSeries:
    """Tail sums (sum_{k >= n} y_k), the unique preimage under delta in c_0.

    The unseen tail beyond the window enters through the certificate's
    estimate.  When that estimate is exact the full window is returned;
    otherwise the trailing block the certificate consumed is dropped, since
    truncation makes those entries artificially small.  delta of the result
    reproduces ``y`` on the overlap exactly.
    """
    cert = tail_certificate(y, tail_tol)
    out = [cert.tail]
    for v in reversed(y.values):
        out.append(out[-1] + v)
    out.pop(0)
    out.reverse()
    if not cert.exact:
        out = out[: max(1, len(out) - cert.block)]
    return SampledSeries(out)


def standard_sum(x: SampledSeries, tol: float = 1e-9) -> SumValue:
    """lim s_n estimated from the window.

    Exact only when the certificate's tail is exact (finite or exactly
    geometric tail); otherwise the value is a float estimate.
    """
    try:
        cert = tail_certificate(x, tol)
    except NoConvergenceCertificate as exc:
        raise NotConvergent(str(exc)) from None
    total = partial_sums(x)[-1] + cert.tail
    is_ex = x.exact and cert.exact and is_exact(total)
    if not is_ex:
        total = complex(total)
    return SumValue(total, "standard", is_ex)
