"""Small dense linear algebra over exact scalars (with a float tolerance mode)."""
from __future__ import annotations

from typing import Sequence

from .scalar import ONE, ZERO, is_exact


def _nonzero(c, tol: float) -> bool:
    if is_exact(c):
        return bool(c)
    return abs(c) > tol


class Echelon:
    """Incremental row echelon form that remembers how rows were built.

    ``insert(v)`` reduces ``v`` against the rows seen so far.  If ``v`` lies in
    their span the combination expressing it is returned; otherwise ``v`` is
    stored and ``None`` returned.  Combinations refer to insertion indices.
    """

    def __init__(self, tol: float = 0.0):
        self.tol = tol
        self._rows: list[tuple[int, list, dict]] = []
        self.count = 0

    @property
    def rank(self) -> int:
        return len(self._rows)

    def reduce(self, v: Sequence):
        v = list(v)
        combo: dict[int, object] = {}
        scale = max((abs(complex(c)) for c in v), default=0.0)
        tol = self.tol * max(scale, 1.0)
        for pivot, row, rcombo in self._rows:
            c = v[pivot]
            if not _nonzero(c, tol):
                continue
            for j in range(len(v)):
                if _nonzero(row[j], 0.0):
                    v[j] = v[j] - c * row[j]
            for k, w in rcombo.items():
                combo[k] = combo.get(k, ZERO) - c * w
        return v, combo, tol

    def insert(self, v: Sequence):
        idx = self.count
        self.count += 1
        v, combo, tol = self.reduce(v)
        pivot = next((j for j, c in enumerate(v) if _nonzero(c, tol)), None)
        if pivot is None:
            # 0 = v_idx + combo  =>  v_idx = -combo
            return {k: -w for k, w in combo.items() if _nonzero(w, 0.0)}
        p = v[pivot]
        row = [c / p for c in v]
        combo[idx] = combo.get(idx, ZERO) + ONE
        rcombo = {k: w / p for k, w in combo.items()}
        self._rows.append((pivot, row, rcombo))
        return None


def rank(rows: Sequence[Sequence], tol: float = 0.0) -> int:
    ech = Echelon(tol)
    for r in rows:
        ech.insert(r)
    return ech.rank


def solve(A: Sequence[Sequence], b: Sequence, tol: float = 0.0):
    """Solve ``A x = b`` (possibly overdetermined); ``None`` if inconsistent.

    Free variables, if any, are set to zero.
    """
    m = len(A)
    n = len(A[0]) if m else 0
    M = [list(A[i]) + [b[i]] for i in range(m)]
    piv_cols = []
    r = 0
    scale = max((abs(complex(c)) for row in M for c in row), default=1.0)
    ztol = tol * max(scale, 1.0)
    for col in range(n):
        best = None
        for i in range(r, m):
            if _nonzero(M[i][col], ztol):
                if best is None or (not is_exact(M[i][col]) and abs(M[i][col]) > abs(M[best][col])):
                    best = i
                    if is_exact(M[i][col]):
                        break
        if best is None:
            continue
        M[r], M[best] = M[best], M[r]
        p = M[r][col]
        M[r] = [c / p for c in M[r]]
        for i in range(m):
            if i != r and _nonzero(M[i][col], 0.0):
                f = M[i][col]
                M[i] = [a - f * c for a, c in zip(M[i], M[r])]
        piv_cols.append(col)
        r += 1
        if r == m:
            break
    for i in range(r, m):
        if _nonzero(M[i][n], ztol):
            return None
    x = [ZERO] * n
    for i, col in enumerate(piv_cols):
        x[col] = M[i][n]
    return x
