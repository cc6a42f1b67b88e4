"""Exact small Gallai-Ramsey values by pruned backtracking.

For each n the solver decides whether some k-coloring of K_n avoids both
forbidden structures.  Edges are assigned vertex by vertex ((0,1), (0,2),
(1,2), (0,3), ...), so each assignment of edge (u, v) completes exactly
the subsets {W, u, v} with W below u, and those are checked on the spot.
Color symmetry is broken by first-use order when the colors are
interchangeable; vertex symmetry is not broken.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import EdgeColoring, iter_pairs, pairs
from .search import Witness

GALLAI = "gallai"
RAMSEY = "ramsey"
DEFAULT_NODE_BUDGET = 200_000_000
DEFAULT_N_CAP = 32


class BudgetExceeded(Exception):
    pass


@dataclass(frozen=True)
class ExactResult:
    s: int
    t: int
    k: int
    semantics: str
    # least n with no good coloring, or None when unresolved
    value: int | None
    extremal: Witness | None
    # largest n for which a good coloring was found
    largest_good: int
    nodes: int
    reason: str = ""

    @property
    def resolved(self) -> bool:
        return self.value is not None

    def __iter__(self):
        yield self.value
        yield self.extremal


def _has_clique(adjc, cand, size):
    if size <= 0:
        return True
    if cand.bit_count() < size:
        return False
    if size == 1:
        return cand != 0
    while cand:
        if cand.bit_count() < size:
            return False
        low = cand & -cand
        v = low.bit_length() - 1
        cand ^= low
        if _has_clique(adjc, cand & adjc[v], size - 1):
            return True
    return False


def _completes_rainbow(mat, u, v, c, need):
    """Is there W below u, |W| = need, with W + {u, v} rainbow once (u,v) gets color c?"""
    def rec(start, chosen, used):
        if len(chosen) == need:
            return True
        for w in range(start, u):
            cu, cv = mat[w][u], mat[w][v]
            bits = (1 << cu) | (1 << cv)
            if cu == cv or used & bits:
                continue
            extra = 0
            ok = True
            for x in chosen:
                b = 1 << mat[x][w]
                if (used | bits | extra) & b:
                    ok = False
                    break
                extra |= b
            if not ok:
                continue
            chosen.append(w)
            if rec(w + 1, chosen, used | bits | extra):
                return True
            chosen.pop()
        return False

    return rec(0, [], 1 << c)


def _good_coloring(n, s, t, k, semantics, budget, counter):
    """First good coloring of K_n in search order, or None."""
    order = [(u, v) for v in range(1, n) for u in range(v)]
    mat = [[0] * n for _ in range(n)]
    adj = [[0] * n for _ in range(k + 1)]
    if semantics == RAMSEY:
        forbid = {1: s, 2: t}
        symmetric = s == t
        rainbow_need = None
    else:
        forbid = {c: t for c in range(1, k + 1)}
        symmetric = True
        rainbow_need = s - 2 if pairs(s) <= k and s >= 2 else None
    total = len(order)

    def rec(idx, max_used):
        counter[0] += 1
        if counter[0] > budget:
            raise BudgetExceeded
        if idx == total:
            return True
        u, v = order[idx]
        low = (1 << u) - 1
        top = min(k, max_used + 1) if symmetric else k
        for c in range(1, top + 1):
            size = forbid[c]
            if size <= 2:
                continue
            if _has_clique(adj[c], adj[c][u] & adj[c][v] & low, size - 2):
                continue
            if rainbow_need is not None and u >= rainbow_need and (
                    rainbow_need == 0 or _completes_rainbow(mat, u, v, c, rainbow_need)):
                continue
            mat[u][v] = mat[v][u] = c
            adj[c][u] |= 1 << v
            adj[c][v] |= 1 << u
            if rec(idx + 1, max(max_used, c)):
                return True
            adj[c][u] &= ~(1 << v)
            adj[c][v] &= ~(1 << u)
            mat[u][v] = mat[v][u] = 0
        return False

    if not rec(0, 0):
        return None
    return EdgeColoring(n, k, [mat[i][j] for i, j in iter_pairs(n)])


def exact_gr(s: int, t: int, k: int, n_cap: int = DEFAULT_N_CAP, semantics: str = "auto",
             node_budget: int = DEFAULT_NODE_BUDGET) -> ExactResult:
    """Least n such that every k-coloring of K_n has a rainbow K_s or a
    monochromatic K_t, searched for n up to n_cap.

    ``semantics``: "gallai" applies that definition literally; "ramsey"
    (k = 2 only) forbids K_s in color 1 and K_t in color 2, the classical
    two-color Ramsey number R(s, t); "auto" uses ramsey for k = 2 and
    gallai otherwise.  With s >= 3 and k = 2 no rainbow K_s can exist, so
    the literal definition collapses to R(t, t) there.
    """
    if s < 2 or t < 2 or k < 1:
        raise ValueError("need s, t >= 2 and k >= 1")
    if semantics == "auto":
        semantics = RAMSEY if k == 2 else GALLAI
    if semantics == RAMSEY and k != 2:
        raise ValueError("ramsey semantics needs k = 2")
    if semantics not in (GALLAI, RAMSEY):
        raise ValueError(f"unknown semantics {semantics!r}")
    counter = [0]
    largest_good = 1
    last_witness = None
    for n in range(2, n_cap + 1):
        try:
            col = _good_coloring(n, s, t, k, semantics, node_budget, counter)
        except BudgetExceeded:
            return ExactResult(s, t, k, semantics, None, last_witness, largest_good, counter[0],
                               f"node budget {node_budget} exhausted at n={n}")
        if col is None:
            return ExactResult(s, t, k, semantics, n, last_witness, largest_good, counter[0])
        largest_good = n
        last_witness = Witness(col, (s, t), True, None, f"exact-{semantics}")
    return ExactResult(s, t, k, semantics, None, last_witness, largest_good, counter[0],
                       f"cap n={n_cap} reached")


def verify_ramsey_claim(coloring: EdgeColoring, s: int, t: int) -> bool:
    """Two-color Ramsey check: no K_s in color 1 and no K_t in color 2."""
    adj = coloring.adjacency_bits()
    full = (1 << coloring.n) - 1
    for color, size in ((1, s), (2, t)):
        if color <= coloring.k and _has_clique(adj[color], full, size):
            return False
    return True
