"""Exact verification of witness colorings.

Clique claims: no rainbow K_s and no monochromatic K_t.  Pattern claims: no
rainbow copy of G and no monochromatic copy of H.  Counterexamples are
returned in a fixed order (rainbow side first, then lexicographic vertex
tuples) so every caller sees the same first violation.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from itertools import combinations

from .core import EdgeColoring, SmallGraph, MAX_PATTERN_ORDER, pairs

RAINBOW_CLIQUE = "RainbowClique"
MONO_CLIQUE = "MonoClique"
RAINBOW_PATTERN = "RainbowPattern"
MONO_PATTERN = "MonoPattern"


@dataclass(frozen=True)
class BadEvent:
    kind: str
    vertices: tuple
    color: int | None = None
    # pattern events: image of pattern vertex i is mapping[i]
    mapping: tuple | None = None

    def pattern_edges(self, pattern: SmallGraph) -> list[tuple[int, int]]:
        m = self.mapping
        return sorted((min(m[u], m[v]), max(m[u], m[v])) for u, v in pattern.edges)

    def describe(self) -> str:
        verts = " ".join(map(str, self.vertices))
        if self.color is None:
            return f"{self.kind} on vertices {verts}"
        return f"{self.kind} color {self.color} on vertices {verts}"


@dataclass(frozen=True)
class Verdict:
    ok: bool
    counterexample: BadEvent | None = None
    # sides that were vacuous because the pattern is larger than the coloring
    vacuous: tuple = ()

    def __bool__(self):
        return self.ok

    def __iter__(self):
        yield self.ok
        yield self.counterexample


# --------------------------------------------------------------------------
# clique claims
# --------------------------------------------------------------------------

def _rainbow_from(mat, n, s, first):
    """Lexicographically first rainbow s-subset whose least vertex is `first`."""
    chosen = [first]

    def extend(start, used):
        if len(chosen) == s:
            return tuple(chosen)
        # not enough vertices left
        for v in range(start, n - (s - len(chosen)) + 1):
            row = mat[v]
            add = 0
            ok = True
            for u in chosen:
                bit = 1 << row[u]
                if used & bit or add & bit:
                    ok = False
                    break
                add |= bit
            if not ok:
                continue
            chosen.append(v)
            found = extend(v + 1, used | add)
            if found:
                return found
            chosen.pop()
        return None

    return extend(first + 1, 0)


def _mono_from(adj, n, t, first):
    """Lexicographically first monochromatic t-subset with least vertex `first`.

    Returns (subset, color).  Scans the t-subsets in lex order across all
    colors, so the first hit is the lexicographically least mono clique.
    """
    k = len(adj) - 1
    best = None
    higher = ~((1 << (first + 1)) - 1)
    for c in range(1, k + 1):
        cand = adj[c][first] & higher
        found = _clique_lex(adj[c], cand, t - 1)
        if found is not None:
            sub = (first,) + found
            if best is None or sub < best[0]:
                best = (sub, c)
    return best


def _clique_lex(adjc, cand, size):
    """Lex-least clique of `size` vertices inside bitmask cand."""
    if size == 0:
        return ()
    while cand:
        if cand.bit_count() < size:
            return None
        low = cand & -cand
        v = low.bit_length() - 1
        cand ^= low
        rest = _clique_lex(adjc, cand & adjc[v], size - 1)
        if rest is not None:
            return (v,) + rest
    return None


# thread start-up outweighs the scan below this order
PARALLEL_MIN_ORDER = 24


def _first_rainbow(coloring, s, workers):
    n = coloring.n
    if s < 2 or s > n or pairs(s) > coloring.k:
        return None
    if s == 2:
        return (0, 1)
    mat = coloring.matrix()
    firsts = range(n - s + 1)
    if workers > 1 and n >= PARALLEL_MIN_ORDER:
        with ThreadPoolExecutor(workers) as ex:
            results = list(ex.map(lambda f: _rainbow_from(mat, n, s, f), firsts))
    else:
        results = []
        for f in firsts:
            r = _rainbow_from(mat, n, s, f)
            results.append(r)
            if r:
                break
    for r in results:
        if r:
            return r
    return None


def _first_mono(coloring, t, workers):
    n = coloring.n
    if t < 2 or t > n:
        return None
    adj = coloring.adjacency_bits()
    firsts = range(n - t + 1)
    if workers > 1 and n >= PARALLEL_MIN_ORDER:
        with ThreadPoolExecutor(workers) as ex:
            results = list(ex.map(lambda f: _mono_from(adj, n, t, f), firsts))
    else:
        results = []
        for f in firsts:
            r = _mono_from(adj, n, t, f)
            results.append(r)
            if r:
                break
    for r in results:
        if r:
            return r
    return None


def find_rainbow_clique(coloring: EdgeColoring, s: int, workers: int = 1):
    """Lexicographically least rainbow s-subset, or None."""
    return _first_rainbow(coloring, s, workers)


def find_mono_clique(coloring: EdgeColoring, t: int, workers: int = 1):
    """Lexicographically least monochromatic t-subset as (subset, color), or None."""
    return _first_mono(coloring, t, workers)


def verify_clique_claim(coloring: EdgeColoring, s: int, t: int, workers: int = 1) -> Verdict:
    """Check that the coloring has no rainbow K_s and no monochromatic K_t.

    The rainbow side is scanned first; within a side the lexicographically
    least offending vertex subset is reported.  ``workers`` splits the scan
    by least vertex; the answer does not depend on it.
    """
    if s < 2 or t < 2:
        raise ValueError("s and t must be >= 2")
    vac = tuple(side for side, size in (("rainbow", s), ("mono", t)) if size > coloring.n)
    r = _first_rainbow(coloring, s, workers)
    if r is not None:
        return Verdict(False, BadEvent(RAINBOW_CLIQUE, r), vac)
    m = _first_mono(coloring, t, workers)
    if m is not None:
        return Verdict(False, BadEvent(MONO_CLIQUE, m[0], m[1]), vac)
    return Verdict(True, None, vac)


def naive_verify_clique_claim(coloring: EdgeColoring, s: int, t: int) -> Verdict:
    """Reference double-loop verifier used as a test oracle."""
    n = coloring.n
    for sub in combinations(range(n), s):
        cols = [coloring.color(a, b) for a, b in combinations(sub, 2)]
        if len(set(cols)) == len(cols):
            return Verdict(False, BadEvent(RAINBOW_CLIQUE, sub))
    for sub in combinations(range(n), t):
        cols = {coloring.color(a, b) for a, b in combinations(sub, 2)}
        if len(cols) == 1:
            return Verdict(False, BadEvent(MONO_CLIQUE, sub, cols.pop()))
    return Verdict(True)


# --------------------------------------------------------------------------
# pattern claims
# --------------------------------------------------------------------------

def _search_order(g: SmallGraph) -> list[int]:
    """Connected-first, high-degree-first vertex order for backtracking."""
    order = []
    remaining = set(range(g.order))
    while remaining:
        start = max(sorted(remaining), key=g.degree)
        order.append(start)
        remaining.discard(start)
        frontier = True
        while frontier:
            frontier = False
            best = None
            for v in sorted(remaining):
                links = sum(1 for u in g.neighbours(v) if u in order)
                if links and (best is None or (links, g.degree(v)) > best[0]):
                    best = ((links, g.degree(v)), v)
            if best is not None:
                order.append(best[1])
                remaining.discard(best[1])
                frontier = True
    return order


def _embeddings(g: SmallGraph, n: int, edge_ok, start_state, update):
    """Yield injective maps of g into K_n in a deterministic order.

    edge_ok(state, a, b) decides whether host pair (a, b) may carry a
    pattern edge; update(state, a, b) returns the new state.
    """
    order = _search_order(g)
    pos = {v: i for i, v in enumerate(order)}
    back = [[u for u in g.neighbours(v) if pos[u] < pos[v]] for v in order]
    img = [None] * g.order
    used = [False] * n

    def rec(depth, state):
        if depth == g.order:
            yield tuple(img)
            return
        v = order[depth]
        for h in range(n):
            if used[h]:
                continue
            st = state
            ok = True
            for u in back[depth]:
                a = img[u]
                if not edge_ok(st, a, h):
                    ok = False
                    break
                st = update(st, a, h)
            if not ok:
                continue
            img[v] = h
            used[h] = True
            yield from rec(depth + 1, st)
            used[h] = False
            img[v] = None

    yield from rec(0, start_state)


def find_rainbow_copy(coloring: EdgeColoring, g: SmallGraph):
    """First injective map whose image edges all carry distinct colors."""
    if g.order > coloring.n or g.size > coloring.k:
        return None
    mat = coloring.matrix()
    for m in _embeddings(g, coloring.n,
                         lambda used, a, b: not (used >> mat[a][b]) & 1,
                         0, lambda used, a, b: used | (1 << mat[a][b])):
        return m
    return None


def find_mono_copy(coloring: EdgeColoring, h: SmallGraph):
    """First (map, color) embedding h into a single color class."""
    if h.order > coloring.n:
        return None
    mat = coloring.matrix()
    if h.size == 0:
        return tuple(range(h.order)), 1
    for c in range(1, coloring.k + 1):
        for m in _embeddings(h, coloring.n, lambda st, a, b: mat[a][b] == c, None,
                             lambda st, a, b: st):
            return m, c
    return None


def verify_pattern_claim(coloring: EdgeColoring, g: SmallGraph, h: SmallGraph) -> Verdict:
    """Check that the coloring has no rainbow copy of g and no monochromatic copy of h."""
    if g.order > MAX_PATTERN_ORDER or h.order > MAX_PATTERN_ORDER:
        raise ValueError(f"pattern order limited to {MAX_PATTERN_ORDER}")
    vac = tuple(side for side, p in (("rainbow", g), ("mono", h)) if p.order > coloring.n)
    r = find_rainbow_copy(coloring, g)
    if r is not None:
        return Verdict(False, BadEvent(RAINBOW_PATTERN, tuple(sorted(r)), None, r), vac)
    m = find_mono_copy(coloring, h)
    if m is not None:
        return Verdict(False, BadEvent(MONO_PATTERN, tuple(sorted(m[0])), m[1], m[0]), vac)
    return Verdict(True, None, vac)


def event_edges(event: BadEvent, claim) -> list[tuple[int, int]]:
    """Edges spanned by a bad event for a clique claim (s, t) or pattern claim (G, H)."""
    if event.kind in (RAINBOW_CLIQUE, MONO_CLIQUE):
        return list(combinations(event.vertices, 2))
    pattern = claim[0] if event.kind == RAINBOW_PATTERN else claim[1]
    return event.pattern_edges(pattern)


def verify_claim(coloring: EdgeColoring, claim, workers: int = 1) -> Verdict:
    """Dispatch on claim type: (int, int) cliques or (SmallGraph, SmallGraph) patterns."""
    a, b = claim
    if isinstance(a, SmallGraph):
        return verify_pattern_claim(coloring, a, b)
    return verify_clique_claim(coloring, a, b, workers=workers)


__all__ = [
    "BadEvent", "Verdict", "verify_clique_claim", "verify_pattern_claim", "verify_claim",
    "naive_verify_clique_claim", "find_rainbow_clique", "find_mono_clique",
    "find_rainbow_copy", "find_mono_copy", "event_edges",
    "RAINBOW_CLIQUE", "MONO_CLIQUE", "RAINBOW_PATTERN", "MONO_PATTERN"
]
