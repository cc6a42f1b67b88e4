"""Gallai colorings: rainbow-triangle detection, Gallai partitions and
reduced colorings."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .core import EdgeColoring, FormatError

PARTITION_HEADER = "gallai 1"


class RainbowTrianglePresent(ValueError):
    pass


class InternalConsistencyError(RuntimeError):
    """No candidate palette produced a valid partition of a Gallai coloring.

    Every rainbow-triangle-free coloring has one, so this signals a bug.
    """


@dataclass(frozen=True)
class GallaiPartition:
    parts: tuple          # tuple of sorted vertex tuples, ordered by least vertex
    between_colors: dict  # (i, j) part-index pair, i < j -> color
    palette: frozenset

    def to_text(self) -> str:
        lines = [PARTITION_HEADER]
        lines += [" ".join(map(str, p)) for p in self.parts]
        lines += [f"pair {i} {j} {c}" for (i, j), c in sorted(self.between_colors.items())]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "GallaiPartition":
        lines = [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]
        if not lines or lines[0] != PARTITION_HEADER:
            raise FormatError(f"missing '{PARTITION_HEADER}' header")
        parts, between = [], {}
        for ln in lines[1:]:
            tok = ln.split()
            try:
                if tok[0] == "pair":
                    if len(tok) != 4:
                        raise FormatError(f"bad pair line {ln!r}")
                    i, j, c = map(int, tok[1:])
                    if (min(i, j), max(i, j)) in between:
                        raise FormatError(f"duplicate pair line {ln!r}")
                    between[(min(i, j), max(i, j))] = c
                else:
                    if between:
                        raise FormatError("part line after pair lines")
                    parts.append(tuple(sorted(map(int, tok))))
            except ValueError as exc:
                raise FormatError(f"bad line {ln!r}") from exc
        return cls(tuple(parts), between, frozenset(between.values()))


def find_rainbow_triangle(coloring: EdgeColoring):
    """Lexicographically least vertex triple with three distinct edge colors, or None."""
    n = coloring.n
    mat = coloring.matrix()
    adj = coloring.adjacency_bits()
    for a in range(n):
        ra = mat[a]
        for b in range(a + 1, n):
            cab = ra[b]
            # vertices above b joined to a and to b in colors other than cab
            cand = ~(adj[cab][a] | adj[cab][b]) & ~((1 << (b + 1)) - 1) & ((1 << n) - 1)
            rb = mat[b]
            while cand:
                low = cand & -cand
                c = low.bit_length() - 1
                cand ^= low
                if ra[c] != rb[c]:
                    return a, b, c
    return None


def naive_rainbow_triangle(coloring: EdgeColoring):
    for a, b, c in combinations(range(coloring.n), 3):
        if len({coloring.color(a, b), coloring.color(a, c), coloring.color(b, c)}) == 3:
            return a, b, c
    return None


def _components(n, mat, palette):
    """Connected components of the graph of edges whose color is outside palette."""
    seen = [False] * n
    comps = []
    for start in range(n):
        if seen[start]:
            continue
        seen[start] = True
        stack, comp = [start], [start]
        while stack:
            x = stack.pop()
            for y in range(n):
                if not seen[y] and y != x and mat[x][y] not in palette:
                    seen[y] = True
                    stack.append(y)
                    comp.append(y)
        comps.append(tuple(sorted(comp)))
    comps.sort()
    return comps


def _between(mat, parts):
    """Part-pair colors, or None if some pair of parts sees two colors."""
    out = {}
    for i, j in combinations(range(len(parts)), 2):
        cols = {mat[a][b] for a in parts[i] for b in parts[j]}
        if len(cols) != 1:
            return None
        out[(i, j)] = cols.pop()
    return out


def _coarsen(mat, parts):
    """Merge part pairs that see two colors until every pair sees one.

    Such pairs lie in a common part of any valid partition refined by parts,
    so the result still refines it.
    """
    parts = [list(p) for p in parts]
    while len(parts) >= 2:
        for i, j in combinations(range(len(parts)), 2):
            if len({mat[a][b] for a in parts[i] for b in parts[j]}) != 1:
                parts[i] = sorted(parts[i] + parts[j])
                del parts[j]
                break
        else:
            break
    return sorted(tuple(p) for p in parts)


def candidate_palettes(k: int):
    """Singletons first, then pairs, each lexicographic."""
    yield from ((c,) for c in range(1, k + 1))
    yield from combinations(range(1, k + 1), 2)


def find_gallai_partition(coloring: EdgeColoring) -> GallaiPartition:
    """Canonical Gallai partition of a rainbow-triangle-free coloring.

    For each candidate palette P (singletons, then pairs), the parts are the
    components of the graph formed by edges colored outside P, merged until
    each part pair sees one color; the first candidate left with >= 2 parts
    is returned.
    """
    if coloring.n < 2:
        raise ValueError("need n >= 2")
    tri = find_rainbow_triangle(coloring)
    if tri is not None:
        raise RainbowTrianglePresent(f"rainbow triangle {tri}")
    mat = coloring.matrix()
    for pal in candidate_palettes(coloring.k):
        parts = _coarsen(mat, _components(coloring.n, mat, set(pal)))
        if len(parts) < 2:
            continue
        between = _between(mat, parts)
        if between is None:
            continue
        return GallaiPartition(tuple(parts), between, frozenset(between.values()))
    raise InternalConsistencyError(
        f"no Gallai partition found for n={coloring.n} k={coloring.k} colors={coloring.colors}")


def validate_gallai_partition(coloring: EdgeColoring, partition: GallaiPartition):
    """(valid, violation) after checking the partition directly against the coloring."""
    n = coloring.n
    parts = partition.parts
    flat = [v for p in parts for v in p]
    if any(len(p) == 0 for p in parts):
        return False, "empty part"
    if sorted(flat) != list(range(n)):
        return False, "parts do not partition the vertex set"
    if len(parts) < 2:
        return False, "partition is trivial (fewer than 2 parts)"
    mat = coloring.matrix()
    for i, j in combinations(range(len(parts)), 2):
        if (i, j) not in partition.between_colors:
            return False, f"no color recorded for parts {i},{j}"
        want = partition.between_colors[(i, j)]
        for a in parts[i]:
            for b in parts[j]:
                if mat[a][b] != want:
                    return False, f"edge {min(a, b)}-{max(a, b)} between parts {i},{j} has color {mat[a][b]} not {want}"
    extra = set(partition.between_colors) - set(combinations(range(len(parts)), 2))
    if extra:
        return False, f"colors recorded for unknown part pairs {sorted(extra)}"
    palette = set(partition.between_colors.values())
    if len(palette) > 2:
        return False, f"palette has {len(palette)} colors between parts (at most 2 allowed)"
    return True, None


def reduced_coloring(coloring: EdgeColoring, partition: GallaiPartition) -> EdgeColoring:
    """Coloring of K_{#parts} by the between-part colors."""
    ok, why = validate_gallai_partition(coloring, partition)
    if not ok:
        raise ValueError(f"invalid partition: {why}")
    m = len(partition.parts)
    return EdgeColoring.from_function(m, coloring.k, lambda i, j: partition.between_colors[(i, j)])


def sample_gallai_coloring(n: int, k: int, rng, max_tries: int = 10_000) -> EdgeColoring:
    """Random rainbow-triangle-free k-coloring of K_n.

    Edges are colored in dense order, each uniformly among the colors that
    close no rainbow triangle with already-colored edges; a dead end
    rejects the partial coloring and starts over.
    """
    for _ in range(max_tries):
        mat = [[0] * n for _ in range(n)]
        dead = False
        for i, j in combinations(range(n), 2):
            allowed = set(range(1, k + 1))
            for x in range(n):
                a, b = mat[i][x], mat[j][x]
                if a and b and a != b:
                    allowed &= {a, b}
            if not allowed:
                dead = True
                break
            c = sorted(allowed)[int(rng.integers(len(allowed)))]
            mat[i][j] = mat[j][i] = c
        if not dead:
            return EdgeColoring.from_function(n, k, lambda i, j: mat[i][j])
    raise RuntimeError("could not sample a rainbow-triangle-free coloring")
