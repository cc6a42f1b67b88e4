"""Shared domain types: edge colorings, small pattern graphs, color
distributions, and exact / log-space combinatorics helpers."""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

import mpmath
import numpy as np

WITNESS_HEADER = "grcoloring 1"
MAX_PATTERN_ORDER = 8

# exact big-integer path for log_choose up to this n (or tiny r)
_EXACT_LOG_N = 10_000
_EXACT_LOG_R = 2_000


class FormatError(ValueError):
    """Raised when a witness / partition / certificate file is malformed."""


# --------------------------------------------------------------------------
# combinatorics
# --------------------------------------------------------------------------

def choose(n: int, r: int) -> int:
    """Binomial coefficient with choose(n, r) = 0 when r > n or either is negative."""
    if r < 0 or n < 0 or r > n:
        return 0
    return math.comb(n, r)


def log_choose(n: int, r: int) -> float:
    """Natural log of choose(n, r).

    Exact big-integer evaluation while that is cheap, high-precision
    log-gamma beyond it, so the absolute error stays below 1e-9 for n up
    to 1e6 (plain double lgamma loses ~1e-9 there to cancellation).
    """
    if r < 0 or n < 0:
        raise ValueError(f"log_choose({n}, {r}): negative argument")
    if r > n:
        raise ValueError(f"log_choose({n}, {r}): r > n")
    r = min(r, n - r)
    if r == 0:
        return 0.0
    if n <= _EXACT_LOG_N or r <= _EXACT_LOG_R:
        return math.log(math.comb(n, r))
    with mpmath.workdps(40):
        val = mpmath.loggamma(n + 1) - mpmath.loggamma(r + 1) - mpmath.loggamma(n - r + 1)
        return float(val)


def falling_product(k: int, j: int) -> int:
    """k (k-1) ... (k-j+1); 1 when j == 0 and 0 when j > k >= 0."""
    if j < 0:
        raise ValueError("falling_product: j must be nonnegative")
    out = 1
    for i in range(j):
        out *= k - i
        if out == 0:
            return 0
    return out


def log_falling_product(k: int, j: int) -> float:
    """log of falling_product(k, j); -inf when it vanishes."""
    if 0 <= k < j:
        return -math.inf
    if j == 0:
        return 0.0
    return math.lgamma(k + 1) - math.lgamma(k - j + 1) if k > 500 else math.log(falling_product(k, j))


def pairs(n: int) -> int:
    return n * (n - 1) // 2


def pair_index(i: int, j: int, n: int) -> int:
    """Dense row-major offset of the unordered pair {i, j}."""
    if i > j:
        i, j = j, i
    if i == j or i < 0 or j >= n:
        raise ValueError(f"bad pair ({i}, {j}) for n={n}")
    return i * n - i * (i + 1) // 2 + (j - i - 1)


def iter_pairs(n: int) -> Iterator[tuple[int, int]]:
    """Pairs in dense-index order."""
    for i in range(n):
        for j in range(i + 1, n):
            yield i, j


def smallest_order_for(m: int) -> int:
    """min{x : C(x, 2) >= m}."""
    x = 0
    while pairs(x) < m:
        x += 1
    return x


# --------------------------------------------------------------------------
# edge colorings
# --------------------------------------------------------------------------

class EdgeColoring:
    """k-coloring of the edges of K_n, stored densely in pair-index order.

    Vertices are 0-based, colors 1-based.
    """

    __slots__ = ("n", "k", "colors", "_adj")

    def __init__(self, n: int, k: int, colors: Sequence[int]):
        if n < 2:
            raise ValueError("EdgeColoring needs n >= 2")
        if k < 1:
            raise ValueError("EdgeColoring needs k >= 1")
        colors = tuple(int(c) for c in colors)
        if len(colors) != pairs(n):
            raise ValueError(f"expected {pairs(n)} edge colors, got {len(colors)}")
        for c in colors:
            if not 1 <= c <= k:
                raise ValueError(f"color {c} outside 1..{k}")
        self.n = n
        self.k = k
        self.colors = colors
        self._adj = None

    @classmethod
    def from_function(cls, n: int, k: int, fn) -> "EdgeColoring":
        return cls(n, k, [fn(i, j) for i, j in iter_pairs(n)])

    @classmethod
    def constant(cls, n: int, k: int, color: int = 1) -> "EdgeColoring":
        return cls(n, k, [color] * pairs(n))

    def color(self, i: int, j: int) -> int:
        return self.colors[pair_index(i, j, self.n)]

    def matrix(self) -> list[list[int]]:
        """n x n color matrix with zeros on the diagonal."""
        m = [[0] * self.n for _ in range(self.n)]
        for (i, j), c in zip(iter_pairs(self.n), self.colors):
            m[i][j] = m[j][i] = c
        return m

    def adjacency_bits(self) -> list[list[int]]:
        """adj[c][v] is the bitmask of neighbours of v in color c (index 0 unused)."""
        if self._adj is None:
            adj = [[0] * self.n for _ in range(self.k + 1)]
            for (i, j), c in zip(iter_pairs(self.n), self.colors):
                adj[c][i] |= 1 << j
                adj[c][j] |= 1 << i
            self._adj = adj
        return self._adj

    def used_colors(self) -> set[int]:
        return set(self.colors)

    def recolor(self, i: int, j: int, c: int) -> "EdgeColoring":
        cols = list(self.colors)
        cols[pair_index(i, j, self.n)] = c
        return EdgeColoring(self.n, self.k, cols)

    def __eq__(self, other):
        return isinstance(other, EdgeColoring) and (self.n, self.k, self.colors) == (
            other.n, other.k, other.colors)

    def __hash__(self):
        return hash((self.n, self.k, self.colors))

    def __repr__(self):
        return f"EdgeColoring(n={self.n}, k={self.k})"


def format_coloring(coloring: EdgeColoring, comments: Iterable[str] = ()) -> str:
    lines = [WITNESS_HEADER, f"{coloring.n} {coloring.k}"]
    lines += [f"{i} {j} {c}" for (i, j), c in zip(iter_pairs(coloring.n), coloring.colors)]
    lines += [f"# {c}" for c in comments]
    return "\n".join(lines) + "\n"


def parse_coloring(text: str) -> tuple[EdgeColoring, list[str]]:
    """Parse the witness text format; returns the coloring and any trailing
    comment lines (without the leading '# ')."""
    lines = text.splitlines()
    body = []
    comments = []
    for raw in lines:
        s = raw.strip()
        if not s:
            continue
        if s.startswith("#"):
            comments.append(s[1:].strip())
            continue
        if comments:
            raise FormatError("data line after trailing comment block")
        body.append(s)
    if not body or body[0] != WITNESS_HEADER:
        raise FormatError(f"missing '{WITNESS_HEADER}' header")
    if len(body) < 2:
        raise FormatError("missing '<n> <k>' line")
    try:
        n, k = (int(x) for x in body[1].split())
    except ValueError as exc:
        raise FormatError(f"bad size line {body[1]!r}") from exc
    if n < 2 or k < 1:
        raise FormatError(f"bad sizes n={n} k={k}")
    rows = body[2:]
    if len(rows) != pairs(n):
        raise FormatError(f"expected {pairs(n)} pair lines, got {len(rows)}")
    colors = []
    seen = set()
    for expected, row in zip(iter_pairs(n), rows):
        parts = row.split()
        if len(parts) != 3:
            raise FormatError(f"bad pair line {row!r}")
        try:
            i, j, c = (int(x) for x in parts)
        except ValueError as exc:
            raise FormatError(f"bad pair line {row!r}") from exc
        if not (0 <= i < j < n):
            raise FormatError(f"pair index out of range: {row!r}")
        if not 1 <= c <= k:
            raise FormatError(f"color out of range: {row!r}")
        if (i, j) in seen:
            raise FormatError(f"duplicate pair: {row!r}")
        seen.add((i, j))
        if (i, j) != expected:
            raise FormatError(f"pair {i} {j} out of order (expected {expected[0]} {expected[1]})")
        colors.append(c)
    return EdgeColoring(n, k, colors), comments


# --------------------------------------------------------------------------
# small pattern graphs
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class SmallGraph:
    order: int
    edges: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        norm = set()
        for e in self.edges:
            u, v = e
            if u == v:
                raise ValueError("self-loop in pattern graph")
            if not (0 <= u < self.order and 0 <= v < self.order):
                raise ValueError(f"edge {e} outside 0..{self.order - 1}")
            norm.add((min(u, v), max(u, v)))
        object.__setattr__(self, "edges", frozenset(norm))

    @property
    def size(self) -> int:
        return len(self.edges)

    def neighbours(self, v: int) -> list[int]:
        return sorted({b for a, b in self.edges if a == v} | {a for a, b in self.edges if b == v})

    def degree(self, v: int) -> int:
        return len(self.neighbours(v))

    def is_complete(self) -> bool:
        return self.size == pairs(self.order)

    def spec(self) -> str:
        """Compact text form '<order>:u-v,u-v,...' accepted by parse_graph."""
        return f"{self.order}:" + ",".join(f"{u}-{v}" for u, v in sorted(self.edges))

    # named families
    @classmethod
    def complete(cls, s: int) -> "SmallGraph":
        return cls(s, frozenset(iter_pairs(s)))

    @classmethod
    def path(cls, s: int) -> "SmallGraph":
        return cls(s, frozenset((i, i + 1) for i in range(s - 1)))

    @classmethod
    def cycle(cls, s: int) -> "SmallGraph":
        return cls(s, frozenset((i, (i + 1) % s) for i in range(s)))

    @classmethod
    def star(cls, s: int) -> "SmallGraph":
        return cls(s, frozenset((0, i) for i in range(1, s)))


_NAMED = re.compile(r"^([KPCS])(\d+)$")


def parse_graph(text: str) -> SmallGraph:
    """Parse 'K5', 'P4', 'C5', 'S4' or '<order>:u-v,u-v,...'."""
    text = text.strip()
    m = _NAMED.match(text)
    if m:
        kind, s = m.group(1), int(m.group(2))
        return {"K": SmallGraph.complete, "P": SmallGraph.path,
                "C": SmallGraph.cycle, "S": SmallGraph.star}[kind](s)
    order_s, _, edges_s = text.partition(":")
    try:
        order = int(order_s)
        edges = []
        for tok in filter(None, edges_s.split(",")):
            u, v = tok.split("-")
            edges.append((int(u), int(v)))
    except ValueError as exc:
        raise ValueError(f"cannot parse graph {text!r}") from exc
    if len(set((min(e), max(e)) for e in edges)) != len(edges):
        raise ValueError(f"duplicate edge in {text!r}")
    return SmallGraph(order, frozenset(edges))


# --------------------------------------------------------------------------
# color distributions
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class ColorDistribution:
    """Per-color edge probabilities: uniform 1/k, or skewed with colors
    1..k-1 at p/(k-1) each and color k at 1-p."""

    kind: str
    k: int
    p: float | Fraction | None = None

    def __post_init__(self):
        if self.kind not in ("uniform", "skewed"):
            raise ValueError(f"unknown distribution kind {self.kind!r}")
        if self.k < 1:
            raise ValueError("k must be >= 1")
        if self.kind == "skewed":
            if self.k < 2:
                raise ValueError("skewed distribution needs k >= 2")
            if self.p is None or not 0 <= self.p <= 1:
                raise ValueError("skewed distribution needs p in [0, 1]")

    @classmethod
    def uniform(cls, k: int) -> "ColorDistribution":
        return cls("uniform", k)

    @classmethod
    def skewed(cls, k: int, p) -> "ColorDistribution":
        return cls("skewed", k, p)

    def probabilities(self) -> list:
        """Probabilities of colors 1..k (Fractions when p is a Fraction or uniform)."""
        if self.kind == "uniform":
            return [Fraction(1, self.k)] * self.k
        q = self.p / (self.k - 1)
        return [q] * (self.k - 1) + [1 - self.p]

    def label(self) -> str:
        return f"uniform(k={self.k})" if self.kind == "uniform" else f"skewed(k={self.k},p={float(self.p)!r})"

    def sample(self, rng: np.random.Generator, size: int | tuple) -> np.ndarray:
        """Draw colors in 1..k."""
        if self.kind == "uniform":
            return rng.integers(1, self.k + 1, size=size, dtype=np.int64)
        cdf = np.cumsum([float(x) for x in self.probabilities()])
        cdf[-1] = 1.0
        u = rng.random(size)
        return np.searchsorted(cdf, u, side="right").astype(np.int64) + 1


def stream(seed: int, *key: int) -> np.random.Generator:
    """Counter-based (Philox) generator keyed by seed and stream indices."""
    ss = np.random.SeedSequence([seed & 0xFFFFFFFFFFFFFFFF, *key])
    return np.random.Generator(np.random.Philox(ss))


def fmt_real(x) -> str:
    """12 significant digits, locale independent."""
    return format(float(x), ".12g")
