"""Constructive witness search: restart sampling and Moser-Tardos
resampling over random edge colorings, plus witness file I/O."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .core import (ColorDistribution, EdgeColoring, FormatError, SmallGraph,
                   format_coloring, pair_index, pairs, parse_coloring, parse_graph, stream)
from .verify import event_edges, verify_claim

DEFAULT_SEED = 42
DEFAULT_MAX_RESTARTS = 100_000
DEFAULT_MAX_RESAMPLES = 1_000_000


@dataclass
class Witness:
    coloring: EdgeColoring
    claim: tuple
    verified: bool
    seed: int | None = None
    algo: str = "manual"
    # restarts used (restart) or resampling steps (mt)
    steps: int = 0
    meta: dict = field(default_factory=dict)

    def claim_text(self) -> str:
        a, b = self.claim
        if isinstance(a, SmallGraph):
            return f"G={a.spec()} H={b.spec()}"
        return f"s={a} t={b}"

    def to_text(self) -> str:
        tail = (f"claim {self.claim_text()} k={self.coloring.k} "
                f"verified={'true' if self.verified else 'false'} "
                f"seed={self.seed if self.seed is not None else 'none'} algo={self.algo}")
        return format_coloring(self.coloring, [tail])


@dataclass(frozen=True)
class Exhausted:
    """The search budget ran out; says nothing about the claim itself."""
    algo: str
    attempts: int
    seed: int

    verified = False


def parse_claim_comment(comment: str):
    """Read '(s, t)' or '(G, H)' from a 'claim ...' trailer; None if absent."""
    if not comment.startswith("claim "):
        return None
    fields = dict(tok.split("=", 1) for tok in comment.split()[1:] if "=" in tok)
    if "s" in fields and "t" in fields:
        return int(fields["s"]), int(fields["t"])
    if "G" in fields and "H" in fields:
        return parse_graph(fields["G"]), parse_graph(fields["H"])
    raise FormatError(f"claim line lacks s/t or G/H: {comment!r}")


def read_witness(text: str) -> Witness:
    coloring, comments = parse_coloring(text)
    claim = None
    info = {}
    for c in comments:
        got = parse_claim_comment(c)
        if got is not None:
            claim = got
            info = dict(tok.split("=", 1) for tok in c.split()[1:] if "=" in tok)
    seed = info.get("seed")
    return Witness(coloring, claim, info.get("verified") == "true",
                   int(seed) if seed not in (None, "none") else None, info.get("algo", "manual"))


def _claim_orders(claim):
    a, b = claim
    if isinstance(a, SmallGraph):
        return a.order, b.order
    return a, b


def _trivially_good(n, claim):
    # no vertex subset of the required sizes exists
    return n < min(_claim_orders(claim))


def restart_sample(n: int, k: int, claim, dist: ColorDistribution,
                   max_restarts: int = DEFAULT_MAX_RESTARTS, seed: int = DEFAULT_SEED,
                   workers: int = 1) -> Witness | Exhausted:
    """Draw independent colorings until one verifies.

    Restart r uses its own Philox stream keyed by (seed, r), and the lowest
    successful r wins, so the result is the same for any worker count.
    """
    if max_restarts < 1:
        raise ValueError("max_restarts must be >= 1")
    if dist.k != k:
        raise ValueError("distribution color count differs from k")
    m = pairs(n)

    def attempt(r):
        cols = dist.sample(stream(seed, r), m)
        col = EdgeColoring(n, k, cols.tolist())
        return col if verify_claim(col, claim) else None

    if _trivially_good(n, claim):
        col = EdgeColoring(n, k, dist.sample(stream(seed, 0), m).tolist())
        return Witness(col, claim, True, seed, "restart", 0, {"vacuous": True})
    batch = max(1, workers)
    ex = ThreadPoolExecutor(workers) if workers > 1 else None
    try:
        for start in range(0, max_restarts, batch):
            idx = range(start, min(start + batch, max_restarts))
            results = list(ex.map(attempt, idx)) if ex else [attempt(r) for r in idx]
            for r, col in zip(idx, results):
                if col is not None:
                    return Witness(col, claim, True, seed, "restart", r + 1)
    finally:
        if ex:
            ex.shutdown()
    return Exhausted("restart", max_restarts, seed)


def moser_tardos(n: int, k: int, claim, dist: ColorDistribution,
                 max_resamples: int = DEFAULT_MAX_RESAMPLES, seed: int = DEFAULT_SEED,
                 workers: int = 1) -> Witness | Exhausted:
    """Moser-Tardos resampling.

    Start from a random coloring; while some bad event holds, take the first
    one in the verifier's fixed order and redraw exactly the edges it spans.
    A single Philox stream drives all draws; ``workers`` only parallelises
    the verification scan.
    """
    if max_resamples < 1:
        raise ValueError("max_resamples must be >= 1")
    if dist.k != k:
        raise ValueError("distribution color count differs from k")
    rng = stream(seed)
    cols = dist.sample(rng, pairs(n))
    for step in range(max_resamples + 1):
        col = EdgeColoring(n, k, cols.tolist())
        verdict = verify_claim(col, claim, workers)
        if verdict.ok:
            return Witness(col, claim, True, seed, "mt", step)
        if step == max_resamples:
            break
        idx = [pair_index(a, b, n) for a, b in event_edges(verdict.counterexample, claim)]
        cols[np.asarray(idx)] = dist.sample(rng, len(idx))
    return Exhausted("mt", max_resamples, seed)
