"""Event probabilities for random edge colorings, dependency counts of the
rainbow/monochromatic event graph, and the first-moment (union bound)
decision procedure."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

import numpy as np

from .core import (ColorDistribution, choose, falling_product, log_choose,
                   log_falling_product, pairs, stream)

# exact rational decisions are used while both limits hold
EXACT_N_LIMIT = 1000
EXACT_MT_LIMIT = 64
LOG_STRICT_MARGIN = 1e-9
MC_CHUNK = 1 << 16


# --------------------------------------------------------------------------
# uniform colorings
# --------------------------------------------------------------------------

def pr_rainbow_clique_uniform(s: int, k: int, exact: bool = False):
    """Pr[a fixed s-set spans a rainbow clique] when each edge is uniform over k colors.

    falling_product(k, C(s,2)) / k^C(s,2); evaluated in log space when
    C(s,2) > 30 unless an exact Fraction is requested.
    """
    if s < 2 or k < 1:
        raise ValueError("need s >= 2 and k >= 1")
    m = pairs(s)
    if m > k:
        return Fraction(0) if exact else 0.0
    if exact:
        return Fraction(falling_product(k, m), k ** m)
    if m > 30:
        return math.exp(log_falling_product(k, m) - m * math.log(k))
    return falling_product(k, m) / k ** m


def pr_mono_clique_uniform(t: int, k: int, exact: bool = False):
    """k^(1 - C(t,2))."""
    if t < 2 or k < 1:
        raise ValueError("need t >= 2 and k >= 1")
    m = pairs(t)
    if exact:
        return Fraction(1, k ** (m - 1))
    return math.exp((1 - m) * math.log(k))


# --------------------------------------------------------------------------
# skewed colorings: colors 1..k-1 at p/(k-1), color k at 1-p
# --------------------------------------------------------------------------

class UnsupportedRegime(ValueError):
    """Parameters fall outside the range where a bound chain is valid."""


@dataclass(frozen=True)
class SkewedValue:
    exact: float | Fraction
    bound: float | Fraction

    def __iter__(self):
        yield self.exact
        yield self.bound


def skew_rainbow_constant(s: int, k: int) -> Fraction:
    """N = C(s,2) (k-1)^(2-C(s,2)) (k-2)(k-3)...(k-C(s,2)+1), as an exact Fraction.

    Written as C(s,2) (k-1)_(C(s,2)-1) / (k-1)^(C(s,2)-1), which equals the
    product form for C(s,2) >= 2 and gives 1 for a single edge.
    """
    m = pairs(s)
    return Fraction(m * falling_product(k - 1, m - 1), (k - 1) ** (m - 1))


def pr_rainbow_clique_skewed_upper(s: int, dist: ColorDistribution) -> SkewedValue:
    """Two-term rainbow expression under the skewed distribution and its
    closed bound N p^(C(s,2)-1).

    The two-term expression counts rainbow colorings drawn from the k-1 light
    colors only, plus those using the heavy color c_k exactly once.
    """
    if dist.kind != "skewed":
        raise ValueError("skewed distribution required")
    k, p = dist.k, dist.p
    m = pairs(s)
    if k < m:
        raise UnsupportedRegime(f"k={k} < C(s,2)={m}")
    q = p / (k - 1)
    exact = falling_product(k - 1, m) * q ** m + m * (1 - p) * falling_product(k - 1, m - 1) * q ** (m - 1)
    n_const = skew_rainbow_constant(s, k)
    if isinstance(p, float):
        n_const = float(n_const)
    bound = n_const * p ** (m - 1)
    if exact > bound * (1 + 1e-12) + 1e-300:
        raise AssertionError(f"skewed rainbow chain broken: {exact} > {bound}")
    return SkewedValue(exact, bound)


def pr_mono_clique_skewed_upper(t: int, dist: ColorDistribution) -> SkewedValue:
    """(1-p)^C(t,2) + (k-1)(p/(k-1))^C(t,2) and its bound (1-p)^(C(t,2)-1); needs p <= 1/2."""
    if dist.kind != "skewed":
        raise ValueError("skewed distribution required")
    k, p = dist.k, dist.p
    if p > Fraction(1, 2):
        raise UnsupportedRegime(f"p={p} > 1/2")
    m = pairs(t)
    exact = (1 - p) ** m + (k - 1) * (p / (k - 1)) ** m
    bound = (1 - p) ** (m - 1)
    if exact > bound * (1 + 1e-12):
        raise AssertionError(f"skewed mono chain broken: {exact} > {bound}")
    return SkewedValue(exact, bound)


# --------------------------------------------------------------------------
# union bound
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class UnionBound:
    value: float
    concludes: bool
    rainbow_term: float
    mono_term: float
    exact: bool

    def __iter__(self):
        yield self.value
        yield self.concludes


def union_bound_decision(n: int, s: int, t: int, k: int) -> UnionBound:
    """C(n,s) Pr[rainbow K_s] + C(n,t) Pr[mono K_t]; below 1 certifies GR_k(s,t) > n.

    Decided with exact rationals for moderate sizes, otherwise in log space
    with a 1e-9 strictness margin.
    """
    if n < 1:
        raise ValueError("need n >= 1")
    # n < max(s, t) is allowed: the missing subsets contribute 0
    mt = pairs(t)
    if n <= EXACT_N_LIMIT and mt <= EXACT_MT_LIMIT and pairs(s) <= EXACT_MT_LIMIT:
        a = choose(n, s) * pr_rainbow_clique_uniform(s, k, exact=True)
        b = choose(n, t) * pr_mono_clique_uniform(t, k, exact=True)
        total = a + b
        return UnionBound(float(total), total < 1, float(a), float(b), True)
    la = _log_rainbow_term(n, s, k)
    lb = log_choose(n, t) + (1 - mt) * math.log(k) if t <= n else -math.inf
    lv = np.logaddexp(la, lb)
    return UnionBound(math.exp(lv), bool(math.exp(lv) < 1 - LOG_STRICT_MARGIN),
                      math.exp(la), math.exp(lb), False)


def _log_rainbow_term(n, s, k):
    m = pairs(s)
    if m > k or s > n:
        return -math.inf
    return log_choose(n, s) + log_falling_product(k, m) - m * math.log(k)


@dataclass(frozen=True)
class BestN:
    n: int
    vacuous: bool
    value: float


def best_n_by_union_bound(s: int, t: int, k: int, n_max: int) -> BestN:
    """Largest n <= n_max whose union bound is below 1.

    Vacuous (n = max(s,t) - 1) when even n = max(s,t) fails.  The value is
    nondecreasing in n, so the scan stops at the first failure; later values
    are spot-checked to fail as well.
    """
    lo = max(s, t)
    if n_max < lo:
        raise ValueError("need n_max >= max(s, t)")
    best = None
    n = lo
    while n <= n_max:
        ub = union_bound_decision(n, s, t, k)
        if not ub.concludes:
            break
        best = (n, ub.value)
        n += 1
    if n <= n_max:
        # monotone: once the decision fails it keeps failing
        for later in (n + 1, min(n_max, 2 * n)):
            if later <= n_max:
                assert not union_bound_decision(later, s, t, k).concludes
    if best is None:
        return BestN(lo - 1, True, union_bound_decision(lo, s, t, k).value)
    return BestN(best[0], False, best[1])


# --------------------------------------------------------------------------
# dependency counts
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class DependencyCounts:
    n: int
    s: int
    t: int
    n_aa_plus1: int
    n_ab: int
    n_ba: int
    n_bb_plus1: int
    # trivial bounds C(n,s), C(n,t) used in place of the exact counts
    bound_s: int
    bound_t: int
    # variant with C(n-s-1, t-1) in the last term; undercounts, comparison only
    n_ab_shifted: int
    # n < s + t: the two-class certificate refuses these
    flagged: bool


def _overlap_count(n, a, b):
    """b-subsets meeting a fixed a-subset in >= 2 vertices."""
    if a > n:
        # no a-subset exists, so there is no event to be adjacent to
        return 0
    return choose(n, b) - choose(n - a, b) - a * choose(n - a, b - 1)


def dependency_counts(n: int, s: int, t: int) -> DependencyCounts:
    """Neighbour counts in the dependency graph of the A_S / B_T events.

    Two events are adjacent when their vertex sets share >= 2 vertices.
    The "+1" counts include the event itself.
    """
    if min(n, s, t) < 0:
        raise ValueError("negative argument")
    return DependencyCounts(
        n=n, s=s, t=t,
        n_aa_plus1=_overlap_count(n, s, s),
        n_ab=_overlap_count(n, s, t),
        n_ba=_overlap_count(n, t, s),
        n_bb_plus1=_overlap_count(n, t, t),
        bound_s=choose(n, s),
        bound_t=choose(n, t),
        n_ab_shifted=choose(n, t) - choose(n - s, t) - s * choose(n - s - 1, t - 1),
        flagged=n < s + t,
    )


def brute_dependency_counts(n: int, s: int, t: int) -> tuple[int, int, int, int]:
    """Enumeration oracle: (N_AA+1, N_AB, N_BA, N_BB+1) for fixed S = {0..s-1}, T = {0..t-1}."""
    def count(fixed, size):
        # a fixed set larger than the vertex set is no event at all
        if fixed > n:
            return 0
        F = set(range(fixed))
        return sum(1 for X in combinations(range(n), size) if len(F.intersection(X)) >= 2)

    return count(s, s), count(s, t), count(t, s), count(t, t)


# --------------------------------------------------------------------------
# Monte Carlo
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class RainbowClique:
    s: int

    def label(self):
        return f"rainbow(s={self.s})"


@dataclass(frozen=True)
class MonoClique:
    t: int

    def label(self):
        return f"mono(t={self.t})"


@dataclass(frozen=True)
class WholeGraphBad:
    n: int
    s: int
    t: int

    def label(self):
        return f"whole(n={self.n},s={self.s},t={self.t})"


def _subset_pair_columns(n, size):
    """Column indices (into the dense pair array) of every size-subset of K_n."""
    from .core import pair_index
    return np.array([[pair_index(a, b, n) for a, b in combinations(sub, 2)]
                     for sub in combinations(range(n), size)], dtype=np.int64)


def _indicator(event, colors):
    """Row-wise indicator of the event on an array of sampled edge colors."""
    if isinstance(event, RainbowClique):
        srt = np.sort(colors, axis=1)
        return np.all(srt[:, 1:] != srt[:, :-1], axis=1) if colors.shape[1] > 1 else np.ones(len(colors), bool)
    if isinstance(event, MonoClique):
        return np.all(colors == colors[:, :1], axis=1)
    bad = np.zeros(len(colors), bool)
    if event.s <= event.n:
        for cols in _subset_pair_columns(event.n, event.s):
            bad |= _indicator(RainbowClique(event.s), colors[:, cols])
    if event.t <= event.n:
        for cols in _subset_pair_columns(event.n, event.t):
            bad |= _indicator(MonoClique(event.t), colors[:, cols])
    return bad


def _event_width(event):
    if isinstance(event, RainbowClique):
        return pairs(event.s)
    if isinstance(event, MonoClique):
        return pairs(event.t)
    return pairs(event.n)


@dataclass(frozen=True)
class MCResult:
    estimate: float
    std_error: float
    hits: int
    samples: int

    def __iter__(self):
        yield self.estimate
        yield self.std_error


def mc_estimate(event, dist: ColorDistribution, samples: int, seed: int = 42,
                workers: int = 1) -> MCResult:
    """Monte Carlo estimate of Pr[event] with its standard error.

    Samples are cut into fixed chunks, each drawn from its own Philox stream
    keyed by (seed, chunk index); counts are summed, so the result does not
    depend on how many workers process the chunks.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    width = _event_width(event)
    n_chunks = -(-samples // MC_CHUNK)

    def run(ci):
        size = min(MC_CHUNK, samples - ci * MC_CHUNK)
        rng = stream(seed, ci)
        colors = dist.sample(rng, (size, width))
        return int(np.count_nonzero(_indicator(event, colors)))

    if workers > 1:
        with ThreadPoolExecutor(workers) as ex:
            hits = sum(ex.map(run, range(n_chunks)))
    else:
        hits = sum(run(ci) for ci in range(n_chunks))
    est = hits / samples
    se = math.sqrt(est * (1 - est) / samples)
    return MCResult(est, se, hits, samples)


def mc_csv_row(event, dist, res: MCResult, seed: int) -> str:
    return f"{event.label()},{dist.label()},{res.samples},{seed},{res.estimate!r},{res.std_error!r}"


MC_CSV_HEADER = "event,dist,samples,seed,estimate,std_error"
