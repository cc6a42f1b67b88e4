"""Local Lemma certificates.

Generic checkers for the x-form and y-form conditions over an explicit
dependency graph, and the two-event-class system (rainbow events A,
monochromatic events B) evaluated with the skewed-coloring probability
bounds, plus a deterministic grid search for certificates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .bounds import log_skew_constant, pattern_count_term
from .core import SmallGraph, log_choose, pairs, parse_graph
from .probability import dependency_counts

STRICT = 1e-12
MODE_FUNCTION = "gr-function"
MODE_NUMBER = "gr-number"

# log-space (y - 1) / (z - 1) range explored by the grid
_LOG10_EXCESS = (-15.0, 3.0)
_COARSE_PER_DECADE = 5
_FINE_PER_DECADE = 25
_P_DECADES = 3
_P_PER_DECADE = 25


class DimensionError(ValueError):
    pass


def _validate(probs, adj, mult):
    n = len(probs)
    adj = np.asarray(adj, dtype=bool)
    if adj.shape != (n, n) or len(mult) != n:
        raise DimensionError(f"dimension mismatch: {n} events, adjacency {adj.shape}, "
                             f"{len(mult)} multipliers")
    if not np.array_equal(adj, adj.T) or adj.diagonal().any():
        raise DimensionError("dependency adjacency must be symmetric with empty diagonal")
    return adj


def check_lll_xform(probs: Sequence[float], dep_adjacency, xs: Sequence[float]) -> tuple[bool, float]:
    """Pr[A_i] < x_i prod_{j ~ i} (1 - x_j) for all i, with 0 < x_i < 1.

    Returns (valid, margin) where margin is the smallest RHS - Pr[A_i].
    """
    adj = _validate(probs, dep_adjacency, xs)
    margin = math.inf
    in_range = all(0 < x < 1 for x in xs)
    for i, p in enumerate(probs):
        rhs = xs[i]
        for j in np.flatnonzero(adj[i]):
            rhs *= 1 - xs[j]
        margin = min(margin, rhs - p)
    return bool(in_range and margin > 0), margin


def check_lll_yform(probs: Sequence[float], dep_adjacency, ys: Sequence[float]) -> tuple[bool, float]:
    """y_i Pr[A_i] < 1 and ln y_i > sum_{j ~ i} y_j Pr[A_j] for all i."""
    adj = _validate(probs, dep_adjacency, ys)
    if any(y <= 0 for y in ys):
        raise ValueError("multipliers must be positive")
    margin = math.inf
    for i, p in enumerate(probs):
        margin = min(margin, 1 - ys[i] * p)
        rhs = sum(ys[j] * probs[j] for j in np.flatnonzero(adj[i]))
        margin = min(margin, math.log(ys[i]) - rhs)
    return bool(margin > 0), margin


# --------------------------------------------------------------------------
# two-class system
# --------------------------------------------------------------------------

class RegimeRefused(ValueError):
    """The two-class check does not apply to these parameters."""


@dataclass(frozen=True)
class LLLCertificate:
    kind: str
    multipliers: tuple
    margin: float
    p: float | None = None
    n: int | None = None
    s: int | None = None
    t: int | None = None
    k: int | None = None
    mode: str = MODE_FUNCTION
    graph: str | None = None
    exact_deps: bool = False

    def to_text(self) -> str:
        if self.kind != "TwoClassYZ":
            raise ValueError("only two-class certificates have a text form")
        y, z = self.multipliers
        line = (f"cert two-class n={self.n} s={self.s} t={self.t} k={self.k} p={self.p!r} "
                f"y={y!r} z={z!r} margin={self.margin!r} mode={self.mode}")
        if self.graph is not None:
            line += f" graph={self.graph}"
        if self.exact_deps:
            line += " deps=exact"
        return line + "\n"

    @classmethod
    def from_text(cls, text: str) -> "LLLCertificate":
        lines = [ln for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]
        if len(lines) != 1 or not lines[0].startswith("cert two-class "):
            raise ValueError("expected a single 'cert two-class ...' line")
        fields = dict(tok.split("=", 1) for tok in lines[0].split()[2:])
        try:
            return cls(kind="TwoClassYZ",
                       multipliers=(float(fields["y"]), float(fields["z"])),
                       margin=float(fields["margin"]), p=float(fields["p"]),
                       n=int(fields["n"]), s=int(fields["s"]), t=int(fields["t"]),
                       k=int(fields["k"]), mode=fields["mode"], graph=fields.get("graph"),
                       exact_deps=fields.get("deps") == "exact")
        except KeyError as exc:
            raise ValueError(f"certificate missing field {exc}") from exc


@dataclass(frozen=True)
class TwoClassTerms:
    """Log-space coefficients: row i reads ln(mult) > y*exp(a_i) + z*exp(b_i)."""
    log_a1: float
    log_b1: float
    log_a2: float
    log_b2: float
    log_pr_a: float
    log_pr_b: float


def _log_pr_bounds(s, t, k, p, mode, g):
    """Upper bounds on ln Pr[A_S] and ln Pr[B_T] under the skewed coloring."""
    mt = pairs(t)
    log_pb = (mt - 1) * math.log1p(-p)
    if mode == MODE_FUNCTION:
        ms = pairs(s)
        if k < ms:
            return -math.inf, log_pb
        return log_skew_constant(ms, k) + (ms - 1) * math.log(p) if ms >= 2 else 0.0, log_pb
    ms = g.size
    if k < ms:
        return -math.inf, log_pb
    _, x = pattern_count_term(g.order, ms)
    if x <= 0:
        raise RegimeRefused(f"counting term X={x} <= 0 for G")
    return log_skew_constant(ms, k) + math.log(x) + (ms - 1) * math.log(p), log_pb


def _log_int(v):
    return math.log(v) if v > 0 else -math.inf


def two_class_terms(n, s, t, k, p, mode=MODE_FUNCTION, graph=None, exact_deps=False) -> TwoClassTerms:
    if mode == MODE_NUMBER:
        if graph is None:
            raise ValueError("gr-number mode needs the pattern graph G")
        s = graph.order
    deps = dependency_counts(n, s, t)
    if deps.flagged:
        raise RegimeRefused(f"n={n} < s+t={s + t}: two-class certificate needs n >= s+t")
    if not 0 < p < 1:
        raise RegimeRefused("p must lie in (0, 1)")
    if p > 0.5:
        raise RegimeRefused("the monochromatic bound (1-p)^(C(t,2)-1) needs p <= 1/2")
    if k < 2:
        raise RegimeRefused("skewed coloring needs k >= 2")
    lpa, lpb = _log_pr_bounds(s, t, k, p, mode, graph)
    if exact_deps:
        c_aa, c_ab, c_ba, c_bb = (_log_int(deps.n_aa_plus1), _log_int(deps.n_ab),
                                  _log_int(deps.n_ba), _log_int(deps.n_bb_plus1))
    else:
        ls, lt = log_choose(n, s), log_choose(n, t)
        c_aa, c_ab, c_ba, c_bb = ls, lt, ls, lt
    return TwoClassTerms(lpa + c_aa, lpb + c_ab, lpa + c_ba, lpb + c_bb, lpa, lpb)


def _rhs(y, z, la, lb):
    # y * e^la + z * e^lb, tolerant of -inf exponents
    return (y * math.exp(la) if la > -math.inf else 0.0) + (z * math.exp(lb) if lb > -math.inf else 0.0)


def check_two_class(n: int, s: int, t: int, k: int, p: float, y: float, z: float,
                    mode: str = MODE_FUNCTION, graph: SmallGraph | None = None,
                    exact_deps: bool = False) -> tuple[bool, float]:
    """Evaluate
        ln y > y Pr[A](N_AA+1) + z Pr[B] N_AB,
        ln z > y Pr[A] N_BA + z Pr[B] (N_BB+1)
    with the skewed probability bounds.  The dependency counts default to the
    trivial bounds C(n,s), C(n,t); exact_deps uses the exact overlap counts.
    Valid (both strict, slack > 1e-12) certifies GR_k(s,t) > n, or
    gr_k(G, K_t) > n in gr-number mode.
    """
    if y <= 1 or z <= 1:
        return False, min(math.log(y) if y > 0 else -math.inf, math.log(z) if z > 0 else -math.inf)
    tt = two_class_terms(n, s, t, k, p, mode, graph, exact_deps)
    m1 = math.log(y) - _rhs(y, z, tt.log_a1, tt.log_b1)
    m2 = math.log(z) - _rhs(y, z, tt.log_a2, tt.log_b2)
    margin = min(m1, m2)
    return margin > STRICT, margin


def recheck_certificate(cert: LLLCertificate) -> tuple[bool, float]:
    graph = parse_graph(cert.graph) if cert.graph else None
    y, z = cert.multipliers
    return check_two_class(cert.n, cert.s, cert.t, cert.k, cert.p, y, z, cert.mode, graph,
                           cert.exact_deps)


def admissible_constants(theorem: str, c1: float, c2: float, c3: float) -> bool:
    """c3 + c2 - c1 c2^2 / 4 < 0 for T_GRLLL; c3 + c2/2 - c1 c2^2 / 2 < 0 for T_grLLL."""
    if theorem == "T_GRLLL":
        return c3 + c2 - c1 * c2 ** 2 / 4 < 0
    if theorem == "T_grLLL":
        return c3 + c2 / 2 - c1 * c2 ** 2 / 2 < 0
    raise ValueError(f"unknown theorem {theorem!r}")


# --------------------------------------------------------------------------
# certificate search
# --------------------------------------------------------------------------

def seed_p(n, s, t, k, mode=MODE_FUNCTION, graph=None, c1=1.0) -> float:
    """Starting skew mass from the asymptotic scaling c1 n^(-e) C^(-1/(m-1)),
    where (e, C) = (1/beta, N) for GR_k(s,t) and ((s+1)/(m_s-1), L) for gr_k(G,K_t)."""
    if mode == MODE_NUMBER:
        s, ms = graph.order, graph.size
    else:
        ms = pairs(s)
    if ms < 2 or k < ms:
        return 0.25
    log_c = log_skew_constant(ms, k)
    if mode == MODE_NUMBER:
        _, x = pattern_count_term(s, ms)
        if x <= 0:
            return 0.25
        log_c += math.log(x)
    expo = (s + 1) / (ms - 1)
    p = c1 * math.exp(-expo * math.log(n) - log_c / (ms - 1))
    return min(max(p, 1e-300), 0.5)


def _p_grid(p0):
    pts = p0 * 10.0 ** (np.arange(-_P_DECADES * _P_PER_DECADE, _P_DECADES * _P_PER_DECADE + 1)
                        / _P_PER_DECADE)
    pts = pts[(pts > 0) & (pts <= 0.5)]
    if pts.size == 0 or pts[-1] < 0.5 and p0 * 10 ** _P_DECADES > 0.5:
        pts = np.append(pts, 0.5)
    return np.unique(pts)


def _excess_grid(lo, hi, per_decade):
    return 10.0 ** np.linspace(lo, hi, int(round((hi - lo) * per_decade)) + 1)


def _best_on_grid(tt: TwoClassTerms, ey, ez):
    """Vectorised margin over y = 1 + ey, z = 1 + ez; returns (margin, y, z) at the best point."""
    y = 1.0 + ey[:, None]
    z = 1.0 + ez[None, :]
    ly = np.log1p(ey)[:, None]
    lz = np.log1p(ez)[None, :]
    e = np.exp
    a1, b1 = e(tt.log_a1), e(tt.log_b1)
    a2, b2 = e(tt.log_a2), e(tt.log_b2)
    with np.errstate(over="ignore", invalid="ignore"):
        m1 = ly - (y * a1 + z * b1)
        m2 = lz - (y * a2 + z * b2)
    marg = np.minimum(m1, m2)
    marg = np.where(np.isnan(marg), -np.inf, marg)
    idx = np.unravel_index(int(np.argmax(marg)), marg.shape)
    return float(marg[idx]), float(y[idx[0], 0]), float(z[0, idx[1]]), idx


@dataclass
class _Budget:
    left: int

    def take(self, n):
        self.left -= n
        return self.left >= 0


def _certify_n(n, s, t, k, mode, graph, exact_deps, budget, c1):
    """Best certificate at a fixed n, or None."""
    p0 = seed_p(n, s, t, k, mode, graph, c1)
    lo, hi = _LOG10_EXCESS
    coarse = _excess_grid(lo, hi, _COARSE_PER_DECADE)
    best = None
    for p in _p_grid(p0):
        if not budget.take(coarse.size ** 2):
            break
        try:
            tt = two_class_terms(n, s, t, k, float(p), mode, graph, exact_deps)
        except RegimeRefused:
            return None
        m, y, z, _ = _best_on_grid(tt, coarse, coarse)
        if best is None or m > best[0]:
            best = (m, float(p), y, z)
    if best is None:
        return None
    # refine around the best coarse point
    m, p, y, z = best
    step = 1.0 / _COARSE_PER_DECADE
    for p_try in (p * 10 ** (d / _FINE_PER_DECADE) for d in range(-5, 6)):
        if not 0 < p_try <= 0.5:
            continue
        cy, cz = math.log10(y - 1), math.log10(z - 1)
        fy = _excess_grid(cy - step, cy + step, _FINE_PER_DECADE)
        fz = _excess_grid(cz - step, cz + step, _FINE_PER_DECADE)
        if not budget.take(fy.size * fz.size):
            break
        tt = two_class_terms(n, s, t, k, p_try, mode, graph, exact_deps)
        m2, y2, z2, _ = _best_on_grid(tt, fy, fz)
        if m2 > best[0]:
            best = (m2, p_try, y2, z2)
    m, p, y, z = best
    ok, margin = check_two_class(n, s, t, k, p, y, z, mode, graph, exact_deps)
    if not ok:
        return None
    return LLLCertificate("TwoClassYZ", (y, z), margin, p, n,
                          graph.order if graph is not None else s, t, k, mode,
                          graph.spec() if graph is not None else None, exact_deps)


@dataclass(frozen=True)
class MaximizeResult:
    n_best: int
    cert: LLLCertificate | None
    baseline: int
    budget_exhausted: bool

    def __iter__(self):
        yield self.n_best
        yield self.cert


def maximize_n_two_class(s: int, t: int, k: int, mode: str = MODE_FUNCTION,
                         search_budget: int = 20_000_000, seed: int = 42,
                         graph: SmallGraph | None = None, exact_deps: bool = False,
                         c1: float = 1.0, n_cap: int = 1 << 40) -> MaximizeResult:
    """Largest n for which the grid search finds a valid two-class certificate.

    Starts at n = s + t, doubles while certificates exist, then bisects.  The
    grid is deterministic, so ``seed`` only labels the run.
    """
    if search_budget < 1:
        raise ValueError("search_budget must be >= 1")
    if mode == MODE_NUMBER:
        if graph is None:
            raise ValueError("gr-number mode needs G")
        s = graph.order
    baseline = max(s, t) - 1
    budget = _Budget(search_budget)
    lo_n = s + t
    cert = _certify_n(lo_n, s, t, k, mode, graph, exact_deps, budget, c1)
    if cert is None:
        return MaximizeResult(baseline, None, baseline, budget.left < 0)
    good, good_cert = lo_n, cert
    bad = None
    n = lo_n
    while budget.left > 0:
        n = min(2 * n, n_cap)
        c = _certify_n(n, s, t, k, mode, graph, exact_deps, budget, c1)
        if c is None:
            bad = n
            break
        good, good_cert = n, c
        if n == n_cap:
            break
    if bad is not None:
        while bad - good > 1 and budget.left > 0:
            mid = (good + bad) // 2
            c = _certify_n(mid, s, t, k, mode, graph, exact_deps, budget, c1)
            if c is None:
                bad = mid
            else:
                good, good_cert = mid, c
    return MaximizeResult(max(good, baseline), good_cert, baseline, budget.left < 0)
