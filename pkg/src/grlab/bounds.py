"""Closed-form lower bounds for Gallai-Ramsey functions GR_k(s,t) and
numbers gr_k(G,H), with every intermediate quantity kept in a report."""

from __future__ import annotations

import csv
import io
import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .core import (SmallGraph, choose, falling_product, fmt_real, log_choose,
                   log_falling_product, pairs, parse_graph, smallest_order_for)
from .probability import EXACT_MT_LIMIT, EXACT_N_LIMIT, LOG_STRICT_MARGIN

T_GR_FIXED = "T_GRfixed"
T_GR_FLEX = "T_GRflex"
T_GR_LLL = "T_GRLLL"
T_GRNUM_FIXED = "T_grfixed"
T_GRNUM_LLL = "T_grLLL"
THEOREMS = (T_GR_FIXED, T_GR_FLEX, T_GR_LLL, T_GRNUM_FIXED, T_GRNUM_LLL)

NOTE_ELL = ("ell depends on n (max{min{s,n-s},min{t,n-t}}); ell = max(s,t) is used, "
            "which is its value for every n >= s+t")


class BoundError(ValueError):
    """A bound could not be evaluated; `report` carries the intermediates computed so far."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class HypothesisError(BoundError):
    pass


class RegimeError(BoundError):
    pass


class DegenerateError(BoundError):
    pass


@dataclass
class BoundReport:
    theorem: str
    inputs: dict
    intermediates: dict = field(default_factory=dict)
    lower_bound_real: float = math.nan
    lower_bound_int: int = 0
    vacuous: bool = True
    notes: list = field(default_factory=list)

    def __eq__(self, other):
        if not isinstance(other, BoundReport):
            return NotImplemented
        return _key(self) == _key(other)

    # ---- key=value block -------------------------------------------------
    def to_text(self, digits: int | None = None) -> str:
        """Flat key=value block.  digits=None writes reals losslessly (repr);
        an integer rounds them for display."""
        fmt = (lambda v: _fmt_value(v)) if digits is None else (lambda v: _fmt_value(v, digits))
        lines = [f"theorem={self.theorem}"]
        lines += [f"input.{k}={fmt(v)}" for k, v in self.inputs.items()]
        lines += [f"intermediate.{k}={fmt(v)}" for k, v in self.intermediates.items()]
        lines.append(f"lower_bound_real={fmt(self.lower_bound_real)}")
        lines.append(f"lower_bound_int={self.lower_bound_int}")
        lines.append(f"vacuous={'true' if self.vacuous else 'false'}")
        lines += [f"note={n}" for n in self.notes]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "BoundReport":
        rep = cls(theorem="", inputs={})
        for line in text.splitlines():
            if not line.strip():
                continue
            key, _, raw = line.partition("=")
            if key == "theorem":
                rep.theorem = raw
            elif key.startswith("input."):
                rep.inputs[key[6:]] = _parse_value(raw)
            elif key.startswith("intermediate."):
                rep.intermediates[key[13:]] = _parse_value(raw)
            elif key == "lower_bound_real":
                rep.lower_bound_real = float(raw)
            elif key == "lower_bound_int":
                rep.lower_bound_int = int(raw)
            elif key == "vacuous":
                rep.vacuous = raw == "true"
            elif key == "note":
                rep.notes.append(raw)
            else:
                raise ValueError(f"unknown report key {key!r}")
        return rep

    # ---- CSV -------------------------------------------------------------
    def csv_row(self) -> dict:
        inter = self.intermediates
        row = {
            "theorem": self.theorem,
            "s": self.inputs.get("s", ""),
            "t": self.inputs.get("t", ""),
            "k": self.inputs.get("k", ""),
            "c2": self.inputs.get("c2", ""),
            "β": inter.get("beta", ""),
            "γ": inter.get("gamma", ""),
            "N": inter.get("N", ""),
            "L": inter.get("L", ""),
            "X": inter.get("X", ""),
            "Y": inter.get("Y", ""),
            "ℓ": inter.get("ell", ""),
            "bound_real": self.lower_bound_real,
            "bound_int": self.lower_bound_int,
            "vacuous": "true" if self.vacuous else "false",
            "n": self.inputs.get("n", ""),
            "G": self.inputs.get("G", ""),
            "H": self.inputs.get("H", ""),
        }
        return {k: (_fmt_value(v) if v != "" else "") for k, v in row.items()}


CSV_COLUMNS = ["theorem", "s", "t", "k", "c2", "β", "γ", "N", "L", "X", "Y", "ℓ",
               "bound_real", "bound_int", "vacuous", "n", "G", "H"]
_CSV_INTER = {"β": "beta", "γ": "gamma", "N": "N", "L": "L", "X": "X", "Y": "Y", "ℓ": "ell"}


def reports_to_csv(reports: Sequence[BoundReport]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
    w.writeheader()
    for r in reports:
        w.writerow(r.csv_row())
    return buf.getvalue()


def reports_from_csv(text: str) -> list[BoundReport]:
    """Parse CSV rows back into reports carrying the CSV columns."""
    out = []
    for row in csv.DictReader(io.StringIO(text)):
        inputs = {k: _parse_value(row[k]) for k in ("s", "t", "k", "c2", "n", "G", "H") if row[k] != ""}
        inter = {v: _parse_value(row[k]) for k, v in _CSV_INTER.items() if row[k] != ""}
        out.append(BoundReport(row["theorem"], inputs, inter, float(row["bound_real"]),
                               int(row["bound_int"]), row["vacuous"] == "true"))
    return out


def csv_view(report: BoundReport) -> BoundReport:
    """The part of a report that survives a CSV round trip."""
    return reports_from_csv(reports_to_csv([report]))[0]


_INT_RE = re.compile(r"^-?\d+$")


def _fmt_value(v, digits=None):
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v) if digits is None else format(v, f".{digits}g")
    return str(v)


def _parse_value(raw: str):
    if raw in ("true", "false"):
        return raw == "true"
    if _INT_RE.match(raw):
        return int(raw)
    try:
        return float(raw)
    except ValueError:
        return raw


def _key(r):
    return (r.theorem, r.inputs, r.intermediates, repr(r.lower_bound_real),
            r.lower_bound_int, r.vacuous, r.notes)


def _finish(rep: BoundReport, real: float, trivial: int) -> BoundReport:
    rep.lower_bound_real = real
    rep.lower_bound_int = math.floor(real)
    rep.vacuous = rep.lower_bound_int < trivial
    return rep


# --------------------------------------------------------------------------
# GR_k(s,t), uniform coloring
# --------------------------------------------------------------------------

def log_stirling_constant(m: int) -> float:
    """log of (e/m)^m m!, the constant the first-moment argument loosens Pr[A_S] to."""
    return m * (1 - math.log(m)) + math.lgamma(m + 1)


def bound_gr_fixed(s: int, t: int, k: int) -> BoundReport:
    """GR_k(s,t) > (1/e) min{ s / (L + k^(1-C(t,2)))^(1/s), t / (L + k^(1-C(t,2)))^(1/t) }."""
    ms, mt = pairs(s), pairs(t)
    rep = BoundReport(T_GR_FIXED, {"s": s, "t": t, "k": k})
    if s < 3 or t < 3:
        raise HypothesisError("need s, t >= 3", rep)
    if k < ms:
        raise HypothesisError(f"need k >= C(s,2) = {ms}", rep)
    log_l = log_stirling_constant(ms)
    log_mono = (1 - mt) * math.log(k)
    log_base = _logaddexp(log_l, log_mono)
    arg_s = math.log(s) - log_base / s - 1
    arg_t = math.log(t) - log_base / t - 1
    rep.intermediates.update({
        "m_s": ms, "m_t": mt, "L": math.exp(log_l), "mono_term": math.exp(log_mono),
        "log_base": log_base, "s_branch": math.exp(arg_s), "t_branch": math.exp(arg_t),
    })
    return _finish(rep, math.exp(min(arg_s, arg_t)), max(s, t))


# --------------------------------------------------------------------------
# GR_k(s,t), arbitrary color probabilities
# --------------------------------------------------------------------------

def elementary_symmetric(values: Sequence, j: int):
    """e_j(values): sum over j-subsets of the product of their entries, O(len * j)."""
    if j < 0:
        return 0
    e = [1] + [0] * j
    for v in values:
        for d in range(j, 0, -1):
            e[d] += v * e[d - 1]
    return e[j]


@dataclass(frozen=True)
class FlexResult:
    lhs: float
    concludes: bool
    rainbow_term: float
    mono_term: float
    exact: bool
    hypothesis_ok: bool

    def __iter__(self):
        yield self.lhs
        yield self.concludes


def _check_probs(probs, k):
    if len(probs) != k:
        raise ValueError(f"expected {k} probabilities, got {len(probs)}")
    for p in probs:
        if not 0 <= p <= 1:
            raise ValueError(f"probability {p} outside [0, 1]")
    if abs(float(sum(Fraction(p) for p in probs)) - 1) > 1e-12:
        raise ValueError("probabilities must sum to 1 (within 1e-12)")


def bound_gr_flexible(n: int, s: int, t: int, k: int, probs: Sequence) -> FlexResult:
    """C(n,s) C(s,2)! e_{C(s,2)}(probs) + C(n,t) sum_x probs[x]^C(t,2); below 1 means GR_k(s,t) > n.

    When k < C(s,2) the rainbow term vanishes (no C(s,2) distinct colors
    exist) and the result is flagged as outside the stated hypothesis.
    """
    _check_probs(probs, k)
    ms, mt = pairs(s), pairs(t)
    hyp = k >= ms
    if n <= EXACT_N_LIMIT and mt <= EXACT_MT_LIMIT and ms <= EXACT_MT_LIMIT:
        fr = [Fraction(p) for p in probs]
        a = choose(n, s) * math.factorial(ms) * elementary_symmetric(fr, ms)
        b = choose(n, t) * sum(p ** mt for p in fr)
        total = a + b
        return FlexResult(float(total), total < 1, float(a), float(b), True, hyp)
    fl = [float(p) for p in probs]
    e_m = elementary_symmetric(fl, ms)
    la = (log_choose(n, s) + math.lgamma(ms + 1) + math.log(e_m)) if e_m > 0 and s <= n else -math.inf
    mono = sum(p ** mt for p in fl)
    lb = log_choose(n, t) + math.log(mono) if mono > 0 and t <= n else -math.inf
    lv = _logaddexp(la, lb)
    val = math.exp(lv)
    return FlexResult(val, val < 1 - LOG_STRICT_MARGIN, math.exp(la), math.exp(lb), False, hyp)


def flex_report(n: int, s: int, t: int, k: int, probs: Sequence) -> BoundReport:
    """BoundReport wrapper: the certified bound is n when the left side is below 1."""
    res = bound_gr_flexible(n, s, t, k, probs)
    rep = BoundReport(T_GR_FLEX, {"n": n, "s": s, "t": t, "k": k},
                      {"lhs": res.lhs, "rainbow_term": res.rainbow_term,
                       "mono_term": res.mono_term, "concludes": res.concludes,
                       "exact_arithmetic": res.exact})
    if not res.hypothesis_ok:
        rep.notes.append(f"k < C(s,2) = {pairs(s)}: rainbow term is identically 0")
    real = float(n) if res.concludes else float(max(s, t) - 1)
    return _finish(rep, real, max(s, t))


# --------------------------------------------------------------------------
# GR_k(s,t), local lemma with skewed coloring
# --------------------------------------------------------------------------

def log_skew_constant(m: int, k: int) -> float:
    """log of m (k-1)^(2-m) (k-2)(k-3)...(k-m+1); requires k >= m >= 2."""
    return math.log(m) + (2 - m) * math.log(k - 1) + log_falling_product(k - 2, m - 2)


def bound_gr_lll(s: int, t: int, k: int, c2: float) -> BoundReport:
    """GR_k(s,t) > (1/(beta c2)) ((t-1) N^(-1/gamma) / ln((t-1) N^(-1/gamma)))^beta."""
    ms = pairs(s)
    rep = BoundReport(T_GR_LLL, {"s": s, "t": t, "k": k, "c2": float(c2)})
    if s < 6 or t < 6:
        raise HypothesisError("need s, t >= 6", rep)
    if k < ms:
        raise HypothesisError(f"need k >= C(s,2) = {ms}", rep)
    if c2 <= 0:
        raise HypothesisError("c2 must be positive", rep)
    beta = (ms - 1) / (s + 1)
    gamma = ms - 1
    log_n = log_skew_constant(ms, k)
    log_arg = math.log(t - 1) - log_n / gamma
    arg = math.exp(log_arg)
    rep.intermediates.update({"beta": beta, "gamma": gamma, "N": math.exp(log_n),
                              "log_N": log_n, "arg": arg})
    if arg <= math.e:
        raise RegimeError(f"(t-1) N^(-1/gamma) = {fmt_real(arg)} <= e: asymptotic regime not reached", rep)
    real = math.exp(beta * (log_arg - math.log(log_arg)) - math.log(beta * c2))
    return _finish(rep, real, max(s, t))


# --------------------------------------------------------------------------
# gr_k(G,H)
# --------------------------------------------------------------------------

def pattern_count_term(order: int, size: int) -> tuple[int, int]:
    """(x*, X) with x* = min{x : C(x,2) >= size} and
    X = C(C(order,2), size) - sum_{i=1}^{order-x*} C(order,i) C(C(order-i,2), size)."""
    xs = smallest_order_for(size)
    x = choose(pairs(order), size) - sum(
        choose(order, i) * choose(pairs(order - i), size) for i in range(1, order - xs + 1))
    return xs, x


def bound_grnum_fixed(g: SmallGraph, h: SmallGraph, k: int) -> BoundReport:
    """gr_k(G,H) > (ell/e) (k_(m_s) X k^(-m_s) + k^(1-m_t) Y)^(-1/ell) with ell = max(s,t)."""
    s, t, ms, mt = g.order, h.order, g.size, h.size
    rep = BoundReport(T_GRNUM_FIXED, {"G": g.spec(), "H": h.spec(), "s": s, "t": t, "k": k},
                      notes=[NOTE_ELL])
    if s < 4 or t < 4:
        raise HypothesisError("need pattern orders s, t >= 4", rep)
    if k < 2:
        raise HypothesisError("need k >= 2", rep)
    xs, x = pattern_count_term(s, ms)
    ys, y = pattern_count_term(t, mt)
    ell = max(s, t)
    rep.intermediates.update({"m_s": ms, "m_t": mt, "x_star": xs, "y_star": ys, "X": x, "Y": y,
                              "ell": ell})
    if x <= 0 or y <= 0:
        raise DegenerateError(f"counting term degenerated (X={x}, Y={y})", rep)
    total = Fraction(falling_product(k, ms) * x, k ** ms) + Fraction(y, k ** (mt - 1))
    rep.intermediates["N"] = float(total)
    real = ell / math.e * math.exp(-_log_fraction(total) / ell)
    _finish(rep, real, max(s, t))
    if real < s + t:
        rep.notes.append("self-inconsistent: bound < s+t, where ell = max(s,t) is not guaranteed")
    return rep


def bound_grnum_lll(g: SmallGraph, t: int, k: int, c2: float) -> BoundReport:
    """gr_k(G,K_t) > ((t-1)(s+1) L^(-1/(m_s-1)) / (c2 (m_s-1) ln[(t-1) L^(-1/(m_s-1))]))^((m_s-1)/(s+1))."""
    s, ms = g.order, g.size
    rep = BoundReport(T_GRNUM_LLL, {"G": g.spec(), "s": s, "t": t, "k": k, "c2": float(c2)})
    if s < 4:
        raise HypothesisError("need G of order >= 4", rep)
    if ms < 2 * s:
        raise HypothesisError(f"need m_s >= 2s (m_s={ms}, s={s})", rep)
    if k < ms:
        raise HypothesisError(f"need k >= m_s = {ms} (otherwise L = 0)", rep)
    if t < 2 or c2 <= 0:
        raise HypothesisError("need t >= 2 and c2 > 0", rep)
    xs, x = pattern_count_term(s, ms)
    rep.intermediates.update({"m_s": ms, "m_t": pairs(t), "x_star": xs, "X": x,
                              "exponent": (ms - 1) / (s + 1)})
    if x <= 0:
        raise DegenerateError(f"counting term degenerated (X={x})", rep)
    log_l = log_skew_constant(ms, k) + math.log(x)
    log_arg = math.log(t - 1) - log_l / (ms - 1)
    rep.intermediates.update({"L": math.exp(log_l), "log_L": log_l, "arg": math.exp(log_arg)})
    if log_arg <= 1:
        raise RegimeError(f"(t-1) L^(-1/(m_s-1)) = {fmt_real(math.exp(log_arg))} <= e: "
                          "asymptotic regime not reached", rep)
    inner = log_arg + math.log(s + 1) - math.log(c2 * (ms - 1) * log_arg)
    real = math.exp(inner * (ms - 1) / (s + 1))
    return _finish(rep, real, max(s, t))


# --------------------------------------------------------------------------

def _logaddexp(a: float, b: float) -> float:
    if a == -math.inf:
        return b
    if b == -math.inf:
        return a
    hi, lo = max(a, b), min(a, b)
    return hi + math.log1p(math.exp(lo - hi))


def _log_fraction(x: Fraction) -> float:
    return math.log(x.numerator) - math.log(x.denominator)


def graph_from_input(value) -> SmallGraph:
    return value if isinstance(value, SmallGraph) else parse_graph(value)
