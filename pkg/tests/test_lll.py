import math

import pytest

from grlab.core import SmallGraph, choose, falling_product, pairs
from grlab.lll import (MODE_FUNCTION, MODE_NUMBER, DimensionError, LLLCertificate, RegimeRefused,
                       admissible_constants, check_lll_xform, check_lll_yform, check_two_class,
                       maximize_n_two_class, recheck_certificate)

ISOLATED2 = [[False, False], [False, False]]
CYCLE4 = [[abs(i - j) in (1, 3) for j in range(4)] for i in range(4)]
PAIR = [[False, True], [True, False]]


class TestXForm:
    def test_isolated(self):
        valid, margin = check_lll_xform([0.5, 0.5], ISOLATED2, [0.6, 0.6])
        assert valid and margin == pytest.approx(0.1, abs=1e-12)

    def test_single_event_invalid(self):
        assert not check_lll_xform([0.5], [[False]], [0.4])[0]

    def test_cycle(self):
        valid, margin = check_lll_xform([0.1] * 4, CYCLE4, [0.25] * 4)
        assert valid and margin == pytest.approx(0.040625, abs=1e-12)

    def test_multiplier_out_of_range(self):
        assert not check_lll_xform([0.1], [[False]], [1.0])[0]

    def test_dimension_errors(self):
        with pytest.raises(DimensionError):
            check_lll_xform([0.1, 0.1], ISOLATED2, [0.5])
        with pytest.raises(DimensionError):
            check_lll_xform([0.1, 0.1], [[False, True], [False, False]], [0.5, 0.5])
        with pytest.raises(DimensionError):
            check_lll_xform([0.1], [[True]], [0.5])


class TestYForm:
    def test_isolated_valid(self):
        valid, margin = check_lll_yform([0.1], [[False]], [2.0])
        assert valid and margin == pytest.approx(math.log(2), abs=1e-12)

    def test_isolated_too_large(self):
        valid, margin = check_lll_yform([0.6], [[False]], [2.0])
        assert not valid and margin == pytest.approx(-0.2)

    def test_pair(self):
        valid, margin = check_lll_yform([0.05, 0.05], PAIR, [1.5, 1.5])
        assert valid and margin == pytest.approx(math.log(1.5) - 0.075, abs=1e-12)


class TestTwoClass:
    GOLDEN = LLLCertificate("TwoClassYZ", (3.290867652767775, 3.290867652767775),
                            0.18573554961223615, 0.5, 15, 6, 6, 15)

    def test_golden_certificate(self):
        valid, margin = recheck_certificate(self.GOLDEN)
        assert valid
        assert margin == pytest.approx(self.GOLDEN.margin, abs=1e-12)

    def test_golden_by_hand(self):
        n, s, t, k, p, y = 15, 6, 6, 15, 0.5, 3.290867652767775
        m = pairs(s)
        big_n = m * (k - 1) ** (2 - m) * falling_product(k - 2, m - 2)
        pa = big_n * p ** (m - 1)
        pb = (1 - p) ** (pairs(t) - 1)
        rhs = y * pa * choose(n, s) + y * pb * choose(n, t)
        assert check_two_class(n, s, t, k, p, y, y)[1] == pytest.approx(math.log(y) - rhs, abs=1e-12)

    def test_small_n_example_invalid(self):
        valid, margin = check_two_class(20, 6, 6, 15, 0.01, 1.001, 1.5)
        assert not valid and margin < 0

    def test_multiplier_at_most_one(self):
        assert not check_two_class(20, 6, 6, 15, 0.3, 2.0, 1.0)[0]
        assert not check_two_class(20, 6, 6, 15, 0.3, 0.9, 2.0)[0]

    @pytest.mark.parametrize("args", [
        (5, 3, 3, 3, 0.3, 2.0, 2.0),
        (20, 6, 6, 15, 0.0, 2.0, 2.0),
        (20, 6, 6, 15, 0.7, 2.0, 2.0),
        (20, 6, 6, 1, 0.3, 2.0, 2.0),
    ])
    def test_refusals(self, args):
        with pytest.raises(RegimeRefused):
            check_two_class(*args)

    def test_exact_dependencies_never_worse(self):
        args = (18, 6, 6, 15, 0.5, 3.0, 3.0)
        assert check_two_class(*args, exact_deps=True)[1] >= check_two_class(*args)[1]

    def test_certificate_text_round_trip(self):
        text = self.GOLDEN.to_text()
        assert LLLCertificate.from_text(text) == self.GOLDEN
        with pytest.raises(ValueError):
            LLLCertificate.from_text("cert two-class n=3\n")


class TestMaximize:
    def test_triangles_two_colors(self):
        res = maximize_n_two_class(3, 3, 2)
        assert res.n_best >= res.baseline == 2

    def test_certificates_revalidate(self):
        for k in (15, 25):
            res = maximize_n_two_class(6, 6, k)
            assert res.cert is not None and res.cert.n == res.n_best
            valid, margin = recheck_certificate(res.cert)
            assert valid and margin > 0

    def test_nonincreasing_in_k(self):
        # N grows toward C(s,2) with k, so the certifiable n cannot grow
        ns = []
        for k in (15, 20, 25, 30, 35, 40):
            res = maximize_n_two_class(6, 6, k)
            assert recheck_certificate(res.cert)[0]
            ns.append(res.n_best)
        assert all(a >= b for a, b in zip(ns, ns[1:]))
        assert ns[0] == 15

    def test_pattern_mode(self):
        g = SmallGraph.complete(5)
        res = maximize_n_two_class(5, 8, 10, MODE_NUMBER, graph=g)
        assert res.cert.mode == MODE_NUMBER and res.cert.graph == g.spec()
        assert recheck_certificate(LLLCertificate.from_text(res.cert.to_text()))[0]

    def test_deterministic(self):
        assert maximize_n_two_class(6, 6, 20, seed=1) == maximize_n_two_class(6, 6, 20, seed=1)

    def test_tiny_budget(self):
        res = maximize_n_two_class(6, 6, 15, MODE_FUNCTION, search_budget=10)
        assert res.budget_exhausted and res.n_best >= res.baseline


def test_admissible_constants():
    assert admissible_constants("T_GRLLL", 8, 1, 1) is False
    assert admissible_constants("T_GRLLL", 9, 1, 1) is True
    assert admissible_constants("T_grLLL", 4, 1, 0.1) is True
    with pytest.raises(ValueError):
        admissible_constants("other", 1, 1, 1)
