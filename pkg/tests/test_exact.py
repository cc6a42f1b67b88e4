from itertools import combinations, product

import pytest

from grlab.core import EdgeColoring, iter_pairs
from grlab.exact import GALLAI, RAMSEY, exact_gr, verify_ramsey_claim
from grlab.search import read_witness
from grlab.verify import verify_claim


def _color_degrees(col, c):
    return sorted(sum(col.color(v, u) == c for u in range(col.n) if u != v) for v in range(col.n))


def test_r33():
    res = exact_gr(3, 3, 2)
    assert res.value == 6 and res.semantics == RAMSEY
    col = res.extremal.coloring
    # both color classes of the unique extremal coloring are 5-cycles
    assert col.n == 5
    assert _color_degrees(col, 1) == _color_degrees(col, 2) == [2] * 5
    assert verify_claim(col, (3, 3)).ok


def test_r34_and_r43():
    r34 = exact_gr(3, 4, 2)
    assert r34.value == 9
    assert verify_ramsey_claim(r34.extremal.coloring, 3, 4)
    # no rainbow K_3 with two colors, so the extremal coloring also passes the Gallai check
    assert verify_claim(r34.extremal.coloring, (3, 4)).ok
    assert exact_gr(4, 3, 2).value == 9


def test_witness_text_round_trip():
    res = exact_gr(3, 3, 2)
    back = read_witness(res.extremal.to_text())
    assert back.coloring == res.extremal.coloring
    assert back.algo == "exact-ramsey"


def test_cap_leaves_unresolved():
    res = exact_gr(3, 4, 2, n_cap=5)
    assert not res.resolved
    assert res.largest_good == 5
    assert "cap" in res.reason


def test_budget_leaves_unresolved():
    res = exact_gr(3, 4, 2, node_budget=1000)
    assert not res.resolved and "budget" in res.reason


def test_gallai_semantics_two_colors():
    assert exact_gr(3, 3, 2, semantics=GALLAI).value == 6


def test_three_color_triangles():
    # every 3-coloring of K_11 has a rainbow or a monochromatic triangle
    res = exact_gr(3, 3, 3)
    assert res.value == 11
    assert verify_claim(res.extremal.coloring, (3, 3)).ok


def test_bad_arguments():
    with pytest.raises(ValueError):
        exact_gr(3, 3, 3, semantics=RAMSEY)
    with pytest.raises(ValueError):
        exact_gr(1, 3, 2)


def test_ramsey_check_against_enumeration():
    edges = list(iter_pairs(5))
    for cols in product((1, 2), repeat=len(edges)):
        col = EdgeColoring(5, 2, list(cols))
        red_triangle = any(all(col.color(a, b) == 1 for a, b in combinations(tri, 2))
                           for tri in combinations(range(5), 3))
        blue_k4 = any(all(col.color(a, b) == 2 for a, b in combinations(quad, 2))
                      for quad in combinations(range(5), 4))
        assert verify_ramsey_claim(col, 3, 4) == (not red_triangle and not blue_k4)
