from itertools import product

import pytest

from grlab.core import EdgeColoring, FormatError, pairs, stream
from grlab.gallai import (GallaiPartition, RainbowTrianglePresent, find_gallai_partition,
                          find_rainbow_triangle, naive_rainbow_triangle, reduced_coloring,
                          sample_gallai_coloring, validate_gallai_partition)


def matching_k4():
    """K_4 with the matching {01, 23} in color 2 and every other edge in color 1."""
    return EdgeColoring.from_function(4, 2, lambda i, j: 2 if (i, j) in ((0, 1), (2, 3)) else 1)


class TestRainbowTriangle:
    def test_two_colors_have_none(self):
        for cols in product((1, 2), repeat=6):
            assert find_rainbow_triangle(EdgeColoring(4, 2, list(cols))) is None

    def test_rainbow_k3(self):
        assert find_rainbow_triangle(EdgeColoring(3, 3, [1, 2, 3])) == (0, 1, 2)

    def test_agrees_with_triple_loop(self):
        rng = stream(21)
        for _ in range(1000):
            col = EdgeColoring(10, 3, rng.integers(1, 4, pairs(10)).tolist())
            assert find_rainbow_triangle(col) == naive_rainbow_triangle(col)


class TestPartition:
    def test_monochromatic(self):
        part = find_gallai_partition(EdgeColoring.constant(4, 3, 1))
        assert part.palette == {1}
        assert part.parts == ((0,), (1,), (2,), (3,))
        assert set(part.between_colors.values()) == {1}

    def test_matching(self):
        part = find_gallai_partition(matching_k4())
        assert part.parts == ((0, 1), (2, 3))
        assert part.between_colors == {(0, 1): 1}
        assert validate_gallai_partition(matching_k4(), part) == (True, None)

    def test_pentagon(self):
        col = EdgeColoring.from_function(5, 2, lambda i, j: 1 if (j - i) % 5 in (1, 4) else 2)
        part = find_gallai_partition(col)
        assert len(part.parts) >= 2
        assert validate_gallai_partition(col, part)[0]

    def test_rejects_rainbow(self):
        with pytest.raises(RainbowTrianglePresent):
            find_gallai_partition(EdgeColoring(3, 3, [1, 2, 3]))

    def test_text_round_trip(self):
        part = find_gallai_partition(matching_k4())
        assert GallaiPartition.from_text(part.to_text()) == part
        with pytest.raises(FormatError):
            GallaiPartition.from_text("gallai 1\n0 1\npair 0 1 1\n2 3\n")


class TestValidate:
    def test_trivial_partition(self):
        col = EdgeColoring.constant(3, 2)
        ok, why = validate_gallai_partition(col, GallaiPartition(((0, 1, 2),), {}, frozenset()))
        assert not ok and "trivial" in why

    def test_three_between_colors(self):
        col = EdgeColoring(3, 3, [1, 2, 3])
        part = GallaiPartition(((0,), (1,), (2,)), {(0, 1): 1, (0, 2): 2, (1, 2): 3},
                               frozenset({1, 2, 3}))
        ok, why = validate_gallai_partition(col, part)
        assert not ok and "palette" in why

    def test_wrong_pair_color(self):
        part = GallaiPartition(((0, 1), (2, 3)), {(0, 1): 2}, frozenset({2}))
        ok, why = validate_gallai_partition(matching_k4(), part)
        assert not ok and "color" in why

    def test_not_a_partition(self):
        part = GallaiPartition(((0, 1), (1, 2, 3)), {(0, 1): 1}, frozenset({1}))
        assert not validate_gallai_partition(matching_k4(), part)[0]


class TestReduced:
    def test_identity_on_monochromatic(self):
        col = EdgeColoring.constant(4, 2, 1)
        assert reduced_coloring(col, find_gallai_partition(col)) == col

    def test_matching(self):
        red = reduced_coloring(matching_k4(), find_gallai_partition(matching_k4()))
        assert red == EdgeColoring(2, 2, [1])

    def test_invalid_partition_refused(self):
        part = GallaiPartition(((0, 1), (2, 3)), {(0, 1): 2}, frozenset({2}))
        with pytest.raises(ValueError):
            reduced_coloring(matching_k4(), part)


def test_sampled_colorings_round_trip():
    rng = stream(8)
    for n, k in ((6, 4), (9, 3), (12, 5)):
        for _ in range(200):
            col = sample_gallai_coloring(n, k, rng)
            assert naive_rainbow_triangle(col) is None
            part = find_gallai_partition(col)
            assert validate_gallai_partition(col, part)[0]
            assert len(reduced_coloring(col, part).used_colors()) <= 2
