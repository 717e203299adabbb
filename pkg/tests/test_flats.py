"""Affine flats: canonical forms, incidence classification, spans."""

import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from incidence4.flats import (
    Flat2,
    Hyperplane3,
    IdenticalLinesError,
    IncidenceKind,
    InvariantViolationError,
    Line4,
    classify_line_flat2,
    flat2_in_hyperplane,
    hyperplane_of_flat2_pair,
    line_in_flat2,
    span_flat2_of_lines,
)

E12_FLAT = Flat2((0, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0))


class TestClassification:
    def test_disjoint_by_offset(self):
        ln = Line4((0, 0, 0, 1), (1, 0, 0, 0))
        assert classify_line_flat2(ln, E12_FLAT).kind is IncidenceKind.DISJOINT

    def test_unique_point(self):
        ln = Line4((0, 0, 0, 0), (1, 0, 0, 0))
        out = classify_line_flat2(ln, E12_FLAT)
        assert out.kind is IncidenceKind.POINT
        assert out.location == (0, 0, 0, 0)

    def test_contained(self):
        ln = Line4((0, 0, 0, 0), (0, 1, 1, 0))
        assert classify_line_flat2(ln, E12_FLAT).kind is IncidenceKind.CONTAINED

    def test_line_in_flat2_mirrors_classification(self):
        assert line_in_flat2(Line4((0, 0, 0, 0), (0, 1, 1, 0)), E12_FLAT)
        assert not line_in_flat2(Line4((0, 0, 0, 1), (1, 0, 0, 0)), E12_FLAT)
        assert not line_in_flat2(Line4((0, 0, 0, 0), (1, 0, 0, 0)), E12_FLAT)

    def test_point_location_on_both(self):
        rng = random.Random(3)
        for _ in range(40):
            ln = Line4(
                tuple(rng.randint(-9, 9) for _ in range(4)),
                tuple(rng.randint(-5, 5) for _ in range(4)) or (1, 0, 0, 0),
            )
            fl = Flat2(
                tuple(rng.randint(-9, 9) for _ in range(4)),
                (1, 0, 0, rng.randint(-3, 3)),
                (0, 1, rng.randint(-3, 3), 0),
            )
            out = classify_line_flat2(ln, fl)
            if out.kind is IncidenceKind.POINT:
                assert ln.contains_point(out.location)
                assert fl.contains_point(out.location)

    @given(
        st.fractions(min_value=-4, max_value=4, max_denominator=5).filter(lambda v: v != 0),
        st.fractions(min_value=-4, max_value=4, max_denominator=5),
    )
    @settings(max_examples=40)
    def test_reparametrization_invariance(self, scale, slide):
        ln = Line4((0, 2, 0, 1), (1, 3, 0, 2))
        same = Line4(ln.point_at(slide), tuple(scale * d for d in ln.direction))
        fl = Flat2((1, 1, 1, 0), (1, 2, 0, 0), (0, 0, 1, 1))
        a = classify_line_flat2(ln, fl)
        b = classify_line_flat2(same, fl)
        assert a.kind is b.kind
        assert a.location == b.location


class TestCanonicalForms:
    def test_line_equality_complete(self):
        l1 = Line4((1, 2, 3, 4), (2, -4, 6, 8))
        l2 = Line4((4, -4, 12, 16), (-1, 2, -3, -4))
        assert l1 == l2 and hash(l1) == hash(l2)

    def test_flat_equality_complete(self):
        f1 = Flat2((1, 1, 0, 0), (1, 2, 0, 0), (0, 0, 1, 1))
        f2 = Flat2((2, 3, 1, 1), (2, 4, 0, 0), (1, 2, 3, 3))
        assert f1 == f2 and hash(f1) == hash(f2)

    def test_hyperplane_scaling(self):
        h1 = Hyperplane3((2, 0, 0, 4), 6)
        h2 = Hyperplane3((1, 0, 0, 2), 3)
        assert h1 == h2

    def test_idempotent(self):
        ln = Line4((5, 1, 0, 0), (0, 2, 4, 0))
        again = Line4(ln.base, ln.direction)
        assert ln == again

    def test_zero_direction_rejected(self):
        with pytest.raises(InvariantViolationError):
            Line4((0, 0, 0, 0), (0, 0, 0, 0))

    def test_dependent_span_rejected(self):
        with pytest.raises(InvariantViolationError):
            Flat2((0, 0, 0, 0), (1, 2, 0, 0), (2, 4, 0, 0))


class TestHyperplanes:
    def test_contained_flat(self):
        fl = Flat2((0, 0, 0, 0), (1, 0, 0, 0), (0, 1, 0, 0))
        assert flat2_in_hyperplane(fl, Hyperplane3((0, 0, 0, 1), 0))

    def test_parallel_flat(self):
        fl = Flat2((0, 0, 0, 0), (1, 0, 0, 0), (0, 1, 0, 0))
        assert not flat2_in_hyperplane(fl, Hyperplane3((0, 0, 0, 1), 1))

    def test_crossing_flat(self):
        fl = Flat2((0, 0, 0, 0), (1, 0, 0, 0), (0, 0, 0, 1))
        assert not flat2_in_hyperplane(fl, Hyperplane3((0, 0, 0, 1), 0))

    def test_pair_span(self):
        f1 = Flat2((0, 0, 0, 0), (1, 0, 0, 0), (0, 1, 0, 0))
        f2 = Flat2((0, 0, 1, 0), (1, 0, 0, 0), (0, 1, 0, 0))
        h = hyperplane_of_flat2_pair(f1, f2)
        assert h is not None
        assert flat2_in_hyperplane(f1, h) and flat2_in_hyperplane(f2, h)

    def test_pair_spanning_r4(self):
        f1 = Flat2((0, 0, 0, 0), (1, 0, 0, 0), (0, 1, 0, 0))
        f2 = Flat2((0, 0, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1))
        assert hyperplane_of_flat2_pair(f1, f2) is None


class TestSpans:
    def test_intersecting_lines(self):
        sp = span_flat2_of_lines(
            Line4((0, 0, 0, 0), (1, 0, 0, 0)), Line4((0, 0, 0, 0), (0, 1, 0, 0))
        )
        assert sp == Flat2((0, 0, 0, 0), (1, 0, 0, 0), (0, 1, 0, 0))

    def test_parallel_lines(self):
        sp = span_flat2_of_lines(
            Line4((0, 0, 0, 0), (1, 0, 0, 0)), Line4((0, 1, 0, 0), (1, 0, 0, 0))
        )
        assert sp == Flat2((0, 0, 0, 0), (1, 0, 0, 0), (0, 1, 0, 0))

    def test_skew_lines(self):
        assert (
            span_flat2_of_lines(
                Line4((0, 0, 0, 0), (1, 0, 0, 0)), Line4((0, 0, 0, 1), (0, 1, 0, 0))
            )
            is None
        )

    def test_identical_lines_raise(self):
        with pytest.raises(IdenticalLinesError):
            span_flat2_of_lines(
                Line4((0, 0, 0, 0), (1, 0, 0, 0)), Line4((7, 0, 0, 0), (3, 0, 0, 0))
            )

    def test_span_contains_both(self):
        rng = random.Random(11)
        found = 0
        while found < 20:
            l1 = Line4(
                tuple(rng.randint(-6, 6) for _ in range(4)),
                tuple(rng.randint(-4, 4) for _ in range(4)) or (1, 0, 0, 0),
            )
            t = F(rng.randint(-3, 3))
            d2 = tuple(rng.randint(-4, 4) for _ in range(4))
            if all(v == 0 for v in d2):
                continue
            l2 = Line4(l1.point_at(t), d2)  # intersecting pair
            if l1 == l2:
                continue
            sp = span_flat2_of_lines(l1, l2)
            if sp is None:
                continue
            assert line_in_flat2(l1, sp) and line_in_flat2(l2, sp)
            found += 1
