"""Tests for framed sections and line-bundle degree vectors."""

import random

import pytest

from conicmirror.errors import InvalidSection, UnknownCell
from conicmirror.lattice_geometry import (
    pairing,
    perp,
    primitivize,
    vsub,
)
from conicmirror.sections_bundles import (
    ClassificationReport,
    FramedSection,
    LineBundleClass,
    check_section,
    classification_report,
    degree_vector,
    enumerate_sections,
    shift_normalize,
)


def star_section(x, y, m):
    """General valid section on the 4-point star triangulation.

    Across edge {(0,0),(1,0)} the first components of cells 0 and 1 agree;
    across edge {(0,0),(0,1)} the second components of cells 0 and 2 agree;
    the edge {(0,0),(-1,-1)} then forces a single integer parameter m.
    """
    return FramedSection({0: (x, y), 1: (x, y + m), 2: (x + m, y)})


class TestCheckSection:
    def test_constant_sections_are_valid(self, four_point_tri):
        s = FramedSection({0: (2, 3), 1: (2, 3), 2: (2, 3)})
        assert check_section(four_point_tri, s) is True

    def test_known_invalid_assignment(self, four_point_tri):
        # cells 1 and 2 share the edge {(0,0),(-1,-1)}; the jump (0,1)
        # pairs to 1 with (1,1), so the constraint fails
        s = FramedSection({0: (0, 0), 1: (0, 1), 2: (0, 0)})
        assert check_section(four_point_tri, s) is False

    def test_one_parameter_family_is_valid(self, four_point_tri):
        for m in range(-3, 4):
            assert check_section(four_point_tri, star_section(5, -2, m))

    def test_unknown_cell_ids_raise(self, four_point_tri):
        with pytest.raises(UnknownCell):
            check_section(four_point_tri, FramedSection({0: (0, 0), 1: (0, 0)}))
        with pytest.raises(UnknownCell):
            check_section(
                four_point_tri,
                FramedSection({0: (0, 0), 1: (0, 0), 2: (0, 0), 7: (0, 0)}),
            )

    def test_single_cell_has_no_constraints(self, simplex_tri):
        assert check_section(simplex_tri, FramedSection({0: (9, -4)}))

    def test_jump_is_multiple_of_primitive_perp(self, four_point_tri):
        # structural invariant behind the search in enumerate_sections
        for s in enumerate_sections(four_point_tri, 2):
            for e in four_point_tri.interior_edges():
                c1, c2 = sorted(e.cells)
                alpha, beta = four_point_tri.edge_points(e)
                step = primitivize(perp(vsub(beta, alpha)))
                jump = vsub(s[c1], s[c2])
                # jump = m * step for an integer m
                assert jump[0] * step[1] == jump[1] * step[0]
                if step[0] != 0:
                    assert jump[0] % step[0] == 0
                else:
                    assert jump[0] == 0 and jump[1] % step[1] == 0


class TestDegreeVector:
    def test_constant_section_has_zero_degrees(self, four_point_tri):
        s = FramedSection({0: (1, 1), 1: (1, 1), 2: (1, 1)})
        assert degree_vector(four_point_tri, s).is_zero()

    def test_star_family_degrees(self, four_point_tri):
        # edges 0,1,2 are the interior edges at the origin; the family
        # parameter m shows up as degrees (-m, m, 2m)
        for m in (-2, 0, 1, 3):
            d = degree_vector(four_point_tri, star_section(0, 0, m))
            assert d.items() == [(0, -m), (1, m), (2, 2 * m)]

    def test_invalid_section_raises(self, four_point_tri):
        with pytest.raises(InvalidSection):
            degree_vector(
                four_point_tri, FramedSection({0: (0, 0), 1: (0, 1), 2: (0, 0)})
            )

    def test_degrees_match_direct_pairing(self, four_point_tri):
        tri = four_point_tri
        s = star_section(2, -1, 3)
        d = degree_vector(tri, s)
        for e_id, e in enumerate(tri.edges):
            if not e.interior:
                continue
            sigma, sigma_p = sorted(e.cells)
            p, q = tri.edge_points(e)
            alpha, beta = (p, q) if p < q else (q, p)
            expected = pairing(vsub(s[sigma], s[sigma_p]), perp(vsub(beta, alpha)))
            assert d.degrees[e_id] == expected

    def test_shift_invariance_and_additivity(self, four_point_tri):
        rng = random.Random(20260814)
        for _ in range(1000):
            s1 = star_section(rng.randint(-9, 9), rng.randint(-9, 9), rng.randint(-9, 9))
            s2 = star_section(rng.randint(-9, 9), rng.randint(-9, 9), rng.randint(-9, 9))
            n = (rng.randint(-9, 9), rng.randint(-9, 9))
            d1 = degree_vector(four_point_tri, s1)
            assert degree_vector(four_point_tri, s1.shift(n)) == d1
            d2 = degree_vector(four_point_tri, s2)
            assert degree_vector(four_point_tri, s1 + s2) == d1 + d2


class TestEnumerateSections:
    def test_single_cell_box_two_has_one_class(self, simplex_tri):
        classes = enumerate_sections(simplex_tri, 2)
        assert len(classes) == 1
        assert classes[0].items() == [(0, (0, 0))]

    def test_star_box_counts(self, four_point_tri):
        # entries in [-b, b]^2 allow family parameters |m| <= 2b
        assert len(enumerate_sections(four_point_tri, 0)) == 1
        assert len(enumerate_sections(four_point_tri, 1)) == 5
        assert len(enumerate_sections(four_point_tri, 2)) == 9

    def test_star_box_one_representatives(self, four_point_tri):
        classes = enumerate_sections(four_point_tri, 1)
        expected = [tuple(star_section(0, 0, m).items()) for m in range(-2, 3)]
        assert [tuple(c.items()) for c in classes] == sorted(expected)

    def test_representatives_are_normalized_and_valid(self, four_point_tri):
        for s in enumerate_sections(four_point_tri, 2):
            assert s[0] == (0, 0)
            assert check_section(four_point_tri, s)
            assert shift_normalize(s) == s

    def test_negative_box_rejected(self, four_point_tri):
        with pytest.raises(ValueError):
            enumerate_sections(four_point_tri, -1)


class TestShiftNormalize:
    def test_subtracts_lowest_cell_value(self):
        s = FramedSection({0: (3, -1), 1: (4, 0), 2: (3, 1)})
        n = shift_normalize(s)
        assert n.items() == [(0, (0, 0)), (1, (1, 1)), (2, (0, 2))]

    def test_idempotent_and_shift_stable(self, four_point_tri):
        s = star_section(4, -7, 2)
        n = shift_normalize(s)
        assert shift_normalize(n) == n
        assert shift_normalize(s.shift((11, -5))) == n


class TestClassificationReport:
    def test_star_degree_map_is_injective_in_box(self, four_point_tri):
        rep = classification_report(four_point_tri, 2)
        assert isinstance(rep, ClassificationReport)
        assert len(rep.classes) == len(rep.degree_vectors) == 9
        assert rep.kernel_seen is False
        assert len({tuple(d.items()) for d in rep.degree_vectors}) == 9

    def test_degree_vectors_close_under_addition_within_family(self, four_point_tri):
        d1 = degree_vector(four_point_tri, star_section(0, 0, 1))
        d2 = degree_vector(four_point_tri, star_section(0, 0, 2))
        d3 = degree_vector(four_point_tri, star_section(0, 0, 3))
        assert d1 + d2 == d3

    def test_mismatched_edge_sets_raise(self):
        with pytest.raises(UnknownCell):
            LineBundleClass({0: 1}) + LineBundleClass({1: 1})
