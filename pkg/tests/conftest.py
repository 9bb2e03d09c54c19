"""Shared example inputs.

The two workhorse examples: the standard simplex with zero heights (single
unimodular cell, one tropical vertex) and the 4-point set
{(0,0),(1,0),(0,1),(-1,-1)} with nu(0,0) = -1/4 (3-cell star triangulation,
tropical curve with three legs and four chambers).
"""

from fractions import Fraction

import pytest

from conicmirror.lattice_geometry import HeightedPolygon, regular_triangulation

FOUR_POINTS = ((0, 0), (1, 0), (0, 1), (-1, -1))
FOUR_HEIGHTS = (Fraction(-1, 4), Fraction(0), Fraction(0), Fraction(0))

SIMPLEX_POINTS = ((0, 0), (1, 0), (0, 1))

PARABOLOID_POINTS = ((0, 0), (2, 0), (0, 2), (1, 1), (1, 0), (0, 1))


@pytest.fixture(scope="session")
def simplex() -> HeightedPolygon:
    return HeightedPolygon.create(SIMPLEX_POINTS, 0)


@pytest.fixture(scope="session")
def simplex_tri(simplex):
    return regular_triangulation(simplex)


@pytest.fixture(scope="session")
def four_point() -> HeightedPolygon:
    return HeightedPolygon.create(FOUR_POINTS, FOUR_HEIGHTS)


@pytest.fixture(scope="session")
def four_point_tri(four_point):
    return regular_triangulation(four_point)
