"""Exact combinatorial mirror-symmetry data of 3d conic bundles.

From a heighted lattice polygon: regular unimodular triangulations, the dual
tropical curve, the mirror coordinate ring and its theta-basis presentation
with binomial structure constants, framed-section line-bundle classification,
McKay-cover algebras, and a floating-point layer for amoebas, tropical
localization, and the moment map.
"""

__version__ = "0.1.0"
