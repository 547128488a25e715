"""Small catalogs and finite-dimensional theories used as test and CLI fixtures.

Region names: ``V1``, ``V3`` are spacelike-separated interior diamonds at
t = 0, ``W`` is ``D(V1 u V3)``, ``T`` is an interior diamond in the causal
future of ``V3``; ``B0``, ``B1``, ``BT``, ``B2`` touch the boundary x = 0
(``B2`` touches x = 1) and contain, respectively, {V3}, {V1, V3, W},
{V3, T} and no interior region.
"""

from __future__ import annotations

from fractions import Fraction as F

import numpy as np

from .algebra import (
    AlgebraMorphism,
    dual_numbers,
    function_algebra,
    matrix_algebra,
    point_map_morphism,
    upper_triangular,
)
from .catalog import build_catalog, interior_catalog, localize
from .geometry import Region, Spacetime
from .theory import Theory, theory_from_covers

W = "D(V1|V3)"


def region_shapes(M):
    return {
        "V1": Region.diamond(M, 0, F(8, 25), F(3, 25)),
        "V3": Region.diamond(M, 0, F(3, 25), F(1, 25)),
        "T": Region.diamond(M, F(9, 25), F(3, 25), F(1, 25)),
        "B0": Region.diamond(M, 0, 0, F(1, 5)),
        "B1": Region.diamond(M, 0, 0, F(12, 25)),
        "BT": Region.diamond(M, F(4, 25), 0, F(9, 25)),
        "B2": Region.diamond(M, 0, 1, F(1, 5)),
        "M": Region.whole(M),
    }


def ext_catalog(M=None):
    """Localized catalog where every object has at most 3 interior subregions.

    BT contains V3 and T, which have no common interior region, so ext A(BT)
    is a genuine (truncated) free product.
    """
    M = M or Spacetime()
    s = region_shapes(M)
    C = build_catalog(M, {k: s[k] for k in ("V1", "V3", "T", "B0", "B1", "BT", "B2")}, name="ext")
    L, _ = localize(C)
    return L


def char_catalog(M=None, full=False):
    """Localized catalog on which ext of the fixtures is finite-dimensional.

    With ``full=True`` returns (C, L, D) including the unlocalized catalog.
    """
    M = M or Spacetime()
    s = region_shapes(M)
    seeds = {k: s[k] for k in ("V1", "V3", "B0", "B1", "B2", "M")}
    seeds["slab"] = Region.time_slab(M)
    C = build_catalog(M, seeds, name="char")
    L, D = localize(C)
    return (C, L, D) if full else L


def _unit_map(A, B):
    return AlgebraMorphism(A, B, B.unit.reshape(-1, 1))


def _interior(L, algs, covers, name):
    Int = interior_catalog(L)
    algs = {k: v for k, v in algs.items() if k in Int}
    covers = {k: v for k, v in covers.items() if k[0] in Int and k[1] in Int}
    return theory_from_covers(Int, algs, covers, name)


def interior_fixtures(L):
    """Interior theories (leaf dims 1..3) on the interior part of ``L``."""
    out = {}
    one = function_algebra(1)
    algs = {"V1": one, "V3": function_algebra(1), W: function_algebra(1), "T": function_algebra(1)}
    covers = {(a, W): _unit_map(algs[a], algs[W]) for a in ("V1", "V3")}
    out["trivial"] = _interior(L, algs, covers, "trivial")

    algs = {"V1": function_algebra(2), "V3": function_algebra(2), W: function_algebra(3), "T": function_algebra(2)}
    covers = {
        ("V1", W): point_map_morphism(algs["V1"], algs[W], (0, 0, 1)),
        ("V3", W): point_map_morphism(algs["V3"], algs[W], (0, 1, 1)),
    }
    out["points"] = _interior(L, algs, covers, "points")

    T2 = upper_triangular()
    algs = {"V1": function_algebra(1), "V3": T2, W: T2, "T": function_algebra(2)}
    covers = {("V1", W): _unit_map(algs["V1"], T2), ("V3", W): AlgebraMorphism(T2, T2, np.eye(3))}
    out["triangular"] = _interior(L, algs, covers, "triangular")

    Dn = dual_numbers()
    algs = {"V1": Dn, "V3": function_algebra(1), W: Dn, "T": upper_triangular()}
    covers = {("V1", W): AlgebraMorphism(Dn, Dn, np.eye(2)), ("V3", W): _unit_map(algs["V3"], Dn)}
    out["dual"] = _interior(L, algs, covers, "dual")
    return out


def noncommuting_fixture(L):
    """Negative control: images of the disjoint V1, V3 do not commute in W."""
    M2 = matrix_algebra(2)
    C2 = function_algebra(2)
    diag = np.zeros((4, 2))
    diag[0, 0] = diag[3, 1] = 1
    # projections (1 +- sigma_x)/2 in the matrix-unit basis (E11, E12, E21, E22)
    had = 0.5 * np.array([[1, 1], [1, -1], [1, -1], [1, 1]])
    algs = {"V1": C2, "V3": C2, W: M2, "T": function_algebra(1)}
    covers = {("V1", W): AlgebraMorphism(C2, M2, diag), ("V3", W): AlgebraMorphism(C2, M2, had)}
    return _interior(L, algs, covers, "noncommuting")


def threshold_theory(L, marker="V1", name=None):
    """C^2 on regions containing ``marker``, C elsewhere; additive when every
    region containing the marker contains an interior region that does."""
    C2, C1 = function_algebra(2), function_algebra(1)
    algs = {v: (C2 if L.is_morphism(marker, v) else C1) for v in L.ids}
    maps = {}
    for a, b in L.morphisms():
        if algs[a].dim == algs[b].dim:
            maps[(a, b)] = AlgebraMorphism(algs[a], algs[b], np.eye(algs[a].dim))
        else:
            maps[(a, b)] = _unit_map(algs[a], algs[b])
    return Theory(L, algs, maps, name or f"threshold({marker})")


def boundary_generator_theory(L, marker="V1", at="B1"):
    """Threshold theory with an extra boundary-only generator at ``at`` and above.

    Objects containing ``at`` carry C^3; the interior images only reach the
    2-dimensional subalgebra, so the theory is not additive there.
    """
    C1, C2, C3 = function_algebra(1), function_algebra(2), function_algebra(3)
    algs = {}
    for v in L.ids:
        if L.is_morphism(at, v):
            algs[v] = C3
        elif L.is_morphism(marker, v):
            algs[v] = C2
        else:
            algs[v] = C1
    maps = {}
    for a, b in L.morphisms():
        A, B = algs[a], algs[b]
        if A.dim == B.dim:
            maps[(a, b)] = AlgebraMorphism(A, B, np.eye(A.dim))
        elif A.dim == 1:
            maps[(a, b)] = _unit_map(A, B)
        else:
            # C^2 -> C^3 along the point map {0,1,2} -> {0,1}, (0, 1, 1)
            maps[(a, b)] = point_map_morphism(A, B, (0, 1, 1))
    return Theory(L, algs, maps, "boundary-generator")


def constant_theory(L, k=2):
    A = function_algebra(k)
    return Theory(L, {v: A for v in L.ids}, {(a, b): AlgebraMorphism(A, A, np.eye(k)) for a, b in L.morphisms()}, f"constant C^{k}")
