import json
from fractions import Fraction as F

import pytest

from bdyqft import geometry as g
from bdyqft.catalog import (
    build_catalog,
    check_adjunction_DI,
    check_localization_bijection,
    embed_J,
    factor_through_interior,
    interior_catalog,
    localize,
    natural_transformations,
    small_catalog,
    threshold_functor,
)
from bdyqft.errors import ClosureOverflow, EmptyCatalog, NotCausallyConvex, NotDisjoint

M = g.Spacetime()


def test_standard_catalog_sizes(std):
    C, L, D = std
    assert len(C) == 12
    assert len(L) == 11
    assert len(interior_catalog(L)) == 7


def test_slab_is_cauchy_in_whole(std):
    C, L, D = std
    assert D("slab") == "M"
    assert C.cauchy[("slab", "M")]


def test_adjunction_and_J(std):
    C, L, D = std
    assert check_adjunction_DI(C, L, D).ok
    J, rep = embed_J(L)
    assert rep.ok and not J.violations()


def test_json_literals_round_trip(std):
    C, _, _ = std
    doc = json.loads(C.dumps())
    for entry in doc["regions"]:
        assert g.Region.from_literal(M, entry["rects"]) == C[entry["id"]]
    assert {(m["source"], m["target"]) for m in doc["morphisms"]} == set(C.morphisms())


def test_empty_seeds():
    with pytest.raises(EmptyCatalog) as e:
        build_catalog(M, {})
    assert e.value.to_dict()["error"] == "EmptyCatalog"


def test_closure_overflow():
    seeds = {f"V{k}": g.Region.diamond(M, 0, F(2 * k + 1, 10), F(1, 20)) for k in range(5)}
    with pytest.raises(ClosureOverflow):
        build_catalog(M, seeds, size_bound=6)


def test_non_convex_seed():
    bad = g.Region.diamond(M, 0, F(1, 2), F(1, 20)) | g.Region.diamond(M, F(1, 2), F(1, 2), F(1, 20))
    with pytest.raises(NotCausallyConvex):
        build_catalog(M, {"bad": bad})


def test_factorization_region(std):
    _, L, _ = std
    assert factor_through_interior(L, "V1", "V3", "M") == "D(V1|V3)"
    with pytest.raises(NotDisjoint):
        factor_through_interior(L, "V1", "B0", "M")
    with pytest.raises(NotDisjoint):
        factor_through_interior(L, "V1", "V3", "B0")


def test_localization_bijection_small():
    C = small_catalog()
    L, D = localize(C)
    assert len(C) <= 8
    G = threshold_functor(L, "V1", 2)
    H = threshold_functor(L, "V3", 3)
    res = check_localization_bijection(D, G, H)
    assert res["bijective"] and res["nat_count"] == res["nat_pullback_count"] > 0


def test_point_functor_automorphisms(std):
    _, L, _ = std
    G = threshold_functor(L, "V1", 2)
    assert not G.violations()
    nat = natural_transformations(G, G)
    ident = {rid: tuple(range(G.sizes[rid])) for rid in L.ids}
    # every self-map of the two-point fibre is natural
    assert len(nat) == 4
    assert ident in nat
