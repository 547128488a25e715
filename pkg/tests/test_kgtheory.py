import numpy as np
import pytest

from bdyqft.errors import BasisDegenerate, CoverNotFound, NotAdjointRelated, SupportViolation
from bdyqft.kgtheory import (
    KGSetup,
    build_green_ideal,
    build_interior_theory,
    check_interior_theory,
    cover_of,
    gamma_report,
    kg_bumps,
    kg_catalog,
    kg_ideal_report,
    kg_roundtrip_report,
    oracle_report,
    tau_report,
)
from bdyqft.kleingordon import WIDTH, Bump, TestFunction, apply_P

W = "D(KC|KB)"


def test_desk_catalog():
    L = kg_catalog()
    assert set(L.ids) == {"KC", "KB", "KT", "BT", "BB", W}
    assert {r for r in L.ids if L.interior[r]} == {"KC", "KB", "KT", W}


def test_interior_generators(kg):
    S, K, _ = kg
    assert K.gens["KC"] == ["f1", "f2"]
    assert K.gens["KB"] == ["f3"]
    assert K.gens["KT"] == ["f4"]
    assert K.gens[W] == ["f1", "f2", "f3"]
    assert check_interior_theory(K, S).ok


def test_kext_partial_relations(kg):
    S, K, Kext = kg
    assert Kext.gens["BT"] == ["f1", "f2", "f4"]
    assert Kext["BT"].free_pairs() == [(0, 2), (1, 2)]
    assert Kext["BB"].free_pairs() == []
    assert max(Kext.partial_spread.values()) <= S.tol
    assert gamma_report(K, Kext, S).ok


def test_kext_matches_tree_oracle(kg):
    S, K, Kext = kg
    assert oracle_report(K, Kext, S, "BT", degree=2).ok


def test_green_ideal(kg):
    S, K, Kext = kg
    rep, I, Q = kg_ideal_report(K, Kext, S)
    assert rep.ok
    dims = I.dims()
    assert all(dims[r] == 0 for r in S.L.ids if S.L.interior[r])
    assert dims["BB"] == 0
    assert dims["BT"] == 53
    # the Dirichlet value kills the cross-boundary commutator, the Minkowski one does not
    (i, j, t), _ = I.generators["BT"]
    assert abs(t) <= S.tol
    assert abs(S.tau(S.Gm, "f1", "f4", "BT")) > 0.4


def test_roundtrip(kg):
    S, K, Kext = kg
    assert kg_roundtrip_report(K, Kext, S).ok


def test_tau_point_pair_converges(kg):
    S, _, _ = kg
    rep, conv = tau_report(S)
    assert rep.ok
    gaps = np.abs(np.array(conv["tau"]) - 0.5)
    assert np.all(np.diff(gaps) < 0)


def test_cover_not_found(kg):
    S, K, _ = kg
    assert cover_of(K, S.L, "BT", "f4") == "KT"
    with pytest.raises(CoverNotFound):
        cover_of(K, S.L, "BB", "f4")


def test_tau_outside_region(kg):
    S, _, _ = kg
    with pytest.raises(SupportViolation):
        S.tau(S.Gm, "f1", "f3", "KC")


def _p_bump():
    return apply_P(TestFunction.of(Bump.unit(0.0, 0.25 * WIDTH, 0.04 * WIDTH)))


def test_p_image_detected():
    bumps = kg_bumps()
    bumps["p"] = _p_bump()
    S = KGSetup(kg_catalog(), bumps)
    K = build_interior_theory(S)
    assert "p" not in K.gens["KC"]
    assert K.reduce["p"] == {}
    assert K.gens["KC"] == ["f1", "f2"]


def test_basis_degenerate():
    bumps = {"p": _p_bump(), "f3": kg_bumps()["f3"]}
    with pytest.raises(BasisDegenerate):
        build_interior_theory(KGSetup(kg_catalog(), bumps))


def test_not_adjoint_related(kg, monkeypatch):
    S, K, Kext = kg
    real = KGSetup.tau

    def skewed(self, G, a, b, rid):
        return real(self, G, a, b, rid) + (0.1 if G is self.Gd else 0.0)

    monkeypatch.setattr(KGSetup, "tau", skewed)
    with pytest.raises(NotAdjointRelated):
        build_green_ideal(Kext, S)


@pytest.mark.parametrize("n", [200, 400])
def test_p_image_rank_stable_under_refinement(n):
    bumps = kg_bumps()
    bumps["p"] = _p_bump()
    K = build_interior_theory(KGSetup(kg_catalog(), bumps, h=WIDTH / n))
    assert {r: len(g) for r, g in K.gens.items()} == {"KC": 2, "KB": 1, "KT": 1, W: 3}
