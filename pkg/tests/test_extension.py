import numpy as np
import pytest

from bdyqft.algebra import function_algebra
from bdyqft.catalog import build_catalog, interior_catalog, localize
from bdyqft.errors import IdealNotTrivialOnInterior, MissingFactorizationRegion, NotAdditive, TruncationUnsound
from bdyqft.extension import (
    ExtAlgebra,
    IQFTPair,
    brute_force_quotient,
    characterize,
    check_triangle_identities,
    element_from_json,
    element_to_json,
    evaluate,
    ext_theory,
    functor_Q,
    functor_S,
    ideal_from_generators,
    tree_from_json,
    tree_to_json,
    unit_morphism,
)
from bdyqft.fixtures import W, boundary_generator_theory, interior_fixtures, region_shapes, threshold_theory
from bdyqft.geometry import Spacetime
from bdyqft.theory import Theory, check_causality, check_functoriality


@pytest.fixture(scope="module")
def fx(ext_L):
    return interior_fixtures(ext_L)


@pytest.mark.parametrize("V", ["B0", "B1", "B2", "BT", W])
def test_normal_form_matches_oracle_len2(ext_L, fx, V):
    A = fx["points"]
    assert ExtAlgebra(A, ext_L, V, max_len=2).span_dimension(2) == brute_force_quotient(A, ext_L, V, max_len=2).dim


def test_region_without_interior_gives_scalars(ext_L, fx):
    E = ExtAlgebra(fx["points"], ext_L, "B2", max_len=3)
    assert E.dim == 1
    assert np.allclose(E.coords(E.unit()), [1])


def test_free_product_at_BT(ext_L, fx):
    # V3 and T share no interior region, so words alternate
    E = ExtAlgebra(fx["points"], ext_L, "BT", max_len=2)
    assert E.dim == 5
    x = E.tree(("V3",), [np.array([1, 0])])
    y = E.tree(("T",), [np.array([1, 0])])
    assert not np.allclose(E.coords(E.mul(x, y)), E.coords(E.mul(y, x)))


def test_interior_extension_is_A(char_full):
    _, L, _ = char_full
    for A in interior_fixtures(L).values():
        eta = unit_morphism(ext_theory(A, L, 3))
        assert all(eta[v].is_isomorphism() for v in A.ids)


def test_ext_theory_axioms(char_full):
    _, L, _ = char_full
    B = ext_theory(interior_fixtures(L)["triangular"], L, 4).theory
    assert check_functoriality(B).ok and check_causality(B).ok


def test_smallest_strategy_disagrees_with_oracle(ext_L, fx):
    A = fx["points"]
    small = ExtAlgebra(A, ext_L, "B1", max_len=2, strategy="smallest").span_dimension(2)
    top = ExtAlgebra(A, ext_L, "B1", max_len=2).span_dimension(2)
    oracle = brute_force_quotient(A, ext_L, "B1", max_len=2).dim
    assert top == oracle == 3
    assert small == 5


def test_truncation_unsound(ext_L, fx):
    E = ExtAlgebra(fx["points"], ext_L, "BT", max_len=2)
    a, b = E.basis_element(1), E.basis_element(2)
    with pytest.raises(TruncationUnsound):
        E.coords(E.mul(E.mul(a, b), a))


def test_missing_factorization_region():
    M = Spacetime()
    s = region_shapes(M)
    C = build_catalog(M, {k: s[k] for k in ("V1", "V3", "B1")}, factorization=False)
    L, _ = localize(C)
    Int = interior_catalog(L)
    A = Theory(Int, {v: function_algebra(1) for v in Int.ids})
    with pytest.raises(MissingFactorizationRegion):
        ExtAlgebra(A, L, "B1")


def test_tree_json_round_trip(ext_L, fx):
    shape, leaves = ("V3", "T"), [np.array([1, 2j]), np.array([0.5, -1])]
    s2, l2 = tree_from_json(tree_to_json(shape, leaves))
    assert s2 == shape and all(np.array_equal(a, b) for a, b in zip(leaves, l2))
    E = ExtAlgebra(fx["points"], ext_L, "BT", max_len=2)
    elem = E.tree(shape, leaves)
    back = element_from_json(element_to_json(elem))
    assert np.allclose(E.coords(E.normal_form(back)), E.coords(E.normal_form(elem)))


def test_evaluate_pushes_leaves(char_full):
    _, L, _ = char_full
    B = threshold_theory(L)
    a = np.array([0.3, -2.0])
    tree = {("V1",): a.astype(complex)}
    assert np.allclose(evaluate(tree, B, "B1"), B.map("V1", "B1").matrix @ a)
    assert np.allclose(evaluate({(): np.array(1.0 + 0j)}, B, "B1"), B["B1"].unit)


def test_triangle_identities(char_full):
    _, L, _ = char_full
    A = interior_fixtures(L)["points"]
    B = threshold_theory(L)
    assert check_triangle_identities(A, B, L, max_len=3).ok


def test_characterize_rows(char_full):
    _, L, _ = char_full
    rep, rows = characterize(boundary_generator_theory(L), 4)
    assert rep.ok
    assert not rows["B1"]["additive"] and not rows["B1"]["lambda_iso"]
    assert rows["V1"]["additive"] and rows["V1"]["lambda_iso"]


def test_functor_S_rejects_non_additive(char_full):
    _, L, _ = char_full
    with pytest.raises(NotAdditive):
        functor_S(boundary_generator_theory(L))


def test_functor_Q_rejects_interior_ideal(char_full):
    _, L, _ = char_full
    A = interior_fixtures(L)["points"]
    X = ext_theory(A, L, 3)
    I = ideal_from_generators(X.theory, {"V1": [X.theory["V1"].basis(0)]})
    with pytest.raises(IdealNotTrivialOnInterior):
        functor_Q(IQFTPair(A, I, X))
