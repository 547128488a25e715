import numpy as np
import pytest

from bdyqft.algebra import TwoSidedStarIdeal
from bdyqft.errors import NotAnIdealFunctor
from bdyqft.fixtures import (
    boundary_generator_theory,
    constant_theory,
    interior_fixtures,
    noncommuting_fixture,
    threshold_theory,
)
from bdyqft.theory import (
    IdealFunctor,
    check_causality,
    check_equivalence_roundtrips,
    check_functoriality,
    check_time_slice,
    conjugate_theory,
    identity_theory_morphism,
    is_additive,
    is_additive_at,
    pullback_D,
    quotient_theory,
    zero_ideal_functor,
)


@pytest.fixture(scope="module")
def L(char_full):
    return char_full[1]


@pytest.mark.parametrize("name", ["trivial", "points", "triangular", "dual"])
def test_interior_fixtures_are_theories(L, name):
    A = interior_fixtures(L)[name]
    assert check_functoriality(A).ok
    assert check_causality(A).ok


def test_noncommuting_control_fails_causality(L):
    rep = check_causality(noncommuting_fixture(L))
    assert not rep.ok
    assert rep.failures()[0].witness["max_commutator"] > 0.1


@pytest.mark.parametrize("make", [threshold_theory, boundary_generator_theory, constant_theory])
def test_boundary_theories_are_functorial(L, make):
    B = make(L)
    assert check_functoriality(B).ok and check_causality(B).ok


def test_pullback_satisfies_time_slice(char_full):
    C, L, D = char_full
    T2 = pullback_D(threshold_theory(L), D)
    assert check_time_slice(T2).ok
    assert check_equivalence_roundtrips(threshold_theory(L), T2, L, D).ok


def test_conjugate_theory_is_isomorphic(L):
    T = threshold_theory(L)
    T2, iso = conjugate_theory(T, np.random.default_rng(1))
    assert check_functoriality(T2).ok
    assert iso.check().ok and iso.is_isomorphism()
    assert identity_theory_morphism(T).naturality_defect() == 0


def test_additivity(L):
    assert is_additive(threshold_theory(L))
    B = boundary_generator_theory(L)
    assert not is_additive_at(B, "B1")
    assert is_additive_at(B, "V1")


def test_quotient_by_zero_ideal(L):
    T = threshold_theory(L)
    Q, pi = quotient_theory(T, zero_ideal_functor(T))
    assert Q.dims() == T.dims() and pi.is_isomorphism()


def test_bad_ideal_functor_rejected(L):
    T = constant_theory(L)
    ideals = zero_ideal_functor(T).ideals
    v = L.ids[0]
    # a non-ideal line in C^2
    ideals[v] = TwoSidedStarIdeal(T[v], np.array([1.0, 1.0]) / 2)
    with pytest.raises(NotAnIdealFunctor):
        IdealFunctor(T, ideals).validate()
