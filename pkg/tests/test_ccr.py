import itertools

import numpy as np
import pytest

from bdyqft.ccr import CCRPolyAlgebra, SymplecticSpace
from bdyqft.errors import DegreeOverflow

TAU3 = np.array([[0, 1.0, 0.5], [-1.0, 0, 2.0], [-0.5, -2.0, 0]])


def oracle_dim(n, comm, tau, d):
    """Words of length <= d modulo every CCR instance that fits in the truncation."""
    words = [w for k in range(d + 1) for w in itertools.product(range(n), repeat=k)]
    idx = {w: k for k, w in enumerate(words)}
    rows = []
    for k in range(d - 1):
        for p in itertools.product(range(n), repeat=k):
            for s_len in range(d - 1 - k):
                for s in itertools.product(range(n), repeat=s_len):
                    for i, j in itertools.product(range(n), repeat=2):
                        if i < j and comm[i][j]:
                            r = np.zeros(len(words), dtype=complex)
                            r[idx[p + (j, i) + s]] += 1
                            r[idx[p + (i, j) + s]] -= 1
                            r[idx[p + s]] -= 1j * tau[j, i]
                            rows.append(r)
    rank = np.linalg.matrix_rank(np.array(rows)) if rows else 0
    return len(words) - rank


PARTIAL = [[1, 1, 0], [1, 1, 1], [0, 1, 1]]


@pytest.mark.parametrize("comm", [None, PARTIAL], ids=["full", "partial"])
@pytest.mark.parametrize("d", [2, 3])
def test_dims_match_relation_oracle(comm, d):
    A = CCRPolyAlgebra(TAU3, comm, max_degree=d)
    full = np.ones((3, 3), bool) if comm is None else np.array(comm, bool)
    assert A.dim(d) == oracle_dim(3, full, TAU3, d)


def test_known_dims():
    assert CCRPolyAlgebra(TAU3, PARTIAL, 3).dim() == 26
    assert CCRPolyAlgebra(TAU3, None, 3).dim() == 20


def test_lexmin_trace_normal_form():
    # b commutes with a and c, a and c do not: "cab" is normalized to "bca"
    A = CCRPolyAlgebra(np.zeros((3, 3)), PARTIAL, 3)
    assert A.is_normal((1, 2, 0))
    assert not A.is_normal((2, 0, 1))
    assert A.normal_form({(2, 0, 1): 1.0}) == {(1, 2, 0): 1.0}


def test_ccr_relation():
    A = CCRPolyAlgebra(TAU3, None, 2)
    c = A.commutator(A.gen(0), A.gen(1))
    assert c == {(): 1j * TAU3[0, 1]}


def test_free_pair_has_no_relation():
    A = CCRPolyAlgebra(TAU3, PARTIAL, 2)
    assert A.free_pairs() == [(0, 2)]
    c = A.commutator(A.gen(0), A.gen(2))
    assert set(c) == {(0, 2), (2, 0)}


@pytest.mark.parametrize("comm", [None, PARTIAL], ids=["full", "partial"])
def test_associativity(comm):
    A = CCRPolyAlgebra(TAU3, comm, 6)
    words = [w for w in A.basis(2) if w]
    rng = np.random.default_rng(0)
    for _ in range(20):
        x, y, z = ({w: complex(rng.normal())} for w in (words[k] for k in rng.integers(len(words), size=3)))
        lhs = A.mul(A.mul(x, y), z)
        rhs = A.mul(x, A.mul(y, z))
        assert np.allclose(A.vector(lhs, 6), A.vector(rhs, 6))


def test_star_is_antimultiplicative():
    A = CCRPolyAlgebra(TAU3, PARTIAL, 4)
    x = A.add(A.gen(0), A.mul(A.gen(2), A.gen(1)), coeffs=[2j, 1])
    y = A.add(A.gen(1), A.unit(), coeffs=[1, 3 - 1j])
    lhs = A.star(A.mul(x, y))
    rhs = A.mul(A.star(y), A.star(x))
    assert np.allclose(A.vector(lhs), A.vector(rhs))
    assert A.star(A.gen(0)) == A.gen(0)


def test_degree_overflow():
    A = CCRPolyAlgebra(TAU3, None, 2)
    x = A.mul(A.gen(0), A.gen(1))
    with pytest.raises(DegreeOverflow):
        A.mul(x, A.gen(2))
    with pytest.raises(DegreeOverflow):
        A.vector(A.mul(x, A.gen(2), check=False))


def test_antisymmetry_defect():
    assert SymplecticSpace(TAU3).antisymmetry_defect() == 0
    assert SymplecticSpace(TAU3 + 0.1 * np.eye(3)).antisymmetry_defect() == pytest.approx(0.2)
