"""Finite-dimensional unital *-algebras given by structure constants.

An algebra of dimension ``n`` has basis ``e_0 .. e_{n-1}`` with
``e_i e_j = sum_k c[i, j, k] e_k``; the involution is antilinear and stored
as a matrix ``S`` with ``x* = S @ conj(x)``.  Dimension 0 is the zero
algebra (where 1 = 0), which is what quotienting by the whole algebra gives.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .errors import InvalidAlgebra, InvalidMorphism, NotAnIdeal

TOL_LIN = 1e-9


# ---- linear algebra helpers --------------------------------------------

def span_basis(vectors, n, tol=TOL_LIN):
    """Orthonormal basis (columns) of the span of ``vectors``."""
    vecs = [np.asarray(v, dtype=complex) for v in vectors]
    if not vecs or n == 0:
        return np.zeros((n, 0), dtype=complex)
    M = np.column_stack(vecs)
    U, s, _ = np.linalg.svd(M, full_matrices=False)
    scale = max(1.0, s[0] if s.size else 0.0)
    r = int(np.sum(s > tol * scale))
    return U[:, :r]


def null_basis(matrix, tol=TOL_LIN):
    """Orthonormal basis of the kernel of ``matrix``."""
    matrix = np.asarray(matrix, dtype=complex)
    m, n = matrix.shape
    if n == 0:
        return np.zeros((0, 0), dtype=complex)
    if m == 0:
        return np.eye(n, dtype=complex)
    _, s, Vh = np.linalg.svd(matrix, full_matrices=True)
    scale = max(1.0, s[0] if s.size else 0.0)
    r = int(np.sum(s > tol * scale))
    return Vh[r:].conj().T


def rank(matrix, tol=TOL_LIN):
    matrix = np.asarray(matrix, dtype=complex)
    if matrix.size == 0:
        return 0
    s = np.linalg.svd(matrix, compute_uv=False)
    return int(np.sum(s > tol * max(1.0, s[0])))


def complement_basis(basis, n):
    """Orthonormal basis of the orthogonal complement of the column span."""
    if basis.shape[1] == 0:
        return np.eye(n, dtype=complex)
    return null_basis(basis.conj().T)


def residual(basis, v):
    """Distance of ``v`` from the column span of an orthonormal basis."""
    v = np.asarray(v, dtype=complex)
    if basis.shape[1] == 0:
        return float(np.linalg.norm(v))
    return float(np.linalg.norm(v - basis @ (basis.conj().T @ v)))


def same_subspace(b1, b2, tol=1e-7):
    if b1.shape[1] != b2.shape[1]:
        return False
    return all(residual(b2, b1[:, k]) < tol for k in range(b1.shape[1]))


# ---- algebras ------------------------------------------------------------

@dataclass(eq=False)
class StarAlgebra:
    c: np.ndarray
    unit: np.ndarray
    star_matrix: np.ndarray
    name: str = ""
    labels: tuple = ()

    def __post_init__(self):
        self.c = np.asarray(self.c, dtype=complex)
        self.unit = np.asarray(self.unit, dtype=complex)
        self.star_matrix = np.asarray(self.star_matrix, dtype=complex)

    @property
    def dim(self):
        return self.unit.shape[0]

    def basis(self, i):
        e = np.zeros(self.dim, dtype=complex)
        e[i] = 1
        return e

    def mul(self, x, y):
        if self.dim == 0:
            return np.zeros(0, dtype=complex)
        return np.einsum("i,j,ijk->k", x, y, self.c)

    def star(self, x):
        return self.star_matrix @ np.conj(x)

    def left_matrix(self, x):
        """Matrix of y -> x y."""
        return np.einsum("i,ijk->kj", x, self.c)

    def right_matrix(self, y):
        """Matrix of x -> x y."""
        return np.einsum("j,ijk->ki", y, self.c)

    def commutator(self, x, y):
        return self.mul(x, y) - self.mul(y, x)

    def violations(self, tol=TOL_LIN):
        """List of failed axioms (empty for a valid *-algebra)."""
        n = self.dim
        out = []
        if n == 0:
            return out
        c = self.c
        lhs = np.einsum("ijm,mkl->ijkl", c, c)
        rhs = np.einsum("jkm,iml->ijkl", c, c)
        if np.max(np.abs(lhs - rhs)) > tol:
            out.append("associativity")
        left = np.einsum("i,ijk->jk", self.unit, c)
        right = np.einsum("j,ijk->ik", self.unit, c)
        if np.max(np.abs(left - np.eye(n))) > tol or np.max(np.abs(right - np.eye(n))) > tol:
            out.append("unitality")
        S = self.star_matrix
        if np.max(np.abs(S @ np.conj(S) - np.eye(n))) > tol:
            out.append("star involutive")
        for i, j in itertools.product(range(n), repeat=2):
            a = self.star(c[i, j])
            b = self.mul(S[:, j], S[:, i])
            if np.max(np.abs(a - b)) > tol:
                out.append(f"star anti-multiplicative at ({i},{j})")
                break
        if np.max(np.abs(self.star(self.unit) - self.unit)) > tol:
            out.append("star of unit")
        return out

    def validate(self):
        bad = self.violations()
        if bad:
            raise InvalidAlgebra(f"{self.name or 'algebra'} violates {bad[0]}", failures=bad)
        return self

    def is_commutative(self, tol=TOL_LIN):
        return np.max(np.abs(self.c - self.c.transpose(1, 0, 2)), initial=0.0) <= tol

    def __repr__(self):
        return f"StarAlgebra({self.name or '?'}, dim={self.dim})"


def function_algebra(k, name=None):
    """C^k: functions on k points with pointwise product and conjugation."""
    c = np.zeros((k, k, k), dtype=complex)
    for i in range(k):
        c[i, i, i] = 1
    return StarAlgebra(c, np.ones(k), np.eye(k), name or f"C^{k}")


def zero_algebra():
    return StarAlgebra(np.zeros((0, 0, 0)), np.zeros(0), np.zeros((0, 0)), "0")


def matrix_algebra(n, name=None):
    """M_n(C) with matrix units E_ab (index a*n + b) and conjugate transpose."""
    d = n * n
    c = np.zeros((d, d, d), dtype=complex)
    S = np.zeros((d, d), dtype=complex)
    for a, b, e in itertools.product(range(n), repeat=3):
        c[a * n + b, b * n + e, a * n + e] = 1
    for a, b in itertools.product(range(n), repeat=2):
        S[b * n + a, a * n + b] = 1
    unit = np.zeros(d)
    for a in range(n):
        unit[a * n + a] = 1
    return StarAlgebra(c, unit, S, name or f"M_{n}")


def upper_triangular():
    """T_2: upper triangular 2x2 matrices, basis (E11, E12, E22).

    The involution is the conjugate-linear flip across the anti-diagonal,
    which is an anti-automorphism of T_2.
    """
    c = np.zeros((3, 3, 3), dtype=complex)
    # E11 E11 = E11, E11 E12 = E12, E12 E22 = E12, E22 E22 = E22
    c[0, 0, 0] = 1
    c[0, 1, 1] = 1
    c[1, 2, 1] = 1
    c[2, 2, 2] = 1
    S = np.array([[0, 0, 1], [0, 1, 0], [1, 0, 0]], dtype=complex)
    return StarAlgebra(c, np.array([1, 0, 1]), S, "T_2")


def dual_numbers():
    """C[e]/(e^2) with e* = e."""
    c = np.zeros((2, 2, 2), dtype=complex)
    c[0, 0, 0] = 1
    c[0, 1, 1] = 1
    c[1, 0, 1] = 1
    return StarAlgebra(c, np.array([1, 0]), np.eye(2), "C[e]/e^2")


def tensor(A, B):
    """A (x) B with basis index i*dim(B) + j."""
    n, m = A.dim, B.dim
    c = np.einsum("ikp,jlq->ijklpq", A.c, B.c).reshape(n * m, n * m, n * m)
    S = np.kron(A.star_matrix, B.star_matrix)
    return StarAlgebra(c, np.kron(A.unit, B.unit), S, f"{A.name}(x){B.name}")


def direct_sum(A, B):
    n, m = A.dim, B.dim
    d = n + m
    c = np.zeros((d, d, d), dtype=complex)
    c[:n, :n, :n] = A.c
    c[n:, n:, n:] = B.c
    S = np.zeros((d, d), dtype=complex)
    S[:n, :n] = A.star_matrix
    S[n:, n:] = B.star_matrix
    return StarAlgebra(c, np.concatenate([A.unit, B.unit]), S, f"{A.name}+{B.name}")


# ---- morphisms -------------------------------------------------------------

@dataclass(eq=False)
class AlgebraMorphism:
    source: StarAlgebra
    target: StarAlgebra
    matrix: np.ndarray

    def __post_init__(self):
        self.matrix = np.asarray(self.matrix, dtype=complex).reshape(self.target.dim, self.source.dim)

    def __call__(self, x):
        return self.matrix @ x

    def then(self, other):
        """Composite ``other o self``."""
        return AlgebraMorphism(self.source, other.target, other.matrix @ self.matrix)

    def violations(self, tol=TOL_LIN):
        A, B, F = self.source, self.target, self.matrix
        out = []
        if B.dim == 0:
            return out
        if np.max(np.abs(F @ A.unit - B.unit)) > tol:
            out.append("unital")
        for i, j in itertools.product(range(A.dim), repeat=2):
            if np.max(np.abs(F @ A.c[i, j] - B.mul(F[:, i], F[:, j]))) > tol:
                out.append(f"multiplicative at ({i},{j})")
                break
        for i in range(A.dim):
            if np.max(np.abs(F @ A.star_matrix[:, i] - B.star(F[:, i]))) > tol:
                out.append(f"star-preserving at {i}")
                break
        return out

    def validate(self):
        bad = self.violations()
        if bad:
            raise InvalidMorphism(f"not a *-algebra morphism: {bad[0]}", failures=bad)
        return self

    def is_injective(self):
        return rank(self.matrix) == self.source.dim

    def is_surjective(self):
        return rank(self.matrix) == self.target.dim

    def is_isomorphism(self):
        return self.source.dim == self.target.dim and self.is_injective()


def identity_morphism(A):
    return AlgebraMorphism(A, A, np.eye(A.dim))


def point_map_morphism(A, B, point_map):
    """Pullback C^X -> C^Y along a map of points Y -> X (``point_map[y] = x``)."""
    F = np.zeros((B.dim, A.dim), dtype=complex)
    for y, x in enumerate(point_map):
        F[y, x] = 1
    return AlgebraMorphism(A, B, F)


# ---- ideals and quotients ------------------------------------------------

@dataclass(eq=False)
class TwoSidedStarIdeal:
    parent: StarAlgebra
    basis: np.ndarray

    def __post_init__(self):
        self.basis = np.asarray(self.basis, dtype=complex).reshape(self.parent.dim, -1)

    @property
    def dim(self):
        return self.basis.shape[1]

    def contains(self, x, tol=1e-7):
        return residual(self.basis, x) < tol

    def escape_witness(self, tol=1e-7):
        """First product or star leaving the subspace, or None."""
        A = self.parent
        for k in range(self.dim):
            b = self.basis[:, k]
            if not self.contains(A.star(b), tol):
                return ("star", k, None)
            for i in range(A.dim):
                e = A.basis(i)
                if not self.contains(A.mul(e, b), tol):
                    return ("left", k, i)
                if not self.contains(A.mul(b, e), tol):
                    return ("right", k, i)
        return None

    def validate(self):
        w = self.escape_witness()
        if w is not None:
            side, k, i = w
            raise NotAnIdeal(f"{side} product escapes the subspace", side=side, basis_vector=k, generator=i)
        return self

    def same_as(self, other):
        return same_subspace(self.basis, other.basis) and same_subspace(other.basis, self.basis)


def zero_ideal(A):
    return TwoSidedStarIdeal(A, np.zeros((A.dim, 0)))


def full_ideal(A):
    return TwoSidedStarIdeal(A, np.eye(A.dim))


def ideal_generated_by(A, gens):
    """Smallest two-sided *-ideal containing ``gens`` (span closure)."""
    vecs = [np.asarray(g, dtype=complex) for g in gens]
    basis = span_basis(vecs, A.dim)
    while True:
        new = [basis[:, k] for k in range(basis.shape[1])]
        for k in range(basis.shape[1]):
            b = basis[:, k]
            new.append(A.star(b))
            for i in range(A.dim):
                e = A.basis(i)
                new.append(A.mul(e, b))
                new.append(A.mul(b, e))
        nb = span_basis(new, A.dim)
        if nb.shape[1] == basis.shape[1]:
            return TwoSidedStarIdeal(A, nb)
        basis = nb


def morphism_kernel(f):
    return TwoSidedStarIdeal(f.source, null_basis(f.matrix))


def quotient_by_ideal(A, ideal):
    """A / I with its projection morphism; coordinates are those of I^perp."""
    ideal.validate()
    Q = complement_basis(ideal.basis, A.dim)
    P = Q.conj().T
    m = Q.shape[1]
    if m == 0:
        B = zero_algebra()
        return B, AlgebraMorphism(A, B, np.zeros((0, A.dim)))
    c = np.einsum("pi,qj,pqk,lk->ijl", Q, Q, A.c, P)
    S = P @ A.star_matrix @ np.conj(Q)
    B = StarAlgebra(c, P @ A.unit, S, f"{A.name}/I")
    return B, AlgebraMorphism(A, B, P)


def generated_subalgebra(A, vectors, cap=None):
    """Basis of the unital subalgebra generated by ``vectors``.

    Returns (basis, levels) where ``levels[d]`` is the dimension of the span
    of products of at most ``d`` generators; iteration stops when the span
    stabilises or ``cap`` is reached.
    """
    gens = span_basis([A.unit] + list(vectors), A.dim)
    basis = gens
    levels = [1 if A.dim else 0, basis.shape[1]]
    while cap is None or len(levels) - 1 < cap:
        new = [basis[:, k] for k in range(basis.shape[1])]
        for k in range(basis.shape[1]):
            for g in range(gens.shape[1]):
                new.append(A.mul(basis[:, k], gens[:, g]))
        nb = span_basis(new, A.dim)
        if nb.shape[1] == basis.shape[1]:
            break
        basis = nb
        levels.append(basis.shape[1])
    return basis, levels


def transport(A, g, name=None):
    """Isomorphic copy of ``A`` along the invertible matrix ``g`` (x -> g x).

    Returns (A', iso) with iso: A -> A'.
    """
    g = np.asarray(g, dtype=complex)
    gi = np.linalg.inv(g)
    c = np.einsum("ijk,ia,jb,lk->abl", A.c, gi, gi, g)
    S = g @ A.star_matrix @ np.conj(gi)
    B = StarAlgebra(c, g @ A.unit, S, name or f"{A.name}'")
    return B, AlgebraMorphism(A, B, g)


def random_invertible(n, rng):
    while True:
        g = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
        if n == 0 or abs(np.linalg.det(g)) > 1e-2:
            return g
