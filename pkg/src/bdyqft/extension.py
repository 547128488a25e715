"""The universal extension ``ext`` of an interior theory, by generators and relations.

An element of ``ext A(V)`` is a linear combination of decorated trees: a
tuple of interior regions ``(V_1, ..., V_n)`` inside ``V`` with a leaf
``a_k`` in ``A(V_k)`` each.  Products concatenate tuples; the relations say
that a contiguous block of leaves sitting inside a common interior region
may be replaced by the product of their pushforwards there (the empty block
gives the unit).

Elements are stored multilinearly: a dict from tuples of region ids to a
complex tensor with one axis per leaf, in the basis of the leaf algebra.

Two independent computations are provided:

* :class:`ExtAlgebra` rewrites to a normal form (push every leaf to the
  largest interior region above it inside ``V``, merge equal neighbours,
  split off unit components);
* :func:`brute_force_quotient` materializes all trees up to ``max_len``
  leaves and divides out every relation instance by linear algebra.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from . import geometry as geo
from .algebra import (
    TOL_LIN,
    AlgebraMorphism,
    StarAlgebra,
    complement_basis,
    rank,
    span_basis,
)
from .catalog import SCOPE, interior_catalog
from .errors import (
    AmbiguousNormalForm,
    IdealNotTrivialOnInterior,
    MissingFactorizationRegion,
    NotAdditive,
    TruncationUnsound,
)
from .report import Report
from .theory import (
    IdealFunctor,
    Theory,
    TheoryMorphism,
    additivity_at,
    is_trivial_on_interior,
    kernel_ideal,
    quotient_theory,
    restrict_theory,
)

ZERO = 1e-12


def _along(M, X, k):
    """Apply matrix M to axis k of tensor X."""
    return np.moveaxis(np.tensordot(M, X, axes=([1], [k])), 0, k)


def _contract_products(X, c):
    """Multiply out all axes of X (each in coordinates of one algebra)."""
    while X.ndim > 1:
        X = np.einsum("ij...,ijk->k...", X, c)
    return X


def _add(out, shape, X):
    if shape in out:
        out[shape] = out[shape] + X
    else:
        out[shape] = X


def _clean(elem):
    return {s: X for s, X in elem.items() if np.max(np.abs(X), initial=0.0) > ZERO}


# ---- tree serialization -------------------------------------------------------

def tree_to_json(shape, leaves):
    return {"regions": list(shape), "leaves": [[[z.real, z.imag] for z in np.asarray(a, complex)] for a in leaves]}


def tree_from_json(doc):
    leaves = [np.array([complex(re, im) for re, im in leaf]) for leaf in doc["leaves"]]
    return tuple(doc["regions"]), leaves


def element_to_json(elem):
    return [
        {"regions": list(s), "shape": list(X.shape), "re": X.real.ravel().tolist(), "im": X.imag.ravel().tolist()}
        for s, X in sorted(elem.items())
    ]


def element_from_json(doc):
    out = {}
    for item in doc:
        X = (np.array(item["re"]) + 1j * np.array(item["im"])).reshape(item["shape"])
        out[tuple(item["regions"])] = X
    return out


# ---- the normal-form engine ---------------------------------------------------

class ExtAlgebra:
    """``ext A(V)`` for an interior theory ``A`` and a stable region ``V``.

    ``A.catalog`` is the interior catalog, ``L`` the ambient localized catalog
    containing ``V``.  ``strategy="top"`` (default) pushes each leaf to the
    unique largest interior region above it inside V; ``"smallest"`` merges
    only blocks of two or more leaves into their smallest common region.
    """

    def __init__(self, A, L, V, max_len=4, strategy="top"):
        self.A, self.L, self.V = A, L, V
        self.max_len = max_len
        self.strategy = strategy
        IC = A.catalog
        self.sub = [r for r in IC.ids if L.is_morphism(r, V)]
        self.order = {r: k for k, r in enumerate(self.sub)}
        self._check_factorization()
        self.top = {}
        for r in self.sub:
            ups = [w for w in self.sub if IC.is_morphism(r, w)]
            maxes = [w for w in ups if not any(w2 != w and IC.is_morphism(w, w2) for w2 in ups)]
            if len(maxes) != 1:
                if strategy == "top":
                    raise AmbiguousNormalForm(f"{r} has {len(maxes)} maximal interior regions above it in {V}", region=r, maxima=maxes)
                maxes = maxes[:1]
            self.top[r] = maxes[0]
        self.phi, self.kbasis = {}, {}
        for r in self.sub:
            u = A[r].unit
            self.phi[r] = np.conj(u) / np.vdot(u, u).real
            self.kbasis[r] = complement_basis(u.reshape(-1, 1), A[r].dim)
        self._build_basis()

    def _check_factorization(self):
        IC, M = self.A.catalog, self.L.spacetime
        for a, b in itertools.combinations(self.sub, 2):
            if IC.are_disjoint(a, b):
                w = geo.cauchy_development(M, geo.union(IC[a], IC[b]))
                if IC.find(w) is None:
                    raise MissingFactorizationRegion(f"D({a} u {b}) is not in the catalog", pair=[a, b], region=repr(w))

    # -- construction of elements
    def unit(self):
        return {(): np.array(1.0 + 0j)}

    def zero(self):
        return {}

    def tree(self, shape, leaves):
        shape = tuple(shape)
        X = np.array(1.0 + 0j)
        for a in leaves:
            X = np.multiply.outer(X, np.asarray(a, dtype=complex))
        return {shape: X}

    def add(self, *elems, coeffs=None):
        out = {}
        coeffs = coeffs or [1] * len(elems)
        for e, c in zip(elems, coeffs):
            for s, X in e.items():
                _add(out, s, c * X)
        return _clean(out)

    # -- rewriting
    def _strip_units(self, shape, X):
        out = {}
        stack = [(shape, X, 0)]
        while stack:
            sh, Y, k = stack.pop()
            if k == len(sh):
                _add(out, sh, Y)
                continue
            r = sh[k]
            u, phi = self.A[r].unit, self.phi[r]
            unit_part = np.tensordot(phi, Y, axes=([0], [k]))
            if np.max(np.abs(unit_part), initial=0.0) > ZERO:
                stack.append((sh[:k] + sh[k + 1:], unit_part, k))
            proj = np.eye(len(u)) - np.outer(u, phi)
            rest = _along(proj, Y, k)
            if np.max(np.abs(rest), initial=0.0) > ZERO:
                stack.append((sh, rest, k + 1))
        return out

    def _push(self, shape, X):
        sh = list(shape)
        for k, r in enumerate(shape):
            t = self.top[r]
            if t != r:
                X = _along(self.A.map(r, t).matrix, X, k)
                sh[k] = t
        return tuple(sh), X

    def _merge_block(self, shape, X, k, l, w):
        """Replace slots k..l by their product in region w."""
        for j in range(k, l + 1):
            if shape[j] != w:
                X = _along(self.A.map(shape[j], w).matrix, X, j)
        c = self.A[w].c
        for _ in range(l - k):
            X = np.moveaxis(X, (k, k + 1), (0, 1))
            X = np.einsum("ij...,ijm->m...", X, c)
            X = np.moveaxis(X, 0, k)
        return shape[:k] + (w,) + shape[l + 1:], X

    def _find_merge(self, shape):
        IC = self.A.catalog
        n = len(shape)
        if self.strategy == "top":
            for k in range(n - 1):
                if shape[k] == shape[k + 1]:
                    l = k + 1
                    while l + 1 < n and shape[l + 1] == shape[k]:
                        l += 1
                    return k, l, shape[k]
            return None
        for k in range(n - 1):
            best = None
            for l in range(k + 1, n):
                ups = [w for w in self.sub if all(IC.is_morphism(r, w) for r in shape[k:l + 1])]
                if not ups:
                    break
                mins = [w for w in ups if not any(w2 != w and IC.is_morphism(w2, w) for w2 in ups)]
                best = (k, l, mins[0])
            if best:
                return best
        return None

    def _find_swap(self, shape):
        IC = self.A.catalog
        for k in range(len(shape) - 1):
            a, b = shape[k], shape[k + 1]
            if a != b and IC.are_disjoint(a, b) and self.order[a] > self.order[b]:
                return k
        return None

    def normal_form(self, elem):
        out = {}
        queue = list(elem.items())
        while queue:
            shape, X = queue.pop()
            if np.max(np.abs(X), initial=0.0) <= ZERO:
                continue
            if self.strategy == "top":
                shape, X = self._push(shape, X)
            for sh, Y in self._strip_units(shape, X).items():
                m = self._find_merge(sh)
                if m is not None:
                    queue.append(self._merge_block(sh, Y, *m))
                    continue
                k = self._find_swap(sh)
                if k is not None:
                    perm = list(range(len(sh)))
                    perm[k], perm[k + 1] = perm[k + 1], perm[k]
                    queue.append((tuple(sh[p] for p in perm), np.transpose(Y, perm)))
                    continue
                _add(out, sh, Y)
        return _clean(out)

    # -- algebra operations
    def mul(self, x, y):
        out = {}
        for s1, X1 in x.items():
            for s2, X2 in y.items():
                _add(out, s1 + s2, np.multiply.outer(X1, X2))
        return self.normal_form(out)

    def star(self, x):
        out = {}
        for s, X in x.items():
            Y = np.conj(X)
            for k, r in enumerate(s):
                Y = _along(self.A[r].star_matrix, Y, k)
            Y = np.transpose(Y, tuple(reversed(range(len(s)))))
            _add(out, tuple(reversed(s)), Y)
        return self.normal_form(out)

    # -- coordinates on irreducible shapes
    def _irreducible(self, shape):
        if self._find_merge(shape) is not None or self._find_swap(shape) is not None:
            return False
        if self.strategy == "top" and any(self.top[r] != r for r in shape):
            return False
        return True

    def _build_basis(self):
        letters = [r for r in self.sub if self.kbasis[r].shape[1] > 0]
        if self.strategy == "top":
            letters = [r for r in letters if self.top[r] == r]
        self.shapes = []
        self.offset = {}
        n = 0
        for k in range(self.max_len + 1):
            for sh in itertools.product(letters, repeat=k):
                if not self._irreducible(sh):
                    continue
                self.shapes.append(sh)
                self.offset[sh] = n
                n += int(np.prod([self.kbasis[r].shape[1] for r in sh], dtype=int))
        self.dim = n

    def coords(self, elem):
        v = np.zeros(self.dim, dtype=complex)
        for s, X in elem.items():
            if s not in self.offset:
                if len(s) > self.max_len:
                    raise TruncationUnsound(f"normal form of length {len(s)} exceeds max_len={self.max_len}", shape=list(s))
                raise AmbiguousNormalForm(f"shape {s} is not irreducible", shape=list(s))
            Y = X
            for k, r in enumerate(s):
                Y = _along(self.kbasis[r].conj().T, Y, k)
            o = self.offset[s]
            v[o:o + Y.size] += Y.ravel()
        return v

    def basis_element(self, idx):
        for s in reversed(self.shapes):
            if self.offset[s] <= idx:
                dims = [self.kbasis[r].shape[1] for r in s]
                multi = np.unravel_index(idx - self.offset[s], dims) if s else ()
                leaves = [self.kbasis[r][:, m] for r, m in zip(s, multi)]
                return self.tree(s, leaves)
        raise IndexError(idx)

    def element(self, v):
        out = {}
        for idx in np.nonzero(np.abs(v) > ZERO)[0]:
            for s, X in self.basis_element(idx).items():
                _add(out, s, v[idx] * X)
        return out

    def as_algebra(self):
        """Finite-dimensional *-algebra, or TruncationUnsound if products leave the basis."""
        n = self.dim
        basis = [self.basis_element(i) for i in range(n)]
        c = np.zeros((n, n, n), dtype=complex)
        for i, j in itertools.product(range(n), repeat=2):
            c[i, j] = self.coords(self.mul(basis[i], basis[j]))
        S = np.column_stack([self.coords(self.star(b)) for b in basis]) if n else np.zeros((0, 0))
        return StarAlgebra(c, self.coords(self.unit()), S, f"ext({self.V})")

    def raw_trees(self, max_len=None):
        """All basis trees (leaves are basis vectors of the leaf algebras)."""
        max_len = self.max_len if max_len is None else max_len
        for k in range(max_len + 1):
            for sh in itertools.product(self.sub, repeat=k):
                dims = [self.A[r].dim for r in sh]
                for multi in itertools.product(*[range(d) for d in dims]):
                    yield sh, multi

    def span_dimension(self, max_len=None):
        """Rank of the normal forms of all trees with at most ``max_len`` leaves."""
        rows = []
        for sh, multi in self.raw_trees(max_len):
            leaves = [self.A[r].basis(m) for r, m in zip(sh, multi)]
            rows.append(self.coords(self.normal_form(self.tree(sh, leaves))))
        return rank(np.array(rows)) if rows else 0


def evaluate(elem, B, V):
    """Evaluate trees in B(V): [i, b] -> product of B(i)(b_k)."""
    BV = B[V]
    out = np.zeros(BV.dim, dtype=complex)
    for s, X in elem.items():
        if not s:
            out += complex(X) * BV.unit
            continue
        Y = X
        for k, r in enumerate(s):
            Y = _along(B.map(r, V).matrix, Y, k)
        out += _contract_products(Y, BV.c)
    return out


# ---- brute-force oracle ---------------------------------------------------------

@dataclass
class BruteForceQuotient:
    dim: int
    n_trees: int
    n_relations: int
    index: dict
    proj: np.ndarray
    ext: ExtAlgebra

    def vector(self, shape, multi):
        return self.index[(shape, multi)]

    def tree_vector(self, elem):
        """Tree-space vector of an element whose shapes are within max_len."""
        v = np.zeros(self.n_trees, dtype=complex)
        for s, X in elem.items():
            for multi in itertools.product(*[range(n) for n in X.shape]):
                if X[multi] != 0:
                    if (s, multi) not in self.index:
                        raise TruncationUnsound("tree longer than max_len", shape=list(s))
                    v[self.index[(s, multi)]] += X[multi]
        return v

    def as_algebra(self):
        """Quotient multiplication using representatives of at most max_len//2 leaves."""
        E = self.ext
        half = E.max_len // 2
        low = [k for (s, _), k in self.index.items() if len(s) <= half]
        P = self.proj[:, low]
        if rank(P) < self.dim:
            raise TruncationUnsound("short trees do not span the truncated quotient", max_len=E.max_len)
        reps = np.linalg.pinv(P)
        keys = {k: key for key, k in self.index.items()}
        d = self.dim

        def rep_elem(y):
            x = reps @ y
            out = {}
            for j, k in enumerate(low):
                if abs(x[j]) > ZERO:
                    s, multi = keys[k]
                    leaves = [E.A[r].basis(m) for r, m in zip(s, multi)]
                    for sh, X in E.tree(s, leaves).items():
                        _add(out, sh, x[j] * X)
            return out

        eye = np.eye(d, dtype=complex)
        elems = [rep_elem(eye[i]) for i in range(d)]
        c = np.zeros((d, d, d), dtype=complex)
        for i, j in itertools.product(range(d), repeat=2):
            prod = {}
            for s1, X1 in elems[i].items():
                for s2, X2 in elems[j].items():
                    _add(prod, s1 + s2, np.multiply.outer(X1, X2))
            c[i, j] = self.proj @ self.tree_vector(prod)
        S = np.zeros((d, d), dtype=complex)
        for i in range(d):
            st = {}
            for s, X in elems[i].items():
                Y = np.conj(X)
                for k, r in enumerate(s):
                    Y = _along(E.A[r].star_matrix, Y, k)
                _add(st, tuple(reversed(s)), np.transpose(Y, tuple(reversed(range(len(s))))))
            S[:, i] = self.proj @ self.tree_vector(st)
        unit = self.proj @ self.tree_vector(E.unit())
        return StarAlgebra(c, unit, S, f"bf({E.V})")


def _subtuples(IC, sub, w, max_m):
    inside = [r for r in sub if IC.is_morphism(r, w)]
    for m in range(max_m + 1):
        yield from itertools.product(inside, repeat=m)


def _product_matrix(A, shape, w):
    """Matrix from the leaf tensor space of ``shape`` to A(w): product of pushforwards."""
    Aw = A[w]
    if not shape:
        return Aw.unit.reshape(-1, 1)
    cols = []
    for multi in itertools.product(*[range(A[r].dim) for r in shape]):
        x = A.map(shape[0], w).matrix[:, multi[0]]
        for r, m in zip(shape[1:], multi[1:]):
            x = Aw.mul(x, A.map(r, w).matrix[:, m])
        cols.append(x)
    return np.column_stack(cols)


def brute_force_quotient(A, L, V, max_len=3):
    """Span of all trees with <= max_len leaves modulo every relation instance."""
    E = ExtAlgebra(A, L, V, max_len=max_len, strategy="smallest")
    IC = A.catalog
    sub = E.sub
    index = {}
    for k in range(max_len + 1):
        for sh in itertools.product(sub, repeat=k):
            for multi in itertools.product(*[range(A[r].dim) for r in sh]):
                index[(sh, multi)] = len(index)
    N = len(index)

    def block(shape):
        return [index[(shape, m)] for m in itertools.product(*[range(A[r].dim) for r in shape])]

    rel_rows = []
    for n in range(1, max_len + 1):
        for outer in itertools.product(sub, repeat=n):
            choices = [list(_subtuples(IC, sub, w, max_len)) for w in outer]
            for subs in itertools.product(*choices):
                total = sum(len(s) for s in subs)
                if total > max_len:
                    continue
                if all(s == (w,) for s, w in zip(subs, outer)):
                    continue
                P = np.ones((1, 1), dtype=complex)
                for s, w in zip(subs, outer):
                    P = np.kron(P, _product_matrix(A, s, w))
                lhs = block(tuple(r for s in subs for r in s))
                rhs = block(outer)
                R = np.zeros((len(lhs), N), dtype=complex)
                R[np.arange(len(lhs)), lhs] = 1
                R[:, rhs] -= P.T
                rel_rows.append(R)
    if rel_rows:
        R = np.vstack(rel_rows)
        rel = span_basis([R[k] for k in range(R.shape[0])], N) if R.shape[0] < 4 * N else _row_space(R)
    else:
        R = np.zeros((0, N))
        rel = np.zeros((N, 0), dtype=complex)
    Q = complement_basis(rel, N)
    return BruteForceQuotient(Q.shape[1], N, R.shape[0], index, Q.conj().T, E)


def _row_space(R):
    # Gram route keeps the SVD at N x N even with many relation rows
    G = R.conj().T @ R
    w, U = np.linalg.eigh(G)
    keep = w > TOL_LIN * max(1.0, w[-1])
    # eigenvectors of R^H R span the conjugated rows
    return U[:, keep].conj()


# ---- ext / res as functors ------------------------------------------------------

@dataclass(eq=False)
class ExtTheory:
    theory: Theory
    engines: dict
    interior: Theory


def ext_morphism_matrix(E1, E2):
    cols = [E2.coords(E2.normal_form(E1.basis_element(i))) for i in range(E1.dim)]
    return np.column_stack(cols) if cols else np.zeros((E2.dim, 0), dtype=complex)


def ext_theory(A, L, max_len=4):
    """ext A on the localized catalog L, materialized via normal forms."""
    engines = {V: ExtAlgebra(A, L, V, max_len=max_len) for V in L.ids}
    algs = {V: E.as_algebra() for V, E in engines.items()}
    maps = {}
    for a, b in L.morphisms():
        maps[(a, b)] = AlgebraMorphism(algs[a], algs[b], ext_morphism_matrix(engines[a], engines[b]))
    T = Theory(L, algs, maps, f"ext({A.name})")
    return ExtTheory(T, engines, A)


def res_theory(B, Int=None):
    Int = Int or interior_catalog(B.catalog)
    return restrict_theory(B, Int)


def unit_component(X: ExtTheory, v):
    """A(v) -> res ext A(v), a -> [id_v, a]."""
    A, E = X.interior, X.engines[v]
    cols = [E.coords(E.normal_form(E.tree((v,), [A[v].basis(i)]))) for i in range(A[v].dim)]
    return AlgebraMorphism(A[v], X.theory[v], np.column_stack(cols))


def unit_morphism(X: ExtTheory):
    """eta_A: A -> res ext A."""
    A = X.interior
    resext = restrict_theory(X.theory, A.catalog)
    return TheoryMorphism(A, resext, {v: unit_component(X, v) for v in A.ids})


def counit_component(B, X: ExtTheory, V):
    """eps_B(V): ext res B(V) -> B(V), [i, b] -> B(i)(b)."""
    E = X.engines[V]
    cols = [evaluate(E.basis_element(i), B, V) for i in range(E.dim)]
    M = np.column_stack(cols) if cols else np.zeros((B[V].dim, 0), dtype=complex)
    return AlgebraMorphism(X.theory[V], B[V], M)


def counit_morphism(B, X: ExtTheory):
    return TheoryMorphism(X.theory, B, {V: counit_component(B, X, V) for V in B.ids})


def ext_of_morphism(f: TheoryMorphism, X1: ExtTheory, X2: ExtTheory):
    """ext f: ext A -> ext A', acting leafwise on trees."""
    comps = {}
    for V in X1.theory.ids:
        E1, E2 = X1.engines[V], X2.engines[V]
        cols = []
        for i in range(E1.dim):
            out = {}
            for s, X in E1.basis_element(i).items():
                Y = X
                for k, r in enumerate(s):
                    Y = _along(f[r].matrix, Y, k)
                _add(out, s, Y)
            cols.append(E2.coords(E2.normal_form(out)))
        M = np.column_stack(cols) if cols else np.zeros((E2.dim, 0), dtype=complex)
        comps[V] = AlgebraMorphism(X1.theory[V], X2.theory[V], M)
    return TheoryMorphism(X1.theory, X2.theory, comps)


def check_triangle_identities(A, B, L, max_len=4, tol=1e-9):
    """Triangle identities of ext -| res on the given fixtures."""
    rep = Report(scope=SCOPE)
    XA = ext_theory(A, L, max_len)
    eta = unit_morphism(XA)
    rep.extend(eta.check(tol), prefix="unit: ")
    # eps_{ext A} o ext(eta_A) = id_{ext A}
    resext = restrict_theory(XA.theory, A.catalog)
    XX = ext_theory(resext, L, max_len)
    ext_eta = ext_of_morphism(eta, XA, XX)
    eps_ext = counit_morphism(XA.theory, XX)
    for V in L.ids:
        M = eps_ext[V].matrix @ ext_eta[V].matrix
        err = float(np.max(np.abs(M - np.eye(M.shape[0])), initial=0.0))
        rep.add(f"triangle eps.ext(eta) at {V}", err <= tol, witness=err, tolerance=tol)
    # res(eps_B) o eta_{res B} = id_{res B}
    resB = res_theory(B, A.catalog)
    XB = ext_theory(resB, L, max_len)
    etaB = unit_morphism(XB)
    epsB = counit_morphism(B, XB)
    rep.extend(epsB.check(tol), prefix="counit: ")
    for v in resB.ids:
        M = epsB[v].matrix @ etaB[v].matrix
        err = float(np.max(np.abs(M - np.eye(M.shape[0])), initial=0.0))
        rep.add(f"triangle res(eps).eta at {v}", err <= tol, witness=err, tolerance=tol)
    return rep


# ---- characterization and the IQFT equivalence ------------------------------------

def characterize(B, max_len=4, tol=TOL_LIN):
    """Per object: additive-at-V and lambda-iso-at-V, computed independently."""
    L = B.catalog
    Int = interior_catalog(L)
    resB = restrict_theory(B, Int)
    X = ext_theory(resB, L, max_len)
    eps = counit_morphism(B, X)
    ker = kernel_ideal(eps)
    rep = Report(scope=SCOPE + f"; normal forms truncated at max_len={max_len}")
    rows = {}
    for V in L.ids:
        f = eps[V]
        lam_iso = rank(f.matrix, tol) == B[V].dim
        add, gen_dim, levels = additivity_at(B, V)
        rows[V] = {
            "additive": add,
            "lambda_iso": lam_iso,
            "ext_res_dim": X.theory[V].dim,
            "dim": B[V].dim,
            "kernel_dim": ker[V].dim,
            "generated_dim": gen_dim,
            "saturation_levels": levels,
        }
        rep.add(f"{V}: additive <=> lambda iso", add == lam_iso, witness=rows[V])
    rep.add("ker eps is an ideal", not ker.failures())
    rep.add("ker eps is trivial on the interior", is_trivial_on_interior(ker))
    return rep, rows


@dataclass(eq=False)
class IQFTPair:
    A: Theory
    ideal: IdealFunctor
    ext: ExtTheory


def functor_Q(p: IQFTPair):
    if not is_trivial_on_interior(p.ideal):
        raise IdealNotTrivialOnInterior("ideal has a non-zero interior component", dims=p.ideal.dims())
    return quotient_theory(p.ext.theory, p.ideal)


def functor_S(B, max_len=4):
    """(res B, ker eps_B) for an additive theory B."""
    L = B.catalog
    bad = [V for V in L.ids if not additivity_at(B, V)[0]]
    if bad:
        raise NotAdditive("theory is not additive from the interior", objects=bad)
    resB = res_theory(B)
    X = ext_theory(resB, L, max_len)
    ker = kernel_ideal(counit_morphism(B, X))
    return IQFTPair(resB, ker, X)


def roundtrip_check(B=None, pair=None, max_len=4, tol=1e-9):
    """QS(B) ~ B via lambda, and SQ(A, I) ~ (A, I) with q equal to the projection."""
    rep = Report(scope=SCOPE + f"; max_len={max_len}")
    if B is not None:
        p = functor_S(B, max_len)
        Q, proj = functor_Q(p)
        eps = counit_morphism(B, p.ext)
        comps = {}
        for V in B.ids:
            lift = proj[V].matrix.conj().T
            comps[V] = AlgebraMorphism(Q[V], B[V], eps[V].matrix @ lift)
            rep.add(f"QS: lambda at {V} is an isomorphism", comps[V].is_isomorphism(),
                    witness={"dims": [Q[V].dim, B[V].dim]})
        lam = TheoryMorphism(Q, B, comps)
        rep.extend(lam.check(tol), prefix="QS: lambda ")
    if pair is not None:
        A, I, XA = pair.A, pair.ideal, pair.ext
        Q, proj = functor_Q(pair)
        resQ = restrict_theory(Q, A.catalog)
        eta = unit_morphism(XA)
        tilde = TheoryMorphism(A, resQ, {
            v: AlgebraMorphism(A[v], resQ[v], proj[v].matrix @ eta[v].matrix) for v in A.ids
        })
        for v in A.ids:
            rep.add(f"SQ: res Q at {v} is isomorphic to A", tilde[v].is_isomorphism())
        XQ = ext_theory(resQ, Q.catalog, max_len)
        ext_t = ext_of_morphism(tilde, XA, XQ)
        epsQ = counit_morphism(Q, XQ)
        kerQ = kernel_ideal(epsQ)
        for V in Q.ids:
            q = epsQ[V].matrix @ ext_t[V].matrix
            err = float(np.max(np.abs(q - proj[V].matrix), initial=0.0))
            rep.add(f"SQ: mediating map at {V} equals the canonical projection", err <= tol, witness=err, tolerance=tol)
            rep.add(f"SQ: ext(eta) at {V} is an isomorphism", ext_t[V].is_isomorphism())
            img = ext_t[V].matrix @ I[V].basis
            ok = img.shape[1] == kerQ[V].dim and all(kerQ[V].contains(img[:, k]) for k in range(img.shape[1]))
            rep.add(f"SQ: ext(eta) maps I onto ker eps at {V}", ok, witness={"dim_I": I[V].dim, "dim_ker": kerQ[V].dim})
    return rep


def check_causality_ext(X: ExtTheory):
    from .theory import check_causality

    return check_causality(X.theory)


def ideal_from_generators(T, gens):
    """Ideal functor generated objectwise by ``gens[V]`` and pushed along inclusions."""
    from .algebra import ideal_generated_by

    ideals = {}
    order = sorted(T.ids, key=lambda v: sum(1 for a in T.ids if T.catalog.is_morphism(a, v)))
    for V in order:
        vecs = list(gens.get(V, []))
        for a in T.ids:
            if a != V and T.catalog.is_morphism(a, V) and a in ideals:
                img = T.map(a, V).matrix @ ideals[a].basis
                vecs.extend(img[:, k] for k in range(img.shape[1]))
        ideals[V] = ideal_generated_by(T[V], vecs)
    return IdealFunctor(T, ideals)

