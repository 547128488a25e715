"""Algebra-valued functors on finite region catalogs.

A :class:`Theory` assigns a :class:`StarAlgebra` to every catalog object and
an algebra morphism to every inclusion.  The same class serves both axiom
systems: on a localized catalog the time-slice axiom holds by construction,
on a full catalog it is checked by :func:`check_time_slice`.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .algebra import (
    TOL_LIN,
    AlgebraMorphism,
    generated_subalgebra,
    identity_morphism,
    quotient_by_ideal,
    rank,
    transport,
    zero_ideal,
)
from .catalog import SCOPE, Catalog
from .errors import NotAnIdealFunctor
from .report import Report


@dataclass(eq=False)
class Theory:
    catalog: Catalog
    algebras: dict
    maps: dict = field(default_factory=dict)
    name: str = "theory"

    def __post_init__(self):
        # fill in identities and compose along chains if only covers were given
        for rid in self.catalog.ids:
            self.maps.setdefault((rid, rid), identity_morphism(self.algebras[rid]))

    def __getitem__(self, rid):
        return self.algebras[rid]

    def map(self, a, b):
        return self.maps[(a, b)]

    @property
    def ids(self):
        return self.catalog.ids

    def dims(self):
        return {rid: self.algebras[rid].dim for rid in self.ids}


def theory_from_covers(catalog, algebras, cover_maps, name="theory"):
    """Build all maps by composing the given ones along inclusion chains.

    ``cover_maps`` maps (a, b) to a matrix or AlgebraMorphism for enough
    inclusions that every morphism is a composite of them.
    """
    maps = {}
    for rid in catalog.ids:
        maps[(rid, rid)] = identity_morphism(algebras[rid])
    for (a, b), m in cover_maps.items():
        if not isinstance(m, AlgebraMorphism):
            m = AlgebraMorphism(algebras[a], algebras[b], m)
        maps[(a, b)] = m
    changed = True
    while changed:
        changed = False
        for a, b in catalog.morphisms():
            if (a, b) in maps:
                continue
            for c in catalog.ids:
                if (a, c) in maps and (c, b) in maps and c not in (a, b):
                    maps[(a, b)] = maps[(a, c)].then(maps[(c, b)])
                    changed = True
                    break
    missing = [m for m in catalog.morphisms() if m not in maps]
    if missing:
        raise ValueError(f"cannot generate maps for {missing}")
    return Theory(catalog, dict(algebras), maps, name)


def check_functoriality(T, tol=TOL_LIN):
    rep = Report(scope=SCOPE)
    C = T.catalog
    for rid in C.ids:
        bad = T[rid].violations(tol)
        rep.add(f"{rid}: algebra axioms", not bad, witness=bad or None, tolerance=tol)
        ident = np.max(np.abs(T.map(rid, rid).matrix - np.eye(T[rid].dim)), initial=0.0)
        rep.add(f"{rid}: identity", ident <= tol, witness=float(ident), tolerance=tol)
    for a, b in C.morphisms():
        bad = T.map(a, b).violations(tol)
        rep.add(f"{a}->{b}: morphism axioms", not bad, witness=bad or None, tolerance=tol)
    for a, b, c in itertools.product(C.ids, repeat=3):
        if C.is_morphism(a, b) and C.is_morphism(b, c) and len({a, b, c}) == 3:
            d = T.map(b, c).matrix @ T.map(a, b).matrix - T.map(a, c).matrix
            err = float(np.max(np.abs(d), initial=0.0))
            rep.add(f"{a}->{b}->{c}: composition", err <= tol, witness=err, tolerance=tol)
    return rep


def check_causality(T, tol=TOL_LIN):
    """Images of causally disjoint regions commute in every common target."""
    rep = Report(scope=SCOPE)
    for a, b, c in T.catalog.orthogonal_pairs():
        A, B, Cc = T[a], T[b], T[c]
        fa, fb = T.map(a, c).matrix, T.map(b, c).matrix
        worst, where = 0.0, None
        for i, j in itertools.product(range(A.dim), range(B.dim)):
            x, y = fa[:, i], fb[:, j]
            err = float(np.max(np.abs(Cc.commutator(x, y)), initial=0.0))
            if err > worst:
                worst, where = err, [i, j]
        rep.add(f"causality {a},{b} in {c}", worst <= tol, witness={"max_commutator": worst, "basis_pair": where}, tolerance=tol)
    return rep


def check_time_slice(T, tol=TOL_LIN):
    rep = Report(scope=SCOPE)
    for a, b in T.catalog.morphisms():
        if a != b and T.catalog.cauchy[(a, b)]:
            f = T.map(a, b)
            rep.add(f"time-slice {a}->{b}", f.is_isomorphism(), witness={"rank": rank(f.matrix), "dims": [f.source.dim, f.target.dim]})
    return rep


# ---- morphisms of theories ------------------------------------------------

@dataclass(eq=False)
class TheoryMorphism:
    source: Theory
    target: Theory
    comps: dict

    def __getitem__(self, rid):
        return self.comps[rid]

    def naturality_defect(self):
        worst = 0.0
        for a, b in self.source.catalog.morphisms():
            lhs = self.target.map(a, b).matrix @ self.comps[a].matrix
            rhs = self.comps[b].matrix @ self.source.map(a, b).matrix
            worst = max(worst, float(np.max(np.abs(lhs - rhs), initial=0.0)))
        return worst

    def check(self, tol=TOL_LIN):
        rep = Report(scope=SCOPE)
        for rid, f in self.comps.items():
            bad = f.violations(tol)
            rep.add(f"{rid}: component is a morphism", not bad, witness=bad or None, tolerance=tol)
        d = self.naturality_defect()
        rep.add("naturality squares commute", d <= tol, witness=d, tolerance=tol)
        return rep

    def is_isomorphism(self):
        return all(f.is_isomorphism() for f in self.comps.values())


def identity_theory_morphism(T):
    return TheoryMorphism(T, T, {rid: identity_morphism(T[rid]) for rid in T.ids})


def conjugate_theory(T, rng):
    """Isomorphic copy of T along random invertible matrices, with the iso."""
    from .algebra import random_invertible

    algs, isos = {}, {}
    for rid in T.ids:
        A2, iso = transport(T[rid], random_invertible(T[rid].dim, rng))
        algs[rid], isos[rid] = A2, iso
    maps = {}
    for a, b in T.catalog.morphisms():
        gi = np.linalg.inv(isos[a].matrix) if T[a].dim else np.zeros((0, 0))
        maps[(a, b)] = AlgebraMorphism(algs[a], algs[b], isos[b].matrix @ T.map(a, b).matrix @ gi)
    T2 = Theory(T.catalog, algs, maps, T.name + "'")
    return T2, TheoryMorphism(T, T2, isos)


# ---- the equivalence between the two axiom systems --------------------------

def pullback_D(T, D):
    """U -> T(D(U)) on the full catalog ``D.source``."""
    C = D.source
    algs = {u: T[D(u)] for u in C.ids}
    maps = {(a, b): T.map(*D.on_morphism(a, b)) for a, b in C.morphisms()}
    # rebuild with the right source/target objects
    maps = {m: AlgebraMorphism(algs[m[0]], algs[m[1]], f.matrix) for m, f in maps.items()}
    return Theory(C, algs, maps, f"{T.name}oD")


def pullback_I(T2, L):
    """Restriction of a full-catalog theory to the stable sub-catalog ``L``."""
    algs = {v: T2[v] for v in L.ids}
    maps = {(a, b): T2.map(a, b) for a, b in L.morphisms()}
    return Theory(L, algs, maps, f"{T2.name}|loc")


def restrict_theory(T, sub):
    algs = {v: T[v] for v in sub.ids}
    maps = {(a, b): T.map(a, b) for a, b in sub.morphisms()}
    return Theory(sub, algs, maps, f"{T.name}|{sub.name}")


def check_equivalence_roundtrips(T, T2, L, D, tol=TOL_LIN):
    """I*D*T = T on the nose; D*I*T2 ~ T2 via T2(eta_U)."""
    rep = Report(scope=SCOPE)
    back = pullback_I(pullback_D(T, D), L)
    for v in L.ids:
        same = back[v] is T[v]
        rep.add(f"I*D* T at {v} is T({v})", same)
    for a, b in L.morphisms():
        err = float(np.max(np.abs(back.map(a, b).matrix - T.map(a, b).matrix), initial=0.0))
        rep.add(f"I*D* T on {a}->{b}", err <= tol, witness=err, tolerance=tol)
    rt = pullback_D(pullback_I(T2, L), D)
    eta = TheoryMorphism(T2, rt, {u: AlgebraMorphism(T2[u], rt[u], T2.map(u, D(u)).matrix) for u in T2.ids})
    for u in T2.ids:
        rep.add(f"unit T2(eta_{u}) is an isomorphism", eta[u].is_isomorphism())
    d = eta.naturality_defect()
    rep.add("unit is natural", d <= tol, witness=d, tolerance=tol)
    rep.extend(check_time_slice(pullback_D(T, D)), prefix="pullback_D: ")
    rep.extend(check_causality(pullback_D(T, D)), prefix="pullback_D: ")
    return rep


# ---- ideals ---------------------------------------------------------------------

@dataclass(eq=False)
class IdealFunctor:
    theory: Theory
    ideals: dict

    def __getitem__(self, rid):
        return self.ideals[rid]

    def failures(self, tol=1e-7):
        out = []
        T = self.theory
        for rid in T.ids:
            I = self.ideals[rid]
            if I.parent is not T[rid]:
                out.append((rid, "parent algebra mismatch"))
                continue
            if I.escape_witness(tol) is not None:
                out.append((rid, "not a two-sided star ideal"))
        for a, b in T.catalog.morphisms():
            img = T.map(a, b).matrix @ self.ideals[a].basis
            for k in range(img.shape[1]):
                if not self.ideals[b].contains(img[:, k], tol):
                    out.append(((a, b), "morphism does not restrict"))
                    break
        return out

    def validate(self):
        bad = self.failures()
        if bad:
            where, why = bad[0]
            raise NotAnIdealFunctor(f"{where}: {why}", component=str(where), failures=[str(b) for b in bad])
        return self

    def dims(self):
        return {rid: I.dim for rid, I in self.ideals.items()}


def zero_ideal_functor(T):
    return IdealFunctor(T, {rid: zero_ideal(T[rid]) for rid in T.ids})


def kernel_ideal(f: TheoryMorphism):
    from .algebra import morphism_kernel

    return IdealFunctor(f.source, {rid: morphism_kernel(g) for rid, g in f.comps.items()})


def quotient_theory(T, I):
    I.validate()
    algs, projs = {}, {}
    for rid in T.ids:
        algs[rid], projs[rid] = quotient_by_ideal(T[rid], I[rid])
    maps = {}
    for a, b in T.catalog.morphisms():
        lift = projs[a].matrix.conj().T
        maps[(a, b)] = AlgebraMorphism(algs[a], algs[b], projs[b].matrix @ T.map(a, b).matrix @ lift)
    Q = Theory(T.catalog, algs, maps, f"{T.name}/I")
    return Q, TheoryMorphism(T, Q, projs)


def is_trivial_on_interior(I):
    C = I.theory.catalog
    return all(I[rid].dim == 0 for rid in C.ids if C.interior[rid])


# ---- additivity -------------------------------------------------------------

def additivity_at(T, v, cap=None):
    """(additive?, generated dimension, saturation levels) at object ``v``."""
    C = T.catalog
    gens = []
    for a in C.ids:
        if a != v or C.interior[v]:
            if C.interior[a] and C.is_morphism(a, v):
                f = T.map(a, v).matrix
                gens.extend(f[:, k] for k in range(f.shape[1]))
    A = T[v]
    if A.dim == 0:
        return True, 0, [0]
    basis, levels = generated_subalgebra(A, gens, cap=cap)
    return basis.shape[1] == A.dim, basis.shape[1], levels


def is_additive_at(T, v, cap=None):
    return additivity_at(T, v, cap)[0]


def is_additive(T, cap=None):
    return all(is_additive_at(T, v, cap) for v in T.ids)
