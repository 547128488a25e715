"""Klein-Gordon theories K, K^ext and the boundary-condition ideal on a small strip catalog.

Region bounds are in units of the strip width a; test functions live in
physical coordinates on the strip of width a = pi.  Generators are labelled
bumps.  Every algebra is a :class:`CCRPolyAlgebra` truncated at degree L,
so all comparisons happen on the filtered pieces of degree <= L.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction as F

import numpy as np

from .algebra import null_basis, rank, residual, same_subspace, span_basis
from .catalog import build_catalog, interior_catalog, localize
from .ccr import CCRPolyAlgebra
from .errors import BasisDegenerate, CoverNotFound, NotAdjointRelated
from .geometry import Region, Spacetime
from .kleingordon import WIDTH, Bump, GreenPair, TestFunction, adjoint_defect, l1_norm, support_in_region, tau, tol_quad
from .report import Report

KG_SCOPE = "certified on the Klein-Gordon desk catalog and bump basis listed in this report only"


def kg_region_shapes(M):
    return {
        "KC": Region.diamond(M, 0, F(1, 4), F(1, 10)),
        "KB": Region.diamond(M, 0, F(7, 10), F(3, 20)),
        "KT": Region.diamond(M, F(7, 10), F(1, 4), F(1, 10)),
        "BT": Region.diamond(M, F(7, 20), 0, F(7, 10)),
        "BB": Region.diamond(M, 0, 0, F(9, 10)),
    }


def kg_catalog(M=None):
    """Localized catalog: interior KC, KB, KT, D(KC|KB); boundary BT, BB."""
    M = M or Spacetime()
    C = build_catalog(M, kg_region_shapes(M), name="kg")
    L, _ = localize(C)
    return L


# (t, x, r) in units of the strip width
KG_BUMPS = {
    "f1": (-0.04, 0.25, 0.035),
    "f2": (0.04, 0.25, 0.035),
    "f3": (0.0, 0.70, 0.06),
    "f4": (0.70, 0.25, 0.05),
}


def kg_bumps(width=WIDTH, spec=None):
    spec = spec or KG_BUMPS
    return {k: TestFunction.of(Bump.unit(t * width, x * width, r * width)) for k, (t, x, r) in spec.items()}


@dataclass
class KGSetup:
    L: object
    bumps: dict
    width: float = WIDTH
    h: float = WIDTH / 200
    max_degree: int = 4

    def __post_init__(self):
        self.Gm = GreenPair("minkowski", width=self.width, h=self.h)
        self.Gd = GreenPair("dirichlet_strip", width=self.width, h=self.h)
        self.labels = list(self.bumps)
        self.tol = tol_quad(self.h)

    def inside(self, label, rid):
        return support_in_region(self.bumps[label], self.L[rid], self.width)

    def tau(self, G, a, b, rid):
        return tau(G, self.bumps[a], self.bumps[b], self.L[rid], self.width)


def default_setup(h=WIDTH / 200, max_degree=4):
    return KGSetup(kg_catalog(), kg_bumps(), h=h, max_degree=max_degree)


# ---- theories of CCR algebras --------------------------------------------------------

@dataclass
class CCRTheory:
    """Region -> CCRPolyAlgebra on the labels ``gens[rid]`` (global order)."""

    catalog: object
    gens: dict
    algebras: dict
    name: str = "ccr theory"
    reduce: dict = field(default_factory=dict)

    def __getitem__(self, rid):
        return self.algebras[rid]

    @property
    def ids(self):
        return self.catalog.ids

    def word_labels(self, rid, word):
        return tuple(self.gens[rid][k] for k in word)

    def from_labels(self, rid, labels, coeff=1.0):
        pos = {g: k for k, g in enumerate(self.gens[rid])}
        return {tuple(pos[g] for g in labels): complex(coeff)}

    def push(self, a, b, elem):
        """Pushforward along a <= b: relabel generators, renormalize in b."""
        pos = {g: k for k, g in enumerate(self.gens[b])}
        out = {}
        for w, c in elem.items():
            w2 = tuple(pos[self.gens[a][k]] for k in w)
            out[w2] = out.get(w2, 0) + c
        return self.algebras[b].normal_form(out)

    def map_matrix(self, a, b, degree=None):
        A, B = self.algebras[a], self.algebras[b]
        cols = [B.vector(self.push(a, b, {w: 1.0}), degree) for w in A.basis(degree)]
        return np.array(cols).T if cols else np.zeros((B.dim(degree), 0))


def _independent_labels(Tm, labels, tol):
    """Greedy independent rows of the probe matrix; the others are recorded as
    combinations of the kept ones (empty for pure P-image rows)."""
    kept, reduce = [], {}
    for k, lab in enumerate(labels):
        basis = span_basis([Tm[labels.index(x)] for x in kept], Tm.shape[1])
        if residual(basis, Tm[k]) > tol:
            kept.append(lab)
            continue
        if np.linalg.norm(Tm[k]) <= tol or not kept:
            reduce[lab] = {}
        else:
            K = Tm[[labels.index(x) for x in kept]]
            c, *_ = np.linalg.lstsq(K.T, Tm[k], rcond=None)
            reduce[lab] = {kept[i]: float(c[i]) for i in range(len(kept)) if abs(c[i]) > 1e-12}
    return kept, reduce


def region_samples(region, width=WIDTH, n=12):
    """Grid of (t, x) points inside every rectangle of a region."""
    ts, xs = [], []
    for R in region.rects:
        us = width * (float(R.u0) + (float(R.u1) - float(R.u0)) * (np.arange(n) + 0.5) / n)
        vs = width * (float(R.v0) + (float(R.v1) - float(R.v0)) * (np.arange(n) + 0.5) / n)
        U, V = np.meshgrid(us, vs, indexing="ij")
        ts.append(0.5 * (U + V).ravel())
        xs.append(0.5 * (V - U).ravel())
    return np.concatenate(ts), np.concatenate(xs)


def build_interior_theory(S: KGSetup):
    """K on the interior catalog: full CCR with the Minkowski tau of each region.

    Test functions in the P-image are detected numerically: f = P g for some
    g supported in V iff G(f) vanishes on V, so the rows are G(f_i) sampled
    on a grid in V (tau against point probes), as RMS values per unit L1 norm.
    """
    Int = interior_catalog(S.L)
    gens, algs, reduce, defects = {}, {}, {}, {}
    for rid in Int.ids:
        labels = [g for g in S.labels if S.inside(g, rid)]
        ts, xs = region_samples(S.L[rid], S.width)
        Tm = np.zeros((len(labels), len(ts)))
        for k, g in enumerate(labels):
            f = S.bumps[g]
            Tm[k] = S.Gm.causal(f, ts, xs) / (math.sqrt(len(ts)) * l1_norm(f, S.h))
        kept, red = _independent_labels(Tm, labels, 10 * S.tol)
        if labels and not kept:
            raise BasisDegenerate(f"every basis function of {rid} lies in the P-image", region=rid, labels=labels)
        gens[rid] = kept
        reduce.update(red)
        tm = np.array([[S.tau(S.Gm, a, b, rid) for b in kept] for a in kept]).reshape(len(kept), len(kept))
        defects[rid] = float(np.max(np.abs(tm + tm.T), initial=0.0))
        # the CCR need an exactly antisymmetric form; the raw defect is reported
        tm = 0.5 * (tm - tm.T)
        algs[rid] = CCRPolyAlgebra(tm, None, S.max_degree, labels=kept, name=f"K({rid})")
    K = CCRTheory(Int, gens, algs, "K", reduce)
    K.tau_defect = defects
    return K


def check_interior_theory(K: CCRTheory, S: KGSetup):
    rep = Report(scope=KG_SCOPE)
    C = K.catalog
    for rid in C.ids:
        d = K.tau_defect[rid]
        rep.add(f"K({rid}): tau antisymmetric", d <= S.tol, witness=d, tolerance=S.tol)
    for a, b in C.morphisms():
        if a == b:
            continue
        ia = [K.gens[b].index(g) for g in K.gens[a]]
        d = float(np.max(np.abs(K[b].tau[np.ix_(ia, ia)] - K[a].tau), initial=0.0))
        rep.add(f"tau naturality {a}->{b}", d <= S.tol, witness=d, tolerance=S.tol)
    for a, b, c in C.orthogonal_pairs():
        worst = 0.0
        for x, y in itertools.product(K[a].basis(1)[1:] + K[a].basis(2)[1 + K[a].n:], K[b].basis(1)[1:]):
            X, Y = K.push(a, c, {x: 1.0}), K.push(b, c, {y: 1.0})
            comm = K[c].commutator(X, Y)
            worst = max(worst, max((abs(v) for v in comm.values()), default=0.0))
        rep.add(f"K causality {a},{b} in {c}", worst <= S.tol, witness=worst, tolerance=S.tol)
    return rep


# ---- K^ext ------------------------------------------------------------------------------

def interior_below(K, L, V):
    return [r for r in K.catalog.ids if L.is_morphism(r, V)]


def cover_of(K, L, V, label, prefer=None):
    """An interior region below V whose generators include ``label``."""
    regions = [r for r in interior_below(K, L, V) if label in K.gens[r]]
    if not regions:
        raise CoverNotFound(f"{label} has no interior cover inside {V}", label=label, region=V)
    if prefer in regions:
        return prefer
    return regions[0]


def build_kext(K: CCRTheory, S: KGSetup):
    """K^ext: generators from all interior regions below V, CCR only for pairs
    whose supports share an interior region (value from that region's tau)."""
    L = S.L
    gens, algs, witness = {}, {}, {}
    for V in L.ids:
        below = interior_below(K, L, V)
        labs = [g for g in S.labels if any(g in K.gens[r] for r in below)]
        n = len(labs)
        tm = np.zeros((n, n))
        comm = np.zeros((n, n), dtype=bool)
        spread = 0.0
        for i, j in itertools.product(range(n), repeat=2):
            vals = [K[r].tau[K.gens[r].index(labs[i]), K.gens[r].index(labs[j])] for r in below if labs[i] in K.gens[r] and labs[j] in K.gens[r]]
            if vals:
                comm[i, j] = True
                tm[i, j] = vals[0]
                spread = max(spread, max(vals) - min(vals))
        gens[V] = labs
        algs[V] = CCRPolyAlgebra(tm, comm, S.max_degree, labels=labs, name=f"Kext({V})")
        witness[V] = spread
    T = CCRTheory(L, gens, algs, "Kext", dict(K.reduce))
    T.partial_spread = witness
    return T


def gamma_report(K, Kext, S):
    """gamma: K(V) -> K^ext(V) is the identity on generators for interior V."""
    rep = Report(scope=KG_SCOPE)
    for V in K.catalog.ids:
        same_gens = K.gens[V] == Kext.gens[V]
        full = bool(Kext[V].comm.all())
        d = float(np.max(np.abs(Kext[V].tau - K[V].tau), initial=0.0)) if same_gens else float("inf")
        same_basis = K[V].basis() == Kext[V].basis()
        rep.add(f"gamma at {V} is an isomorphism", same_gens and full and same_basis and d <= S.tol, witness={"tau_diff": d, "dim": K[V].dim()}, tolerance=S.tol)
    for V, s in Kext.partial_spread.items():
        rep.add(f"partial CCR consistent at {V}", s <= S.tol, witness=s, tolerance=S.tol)
    return rep


# ---- the ext(K) oracle with CCR leaves ---------------------------------------------------

class CCRExtOracle:
    """Trees of (interior region, PBW word) leaves below V, total degree <= D,
    modulo pushforward, merging of adjacent leaves in one region, and units."""

    def __init__(self, K: CCRTheory, L, V, degree=3):
        self.K, self.L, self.V, self.D = K, L, V, degree
        self.sub = interior_below(K, L, V)
        leaves = []
        for r in self.sub:
            for w in K[r].basis(degree):
                if w:
                    leaves.append((r, K.word_labels(r, w)))
        self.leaves = leaves
        trees = [()]
        frontier = [()]
        while frontier:
            nxt = []
            for t in frontier:
                deg = sum(len(l[1]) for l in t)
                for leaf in leaves:
                    if deg + len(leaf[1]) <= degree:
                        nxt.append(t + (leaf,))
            trees.extend(nxt)
            frontier = nxt
        self.trees = trees
        self.index = {t: k for k, t in enumerate(trees)}
        self.relations = self._relations()
        self.rel_basis = _row_basis(self.relations)

    def leaf_elem(self, leaf):
        r, labs = leaf
        return self.K.from_labels(r, labs)

    def _expand(self, prefix, r, elem, suffix):
        """Trees with ``elem`` of K(r) as one leaf between prefix and suffix."""
        out = {}
        for w, c in elem.items():
            mid = ((r, self.K.word_labels(r, w)),) if w else ()
            t = prefix + mid + suffix
            out[t] = out.get(t, 0) + c
        return out

    def _vec(self, combo):
        v = np.zeros(len(self.trees), dtype=complex)
        for t, c in combo.items():
            v[self.index[t]] += c
        return v

    def _relations(self):
        rows = []
        K = self.K
        for t in self.trees:
            for k, (r, labs) in enumerate(t):
                pre, suf = t[:k], t[k + 1:]
                for r2 in self.sub:
                    if r2 != r and K.catalog.is_morphism(r, r2):
                        combo = self._expand(pre, r2, K.push(r, r2, self.leaf_elem((r, labs))), suf)
                        combo[t] = combo.get(t, 0) - 1
                        rows.append(self._vec(combo))
                if k + 1 < len(t) and t[k + 1][0] == r:
                    prod = K[r].mul(self.leaf_elem(t[k]), self.leaf_elem(t[k + 1]))
                    combo = self._expand(pre, r, prod, t[k + 2:])
                    combo[t] = combo.get(t, 0) - 1
                    rows.append(self._vec(combo))
        return np.array(rows) if rows else np.zeros((0, len(self.trees)))

    @property
    def dim(self):
        return len(self.trees) - self.rel_basis.shape[0]

    def zeta(self, Kext, word, covers=None):
        """zeta_V on a K^ext word: one leaf per generator on its chosen cover."""
        covers = covers or {}
        leaves = []
        for g in Kext.word_labels(self.V, word):
            leaves.append((cover_of(self.K, self.L, self.V, g, covers.get(g)), (g,)))
        return tuple(leaves)

    def in_relations(self, v, tol=1e-8):
        return residual(self.rel_basis.T, v) <= tol if self.rel_basis.shape[0] else np.linalg.norm(v) <= tol


def _row_basis(R, tol=1e-9):
    """Orthonormal rows spanning the rows of R."""
    if R.shape[0] == 0:
        return R
    _, s, Vh = np.linalg.svd(R, full_matrices=False)
    return Vh[: int(np.sum(s > tol * max(1.0, s[0])))]


def oracle_report(K, Kext, S, V, degree=3):
    """Compare K^ext(V) with the tree model of ext K(V) at degree <= ``degree``."""
    rep = Report(scope=f"{KG_SCOPE}; trees of total degree <= {degree}")
    O = CCRExtOracle(K, S.L, V, degree)
    A = Kext[V]
    dim_kext = A.dim(degree)
    rep.add(f"{V}: dim ext K = dim K^ext (degree <= {degree})", O.dim == dim_kext, witness={"ext_oracle": O.dim, "kext": dim_kext, "trees": len(O.trees)})
    Z = np.array([O._vec({O.zeta(Kext, w): 1.0}) for w in A.basis(degree)])
    stacked = np.vstack([O.rel_basis, Z]) if O.rel_basis.shape[0] else Z
    r = rank(stacked)
    rep.add(f"{V}: zeta maps a basis to a basis", r == len(O.trees) and Z.shape[0] == dim_kext, witness={"rank": r, "trees": len(O.trees)})
    worst = 0.0
    for i, j in itertools.combinations(range(A.n), 2):
        if not A.comm[i, j]:
            continue
        # Phi_j Phi_i - Phi_i Phi_j + i tau_ij, pushed through zeta
        combo = {O.zeta(Kext, (j, i)): 1.0}
        t2 = O.zeta(Kext, (i, j))
        combo[t2] = combo.get(t2, 0) - 1.0
        combo[()] = combo.get((), 0) + 1j * A.tau[i, j]
        worst = max(worst, residual(O.rel_basis.T, O._vec(combo)) if O.rel_basis.shape[0] else 1.0)
    rep.add(f"{V}: partial CCR hold in ext K", worst <= 1e-8, witness=worst, tolerance=1e-8)
    worst = 0.0
    for g in A.labels:
        covs = [r for r in O.sub if g in K.gens[r]]
        for c1, c2 in itertools.combinations(covs, 2):
            v = O._vec({((c1, (g,)),): 1.0, ((c2, (g,)),): -1.0})
            worst = max(worst, residual(O.rel_basis.T, v))
    rep.add(f"{V}: zeta independent of the cover", worst <= 1e-8, witness=worst, tolerance=1e-8)
    return rep


# ---- the Dirichlet ideal and the quotient -------------------------------------------------

@dataclass
class GreenIdeal:
    kext: CCRTheory
    generators: dict  # V -> list of (i, j, tau_dir)
    tau_q: dict  # V -> full tau of the quotient
    degree: int = 4

    def elements(self, V):
        A = self.kext[V]
        out = []
        for i, j, t in self.generators[V]:
            c = A.add(A.mul(A.gen(i), A.gen(j)), A.mul(A.gen(j), A.gen(i)), {(): 1.0}, coeffs=[1, -1, -1j * t])
            out.append(c)
        return out

    def span(self, V, degree=None):
        """Degree <= L part of the two-sided ideal generated at V."""
        degree = self.degree if degree is None else degree
        A = self.kext[V]
        words = A.basis(degree - 2) if degree >= 2 else []
        vecs = []
        for c in self.elements(V):
            for x, y in itertools.product(words, repeat=2):
                if len(x) + len(y) + 2 > degree:
                    continue
                e = A.mul(A.mul({x: 1.0}, c, check=False), {y: 1.0}, check=False)
                vecs.append(A.vector(e, degree))
        return np.array(vecs).T if vecs else np.zeros((A.dim(degree), 0), dtype=complex)

    def dims(self):
        return {V: rank(self.span(V)) for V in self.kext.ids}


def build_green_ideal(Kext: CCRTheory, S: KGSetup):
    """I(V) generated by Phi_i Phi_j - Phi_j Phi_i - i tau^D_V(f_i, f_j) for the
    pairs without a partial CCR; tau^D from the Dirichlet pair restricted to V."""
    gens, tau_q = {}, {}
    for V in S.L.ids:
        A = Kext[V]
        labs = A.labels
        n = len(labs)
        tq = np.array(A.tau, dtype=float)
        gens[V] = []
        for i, j in itertools.combinations(range(n), 2):
            if A.comm[i, j]:
                continue
            tij = S.tau(S.Gd, labs[i], labs[j], V)
            tji = S.tau(S.Gd, labs[j], labs[i], V)
            if abs(tij + tji) > S.tol:
                raise NotAdjointRelated("tau of the Dirichlet pair is not antisymmetric", pair=[labs[i], labs[j]], region=V, defect=abs(tij + tji))
            tq[i, j], tq[j, i] = tij, -tij
            gens[V].append((i, j, tij))
        tau_q[V] = tq
    return GreenIdeal(Kext, gens, tau_q, S.max_degree)


def quotient_kg(I: GreenIdeal):
    Kext = I.kext
    algs = {V: CCRPolyAlgebra(I.tau_q[V], None, I.degree, labels=Kext.gens[V], name=f"Q({V})") for V in Kext.ids}
    return CCRTheory(Kext.catalog, dict(Kext.gens), algs, "Kext/I", dict(Kext.reduce))


def projection_matrix(Kext, Q, V, degree=None):
    """Canonical projection K^ext(V) -> Q(V) on degree <= L pieces."""
    A, B = Kext[V], Q[V]
    cols = [B.vector({w: 1.0}, degree) for w in A.basis(degree)]
    return np.array(cols).T


def counit_on_trees(K, Q, V, tree, degree=None):
    """epsilon_Q on a tree of interior leaves: multiply their images in Q(V)."""
    B = Q[V]
    out = B.unit()
    pos = {g: k for k, g in enumerate(Q.gens[V])}
    for r, labs in tree:
        leaf = B.normal_form({tuple(pos[g] for g in labs): 1.0})
        out = B.mul(out, leaf, check=False)
    return B.vector(out, degree)


def kg_ideal_report(K, Kext, S, I=None):
    rep = Report(scope=KG_SCOPE)
    I = I or build_green_ideal(Kext, S)
    Q = quotient_kg(I)
    dims = I.dims()
    for V in S.L.ids:
        if S.L.interior[V]:
            rep.add(f"I({V}) = 0 on the interior", dims[V] == 0 and not I.generators[V], witness=dims[V])
            A = Kext[V]
            d = 0.0
            for i, j in itertools.combinations(range(A.n), 2):
                d = max(d, abs(S.tau(S.Gd, A.labels[i], A.labels[j], V) - A.tau[i, j]))
            rep.add(f"Dirichlet tau = interior tau on {V}", d <= S.tol, witness=d, tolerance=S.tol)
        else:
            labs = Kext[V].labels
            pairs = {
                f"{labs[i]},{labs[j]}": {"tau_dirichlet": t, "tau_minkowski": S.tau(S.Gm, labs[i], labs[j], V)}
                for i, j, t in I.generators[V]
            }
            rep.add(f"I({V}) generators", True, witness={"pairs": pairs, "dim": dims[V]})
    for a, b, c in S.L.orthogonal_pairs():
        if not (S.L.interior[a] and S.L.interior[b]):
            continue
        ia = [Q.gens[c].index(g) for g in Q.gens[a]]
        ib = [Q.gens[c].index(g) for g in Q.gens[b]]
        worst = float(np.max(np.abs(Q[c].tau[np.ix_(ia, ib)]), initial=0.0))
        rep.add(f"quotient causality {a},{b} in {c}", worst <= S.tol, witness=worst, tolerance=S.tol)
    for V in S.L.ids:
        rep.add(f"quotient additive at {V}", set(Q.gens[V]) == {g for r in interior_below(K, S.L, V) for g in K.gens[r]})
    for V in S.L.ids:
        f = S.bumps[Kext.gens[V][0]] if Kext.gens[V] else None
        if f is not None:
            d = adjoint_defect(S.Gd, f, S.bumps[Kext.gens[V][-1]])
            rep.add(f"Dirichlet pair adjoint-related on {V} generators", d <= S.tol, witness=d, tolerance=S.tol)
    return rep, I, Q


def kg_roundtrip_report(K, Kext, S, I=None):
    """QS = id and SQ = id for the pair (K, I) at truncation degree L."""
    rep = Report(scope=f"{KG_SCOPE}; truncation degree {S.max_degree}")
    I = I or build_green_ideal(Kext, S)
    Q = quotient_kg(I)
    for V in S.L.ids:
        A = Kext[V]
        P = projection_matrix(Kext, Q, V)
        # mediating map q = eps_Q o ext(eta): generators go to one-leaf trees
        q = np.array([
            counit_on_trees(K, Q, V, tuple((cover_of(K, S.L, V, g), (g,)) for g in Kext.word_labels(V, w)))
            for w in A.basis()
        ]).T
        d = float(np.max(np.abs(q - P), initial=0.0))
        rep.add(f"{V}: mediating map equals the canonical projection", d <= 1e-12, witness=d, tolerance=1e-12)
        r = rank(P)
        rep.add(f"{V}: lambda surjective (QS = id)", r == Q[V].dim(), witness={"rank": r, "dim": Q[V].dim()})
        ker = null_basis(P)
        span = I.span(V)
        same = same_subspace(ker, span_basis(list(span.T), A.dim()))
        rep.add(f"{V}: ker epsilon = I (SQ = id on ideals)", same, witness={"ker": ker.shape[1], "ideal": rank(span)})
        if S.L.interior[V]:
            d = float(np.max(np.abs(Q[V].tau - K[V].tau), initial=0.0))
            rep.add(f"{V}: res Q = K", K.gens[V] == Q.gens[V] and d <= S.tol, witness=d, tolerance=S.tol)
    return rep


# ---- Green's operator comparisons on the catalog -------------------------------------------

def interior_uniqueness_report(S: KGSetup):
    """Dirichlet and Minkowski Green's operators agree on interior regions and
    differ on boundary regions where the reflected cone comes back in."""
    rep = Report(scope=KG_SCOPE)
    for V in S.L.ids:
        labs = [g for g in S.labels if S.inside(g, V)]
        if not labs:
            continue
        ts, xs = region_samples(S.L[V], S.width, n=24)
        diff = max(float(np.max(np.abs(S.Gd.causal(S.bumps[g], ts, xs) - S.Gm.causal(S.bumps[g], ts, xs)))) for g in labs)
        if S.L.interior[V]:
            rep.add(f"{V}: Dirichlet = Minkowski on the region", diff <= S.tol, witness=diff, tolerance=S.tol)
        else:
            rep.add(f"{V}: Dirichlet differs from Minkowski", diff >= 10 * S.tol, witness=diff, tolerance=10 * S.tol)
    return rep


def tau_report(S: KGSetup, radii=(0.45, 0.3, 0.2), T=0.5):
    """Antisymmetry, naturality, causal-disjoint vanishing and the point-pair limit."""
    from .kleingordon import tau_point_pair

    rep = Report(scope=KG_SCOPE)
    tol = S.tol
    for V in S.L.ids:
        labs = [g for g in S.labels if S.inside(g, V)]
        for G in (S.Gm, S.Gd):
            worst = 0.0
            for a, b in itertools.combinations(labs, 2):
                worst = max(worst, abs(S.tau(G, a, b, V) + S.tau(G, b, a, V)))
            rep.add(f"{V} {G.flavor}: tau antisymmetric", worst <= tol, witness=worst, tolerance=tol)
    for a, b in S.L.morphisms():
        if a == b or not (S.L.interior[a] and S.L.interior[b]):
            continue
        labs = [g for g in S.labels if S.inside(g, a)]
        worst = 0.0
        for f, g in itertools.product(labs, repeat=2):
            worst = max(worst, abs(S.tau(S.Gm, f, g, a) - S.tau(S.Gm, f, g, b)))
        rep.add(f"tau naturality {a}->{b}", worst <= tol, witness=worst, tolerance=tol)
    for a, b in itertools.combinations(S.L.ids, 2):
        if not S.L.are_disjoint(a, b):
            continue
        la = [g for g in S.labels if S.inside(g, a)]
        lb = [g for g in S.labels if S.inside(g, b)]
        worst = 0.0
        for f, g in itertools.product(la, lb):
            worst = max(worst, abs(tau(S.Gm, S.bumps[f], S.bumps[g])), abs(tau(S.Gd, S.bumps[f], S.bumps[g])))
        rep.add(f"tau vanishes for disjoint {a},{b}", worst <= tol, witness=worst, tolerance=tol)
    vals = tau_point_pair(S.Gm, T * S.width, [r * S.width for r in radii])
    gaps = [abs(v - 0.5) for v in vals]
    mono = all(g2 < g1 for g1, g2 in zip(gaps, gaps[1:]))
    rep.add("timelike point pair: |tau - 1/2| decreases with the radius", mono, witness={"radii": list(radii), "tau": vals})
    rep.add("timelike point pair: tau -> 1/2", gaps[-1] <= tol, witness=gaps[-1], tolerance=tol)
    return rep, {"radii": [r * S.width for r in radii], "tau": vals}
