"""Finite region categories, their localization and the functors D, I, J.

Categories here are posets: a morphism ``a -> b`` is the inclusion of region
``a`` into region ``b``.  Everything is certified on the finite catalog at
hand only.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from fractions import Fraction

from . import geometry as geo
from .errors import ClosureOverflow, EmptyCatalog, NotCausallyConvex, NotDisjoint
from .geometry import Region, Spacetime
from .report import Report

SCOPE = "certified on the finite catalog listed in this report only"


@dataclass
class Catalog:
    spacetime: Spacetime
    regions: dict
    dev: dict = field(default_factory=dict)
    stable: dict = field(default_factory=dict)
    interior: dict = field(default_factory=dict)
    incl: set = field(default_factory=set)
    cauchy: dict = field(default_factory=dict)
    disjoint: set = field(default_factory=set)
    name: str = "catalog"

    @property
    def ids(self):
        return list(self.regions)

    def __len__(self):
        return len(self.regions)

    def __contains__(self, rid):
        return rid in self.regions

    def __getitem__(self, rid):
        return self.regions[rid]

    def find(self, region):
        for rid, r in self.regions.items():
            if r == region:
                return rid
        return None

    def is_morphism(self, a, b):
        return (a, b) in self.incl

    def morphisms(self):
        return [(a, b) for a in self.regions for b in self.regions if (a, b) in self.incl]

    def are_disjoint(self, a, b):
        return frozenset((a, b)) in self.disjoint

    def orthogonal_pairs(self):
        """Triples (a, b, c): a, b causally disjoint, both included in c."""
        out = []
        for a, b in itertools.combinations(self.regions, 2):
            if not self.are_disjoint(a, b):
                continue
            for c in self.regions:
                if (a, c) in self.incl and (b, c) in self.incl:
                    out.append((a, b, c))
        return out

    def interior_ids(self):
        return [r for r in self.regions if self.interior[r]]

    def restrict(self, ids, name=None):
        """Full sub-poset on ``ids`` (keeps development data of the parent)."""
        ids = [i for i in self.regions if i in set(ids)]
        keep = set(ids)
        return Catalog(
            self.spacetime,
            {i: self.regions[i] for i in ids},
            dev=dict(self.dev),
            stable={i: self.stable[i] for i in ids},
            interior={i: self.interior[i] for i in ids},
            incl={m for m in self.incl if m[0] in keep and m[1] in keep},
            cauchy={m: f for m, f in self.cauchy.items() if m[0] in keep and m[1] in keep},
            disjoint={p for p in self.disjoint if p <= keep},
            name=name or self.name,
        )

    def to_json(self):
        return {
            "name": self.name,
            "spacetime": self.spacetime.to_config(),
            "regions": [
                {
                    "id": rid,
                    "rects": r.to_literal(),
                    "development": self.dev.get(rid),
                    "stable": self.stable[rid],
                    "interior": self.interior[rid],
                }
                for rid, r in self.regions.items()
            ],
            "morphisms": [{"source": a, "target": b, "cauchy": self.cauchy[(a, b)]} for a, b in self.morphisms()],
            "disjoint_pairs": sorted(sorted(p) for p in self.disjoint),
            "scope": SCOPE,
        }

    def dumps(self):
        return json.dumps(self.to_json(), indent=2, sort_keys=False)


def _populate(M, regions, name):
    C = Catalog(M, dict(regions), name=name)
    devs = {rid: geo.cauchy_development(M, r) for rid, r in regions.items()}
    for rid, r in regions.items():
        d = devs[rid]
        C.stable[rid] = d == r
        C.interior[rid] = geo.is_interior(M, r)
        C.dev[rid] = C.find(d)
    for a, b in itertools.product(regions, repeat=2):
        if geo.is_subset(regions[a], regions[b]):
            C.incl.add((a, b))
            C.cauchy[(a, b)] = devs[a] == devs[b]
    for a, b in itertools.combinations(regions, 2):
        if geo.are_causally_disjoint(M, regions[a], regions[b]):
            C.disjoint.add(frozenset((a, b)))
    return C


def build_catalog(M, seeds, size_bound=64, factorization=True, name="catalog"):
    """Close ``seeds`` (id -> Region, or a list) under D and factorization regions.

    Regions equal to one already present are not duplicated.
    """
    if isinstance(seeds, (list, tuple)):
        seeds = {f"S{k}": r for k, r in enumerate(seeds)}
    if not seeds:
        raise EmptyCatalog("no seed regions given")
    regions = {}

    def add(rid, region):
        for other in regions.values():
            if other == region:
                return False
        if len(regions) >= size_bound:
            raise ClosureOverflow("catalog closure exceeds size bound", size_bound=size_bound, adding=rid)
        regions[rid] = region
        return True

    for rid, r in seeds.items():
        if not geo.is_causally_convex(M, r):
            raise NotCausallyConvex(f"seed {rid} is not causally convex", id=rid)
        add(rid, r)
    for rid, r in list(regions.items()):
        add(f"D({rid})", geo.cauchy_development(M, r))

    if factorization:
        changed = True
        while changed:
            changed = False
            good = [
                rid for rid, r in regions.items()
                if not r.is_empty() and geo.is_interior(M, r) and geo.is_stable(M, r)
            ]
            for a, b in itertools.combinations(good, 2):
                ra, rb = regions[a], regions[b]
                if not geo.are_causally_disjoint(M, ra, rb):
                    continue
                w = geo.cauchy_development(M, geo.union(ra, rb))
                if add(f"D({a}|{b})", w):
                    changed = True
    return _populate(M, regions, name)


# ---- localization ---------------------------------------------------------

@dataclass
class PosetFunctor:
    """Monotone map of objects between poset categories."""

    source: Catalog
    target: Catalog
    obj: dict

    def __call__(self, rid):
        return self.obj[rid]

    def on_morphism(self, a, b):
        return (self.obj[a], self.obj[b])

    def violations(self):
        return [
            (a, b) for a, b in self.source.morphisms()
            if not self.target.is_morphism(self.obj[a], self.obj[b])
        ]


def localize(C):
    """Stable sub-poset together with the functor D: C -> C_loc."""
    missing = [rid for rid in C.ids if C.dev.get(rid) is None]
    if missing:
        raise ClosureOverflow("catalog is not closed under D", missing=missing)
    L = C.restrict([rid for rid in C.ids if C.stable[rid]], name=C.name + "/loc")
    D = PosetFunctor(C, L, {rid: C.dev[rid] for rid in C.ids})
    return L, D


def inclusion_functor(L, C):
    return PosetFunctor(L, C, {rid: rid for rid in L.ids})


def check_adjunction_DI(C, L=None, D=None):
    """Unit/counit/triangle checks for D -| I on the finite catalog.

    Uses the catalog's own flags (so a mis-flagged morphism is reported).
    """
    if L is None or D is None:
        L, D = localize(C)
    rep = Report(scope=SCOPE)
    for u in C.ids:
        du = D(u)
        ok = C.is_morphism(u, du) and C.cauchy.get((u, du), False)
        rep.add(f"unit {u} -> D({u}) is a Cauchy inclusion", ok, witness={"object": u, "image": du})
    for v in L.ids:
        rep.add(f"counit at {v} is the identity", D(v) == v, witness={"object": v, "image": D(v)})
    for u in C.ids:
        du = D(u)
        # D(eta_U) : D(U) -> D(D(U)) composed with eps_{D U} must be id_{D U}
        rep.add(f"triangle D(eta) at {u}", D(du) == du, witness={"object": u})
    for v in L.ids:
        # eta_{I V}: V -> I D I V must be the identity of V
        rep.add(f"triangle eta I at {v}", D(v) == v and C.is_morphism(v, v), witness={"object": v})
    bad = D.violations()
    rep.add("D is monotone", not bad, witness=bad[:5])
    for a, b in C.morphisms():
        if C.cauchy[(a, b)]:
            rep.add(f"D sends Cauchy {a}->{b} to an identity", D(a) == D(b), witness={"morphism": [a, b]})
    return rep


def interior_catalog(L):
    """R_intM localized: stable regions contained in the interior."""
    return L.restrict([rid for rid in L.ids if L.interior[rid] and not L.regions[rid].is_empty()], name=L.name + "/int")


def _interior_disjoint(M, a, b, h=Fraction(1, 50)):
    # independent route: lattice sites never lie on the boundary, so the
    # lattice cones are causal cones inside int M
    from .lattice import LatticeMask, lattice_disjoint

    lat = LatticeMask.for_regions(h, [a, b], M)
    return lattice_disjoint(lat, lat.rasterize(a), lat.rasterize(b))


def embed_J(L):
    """Inclusion J of the interior sub-catalog, with orthogonality report."""
    Int = interior_catalog(L)
    J = inclusion_functor(Int, L)
    rep = Report(scope=SCOPE)
    rep.add("J is a functor", not J.violations())
    for a, b in Int.morphisms():
        rep.add(f"J preserves {a}->{b}", L.is_morphism(a, b))
    for a, b in itertools.combinations(Int.ids, 2):
        inner = _interior_disjoint(L.spacetime, Int[a], Int[b])
        rep.add(f"orthogonality of {a},{b} preserved and detected", inner == L.are_disjoint(a, b))
    for rid in L.ids:
        if not L.interior[rid]:
            rep.add(f"{rid} touches the boundary and is not in the image of J", rid not in Int)
    return J, rep


def factor_through_interior(C, v1, v2, v):
    """W = D(V1 u V2) with V1, V2 <= W <= V, or None if W is not catalogued."""
    M = C.spacetime
    r1, r2, rv = C[v1], C[v2], C[v]
    for rid, r in ((v1, r1), (v2, r2)):
        if r.is_empty() or not geo.is_interior(M, r) or not geo.is_stable(M, r):
            raise NotDisjoint(f"{rid} is not a non-empty interior stable region", id=rid)
    if not geo.are_causally_disjoint(M, r1, r2):
        raise NotDisjoint(f"{v1} and {v2} are not causally disjoint", pair=[v1, v2])
    if not (C.is_morphism(v1, v) and C.is_morphism(v2, v)):
        raise NotDisjoint("V1, V2 must both be included in V", pair=[v1, v2], target=v)
    w = geo.cauchy_development(M, geo.union(r1, r2))
    assert geo.is_interior(M, w) and geo.is_stable(M, w) and geo.is_causally_convex(M, w)
    assert geo.is_subset(w, rv)
    return C.find(w)


# ---- localization requirement (c) ------------------------------------------

@dataclass
class PointFunctor:
    """Functor into commutative algebras C^X given by finite sets and point maps.

    ``sizes[V]`` is |X(V)|; ``maps[(V, V')]`` is the map X(V') -> X(V)
    (as a tuple) inducing the pullback algebra morphism C^X(V) -> C^X(V').
    """

    catalog: Catalog
    sizes: dict
    maps: dict

    def point_map(self, a, b):
        return self.maps[(a, b)]

    def compose(self, D):
        """Precomposition with a poset functor ``D`` into ``self.catalog``."""
        src = D.source
        sizes = {u: self.sizes[D(u)] for u in src.ids}
        maps = {(a, b): self.maps[D.on_morphism(a, b)] for a, b in src.morphisms()}
        return PointFunctor(src, sizes, maps)

    def violations(self):
        C = self.catalog
        out = []
        for a in C.ids:
            if tuple(self.maps[(a, a)]) != tuple(range(self.sizes[a])):
                out.append(("identity", a))
        for a, b, c in itertools.product(C.ids, repeat=3):
            if (a, b) in C.incl and (b, c) in C.incl:
                # X(c) -> X(b) -> X(a) equals X(c) -> X(a)
                f, g, h = self.maps[(a, b)], self.maps[(b, c)], self.maps[(a, c)]
                if tuple(f[g[z]] for z in range(self.sizes[c])) != tuple(h):
                    out.append(("composition", a, b, c))
        return out


def threshold_functor(C, marker, big=2):
    """C^2 on regions containing ``marker`` (C^1 elsewhere), identity/constant maps."""
    contains = {rid: geo.is_subset(C[marker], C[rid]) for rid in C.ids}
    sizes = {rid: big if contains[rid] else 1 for rid in C.ids}
    maps = {}
    for a, b in C.morphisms():
        if sizes[a] == sizes[b]:
            maps[(a, b)] = tuple(range(sizes[b]))
        else:
            maps[(a, b)] = tuple(0 for _ in range(sizes[b]))
    return PointFunctor(C, sizes, maps)


def natural_transformations(G, H):
    """All natural transformations G => H, as dicts V -> point map X_H(V) -> X_G(V)."""
    C = G.catalog
    ids = C.ids
    morph = C.morphisms()
    out = []

    def ok(assign, rid):
        for a, b in morph:
            if rid not in (a, b) or a not in assign or b not in assign:
                continue
            phi_a, phi_b = assign[a], assign[b]
            g, h = G.maps[(a, b)], H.maps[(a, b)]
            # phi_a o h == g o phi_b on X_H(b)
            for z in range(H.sizes[b]):
                if phi_a[h[z]] != g[phi_b[z]]:
                    return False
        return True

    def rec(k, assign):
        if k == len(ids):
            out.append(dict(assign))
            return
        rid = ids[k]
        for phi in itertools.product(range(G.sizes[rid]), repeat=H.sizes[rid]):
            assign[rid] = phi
            if ok(assign, rid):
                rec(k + 1, assign)
            del assign[rid]

    rec(0, {})
    return out


def check_localization_bijection(D, G, H):
    """Precomposition with D: Nat(G, H) -> Nat(GD, HD) is a bijection."""
    nat = natural_transformations(G, H)
    GD, HD = G.compose(D), H.compose(D)
    nat_d = natural_transformations(GD, HD)
    image = [tuple(sorted((u, alpha[D(u)]) for u in D.source.ids)) for alpha in nat]
    target = {tuple(sorted(beta.items())) for beta in nat_d}
    injective = len(set(image)) == len(image)
    surjective = set(image) == target
    return {
        "nat_count": len(nat),
        "nat_pullback_count": len(nat_d),
        "injective": injective,
        "surjective": surjective,
        "bijective": injective and surjective,
    }


# ---- standard catalog -------------------------------------------------------

def standard_seeds(M):
    """Seed regions in units of the strip width (bounds on the 1/25 lattice)."""
    F = Fraction
    V1 = Region.diamond(M, 0, F(8, 25), F(3, 25))
    V2 = Region.diamond(M, 0, F(17, 25), F(3, 25))
    V3 = Region.diamond(M, 0, F(3, 25), F(1, 25))
    seeds = {
        "V1": V1,
        "V2": V2,
        "V3": V3,
        "B0": Region.diamond(M, 0, 0, F(1, 5)),
        "B1": Region.diamond(M, 0, 0, F(3, 5)),
        "B2": Region.diamond(M, 0, 1, F(1, 5)),
    }
    if M.kind == geo.STRIP:
        seeds["slab"] = Region.time_slab(M)
    seeds["M"] = Region.whole(M)
    return seeds


def standard_catalog(M=None, size_bound=64):
    M = M or Spacetime()
    return build_catalog(M, standard_seeds(M), size_bound=size_bound, name="standard")


def small_catalog(M=None):
    """At most 8 objects, for exhaustive enumeration of natural transformations."""
    M = M or Spacetime()
    s = standard_seeds(M)
    keep = {k: s[k] for k in ("V1", "V3", "B0", "B1", "B2") if k in s}
    if "slab" in s:
        keep["slab"] = s["slab"]
    return build_catalog(M, keep, name="small")
