"""Brute-force lattice oracle for the causal structure.

Sites sit at ``t = t_lo + k*h`` and ``x = (m + 1/2)*h`` (units of the strip
width), so no site ever lies on the boundary or on a null line through a
multiple of ``h``.  A causal step goes from ``(k, m)`` to ``(k+1, m-1)``,
``(k+1, m)`` or ``(k+1, m+1)`` clipped to the spatial range.  With region
bounds on multiples of ``2h`` this reproduces the continuum predicates
exactly at every site.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import UnboundedRegion
from .geometry import HALF_PLANE


@dataclass
class LatticeMask:
    """Boolean occupancy on a (t, x) lattice window."""

    h: Fraction
    t_lo: Fraction
    n_t: int
    n_x: int
    open_right: bool = False
    mask: np.ndarray = None

    @classmethod
    def window(cls, h, t_lo, t_hi, spacetime, x_max=3):
        h = Fraction(h)
        t_lo = Fraction(math.floor(Fraction(t_lo) / h)) * h
        n_t = int(math.ceil((Fraction(t_hi) - t_lo) / h)) + 1
        if spacetime.kind == HALF_PLANE:
            n_x = int(Fraction(x_max) / h)
            return cls(h, t_lo, n_t, n_x, open_right=True)
        return cls(h, t_lo, n_t, int(1 / h))

    @classmethod
    def for_regions(cls, h, regions, spacetime, margin=2):
        bounds = [b for r in regions for b in r.finite_bounds()]
        lo = math.floor(min(bounds)) - margin if bounds else -margin
        hi = math.ceil(max(bounds)) + margin if bounds else margin
        return cls.window(h, lo, hi, spacetime)

    @property
    def shape(self):
        return (self.n_t, self.n_x)

    def coords(self):
        h = float(self.h)
        t = float(self.t_lo) + h * np.arange(self.n_t)
        x = h * (np.arange(self.n_x) + 0.5)
        return np.meshgrid(t, x, indexing="ij")

    def rasterize(self, region):
        T, X = self.coords()
        U, V = T - X, T + X
        out = np.zeros(self.shape, dtype=bool)
        for r in region.rects:
            out |= (U > float(r.u0)) & (U < float(r.u1)) & (V > float(r.v0)) & (V < float(r.v1))
        return out

    def with_mask(self, mask):
        return LatticeMask(self.h, self.t_lo, self.n_t, self.n_x, self.open_right, mask)


def _spread(row):
    """Sites reachable from ``row`` in one step (m-1, m, m+1)."""
    out = row.copy()
    out[1:] |= row[:-1]
    out[:-1] |= row[1:]
    return out


def lattice_future(lat, s):
    out = np.zeros_like(s)
    out[0] = s[0]
    for k in range(1, s.shape[0]):
        out[k] = s[k] | _spread(out[k - 1])
    return out


def lattice_past(lat, s):
    return lattice_future(lat, s[::-1])[::-1]


def _escape_forward(lat, s):
    free = ~s
    esc = np.zeros_like(s)
    esc[-1] = free[-1]
    for k in range(s.shape[0] - 2, -1, -1):
        nxt = _spread(esc[k + 1])
        if lat.open_right:
            nxt[-1] = True
        esc[k] = free[k] & nxt
    return esc


def lattice_development(lat, s):
    """Fixpoint: a site is in D unless a forward or a backward path escapes the window avoiding S."""
    fut = _escape_forward(lat, s)
    past = _escape_forward(lat, s[::-1])[::-1]
    return s | ~fut | ~past


def lattice_development_checked(lat, region):
    if not region.is_time_bounded():
        raise UnboundedRegion("lattice fixpoint needs a time-bounded region", region=repr(region))
    return lattice_development(lat, lat.rasterize(region))


def lattice_convex(lat, s):
    hull = lattice_future(lat, s) & lattice_past(lat, s)
    return not (hull & ~s).any()


def lattice_disjoint(lat, s, s2):
    cone = lattice_future(lat, s) | lattice_past(lat, s)
    return not (cone & s2).any()


def oracle_report(catalog, hs=(Fraction(1, 50), Fraction(1, 100), Fraction(1, 200))):
    """Compare the exact predicates with the lattice oracle on every site.

    Per grid: J+/J-, I+/I- (equal to J+/J- for open regions), D, causal
    convexity and pairwise causal disjointness of all catalog regions.
    """
    from . import geometry as geo
    from .report import Report

    M = catalog.spacetime
    rep = Report(scope=f"catalog {catalog.name} ({len(catalog)} regions), lattice oracle")
    regions = catalog.regions
    for h in hs:
        h = Fraction(h)
        lat = LatticeMask.for_regions(h, list(regions.values()), M)
        masks = {rid: lat.rasterize(r) for rid, r in regions.items()}
        cones = {}
        for rid, r in regions.items():
            s = masks[rid]
            fut, past = lattice_future(lat, s), lattice_past(lat, s)
            cones[rid] = fut | past
            diffs = {
                "J+": int((lat.rasterize(geo.causal_future(M, r)) != fut).sum()),
                "J-": int((lat.rasterize(geo.causal_past(M, r)) != past).sum()),
                "I+": int((lat.rasterize(geo.chronological_future(M, r)) != fut).sum()),
                "I-": int((lat.rasterize(geo.chronological_past(M, r)) != past).sum()),
            }
            if r.is_time_bounded() or r == geo.Region.whole(M):
                diffs["D"] = int((lat.rasterize(geo.cauchy_development(M, r)) != lattice_development(lat, s)).sum())
            conv = geo.is_causally_convex(M, r) == lattice_convex(lat, s)
            rep.add(f"h=1/{1 / h}: {rid} cones and development", not any(diffs.values()), witness=diffs)
            rep.add(f"h=1/{1 / h}: {rid} convexity", conv)
        bad = []
        ids = list(regions)
        for i, a in enumerate(ids):
            for b in ids[i + 1:]:
                exact = geo.are_causally_disjoint(M, regions[a], regions[b])
                if exact != (not (cones[a] & masks[b]).any()):
                    bad.append([a, b])
        rep.add(f"h=1/{1 / h}: pairwise disjointness", not bad, witness=bad or None)
    return rep
