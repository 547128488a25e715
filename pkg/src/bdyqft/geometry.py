"""Exact causal structure on flat 1+1-dimensional spacetimes with timelike boundary.

Points are described in null coordinates ``u = t - x`` and ``v = t + x``,
measured in units of the strip width (so the strip is ``0 <= x <= 1`` and
the band ``0 <= v - u <= 2``).  Future-directed causal curves are exactly
the curves along which both ``u`` and ``v`` are non-decreasing, and since
the strip is spatially convex, ``J^+_M(p)`` is the Minkowski cone of ``p``
clipped to the band.

A :class:`Region` is a finite union of open null rectangles intersected with
the spacetime.  Regions are treated as *regular* open sets (interior of the
closure), which is what every set built from causally convex open
rectangles is anyway.  Set operations and the Cauchy development are
computed exactly on the lattice generated by the rectangle bounds (see
:class:`CellGrid`); causal futures/pasts also have a closed form as unions
of quadrants.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from typing import Sequence

import numpy as np

from .errors import ConfigError, NotAnInclusion

INF = math.inf

STRIP = "strip"
HALF_PLANE = "half_plane"


def _num(x):
    """Coerce a bound to Fraction, keeping +-inf as floats."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        s = x.strip().lower()
        if s in ("inf", "+inf", "infinity"):
            return INF
        if s in ("-inf", "-infinity"):
            return -INF
        return Fraction(s)
    if isinstance(x, float):
        if math.isinf(x):
            return x
        return Fraction(x).limit_denominator(10**6)
    return Fraction(x)


def _fmt(x):
    if isinstance(x, float):
        return "inf" if x > 0 else "-inf"
    return str(x)


@dataclass(frozen=True)
class Spacetime:
    """Flat 1+1-D spacetime with timelike boundary.

    ``width`` is the physical strip width (default pi); geometry itself works
    in units of the width.  The boundary lines x=0 (and x=width for the strip)
    have a 1-D Lorentzian induced metric dt^2, i.e. they are timelike.
    """

    kind: str = STRIP
    width: float = math.pi

    def __post_init__(self):
        if self.kind not in (STRIP, HALF_PLANE):
            raise ConfigError(f"unsupported spacetime kind {self.kind!r}")
        if not self.width > 0:
            raise ConfigError("strip width must be positive")

    @property
    def band(self):
        """Upper bound of v - u, or None for the half-plane."""
        return Fraction(2) if self.kind == STRIP else None

    @classmethod
    def from_config(cls, block):
        kind = block.get("kind", STRIP)
        w = block.get("width", "pi")
        if isinstance(w, str) and w.strip().lower() == "pi":
            w = math.pi
        return cls(kind=kind, width=float(w))

    def to_config(self):
        w = "pi" if self.width == math.pi else self.width
        return {"kind": self.kind, "width": w}

    def boundary_is_timelike(self):
        # induced metric on {x = const} is -dt^2: one negative eigenvalue, 1-D
        induced = np.array([[-1.0]])
        return bool(np.all(np.linalg.eigvalsh(induced) < 0))


@dataclass(frozen=True, order=True)
class Rect:
    """Open null rectangle (u0, u1) x (v0, v1)."""

    u0: object
    u1: object
    v0: object
    v1: object

    def contains_rect(self, other):
        return (self.u0 <= other.u0 and other.u1 <= self.u1
                and self.v0 <= other.v0 and other.v1 <= self.v1)

    def contains_point(self, u, v):
        return self.u0 < u < self.u1 and self.v0 < v < self.v1

    def bounds(self):
        return (self.u0, self.u1, self.v0, self.v1)


def _tighten(rect, band):
    """Shrink a rectangle to the tightest one with the same trace on the band."""
    u0, u1, v0, v1 = rect.bounds()
    # points of the band satisfy u <= v (and v <= u + band)
    v0 = max(v0, u0)
    u1 = min(u1, v1)
    if band is not None:
        u0 = max(u0, v0 - band)
        v1 = min(v1, u1 + band)
    if not (u0 < u1 and v0 < v1):
        return None
    # trace has empty interior unless some u<v (resp. v-u<band) is available
    if not (v1 > u0):
        return None
    if band is not None and not (v0 - u1 < band):
        return None
    return Rect(u0, u1, v0, v1)


# probe points for hashing: irrational coordinates never lie on a lattice edge
_PROBES = [
    (t - x, t + x)
    for t in np.linspace(-3.0 * math.sqrt(2), 3.0 * math.sqrt(3), 17)
    for x in np.linspace(0.01 * math.pi, 0.31 * math.pi, 9)
] + [(t - x, t + x) for t in (-1.1 * math.e, 0.23 * math.e, 1.3 * math.e) for x in (0.5 * math.e, 3.1 * math.e)]


class Region:
    """Finite union of open null rectangles clipped to the spacetime."""

    __slots__ = ("spacetime", "rects", "_hash")

    def __init__(self, spacetime, rects=()):
        self.spacetime = spacetime
        band = spacetime.band
        tight = []
        for r in rects:
            if not isinstance(r, Rect):
                r = Rect(*(_num(b) for b in r))
            t = _tighten(r, band)
            if t is not None:
                tight.append(t)
        # absorb nested rectangles
        keep = []
        for k, r in enumerate(tight):
            if any(o.contains_rect(r) and (o != r or m < k) for m, o in enumerate(tight) if m != k):
                continue
            keep.append(r)
        self.rects = tuple(sorted(set(keep)))
        self._hash = None

    # ---- constructors -------------------------------------------------
    @classmethod
    def empty(cls, spacetime):
        return cls(spacetime, ())

    @classmethod
    def whole(cls, spacetime):
        return cls(spacetime, [Rect(-INF, INF, -INF, INF)])

    @classmethod
    def diamond(cls, spacetime, t, x, r):
        """Open causal diamond |t'-t| + |x'-x| < r (clipped to M)."""
        t, x, r = _num(t), _num(x), _num(r)
        return cls(spacetime, [Rect(t - x - r, t - x + r, t + x - r, t + x + r)])

    @classmethod
    def time_slab(cls, spacetime, t=0, r=Fraction(3, 25), pieces=5):
        """Chain of overlapping diamonds centred on {t = const}.

        The chain contains the whole slice {t = const}, which is a Cauchy
        surface of the strip, so its development is all of M.
        """
        if spacetime.kind != STRIP:
            raise ConfigError("time slabs are only available on the strip")
        t, r = _num(t), _num(r)
        xs = [Fraction(k, pieces) for k in range(pieces + 1)]
        if Fraction(1, pieces) >= 2 * r:
            raise ConfigError("diamonds of the slab chain do not overlap")
        return cls(spacetime, [Rect(t - x - r, t - x + r, t + x - r, t + x + r) for x in xs])

    @classmethod
    def from_literal(cls, spacetime, literal):
        """Build from ``[{"u": [u0, u1], "v": [v0, v1]}, ...]``."""
        rects = []
        for item in literal:
            (u0, u1), (v0, v1) = item["u"], item["v"]
            rects.append(Rect(_num(u0), _num(u1), _num(v0), _num(v1)))
        return cls(spacetime, rects)

    def to_literal(self):
        return [{"u": [_fmt(r.u0), _fmt(r.u1)], "v": [_fmt(r.v0), _fmt(r.v1)]} for r in self.rects]

    # ---- basic predicates ---------------------------------------------
    def is_empty(self):
        return not self.rects

    def contains_point(self, u, v):
        """Membership of a point in general position (not on a lattice edge)."""
        if v < u:
            return False
        band = self.spacetime.band
        if band is not None and v - u > band:
            return False
        return any(r.contains_point(u, v) for r in self.rects)

    def contains_tx(self, t, x):
        return self.contains_point(t - x, t + x)

    def finite_bounds(self):
        out = []
        for r in self.rects:
            out.extend(b for b in r.bounds() if not isinstance(b, float))
        return out

    def time_extent(self):
        if not self.rects:
            return (INF, -INF)
        lo = min(_half_sum(r.u0, r.v0) for r in self.rects)
        hi = max(_half_sum(r.u1, r.v1) for r in self.rects)
        return lo, hi

    def is_time_bounded(self):
        lo, hi = self.time_extent()
        return not (isinstance(lo, float) or isinstance(hi, float))

    def __eq__(self, other):
        if not isinstance(other, Region):
            return NotImplemented
        if self.spacetime != other.spacetime:
            return False
        if self.rects == other.rects:
            return True
        grid = CellGrid.for_regions([self, other])
        return np.array_equal(grid.cells(self), grid.cells(other))

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.spacetime, tuple(self.contains_point(u, v) for u, v in _PROBES)))
        return self._hash

    def __le__(self, other):
        return is_subset(self, other)

    def __or__(self, other):
        return union(self, other)

    def __and__(self, other):
        return intersection(self, other)

    def __repr__(self):
        body = ", ".join(f"({_fmt(r.u0)},{_fmt(r.u1)})x({_fmt(r.v0)},{_fmt(r.v1)})" for r in self.rects)
        return f"Region[{body}]"


def _half_sum(a, b):
    s = a + b
    return s / 2 if not isinstance(s, float) else s


def _lcm(a, b):
    return a * b // math.gcd(a, b)


@dataclass
class CellGrid:
    """Lattice of open cells generated by the bounds of a set of regions.

    Cells are ``(i*d, (i+1)*d) x (j*d, (j+1)*d)`` in (u, v) with ``d = 1/L``.
    Every rectangle bound and the band edges are lattice lines, so region
    membership is constant on cells (cells cut by the boundary diagonal are
    the half-cells j = i and j = i + 2L).  Causal curves move between cells
    by (+1, 0), (0, +1) or (+1, +1).

    The window leaves a margin of one band width beyond all bounds; the
    first and last rows then stand for the whole far past / far future, on
    which membership is constant.  On the half-plane the last column
    stands for v -> +inf and the first row for u -> -inf.
    """

    spacetime: Spacetime
    L: int
    lo: int
    hi: int
    jlo: int = field(init=False)
    jhi: int = field(init=False)

    def __post_init__(self):
        self.jlo = self.lo
        self.jhi = self.hi + 2 * self.L if self.spacetime.kind == STRIP else self.hi
        i = np.arange(self.lo, self.hi)[:, None]
        j = np.arange(self.jlo, self.jhi)[None, :]
        k = j - i
        if self.spacetime.kind == STRIP:
            self.band = (k >= 0) & (k <= 2 * self.L)
        else:
            self.band = k >= 0

    @classmethod
    def for_regions(cls, regions: Sequence[Region], extra=()):
        spacetime = regions[0].spacetime
        bounds = [b for r in regions for b in r.finite_bounds()] + [_num(e) for e in extra]
        L = reduce(_lcm, (b.denominator for b in bounds), 1)
        if spacetime.kind == STRIP:
            L = _lcm(L, 1)
        if bounds:
            bmin = math.floor(min(bounds) * L)
            bmax = math.ceil(max(bounds) * L)
        else:
            bmin = bmax = 0
        margin = 2 * L + 2 if spacetime.kind == STRIP else 2
        return cls(spacetime, L, bmin - margin, bmax + margin)

    @property
    def shape(self):
        return (self.hi - self.lo, self.jhi - self.jlo)

    def cells(self, region):
        arr = np.zeros(self.shape, dtype=bool)
        ni, nj = self.shape
        for r in region.rects:
            i0 = 0 if r.u0 == -INF else int(math.ceil(r.u0 * self.L)) - self.lo
            i1 = ni if r.u1 == INF else int(math.floor(r.u1 * self.L)) - self.lo
            j0 = 0 if r.v0 == -INF else int(math.ceil(r.v0 * self.L)) - self.jlo
            j1 = nj if r.v1 == INF else int(math.floor(r.v1 * self.L)) - self.jlo
            i0, j0 = max(i0, 0), max(j0, 0)
            i1, j1 = min(i1, ni), min(j1, nj)
            if i0 < i1 and j0 < j1:
                arr[i0:i1, j0:j1] = True
        return arr & self.band

    def region(self, arr):
        """Rectangle-union decomposition of a cell set (inverse of :meth:`cells`)."""
        arr = arr & self.band
        # cells off the band are wildcards: filling them keeps the trace on M
        # unchanged and lets runs extend to +-inf, which gives fewer rectangles
        filled = arr | ~self.band
        ni, nj = self.shape
        d = Fraction(1, self.L)
        rows = []
        for a in range(ni):
            row = filled[a]
            runs = []
            if arr[a].any():
                padded = np.concatenate(([False], row, [False]))
                edges = np.flatnonzero(padded[1:] != padded[:-1])
                runs = [(int(s), int(e)) for s, e in zip(edges[::2], edges[1::2])
                        if arr[a, s:e].any()]
            rows.append(tuple(runs))
        rects = []
        a = 0
        while a < ni:
            if not rows[a]:
                a += 1
                continue
            b = a
            while b + 1 < ni and rows[b + 1] == rows[a]:
                b += 1
            u0 = -INF if a == 0 else (self.lo + a) * d
            u1 = INF if b == ni - 1 else (self.lo + b + 1) * d
            for s, e in rows[a]:
                v0 = -INF if s == 0 else (self.jlo + s) * d
                v1 = INF if e == nj else (self.jlo + e) * d
                rects.append(Rect(u0, u1, v0, v1))
            a = b + 1
        return Region(self.spacetime, rects)

    # ---- causal sweeps ---------------------------------------------------
    def future_escape(self, region_cells):
        """Cells from which some future-inextensible causal curve avoids the set."""
        blocked = region_cells | ~self.band
        free = ~blocked
        ni, nj = self.shape
        esc = np.zeros(self.shape, dtype=bool)
        half = self.spacetime.kind == HALF_PLANE
        idx = np.arange(nj)
        for a in range(ni - 1, -1, -1):
            if a == ni - 1:
                reach = free[a].copy()
            else:
                nxt = esc[a + 1]
                reach = nxt | np.concatenate((nxt[1:], [False]))
            if half:
                reach[-1] = True
            reach &= free[a]
            # esc(j) iff a reachable exit at some j' >= j with no blocked cell in [j, j']
            nb = np.where(blocked[a], idx, nj)
            nb = np.minimum.accumulate(nb[::-1])[::-1]
            nr = np.where(reach, idx, nj + 1)
            nr = np.minimum.accumulate(nr[::-1])[::-1]
            esc[a] = free[a] & (nr < nb)
        return esc

    def past_escape(self, region_cells):
        """Cells from which some past-inextensible causal curve avoids the set."""
        blocked = region_cells | ~self.band
        free = ~blocked
        ni, nj = self.shape
        esc = np.zeros(self.shape, dtype=bool)
        idx = np.arange(nj)
        for a in range(ni):
            if a == 0:
                reach = free[a].copy()
            else:
                prv = esc[a - 1]
                reach = prv | np.concatenate(([False], prv[:-1]))
            reach &= free[a]
            # esc(j) iff a reachable exit at some j' <= j with no blocked cell in [j', j]
            pb = np.where(blocked[a], idx, -1)
            pb = np.maximum.accumulate(pb)
            pr = np.where(reach, idx, -2)
            pr = np.maximum.accumulate(pr)
            esc[a] = free[a] & (pr > pb)
        return esc

    def future_closure(self, region_cells):
        """Cells reachable from the set along future-directed moves."""
        out = np.zeros(self.shape, dtype=bool)
        ni, _ = self.shape
        for a in range(ni):
            row = region_cells[a].copy()
            if a > 0:
                prv = out[a - 1]
                row |= prv | np.concatenate(([False], prv[:-1]))
            row &= self.band[a]
            # sweep in +v within the band
            acc = np.logical_or.accumulate(row)
            # reset where the band ends (band is an interval per row)
            out[a] = acc & self.band[a]
        return out

    def past_closure(self, region_cells):
        out = np.zeros(self.shape, dtype=bool)
        ni, _ = self.shape
        for a in range(ni - 1, -1, -1):
            row = region_cells[a].copy()
            if a < ni - 1:
                nxt = out[a + 1]
                row |= nxt | np.concatenate((nxt[1:], [False]))
            row &= self.band[a]
            acc = np.logical_or.accumulate(row[::-1])[::-1]
            out[a] = acc & self.band[a]
        return out


# ---- set operations ------------------------------------------------------

def _grid(*regions):
    return CellGrid.for_regions(list(regions))


def union(a, b):
    return Region(a.spacetime, a.rects + b.rects)


def intersection(a, b):
    g = _grid(a, b)
    return g.region(g.cells(a) & g.cells(b))


def difference_is_empty(a, b):
    g = _grid(a, b)
    return not (g.cells(a) & ~g.cells(b)).any()


def is_subset(a, b):
    return difference_is_empty(a, b)


def disjoint_union(*regions):
    return reduce(union, regions)


# ---- causal structure ----------------------------------------------------

def causal_future(M, S):
    """J^+_M(S) as a union of quadrants {u > u0, v > v0}, one per rectangle."""
    return Region(M, [Rect(r.u0, INF, r.v0, INF) for r in S.rects])


def causal_past(M, S):
    return Region(M, [Rect(-INF, r.u1, -INF, r.v1) for r in S.rects])


def chronological_future(M, S):
    # S is open, so I^+(S) = J^+(S) (the quadrants are already open)
    return causal_future(M, S)


def chronological_past(M, S):
    return causal_past(M, S)


def cauchy_development(M, S):
    """D(S): points every inextensible causal curve through which meets S."""
    if S.is_empty():
        return S
    g = _grid(S)
    s = g.cells(S)
    fut = g.future_escape(s)
    past = g.past_escape(s)
    d = s | (g.band & ~s & (~fut | ~past))
    return g.region(d)


def future_development(M, S):
    """D^+(S): every past-inextensible causal curve meets S."""
    g = _grid(S)
    s = g.cells(S)
    return g.region(s | (g.band & ~g.past_escape(s)))


def past_development(M, S):
    g = _grid(S)
    s = g.cells(S)
    return g.region(s | (g.band & ~g.future_escape(s)))


def is_causally_convex(M, S):
    g = _grid(S)
    s = g.cells(S)
    hull = g.future_closure(s) & g.past_closure(s)
    return not (hull & ~s).any()


def are_causally_disjoint(M, S, S2):
    g = _grid(S, S2)
    s = g.cells(S)
    cone = g.future_closure(s) | g.past_closure(s)
    return not (cone & g.cells(S2)).any()


def is_interior(M, S):
    """True iff S contains no boundary point."""
    for r in S.rects:
        # open segment of {v = u} inside the rectangle
        if max(r.u0, r.v0) < min(r.u1, r.v1):
            return False
        if M.band is not None and max(r.u0, r.v0 - M.band) < min(r.u1, r.v1 - M.band):
            return False
    return True


def is_stable(M, S):
    return cauchy_development(M, S) == S


def is_cauchy_inclusion(M, U, U2):
    if not is_subset(U, U2):
        raise NotAnInclusion("source is not contained in target", source=repr(U), target=repr(U2))
    return cauchy_development(M, U) == cauchy_development(M, U2)
