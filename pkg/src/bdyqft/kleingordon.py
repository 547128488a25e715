"""Massless Klein-Gordon numerics on the strip 0 <= x <= a and in Minkowski space.

Conventions: P = box + m^2 with box = -d_t^2 + d_x^2 (mostly-plus metric).
In null coordinates u = t - x, v = t + x this is box = -4 d_u d_v, so

    (G^+ f)(u, v) = -1/4 * int_{u' < u, v' < v} f du' dv'
    (G^- f)(u, v) = -1/4 * int_{u' > u, v' > v} f du' dv'

i.e. the retarded kernel is -(1/2) theta(t - |x|) in (t, x) coordinates.
Both quadrant integrals are read off a cumulative table of each bump,
sampled by the midpoint rule on a grid of spacing h in (u, v).  The
Dirichlet pair on the strip is the alternating image sum of the Minkowski
one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import SupportTouchesBoundary, SupportViolation, UnsupportedMass

WIDTH = math.pi
# measured calibrate_tolerance() ratios are about 0.08; 0.2 leaves headroom
CALIBRATION_C = 0.2


def tol_quad(h, scale=1.0, c=None):
    """10 h^2 C, times a problem scale (see :func:`problem_scale`)."""
    c = CALIBRATION_C if c is None else c
    return 10.0 * h * h * c * scale


# ---- test functions -------------------------------------------------------------

@dataclass(frozen=True)
class Bump:
    """amp * (1 - s^2)^4 for s = |(t, x) - (t0, x0)| / r < 1 (C^4 at the edge)."""

    t0: float
    x0: float
    r: float
    amp: float = 1.0

    @classmethod
    def unit(cls, t0, x0, r):
        """Unit-integral bump: the profile integrates to pi r^2 / 5."""
        return cls(float(t0), float(x0), float(r), 5.0 / (math.pi * r * r))

    def _q(self, t, x):
        dt, dx = np.asarray(t) - self.t0, np.asarray(x) - self.x0
        q = 1.0 - (dt * dt + dx * dx) / (self.r * self.r)
        return dt, dx, np.where(q > 0, q, 0.0)

    def value(self, t, x):
        _, _, q = self._q(t, x)
        return self.amp * q ** 4

    def d2(self, t, x):
        """(f_tt, f_xx) in closed form."""
        dt, dx, q = self._q(t, x)
        r2 = self.r * self.r
        ftt = self.amp * (48.0 * q * q * dt * dt / (r2 * r2) - 8.0 * q ** 3 / r2)
        fxx = self.amp * (48.0 * q * q * dx * dx / (r2 * r2) - 8.0 * q ** 3 / r2)
        return ftt, fxx

    def box(self, t, x):
        ftt, fxx = self.d2(t, x)
        return -ftt + fxx

    def shifted(self, x0, sign=1.0):
        return Bump(self.t0, x0, self.r, sign * self.amp)


@dataclass(frozen=True)
class Term:
    coeff: float
    bump: Bump
    kind: str = "f"  # "f" for the bump, "P" for P applied to it
    mass: float = 0.0

    def value(self, t, x):
        if self.kind == "f":
            return self.coeff * self.bump.value(t, x)
        return self.coeff * (self.bump.box(t, x) + self.mass ** 2 * self.bump.value(t, x))


@dataclass(frozen=True)
class TestFunction:
    """Finite real-linear combination of bumps (and P applied to bumps)."""

    terms: tuple = ()
    __test__ = False  # not a pytest class

    @classmethod
    def of(cls, *bumps, coeffs=None):
        coeffs = coeffs or [1.0] * len(bumps)
        return cls(tuple(Term(float(c), b) for c, b in zip(coeffs, bumps)))

    def __call__(self, t, x):
        out = np.zeros(np.broadcast(np.asarray(t), np.asarray(x)).shape)
        for term in self.terms:
            out = out + term.value(t, x)
        return out

    def __add__(self, other):
        return TestFunction(self.terms + other.terms)

    def scale(self, c):
        return TestFunction(tuple(Term(c * s.coeff, s.bump, s.kind, s.mass) for s in self.terms))

    def disks(self):
        return [(s.bump.t0, s.bump.x0, s.bump.r) for s in self.terms]

    def is_zero(self):
        return not self.terms

    def to_json(self):
        return [
            {"coeff": s.coeff, "kind": s.kind, "mass": s.mass, "t0": s.bump.t0, "x0": s.bump.x0, "r": s.bump.r, "amp": s.bump.amp}
            for s in self.terms
        ]

    @classmethod
    def from_json(cls, doc):
        return cls(tuple(Term(d["coeff"], Bump(d["t0"], d["x0"], d["r"], d.get("amp", 1.0)), d.get("kind", "f"), d.get("mass", 0.0)) for d in doc))


def apply_P(f: TestFunction, m=0.0):
    """P f = box f + m^2 f with analytic second derivatives."""
    out = []
    for s in f.terms:
        if s.kind != "f":
            raise ValueError("P can only be applied to plain bumps (C^4 profile, two derivatives)")
        out.append(Term(s.coeff, s.bump, "P", float(m)))
    return TestFunction(tuple(out))


def support_in_region(f: TestFunction, region, width=WIDTH):
    """Every support disk lies inside a single rectangle of ``region``.

    Region bounds are in units of the strip width; a disk of radius r sits
    inside {u0 < u < u1} iff its centre is at least r*sqrt(2) from the lines.
    """
    for t0, x0, r in f.disks():
        uc, vc = (t0 - x0) / width, (t0 + x0) / width
        d = r * math.sqrt(2) / width
        ok = any(
            float(R.u0) + d <= uc <= float(R.u1) - d and float(R.v0) + d <= vc <= float(R.v1) - d
            for R in region.rects
        )
        if not ok:
            return False
    return True


def support_interior(f: TestFunction, width=WIDTH, half_plane=False):
    for _, x0, r in f.disks():
        if x0 - r <= 0 or (not half_plane and x0 + r >= width):
            return False
    return True


# ---- cumulative tables ------------------------------------------------------------

@lru_cache(maxsize=4096)
def _cdf_table(term: Term, h: float):
    """Node grid and cumulative integral of one term over its null box."""
    b = term.bump
    uc, vc = b.t0 - b.x0, b.t0 + b.x0
    R = b.r * math.sqrt(2)
    n = int(math.ceil(2 * R / h)) + 2
    u_nodes = uc - R - h + h * np.arange(n + 1)
    v_nodes = vc - R - h + h * np.arange(n + 1)
    um = 0.5 * (u_nodes[:-1] + u_nodes[1:])
    vm = 0.5 * (v_nodes[:-1] + v_nodes[1:])
    U, V = np.meshgrid(um, vm, indexing="ij")
    vals = term.value(0.5 * (U + V), 0.5 * (V - U)) * h * h
    F = np.zeros((n + 1, n + 1))
    F[1:, 1:] = np.cumsum(np.cumsum(vals, axis=0), axis=1)
    return u_nodes, v_nodes, F


def _bilinear(nodes_u, nodes_v, F, u, v):
    h = nodes_u[1] - nodes_u[0]
    fu = np.clip((u - nodes_u[0]) / h, 0, len(nodes_u) - 1)
    fv = np.clip((v - nodes_v[0]) / h, 0, len(nodes_v) - 1)
    i = np.minimum(np.floor(fu).astype(int), len(nodes_u) - 2)
    j = np.minimum(np.floor(fv).astype(int), len(nodes_v) - 2)
    a, b = fu - i, fv - j
    return (
        (1 - a) * (1 - b) * F[i, j] + a * (1 - b) * F[i + 1, j]
        + (1 - a) * b * F[i, j + 1] + a * b * F[i + 1, j + 1]
    )


def _quadrant(term, h, u, v, direction):
    nu, nv, F = _cdf_table(term, h)
    if direction > 0:
        return _bilinear(nu, nv, F, u, v)
    big_u = np.full_like(u, nu[-1])
    big_v = np.full_like(v, nv[-1])
    tot = F[-1, -1]
    return tot - _bilinear(nu, nv, F, u, big_v) - _bilinear(nu, nv, F, big_u, v) + _bilinear(nu, nv, F, u, v)


# ---- Green's operators ------------------------------------------------------------

@dataclass
class GreenPair:
    """Retarded/advanced Green's operators of the massless Klein-Gordon operator."""

    flavor: str = "minkowski"  # or "dirichlet_strip"
    width: float = WIDTH
    h: float = WIDTH / 200
    mass: float = 0.0
    n_img: int | None = None
    restrict_to: object = field(default=None, repr=False)

    def __post_init__(self):
        if self.mass != 0:
            raise UnsupportedMass("only the massless closed form is implemented", mass=self.mass)
        if self.flavor not in ("minkowski", "dirichlet_strip"):
            raise ValueError(f"unknown Green's operator flavor {self.flavor!r}")

    def images(self, term: Term, t_span: float):
        """Image terms for the strip: + at x0 + 2na, - at 2na - x0."""
        if self.flavor == "minkowski":
            return [term]
        a = self.width
        n_img = self.n_img if self.n_img is not None else int(math.ceil(t_span / (2 * a))) + 1
        out = []
        b = term.bump
        for n in range(-n_img, n_img + 1):
            out.append(Term(term.coeff, b.shifted(b.x0 + 2 * n * a), term.kind, term.mass))
            out.append(Term(term.coeff, b.shifted(2 * n * a - b.x0, -1.0), term.kind, term.mass))
        return out

    def check_source(self, f: TestFunction):
        if self.flavor == "dirichlet_strip" and not support_interior(f, self.width):
            raise SupportTouchesBoundary("source support meets the boundary", disks=f.disks())

    def apply(self, f: TestFunction, t, x, direction=+1):
        """(G^direction f)(t, x) sampled at arrays t, x."""
        self.check_source(f)
        t = np.asarray(t, dtype=float)
        x = np.asarray(x, dtype=float)
        t, x = np.broadcast_arrays(t, x)
        u, v = t - x, t + x
        out = np.zeros(t.shape)
        for term in f.terms:
            span = float(np.max(np.abs(t - term.bump.t0), initial=0.0)) + term.bump.r
            for img in self.images(term, span):
                out += -0.25 * _quadrant(img, self.h, u, v, direction)
        if self.restrict_to is not None:
            out = np.where(self.restrict_to(t, x), out, 0.0)
        return out

    def retarded(self, f, t, x):
        return self.apply(f, t, x, +1)

    def advanced(self, f, t, x):
        return self.apply(f, t, x, -1)

    def causal(self, f, t, x):
        return self.apply(f, t, x, +1) - self.apply(f, t, x, -1)


def green_minkowski(f, t, x, direction=+1, h=WIDTH / 200, mass=0.0):
    return GreenPair("minkowski", h=h, mass=mass).apply(f, t, x, direction)


def green_dirichlet_strip(f, t, x, direction=+1, h=WIDTH / 200, width=WIDTH, mass=0.0):
    return GreenPair("dirichlet_strip", width=width, h=h, mass=mass).apply(f, t, x, direction)


def restrict_green(G: GreenPair, region, width=WIDTH):
    """G_V = pullback o G o pushforward: values outside V are discarded."""

    def inside(t, x):
        u, v = (t - x) / width, (t + x) / width
        out = np.zeros(np.shape(t), dtype=bool)
        for R in region.rects:
            out |= (u > float(R.u0)) & (u < float(R.u1)) & (v > float(R.v0)) & (v < float(R.v1))
        return out

    return GreenPair(G.flavor, G.width, G.h, G.mass, G.n_img, restrict_to=inside)


# ---- quadrature helpers -------------------------------------------------------------

def integrate_against(f: TestFunction, field_fn, h):
    """int f * field dt dx by the midpoint rule on each term's own disk."""
    total = 0.0
    for term in f.terms:
        b = term.bump
        n = int(math.ceil(b.r / h))
        ts = b.t0 + h * (np.arange(-n, n) + 0.5)
        xs = b.x0 + h * (np.arange(-n, n) + 0.5)
        T, X = np.meshgrid(ts, xs, indexing="ij")
        keep = (T - b.t0) ** 2 + (X - b.x0) ** 2 < b.r * b.r
        T, X = T[keep], X[keep]
        total += float(np.sum(term.value(T, X) * field_fn(T, X))) * h * h
    return total


def l1_norm(f: TestFunction, h):
    """int |f| by the midpoint rule on a grid covering all support disks."""
    disks = f.disks()
    t0 = min(t - r for t, _, r in disks)
    t1 = max(t + r for t, _, r in disks)
    x0 = min(x - r for _, x, r in disks)
    x1 = max(x + r for _, x, r in disks)
    ts = t0 + h * (np.arange(int(math.ceil((t1 - t0) / h))) + 0.5)
    xs = x0 + h * (np.arange(int(math.ceil((x1 - x0) / h))) + 0.5)
    T, X = np.meshgrid(ts, xs, indexing="ij")
    return float(np.sum(np.abs(f(T, X)))) * h * h


def tau(G: GreenPair, f: TestFunction, g: TestFunction, region=None, width=WIDTH):
    """tau_V(f, g) = int_V f (G^+ - G^-) g."""
    if region is not None:
        for name, k in (("f", f), ("g", g)):
            if not support_in_region(k, region, width):
                raise SupportViolation(f"support of {name} is not inside the region", disks=k.disks())
        G = restrict_green(G, region, width)
    return integrate_against(f, lambda t, x: G.causal(g, t, x), G.h)


def tau_matrix(G, basis, region=None, width=WIDTH):
    n = len(basis)
    out = np.zeros((n, n))
    for i in range(n):
        for j in range(n):
            out[i, j] = tau(G, basis[i], basis[j], region, width)
    return out


# ---- residuals of the Green's axioms ---------------------------------------------------

def residual_PG(G: GreenPair, f: TestFunction, t, x, direction=+1, delta=None):
    """max |P G f - f| at sample points, P taken as a null-box difference.

    -4 d_u d_v on a box of half-width delta in u and v is the box average of
    P G f, compared with the box average of f itself.
    """
    delta = delta or 2 * G.h
    t, x = np.asarray(t, float), np.asarray(x, float)
    u, v = t - x, t + x

    def Gv(uu, vv):
        return G.apply(f, 0.5 * (uu + vv), 0.5 * (vv - uu), direction)

    mixed = Gv(u + delta, v + delta) - Gv(u + delta, v - delta) - Gv(u - delta, v + delta) + Gv(u - delta, v - delta)
    pgf = -mixed / (delta * delta)
    # box average of f over the same null box (4x4 midpoint)
    k = 4
    offs = delta * ((np.arange(k) + 0.5) * 2 / k - 1)
    avg = np.zeros_like(u)
    for du in offs:
        for dv in offs:
            uu, vv = u + du, v + dv
            avg += f(0.5 * (uu + vv), 0.5 * (vv - uu))
    avg /= k * k
    return float(np.max(np.abs(pgf - avg), initial=0.0))


def residual_GP(G: GreenPair, f: TestFunction, t, x, direction=+1):
    """max |G P f - f| at sample points."""
    Pf = apply_P(f, G.mass)
    return float(np.max(np.abs(G.apply(Pf, t, x, direction) - f(t, x)), initial=0.0))


def adjoint_defect(G: GreenPair, f: TestFunction, g: TestFunction):
    """| int G^+(f) g - int f G^-(g) |."""
    lhs = integrate_against(g, lambda t, x: G.retarded(f, t, x), G.h)
    rhs = integrate_against(f, lambda t, x: G.advanced(g, t, x), G.h)
    return abs(lhs - rhs)


def boundary_trace(G: GreenPair, f: TestFunction, t):
    t = np.asarray(t, float)
    left = G.retarded(f, t, np.zeros_like(t))
    right = G.retarded(f, t, np.full_like(t, G.width))
    return float(max(np.max(np.abs(left)), np.max(np.abs(right))))


def support_violation(G: GreenPair, f: TestFunction, t, x, direction=+1, eps=1e-14):
    """Largest |G f| at samples outside J^direction(supp f) dilated by one cell."""
    vals = G.apply(f, t, x, direction)
    outside = ~_cone_exact(f, t, x, direction, G.width if G.flavor == "dirichlet_strip" else None, slack=G.h * math.sqrt(2))
    return float(np.max(np.abs(vals[outside]), initial=0.0))


def _cone_exact(f, t, x, direction, width, slack=0.0):
    """Exact J^direction of a union of disks (clipped to the strip when width is set).

    For a disk of radius r the causal future is {dt >= |dx| - ...}: a point
    lies in J^+(disk) iff some disk point q has t - t_q >= |x - x_q|, i.e.
    iff (t - t0) + ... >= the cone distance; in null coordinates this is
    u >= min_u(disk) and v >= min_v(disk).
    """
    t, x = np.broadcast_arrays(np.asarray(t, float), np.asarray(x, float))
    u, v = t - x, t + x
    out = np.zeros(t.shape, dtype=bool)
    for t0, x0, r in f.disks():
        uc, vc = t0 - x0, t0 + x0
        R = r * math.sqrt(2)
        if direction > 0:
            out |= (u >= uc - R - slack) & (v >= vc - R - slack)
        else:
            out |= (u <= uc + R + slack) & (v <= vc + R + slack)
    return out


def problem_scale(f: TestFunction):
    """Size of the second derivatives of f: sum of |coeff| amp / r^2."""
    return sum(abs(s.coeff * s.bump.amp) / s.bump.r ** 2 for s in f.terms)


def random_bump(rng, width=WIDTH, r_range=(0.2, 0.5)):
    r = rng.uniform(*r_range)
    return Bump.unit(rng.uniform(-1.0, 1.0), rng.uniform(r + 0.1, width - r - 0.1), r)


def calibrate_tolerance(h_values=(WIDTH / 100, WIDTH / 200), n=5, seed=0):
    """max residual / (10 h^2 scale) over random unit bumps, per grid size."""
    rng = np.random.default_rng(seed)
    out = []
    for h in h_values:
        G = GreenPair("minkowski", h=h)
        worst = 0.0
        for _ in range(n):
            b = random_bump(rng)
            f = TestFunction.of(b)
            ts = b.t0 + rng.uniform(-b.r, b.r, 60)
            xs = b.x0 + rng.uniform(-b.r, b.r, 60)
            res = max(residual_GP(G, f, ts, xs), residual_PG(G, f, ts, xs))
            worst = max(worst, res / (10 * h * h * problem_scale(f)))
        out.append(worst)
    return out


def tau_point_pair(G: GreenPair, T, radii, x0=None):
    """tau(f, g) for unit bumps at (0, x0) and (T, x0), one value per radius."""
    x0 = G.width / 2 if x0 is None else x0
    return [tau(G, TestFunction.of(Bump.unit(0.0, x0, r)), TestFunction.of(Bump.unit(T, x0, r))) for r in radii]


# ---- experiment suites ------------------------------------------------------------

def _cone_samples(rng, f, n, t_span=1.5, width=WIDTH):
    b = f.terms[0].bump
    return b.t0 + rng.uniform(-t_span, t_span, n), rng.uniform(0.0, width, n)


def green_axiom_report(h=WIDTH / 200, n_bumps=10, seed=0, width=WIDTH, n_samples=60):
    """Green's-operator axioms for random bumps, both flavors."""
    from .report import Report

    rng = np.random.default_rng(seed)
    rep = Report(scope=f"h={h:.6g}, {n_bumps} random unit bumps, massless, width={width:.6g}")
    Gm = GreenPair("minkowski", width=width, h=h)
    Gd = GreenPair("dirichlet_strip", width=width, h=h)
    for k in range(n_bumps):
        b = random_bump(rng, width)
        f = TestFunction.of(b)
        tol = tol_quad(h, problem_scale(f))
        ts = b.t0 + rng.uniform(-b.r, b.r, n_samples)
        xs = b.x0 + rng.uniform(-b.r, b.r, n_samples)
        for G in (Gm, Gd):
            for d, sgn in ((+1, "+"), (-1, "-")):
                r1 = residual_PG(G, f, ts, xs, d)
                rep.add(f"bump{k} {G.flavor}: P G{sgn} f - f", r1 <= tol, witness=r1, tolerance=tol)
                r2 = residual_GP(G, f, ts, xs, d)
                rep.add(f"bump{k} {G.flavor}: G{sgn} P f - f", r2 <= tol, witness=r2, tolerance=tol)
                ct, cx = _cone_samples(rng, f, 4 * n_samples, width=width)
                sv = support_violation(G, f, ct, cx, d)
                rep.add(f"bump{k} {G.flavor}: supp G{sgn} f in J{sgn}", sv <= 1e-12, witness=sv, tolerance="one grid cell")
        g = TestFunction.of(random_bump(rng, width))
        tol1 = tol_quad(h)
        ad = adjoint_defect(Gd, f, g)
        rep.add(f"bump{k} dirichlet_strip: adjoint defect", ad <= tol1, witness=ad, tolerance=tol1)
        bt = boundary_trace(Gd, f, b.t0 + np.linspace(-3.0, 3.0, 61))
        rep.add(f"bump{k} dirichlet_strip: boundary trace", bt <= tol1, witness=bt, tolerance=tol1)
    return rep


def image_truncation_defect(G: GreenPair, f: TestFunction, t, x):
    """max change of sampled values when the image count is doubled."""
    base = G.apply(f, t, x)
    span = float(np.max(np.abs(np.asarray(t) - f.terms[0].bump.t0))) + f.terms[0].bump.r
    n = int(math.ceil(span / (2 * G.width))) + 1
    wide = GreenPair(G.flavor, G.width, G.h, G.mass, 2 * n).apply(f, t, x)
    return float(np.max(np.abs(wide - base)))


def mode_function(t, x, k=1, m=0.0):
    return np.cos(math.sqrt(k * k + m * m) * t) * np.sin(k * x)


def demonstrate_nonsurjectivity(G: GreenPair, phi: TestFunction, nt=121, nx=61, t_max=None):
    """Support mask of G(phi) = (G+ - G-)(phi) versus a mode function.

    Returns (report, grids) with grids holding the sample axes and both masks.
    The wedges are the cells with x < x_c - R - |t - t0| (and the mirror
    image at x = a), which lie outside J+ and J- of the support.
    """
    from .report import Report

    if not support_interior(phi, G.width):
        raise SupportTouchesBoundary("phi must be supported in the interior", disks=phi.disks())
    b = phi.terms[0].bump
    t_max = t_max or 1.5 * G.width
    dt = 2 * t_max / nt
    ts = b.t0 - t_max + dt * (np.arange(nt) + 0.5)
    xs = G.width * (np.arange(nx) + 0.5) / nx
    T, X = np.meshgrid(ts, xs, indexing="ij")
    field_ = G.causal(phi, T, X)
    eps = 1e-12
    mask = np.abs(field_) > eps
    mode = mode_function(T, X)
    mode_mask = np.abs(mode) > 0
    cone = _cone_exact(phi, T, X, +1, G.width, slack=G.h * 2) | _cone_exact(phi, T, X, -1, G.width, slack=G.h * 2)
    # near-boundary wedges before the first light-crossing
    lo = min(x0 - r * math.sqrt(2) for _, x0, r in phi.disks())
    hi = max(x0 + r * math.sqrt(2) for _, x0, r in phi.disks())
    left = X < lo - np.abs(T - b.t0)
    right = X > hi + np.abs(T - b.t0)
    rep = Report(scope=f"grid {nt}x{nx}, t in [{ts[0]:.4g}, {ts[-1]:.4g}], h={G.h:.6g}")
    rep.add("left wedge nonempty on grid", left.any(), witness=int(left.sum()))
    rep.add("right wedge nonempty on grid", right.any(), witness=int(right.sum()))
    rep.add("G(phi) vanishes on left wedge", not (mask & left).any(), witness=int((mask & left).sum()))
    rep.add("G(phi) vanishes on right wedge", not (mask & right).any(), witness=int((mask & right).sum()))
    rep.add("supp G(phi) inside J+ u J- of supp phi", not (mask & ~cone).any(), witness=int((mask & ~cone).sum()))
    rep.add("mode function mask is full", bool(mode_mask.all()), witness=int((~mode_mask).sum()))
    rep.add("G(phi) mask is not full", not mask.all(), witness=int((~mask).sum()))
    return rep, {"t": ts, "x": xs, "green_mask": mask, "mode_mask": mode_mask, "green": field_}


def write_mask_csv(path, ts, xs, mask):
    """One row per t sample; the first column is t, the header row holds x."""
    with open(path, "w") as fh:
        fh.write("t," + ",".join(f"{x:.6g}" for x in xs) + "\n")
        for t, row in zip(ts, mask):
            fh.write(f"{t:.6g}," + ",".join(str(int(v)) for v in row) + "\n")
