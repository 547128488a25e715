"""Batch entry point: ``bdyqft <command> [--config FILE] [--out DIR] ...``.

Every command writes ``<out>/<command>.json`` with the schema
{command, config_hash, config, scope, checks: [{name, status, witness, tolerance}], ...}
plus CSV grids and PNG figures where relevant.  Exit status is 0 iff every
check passes, 1 if some check fails, 2 on a structured error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np

from .errors import BdyQFTError, ConfigError
from .report import Report, config_hash, jsonable

COMMANDS = (
    "geometry-check",
    "catalog-build",
    "axioms",
    "extend",
    "characterize",
    "iqft-roundtrip",
    "kg-green",
    "kg-ideal",
    "kg-support",
)

INTERIOR_FIXTURES = ("trivial", "points", "triangular", "dual")
THEORY_FIXTURES = ("ext", "threshold", "boundary-generator", "constant")


@dataclass
class RunConfig:
    spacetime: dict = field(default_factory=lambda: {"kind": "strip", "width": "pi"})
    seeds: object = "standard"
    tol_lin: float = 1e-9
    tol_quad: float | None = None
    grid_h: float | None = None
    lattice_grids: list = field(default_factory=lambda: [50, 100, 200])
    L: int = 4
    max_len: int = 4
    oracle_len: int = 3
    n_img: int | None = None
    fixture: str = "all"
    n_bumps: int = 10
    seed: int = 0
    figures: bool = True

    def validate(self):
        for name in ("tol_lin", "tol_quad", "grid_h"):
            v = getattr(self, name)
            if v is not None and not v > 0:
                raise ConfigError(f"{name} must be positive", field=name, value=v)
        for name in ("L", "max_len", "oracle_len", "n_bumps"):
            if getattr(self, name) < 1:
                raise ConfigError(f"{name} must be at least 1", field=name)
        if self.n_img is not None and self.n_img < 1:
            raise ConfigError("n_img must be at least 1", field="n_img")
        if self.max_len > 4 or self.oracle_len > 4:
            raise ConfigError("truncation lengths above 4 are not supported", max_len=self.max_len)
        if any(int(n) < 2 for n in self.lattice_grids):
            raise ConfigError("lattice grids are given as N for h = a/N, N >= 2")
        return self

    def to_dict(self):
        return asdict(self)

    @classmethod
    def from_dict(cls, doc):
        known = set(cls.__dataclass_fields__)
        extra = set(doc) - known
        if extra:
            raise ConfigError(f"unknown config keys {sorted(extra)}", keys=sorted(extra))
        return cls(**doc).validate()

    def h(self):
        from .kleingordon import WIDTH

        return self.grid_h if self.grid_h is not None else WIDTH / 200


def load_config(path=None, overrides=None):
    doc = {}
    if path:
        with open(path) as fh:
            doc = json.load(fh)
    doc.update({k: v for k, v in (overrides or {}).items() if v is not None})
    return RunConfig.from_dict(doc)


# ---- catalog from config --------------------------------------------------------------------

def _region(M, spec):
    from .geometry import Region

    if spec == "whole":
        return Region.whole(M)
    if "diamond" in spec:
        return Region.diamond(M, *[Fraction(str(z)) for z in spec["diamond"]])
    if "time_slab" in spec:
        return Region.time_slab(M, **{k: Fraction(str(v)) if k != "pieces" else int(v) for k, v in spec["time_slab"].items()})
    if "rects" in spec:
        return Region.from_literal(M, spec["rects"])
    raise ConfigError("region spec needs one of diamond, time_slab, rects or 'whole'", spec=spec)


def catalog_from_config(cfg):
    from .catalog import build_catalog, small_catalog, standard_catalog
    from .geometry import Spacetime

    M = Spacetime.from_config(cfg.spacetime)
    seeds = cfg.seeds
    if seeds == "standard":
        return standard_catalog(M)
    if seeds == "small":
        return small_catalog(M)
    if isinstance(seeds, str):
        raise ConfigError(f"unknown seed set {seeds!r}", seeds=seeds)
    return build_catalog(M, {k: _region(M, v) for k, v in dict(seeds).items()} if seeds else {}, name="config")


# ---- commands ------------------------------------------------------------------------------------

def cmd_geometry_check(cfg, out):
    from .lattice import oracle_report

    C = catalog_from_config(cfg)
    rep = oracle_report(C, [Fraction(1, int(n)) for n in cfg.lattice_grids])
    if cfg.figures:
        from .plotting import plot_catalog

        plot_catalog(C, out / "geometry-check_catalog.png")
    return rep, {"catalog": C.to_json()}


def cmd_catalog_build(cfg, out):
    from .catalog import check_adjunction_DI, embed_J, localize

    C = catalog_from_config(cfg)
    L, D = localize(C)
    rep = Report(scope=f"catalog {C.name} ({len(C)} regions, {len(L)} stable)")
    rep.extend(check_adjunction_DI(C, L, D), prefix="adjunction: ")
    _, jrep = embed_J(L)
    rep.extend(jrep, prefix="J: ")
    (out / "catalog.json").write_text(C.dumps())
    if cfg.figures:
        from .plotting import plot_catalog

        plot_catalog(C, out / "catalog-build.png")
    return rep, {"catalog": C.to_json(), "localized": L.ids}


def _interior_fixtures(cfg, L):
    from .fixtures import interior_fixtures

    fx = interior_fixtures(L)
    if cfg.fixture in ("all",) + THEORY_FIXTURES:
        return fx
    if cfg.fixture not in fx:
        raise ConfigError(f"unknown interior fixture {cfg.fixture!r}", choices=list(fx))
    return {cfg.fixture: fx[cfg.fixture]}


def cmd_axioms(cfg, out):
    from .extension import ext_theory, unit_morphism
    from .fixtures import char_catalog, noncommuting_fixture
    from .theory import check_causality, check_equivalence_roundtrips, check_functoriality, pullback_D

    C, L, D = char_catalog(full=True)
    rep = Report(scope=f"fixture catalog char ({len(C)} regions); ext truncated at max_len={cfg.max_len}")
    for name, A in _interior_fixtures(cfg, L).items():
        rep.extend(check_functoriality(A, cfg.tol_lin), prefix=f"{name} interior: ")
        rep.extend(check_causality(A, cfg.tol_lin), prefix=f"{name} interior: ")
        X = ext_theory(A, L, cfg.max_len)
        B = X.theory
        rep.extend(check_functoriality(B, cfg.tol_lin), prefix=f"ext {name}: ")
        rep.extend(check_causality(B, cfg.tol_lin), prefix=f"ext {name}: ")
        eta = unit_morphism(X)
        for v in A.ids:
            f = eta[v]
            rep.add(f"ext {name}: F-locality unit at {v} bijective", f.is_isomorphism(), witness={"dims": [f.source.dim, f.target.dim]})
        T2 = pullback_D(B, D)
        rep.extend(check_equivalence_roundtrips(B, T2, L, D, cfg.tol_lin), prefix=f"ext {name}: ")
    nc = check_causality(noncommuting_fixture(L), cfg.tol_lin)
    rep.add("negative control: non-commuting fixture violates causality", not nc.ok, witness=[c.name for c in nc.failures()])
    return rep, {}


def cmd_extend(cfg, out):
    from .extension import ExtAlgebra, brute_force_quotient
    from .fixtures import ext_catalog

    L = ext_catalog()
    n = cfg.oracle_len
    rep = Report(scope=f"fixture catalog ext ({len(L)} regions); normal forms and oracle at max_len={n}")
    dims = {}
    for name, A in _interior_fixtures(cfg, L).items():
        for V in L.ids:
            E = ExtAlgebra(A, L, V, max_len=n)
            nf = E.span_dimension(n)
            bf = brute_force_quotient(A, L, V, max_len=n).dim
            dims[f"{name}/{V}"] = {"normal_form": nf, "oracle": bf}
            rep.add(f"{name} at {V}: normal-form span = oracle quotient", nf == bf, witness=dims[f"{name}/{V}"])
    return rep, {"dimensions": dims}


def _theory_fixtures(cfg, L):
    from .extension import ext_theory
    from .fixtures import boundary_generator_theory, constant_theory, interior_fixtures, threshold_theory

    fx = {
        "ext": lambda: ext_theory(interior_fixtures(L)["points"], L, cfg.max_len).theory,
        "threshold": lambda: threshold_theory(L),
        "boundary-generator": lambda: boundary_generator_theory(L),
        "constant": lambda: constant_theory(L),
    }
    if cfg.fixture == "all":
        return {k: f() for k, f in fx.items()}
    if cfg.fixture not in fx:
        raise ConfigError(f"unknown theory fixture {cfg.fixture!r}", choices=list(fx))
    return {cfg.fixture: fx[cfg.fixture]()}


def cmd_characterize(cfg, out):
    from .extension import characterize
    from .fixtures import char_catalog

    L = char_catalog()
    rep = Report(scope=f"fixture catalog char ({len(L)} regions); max_len={cfg.max_len}")
    tables = {}
    for name, B in _theory_fixtures(cfg, L).items():
        r, rows = characterize(B, cfg.max_len, cfg.tol_lin)
        rep.extend(r, prefix=f"{name}: ")
        tables[name] = rows
        if cfg.figures:
            from .plotting import plot_dims

            plot_dims(rows, out / f"characterize_{name}.png", title=name)
    return rep, {"objects": tables}


def cmd_iqft_roundtrip(cfg, out):
    from .extension import IQFTPair, ext_theory, roundtrip_check
    from .fixtures import char_catalog, interior_fixtures, threshold_theory
    from .extension import ideal_from_generators
    from .kgtheory import KGSetup, build_interior_theory, build_kext, kg_bumps, kg_catalog, kg_roundtrip_report

    L = char_catalog()
    rep = Report(scope=f"fixture catalog char and the KG desk catalog; max_len={cfg.max_len}, CCR degree L={cfg.L}")
    rep.extend(roundtrip_check(B=threshold_theory(L), max_len=cfg.max_len, tol=cfg.tol_lin), prefix="threshold: ")
    A = interior_fixtures(L)["points"]
    X = ext_theory(A, L, cfg.max_len)
    I = ideal_from_generators(X.theory, {"B1": [X.theory["B1"].basis(0)]})
    rep.extend(roundtrip_check(pair=IQFTPair(A, I, X), max_len=cfg.max_len, tol=cfg.tol_lin), prefix="points/I: ")
    S = KGSetup(kg_catalog(), kg_bumps(), h=cfg.h(), max_degree=cfg.L)
    K = build_interior_theory(S)
    Kext = build_kext(K, S)
    rep.extend(kg_roundtrip_report(K, Kext, S), prefix="KG: ")
    return rep, {}


def _kg_setup(cfg):
    from .kgtheory import KGSetup, kg_bumps, kg_catalog

    S = KGSetup(kg_catalog(), kg_bumps(), h=cfg.h(), max_degree=cfg.L)
    if cfg.tol_quad is not None:
        S.tol = cfg.tol_quad
    if cfg.n_img is not None:
        S.Gd.n_img = cfg.n_img
    return S


def cmd_kg_green(cfg, out):
    from .kgtheory import interior_uniqueness_report, tau_report
    from .kleingordon import GreenPair, TestFunction, green_axiom_report, image_truncation_defect, random_bump

    S = _kg_setup(cfg)
    rep = green_axiom_report(h=cfg.h(), n_bumps=cfg.n_bumps, seed=cfg.seed)
    rep.extend(interior_uniqueness_report(S), prefix="uniqueness: ")
    trep, conv = tau_report(S)
    rep.extend(trep, prefix="tau: ")
    rng = np.random.default_rng(cfg.seed + 1)
    Gd = GreenPair("dirichlet_strip", h=cfg.h(), n_img=cfg.n_img)
    worst = 0.0
    for _ in range(3):
        f = TestFunction.of(random_bump(rng))
        ts = rng.uniform(-6.0, 6.0, 200)
        xs = rng.uniform(0.0, Gd.width, 200)
        worst = max(worst, image_truncation_defect(Gd, f, ts, xs))
    rep.add("image series: doubling N_img changes nothing", worst <= 1e-12, witness=worst, tolerance=1e-12)
    if cfg.figures:
        from .plotting import plot_residuals, plot_tau_convergence

        plot_residuals(rep, out / "kg-green_residuals.png")
        plot_tau_convergence(conv["radii"], conv["tau"], out / "kg-green_tau.png")
    return rep, {"tau_point_pair": conv}


def cmd_kg_ideal(cfg, out):
    from .kgtheory import build_interior_theory, build_kext, check_interior_theory, gamma_report, kg_ideal_report, oracle_report

    S = _kg_setup(cfg)
    K = build_interior_theory(S)
    rep = Report(scope=f"KG desk catalog, h={S.h:.6g}, CCR degree L={S.max_degree}")
    rep.extend(check_interior_theory(K, S), prefix="K: ")
    Kext = build_kext(K, S)
    rep.extend(gamma_report(K, Kext, S), prefix="Kext: ")
    for V in S.L.ids:
        if not S.L.interior[V]:
            rep.extend(oracle_report(K, Kext, S, V, degree=min(cfg.oracle_len, 3)), prefix="Kext oracle: ")
    irep, I, Q = kg_ideal_report(K, Kext, S)
    rep.extend(irep, prefix="ideal: ")
    taus = {V: {"labels": Q.gens[V], "tau": Q[V].tau} for V in S.L.ids}
    return rep, {"tau_matrices": taus, "ideal_dims": I.dims(), "free_pairs": {V: [[Kext[V].labels[i], Kext[V].labels[j]] for i, j in Kext[V].free_pairs()] for V in S.L.ids}}


def cmd_kg_support(cfg, out):
    from .kleingordon import Bump, GreenPair, TestFunction, demonstrate_nonsurjectivity, write_mask_csv

    G = GreenPair("dirichlet_strip", h=cfg.h(), n_img=cfg.n_img)
    phi = TestFunction.of(Bump.unit(0.0, G.width / 2, 0.2))
    rep, grids = demonstrate_nonsurjectivity(G, phi)
    write_mask_csv(out / "kg-support_green_mask.csv", grids["t"], grids["x"], grids["green_mask"])
    write_mask_csv(out / "kg-support_mode_mask.csv", grids["t"], grids["x"], grids["mode_mask"])
    if cfg.figures:
        from .plotting import plot_support_masks

        plot_support_masks(grids, phi.disks(), G.width, out / "kg-support.png")
    return rep, {"phi": phi.to_json(), "csv": ["kg-support_green_mask.csv", "kg-support_mode_mask.csv"]}


HANDLERS = {
    "geometry-check": cmd_geometry_check,
    "catalog-build": cmd_catalog_build,
    "axioms": cmd_axioms,
    "extend": cmd_extend,
    "characterize": cmd_characterize,
    "iqft-roundtrip": cmd_iqft_roundtrip,
    "kg-green": cmd_kg_green,
    "kg-ideal": cmd_kg_ideal,
    "kg-support": cmd_kg_support,
}


def run(command, cfg, out):
    """Run one command; returns (exit status, report document)."""
    out = Path(out)
    out.mkdir(parents=True, exist_ok=True)
    rep, extra = HANDLERS[command](cfg, out)
    doc = {
        "command": command,
        "config_hash": config_hash(cfg.to_dict()),
        "config": cfg.to_dict(),
        "scope": rep.scope,
        "passed": rep.ok,
        "checks": [c.to_dict() for c in rep.checks],
    }
    doc.update(extra)
    doc = jsonable(doc)
    (out / f"{command}.json").write_text(json.dumps(doc, indent=1, sort_keys=False) + "\n")
    return (0 if rep.ok else 1), doc


def build_parser():
    p = argparse.ArgumentParser(prog="bdyqft", description="Boundary AQFT model checks and Klein-Gordon experiments.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--config", help="JSON run configuration")
    p.add_argument("--out", default="out", help="output directory (default: out)")
    p.add_argument("--grid-h", type=float, help="quadrature grid spacing (default: a/200)")
    p.add_argument("--seed", type=int, help="RNG seed for random fixtures")
    p.add_argument("--max-len", type=int, help="truncation of extension normal forms")
    p.add_argument("--fixture", help="restrict to one fixture")
    p.add_argument("--no-figures", action="store_true", help="skip the PNG figures")
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        overrides = {"grid_h": args.grid_h, "seed": args.seed, "max_len": args.max_len, "fixture": args.fixture}
        if args.no_figures:
            overrides["figures"] = False
        cfg = load_config(args.config, overrides)
        status, doc = run(args.command, cfg, args.out)
    except BdyQFTError as err:
        print(json.dumps(jsonable(err.to_dict())), file=sys.stderr)
        return 2
    except (OSError, json.JSONDecodeError, TypeError) as err:
        print(json.dumps({"error": "ConfigError", "message": str(err)}), file=sys.stderr)
        return 2
    failed = [c for c in doc["checks"] if c["status"] != "pass"]
    if failed:
        print(json.dumps({"error": "CheckFailed", "first": failed[0], "failed": len(failed)}), file=sys.stderr)
    print(f"{args.command}: {len(doc['checks']) - len(failed)}/{len(doc['checks'])} checks passed -> {Path(args.out) / (args.command + '.json')}")
    return status


if __name__ == "__main__":
    sys.exit(main())
