"""The ten acceptance criteria, each at its stated tolerance and runtime."""

import itertools
import time

import numpy as np

from bdyqft.algebra import rank
from bdyqft.catalog import (
    check_adjunction_DI,
    check_localization_bijection,
    embed_J,
    localize,
    standard_catalog,
    threshold_functor,
)
from bdyqft.extension import (
    ExtAlgebra,
    IQFTPair,
    brute_force_quotient,
    characterize,
    ext_theory,
    ideal_from_generators,
    roundtrip_check,
    unit_morphism,
)
from bdyqft.fixtures import boundary_generator_theory, interior_fixtures, threshold_theory
from bdyqft.kgtheory import (
    check_interior_theory,
    interior_uniqueness_report,
    kg_roundtrip_report,
    tau_report,
)
from bdyqft.kleingordon import WIDTH, Bump, GreenPair, TestFunction, demonstrate_nonsurjectivity, green_axiom_report
from bdyqft.lattice import oracle_report

H = WIDTH / 200


def _first(rep):
    bad = rep.failures()
    return "" if not bad else f" (first failure: {bad[0].name})"


def test_c01_geometry_oracle(record):
    t0 = time.perf_counter()
    C = standard_catalog()
    rep = oracle_report(C)
    dt = time.perf_counter() - t0
    ok = rep.ok and len(C) == 12 and dt < 30
    record(1, ok, f"geometry vs lattice oracle: {len(rep.checks)} checks, 12 regions, {dt:.1f}s{_first(rep)}")
    assert ok


def test_c02_localization(record):
    t0 = time.perf_counter()
    C = standard_catalog()
    L, D = localize(C)
    rep = check_adjunction_DI(C, L, D)
    _, jrep = embed_J(L)
    rep.extend(jrep, prefix="J: ")
    functors = [threshold_functor(L, m, big) for m in L.ids for big in (1, 2, 3)]
    n_pairs = 0
    for G, Hf in itertools.product(functors, repeat=2):
        res = check_localization_bijection(D, G, Hf)
        rep.add(f"bijection {n_pairs}", res["bijective"], witness=res)
        n_pairs += 1
    dt = time.perf_counter() - t0
    ok = rep.ok and dt < 60
    record(2, ok, f"localization: {len(rep.checks)} checks, {n_pairs} functor pairs, {dt:.1f}s{_first(rep)}")
    assert ok


def test_c03_f_locality(char_full, record):
    _, L, _ = char_full
    fx = interior_fixtures(L)
    bad = []
    n = 0
    for name, A in fx.items():
        eta = unit_morphism(ext_theory(A, L, 4))
        for v in A.ids:
            f = eta[v]
            n += 1
            if not (f.source.dim == f.target.dim == rank(f.matrix)):
                bad.append(f"{name}@{v}")
    dims = sorted({A[v].dim for A in fx.values() for v in A.ids})
    ok = len(fx) >= 3 and not bad and set(dims) <= {1, 2, 3}
    record(3, ok, f"F-locality: {n} unit components over {len(fx)} fixtures, leaf dims {dims}, failures {bad}")
    assert ok


def test_c04_normal_form_soundness(ext_L, record):
    fx = interior_fixtures(ext_L)
    bad = []
    n = 0
    for name, A in fx.items():
        for V in ext_L.ids:
            for m in (1, 2, 3):
                nf = ExtAlgebra(A, ext_L, V, max_len=m).span_dimension(m)
                bf = brute_force_quotient(A, ext_L, V, max_len=m).dim
                n += 1
                if nf != bf:
                    bad.append((name, V, m, nf, bf))
    ok = not bad
    record(4, ok, f"normal form = brute-force quotient on {n} instances; mismatches {bad}")
    assert ok


def test_c05_characterization(char_full, record):
    _, L, _ = char_full
    theories = {
        "ext": ext_theory(interior_fixtures(L)["points"], L, 4).theory,
        "threshold": threshold_theory(L),
        "boundary-generator": boundary_generator_theory(L),
    }
    agree, total = 0, 0
    rows = {}
    for name, B in theories.items():
        rep, rows[name] = characterize(B, 4)
        for r in rows[name].values():
            total += 1
            agree += r["additive"] == r["lambda_iso"]
    pos = all(r["additive"] and r["lambda_iso"] for r in rows["ext"].values())
    neg = any(not r["additive"] and not r["lambda_iso"] for r in rows["boundary-generator"].values())
    ok = agree == total and pos and neg
    record(5, ok, f"characterization: {agree}/{total} objects agree; positive control {pos}; negative control {neg}")
    assert ok


def test_c06_iqft_equivalence(char_full, kg, record):
    _, L, _ = char_full
    rep = roundtrip_check(B=threshold_theory(L), max_len=4)
    A = interior_fixtures(L)["points"]
    X = ext_theory(A, L, 4)
    I = ideal_from_generators(X.theory, {"B1": [X.theory["B1"].basis(0)]})
    rep.extend(roundtrip_check(pair=IQFTPair(A, I, X), max_len=4), prefix="points/I: ")
    S, K, Kext = kg
    rep.extend(kg_roundtrip_report(K, Kext, S), prefix="KG: ")
    ok = rep.ok
    record(6, ok, f"IQFT round trips on fixtures and the KG pair: {len(rep.checks)} checks{_first(rep)}")
    assert ok


def test_c07_green_axioms(record):
    rep = green_axiom_report(h=H, n_bumps=10, seed=0)
    ok = rep.ok
    worst = max(c.witness / c.tolerance for c in rep.checks if isinstance(c.witness, float) and isinstance(c.tolerance, float) and c.tolerance > 0)
    record(7, ok, f"Green axioms at h=a/200, 10 bumps: {len(rep.checks)} checks, worst residual/tol {worst:.3g}{_first(rep)}")
    assert ok


def test_c08_interior_uniqueness(kg, record):
    S, _, _ = kg
    rep = interior_uniqueness_report(S)
    ok = rep.ok
    record(8, ok, f"interior uniqueness: {len(rep.checks)} checks{_first(rep)}")
    assert ok


def test_c09_tau(kg, record):
    S, K, _ = kg
    rep = check_interior_theory(K, S)
    trep, conv = tau_report(S)
    rep.extend(trep)
    gaps = np.abs(np.asarray(conv["tau"]) - 0.5)
    ok = rep.ok and bool(np.all(np.diff(gaps) < 0))
    record(9, ok, f"tau properties; point pair {[round(float(v), 6) for v in conv['tau']]}{_first(rep)}")
    assert ok


def test_c10_nonsurjectivity(record):
    t0 = time.perf_counter()
    G = GreenPair("dirichlet_strip", h=H)
    phi = TestFunction.of(Bump.unit(0.0, WIDTH / 2, 0.2))
    rep, grids = demonstrate_nonsurjectivity(G, phi)
    dt = time.perf_counter() - t0
    ok = rep.ok and bool(grids["mode_mask"].all()) and not grids["green_mask"].all() and dt < 60
    record(10, ok, f"non-surjectivity: {len(rep.checks)} checks, {dt:.1f}s{_first(rep)}")
    assert ok
