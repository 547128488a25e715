import math

import numpy as np
import pytest

from bdyqft import geometry as geo
from bdyqft.errors import SupportTouchesBoundary, SupportViolation, UnsupportedMass
from bdyqft.kleingordon import (
    CALIBRATION_C,
    WIDTH,
    Bump,
    GreenPair,
    TestFunction,
    adjoint_defect,
    apply_P,
    boundary_trace,
    calibrate_tolerance,
    demonstrate_nonsurjectivity,
    image_truncation_defect,
    integrate_against,
    l1_norm,
    mode_function,
    problem_scale,
    residual_GP,
    residual_PG,
    restrict_green,
    support_in_region,
    support_violation,
    tau,
    tol_quad,
)

H = WIDTH / 200
A = WIDTH


def box_fd(fn, t, x, e=1e-3):
    """-f_tt + f_xx by central differences."""
    ftt = (fn(t + e, x) - 2 * fn(t, x) + fn(t - e, x)) / e**2
    fxx = (fn(t, x + e) - 2 * fn(t, x) + fn(t, x - e)) / e**2
    return -ftt + fxx


def test_box_convention_on_mode_function():
    t, x = np.linspace(-1, 1, 7), np.linspace(0.1, 3.0, 7)
    assert np.max(np.abs(box_fd(mode_function, t, x))) < 1e-5
    # the sign matters: with box = +d_tt - d_xx this would still vanish, so
    # also check a function where the two conventions differ
    assert np.allclose(box_fd(lambda t, x: t**2, t, x), -2.0, atol=1e-5)


def test_analytic_box_matches_finite_differences():
    b = Bump.unit(0.1, 1.5, 0.4)
    t = 0.1 + np.array([0.05, -0.2, 0.1])
    x = 1.5 + np.array([0.1, 0.03, -0.25])
    assert np.allclose(b.box(t, x), box_fd(b.value, t, x), rtol=1e-4, atol=1e-3)


def test_unit_bump_integrates_to_one():
    f = TestFunction.of(Bump.unit(0.0, 1.5, 0.3))
    assert l1_norm(f, H / 4) == pytest.approx(1.0, abs=1e-4)


def test_P_of_zero_is_zero():
    assert apply_P(TestFunction()).is_zero()
    assert np.all(TestFunction()(np.zeros(3), np.ones(3)) == 0)


def test_P_twice_rejected():
    with pytest.raises(ValueError):
        apply_P(apply_P(TestFunction.of(Bump.unit(0, 1.5, 0.3))))


def test_P_is_formally_selfadjoint():
    f = TestFunction.of(Bump.unit(0.0, 1.5, 0.3))
    g = TestFunction.of(Bump.unit(0.1, 1.6, 0.25))
    lhs = integrate_against(apply_P(f), g, H / 2)
    rhs = integrate_against(f, apply_P(g), H / 2)
    assert lhs == pytest.approx(rhs, rel=1e-3)


def test_static_solution_free_of_P():
    # x is annihilated by box, so int (P f) x = int f (P x) = 0
    f = TestFunction.of(Bump.unit(0.0, 1.5, 0.3))
    assert abs(integrate_against(apply_P(f), lambda t, x: x, H / 2)) < 1e-6


def test_deep_cone_value_is_minus_half():
    f = TestFunction.of(Bump.unit(0.0, 1.5, 0.3))
    for h in (A / 100, A / 200):
        G = GreenPair("minkowski", h=h)
        assert abs(float(G.retarded(f, 2.0, 1.5)) + 0.5) <= tol_quad(h)
    # advanced operator vanishes in the future
    assert GreenPair("minkowski").advanced(f, 2.0, 1.5) == 0


def test_unsupported_mass():
    with pytest.raises(UnsupportedMass) as e:
        GreenPair(mass=1.0)
    assert e.value.to_dict()["error"] == "UnsupportedMass"


def test_support_touches_boundary():
    G = GreenPair("dirichlet_strip")
    f = TestFunction.of(Bump.unit(0.0, 0.1, 0.3))
    with pytest.raises(SupportTouchesBoundary):
        G.retarded(f, 1.0, 1.0)


def test_tau_support_violation():
    M = geo.Spacetime()
    V = geo.Region.diamond(M, 0, 0.5, 0.1)
    f = TestFunction.of(Bump.unit(0.0, 0.2 * A, 0.05))
    with pytest.raises(SupportViolation):
        tau(GreenPair(), f, f, region=V)


def test_support_in_region():
    M = geo.Spacetime()
    V = geo.Region.diamond(M, 0, 0.5, 0.1)
    assert support_in_region(TestFunction.of(Bump.unit(0.0, 0.5 * A, 0.1)), V)
    assert not support_in_region(TestFunction.of(Bump.unit(0.0, 0.5 * A, 0.25)), V)


@pytest.mark.parametrize("flavor", ["minkowski", "dirichlet_strip"])
def test_residuals_and_support(flavor):
    G = GreenPair(flavor, h=H)
    b = Bump.unit(0.2, 1.3, 0.35)
    f = TestFunction.of(b)
    rng = np.random.default_rng(3)
    ts = b.t0 + rng.uniform(-b.r, b.r, 40)
    xs = b.x0 + rng.uniform(-b.r, b.r, 40)
    tol = tol_quad(H, problem_scale(f))
    assert residual_PG(G, f, ts, xs) <= tol
    assert residual_GP(G, f, ts, xs, -1) <= tol
    ct, cx = b.t0 + rng.uniform(-3, 3, 400), rng.uniform(0, A, 400)
    assert support_violation(G, f, ct, cx, +1) <= 1e-12
    assert support_violation(G, f, ct, cx, -1) <= 1e-12


def test_dirichlet_boundary_trace_and_adjoint():
    G = GreenPair("dirichlet_strip", h=H)
    f = TestFunction.of(Bump.unit(0.0, 1.0, 0.3))
    g = TestFunction.of(Bump.unit(0.8, 2.0, 0.3))
    assert boundary_trace(G, f, np.linspace(-4, 4, 81)) <= tol_quad(H)
    assert adjoint_defect(G, f, g) <= tol_quad(H)


def test_image_truncation():
    G = GreenPair("dirichlet_strip", h=H)
    f = TestFunction.of(Bump.unit(0.0, 1.0, 0.3))
    ts, xs = np.linspace(-7, 7, 50), np.linspace(0, A, 50)
    assert image_truncation_defect(G, f, ts, xs) <= 1e-12


def test_calibration_constant():
    ratios = calibrate_tolerance()
    assert max(ratios) <= CALIBRATION_C


def test_restrict_to_whole_is_identity():
    M = geo.Spacetime()
    G = GreenPair("dirichlet_strip", h=H)
    GM = restrict_green(G, geo.Region.whole(M))
    f = TestFunction.of(Bump.unit(0.0, 1.0, 0.3))
    ts, xs = np.linspace(-2, 2, 30), np.linspace(0.01, A - 0.01, 30)
    assert np.array_equal(GM.causal(f, ts, xs), G.causal(f, ts, xs))


def test_tau_antisymmetric_and_causal():
    G = GreenPair("minkowski", h=H)
    f = TestFunction.of(Bump.unit(0.0, 1.0, 0.3))
    g = TestFunction.of(Bump.unit(0.9, 1.2, 0.3))
    s = TestFunction.of(Bump.unit(0.0, 2.6, 0.3))
    assert abs(tau(G, f, g) + tau(G, g, f)) <= tol_quad(H)
    assert abs(tau(G, f, s)) <= tol_quad(H)
    assert tau(G, f, g) > 0.3


def test_json_round_trip():
    f = TestFunction.of(Bump.unit(0.0, 1.0, 0.3), Bump(0.5, 2.0, 0.2, 3.0), coeffs=[1.0, -2.0])
    f = f + apply_P(TestFunction.of(Bump.unit(1.0, 1.5, 0.2)))
    assert TestFunction.from_json(f.to_json()) == f


def test_nonsurjectivity_masks():
    G = GreenPair("dirichlet_strip", h=H)
    rep, grids = demonstrate_nonsurjectivity(G, TestFunction.of(Bump.unit(0.0, A / 2, 0.2)))
    assert rep.ok
    assert grids["mode_mask"].all() and not grids["green_mask"].all()
    with pytest.raises(SupportTouchesBoundary):
        demonstrate_nonsurjectivity(G, TestFunction.of(Bump.unit(0.0, 0.1, 0.2)))


def test_tolerance_formula():
    assert tol_quad(H) == pytest.approx(10 * H * H * CALIBRATION_C)
    assert tol_quad(H) == pytest.approx(4.93e-4, rel=1e-3)
    assert math.isclose(tol_quad(H, 2.0), 2 * tol_quad(H))
