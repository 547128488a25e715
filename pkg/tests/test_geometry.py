from fractions import Fraction as F

import numpy as np
import pytest

from bdyqft import geometry as g
from bdyqft.errors import ConfigError, NotAnInclusion, UnboundedRegion
from bdyqft.lattice import LatticeMask, lattice_development, lattice_development_checked, lattice_future

M = g.Spacetime()
HP = g.Spacetime("half_plane")


def dia(t, x, r, sp=M):
    return g.Region.diamond(sp, F(t), F(x), F(r))


def test_boundary_is_timelike():
    assert M.boundary_is_timelike()
    assert M.band == 2 and HP.band is None


def test_bad_spacetime():
    with pytest.raises(ConfigError):
        g.Spacetime("torus")
    with pytest.raises(ConfigError):
        g.Spacetime(width=0.0)


def test_diamond_null_bounds():
    D = dia(0, "1/2", "1/10")
    assert D.to_literal() == [{"u": ["-3/5", "-2/5"], "v": ["2/5", "3/5"]}]


def test_literal_round_trip():
    U = dia(0, "1/2", "1/10") | dia("3/10", "1/5", "1/20")
    assert g.Region.from_literal(M, U.to_literal()) == U


def test_causal_future_is_quadrant():
    fut = g.causal_future(M, dia(0, "1/2", "1/10"))
    assert repr(fut) == "Region[(-3/5,inf)x(2/5,inf)]"


def test_open_regions_have_equal_chronological_and_causal_cones():
    D = dia(0, "1/2", "1/10")
    assert g.chronological_future(M, D) == g.causal_future(M, D)
    assert g.chronological_past(M, D) == g.causal_past(M, D)


def test_diamond_is_stable_and_interior():
    D = dia(0, "1/2", "1/10")
    assert g.cauchy_development(M, D) == D
    assert g.is_interior(M, D) and g.is_stable(M, D) and g.is_causally_convex(M, D)


def test_boundary_diamond_not_interior():
    B = dia(0, 0, "1/5")
    assert not g.is_interior(M, B)
    assert g.is_stable(M, B)


def test_development_of_overlapping_diamonds():
    U = dia(0, "9/20", "1/10") | dia(0, "11/20", "1/10")
    assert g.cauchy_development(M, U) == dia(0, "1/2", "3/20")


def test_time_slab_develops_to_everything():
    assert g.cauchy_development(M, g.Region.time_slab(M)) == g.Region.whole(M)
    with pytest.raises(ConfigError):
        g.Region.time_slab(HP)


def test_causal_disjointness():
    D = dia(0, "1/2", "1/10")
    assert g.are_causally_disjoint(M, D, dia(0, "7/10", "1/10"))
    assert not g.are_causally_disjoint(M, D, dia("1/2", "1/2", "1/10"))


def test_non_convex_union():
    U = dia(0, "1/2", "1/20") | dia("1/2", "1/2", "1/20")
    assert not g.is_causally_convex(M, U)


def test_cauchy_inclusion():
    S = g.Region.time_slab(M)
    assert g.is_cauchy_inclusion(M, S, g.Region.whole(M))
    with pytest.raises(NotAnInclusion):
        g.is_cauchy_inclusion(M, g.Region.whole(M), S)


def test_half_plane_future_unbounded_in_x():
    fut = g.causal_future(HP, dia(0, "1/2", "1/10", HP))
    assert fut.contains_tx(10, 5)


def test_subset_and_set_ops():
    a, b = dia(0, "1/2", "1/10"), dia(0, "1/2", "1/5")
    assert g.is_subset(a, b) and not g.is_subset(b, a)
    assert (a & b) == a and (a | b) == b


@pytest.mark.parametrize("h", [F(1, 50), F(1, 100)])
def test_lattice_agrees_with_exact_future(h):
    D = dia(0, "1/2", "1/10")
    lat = LatticeMask.for_regions(h, [D], M)
    s = lat.rasterize(D)
    assert np.array_equal(lattice_future(lat, s), lat.rasterize(g.causal_future(M, D)))
    assert np.array_equal(lattice_development(lat, s), s)


def test_lattice_fixpoint_needs_bounded_region():
    lat = LatticeMask.for_regions(F(1, 50), [dia(0, "1/2", "1/10")], M)
    with pytest.raises(UnboundedRegion):
        lattice_development_checked(lat, g.Region.time_slab(M) | g.causal_future(M, dia(0, "1/2", "1/10")))
