import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.integrate import quad

from cwmanifold import metrics as me
from cwmanifold import orthoscheme as orth
from cwmanifold import projlin as pl
from cwmanifold.errors import InvalidRadius, KernelNotInterior, NotProperPoint, NotRealPlane

E = np.eye(4)


def test_ball_volume_limits():
    assert me.ball_volume(0) == 0
    r = 1e-4
    assert me.ball_volume(r) / (4 / 3 * np.pi * r ** 3) == pytest.approx(1, abs=1e-8)
    with pytest.raises(InvalidRadius):
        me.ball_volume(-0.1)


@pytest.mark.parametrize("r", [1e-3, 0.3, 1.0, 2.5])
def test_ball_volume_quadrature(r):
    ref = 4 * np.pi * quad(lambda t: np.sinh(t) ** 2, 0, r, epsabs=1e-13, epsrel=1e-13)[0]
    assert me.ball_volume(r) == pytest.approx(ref, abs=1e-10)


@given(st.floats(0, 5), st.floats(0, 5))
def test_ball_volume_increasing(a, b):
    if a < b:
        assert me.ball_volume(a) <= me.ball_volume(b)


def test_ball_volume_series_branch_continuous():
    r = 1e-3
    assert me.ball_volume(r * (1 - 1e-12)) == pytest.approx(me.ball_volume(r), rel=1e-9)


def test_point_plane_distance(o666):
    A, B = o666.A, o666.B
    X = E[1]
    assert me.point_plane_distance(X, E[0], A, B) == pytest.approx(0, abs=1e-14)
    assert me.point_plane_distance(X, E[1], A, B) > 0
    with pytest.raises(NotProperPoint):
        me.point_plane_distance(E[0], E[1], A, B)
    with pytest.raises(NotRealPlane):
        me.point_plane_distance(X, A @ E[1], A, B)


def test_point_plane_distance_invariant(o666, rng):
    A, B = o666.A, o666.B
    X = pl.normalize_point(E[1] + E[2], A)
    u = E[3]
    d = me.point_plane_distance(X, u, A, B)
    M = np.eye(4)
    for i in (0, 1, 2, 3, 0, 2):
        M = pl.reflection_matrix(E[i], B) @ M
    Mi = np.linalg.inv(M)
    assert me.point_plane_distance(M @ X, u @ Mi, A, B) == pytest.approx(d, abs=1e-12)


def test_hexagon_distance_equals_distance_to_F03(o535):
    A, B = o535.A, o535.B
    A3 = pl.normalize_point(E[3], A)
    A0 = pl.normalize_point(E[0], A)
    if pl.point_inner(A0, A3, A) > 0:
        A0 = -A0
    hexagon = A @ (A3 - A0)
    assert hexagon @ o535.F03 == pytest.approx(0, abs=1e-12)
    assert me.point_plane_distance(A3, hexagon, A, B) == pytest.approx(
        pl.distance(A3, o535.F03, A), abs=1e-12)


def test_football_report():
    rep = me.football_report()
    assert rep.packing_density == pytest.approx(0.77147, abs=5e-5)
    assert rep.covering_density == pytest.approx(1.36893, abs=5e-5)
    assert rep.cell_volume == pytest.approx(60 * orth.volume(5, 3, 5), abs=1e-13)
    assert rep.cell_volume == pytest.approx(120 * orth.volume(5, 3, 5) / 2, abs=1e-13)
    assert rep.inball_face == "hexagon"


def test_football_radii_landmarks(o535):
    rep = me.football_report()
    A, B = o535.A, o535.B
    A3 = pl.normalize_point(E[3], A)
    d_hex = pl.distance(A3, o535.F03, A)
    d_pent = me.point_plane_distance(A3, E[3], A, B)
    assert d_pent == pytest.approx(pl.distance(A3, E[2], A), abs=1e-12)
    assert rep.inradius == pytest.approx(min(d_hex, d_pent), abs=1e-12)
    # A1 is cut off by the hexagon plane, so d(A3, A1) overshoots the circumradius
    A0 = pl.normalize_point(E[0], A)
    hexagon = A @ (A3 + A0 if pl.point_inner(A0, A3, A) > 0 else A3 - A0)
    assert np.sign(hexagon @ E[1]) != np.sign(hexagon @ A3)
    assert rep.circumradius < pl.distance(A3, E[1], A)
    assert me.ball_volume(pl.distance(A3, E[1], A)) / rep.cell_volume > 2


def test_domain_radii_rejects_outside_kernel(o666):
    A, B = o666.A, o666.B
    with pytest.raises(KernelNotInterior):
        me.domain_radii([E[0]], [E[1]], E[1], A, B)


@pytest.mark.parametrize("z", [3, 5, 7])
def test_cobweb_report(z):
    rep = me.cobweb_report(z)
    assert 0 < rep.inradius < rep.circumradius < np.inf
    assert 0 < rep.packing_density < 1 < rep.covering_density
    assert rep.cell_volume == pytest.approx(4 * z * orth.volume(2 * z, 2 * z, 2 * z))
    assert me.ball_volume(rep.inradius) <= rep.cell_volume <= me.ball_volume(rep.circumradius)


def test_cell_volume_table_monotone():
    vols = [4 * z * orth.volume(2 * z, 2 * z, 2 * z) for z in (3, 5, 7, 9)]
    assert all(a < b for a, b in zip(vols, vols[1:]))
    assert vols[0] == pytest.approx(12 * orth.volume(6, 6, 6))


def test_report_as_dict():
    d = me.football_report().as_dict()
    assert set(d) == {"cell_volume", "inradius", "circumradius", "packing_density",
                      "covering_density", "inball_face"}


@given(st.lists(st.tuples(st.integers(0, 3)), min_size=1, max_size=6))
def test_radii_invariant_under_isometry(cw3, refl):
    # move the whole configuration by a product of orthoscheme reflections
    O = cw3.orthoscheme
    T = cw3.frame
    M = np.eye(4)
    for (i,) in refl:
        M = pl.reflection_matrix(E[i], O.B) @ M
    N = np.linalg.inv(T) @ M @ T          # the same isometry in the kernel frame
    Ni = np.linalg.inv(N)
    planes = [F.plane for F in cw3.faces]
    V = cw3.vertex_vectors()
    r0, R0, _ = me.domain_radii(planes, V, cw3.kernel, cw3.A, cw3.B)
    r1, R1, _ = me.domain_radii([u @ Ni for u in planes], [N @ X for X in V],
                                N @ cw3.kernel, cw3.A, cw3.B)
    assert r1 == pytest.approx(r0, abs=1e-10)
    assert R1 == pytest.approx(R0, abs=1e-10)
