import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from cwmanifold import orthoscheme as orth
from cwmanifold import projlin as pl
from cwmanifold.errors import InvalidParameter, NoHalfturnSymmetry, NotHyperbolic
from cwmanifold.orthoscheme import VertexKind
from oracles import lobachevsky_quad, orthoscheme_volume_quad

E = np.eye(4)


def test_kinds_535(o535):
    assert o535.kinds == (VertexKind.PROPER,) * 4
    assert o535.truncations == {}


def test_kinds_666(o666):
    P, Ou = VertexKind.PROPER, VertexKind.OUTER
    assert o666.kinds == (Ou, P, P, Ou)
    assert set(o666.truncations) == {0, 3}


def test_not_hyperbolic():
    with pytest.raises(NotHyperbolic):
        orth.build(3, 3, 3)
    with pytest.raises(InvalidParameter):
        orth.build(2, 6, 6)


@pytest.mark.parametrize("uvw", [(5, 3, 5), (6, 6, 6), (10, 10, 10), (4, 3, 5)])
def test_dihedral_angles(uvw):
    O = orth.build(*uvw)
    for i, p in enumerate(uvw):
        assert orth.dihedral_angle(E[i], E[i + 1], O.B) == pytest.approx(np.pi / p, abs=1e-12)
    for i, j in ((0, 2), (0, 3), (1, 3)):
        assert orth.dihedral_angle(E[i], E[j], O.B) == pytest.approx(np.pi / 2, abs=1e-12)


def test_truncation_orthogonal_to_side_faces(o666):
    a3 = o666.truncations[3]
    for i in range(3):
        assert pl.form_inner(a3, E[i], o666.B) == pytest.approx(0, abs=1e-12)
    a0 = o666.truncations[0]
    for i in (1, 2, 3):
        assert pl.form_inner(a0, E[i], o666.B) == pytest.approx(0, abs=1e-12)


def test_landmarks_on_truncations(o666):
    assert o666.truncations[3] @ o666.Q == pytest.approx(0, abs=1e-12)
    assert o666.truncations[0] @ o666.Q_prime == pytest.approx(0, abs=1e-12)
    K = o666.kernel()
    assert o666.truncations[3] @ K == pytest.approx(0, abs=1e-12)
    assert K[0] == pytest.approx(0, abs=1e-12) and K[1] == pytest.approx(0, abs=1e-12)


def test_half_turn_swaps_faces(o666):
    h, B = o666.h, o666.B
    hinv = np.linalg.inv(h)
    for i, j in ((0, 3), (1, 2)):
        assert pl.projective_equal(E[i] @ hinv, E[j])
    assert pl.projective_equal(o666.truncations[3] @ hinv, o666.truncations[0])
    assert pl.is_isometry(h, o666.A)


def test_no_half_turn_when_u_ne_w():
    O = orth.build(4, 3, 5)
    assert O.h is None
    with pytest.raises(NoHalfturnSymmetry):
        orth.half_domain_volume(O)
    with pytest.raises(NoHalfturnSymmetry):
        orth.half_domain(O)


def test_kernel_requires_outer_vertex(o535):
    with pytest.raises(InvalidParameter):
        o535.kernel()


# -- Lobachevsky function --------------------------------------------------

def test_lobachevsky_known_values():
    assert orth.lobachevsky(0) == 0
    assert orth.lobachevsky(np.pi / 2) == pytest.approx(0, abs=1e-14)
    # maximum at pi/6 equals Cl2(pi/3)/2
    assert orth.lobachevsky(np.pi / 6) == pytest.approx(0.50747080320482681, abs=1e-14)


angles = st.floats(-10, 10, allow_nan=False)


@given(angles)
def test_lobachevsky_odd(x):
    assert orth.lobachevsky(-x) == pytest.approx(-orth.lobachevsky(x), abs=1e-14)


@given(angles, st.integers(-3, 3))
def test_lobachevsky_pi_periodic(x, k):
    assert orth.lobachevsky(x + k * np.pi) == pytest.approx(orth.lobachevsky(x), abs=1e-12)


@given(st.floats(-4, 4, allow_nan=False))
def test_lobachevsky_matches_quadrature(x):
    assert orth.lobachevsky(x) == pytest.approx(lobachevsky_quad(x), abs=1e-10)


def test_lobachevsky_grid_1000(rng):
    xs = rng.uniform(-2 * np.pi, 2 * np.pi, 1000)
    for x in xs:
        L = orth.lobachevsky(x)
        assert orth.lobachevsky(-x) == pytest.approx(-L, abs=1e-14)
        assert orth.lobachevsky(x + np.pi) == pytest.approx(L, abs=1e-12)


# -- volumes ---------------------------------------------------------------

@pytest.mark.parametrize("uvw", [(5, 3, 5), (6, 6, 6), (10, 10, 10), (14, 14, 14), (4, 3, 5)])
def test_volume_matches_quadrature(uvw):
    assert orth.volume(*uvw) == pytest.approx(orthoscheme_volume_quad(*uvw), abs=1e-9)


def test_volume_535_value():
    # 120 orthoschemes tile the dodecahedral Seifert-Weber cell volume 11.199...
    assert 120 * orth.volume(5, 3, 5) == pytest.approx(11.199064740814448, abs=1e-9)


def test_volume_symmetric():
    assert orth.volume(4, 3, 5) == pytest.approx(orth.volume(5, 3, 4), abs=1e-13)
    assert orth.volume(3, 5, 4) == pytest.approx(orth.volume(4, 5, 3), abs=1e-13)


def test_volume_increasing_in_z():
    vols = [orth.volume(2 * z, 2 * z, 2 * z) for z in (3, 5, 7, 9, 11)]
    assert all(a < b for a, b in zip(vols, vols[1:]))


def test_half_domain_volume(o666):
    assert orth.half_domain_volume(o666) == pytest.approx(orth.volume(6, 6, 6) / 2)


# -- half domain -----------------------------------------------------------

def test_half_domain_666(o666):
    W = orth.half_domain(o666)
    assert len(W.vertices) == 8
    # the halving plane cuts off A0 together with its truncation a0
    assert sorted(W.faces) == ["H", "a3", "b0", "b1", "b2", "b3"]
    for X in W.vertices:
        assert pl.is_proper(X, o666.A)
        for u in W.planes.values():
            assert u @ X >= -1e-9
    # H contains the half-turn axis
    H = W.planes["H"]
    assert H @ o666.F03 == pytest.approx(0, abs=1e-12)
    assert H @ o666.F12 == pytest.approx(0, abs=1e-12)


def test_halving_plane_alternatives(o666):
    H1 = orth.halving_plane(o666, "perp_A1A2")
    H2 = orth.halving_plane(o666, "perp_axis")
    for H in (H1, H2):
        assert H @ o666.F03 == pytest.approx(0, abs=1e-12)
        assert H @ o666.F12 == pytest.approx(0, abs=1e-12)
    with pytest.raises(InvalidParameter):
        orth.halving_plane(o666, "diagonal")
