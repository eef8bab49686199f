import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from cwmanifold import projlin as pl
from cwmanifold.errors import (
    DegenerateAxis,
    DegeneratePolarity,
    InvalidParameter,
    NotProperPoint,
    NotRealPlane,
    SingularForm,
)
from oracles import signature_eig

E = np.eye(4)


def hyperbolic(u, v, w):
    try:
        return pl.signature(pl.schlafli_matrix(u, v, w)) == (3, 1, 0)
    except Exception:
        return False


params = st.tuples(st.integers(3, 12), st.integers(3, 12), st.integers(3, 12)).filter(
    lambda t: hyperbolic(*t))
unit_ball = st.lists(st.floats(-0.55, 0.55), min_size=3, max_size=3)
coeffs = st.lists(st.floats(-1, 1), min_size=4, max_size=4)


def proper_point(A, x):
    L = pl.klein_frame(A)
    return np.linalg.solve(L, np.array([1.0, *x]))


def real_plane(B, c):
    u = np.asarray(c, dtype=float)
    uu = pl.form_inner(u, u, B)
    assume(uu > 0.05)
    return u / np.sqrt(uu)


# -- examples -------------------------------------------------------------

def test_schlafli_666():
    B = pl.schlafli_matrix(6, 6, 6)
    c = -np.cos(np.pi / 6)
    assert np.allclose(np.diag(B), 1)
    for i, j in ((0, 1), (1, 2), (2, 3)):
        assert B[i, j] == B[j, i] == pytest.approx(c)
    assert B[0, 2] == B[0, 3] == B[1, 3] == 0


def test_schlafli_535_and_333():
    B = pl.schlafli_matrix(5, 3, 5)
    assert [B[0, 1], B[1, 2], B[2, 3]] == pytest.approx(
        [-np.cos(np.pi / 5), -0.5, -np.cos(np.pi / 5)])
    B3 = pl.schlafli_matrix(3, 3, 3)
    assert [B3[0, 1], B3[1, 2], B3[2, 3]] == pytest.approx([-0.5] * 3)


def test_schlafli_rejects_small_parameter():
    with pytest.raises(InvalidParameter):
        pl.schlafli_matrix(2, 6, 6)


@pytest.mark.parametrize("uvw", [(5, 3, 5), (6, 6, 6)])
def test_signature_hyperbolic(uvw):
    B = pl.schlafli_matrix(*uvw)
    assert pl.signature(B) == (3, 1, 0) == signature_eig(B)


def test_signature_identity():
    assert pl.signature(np.eye(4)) == (4, 0, 0)


def test_vertex_gram():
    assert np.allclose(pl.vertex_gram(np.eye(4)), np.eye(4))
    B = pl.schlafli_matrix(6, 6, 6)
    assert np.abs(B @ pl.vertex_gram(B) - np.eye(4)).max() < 1e-12
    A = pl.vertex_gram(pl.schlafli_matrix(5, 3, 5))
    assert (np.diag(A) < 0).all()


def test_vertex_gram_singular():
    B = np.ones((4, 4))
    with pytest.raises(SingularForm):
        pl.vertex_gram(B)


def test_inner_products(o666):
    assert pl.point_inner(E[0], E[0], o666.A) > 0
    assert pl.form_inner(E[0], E[1], o666.B) == pytest.approx(-np.cos(np.pi / 6))


def test_distance_basics(o666):
    A = o666.A
    assert pl.distance(E[1], E[1], A) == 0
    d = pl.distance(o666.F03, o666.F12, A)
    assert 0 < d < np.inf
    with pytest.raises(NotProperPoint):
        pl.distance(E[0], E[1], A)


def test_pole_polar(o666):
    assert np.allclose(pl.pole(E[3], o666.B), np.linalg.inv(o666.A)[3])
    assert pl.projective_equal(pl.polar(E[3], o666.A), o666.truncations[3])
    assert pl.projective_equal(pl.pole(pl.polar(E[0], o666.A), o666.B), E[0])


def test_degenerate_polarity(o666):
    # an ideal point of the absolute has no proper polar
    L = pl.klein_frame(o666.A)
    X = np.linalg.solve(L, np.array([1.0, 1.0, 0.0, 0.0]))
    with pytest.raises(DegeneratePolarity):
        pl.polar(X, o666.A)


def test_reflection_examples(o666):
    B, A = o666.B, o666.A
    R = pl.reflection_matrix(E[1], B)
    for i in (0, 2, 3):
        assert np.allclose(R @ E[i], E[i])
    assert not np.allclose(R @ E[1], E[1])
    X = np.array([0.3, -0.2, 0.5, 0.1])
    assert np.allclose(pl.reflect_point(pl.reflect_point(X, E[2], B), E[2], B), X)
    with pytest.raises(NotRealPlane):
        pl.reflection_matrix(A @ pl.normalize_point(E[1], A), B)


def test_half_turn(o666):
    A, h = o666.A, o666.h
    assert pl.projective_equal(h @ E[0], E[3])
    assert pl.projective_equal(h @ E[1], E[2])
    assert np.allclose(h @ h, np.eye(4), atol=1e-12)
    assert pl.projective_equal(h @ o666.F03, o666.F03)
    assert pl.projective_equal(h @ o666.F12, o666.F12)
    assert pl.orientation(h) == 1
    with pytest.raises(DegenerateAxis):
        pl.half_turn(o666.F03, 2 * o666.F03, A)


def test_midpoint(o666):
    A = o666.A
    X, Y = E[1], E[2]
    assert pl.projective_equal(pl.midpoint(X, X, A), X)
    M = pl.midpoint(X, Y, A)
    assert pl.distance(M, X, A) == pytest.approx(pl.distance(M, Y, A), abs=1e-10)
    # F03 is equidistant from the truncation points on A0A3
    assert pl.distance(o666.F03, o666.Q, A) == pytest.approx(
        pl.distance(o666.F03, o666.Q_prime, A), abs=1e-10)


def test_group_operations(o666):
    A, h = o666.A, o666.h
    assert np.allclose(pl.compose(h, pl.invert(h)), np.eye(4))
    assert pl.is_isometry(pl.reflection_matrix(E[0], o666.B), A)
    assert not pl.is_isometry(np.diag([1.0, 2.0, 1.0, 1.0]), A)


def test_klein_coords(o666):
    A = o666.A
    L = pl.klein_frame(A)
    origin = np.linalg.solve(L, np.array([1.0, 0, 0, 0]))
    assert np.allclose(pl.klein_coords(origin, A, L), 0, atol=1e-12)
    q = pl.klein_coords(o666.Q, A)
    assert np.linalg.norm(q) < 1


# -- properties -----------------------------------------------------------

@given(params, coeffs)
def test_reflections_preserve_form_and_are_involutions(uvw, c):
    B = pl.schlafli_matrix(*uvw)
    A = pl.vertex_gram(B)
    u = real_plane(B, c)
    M = pl.reflection_matrix(u, B)
    assert np.abs(M.T @ A @ M - A).max() < 1e-10
    assert np.abs(M @ M - np.eye(4)).max() < 1e-10


@given(params, coeffs)
def test_polarity_is_involutive(uvw, c):
    B = pl.schlafli_matrix(*uvw)
    A = pl.vertex_gram(B)
    X = np.asarray(c, dtype=float)
    assume(abs(pl.point_inner(X, X, A)) > 1e-3 and np.abs(X).max() > 1e-3)
    assert pl.projective_equal(pl.pole(pl.polar(X, A), B), X, tol=1e-10)


@given(params, unit_ball, unit_ball, st.lists(st.tuples(coeffs), min_size=1, max_size=4))
def test_distance_symmetric_and_invariant(uvw, x, y, planes):
    B = pl.schlafli_matrix(*uvw)
    A = pl.vertex_gram(B)
    X, Y = proper_point(A, x), proper_point(A, y)
    M = np.eye(4)
    for (c,) in planes:
        M = pl.reflection_matrix(real_plane(B, c), B) @ M
    assert pl.is_isometry(M, A, 1e-9)
    d = pl.distance(X, Y, A)
    assert d == pytest.approx(pl.distance(Y, X, A), abs=1e-12)
    assert pl.distance(X, X, A) == pytest.approx(0, abs=1e-12)
    assert pl.distance(M @ X, M @ Y, A) == pytest.approx(d, abs=1e-10)


@pytest.mark.parametrize("z", [3, 5, 7, 9, 11])
def test_cobweb_signature(z):
    assert pl.signature(pl.schlafli_matrix(2 * z, 2 * z, 2 * z)) == (3, 1, 0)


@given(params, unit_ball, unit_ball)
def test_half_turn_orientation_and_involution(uvw, x, y):
    A = pl.vertex_gram(pl.schlafli_matrix(*uvw))
    P, Q = proper_point(A, x), proper_point(A, y)
    assume(pl.distance(P, Q, A) > 1e-3)
    h = pl.half_turn(P, Q, A)
    assert pl.orientation(pl.normalize_isometry(h, A)) == 1
    assert np.abs(h @ h - np.eye(4)).max() < 1e-8
