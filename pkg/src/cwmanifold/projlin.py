"""Projective-metric linear algebra for hyperbolic 3-space.

Points are column vectors X = X^i A_i in the vertex basis of an
orthoscheme, plane forms are row vectors u = u_i b^i in the dual basis.
With B the Coxeter-Schlaefli matrix and A = B^{-1} the vertex Gram
matrix, the scalar products are

    <X, Y> = X^T A Y        (points)
    <u, v> = u^T B v        (forms)

and the incidence X on u is simply u @ X = 0.  A point is proper
(inside the absolute) when <X, X> < 0.

Isometries act on points from the left, X -> M @ X, and on forms by
u -> u @ M^{-1}.  They preserve A up to a positive factor.
"""

from __future__ import annotations

import numpy as np

from .errors import (
    ChartOverflow,
    DegenerateAxis,
    DegeneratePolarity,
    InvalidParameter,
    NotProperPoint,
    NotRealPlane,
    Singular,
    SingularForm,
)

PROJ_TOL = 1e-9


def schlafli_matrix(u: int, v: int, w: int) -> np.ndarray:
    """Coxeter-Schlaefli matrix of the orthoscheme with angles pi/u, pi/v, pi/w."""
    for p in (u, v, w):
        if int(p) != p or p < 3:
            raise InvalidParameter(f"orthoscheme parameter must be an integer >= 3, got {p}")
    B = np.eye(4)
    for i, p in enumerate((u, v, w)):
        B[i, i + 1] = B[i + 1, i] = -np.cos(np.pi / p)
    return B


def signature(M: np.ndarray, tol: float = 1e-9) -> tuple[int, int, int]:
    """(n_pos, n_neg, n_zero) eigenvalue counts of a symmetric matrix."""
    ev = np.linalg.eigvalsh(np.asarray(M, dtype=float))
    return (int(np.sum(ev > tol)), int(np.sum(ev < -tol)), int(np.sum(np.abs(ev) <= tol)))


def vertex_gram(B: np.ndarray) -> np.ndarray:
    """A = B^{-1}, symmetrized."""
    B = np.asarray(B, dtype=float)
    if abs(np.linalg.det(B)) < 1e-12:
        raise SingularForm("Schlaefli matrix is singular")
    A = np.linalg.inv(B)
    return 0.5 * (A + A.T)


def point_inner(X: np.ndarray, Y: np.ndarray, A: np.ndarray) -> float:
    return float(np.asarray(X) @ A @ np.asarray(Y))


def form_inner(u: np.ndarray, v: np.ndarray, B: np.ndarray) -> float:
    return float(np.asarray(u) @ B @ np.asarray(v))


def is_proper(X: np.ndarray, A: np.ndarray, tol: float = 1e-12) -> bool:
    return point_inner(X, X, A) < -tol


def normalize_point(X: np.ndarray, A: np.ndarray) -> np.ndarray:
    """Scale a proper point to <X, X> = -1."""
    n = point_inner(X, X, A)
    if n >= 0:
        raise NotProperPoint("point is not inside the absolute")
    return np.asarray(X, dtype=float) / np.sqrt(-n)


def distance(X: np.ndarray, Y: np.ndarray, A: np.ndarray) -> float:
    """Hyperbolic distance between proper points (curvature -1)."""
    xx, yy, xy = point_inner(X, X, A), point_inner(Y, Y, A), point_inner(X, Y, A)
    if xx >= 0 or yy >= 0:
        raise NotProperPoint("distance needs two proper points")
    # 2 asinh(|X - Y| / 2) on unit representatives: cosh d = -<X,Y> loses
    # half the digits for nearby points
    Xn = np.asarray(X, dtype=float) / np.sqrt(-xx)
    Yn = np.asarray(Y, dtype=float) / np.sqrt(-yy)
    if xy > 0:
        Yn = -Yn
    D = Xn - Yn
    return float(2.0 * np.arcsinh(np.sqrt(max(point_inner(D, D, A), 0.0)) / 2.0))


def pole(u: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Pole U^j = u_i B^{ij} of a plane."""
    u = np.asarray(u, dtype=float)
    if abs(form_inner(u, u, B)) < 1e-14:
        raise DegeneratePolarity("null form has no proper pole")
    return B @ u


def polar(X: np.ndarray, A: np.ndarray) -> np.ndarray:
    """Polar plane X_j = X^i A_ij of a point."""
    X = np.asarray(X, dtype=float)
    if abs(point_inner(X, X, A)) < 1e-14:
        raise DegeneratePolarity("null point has no proper polar")
    return A @ X


def reflect_point(X: np.ndarray, u: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Y = X - 2 (u.X) / <u, u> U  with U the pole of u."""
    return reflection_matrix(u, B) @ np.asarray(X, dtype=float)


def reflection_matrix(u: np.ndarray, B: np.ndarray) -> np.ndarray:
    u = np.asarray(u, dtype=float)
    uu = form_inner(u, u, B)
    if uu <= 0:
        raise NotRealPlane("reflection needs a plane with <u,u> > 0")
    return np.eye(4) - 2.0 * np.outer(B @ u, u) / uu


def half_turn(P: np.ndarray, Q: np.ndarray, A: np.ndarray) -> np.ndarray:
    """Rotation by pi about the line PQ.

    Identity on span(P, Q) and minus identity on its A-orthogonal
    complement.
    """
    Pm = np.column_stack([P, Q]).astype(float)
    G = Pm.T @ A @ Pm
    if abs(np.linalg.det(G)) < 1e-12 * max(1.0, np.abs(G).max()) ** 2:
        raise DegenerateAxis("axis points coincide")
    proj = Pm @ np.linalg.solve(G, Pm.T @ A)
    return 2.0 * proj - np.eye(4)


def midpoint(X: np.ndarray, Y: np.ndarray, A: np.ndarray) -> np.ndarray:
    Xn, Yn = normalize_point(X, A), normalize_point(Y, A)
    if point_inner(Xn, Yn, A) > 0:
        Yn = -Yn
    return Xn + Yn


def normalize_isometry(M: np.ndarray, A: np.ndarray | None = None) -> np.ndarray:
    """Rescale so that M^T A M = A and fix the sign.

    The sign is chosen so that the diagonal entry of largest modulus is
    positive; this makes "equals +-identity" comparisons deterministic.
    """
    M = np.asarray(M, dtype=float)
    if A is None:
        lam = abs(np.linalg.det(M)) ** 0.25
    else:
        S = M.T @ A @ M
        lam = np.sqrt(abs(np.trace(S @ np.linalg.inv(A))) / 4.0)
    if lam < 1e-300:
        raise Singular("matrix is not invertible")
    M = M / lam
    d = np.diag(M)
    i = int(np.argmax(np.abs(d)))
    if d[i] < 0:
        M = -M
    return M


def compose(M: np.ndarray, N: np.ndarray) -> np.ndarray:
    """M after N."""
    return np.asarray(M) @ np.asarray(N)


def invert(M: np.ndarray) -> np.ndarray:
    M = np.asarray(M, dtype=float)
    if abs(np.linalg.det(M)) < 1e-300:
        raise Singular("matrix is not invertible")
    return np.linalg.inv(M)


def is_isometry(M: np.ndarray, A: np.ndarray, tol: float = 1e-9) -> bool:
    """M^T A M = lam A with lam > 0, checked after scale normalization."""
    M = np.asarray(M, dtype=float)
    if abs(np.linalg.det(M)) < 1e-300:
        return False
    S = M.T @ A @ M
    lam = np.trace(S @ np.linalg.inv(A)) / 4.0
    if lam <= 0:
        return False
    return bool(np.max(np.abs(S / lam - A)) <= tol * max(1.0, np.abs(A).max()))


def orientation(M: np.ndarray) -> int:
    return int(np.sign(np.linalg.det(M)))


def is_plus_minus_identity(M: np.ndarray, tol: float = 1e-8) -> bool:
    M = np.asarray(M, dtype=float) / abs(np.linalg.det(M)) ** 0.25
    I = np.eye(4)
    return bool(min(np.abs(M - I).max(), np.abs(M + I).max()) <= tol)


def identity_residual(M: np.ndarray) -> float:
    M = np.asarray(M, dtype=float) / abs(np.linalg.det(M)) ** 0.25
    I = np.eye(4)
    return float(min(np.abs(M - I).max(), np.abs(M + I).max()))


def projective_normal(X: np.ndarray, tol: float = 1e-12) -> np.ndarray:
    X = np.asarray(X, dtype=float).ravel()
    nz = np.flatnonzero(np.abs(X) > tol * max(1.0, np.abs(X).max()))
    if nz.size == 0:
        raise InvalidParameter("zero vector has no projective class")
    return X / X[nz[0]]


def projective_equal(X: np.ndarray, Y: np.ndarray, tol: float = PROJ_TOL) -> bool:
    X = np.asarray(X, dtype=float).ravel()
    Y = np.asarray(Y, dtype=float).ravel()
    X = X / np.abs(X).max()
    Y = Y / np.abs(Y).max()
    return bool(min(np.abs(X - Y).max(), np.abs(X + Y).max()) <= tol)


def klein_frame(A: np.ndarray) -> np.ndarray:
    """Linear map L with L^T diag(-1,1,1,1) L = A.

    Applying L to a point vector gives coordinates in which the absolute
    is x0^2 = x1^2 + x2^2 + x3^2.
    """
    lam, V = np.linalg.eigh(A)
    order = np.argsort(lam)
    lam, V = lam[order], V[:, order]
    if not (lam[0] < 0 < lam[1]):
        raise InvalidParameter("Gram matrix is not of hyperbolic signature")
    return np.diag(np.sqrt(np.abs(lam))) @ V.T


def klein_coords(X: np.ndarray, A: np.ndarray, L: np.ndarray | None = None) -> np.ndarray:
    if L is None:
        L = klein_frame(A)
    y = L @ np.asarray(X, dtype=float)
    if abs(y[0]) < 1e-14 * max(1.0, np.abs(y).max()):
        raise ChartOverflow("point lies at infinity of the affine chart")
    return y[1:] / y[0]
