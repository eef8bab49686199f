"""Complete Coxeter orthoschemes, their half domains and volumes."""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.special import zeta

from . import projlin as pl
from .errors import (
    InvalidParameter,
    NoHalfturnSymmetry,
    NotCompleteOrthoscheme,
    NotHyperbolic,
)

KIND_TOL = 1e-9


class VertexKind(enum.Enum):
    PROPER = "proper"
    IDEAL = "ideal"
    OUTER = "outer"


def _kind(n: float, tol: float = KIND_TOL) -> VertexKind:
    if n < -tol:
        return VertexKind.PROPER
    if n > tol:
        return VertexKind.OUTER
    return VertexKind.IDEAL


def _line_polar_point(P: np.ndarray, R: np.ndarray, A: np.ndarray) -> np.ndarray:
    """Point X = P + t (R - P) on line PR lying on the polar plane of P."""
    pp = pl.point_inner(P, P, A)
    t = -pp / (pl.point_inner(R, P, A) - pp)
    return P + t * (R - P)


@dataclass(frozen=True)
class CompleteOrthoscheme:
    params: tuple[int, int, int]
    B: np.ndarray
    A: np.ndarray
    kinds: tuple[VertexKind, ...]
    truncations: dict = field(default_factory=dict)
    Q: np.ndarray | None = None
    Q_prime: np.ndarray | None = None
    F03: np.ndarray | None = None
    F12: np.ndarray | None = None
    h: np.ndarray | None = None

    @property
    def vertices(self) -> np.ndarray:
        return np.eye(4)

    @property
    def faces(self) -> np.ndarray:
        return np.eye(4)

    def vertex(self, i: int) -> np.ndarray:
        return np.eye(4)[i]

    def face(self, i: int) -> np.ndarray:
        return np.eye(4)[i]

    def kernel(self) -> np.ndarray:
        """The point a3 ∩ A3A2 where the cobweb copies are glued."""
        if self.kinds[3] is not VertexKind.OUTER:
            raise InvalidParameter("kernel point needs an outer vertex A3")
        E = np.eye(4)
        return _line_polar_point(E[3], E[2], self.A)


def build(u: int, v: int, w: int) -> CompleteOrthoscheme:
    B = pl.schlafli_matrix(u, v, w)
    if pl.signature(B) != (3, 1, 0):
        raise NotHyperbolic(f"O({u},{v},{w}) is not hyperbolic")
    A = pl.vertex_gram(B)
    E = np.eye(4)
    kinds = tuple(_kind(A[i, i]) for i in range(4))
    trunc = {i: pl.polar(E[i], A) for i in range(4) if kinds[i] is VertexKind.OUTER}
    Q = Qp = None
    if kinds[3] is VertexKind.OUTER:
        Q = _line_polar_point(E[3], E[0], A)
    if kinds[0] is VertexKind.OUTER:
        Qp = _line_polar_point(E[0], E[3], A)
    end3 = Q if Q is not None else E[3]
    end0 = Qp if Qp is not None else E[0]
    F03 = pl.midpoint(end3, end0, A)
    # A1 and A2 are proper for every hyperbolic (u, v, w) with v >= 3 here,
    # otherwise fall back to the truncated segment like F03.
    end1 = E[1] if kinds[1] is VertexKind.PROPER else _line_polar_point(E[1], E[2], A)
    end2 = E[2] if kinds[2] is VertexKind.PROPER else _line_polar_point(E[2], E[1], A)
    F12 = pl.midpoint(end1, end2, A)
    h = pl.half_turn(F03, F12, A) if u == w else None
    return CompleteOrthoscheme((u, v, w), B, A, kinds, trunc, Q, Qp, F03, F12, h)


def vertex_kind(O: CompleteOrthoscheme, i: int) -> VertexKind:
    return O.kinds[i]


def dihedral_angle(u: np.ndarray, v: np.ndarray, B: np.ndarray) -> float:
    """Interior angle between two faces whose forms are positive inside."""
    c = -pl.form_inner(u, v, B) / np.sqrt(pl.form_inner(u, u, B) * pl.form_inner(v, v, B))
    return float(np.arccos(np.clip(c, -1.0, 1.0)))


# ---------------------------------------------------------------------------
# Lobachevsky function


def clausen2(theta: float, tol: float = 1e-15) -> float:
    """Clausen function Cl2 via its power series about 0.

    After reduction to [-pi, pi] the series ratio is at most 1/4, so the
    tail after any term is bounded by a geometric sum.
    """
    t = float(theta) - 2.0 * np.pi * np.round(float(theta) / (2.0 * np.pi))
    if t == 0.0:
        return 0.0
    sgn = 1.0 if t > 0 else -1.0
    t = abs(t)
    r = (t / (2.0 * np.pi)) ** 2
    total = t - t * np.log(t)
    pw = t
    n = 1
    while True:
        pw *= r
        total += zeta(2 * n) * pw / (n * (2 * n + 1))
        nxt = zeta(2) * pw * r / ((n + 1) * (2 * n + 3))
        if nxt / (1.0 - r) < tol:
            break
        n += 1
    return sgn * total


def lobachevsky(x: float, tol: float = 1e-14) -> float:
    """Lobachevsky function  -int_0^x log|2 sin t| dt  = Cl2(2x) / 2."""
    return 0.5 * clausen2(2.0 * float(x), tol=2.0 * tol)


def theta_angle(b01: float, b12: float, b23: float) -> float:
    disc = np.cos(b12) ** 2 - np.sin(b01) ** 2 * np.sin(b23) ** 2
    if disc < 0:
        raise NotCompleteOrthoscheme("negative discriminant in the volume formula")
    return float(np.arctan(np.sqrt(disc) / (np.cos(b01) * np.cos(b23))))


def volume_from_angles(b01: float, b12: float, b23: float, L=lobachevsky) -> float:
    th = theta_angle(b01, b12, b23)
    h = np.pi / 2
    return 0.25 * (
        L(b01 + th) - L(b01 - th)
        + L(h + b12 - th) + L(h - b12 - th)
        + L(b23 + th) - L(b23 - th)
        + 2 * L(h - th)
    )


def volume(u: int, v: int, w: int) -> float:
    build(u, v, w)
    return float(volume_from_angles(np.pi / u, np.pi / v, np.pi / w))


def half_domain_volume(O: CompleteOrthoscheme) -> float:
    u, v, w = O.params
    if u != w:
        raise NoHalfturnSymmetry("the half-turn needs u == w")
    return volume(u, v, w) / 2.0


# ---------------------------------------------------------------------------
# explicit half domain W


@dataclass
class HalfDomain:
    """W = the part of the complete orthoscheme on one side of a plane through h.

    ``planes`` maps face names (b0..b3, a0, a3, H) to forms that are
    positive inside W; ``faces`` maps names to vertex index cycles.
    """
    orthoscheme: CompleteOrthoscheme
    planes: dict
    vertices: list
    on: list
    faces: dict
    edge_angle: dict
    corner_angle: list

    @property
    def A(self):
        return self.orthoscheme.A

    @property
    def B(self):
        return self.orthoscheme.B


def halving_plane(O: CompleteOrthoscheme, kind: str = "perp_A1A2") -> np.ndarray:
    """Plane through the half-turn axis.

    ``perp_A1A2`` is orthogonal to edge A1A2 at F12 (the canonical
    choice), ``perp_axis`` is orthogonal to edge A0A3 at F03.
    """
    A = O.A
    E = np.eye(4)
    if kind == "perp_A1A2":
        P, R = pl.normalize_point(E[1], A), pl.normalize_point(E[2], A)
    elif kind == "perp_axis":
        P, R = pl.normalize_point(O.Q, A), pl.normalize_point(O.Q_prime, A)
    else:
        raise InvalidParameter(f"unknown halving plane {kind!r}")
    if pl.point_inner(P, R, A) > 0:
        R = -R
    return A @ (P - R)


def _order_cycle(points: np.ndarray) -> list[int]:
    c = points.mean(0)
    _, _, vt = np.linalg.svd(points - c)
    ang = np.arctan2((points - c) @ vt[1], (points - c) @ vt[0])
    return [int(i) for i in np.argsort(ang)]


def half_domain(O: CompleteOrthoscheme, halving: str | np.ndarray = "perp_A1A2") -> HalfDomain:
    if O.h is None:
        raise NoHalfturnSymmetry("the half domain needs u == w")
    A, B = O.A, O.B
    E = np.eye(4)
    forms = {f"b{i}": E[i] for i in range(4)}
    for i, a in O.truncations.items():
        forms[f"a{i}"] = a
    forms["H"] = halving if isinstance(halving, np.ndarray) else halving_plane(O, halving)
    # interior probe near the kernel on the A1, A2, F12 side
    probe = pl.normalize_point(O.Q, A)
    for X in (O.F12, E[1], E[2]):
        probe = probe + 0.05 * pl.normalize_point(X, A)
    planes = {}
    for k, u in forms.items():
        s = u @ probe
        if abs(s) < 1e-9:
            raise InvalidParameter(f"probe point lies on plane {k}")
        planes[k] = u * np.sign(s)
    names = list(planes)
    L = pl.klein_frame(A)
    ref = pl.normalize_point(O.Q, A)
    verts, on = [], []
    for tri in itertools.combinations(names, 3):
        M = np.array([planes[k] for k in tri])
        _, sv, vt = np.linalg.svd(M)
        if sv[-1] < 1e-9:
            continue
        X = vt[-1]
        if pl.point_inner(X, X, A) >= -1e-12:
            continue
        X = pl.normalize_point(X, A)
        if pl.point_inner(X, ref, A) > 0:
            X = -X
        if any(planes[k] @ X < -1e-9 for k in names):
            continue
        if any(np.allclose(X, Y, atol=1e-8) for Y in verts):
            continue
        verts.append(X)
        on.append(frozenset(k for k in names if abs(planes[k] @ X) < 1e-9))
    faces = {}
    for k in names:
        idx = [i for i, o in enumerate(on) if k in o]
        if len(idx) < 3:
            continue
        pts = np.array([pl.klein_coords(verts[i], A, L) for i in idx])
        faces[k] = [idx[j] for j in _order_cycle(pts)]
    edge_angle = {}
    for f1, f2 in itertools.combinations(sorted(faces), 2):
        common = set(faces[f1]) & set(faces[f2])
        if len(common) == 2:
            edge_angle[frozenset(common)] = dihedral_angle(planes[f1], planes[f2], B)
    corner = []
    for i in range(len(verts)):
        inc = [ang for e, ang in edge_angle.items() if i in e]
        corner.append(float(sum(inc) - (len(inc) - 2) * np.pi))
    return HalfDomain(O, planes, verts, on, faces, edge_angle, corner)


@lru_cache(maxsize=None)
def cobweb_orthoscheme(z: int) -> CompleteOrthoscheme:
    return build(2 * z, 2 * z, 2 * z)
