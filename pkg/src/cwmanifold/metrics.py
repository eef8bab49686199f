"""Ball volumes, domain radii and packing/covering densities."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from . import projlin as pl
from .errors import InvalidRadius, KernelNotInterior, NotProperPoint, NotRealPlane
from .orthoscheme import build, volume


@dataclass(frozen=True)
class DensityReport:
    cell_volume: float
    inradius: float
    circumradius: float
    packing_density: float
    covering_density: float
    inball_face: str = ""

    def as_dict(self) -> dict:
        return {
            "cell_volume": self.cell_volume,
            "inradius": self.inradius,
            "circumradius": self.circumradius,
            "packing_density": self.packing_density,
            "covering_density": self.covering_density,
            "inball_face": self.inball_face,
        }


def ball_volume(r: float) -> float:
    """Volume of a hyperbolic ball of radius r (curvature -1)."""
    if r < 0:
        raise InvalidRadius(f"radius must be non-negative, got {r}")
    if r < 1e-3:
        # series avoids cancellation in sinh(2r) - 2r
        return float(4.0 / 3.0 * np.pi * r ** 3 * (1.0 + r ** 2 / 5.0 + 2.0 * r ** 4 / 105.0))
    return float(np.pi * (np.sinh(2.0 * r) - 2.0 * r))


def point_plane_distance(X: np.ndarray, u: np.ndarray, A: np.ndarray, B: np.ndarray) -> float:
    xx = pl.point_inner(X, X, A)
    if xx >= 0:
        raise NotProperPoint("point-plane distance needs a proper point")
    uu = pl.form_inner(u, u, B)
    if uu <= 0:
        raise NotRealPlane("point-plane distance needs a real plane")
    return float(np.arcsinh(abs(float(np.asarray(u) @ np.asarray(X))) / np.sqrt(-xx * uu)))


def domain_radii(planes, vertices, kernel: np.ndarray, A: np.ndarray, B: np.ndarray,
                 tol: float = 1e-9) -> tuple[float, float, int]:
    """(inradius, circumradius, index of the nearest face) about a kernel point.

    ``planes`` are forms positive on the domain, ``vertices`` proper points.
    """
    vals = [float(u @ kernel) for u in planes]
    if min(vals) <= tol * max(1.0, float(np.abs(kernel).max())):
        raise KernelNotInterior("kernel point is not strictly inside the domain")
    d = [point_plane_distance(kernel, u, A, B) for u in planes]
    k = int(np.argmin(d))
    R = max(pl.distance(kernel, V, A) for V in vertices)
    return d[k], R, k


def _report(cell: float, r: float, R: float, face: str = "") -> DensityReport:
    return DensityReport(cell, r, R, ball_volume(r) / cell, ball_volume(R) / cell, face)


def _vertices_of(planes: dict, A: np.ndarray, ref: np.ndarray, tol: float = 1e-9) -> list:
    out = []
    for tri in itertools.combinations(planes, 3):
        M = np.array([planes[k] for k in tri])
        _, sv, vt = np.linalg.svd(M)
        if sv[-1] < tol:
            continue
        X = vt[-1]
        if pl.point_inner(X, X, A) >= 0:
            continue
        X = pl.normalize_point(X, A)
        if pl.point_inner(X, ref, A) > 0:
            X = -X
        if all(u @ X >= -tol for u in planes.values()):
            if not any(np.allclose(X, Y, atol=1e-8) for Y in out):
                out.append(X)
    return out


def football_report() -> DensityReport:
    """Densities of the ball arrangement with the dodecahedral 120-cell group.

    The cell around A3 is made of 120 half orthoschemes of O(5,3,5).  Its
    faces come from the hexagon plane (orthogonal to A0A3 at F03) and the
    pentagon plane b3 (orthogonal to A3A2 at A2).
    """
    O = build(5, 3, 5)
    A, B = O.A, O.B
    E = np.eye(4)
    A3 = pl.normalize_point(E[3], A)
    A0 = pl.normalize_point(E[0], A)
    if pl.point_inner(A0, A3, A) > 0:
        A0 = -A0
    hexagon = A @ (A3 - A0)       # bisector of A0 and A3, contains F03
    if hexagon @ A3 < 0:
        hexagon = -hexagon
    pentagon = E[3] if E[3] @ A3 > 0 else -E[3]
    faces = {"hexagon": hexagon, "pentagon": pentagon}
    planes = {f"b{i}": E[i] * np.sign(E[i] @ (A3 + 0.1 * (E[0] + E[1] + E[2]))) for i in range(3)}
    planes.update(faces)
    verts = _vertices_of(planes, A, A3)
    r, R, k = domain_radii(list(faces.values()), verts, A3, A, B)
    cell = 60.0 * volume(5, 3, 5)
    return _report(cell, r, R, list(faces)[k])


def cobweb_report(z: int, scheme: str = "simplified") -> DensityReport:
    """Densities of the ball orbit of the kernel under the cobweb manifold group."""
    from .cobweb import build_cobweb
    poly = build_cobweb(z)
    A, B = poly.A, poly.B
    r, R, k = domain_radii([F.plane for F in poly.faces], poly.vertex_vectors(),
                           pl.normalize_point(poly.kernel, A), A, B)
    cell = 4 * z * volume(2 * z, 2 * z, 2 * z)
    return _report(cell, r, R, f"face {k}")
