"""Cobweb polyhedra Cw(2z) and their face pairings.

The polyhedron is the union of the 8z images of the half domain W(2z)
under the stabilizer of the kernel point a3 ∩ A3A2 (generated by the
reflections in b0, b1 and a3).  Each boundary piece of a copy is glued
to a partner piece by an element of the manifold group; the group
elements used are stored as words in the extended reflection group
(see ``data/pairings.json``) and are matched to pieces here.

Edge cycles, angle sums, class counts and vertex links are then
computed from the assembled boundary.

The polyhedron is assembled in a Lorentz-orthonormal frame centred at the
kernel point (``kernel_frame``): there the pairing matrices have entries
of order cosh(2 R) with R the circumradius, while in the vertex basis
they grow much faster with z and long products lose precision.
"""

from __future__ import annotations

import collections
import itertools
import json
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from typing import Callable, Sequence

import mpmath
import numpy as np

from . import groups as gr
from . import projlin as pl
from .errors import (
    GluingFailure,
    NonclosingCycle,
    PairingConstructionFailure,
    StabilizerOverflow,
    UnboundGenerator,
    UnsupportedParameter,
)
from .orthoscheme import CompleteOrthoscheme, HalfDomain, cobweb_orthoscheme, half_domain

LETTERS = ("r0", "r1", "r2", "r3", "ra3", "ra0", "h")
KEY_DIGITS = 7
POINT_DIGITS = 6
MERGE_TOL = 1e-8
WORD_DPS = 40


def check_z(z: int) -> None:
    if int(z) != z or z < 3 or z % 2 == 0:
        raise UnsupportedParameter(
            f"z={z}: no cobweb manifold is constructed for even or small z")


# ---------------------------------------------------------------------------
# extended group


# Pairing matrices are words of up to ~30 letters and relators multiply up
# to 4z of them, so float64 word products lose several digits.  Letters,
# frame and words are therefore evaluated with mpmath and rounded once.


@lru_cache(maxsize=None)
def _hp_letters(z: int):
    """(frame T, frame inverse, {letter: matrix in frame}) at WORD_DPS digits."""
    mp = mpmath.mp.clone()
    mp.dps = WORD_DPS
    u = 2 * z
    B = mp.eye(4)
    for i in range(3):
        B[i, i + 1] = B[i + 1, i] = -mp.cos(mp.pi / u)
    A = B ** -1
    e = [mp.matrix([1 if i == j else 0 for j in range(4)]) for i in range(4)]
    ip = lambda X, Y: (X.T * A * Y)[0]  # noqa: E731

    def refl(f):
        return mp.eye(4) - 2 * (B * f) * f.T / (f.T * B * f)[0]

    def line_polar(P, R):
        t = -ip(P, P) / (ip(R, P) - ip(P, P))
        return P + t * (R - P)

    def unit(X):
        return X / mp.sqrt(-ip(X, X))

    def mid(X, Y):
        X, Y = unit(X), unit(Y)
        return X + (-Y if ip(X, Y) > 0 else Y)

    F03 = mid(line_polar(e[3], e[0]), line_polar(e[0], e[3]))
    F12 = mid(e[1], e[2])
    P = mp.matrix(4, 2)
    for i in range(4):
        P[i, 0], P[i, 1] = F03[i], F12[i]
    h = 2 * P * (P.T * A * P) ** -1 * P.T * A - mp.eye(4)
    # kernel frame by Lorentz Gram-Schmidt
    cols = [unit(line_polar(e[3], e[2]))]
    for x in e:
        v = x + ip(x, cols[0]) * cols[0]
        for c in cols[1:]:
            v = v - ip(v, c) * c
        if ip(v, v) > 1e-6:
            cols.append(v / mp.sqrt(ip(v, v)))
        if len(cols) == 4:
            break
    T = mp.matrix(4, 4)
    for j, c in enumerate(cols):
        for i in range(4):
            T[i, j] = c[i]
    Ti = T ** -1
    letters = {f"r{i}": refl(e[i]) for i in range(4)}
    letters["ra3"] = refl(A * e[3])
    letters["ra0"] = refl(A * e[0])
    letters["h"] = h
    return mp, T, Ti, {k: Ti * M * T for k, M in letters.items()}


def _to_float(M) -> np.ndarray:
    return np.array([[float(M[i, j]) for j in range(M.cols)] for i in range(M.rows)])


J = np.diag([-1.0, 1.0, 1.0, 1.0])


def frame_inverse(M: np.ndarray) -> np.ndarray:
    """Inverse of a frame isometry as J M^T J (exact for an isometry)."""
    return J @ np.asarray(M).T @ J


def accurate_product(mats: Sequence[np.ndarray]) -> np.ndarray:
    """Product of float matrices evaluated at WORD_DPS digits, rounded once."""
    mp = _hp_letters(3)[0]
    P = mp.eye(4)
    for M in mats:
        P = P * mp.matrix(np.asarray(M, dtype=float).tolist())
    return _to_float(P)


def frame_evaluate(w: gr.Word, assignment: dict[int, np.ndarray]) -> np.ndarray:
    """``groups.evaluate`` for frame isometries with accurate products."""
    mats = []
    for g, e in w:
        if g not in assignment:
            raise UnboundGenerator(f"generator {g} has no matrix")
        mats.append(assignment[g] if e == 1 else frame_inverse(assignment[g]))
    return accurate_product(mats)


def kernel_frame(O: CompleteOrthoscheme) -> np.ndarray:
    """Columns T = (K, e1, e2, e3) with T^T A T = diag(-1, 1, 1, 1), K the kernel.

    A point with vertex coordinates X has frame coordinates T^-1 X, a
    matrix M becomes T^-1 M T and a form u becomes u T.
    """
    u, v, w = O.params
    if not (u == v == w and u % 2 == 0):
        raise UnsupportedParameter("the kernel frame is defined for O(2z, 2z, 2z)")
    return _to_float(_hp_letters(u // 2)[1])


def frame_word_matrix(z: int, word: Sequence[str]) -> np.ndarray:
    """Correctly rounded matrix of a word in the kernel frame of O(2z,2z,2z)."""
    mp, _, _, L = _hp_letters(z)
    M = mp.eye(4)
    for x in word:
        M = M * L[x]
    return _to_float(M)


def extended_generators(O: CompleteOrthoscheme, frame: np.ndarray | None = None
                        ) -> dict[str, np.ndarray]:
    """Reflections in b0..b3, a3, a0 and the half-turn h (optionally in a frame)."""
    E = np.eye(4)
    g = {f"r{i}": pl.reflection_matrix(E[i], O.B) for i in range(4)}
    g["ra3"] = pl.reflection_matrix(O.truncations[3], O.B)
    g["ra0"] = pl.reflection_matrix(O.truncations[0], O.B)
    g["h"] = O.h
    if frame is not None:
        u = O.params[0]
        if np.array_equal(frame, kernel_frame(O)):
            return {k: frame_word_matrix(u // 2, (k,)) for k in g}
        Ti = np.linalg.inv(frame)
        g = {k: Ti @ M @ frame for k, M in g.items()}
    return g


def word_matrix(word: Sequence[str], gens: dict[str, np.ndarray]) -> np.ndarray:
    """Product of involutive letters, leftmost first."""
    M = np.eye(4)
    for x in word:
        M = M @ gens[x]
    return M


def matrix_key(M: np.ndarray) -> tuple:
    """Hashable projective class of a matrix."""
    M = np.asarray(M, dtype=float)
    flat = M.ravel()
    i = int(np.argmax(np.abs(flat) > 1e-9))
    return tuple(np.round(flat / flat[i], KEY_DIGITS) + 0.0)


def group_closure(gens: dict[str, np.ndarray], names: Sequence[str],
                  limit: int) -> list[tuple[np.ndarray, tuple[str, ...]]]:
    """Breadth-first closure with shortest words, deterministic order."""
    I = np.eye(4)
    seen = {matrix_key(I)}
    out = [(I, ())]
    frontier = [(I, ())]
    while frontier:
        nxt = []
        for M, w in frontier:
            for x in names:
                N = M @ gens[x]
                k = matrix_key(N)
                if k in seen:
                    continue
                seen.add(k)
                out.append((N, w + (x,)))
                nxt.append((N, w + (x,)))
                if len(out) > limit:
                    raise StabilizerOverflow(f"closure exceeded {limit} elements")
        frontier = nxt
    return out


def stabilizer_of_Q(z: int) -> list[np.ndarray]:
    """The 8z elements generated by the reflections in b1, b2 and a3."""
    check_z(z)
    O = cobweb_orthoscheme(z)
    g = extended_generators(O)
    els = group_closure(g, ("r1", "r2", "ra3"), 8 * z)
    if len(els) != 8 * z:
        raise StabilizerOverflow(f"expected {8 * z} elements, got {len(els)}")
    return [M for M, _ in els]


def stabilizer_of_kernel(z: int, frame: np.ndarray | None = None
                         ) -> list[tuple[np.ndarray, tuple[str, ...]]]:
    """(matrix, word) for the 8z elements generated by r0, r1, ra3."""
    check_z(z)
    O = cobweb_orthoscheme(z)
    els = group_closure(extended_generators(O, frame), ("r0", "r1", "ra3"), 8 * z)
    if len(els) != 8 * z:
        raise StabilizerOverflow(f"expected {8 * z} elements, got {len(els)}")
    if frame is not None and np.array_equal(frame, kernel_frame(O)):
        els = [(frame_word_matrix(z, w), w) for _, w in els]
    return els


# ---------------------------------------------------------------------------
# stored pairing data


@lru_cache(maxsize=None)
def pairing_data() -> dict:
    text = resources.files("cwmanifold").joinpath("data/pairings.json").read_text()
    return json.loads(text)


def supported_z() -> list[int]:
    return sorted(int(z) for z in pairing_data()["cobweb"])


def _entry(z: int) -> dict:
    check_z(z)
    try:
        return pairing_data()["cobweb"][str(z)]
    except KeyError:
        raise UnsupportedParameter(
            f"no stored face pairing for z={z}; available: {supported_z()}") from None


def parse_letters(text: str) -> tuple[str, ...]:
    w = tuple(text.split())
    bad = [x for x in w if x not in LETTERS]
    if bad:
        raise ValueError(f"unknown letters {bad}")
    return w


# ---------------------------------------------------------------------------
# polyhedron


@dataclass
class Piece:
    tile: int
    face: str              # name of the face of W
    points: tuple          # point keys in cyclic order
    partner: int = -1      # index of partner piece
    pairing: int = -1      # index into CobwebPolyhedron.pairings
    sign: int = 1          # gamma = pairings[pairing] ** sign maps partner onto this piece


@dataclass
class Face:
    plane: np.ndarray      # form, positive on the polyhedron
    cycle: list            # vertex indices in cyclic order
    pieces: list
    partner: int = -1
    pairing: int = -1
    sign: int = 1


@dataclass
class Edge:
    ends: tuple            # vertex indices
    faces: tuple           # the two incident face indices
    segments: list
    angle: float


@dataclass
class CobwebPolyhedron:
    z: int
    orthoscheme: CompleteOrthoscheme
    W: HalfDomain
    frame: np.ndarray      # kernel frame T; all vectors and matrices below are in it
    kernel: np.ndarray
    tiles: list            # (matrix, word)
    pairings: list         # face-pairing isometries (one per face pair, up to inverse)
    pairing_words: list
    points: dict           # key -> normalized point vector
    pieces: list
    vertices: list         # vertex point keys, sorted
    faces: list
    edges: list
    corner_solid_angle: dict = field(default_factory=dict)
    segment_angle: dict = field(default_factory=dict)

    @property
    def A(self):
        return J.copy()

    @property
    def B(self):
        return J.copy()

    def to_vertex_basis(self, M: np.ndarray) -> np.ndarray:
        """Matrix of an isometry in the orthoscheme vertex basis."""
        return self.frame @ M @ np.linalg.inv(self.frame)

    def vertex_vectors(self) -> np.ndarray:
        return np.array([self.points[k] for k in self.vertices])

    def face_map(self, f: int) -> np.ndarray:
        """Isometry carrying face f onto its partner."""
        F = self.faces[f]
        g = self.pairings[F.pairing]
        return frame_inverse(g) if F.sign == 1 else g

    def volume(self) -> float:
        from .orthoscheme import half_domain_volume
        return len(self.tiles) * half_domain_volume(self.orthoscheme)


class _Keyer:
    def __init__(self, A: np.ndarray, ref: np.ndarray):
        self.A, self.ref = A, ref

    def __call__(self, X: np.ndarray) -> tuple:
        X = pl.normalize_point(X, self.A)
        if X @ self.A @ self.ref > 0:
            X = -X
        return tuple(np.round(X, POINT_DIGITS) + 0.0)

    def vector(self, X: np.ndarray) -> np.ndarray:
        X = pl.normalize_point(X, self.A)
        return -X if X @ self.A @ self.ref > 0 else X


def _skey(a, b):
    return (a, b) if a < b else (b, a)


Matcher = Callable[[int, str], tuple[int, np.ndarray]]


def word_matcher(tiles, gens, face_letter, pairings) -> Callable:
    """Match a piece to its partner with a stored set of pairing isometries.

    Returns ``(partner_tile, pairing_index, sign)``.
    """
    tile_index = {matrix_key(M): i for i, (M, _) in enumerate(tiles)}
    cands = []
    for k, g in enumerate(pairings):
        cands.append((k, 1, np.linalg.inv(g)))
        cands.append((k, -1, g))

    def match(ti: int, face: str):
        N = tiles[ti][0] @ gens[face_letter[face]]
        hits = []
        for k, sgn, ginv in cands:
            j = tile_index.get(matrix_key(ginv @ N))
            if j is not None:
                hits.append((j, k, sgn))
        if len(hits) != 1:
            raise GluingFailure(
                f"piece ({ti}, {face}) matched {len(hits)} pairings instead of one")
        return hits[0]

    return match


FACE_LETTER = {"b0": "r0", "b1": "r1", "b2": "r2", "b3": "r3",
               "a3": "ra3", "a0": "ra0", "H": "h"}


def build_cobweb(z: int, halving: str = "perp_A1A2", pairing_words: Sequence[str] | None = None,
                 matcher: Callable | None = None, pairings: Sequence[np.ndarray] | None = None
                 ) -> CobwebPolyhedron:
    """Glue the 8z copies of W around the kernel and extract the boundary.

    By default the gluing isometries come from the stored pairing words
    for z.  A custom ``matcher(tile, face) -> (tile', k, sign)`` with an
    explicit list of ``pairings`` may be supplied instead.
    """
    check_z(z)
    O = cobweb_orthoscheme(z)
    W = half_domain(O, halving)
    T = kernel_frame(O)
    Ti = np.linalg.inv(T)
    A = np.diag([-1.0, 1.0, 1.0, 1.0])   # T^T A T
    gens = extended_generators(O, T)
    kernel = np.array([1.0, 0.0, 0.0, 0.0])
    tiles = stabilizer_of_kernel(z, T)
    w_vertices = [Ti @ X for X in W.vertices]
    w_planes = {k: u @ T for k, u in W.planes.items()}
    if matcher is None:
        if pairing_words is None:
            pairing_words = _entry(z)["face_pairings"]
        pairing_words = [" ".join(parse_letters(w)) for w in pairing_words]
        pairings = [frame_word_matrix(z, parse_letters(w)) for w in pairing_words]
        matcher = word_matcher(tiles, gens, FACE_LETTER, pairings)
    keyer = _Keyer(A, kernel)

    # pieces of all copies
    points: dict = {}
    pieces: list[Piece] = []
    count = collections.Counter()
    seg_angle = collections.defaultdict(float)
    corner = collections.defaultdict(float)
    for ti, (M, _) in enumerate(tiles):
        keys = []
        for X in w_vertices:
            Y = M @ X
            k = keyer(Y)
            points.setdefault(k, keyer.vector(Y))
            keys.append(k)
        for e, ang in W.edge_angle.items():
            a, b = tuple(e)
            seg_angle[_skey(keys[a], keys[b])] += ang
        for i, k in enumerate(keys):
            corner[k] += W.corner_angle[i]
        for fname, cyc in W.faces.items():
            pk = tuple(keys[i] for i in cyc)
            pieces.append(Piece(ti, fname, pk))
            count[frozenset(pk)] += 1
    if max(count.values()) > 2:
        raise GluingFailure("a facet is shared by more than two copies")
    bpieces = [p for p in pieces if count[frozenset(p.points)] == 1]
    by_tile_face = {(p.tile, p.face): i for i, p in enumerate(bpieces)}
    for i, p in enumerate(bpieces):
        tj, k, sgn = matcher(p.tile, p.face)
        j = by_tile_face.get((tj, p.face))
        if j is None:
            raise GluingFailure(f"partner of piece ({p.tile}, {p.face}) is interior")
        p.partner, p.pairing, p.sign = j, k, sgn
    for i, p in enumerate(bpieces):
        q = bpieces[p.partner]
        if q.partner != i or q.pairing != p.pairing or q.sign != -p.sign:
            raise GluingFailure("piece pairing is not an involution")

    # merge coplanar adjacent pieces with the same pairing
    planes = []
    for p in bpieces:
        u = w_planes[p.face] @ np.linalg.inv(tiles[p.tile][0])
        planes.append(u / np.linalg.norm(u))
    seg_pieces = collections.defaultdict(list)
    for i, p in enumerate(bpieces):
        for a, b in zip(p.points, p.points[1:] + p.points[:1]):
            seg_pieces[_skey(a, b)].append(i)
    parent = list(range(len(bpieces)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for sg, lst in seg_pieces.items():
        if len(lst) != 2:
            raise GluingFailure("boundary is not closed")
        i, j = lst
        same_plane = abs(abs(planes[i] @ planes[j]) - 1.0) < MERGE_TOL
        same_map = (bpieces[i].pairing, bpieces[i].sign) == (bpieces[j].pairing, bpieces[j].sign)
        if same_plane and same_map:
            parent[find(i)] = find(j)
    groups = collections.defaultdict(list)
    for i in range(len(bpieces)):
        groups[find(i)].append(i)
    face_lists = sorted(groups.values(), key=lambda g: min(g))
    face_of_piece = {i: fi for fi, g in enumerate(face_lists) for i in g}
    seg_faces = {sg: tuple(sorted(face_of_piece[i] for i in lst)) for sg, lst in seg_pieces.items()}

    # vertices: points where three faces meet or where the boundary bends
    pt_faces = collections.defaultdict(set)
    pt_segs = collections.defaultdict(list)
    for sg, fs in seg_faces.items():
        if fs[0] == fs[1]:
            continue
        for p in sg:
            pt_faces[p].update(fs)
            pt_segs[p].append(sg)
    verts = set()
    for p, fs in pt_faces.items():
        if len(fs) >= 3 or len(pt_segs[p]) != 2:
            verts.add(p)
            continue
        other = [q for sg in pt_segs[p] for q in sg if q != p]
        sv = np.linalg.svd(np.array([points[p], points[other[0]], points[other[1]]]),
                           compute_uv=False)
        if sv[-1] > 1e-7:
            verts.add(p)
    face_maps = []
    for g in face_lists:
        p = bpieces[g[0]]
        gm = pairings[p.pairing]
        face_maps.append(frame_inverse(gm) if p.sign == 1 else gm)
    stack = list(verts)
    while stack:
        p = stack.pop()
        for f in pt_faces[p]:
            q = keyer(face_maps[f] @ points[p])
            if q not in pt_faces:
                raise GluingFailure("face map sends a boundary point off the boundary")
            if q not in verts:
                verts.add(q)
                stack.append(q)
    vlist = sorted(verts)
    vindex = {k: i for i, k in enumerate(vlist)}

    # edges: maximal chains of boundary segments between vertices
    adj = collections.defaultdict(list)
    for sg, fs in seg_faces.items():
        if fs[0] != fs[1]:
            for p in sg:
                adj[p].append(sg)
    edges: list[Edge] = []
    used = set()
    for sg in sorted(s for s, fs in seg_faces.items() if fs[0] != fs[1]):
        if sg in used:
            continue
        chain = [sg]
        used.add(sg)
        ends = list(sg)
        for side in (0, 1):
            p, cur = ends[side], sg
            while p not in verts:
                nxt = [x for x in adj[p] if x != cur]
                cur = nxt[0]
                used.add(cur)
                chain.append(cur)
                p = cur[0] if cur[1] == p else cur[1]
            ends[side] = p
        edges.append(Edge((vindex[ends[0]], vindex[ends[1]]), seg_faces[sg], chain,
                          float(seg_angle[sg])))

    # faces with ordered vertex cycles
    faces: list[Face] = []
    for fi, g in enumerate(face_lists):
        segs = collections.Counter()
        for i in g:
            pk = bpieces[i].points
            for a, b in zip(pk, pk[1:] + pk[:1]):
                segs[_skey(a, b)] += 1
        outer = [s for s, c in segs.items() if c == 1]
        cyc = _chain_cycle(outer)
        u = planes[g[0]]
        if u @ kernel < 0:
            u = -u
        p0 = bpieces[g[0]]
        faces.append(Face(u, [vindex[p] for p in cyc if p in verts], list(g), pairing=p0.pairing,
                          sign=p0.sign))
    for fi, g in enumerate(face_lists):
        faces[fi].partner = face_of_piece[bpieces[g[0]].partner]

    solid = {vindex[k]: corner[k] for k in vlist}
    if pairing_words is None:
        pairing_words = [""] * len(pairings)
    poly = CobwebPolyhedron(z, O, W, T, kernel, tiles, list(pairings), list(pairing_words),
                            points, bpieces, vlist, faces, edges, solid, dict(seg_angle))
    return poly


def _chain_cycle(segs: list) -> list:
    adj = collections.defaultdict(list)
    for a, b in segs:
        adj[a].append(b)
        adj[b].append(a)
    start = min(adj)
    cyc = [start]
    prev, cur = None, start
    while True:
        nxt = [x for x in adj[cur] if x != prev]
        if len(adj[cur]) != 2:
            raise GluingFailure("face boundary is not a simple cycle")
        prev, cur = cur, nxt[0]
        if cur == start:
            break
        cyc.append(cur)
    if len(cyc) != len(adj):
        raise GluingFailure("face boundary has several components")
    return cyc


# ---------------------------------------------------------------------------
# schemes and pairings


SCHEMES = ("original", "simplified")


@dataclass
class FacePairing:
    scheme: str
    z: int
    generators: dict               # scheme generator name -> matrix
    pairs: list                    # (face_minus, face_plus, name, matrix)
    presentation: gr.Presentation
    pairing_names: list            # name of each domain pairing
    residuals: dict = field(default_factory=dict)


def scheme_generators(z: int, scheme: str, frame: np.ndarray | None = None
                      ) -> dict[str, np.ndarray]:
    entry = _entry(z)
    if scheme not in entry.get("schemes", {}):
        raise UnsupportedParameter(f"scheme {scheme!r} has no stored generators for z={z}")
    words = entry["schemes"][scheme]["generators"]
    O = cobweb_orthoscheme(z)
    if frame is not None and np.array_equal(frame, kernel_frame(O)):
        return {name: frame_word_matrix(z, parse_letters(w)) for name, w in words.items()}
    gens = extended_generators(O, frame)
    return {name: word_matrix(parse_letters(w), gens) for name, w in words.items()}


def scheme_presentation(z: int, scheme: str) -> gr.Presentation:
    if scheme == "simplified":
        return gr.simplified_presentation(z)
    if scheme == "original":
        if z == 3:
            return gr.cw6_presentation()
        return gr.original_presentation(z, variant="realized")
    raise UnsupportedParameter(f"unknown scheme {scheme!r}")


def face_pairing(poly: CobwebPolyhedron, scheme: str, tol: float = 1e-8) -> FacePairing:
    """Name the domain pairings by the scheme generators and check faces are carried."""
    z = poly.z
    gens = scheme_generators(z, scheme, poly.frame)
    keyer = _Keyer(poly.A, poly.kernel)
    names = []
    gkeys = {}
    for nm, M in gens.items():
        gkeys[matrix_key(M)] = nm
        gkeys[matrix_key(np.linalg.inv(M))] = nm + "^-1"
    for k, P in enumerate(poly.pairings):
        names.append(gkeys.get(matrix_key(P), f"g{k + 1}"))
    for nm, M in gens.items():
        if not any(matrix_key(M) == matrix_key(P) or matrix_key(M) == matrix_key(np.linalg.inv(P))
                   for P in poly.pairings):
            raise PairingConstructionFailure(f"generator {nm} pairs no face of the polyhedron")
    pairs = []
    worst = 0.0
    for fi, F in enumerate(poly.faces):
        if F.sign != 1:
            continue
        # the stored pairing maps the partner face onto F
        M = poly.pairings[F.pairing]
        src = poly.faces[F.partner]
        img = {keyer(M @ poly.points[poly.vertices[v]]) for v in src.cycle}
        tgt = {poly.vertices[v] for v in F.cycle}
        if img != tgt:
            raise PairingConstructionFailure(f"pairing {names[F.pairing]} does not carry face {F.partner} onto {fi}")
        if not pl.is_isometry(M, poly.A, tol):
            raise PairingConstructionFailure(f"pairing {names[F.pairing]} is not an isometry")
        worst = max(worst, float(np.abs(pl.normalize_isometry(M, poly.A).T @ poly.A
                                        @ pl.normalize_isometry(M, poly.A) - poly.A).max()))
        pairs.append((F.partner, fi, names[F.pairing], M))
    return FacePairing(scheme, z, gens, pairs, scheme_presentation(z, scheme), names,
                       {"isometry": worst})


# ---------------------------------------------------------------------------
# verification


@dataclass
class EdgeCycle:
    edges: list                    # edge indices in order
    letters: list                  # (pairing index, sign) applied at each step
    total_angle: float
    matrix: np.ndarray

    @property
    def relator(self) -> gr.Word:
        """Word over the domain pairings whose product is ``matrix``."""
        return tuple(reversed(self.letters))


def edge_cycles(poly: CobwebPolyhedron) -> list[EdgeCycle]:
    """Poincare cycles of edges under the face maps."""
    keyer = _Keyer(poly.A, poly.kernel)
    vidx = {k: i for i, k in enumerate(poly.vertices)}
    by_ends = {frozenset(e.ends): i for i, e in enumerate(poly.edges)}
    if len(by_ends) != len(poly.edges):
        raise NonclosingCycle("two edges share both end points")
    face_maps = [poly.face_map(f) for f in range(len(poly.faces))]

    def image(ei: int, f: int) -> int:
        a, b = poly.edges[ei].ends
        M = face_maps[f]
        ia = vidx.get(keyer(M @ poly.points[poly.vertices[a]]))
        ib = vidx.get(keyer(M @ poly.points[poly.vertices[b]]))
        j = by_ends.get(frozenset((ia, ib)))
        if j is None:
            raise NonclosingCycle(f"edge {ei} has no image under the map of face {f}")
        return j

    seen = set()
    cycles = []
    bound = 4 * len(poly.edges)
    for e0 in range(len(poly.edges)):
        if e0 in seen:
            continue
        f0 = min(poly.edges[e0].faces)
        e, f = e0, f0
        edges_, letters, ang = [], [], 0.0
        maps = []
        for _ in range(bound):
            edges_.append(e)
            seen.add(e)
            ang += poly.edges[e].angle
            F = poly.faces[f]
            letters.append((F.pairing, -F.sign))
            maps.append(face_maps[f])
            e2 = image(e, f)
            fp = F.partner
            other = [x for x in poly.edges[e2].faces if x != fp]
            if len(other) != 1:
                raise NonclosingCycle(f"edge {e2} is not on face {fp}")
            e, f = e2, other[0]
            if (e, f) == (e0, f0):
                break
        else:
            raise NonclosingCycle(f"cycle from edge {e0} does not close")
        cycles.append(EdgeCycle(edges_, letters, ang, accurate_product(maps[::-1])))
    return cycles


@dataclass
class AngleReport:
    residuals: list
    passed: bool
    max_residual: float


def verify_angle_sums(cycles: Sequence[EdgeCycle], tol: float = 1e-8) -> AngleReport:
    res = [abs(c.total_angle - 2 * np.pi) for c in cycles]
    mx = max(res) if res else 0.0
    return AngleReport(res, mx <= tol, mx)


def cycle_matrix_residuals(cycles: Sequence[EdgeCycle]) -> list[float]:
    return [pl.identity_residual(c.matrix) for c in cycles]


def vertex_classes(poly: CobwebPolyhedron) -> list[list[int]]:
    keyer = _Keyer(poly.A, poly.kernel)
    vidx = {k: i for i, k in enumerate(poly.vertices)}
    parent = list(range(len(poly.vertices)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for f in range(len(poly.faces)):
        M = poly.face_map(f)
        for v in poly.faces[f].cycle:
            w = vidx[keyer(M @ poly.points[poly.vertices[v]])]
            parent[find(v)] = find(w)
    cls = collections.defaultdict(list)
    for v in range(len(poly.vertices)):
        cls[find(v)].append(v)
    return sorted(cls.values(), key=lambda c: (-len(c), c))


def class_counts(poly: CobwebPolyhedron, cycles: Sequence[EdgeCycle] | None = None
                 ) -> tuple[int, int, int]:
    if cycles is None:
        cycles = edge_cycles(poly)
    return len(vertex_classes(poly)), len(cycles), len(poly.faces) // 2


def euler_characteristic(V: int, E: int, F: int) -> int:
    return V - E + F - 1


@dataclass
class LinkReport:
    class_sums: list
    residuals: list
    passed: bool
    max_residual: float


def vertex_link_check(poly: CobwebPolyhedron, tol: float = 1e-7) -> LinkReport:
    sums = [sum(poly.corner_solid_angle[v] for v in cls) for cls in vertex_classes(poly)]
    res = [abs(s - 4 * np.pi) for s in sums]
    mx = max(res) if res else 0.0
    return LinkReport(sums, res, mx <= tol, mx)


def euclidean_corner_solid_angle(dihedral: Sequence[float]) -> float:
    """Solid angle of a convex corner from its dihedral angles (spherical excess)."""
    return float(sum(dihedral) - (len(dihedral) - 2) * np.pi)


def is_convex(poly: CobwebPolyhedron, tol: float = 1e-9) -> bool:
    V = poly.vertex_vectors()
    return all((V @ F.plane).min() >= -tol for F in poly.faces)


def relator_residuals(pairing: FacePairing) -> list[float]:
    P = pairing.presentation
    assign = {i: pairing.generators[g] for i, g in enumerate(P.generators)}
    return [pl.identity_residual(frame_evaluate(r, assign)) for r in P.relators]


def base_rotation(poly: CobwebPolyhedron, M: np.ndarray) -> tuple[float, float]:
    """(translation length, rotation angle) of an orientation-preserving isometry."""
    L = pl.klein_frame(poly.A)
    N = L @ M @ np.linalg.inv(L)
    N = N / abs(np.linalg.det(N)) ** 0.25
    if N[0, 0] < 0:
        N = -N
    ev = np.linalg.eigvals(N)
    ell = float(np.log(np.abs(ev).max()))
    unit = [e for e in ev if abs(abs(e) - 1.0) < 1e-6]
    rot = max(abs(float(np.angle(e))) for e in unit) if unit else 0.0
    return ell, rot


@dataclass
class VerifyReport:
    z: int
    scheme: str
    counts: tuple
    euler: int
    edge_class_sizes: list
    vertex_class_sizes: list
    angle: AngleReport
    cycle_residual: float
    link: LinkReport
    relator_residuals: list
    convex: bool
    kernel_interior: bool
    screw: tuple                   # (translation, rotation) of the base pairing s
    checks: dict
    tol: float

    @property
    def passed(self) -> bool:
        return all(self.checks.values())


EXPECTED_COUNTS = {("original", 3): (10, 25, 16)}


def expected_counts(z: int, scheme: str) -> tuple[int, int, int] | None:
    if scheme == "simplified":
        return (1, 2 * z + 1, 2 * z + 1)
    return EXPECTED_COUNTS.get((scheme, z))


def verify(z: int, scheme: str = "simplified", tol: float = 1e-8,
           link_tol: float | None = None) -> VerifyReport:
    if link_tol is None:
        link_tol = max(tol, 1e-7)
    poly = build_cobweb(z)
    # structural tolerance here; the isometry residual is judged against tol below
    fp = face_pairing(poly, scheme, max(tol, 1e-6))
    cycles = edge_cycles(poly)
    ang = verify_angle_sums(cycles, tol)
    cres = max(cycle_matrix_residuals(cycles))
    V, E, F = class_counts(poly, cycles)
    chi = euler_characteristic(V, E, F)
    link = vertex_link_check(poly, link_tol)
    rres = relator_residuals(fp)
    convex = is_convex(poly)
    interior = all(float(F_.plane @ poly.kernel) > tol for F_ in poly.faces)
    screw = base_rotation(poly, fp.generators["s"])
    checks = {
        "isometries": fp.residuals["isometry"] <= tol,
        "cycles_close": cres <= tol,
        "angle_sums": ang.passed,
        "euler": chi == 0,
        "vertex_links": link.passed,
        "relators": max(rres) <= tol,
        "convex": convex,
        "kernel_interior": interior,
        "base_rotation": abs(screw[1] - 2 * np.pi * (z - 1) / (2 * z)) <= max(tol, 1e-8),
    }
    exp = expected_counts(z, scheme)
    if exp is not None:
        checks["class_counts"] = (V, E, F) == exp
    return VerifyReport(z, scheme, (V, E, F), chi,
                        sorted((len(c.edges) for c in cycles), reverse=True),
                        [len(c) for c in vertex_classes(poly)], ang, cres, link, rres,
                        convex, interior, screw, checks, tol)
