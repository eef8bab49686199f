"""Words, presentations, abelianization and integer Smith normal form.

A word is a tuple of letters ``(g, e)`` with ``g`` a generator index and
``e`` in {+1, -1}.  Generator families follow the 1-based convention
``s, a_1 .. a_z`` (or ``c_1 .. c_z``) with index arithmetic mod z.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .errors import UnboundGenerator, UnsupportedParameter

Letter = tuple[int, int]
Word = tuple[Letter, ...]


@dataclass(frozen=True)
class Presentation:
    generators: tuple[str, ...]
    relators: tuple[Word, ...]
    tag: str = ""

    def __post_init__(self):
        n = len(self.generators)
        for r in self.relators:
            for g, e in r:
                if not (0 <= g < n) or e not in (1, -1):
                    raise ValueError(f"bad letter {(g, e)} for {n} generators")

    def word(self, text: str) -> Word:
        return parse_word(text, self.generators)


@dataclass(frozen=True)
class HomologyResult:
    free_rank: int
    invariant_factors: tuple[int, ...] = field(default_factory=tuple)

    @property
    def order(self) -> int | None:
        if self.free_rank:
            return None
        return int(np.prod(self.invariant_factors, dtype=object)) if self.invariant_factors else 1

    def __str__(self) -> str:
        parts = [f"Z_{d}" for d in self.invariant_factors] + ["Z"] * self.free_rank
        return " + ".join(parts) if parts else "0"


# ---------------------------------------------------------------------------
# word arithmetic


def reduce(w: Sequence[Letter]) -> Word:
    out: list[Letter] = []
    for g, e in w:
        if out and out[-1][0] == g and out[-1][1] == -e:
            out.pop()
        else:
            out.append((g, e))
    return tuple(out)


def invert(w: Sequence[Letter]) -> Word:
    return tuple((g, -e) for g, e in reversed(w))


def power(w: Sequence[Letter], k: int) -> Word:
    return tuple(w) * k if k >= 0 else invert(w) * (-k)


def exponent_sums(w: Sequence[Letter], n: int) -> np.ndarray:
    v = np.zeros(n, dtype=np.int64)
    for g, e in w:
        v[g] += e
    return v


_TOKEN = re.compile(r"([A-Za-z][A-Za-z0-9_]*)(?:\^(-?\d+))?")


def parse_word(text: str, generators: Sequence[str]) -> Word:
    """Parse ``a1 a1 s^-1 a2^3``; ``1`` or an empty string is the empty word."""
    idx = {g: i for i, g in enumerate(generators)}
    out: list[Letter] = []
    for tok in text.split():
        if tok == "1":
            continue
        m = _TOKEN.fullmatch(tok)
        if not m or m.group(1) not in idx:
            raise UnboundGenerator(f"unknown token {tok!r}")
        k = int(m.group(2)) if m.group(2) else 1
        out.extend([(idx[m.group(1)], 1 if k > 0 else -1)] * abs(k))
    return tuple(out)


def format_word(w: Sequence[Letter], generators: Sequence[str]) -> str:
    if not w:
        return "1"
    return " ".join(generators[g] + ("" if e == 1 else "^-1") for g, e in w)


# ---------------------------------------------------------------------------
# presentation families


def football_presentation() -> Presentation:
    gens = ("a", "b")
    # first relator: (a^3 b^-1 a^2 b^-2 a^-1)(b^-2 a^-1)(b^-2 a^2 b^-1 a^3 b)
    r1 = "a^3 b^-1 a^2 b^-2 a^-1" + " b^-2 a^-1" + " b^-2 a^2 b^-1 a^3 b"
    # second relator: (a^3 b^-1 a^3 b)(b a^-2 b a^-3)(b a^-2 b a^-3 b a^-2 b^2)
    r2 = "a^3 b^-1 a^3 b" + " b a^-2 b a^-3" + " b a^-2 b a^-3 b a^-2 b^2"
    return Presentation(gens, (parse_word(r1, gens), parse_word(r2, gens)), "football")


def cw6_presentation() -> Presentation:
    gens = ("s", "a1", "a2")
    rels = (
        "a1 a1 s^-1 a1 s a2^-1 a2^-1 s a2^-1 s^-1",
        "s a2^-1 s^2 a1 s^-1 a1 s a2^-1 s a1^-1 s a2 s^-1 a2 s^2 a1^-1",
        "a1 s^-1 a1 a1 s^-1 a1 a2 s^-1 a2 a2 s^-1 a2"
        " s^-1 a2 s^-1 a1 s^-1 s^-1 a2 s^-1 a1 s^-1",
    )
    return Presentation(gens, tuple(parse_word(r, gens) for r in rels), "cw6")


def cw6_abelian_rows() -> np.ndarray:
    """Literal homology rows for Cw(6) in (a1, a2, s) order."""
    return np.array([[3, -3, 0], [0, 0, 6], [6, 6, 2]], dtype=np.int64)


def _check_z(z: int) -> None:
    if z < 3 or z % 2 == 0:
        raise UnsupportedParameter(
            f"z={z}: manifolds are constructed only for odd z >= 3")


def _family_generators(z: int, letter: str) -> tuple[str, ...]:
    return ("s",) + tuple(f"{letter}{i}" for i in range(1, z + 1))


def original_presentation(z: int, variant: str = "printed") -> Presentation:
    """Presentation in s, a_1..a_z from the original cobweb construction.

    For z = 4q+1 the middle relation carries the constant index ``1-q``
    as printed; ``variant="shifted"`` replaces it by ``i+1-q`` and
    ``variant="realized"`` by ``a_{i-q}^-1``, the form satisfied by the
    geometric face pairings.  For z = 4p-1 all variants coincide.
    """
    _check_z(z)
    if variant not in ("printed", "shifted", "realized"):
        raise ValueError(variant)
    m = lambda k: (k - 1) % z + 1  # noqa: E731
    S, a = (0, 1), (0, -1)
    A = lambda k, e=1: (m(k), e)  # noqa: E731
    rels: list[Word] = []
    prod: list[Letter] = []
    if z % 4 == 3:
        p = (z + 1) // 4
        for i in range(1, z + 1):
            # a_{i+3p} = s a_{i+p} s^-1 a_{i+1} s a_{i+2p}^-1 s
            rels.append((A(i + 3 * p, -1), S, A(i + p), a, A(i + 1), S, A(i + 2 * p, -1), S))
            prod += [A(i), a, A(i + 1 - p)] * 2
        tag = f"original p={p}"
    else:
        q = (z - 1) // 4
        for i in range(1, z + 1):
            if variant == "realized":
                mid = A(i - q, -1)
            else:
                mid = A(1 - q if variant == "printed" else i + 1 - q)
            # a_{i+1+q} s a_k s = s a_i^-1 s^-1 a_{i-2q}
            rels.append((A(i + 1 + q), S, mid, S, A(i - 2 * q, -1), S, A(i), a))
            prod += [A(i), a, A(i + 1 + q)] * 2
        tag = f"original q={q} {variant}"
    rels.append(tuple(prod))
    return Presentation(_family_generators(z, "a"), tuple(rels), tag)


def simplified_presentation(z: int) -> Presentation:
    """Presentation in s, c_1..c_z from the simplified cobweb construction."""
    _check_z(z)
    m = lambda k: (k - 1) % z + 1  # noqa: E731
    C = lambda k, e=1: (m(k), e)  # noqa: E731
    si = (0, -1)
    rels: list[Word] = []
    prod: list[Letter] = []
    if z % 4 == 3:
        p = (z + 1) // 4
        for i in range(1, z + 1):
            rels.append((C(i + p, -1), C(i - 1 + 2 * p, -1), si, C(i), C(i - p), si))
            prod += [C(i), C(i - p), C(i - 1 + 2 * p), C(i + p)]
        tag = f"simplified p={p}"
    else:
        q = (z - 1) // 4
        for i in range(1, z + 1):
            rels.append((C(i - q, -1), C(i + 2 * q, -1), si, C(i), C(i + q), si))
            prod += [C(i), C(i + q), C(i + 2 * q), C(i - q)]
        tag = f"simplified q={q}"
    rels.append(tuple(prod))
    return Presentation(_family_generators(z, "c"), tuple(rels), tag)


# ---------------------------------------------------------------------------
# homology


def abelianize(P: Presentation) -> np.ndarray:
    n = len(P.generators)
    if not P.relators:
        return np.zeros((0, n), dtype=np.int64)
    return np.array([exponent_sums(r, n) for r in P.relators], dtype=np.int64)


def smith_normal_form(M) -> tuple[list[list[int]], list[list[int]], list[list[int]]]:
    """Smith normal form D = U M V over the integers.

    Works on Python ints, so entries never overflow.  The pivot is the
    nonzero entry of least absolute value in the remaining block.
    Returns D, U, V as lists of lists.
    """
    D = [[int(x) for x in row] for row in np.asarray(M, dtype=object).tolist()] if len(M) else []
    m = len(D)
    n = len(D[0]) if m else (np.asarray(M).shape[1] if np.asarray(M).ndim == 2 else 0)
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_rows(X, i, j):
        X[i], X[j] = X[j], X[i]

    def swap_cols(X, i, j):
        for row in X:
            row[i], row[j] = row[j], row[i]

    def add_row(X, src, dst, k):  # row dst += k row src
        X[dst] = [a + k * b for a, b in zip(X[dst], X[src])]

    def add_col(X, src, dst, k):
        for row in X:
            row[dst] += k * row[src]

    t = 0
    while t < min(m, n):
        nz = [(abs(D[i][j]), i, j) for i in range(t, m) for j in range(t, n) if D[i][j]]
        if not nz:
            break
        _, pi, pj = min(nz)
        swap_rows(D, t, pi); swap_rows(U, t, pi)
        swap_cols(D, t, pj); swap_cols(V, t, pj)
        while True:
            done = True
            for i in range(t + 1, m):
                if D[i][t]:
                    k = D[i][t] // D[t][t]
                    add_row(D, t, i, -k); add_row(U, t, i, -k)
                    if D[i][t]:
                        done = False
            for j in range(t + 1, n):
                if D[t][j]:
                    k = D[t][j] // D[t][t]
                    add_col(D, t, j, -k); add_col(V, t, j, -k)
                    if D[t][j]:
                        done = False
            if done:
                # divisibility: pivot must divide the remaining block
                bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n)
                            if D[i][j] % D[t][t]), None)
                if bad is None:
                    break
                add_row(D, bad[0], t, 1); add_row(U, bad[0], t, 1)
                continue
            nz = [(abs(D[i][j]), i, j) for i in range(t, m) for j in range(t, n)
                  if D[i][j] and (i == t or j == t)]
            _, pi, pj = min(nz)
            swap_rows(D, t, pi); swap_rows(U, t, pi)
            swap_cols(D, t, pj); swap_cols(V, t, pj)
        if D[t][t] < 0:
            D[t] = [-x for x in D[t]]
            U[t] = [-x for x in U[t]]
        t += 1
    return D, U, V


def invariant_factors(M) -> tuple[int, tuple[int, ...]]:
    """(rank, nonzero diagonal of the Smith form)."""
    M = np.asarray(M)
    if M.size == 0:
        return 0, ()
    D, _, _ = smith_normal_form(M)
    diag = [abs(D[i][i]) for i in range(min(len(D), len(D[0])))]
    nz = tuple(d for d in diag if d)
    return len(nz), nz


def h1(P: Presentation) -> HomologyResult:
    M = abelianize(P)
    rank, diag = invariant_factors(M)
    return HomologyResult(len(P.generators) - rank, tuple(d for d in diag if d > 1))


def h1_from_matrix(M, n_generators: int) -> HomologyResult:
    rank, diag = invariant_factors(M)
    return HomologyResult(n_generators - rank, tuple(d for d in diag if d > 1))


def same_row_lattice(M1, M2) -> bool:
    """Each row of one matrix is an integer combination of the other's rows."""
    M1, M2 = np.asarray(M1, dtype=np.int64), np.asarray(M2, dtype=np.int64)
    return _contains(M1, M2) and _contains(M2, M1)


def _contains(L, M) -> bool:
    # rows of M lie in the row lattice of L iff stacking does not change the Smith form
    r1, d1 = invariant_factors(L)
    r2, d2 = invariant_factors(np.vstack([L, M]))
    return r1 == r2 and d1 == d2


# ---------------------------------------------------------------------------
# matrices


def evaluate(w: Sequence[Letter], assignment: Mapping[int, np.ndarray]) -> np.ndarray:
    M = np.eye(4)
    inv: dict[int, np.ndarray] = {}
    for g, e in w:
        if g not in assignment:
            raise UnboundGenerator(f"generator {g} has no matrix")
        if e == 1:
            M = M @ assignment[g]
        else:
            if g not in inv:
                inv[g] = np.linalg.inv(assignment[g])
            M = M @ inv[g]
    return M


# ---------------------------------------------------------------------------
# text format


def to_text(P: Presentation) -> str:
    lines = ["# presentation " + P.tag if P.tag else "# presentation",
             "generators: " + " ".join(P.generators)]
    lines += ["relator: " + format_word(r, P.generators) for r in P.relators]
    return "\n".join(lines) + "\n"


def from_text(text: str) -> Presentation:
    gens: tuple[str, ...] | None = None
    rels: list[Word] = []
    tag = ""
    for raw in text.splitlines():
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            if line.startswith("# presentation"):
                tag = line[len("# presentation"):].strip()
            continue
        key, _, rest = line.partition(":")
        if key == "generators":
            gens = tuple(rest.split())
        elif key == "relator":
            if gens is None:
                raise ValueError("relator before generators line")
            rels.append(parse_word(rest, gens))
        else:
            raise ValueError(f"unrecognised line {raw!r}")
    if gens is None:
        raise ValueError("missing generators line")
    return Presentation(gens, tuple(rels), tag)
