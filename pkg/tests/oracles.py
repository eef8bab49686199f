"""Independent reference computations used by the tests.

None of these call into the package: they re-derive values by a different
route (quadrature, determinantal divisors, direct eigenvalues).
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from math import gcd

import mpmath
import numpy as np


def lobachevsky_quad(x: float) -> float:
    """-int_0^x log|2 sin t| dt by tanh-sinh quadrature split at the singularities."""
    if x == 0:
        return 0.0
    with mpmath.workdps(30):
        lo, hi = sorted((mpmath.mpf(0), mpmath.mpf(float(x))))
        cuts = [k * mpmath.pi for k in range(int(mpmath.floor(lo / mpmath.pi)) - 1,
                                              int(mpmath.ceil(hi / mpmath.pi)) + 2)
                if lo < k * mpmath.pi < hi]
        total = mpmath.quad(lambda t: mpmath.log(abs(2 * mpmath.sin(t))), [lo, *cuts, hi])
        return float(-total if x > 0 else total)


def orthoscheme_volume_quad(u: int, v: int, w: int) -> float:
    """The complete orthoscheme volume formula, assembled with quadrature Л."""
    L = lobachevsky_quad
    a, b, c = np.pi / u, np.pi / v, np.pi / w
    th = np.arctan(np.sqrt(np.cos(b) ** 2 - np.sin(a) ** 2 * np.sin(c) ** 2)
                   / (np.cos(a) * np.cos(c)))
    return 0.25 * (L(a + th) - L(a - th) + L(np.pi / 2 + b - th) + L(np.pi / 2 - b - th)
                   + L(c + th) - L(c - th) + 2 * L(np.pi / 2 - th))


def _det(M) -> int:
    """Exact determinant by fraction-free elimination."""
    A = [[Fraction(x) for x in row] for row in M]
    n = len(A)
    det = Fraction(1)
    for i in range(n):
        p = next((r for r in range(i, n) if A[r][i] != 0), None)
        if p is None:
            return 0
        if p != i:
            A[i], A[p] = A[p], A[i]
            det = -det
        det *= A[i][i]
        for r in range(i + 1, n):
            f = A[r][i] / A[i][i]
            A[r] = [x - f * y for x, y in zip(A[r], A[i])]
    return int(det)


def invariant_factors_minors(M) -> list[int]:
    """Invariant factors d_k = D_k / D_{k-1} from gcds of k x k minors."""
    M = [[int(x) for x in row] for row in M]
    m, n = len(M), len(M[0])
    D = [1]
    for k in range(1, min(m, n) + 1):
        g = 0
        for rows in itertools.combinations(range(m), k):
            for cols in itertools.combinations(range(n), k):
                g = gcd(g, _det([[M[i][j] for j in cols] for i in rows]))
        if g == 0:
            break
        D.append(g)
    return [D[k] // D[k - 1] for k in range(1, len(D))]


def signature_eig(M, tol: float = 1e-9) -> tuple[int, int, int]:
    ev = np.linalg.eigvals(np.asarray(M, dtype=float)).real
    return int((ev > tol).sum()), int((ev < -tol).sum()), int((abs(ev) <= tol).sum())


def count_letters(text: str) -> dict[str, int]:
    """Exponent sums of a word written as ``a^3 b^-1 ...`` by plain tallying."""
    out: dict[str, int] = {}
    for tok in text.split():
        name, _, k = tok.partition("^")
        out[name] = out.get(name, 0) + (int(k) if k else 1)
    return out
