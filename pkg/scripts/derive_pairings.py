"""Derive the stored face-pairing words for the cobweb manifolds.

The manifold group is searched as a transitive right action on the 8z
cosets of the extended reflection group modulo the manifold group.
Cosets are labelled by the elements of the stabilizer of Q (generated by
the reflections in b1, b2, a3), which acts simply transitively on them.
Given the action of r1, r2, ra3 (right multiplication) the search
enumerates the actions of h and r0 compatible with the Coxeter
relations and with a free action of the manifold group.

For each candidate action the 8z copies of W around the kernel point are
glued, each boundary piece is matched through the coset action, and the
resulting domain pairings are tested against the presentation families:

* simplified scheme: s is the base pairing and c_1..c_z are pairings with
  c_i c_{i-p} s^-1 (resp. c_i c_{i+q} s^-1) a middle half-screw pairing
  and all relators equal to +-identity;
* original scheme: a_1..a_z with a_i s^-1 a_{i+1-p} (resp. a_{i+1+q})
  a middle half-screw pairing and all relators equal to +-identity.

Usage: python scripts/derive_pairings.py 3 5 7 [--out PATH]
"""

from __future__ import annotations

import argparse
import itertools
import json
import sys
import time
from pathlib import Path

import numpy as np

from cwmanifold import cobweb as cw
from cwmanifold import groups as gr
from cwmanifold import projlin as pl
from cwmanifold.errors import CobwebError
from cwmanifold.orthoscheme import cobweb_orthoscheme


def compose(p, q):
    """First p then q."""
    return [q[p[x]] for x in range(len(p))]


def gen_group(perms, n):
    e = tuple(range(n))
    seen = {e}
    frontier = [e]
    while frontier:
        nxt = []
        for g in frontier:
            for p in perms:
                y = tuple(p[g[x]] for x in range(n))
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return seen


def acts_freely(perms, n, order):
    G = gen_group(perms, n)
    if len(G) != order:
        return False
    e = tuple(range(n))
    return all(g == e or all(g[x] != x for x in range(n)) for g in G)


def coset_actions(z):
    """Candidate (pi_h, pi_r0) right actions on the 8z cosets."""
    O = cobweb_orthoscheme(z)
    gens = cw.extended_generators(O)
    stab = [M for M, _ in cw.group_closure(gens, ("r1", "r2", "ra3"), 8 * z)]
    N = len(stab)
    idx = {cw.matrix_key(M): i for i, M in enumerate(stab)}
    perm = lambda g: [idx[cw.matrix_key(M @ g)] for M in stab]  # noqa: E731
    R1, R2, Ra = perm(gens["r1"]), perm(gens["r2"]), perm(gens["ra3"])
    det = [np.sign(np.linalg.det(M)) for M in stab]

    hs = []
    for x0 in range(N):
        ph = [None] * N
        ph[0] = x0
        ok = True
        stack = [0]

        def setv(x, y):
            if ph[x] is None:
                ph[x] = y
                stack.append(x)
                return True
            return ph[x] == y

        while stack and ok:
            x = stack.pop()
            y = ph[x]
            ok &= setv(R2[x], R1[y])
            ok &= setv(R1[x], R2[y])
            ok &= setv(y, x)
        if not ok or None in ph:
            continue
        if any(det[ph[x]] != det[x] for x in range(N)):
            continue
        if not acts_freely([R1, R2, ph], N, 8 * z):
            continue
        hs.append(ph)

    K = lambda x: [x, R2[x], Ra[x], Ra[R2[x]]]  # noqa: E731
    reps, seen = [], set()
    for x in range(N):
        if x not in seen:
            seen.update(K(x))
            reps.append(x)
    cosid = {y: i for i, x in enumerate(reps) for y in K(x)}

    def cycles_ok(p0):
        for x in range(N):
            cur, L = x, 0
            while True:
                cur = p0[R1[cur]]
                if cur is None:
                    break
                L += 1
                if cur == x:
                    if L != 2 * z:
                        return False
                    break
                if L > 2 * z:
                    return False
        return True

    out = []
    for ph in hs:
        def r3_ok(p0):
            for x in range(N):
                y = p0[x]
                if y is None:
                    continue
                b = p0[ph[y]]
                if b is None:
                    continue
                r3x = ph[b]
                if r3x == x:
                    return False
                y2 = p0[r3x]
                if y2 is None:
                    continue
                b2 = p0[ph[y2]]
                if b2 is None:
                    continue
                if ph[b2] != x:
                    return False
            return True

        def rec(p0):
            free = [i for i, x in enumerate(reps) if p0[x] is None]
            if not free:
                yield list(p0)
                return
            i = free[0]
            x = reps[i]
            for y in range(N):
                if p0[y] is not None or cosid[y] == i or det[y] == det[x]:
                    continue
                p1 = list(p0)
                for a, b in zip(K(x), K(y)):
                    p1[a] = b
                    p1[b] = a
                if not cycles_ok(p1) or not r3_ok(p1):
                    continue
                yield from rec(p1)

        for p0 in rec([None] * N):
            r3 = compose(compose(ph, p0), ph)
            if not acts_freely([p0, R1, Ra], N, 8 * z):
                continue
            if not acts_freely([p0, R1, r3], N, 8 * z):
                continue
            if not acts_freely([p0, r3, ph], N, 8):
                continue
            out.append((ph, p0))
    return out, (R1, R2, Ra)


def reduce_letters(w):
    out = []
    for x in w:
        if out and out[-1] == x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def glue_with_action(z, ph, p0, R):
    R1, R2, Ra = R
    O = cobweb_orthoscheme(z)
    T = cw.kernel_frame(O)
    gens = cw.extended_generators(O, T)
    tiles = cw.stabilizer_of_kernel(z, T)
    act = {"r0": p0, "r1": R1, "r2": R2, "ra3": Ra, "h": ph,
           "r3": compose(compose(ph, p0), ph), "ra0": compose(compose(ph, Ra), ph)}
    cos = []
    for _, w in tiles:
        c = 0
        for x in w:
            c = act[x][c]
        cos.append(c)
    if len(set(cos)) != 8 * z:
        return None
    by_cos = {c: i for i, c in enumerate(cos)}
    pairings, words, keys = [], [], {}

    def match(ti, face):
        letter = cw.FACE_LETTER[face]
        tj = by_cos[act[letter][cos[ti]]]
        g = tiles[ti][0] @ gens[letter] @ np.linalg.inv(tiles[tj][0])
        k = cw.matrix_key(g)
        if k in keys:
            return tj, keys[k][0], keys[k][1]
        w = reduce_letters(tiles[ti][1] + (letter,) + tuple(reversed(tiles[tj][1])))
        n = len(pairings)
        pairings.append(g)
        words.append(" ".join(w))
        keys[k] = (n, 1)
        keys[cw.matrix_key(np.linalg.inv(g))] = (n, -1)
        return tj, n, 1

    poly = cw.build_cobweb(z, matcher=match, pairings=pairings, pairing_words=words)
    return poly


def face_kind(poly, f):
    return {poly.pieces[i].face for i in poly.faces[f].pieces}


def chain_search(z, cands, half, s, rels, step, link, first_only=True):
    m = lambda k: (k - 1) % z + 1  # noqa: E731
    order = [1]
    while len(order) < z:
        order.append(m(order[-1] + step))
    found = []

    def bt(a):
        if found and first_only:
            return
        if len(a) == z:
            full = {0: s, **a}
            if all(pl.is_plus_minus_identity(gr.evaluate(r, full), 1e-7) for r in rels):
                found.append(dict(a))
            return
        i = order[len(a)]
        for x in cands:
            if a:
                if cw.matrix_key(link(a[order[len(a) - 1]], x)) not in half:
                    continue
            if len(a) == z - 1 and cw.matrix_key(link(x, a[order[0]])) not in half:
                continue
            a[i] = x
            bt(a)
            del a[i]

    bt({})
    return found


def word_of(poly, M):
    for k, P in enumerate(poly.pairings):
        if cw.matrix_key(P) == cw.matrix_key(M):
            return poly.pairing_words[k]
        if cw.matrix_key(np.linalg.inv(P)) == cw.matrix_key(M):
            return " ".join(reversed(poly.pairing_words[k].split()))
    raise KeyError("matrix is not a domain pairing")


def derive(z, start=0, log=print):
    t0 = time.time()
    actions, R = coset_actions(z)
    log(f"z={z}: {len(actions)} coset actions ({time.time() - t0:.1f}s)")
    for ci, (ph, p0) in enumerate(actions):
        if ci < start:
            continue
        try:
            poly = glue_with_action(z, ph, p0, R)
        except (CobwebError, KeyError, IndexError):
            continue
        if poly is None:
            continue
        cands = []
        for P in poly.pairings:
            cands += [P, np.linalg.inv(P)]
        half = set()
        base = None
        for f in range(len(poly.faces)):
            kind = face_kind(poly, f)
            M = poly.pairings[poly.faces[f].pairing]
            if kind == {"b2"}:
                half.add(cw.matrix_key(M))
                half.add(cw.matrix_key(np.linalg.inv(M)))
            if kind == {"b3"} and base is None:
                base = M
        if base is None:
            continue
        P = gr.simplified_presentation(z)
        if z % 4 == 3:
            p = (z + 1) // 4
            step_c, step_a = -p, 1 - p
        else:
            q = (z - 1) // 4
            step_c, step_a = q, 1 + q
        simp = None
        for s in (base, np.linalg.inv(base)):
            si = np.linalg.inv(s)
            res = chain_search(z, cands, half, s, P.relators, step_c, lambda x, y: x @ y @ si)
            if res:
                simp = (s, res[0])
                break
        if simp is None:
            continue
        log(f"  action {ci}: simplified generators found ({time.time() - t0:.1f}s)")
        entry = {"face_pairings": poly.pairing_words, "schemes": {}}
        s, a = simp
        entry["schemes"]["simplified"] = {
            "generators": {"s": word_of(poly, s),
                           **{f"c{i}": word_of(poly, a[i]) for i in range(1, z + 1)}}}
        # original scheme
        if z == 3:
            Pc = gr.cw6_presentation()
            for s in (base, np.linalg.inv(base)):
                hit = None
                for x, y in itertools.product(cands, repeat=2):
                    full = {0: s, 1: x, 2: y}
                    if all(pl.is_plus_minus_identity(gr.evaluate(r, full), 1e-7)
                           for r in Pc.relators):
                        hit = (x, y)
                        break
                if hit:
                    entry["schemes"]["original"] = {"generators": {
                        "s": word_of(poly, s), "a1": word_of(poly, hit[0]),
                        "a2": word_of(poly, hit[1])}}
                    break
        else:
            Po = gr.original_presentation(z, variant="realized")
            for s in (base, np.linalg.inv(base)):
                si = np.linalg.inv(s)
                res = chain_search(z, cands, half, s, Po.relators, step_a,
                                   lambda x, y: x @ si @ y)
                if res:
                    entry["schemes"]["original"] = {"generators": {
                        "s": word_of(poly, s),
                        **{f"a{i}": word_of(poly, res[0][i]) for i in range(1, z + 1)}}}
                    break
        log(f"  schemes: {sorted(entry['schemes'])} ({time.time() - t0:.1f}s)")
        return entry
    raise RuntimeError(f"no coset action for z={z} realizes the simplified presentation")


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    ap.add_argument("z", type=int, nargs="+")
    ap.add_argument("--out", type=Path,
                    default=Path(__file__).resolve().parents[1] / "src/cwmanifold/data/pairings.json")
    ap.add_argument("--start", type=int, default=0, help="first coset action to try")
    args = ap.parse_args(argv)
    data = {"schema_version": 1, "letters": list(cw.LETTERS), "cobweb": {}}
    if args.out.exists():
        data = json.loads(args.out.read_text())
    for z in args.z:
        data["cobweb"][str(z)] = derive(z, args.start, log=lambda m: print(m, file=sys.stderr))
    data["cobweb"] = dict(sorted(data["cobweb"].items(), key=lambda kv: int(kv[0])))
    args.out.write_text(json.dumps(data, indent=1) + "\n")


if __name__ == "__main__":
    main()
