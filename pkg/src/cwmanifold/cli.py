"""Command-line interface: construction, verification, homology, volumes, densities, export.

All numbers are written with 17 significant digits and in a fixed order,
so identical invocations give byte-identical files.  Figures are written
next to the CSV/JSON files whenever an output directory is given.
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path
from typing import Any

import numpy as np

from . import errors
from . import groups as gr
from . import metrics
from . import orthoscheme as ot
from . import projlin as pl

SCHEMA_VERSION = 1
DEFAULT_TOL = 1e-8

# exit statuses: 0 success, 1 failed verification, 2 usage, >= 10 library errors
EXIT_CODES = {cls.code: 10 + i for i, cls in enumerate([
    errors.InvalidParameter, errors.UnsupportedParameter, errors.SingularForm,
    errors.NotProperPoint, errors.NotRealPlane, errors.DegeneratePolarity,
    errors.DegenerateAxis, errors.Singular, errors.ChartOverflow, errors.NotHyperbolic,
    errors.NotCompleteOrthoscheme, errors.NoHalfturnSymmetry, errors.StabilizerOverflow,
    errors.GluingFailure, errors.PairingConstructionFailure, errors.NonclosingCycle,
    errors.UnboundGenerator, errors.InvalidRadius, errors.KernelNotInterior])}


# ---------------------------------------------------------------------------
# deterministic serialization


def fmt(x: float) -> str:
    return "%.17g" % float(x)


def to_json(obj: Any, indent: int = 0) -> str:
    """JSON text with floats at 17 significant digits; NaN/inf become null."""
    pad, pad1 = " " * indent, " " * (indent + 1)
    if isinstance(obj, np.ndarray):
        obj = obj.tolist()
    if isinstance(obj, (np.integer,)):
        obj = int(obj)
    if isinstance(obj, (np.floating,)):
        obj = float(obj)
    if obj is None or isinstance(obj, bool):
        return {None: "null", True: "true", False: "false"}[obj]
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return fmt(obj) if math.isfinite(obj) else "null"
    if isinstance(obj, str):
        import json
        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad1}{to_json(str(k))}: {to_json(v, indent + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(not isinstance(v, (dict, list, tuple, np.ndarray)) for v in obj):
            return "[" + ", ".join(to_json(v) for v in obj) + "]"
        return "[\n" + ",\n".join(pad1 + to_json(v, indent + 1) for v in obj) + "\n" + pad + "]"
    raise TypeError(f"cannot serialize {type(obj)}")


def to_csv(header: list[str], rows: list[list]) -> str:
    def cell(v):
        if isinstance(v, (float, np.floating)):
            return fmt(v)
        return str(v)
    lines = [",".join(header)] + [",".join(cell(v) for v in r) for r in rows]
    return "\n".join(lines) + "\n"


def to_off(poly) -> str:
    L = pl.klein_frame(poly.A)
    pts = [pl.klein_coords(X, poly.A, L) for X in poly.vertex_vectors()]
    lines = ["OFF", f"{len(pts)} {len(poly.faces)} 0"]
    lines += [" ".join(fmt(c) for c in p) for p in pts]
    lines += [" ".join(str(i) for i in [len(F.cycle), *F.cycle]) for F in poly.faces]
    return "\n".join(lines) + "\n"


def envelope(kind: str, tol: float, payload: dict) -> dict:
    return {"schema_version": SCHEMA_VERSION, "kind": kind, "tol": tol, **payload}


class Sink:
    """Writes named outputs to a directory, or text outputs to stdout."""

    def __init__(self, out: Path | None, plot: bool = True):
        self.out = out
        self.plot = plot and out is not None
        if out is not None:
            out.mkdir(parents=True, exist_ok=True)

    def write(self, name: str, text: str) -> None:
        if self.out is None:
            sys.stdout.write(text)
        else:
            (self.out / name).write_text(text)

    def figure(self, name: str, draw) -> None:
        if not self.plot:
            return
        import matplotlib
        matplotlib.use("Agg")
        import matplotlib.pyplot as plt
        fig = draw(plt)
        fig.savefig(self.out / name, dpi=120, metadata={"Software": None})
        plt.close(fig)


# ---------------------------------------------------------------------------
# payload builders


def ortho_payload(u: int, v: int, w: int) -> dict:
    O = ot.build(u, v, w)
    data = {
        "params": [u, v, w],
        "B": O.B, "A": O.A,
        "signature": list(pl.signature(O.B)),
        "vertex_kinds": [k.value for k in O.kinds],
        "truncations": {f"a{i}": a for i, a in sorted(O.truncations.items())},
        "Q": O.Q, "Q_prime": O.Q_prime, "F03": O.F03, "F12": O.F12,
        "halfturn": O.h,
        "volume": ot.volume(u, v, w),
    }
    if u == w:
        data["half_domain_volume"] = ot.half_domain_volume(O)
    return data


def verify_payload(z: int, scheme: str, tol: float, link_tol: float | None = None):
    from . import cobweb as cw
    r = cw.verify(z, scheme, tol, link_tol)
    return r, {
        "z": z, "scheme": scheme,
        "passed": r.passed,
        "checks": r.checks,
        "counts": {"V": r.counts[0], "E": r.counts[1], "F": r.counts[2]},
        "expected_counts": cw.expected_counts(z, scheme),
        "euler_characteristic": r.euler,
        "edge_class_sizes": r.edge_class_sizes,
        "vertex_class_sizes": r.vertex_class_sizes,
        "angle_sum_residuals": r.angle.residuals,
        "max_angle_residual": r.angle.max_residual,
        "cycle_matrix_residual": r.cycle_residual,
        "vertex_link_sums": r.link.class_sums,
        "max_link_residual": r.link.max_residual,
        "relator_residuals": r.relator_residuals,
        "base_translation": r.screw[0],
        "base_rotation": r.screw[1],
    }


def presentation_for(target: str, z: int | None, scheme: str, variant: str) -> gr.Presentation:
    if target == "football":
        return gr.football_presentation()
    if z is None:
        raise errors.InvalidParameter("target cw needs --z")
    if scheme == "simplified":
        return gr.simplified_presentation(z)
    if z == 3 and variant == "cw6":
        return gr.cw6_presentation()
    return gr.original_presentation(z, variant="realized" if variant == "cw6" else variant)


def volume_rows(zs) -> list[list]:
    rows = []
    for z in zs:
        vo = ot.volume(2 * z, 2 * z, 2 * z)
        rows.append([z, vo, 4 * z * vo])
    return rows


def density_rows(zs) -> list[list]:
    f = metrics.football_report()
    rows = [["football", f.cell_volume, f.inradius, f.circumradius, f.packing_density,
             f.covering_density]]
    for z in zs:
        d = metrics.cobweb_report(z)
        rows.append([f"cw{2 * z}", d.cell_volume, d.inradius, d.circumradius,
                     d.packing_density, d.covering_density])
    return rows


def export_payload(z: int, scheme: str, tol: float) -> tuple[Any, dict, str]:
    from . import cobweb as cw
    poly = cw.build_cobweb(z)
    fp = cw.face_pairing(poly, scheme, tol)
    L = pl.klein_frame(poly.A)
    P = fp.presentation
    words = cw.pairing_data()["cobweb"][str(z)]["schemes"][scheme]["generators"]
    data = {
        "z": z, "scheme": scheme,
        "frame": poly.frame,
        "vertices": [X for X in poly.vertex_vectors()],
        "klein_vertices": [pl.klein_coords(X, poly.A, L) for X in poly.vertex_vectors()],
        "faces": [{"plane": F.plane, "cycle": F.cycle, "partner": F.partner,
                   "pairing": fp.pairing_names[F.pairing] if F.sign == 1
                   else fp.pairing_names[F.pairing] + "^-1"} for F in poly.faces],
        "generators": {k: pl.normalize_isometry(M, poly.A) for k, M in fp.generators.items()},
        "generators_vertex_basis": {
            k: pl.normalize_isometry(poly.to_vertex_basis(M), poly.orthoscheme.A)
            for k, M in fp.generators.items()},
        "generator_words": words,
        "pairing_words": poly.pairing_words,
        "presentation": gr.to_text(P),
    }
    return poly, data, gr.to_text(P)


# ---------------------------------------------------------------------------
# figures


def _draw_angles(payload: dict):
    def draw(plt):
        fig, ax = plt.subplots(figsize=(6, 3))
        res = np.maximum(np.asarray(payload["angle_sum_residuals"]), 1e-17)
        ax.bar(range(1, len(res) + 1), res, color="0.3")
        ax.axhline(payload["tol"], color="C3", lw=1, label="tolerance")
        ax.set_yscale("log")
        ax.set_xlabel("edge class")
        ax.set_ylabel("|angle sum - 2π|")
        ax.set_title(f"Cw({2 * payload['z']}), {payload['scheme']} pairing")
        ax.legend(frameon=False)
        fig.tight_layout()
        return fig
    return draw


def _draw_volume(rows):
    def draw(plt):
        fig, ax = plt.subplots(figsize=(5, 3.5))
        z = [r[0] for r in rows]
        ax.plot(z, [r[2] for r in rows], "o-", color="k", label="Vol Cw(2z)")
        ax.plot(z, [r[1] for r in rows], "s--", color="0.5", label="Vol O(2z,2z,2z)")
        ax.set_xlabel("z")
        ax.set_ylabel("volume")
        ax.legend(frameon=False)
        fig.tight_layout()
        return fig
    return draw


def _draw_density(rows):
    def draw(plt):
        fig, ax = plt.subplots(figsize=(5, 3.5))
        foot, cws = rows[0], rows[1:]
        x = [int(r[0][2:]) // 2 for r in cws]
        ax.plot(x, [r[4] for r in cws], "o-", color="C0", label="packing")
        ax.plot(x, [r[5] for r in cws], "s-", color="C3", label="covering")
        ax.axhline(foot[4], color="C0", ls=":", lw=1, label="football packing")
        ax.axhline(foot[5], color="C3", ls=":", lw=1, label="football covering")
        ax.set_yscale("log")
        ax.set_xlabel("z")
        ax.set_ylabel("density")
        ax.legend(frameon=False, fontsize=8)
        fig.tight_layout()
        return fig
    return draw


def _draw_polyhedron(poly):
    def draw(plt):
        L = pl.klein_frame(poly.A)
        P = np.array([pl.klein_coords(X, poly.A, L) for X in poly.vertex_vectors()])
        fig = plt.figure(figsize=(5, 5))
        ax = fig.add_subplot(projection="3d")
        for e in poly.edges:
            a, b = e.ends
            ax.plot(*np.array([P[a], P[b]]).T, color="k", lw=0.8)
        ax.scatter(*P.T, s=8, color="C3")
        ax.set_title(f"Cw({2 * poly.z}) in the Klein model")
        ax.set_box_aspect((1, 1, 1))
        fig.tight_layout()
        return fig
    return draw


# ---------------------------------------------------------------------------
# commands


def cmd_ortho(args, sink: Sink) -> int:
    data = envelope("orthoscheme", args.tol, ortho_payload(args.u, args.v, args.w))
    sink.write(f"ortho_{args.u}_{args.v}_{args.w}.json", to_json(data) + "\n")
    return 0


def cmd_verify(args, sink: Sink) -> int:
    r, payload = verify_payload(args.z, args.scheme, args.tol, args.link_tol)
    data = envelope("verify", args.tol, payload)
    stem = f"verify_z{args.z}_{args.scheme}"
    sink.write(stem + ".json", to_json(data) + "\n")
    sink.figure(stem + ".png", _draw_angles(data))
    if not r.passed:
        failed = [k for k, v in r.checks.items() if not v]
        print(f"verification failed: {', '.join(failed)}", file=sys.stderr)
    return 0 if r.passed else 1


def cmd_homology(args, sink: Sink) -> int:
    P = presentation_for(args.target, args.z, args.scheme, args.variant)
    H = gr.h1(P)
    name = "football" if args.target == "football" else f"cw{2 * args.z}_{args.scheme}"
    if args.presentation:
        Path(args.presentation).write_text(gr.to_text(P))
    if args.format == "text":
        sink.write(f"homology_{name}.txt", f"{name}: {H}\n")
    elif args.format == "csv":
        sink.write(f"homology_{name}.csv", to_csv(
            ["target", "free_rank", "invariant_factors", "order"],
            [[name, H.free_rank, " ".join(map(str, H.invariant_factors)), H.order]]))
    else:
        data = envelope("homology", args.tol, {
            "target": name, "tag": P.tag, "generators": list(P.generators),
            "abelianized": gr.abelianize(P), "free_rank": H.free_rank,
            "invariant_factors": list(H.invariant_factors), "order": H.order,
            "group": str(H)})
        sink.write(f"homology_{name}.json", to_json(data) + "\n")
    return 0


def _zs(args) -> list[int]:
    for z in args.z:
        if z < 3 or z % 2 == 0:
            raise errors.UnsupportedParameter(f"z={z}: only odd z >= 3 are constructed")
    return sorted(set(args.z))


def cmd_volume(args, sink: Sink) -> int:
    rows = volume_rows(_zs(args))
    sink.write("volume.csv", to_csv(["z", "vol_orthoscheme", "vol_cobweb"], rows))
    sink.figure("volume.png", _draw_volume(rows))
    return 0


def cmd_density(args, sink: Sink) -> int:
    rows = density_rows(_zs(args))
    sink.write("density.csv", to_csv(
        ["cell", "cell_volume", "inradius", "circumradius", "packing_density",
         "covering_density"], rows))
    sink.figure("density.png", _draw_density(rows))
    return 0


def cmd_export(args, sink: Sink) -> int:
    poly, data, text = export_payload(args.z, args.scheme, args.tol)
    stem = f"cw{2 * args.z}_{args.scheme}"
    if args.format == "off":
        sink.write(stem + ".off", to_off(poly))
    elif args.format == "txt":
        sink.write(stem + ".txt", text)
    else:
        sink.write(stem + ".json", to_json(envelope("cobweb", args.tol, data)) + "\n")
    sink.figure(stem + ".png", _draw_polyhedron(poly))
    return 0


def cmd_report(args, sink: Sink) -> int:
    if sink.out is None:
        raise errors.InvalidParameter("report needs --out DIR")
    from . import cobweb as cw
    zs = _zs(args)
    status = 0
    ns = argparse.Namespace
    cmd_ortho(ns(u=5, v=3, w=5, tol=args.tol), sink)
    cmd_homology(ns(target="football", z=None, scheme="simplified", variant="cw6",
                    presentation=str(sink.out / "football.txt"), format="json",
                    tol=args.tol), sink)
    cmd_volume(ns(z=zs), sink)
    cmd_density(ns(z=zs), sink)
    summary = []
    for z in zs:
        for scheme in cw.SCHEMES:
            try:
                cw.scheme_generators(z, scheme)
            except errors.UnsupportedParameter:
                continue
            cmd_ortho(ns(u=2 * z, v=2 * z, w=2 * z, tol=args.tol), sink)
            rc = cmd_verify(ns(z=z, scheme=scheme, tol=args.tol, link_tol=None), sink)
            status = max(status, rc)
            variant = "cw6" if z == 3 else "realized"
            cmd_homology(ns(target="cw", z=z, scheme=scheme, variant=variant,
                            presentation=str(sink.out / f"cw{2 * z}_{scheme}.txt"),
                            format="json", tol=args.tol), sink)
            for f in ("off", "json"):
                cmd_export(ns(z=z, scheme=scheme, format=f, tol=args.tol), sink)
            summary.append([z, scheme, "pass" if rc == 0 else "fail"])
    sink.write("summary.csv", to_csv(["z", "scheme", "verify"], summary))
    return status


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="cwmanifold", description=__doc__.split("\n")[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=DEFAULT_TOL,
                        help="numerical tolerance (default %(default)g)")
    common.add_argument("--out", type=Path, default=None,
                        help="output directory (default: print to stdout)")
    common.add_argument("--no-plot", action="store_true", help="skip figures")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ortho", parents=[common], help="complete orthoscheme data")
    for k in ("u", "v", "w"):
        p.add_argument(f"--{k}", type=int, required=True)
    p.set_defaults(func=cmd_ortho)

    p = sub.add_parser("verify", parents=[common], help="verify a cobweb manifold")
    p.add_argument("--z", type=int, required=True)
    p.add_argument("--scheme", choices=("simplified", "original"), default="simplified")
    p.add_argument("--link-tol", type=float, default=None,
                   help="tolerance of the vertex solid angle sums (default max(tol, 1e-7))")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("homology", parents=[common], help="first homology group")
    p.add_argument("target", choices=("football", "cw"))
    p.add_argument("--z", type=int)
    p.add_argument("--scheme", choices=("simplified", "original"), default="original")
    p.add_argument("--variant", choices=("cw6", "printed", "shifted", "realized"), default="cw6",
                   help="original presentation variant; cw6 uses the three-generator "
                        "presentation for z=3 and the realized family otherwise")
    p.add_argument("--format", choices=("text", "json", "csv"), default="text")
    p.add_argument("--presentation", help="also write the presentation text to this file")
    p.set_defaults(func=cmd_homology)

    for name, fn, hlp in (("volume", cmd_volume, "volume table"),
                          ("density", cmd_density, "packing/covering density table")):
        p = sub.add_parser(name, parents=[common], help=hlp)
        p.add_argument("--z", type=int, nargs="+",
                       default=[3, 5, 7, 9] if name == "volume" else [3, 5, 7])
        p.set_defaults(func=fn)

    p = sub.add_parser("export", parents=[common], help="export a cobweb polyhedron")
    p.add_argument("--z", type=int, required=True)
    p.add_argument("--scheme", choices=("simplified", "original"), default="simplified")
    p.add_argument("--format", choices=("off", "json", "txt"), default="off")
    p.set_defaults(func=cmd_export)

    p = sub.add_parser("report", parents=[common], help="write every table, report and figure")
    p.add_argument("--z", type=int, nargs="+", default=[3, 5, 7])
    p.set_defaults(func=cmd_report)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.tol <= 0:
        print("error: invalid-parameter: --tol must be positive", file=sys.stderr)
        return EXIT_CODES["invalid-parameter"]
    sink = Sink(args.out, plot=not args.no_plot)
    try:
        return args.func(args, sink)
    except errors.CobwebError as e:
        print(f"error: {e.code}: {e}", file=sys.stderr)
        return EXIT_CODES.get(e.code, 3)


if __name__ == "__main__":
    sys.exit(main())
