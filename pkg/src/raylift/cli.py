"""Batch command-line front end.

Subcommands: gen (write a frame file), check (phase-retrievability verdict
with stability constants), reconstruct (invert measurement files), probe
(empirical Lipschitz bounds and counterexample certification). Every command
is deterministic given its flags, including --seed; reports carry full
provenance and contain no timestamps, so reruns are byte identical.

Exit codes: 0 success/affirmative, 1 negative verdict, 2 usage, 3 I/O,
4 indeterminate, 5 bound violation.
"""

from __future__ import annotations

import argparse
import hashlib
import math
import sys

import numpy as np

from . import __version__
from .core import Field, Vector, symop
from .frames import (
    Frame,
    FrameFileError,
    Measurement,
    build_lifted_map,
    dumps_json,
    frame_to_dict,
    gen_frame,
    measure,
    read_frame,
    read_measurements,
    write_frame,
)
from .metrics import lift_dist
from .probes import (
    estimate_lower_lip,
    estimate_upper_lip,
    pr_verdict,
    probe_bilipschitz,
    verify_property_k,
)
from .recover import recover, recovery_lip_bound
from .retraction import retraction_probe, retraction_ratio

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_USAGE = 2
EXIT_IO = 3
EXIT_INDETERMINATE = 4
EXIT_VIOLATION = 5


def _parse_order(text: str) -> float:
    if text in ("inf", "Inf", "INF"):
        return math.inf
    try:
        val = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number or 'inf', got {text!r}")
    return val


def _parse_dims(text: str):
    try:
        dims = tuple(int(t) for t in text.split(",") if t)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")
    if not dims or any(d < 2 for d in dims):
        raise argparse.ArgumentTypeError("dims must be integers >= 2")
    return dims


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="raylift",
        description="Stable inversion of intensity measurements: frames, verdicts, "
        "reconstruction and Lipschitz probes.",
    )
    parser.add_argument("--version", action="version", version=f"raylift {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate a frame and write it as JSON")
    g.add_argument("--dim", type=int)
    g.add_argument("--count", type=int)
    g.add_argument("--field", choices=["real", "complex"], default="real")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--kind", choices=["gaussian", "named"], default="gaussian")
    g.add_argument("--name")
    g.add_argument("--out", required=True)

    c = sub.add_parser("check", help="phase-retrievability verdict for a frame file")
    c.add_argument("--frame", required=True)
    c.add_argument("--starts", type=int, default=64)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--report", required=True)

    r = sub.add_parser("reconstruct", help="invert measurement rows against a frame")
    r.add_argument("--frame", required=True)
    r.add_argument("--measurements", required=True)
    r.add_argument("--polish", choices=["on", "off"], default="off")
    r.add_argument("--group-tol", type=float, default=None)
    r.add_argument("--out", required=True)

    p = sub.add_parser("probe", help="empirical Lipschitz probes and certifications")
    p.add_argument("--what", choices=["pi", "omega", "bilipschitz", "property-k"], required=True)
    p.add_argument("--p", type=_parse_order, default=math.inf)
    p.add_argument("--q", type=_parse_order, default=1.0)
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--dims", type=_parse_dims, default=(2, 3, 4))
    p.add_argument("--report", required=True)
    return parser


def _provenance(command: str, args: argparse.Namespace) -> dict:
    flags = {k: v for k, v in sorted(vars(args).items()) if k != "command"}
    for k, v in flags.items():
        if isinstance(v, float) and math.isinf(v):
            flags[k] = "inf"
        if isinstance(v, tuple):
            flags[k] = list(v)
    return {"tool": "raylift", "version": __version__, "command": command, "flags": flags}


def _frame_hash(F: Frame) -> str:
    return hashlib.sha256(dumps_json(frame_to_dict(F)).encode("utf-8")).hexdigest()


def _write_text(path, text) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def _write_csv(path, header, rows) -> None:
    lines = [",".join(header)]
    for row in rows:
        cells = []
        for x in row:
            cells.append(format(x, ".17g") if isinstance(x, float) else str(x))
        lines.append(",".join(cells))
    _write_text(path, "\n".join(lines) + "\n")


def cmd_gen(args) -> int:
    if args.kind == "named":
        if not args.name:
            print("gen: --kind named requires --name", file=sys.stderr)
            return EXIT_USAGE
        try:
            F = gen_frame("named", args.dim, args.count, Field(args.field), name=args.name)
        except ValueError as e:
            print(f"gen: {e}", file=sys.stderr)
            return EXIT_USAGE
    else:
        if args.dim is None or args.count is None:
            print("gen: --kind gaussian requires --dim and --count", file=sys.stderr)
            return EXIT_USAGE
        try:
            F = gen_frame("random_gaussian", args.dim, args.count, Field(args.field), seed=args.seed)
        except ValueError as e:
            print(f"gen: {e}", file=sys.stderr)
            return EXIT_USAGE
    try:
        write_frame(args.out, F)
    except OSError as e:
        print(f"gen: cannot write {args.out}: {e}", file=sys.stderr)
        return EXIT_IO
    sv = ", ".join(format(s, ".6g") for s in F.singular_values())
    print(f"{F.label}: wrote {F.count} vectors of dim {F.dim} ({F.field.value}) to {args.out}")
    print(f"spanning singular values: [{sv}]")
    return EXIT_OK


def cmd_check(args) -> int:
    try:
        F = read_frame(args.frame)
    except (FrameFileError, OSError) as e:
        print(f"check: {e}", file=sys.stderr)
        return EXIT_IO
    est = estimate_lower_lip(F, starts=args.starts, seed=args.seed)
    b0_samples = 2000
    b0 = estimate_upper_lip(F, samples=b0_samples, seed=args.seed)
    verdict = pr_verdict(F, estimate=est)
    u = est.argmin_u.entries
    v = est.argmin_v.entries

    def _vec_json(z):
        if F.field is Field.COMPLEX:
            return [[float(e.real), float(e.imag)] for e in z]
        return [float(e) for e in z]

    report = {
        "frame_label": F.label,
        "frame_hash": _frame_hash(F),
        "a0": est.value,
        "b0": b0,
        "verdict": verdict,
        "witnesses": {
            "u": _vec_json(u),
            "v": _vec_json(v),
            "method": est.method,
            "grid_resolution": est.grid_resolution,
        },
        "sample_counts": {"starts": est.starts, "b0_samples": b0_samples},
        "seeds": {"seed": args.seed},
        "provenance": _provenance("check", args),
    }
    try:
        _write_text(args.report, dumps_json(report))
    except OSError as e:
        print(f"check: cannot write {args.report}: {e}", file=sys.stderr)
        return EXIT_IO
    print(f"{F.label or args.frame}: verdict={verdict} a0={est.value:.6g} b0={b0:.6g}")
    if verdict == "retrievable":
        return EXIT_OK
    if verdict == "not_retrievable":
        return EXIT_NEGATIVE
    return EXIT_INDETERMINATE


def cmd_reconstruct(args) -> int:
    try:
        F = read_frame(args.frame)
        rows = read_measurements(args.measurements)
    except (FrameFileError, OSError) as e:
        print(f"reconstruct: {e}", file=sys.stderr)
        return EXIT_IO
    if rows[0].count != F.count:
        print(
            f"reconstruct: measurement count {rows[0].count} does not match "
            f"frame count {F.count}",
            file=sys.stderr,
        )
        return EXIT_USAGE
    lifted = build_lifted_map(F)
    reports = []
    for row in rows:
        rep = recover(F, row, group_tol=args.group_tol, lifted=lifted,
                      do_polish=(args.polish == "on"))
        reports.append(rep.to_dict())
    doc = {
        "frame_label": F.label,
        "frame_hash": _frame_hash(F),
        "rows": reports,
        "provenance": _provenance("reconstruct", args),
    }
    try:
        _write_text(args.out, dumps_json(doc))
    except OSError as e:
        print(f"reconstruct: cannot write {args.out}: {e}", file=sys.stderr)
        return EXIT_IO
    worst = max(r["residual"] for r in reports)
    print(f"reconstructed {len(reports)} rows; worst residual {worst:.6g}")
    return EXIT_OK


def _probe_pi(args):
    result = retraction_probe(
        dims=args.dims,
        ps=(args.p,),
        n_random=args.samples,
        n_adversarial=args.samples,
        seed=args.seed,
    )
    # the 2x2 reference pair: identity vs diag(2, 0) has ratio exactly 2 at
    # order inf, the known sharpness floor
    a = symop(np.eye(2))
    b = symop(np.diag([2.0, 0.0]))
    result["reference_pair_ratio_inf"] = retraction_ratio(a, b, math.inf)
    held = result["violations"] == 0
    rows = [
        (c["p"], c["dim"], c["field"], float(c["max_ratio"]), float(c["bound"]))
        for c in result["combos"]
    ]
    csv = ("p,dim,field,max_ratio,bound", rows)
    return result, held, csv


def _probe_omega(args):
    checks = []
    violations = 0
    pq_pairs = ((2.0, 1.0), (2.0, 2.0), (math.inf, 1.0))
    for dim in args.dims:
        for field in (Field.REAL, Field.COMPLEX):
            F = gen_frame("random_gaussian", dim, dim * dim + dim, field,
                          seed=args.seed + dim)
            lifted = build_lifted_map(F)
            rng = np.random.default_rng([args.seed, dim, 0 if field is Field.REAL else 1])
            n_pairs = max(1, args.samples)
            for _ in range(n_pairs):
                x = rng.standard_normal(dim)
                xp = rng.standard_normal(dim)
                if field is Field.COMPLEX:
                    x = x + 1j * rng.standard_normal(dim)
                    xp = xp + 1j * rng.standard_normal(dim)
                c = measure(F, Vector(x, field)).values
                cp = measure(F, Vector(xp, field)).values
                c = c + 0.05 * rng.standard_normal(c.shape) * max(1.0, float(np.max(c)))
                cp = cp + 0.05 * rng.standard_normal(cp.shape) * max(1.0, float(np.max(cp)))
                ra = recover(F, c, lifted=lifted).estimate
                rb = recover(F, cp, lifted=lifted).estimate
                for p, q in pq_pairs:
                    bound = recovery_lip_bound(F, p, q, lifted=lifted).pipeline
                    dq = lift_dist(ra, rb, q)
                    dp = float(np.linalg.norm(c - cp, ord=p))
                    ok = dq <= bound * dp + 1e-8
                    violations += 0 if ok else 1
                    checks.append({
                        "dim": dim, "field": field.value,
                        "p": "inf" if p == math.inf else p, "q": q,
                        "dq": dq, "ceiling": bound * dp + 1e-8,
                    })
    result = {
        "checks": len(checks),
        "violations": violations,
        "pq_pairs": [["inf" if p == math.inf else p, q] for p, q in pq_pairs],
        "worst_slack": min((c["ceiling"] - c["dq"] for c in checks), default=None),
    }
    rows = [(c["dim"], c["field"], c["p"], c["q"], float(c["dq"]), float(c["ceiling"]))
            for c in checks]
    return result, violations == 0, ("dim,field,p,q,dq,ceiling", rows)


def _probe_bilip(args):
    per_frame = []
    violations = 0
    all_rows = []
    for dim in args.dims:
        for field in (Field.REAL, Field.COMPLEX):
            F = gen_frame("random_gaussian", dim, dim * dim + dim, field,
                          seed=args.seed + dim)
            est = estimate_lower_lip(F, starts=32, seed=args.seed)
            res = probe_bilipschitz(F, samples=args.samples, seed=args.seed)
            ok = res["min_ratio"] ** 2 >= est.value - 1e-6
            violations += 0 if ok else 1
            per_frame.append({
                "frame_label": F.label,
                "a0": est.value,
                "min_ratio": res["min_ratio"],
                "max_ratio": res["max_ratio"],
                "kept": res["kept"],
                "consistent": ok,
            })
            all_rows.extend(
                (F.label, float(r)) for r in res["ratios"][:1000]
            )
    result = {"frames": per_frame, "violations": violations}
    return result, violations == 0, ("frame_label,ratio", all_rows)


def _probe_property_k(args):
    rec_align = verify_property_k("align_metric")
    rec_lift = verify_property_k("lift_metric")
    ok = all(rec_align[k] for k in
             ("distances_ok", "x_intersection_nonempty", "y_intersection_empty"))
    ok &= all(rec_lift[k] for k in
              ("distances_ok", "x_intersection_nonempty", "y_intersection_empty"))
    result = {"align_metric": rec_align, "lift_metric": rec_lift}
    rows = [
        ("align_metric", rec_align["distances_ok"], rec_align["x_intersection_nonempty"],
         rec_align["y_intersection_empty"], float(rec_align["located_min"])),
        ("lift_metric", rec_lift["distances_ok"], rec_lift["x_intersection_nonempty"],
         rec_lift["y_intersection_empty"], float(rec_lift["located_min"])),
    ]
    return result, ok, ("example,distances_ok,x_nonempty,y_empty,located_min", rows)


def cmd_probe(args) -> int:
    runner = {
        "pi": _probe_pi,
        "omega": _probe_omega,
        "bilipschitz": _probe_bilip,
        "property-k": _probe_property_k,
    }[args.what]
    result, held, csv = runner(args)
    doc = {
        "what": args.what,
        "bounds_held": held,
        "result": result,
        "provenance": _provenance("probe", args),
    }
    try:
        _write_text(args.report, dumps_json(doc))
        header, rows = csv
        _write_csv(str(args.report) + ".csv", header.split(","), rows)
    except OSError as e:
        print(f"probe: cannot write report: {e}", file=sys.stderr)
        return EXIT_IO
    print(f"probe {args.what}: bounds {'held' if held else 'VIOLATED'}")
    return EXIT_OK if held else EXIT_VIOLATION


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code) if e.code is not None else EXIT_OK
    handlers = {
        "gen": cmd_gen,
        "check": cmd_check,
        "reconstruct": cmd_reconstruct,
        "probe": cmd_probe,
    }
    return handlers[args.command](args)


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
