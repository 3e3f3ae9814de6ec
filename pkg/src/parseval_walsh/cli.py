"""Command-line front end.

Exit codes: 0 success, 1 invalid input, 2 a numerical check failed.
Frames travel between subcommands as JSON ({"m", "n", "matrix"}), so e.g.

    parseval-walsh frame-reduced --order 3 --cols 1,3 | parseval-walsh split
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import checks, discrepancy, embedding, frames, walsh, walsh_frames
from .errors import NumericalCheckError, ValidationError


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        sys.exit(1)


def _cols(text: str) -> list[int]:
    try:
        return [int(c) for c in text.split(",") if c.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"--cols expects comma-separated integers, got {text!r}") from None


def _read_input(path: str | None) -> str:
    if path in (None, "-"):
        return sys.stdin.read()
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise ValidationError(f"cannot read {path}: {exc.strerror}") from None


def _load_frame(path: str | None) -> tuple[frames.Frame, dict | None]:
    """Frame plus its optional Walsh metadata block."""
    text = _read_input(path)
    if text.lstrip().startswith("{"):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"malformed frame JSON: {exc}") from None
        return frames.frame_from_dict(data), data.get("walsh")
    return frames.frame_from_csv(text), None


def _emit(text: str, output: str | None):
    if not text.endswith("\n"):
        text += "\n"
    if output:
        Path(output).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_walsh_gen(args):
    y = walsh.build_walsh_matrix(args.order)
    if args.ordering == "sequency":
        y = walsh.to_sequency(y)
    text = walsh.walsh_to_csv(y) if args.format == "csv" else walsh.walsh_to_json(y)
    _emit(text, args.output)


def _emit_walsh_frame(wf: walsh_frames.WalshFrame, args):
    if args.format == "csv":
        _emit(frames.frame_to_csv(wf.frame), args.output)
    else:
        _emit(frames.frame_to_json(wf.frame, walsh=wf.metadata()), args.output)


def cmd_frame_build(args):
    _emit_walsh_frame(walsh_frames.build_walsh_frame(args.m, args.order), args)


def cmd_frame_reduced(args):
    _emit_walsh_frame(walsh_frames.build_reduced_walsh_frame(args.order, args.cols), args)


def _rebuild(meta: dict, frame: frames.Frame) -> walsh_frames.WalshFrame | None:
    try:
        kind, order = meta["kind"], int(meta["order"])
        if kind == "reduced":
            wf = walsh_frames.build_reduced_walsh_frame(order, meta["selected"])
        elif kind == "plain":
            wf = walsh_frames.build_walsh_frame(frame.m, order)
        else:
            return None
    except (KeyError, TypeError, ValueError):
        return None
    if wf.frame.V.shape != frame.V.shape or np.max(np.abs(wf.frame.V - frame.V)) > 1e-12:
        return None
    return wf


def cmd_split(args):
    frame, meta = _load_frame(args.input)
    wf = _rebuild(meta, frame) if meta else None
    if wf is not None:
        result = walsh_frames.split_walsh_frame(wf)
        _check_walsh_split(wf, result)
        report = {"kind": wf.kind.value, **result.to_dict()}
    else:
        result = walsh_frames.split_columns(frame, frame.n // 2)
        report = {"kind": "generic", **result.to_dict()}
    _emit(json.dumps(report), args.output)


def _check_walsh_split(wf, result):
    whole = result.Va @ result.Va.T + result.Vb @ result.Vb.T
    if np.max(np.abs(whole - np.eye(wf.m))) > 1e-12:
        raise NumericalCheckError("split parts do not sum to the identity")
    if wf.kind is walsh_frames.FrameKind.REDUCED:
        want = (0.5, math.sqrt(wf.s / 2))
    else:
        want = (0.0, 0.0)
    got = (result.two_norm_discrepancy, result.frobenius_discrepancy)
    if max(abs(g - w) for g, w in zip(got, want)) > 1e-10:
        raise NumericalCheckError(f"split discrepancies {got} differ from the closed form {want}")


def cmd_embed(args):
    frame, _ = _load_frame(args.input)
    emb = embedding.embed_frame(frame, args.order)
    pg_err = float(np.max(np.abs(emb.P @ emb.G - emb.F)))
    if pg_err > 1e-10:
        raise NumericalCheckError(f"P G differs from F by {pg_err:.2e}")
    qs = embedding.split_quadratic_form(emb)
    if np.max(np.abs(qs.Qa + qs.Qb - np.eye(emb.m))) > 1e-10:
        raise NumericalCheckError("Qa + Qb differs from the identity")
    report = {
        "input": {"m": frame.m, "k": frame.n, "matrix": frame.V.tolist()},
        "order": args.order,
        "n": emb.n,
        "constraints": emb.constraints.tolist(),
        "pivots": [p + 1 for p in emb.pivots],
        "Qa": qs.Qa.tolist(),
        "Qb": qs.Qb.tolist(),
        "discrepancy": qs.discrepancy_two_norm,
        "pg_error": pg_err,
    }
    if args.export_dir:
        out = Path(args.export_dir)
        out.mkdir(parents=True, exist_ok=True)
        for name, mat in (("H", emb.H), ("G", emb.G), ("P", emb.P)):
            (out / f"{name}.csv").write_text(frames.matrix_to_csv(mat))
    _emit(json.dumps(report), args.output)


def cmd_bruteforce(args):
    frame, _ = _load_frame(args.input)
    best = discrepancy.brute_force_best_partition(frame, args.objective, threads=args.threads,
                                                  allow_empty=args.allow_empty)
    report = discrepancy.evaluate_partition(frame, best.partition)
    _emit(json.dumps({
        "objective": args.objective,
        "value": best.value,
        "inspected": best.inspected,
        "partition": {"J1": [j + 1 for j in best.partition.j1], "J2": [j + 1 for j in best.partition.j2]},
        "report": report.to_dict(),
    }), args.output)


def cmd_verify(args):
    rows = checks.SUITES[args.name]()
    if args.name in ("ex1", "ex2"):
        rows += checks.optimality_oracle((2,) if args.name == "ex1" else (3,))
    width = max(len(c.name) for c in rows)
    for c in rows:
        print(f"{'PASS' if c.passed else 'FAIL'}  {c.name:<{width}}  {c.detail}")
    failed = sum(not c.passed for c in rows)
    print(f"{len(rows) - failed}/{len(rows)} checks passed")
    if failed:
        raise NumericalCheckError(f"{failed} check(s) failed in {args.name}")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="parseval-walsh", description="Walsh frames, optimal splits and discrepancy checks.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("walsh-gen", help="print a Walsh matrix")
    g.add_argument("--order", type=int, required=True)
    g.add_argument("--ordering", choices=["natural", "sequency"], default="natural")
    g.add_argument("--format", choices=["csv", "json"], default="csv")
    g.add_argument("--output")
    g.set_defaults(func=cmd_walsh_gen)

    g = sub.add_parser("frame-build", help="plain Walsh frame: first m rows of Y_r / sqrt(n)")
    g.add_argument("--m", type=int, required=True)
    g.add_argument("--order", type=int, required=True)
    g.add_argument("--format", choices=["json", "csv"], default="json")
    g.add_argument("--output")
    g.set_defaults(func=cmd_frame_build)

    g = sub.add_parser("frame-reduced", help="reduced Walsh frame with duplicated columns k(1..s)")
    g.add_argument("--order", type=int, required=True)
    g.add_argument("--cols", type=_cols, required=True, help="1-based, e.g. 1,3")
    g.add_argument("--format", choices=["json", "csv"], default="json")
    g.add_argument("--output")
    g.set_defaults(func=cmd_frame_reduced)

    g = sub.add_parser("split", help="split a frame into column halves and report the discrepancy")
    g.add_argument("--input", help="frame JSON or CSV (default: stdin)")
    g.add_argument("--output")
    g.set_defaults(func=cmd_split)

    g = sub.add_parser("embed", help="embed an equal-norm Parseval frame into Walsh coordinates")
    g.add_argument("--input", help="frame JSON or CSV (default: stdin)")
    g.add_argument("--order", type=int, required=True)
    g.add_argument("--export-dir", help="also write H.csv, G.csv, P.csv here")
    g.add_argument("--output")
    g.set_defaults(func=cmd_embed)

    g = sub.add_parser("bruteforce", help="exhaustive optimal two-part partition")
    g.add_argument("--input", help="frame JSON or CSV (default: stdin)")
    g.add_argument("--objective", choices=["dev2", "devF"], default="dev2")
    g.add_argument("--threads", type=int, default=os.cpu_count())
    g.add_argument("--allow-empty", action="store_true")
    g.add_argument("--output")
    g.set_defaults(func=cmd_bruteforce)

    g = sub.add_parser("verify", help="reproduce a worked example or a frame-split sweep")
    g.add_argument("name", choices=list(checks.SUITES))
    g.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:  # usage errors (mapped to 1) and --help (0)
        return exc.code if isinstance(exc.code, int) else 1
    try:
        args.func(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except NumericalCheckError as exc:
        print(f"numerical check failed: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
