"""Batch entry point: generate matrices from specs, count and simplify
generator specs against observations, run one-shot recommendations, and
launch the HTTP service.

Exit codes: 0 success, 1 domain outcomes (infeasible spec, over budget,
empty candidates under --strict), 2 usage or parse errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import formats
from .generators import (
    DisorderSpec,
    apply_absent,
    count_disorder,
    disorder_support,
    g3_exclusion_check,
    simplify_max,
)
from .model import DomainError, ObservationSet
from .recommend import (
    DEFAULT_BUDGET,
    Dataset,
    OverbudgetError,
    Recommendation,
    materialize_matrix,
    recommend,
    recommend_lazy,
    recommendation_to_json,
)

EXIT_OK = 0
EXIT_DOMAIN = 1
EXIT_USAGE = 2


def _read_input(path: str) -> bytes:
    if path == "-":
        return sys.stdin.buffer.read()
    return Path(path).read_bytes()


def _write_output(data: bytes, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(data.decode("utf-8"))
    else:
        Path(out).write_bytes(data)


def _csv_names(text: str | None) -> list[str]:
    if not text:
        return []
    return [part for part in (p.strip() for p in text.split(",")) if part]


def _load_specs(paths: list[str]) -> list[DisorderSpec]:
    return [formats.parse_spec(_read_input(p)) for p in paths]


def _print_human(rec: Recommendation, space, stream) -> None:
    order = {s: j for j, s in enumerate(space.symptoms)}

    def fmt(syms) -> str:
        ordered = sorted(syms, key=lambda s: order.get(s, len(order)))
        return ", ".join(ordered) if ordered else "(none)"

    print(f"Possible Disorders: {', '.join(rec.candidates) if rec.candidates else '(none)'}", file=stream)
    if rec.excluded:
        print(f"Excluded: {', '.join(rec.excluded)}", file=stream)
    if rec.group_sizes:
        sizes = ", ".join(f"{label}={n}" for label, n in rec.group_sizes.items())
        print(f"Surviving profiles: {sizes}", file=stream)
    print(f"Best Symptoms: {fmt(rec.informative.s_inter)}", file=stream)
    print(f"  Confirm-to-keep (always present somewhere): {fmt(rec.informative.s1)}", file=stream)
    print(f"  Confirm-to-exclude (always absent somewhere): {fmt(rec.informative.s0)}", file=stream)
    if rec.pair_map:
        print("Symptom - Disorder - Differ:", file=stream)
        for symptom in sorted(rec.pair_map, key=lambda s: order.get(s, len(order))):
            pairs = ", ".join(f"{a}/{b}" for a, b in rec.pair_map[symptom])
            print(f"  {symptom} distinguishes {pairs}", file=stream)
    for warning in rec.warnings:
        print(f"warning: {warning}", file=stream)
    if rec.diagnosis_complete:
        print("Diagnosis complete: a single candidate remains.", file=stream)


def _cmd_generate(args: argparse.Namespace) -> int:
    specs = _load_specs(args.spec)
    dataset = Dataset.from_specs("generate", specs)
    matrix = materialize_matrix(dataset.specs, dataset.space, dataset.catalog)
    _write_output(formats.serialize_matrix(matrix), args.out)
    return EXIT_OK


def _cmd_count(args: argparse.Namespace) -> int:
    specs = _load_specs(args.spec)
    counts = [(spec.label, count_disorder(spec)) for spec in specs]
    if args.json:
        payload = {"counts": [{"name": name, "count": n} for name, n in counts]}
        _write_output((json.dumps(payload, indent=2) + "\n").encode(), args.out)
    else:
        _write_output(("\n".join(str(n) for _, n in counts) + "\n").encode(), args.out)
    return EXIT_OK


def _cmd_simplify(args: argparse.Namespace) -> int:
    spec = formats.parse_spec(_read_input(args.spec))
    present = frozenset(_csv_names(args.present))
    absent = frozenset(_csv_names(args.absent))
    if g3_exclusion_check(spec, present):
        print(
            f"infeasible: present symptoms fall into separate G3 alternatives of {spec.label!r}",
            file=sys.stderr,
        )
        return EXIT_DOMAIN
    reduced = apply_absent(spec, absent)
    if reduced is None:
        print(
            f"infeasible: no profile of {spec.label!r} avoids all absent symptoms",
            file=sys.stderr,
        )
        return EXIT_DOMAIN
    outside = present - disorder_support(reduced)
    if outside:
        print(
            f"infeasible: {spec.label!r} can never show present symptom(s) {sorted(outside)}",
            file=sys.stderr,
        )
        return EXIT_DOMAIN
    simplified = simplify_max(reduced, present)
    _write_output(formats.serialize_spec(simplified), args.out)
    return EXIT_OK


def _cmd_recommend(args: argparse.Namespace) -> int:
    present = _csv_names(args.present)
    absent = _csv_names(args.absent)
    obs = ObservationSet.from_names(present, absent)
    if args.matrix is not None:
        matrix, warnings = formats.parse_matrix(_read_input(args.matrix))
        for w in warnings:
            print(f"warning: {w}", file=sys.stderr)
        dataset = Dataset.from_matrix("cli", matrix)
        rec = recommend(dataset, obs)
    else:
        specs = _load_specs(args.spec)
        dataset = Dataset.from_specs("cli", specs)
        rec = recommend_lazy(dataset, obs, budget=args.budget)
    if args.json:
        _write_output(recommendation_to_json(rec, dataset.space), args.out)
    else:
        if args.out and args.out != "-":
            with open(args.out, "w", encoding="utf-8") as fh:
                _print_human(rec, dataset.space, fh)
        else:
            _print_human(rec, dataset.space, sys.stdout)
    if args.strict and not rec.candidates:
        print("no candidate disorders remain", file=sys.stderr)
        return EXIT_DOMAIN
    return EXIT_OK


def _cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import create_app

    app = create_app(data_dir=args.data, budget=args.budget, ui_dir=args.ui)
    uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dxrec",
        description="Differential-diagnosis recommender over binary symptom-profile matrices.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="materialize a matrix CSV from generator specs")
    p.add_argument("--spec", action="append", required=True, help="spec JSON path (repeatable)")
    p.add_argument("--out", default=None, help="output path (default stdout)")
    p.set_defaults(func=_cmd_generate)

    p = sub.add_parser("count", help="closed-form profile counts for generator specs")
    p.add_argument("--spec", action="append", required=True)
    p.add_argument("--json", action="store_true")
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_count)

    p = sub.add_parser("simplify", help="condition a spec on observed symptoms")
    p.add_argument("--spec", required=True)
    p.add_argument("--present", default=None, help="comma-separated present symptoms")
    p.add_argument("--absent", default=None, help="comma-separated absent symptoms")
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_simplify)

    p = sub.add_parser("recommend", help="one-shot recommendation")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--matrix", default=None, help="matrix CSV path, or - for stdin")
    src.add_argument("--spec", action="append", help="spec JSON path (repeatable)")
    p.add_argument("--present", default=None, help="comma-separated present symptoms")
    p.add_argument("--absent", default=None, help="comma-separated absent symptoms")
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="max profiles to materialize (lazy path)")
    p.add_argument("--json", action="store_true", help="emit the canonical JSON form")
    p.add_argument("--strict", action="store_true", help="exit 1 when no candidates remain")
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_recommend)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--host", default="127.0.0.1", help="bind address (loopback by default; no auth)")
    p.add_argument("--data", default=None, help="directory of CSV/JSON datasets to preload")
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    p.add_argument("--ui", default=None, help="static directory to mount at /ui (frontend build)")
    p.set_defaults(func=_cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except formats.FormatError as e:
        print(f"parse error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except OverbudgetError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_DOMAIN
    except FileNotFoundError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except DomainError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
