"""Command-line interface: ``sunlet <subcommand> [options]``.

Exit codes: 0 success, 1 usage error, 2 data error, 3 verification failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
import warnings
from typing import Sequence

from . import complex as sr
from .alignment import AlignmentError, format_fasta, read_fasta, write_fasta
from .experiment import RANK_COLUMNS, RunConfig, draw_replicate, run_experiment, simulate_labeled, simulation_seed
from .infer import canonicalize, default_workers, infer_alignment, true_rank
from .invariants import SunletLabeling, Two, generate_minors
from .seqsim import NetworkParams
from .verify import run_verify

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_VERIFY = 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _int_list(text: str) -> list[int]:
    try:
        return [int(v) for v in text.replace(" ", "").split(",") if v]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _range(text: str) -> tuple[float, float]:
    try:
        lo, hi = (float(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected LOW,HIGH, got {text!r}") from None
    return lo, hi


def _add_common(p: argparse.ArgumentParser, suppress: bool) -> None:
    def default(v):
        return argparse.SUPPRESS if suppress else v

    p.add_argument("--seed", type=int, default=default(0), help="random seed (default 0)")
    p.add_argument("--workers", type=int, default=default(None), help="worker processes (default $SUNLET_WORKERS or 1)")
    p.add_argument("--format", choices=["json", "csv", "text"], default=default(None), help="output format")
    p.add_argument("--output", "-o", default=default(None), help="output path (default stdout)")


def _add_ranges(p: argparse.ArgumentParser) -> None:
    p.add_argument("--model", choices=["cfn", "k3p"], default="k3p")
    p.add_argument("--lambda-range", dest="lam_range", type=_range, default=(0.15, 0.85), metavar="LOW,HIGH")
    p.add_argument("--flip-range", type=_range, default=(0.02, 0.2), metavar="LOW,HIGH",
                   help="range of each edge's purine/pyrimidine flip probability")
    p.add_argument("--transition-range", type=_range, default=(0.02, 0.2), metavar="LOW,HIGH",
                   help="range of the K3P substitution class that keeps the binary state")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="sunlet", description="Sunlet network inference from aligned sequences.")
    _add_common(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("simulate", help="simulate an alignment on a random sunlet network")
    _add_common(p, suppress=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--length", type=int, required=True)
    _add_ranges(p)
    p.add_argument("--params", help="JSON file with model, lambda and edges instead of random parameters")
    p.add_argument("--labeling", type=_int_list, help="true labeling theta(1),...,theta(n) (default random)")
    p.add_argument("--metadata", help="metadata sidecar path (default OUTPUT.json)")

    p = sub.add_parser("infer", help="rank all sunlet labelings for a FASTA alignment")
    _add_common(p, suppress=True)
    p.add_argument("fasta")
    p.add_argument("--alphabet", choices=["dna", "binary"])
    p.add_argument("--n", type=int, help="expected number of sequences (default: record count)")
    p.add_argument("--true-labeling", type=_int_list)
    p.add_argument("--top-k", type=int)

    p = sub.add_parser("invariants", help="list the generators G_n")
    _add_common(p, suppress=True)
    p.add_argument("--n", type=int, required=True)

    p = sub.add_parser("verify", help="run the exact identity checks")
    _add_common(p, suppress=True)
    p.add_argument("--n-max", type=int, default=8)
    p.add_argument("--timing", action="store_true", help="include timings in the report")

    p = sub.add_parser("complex", help="facets, purity and shelling of the Stanley-Reisner complex")
    _add_common(p, suppress=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--facets", action="store_true", help="list every facet")
    p.add_argument("--check-purity", action="store_true")
    p.add_argument("--check-shelling", action="store_true")

    p = sub.add_parser("experiment", help="rank-of-truth study over simulated replicates")
    _add_common(p, suppress=True)
    p.add_argument("--n", type=int, default=6)
    p.add_argument("--lengths", type=_int_list, default=[1000, 10000, 100000])
    p.add_argument("--replicates", type=int, default=100)
    _add_ranges(p)
    p.add_argument("--timing", action="store_true", help="include per-stage timings in the report")
    return parser


# output helpers --------------------------------------------------------------


def _emit(text: str, path: str | None) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _json(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _csv(header: Sequence[str], rows: Sequence[Sequence]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _workers(args) -> int:
    w = args.workers if args.workers is not None else default_workers()
    if w < 1:
        raise UsageError("--workers must be at least 1")
    return w


def _labeling(values: list[int] | None, n: int) -> SunletLabeling | None:
    if values is None:
        return None
    if len(values) != n:
        raise UsageError(f"labeling has {len(values)} entries, expected {n}")
    try:
        return SunletLabeling(tuple(values))
    except ValueError as exc:
        raise UsageError(str(exc)) from None


# subcommands -------------------------------------------------------------------


def _config(args, lengths, replicates) -> RunConfig:
    cfg = RunConfig(
        n=args.n,
        seed=args.seed,
        model=args.model,
        lengths=lengths,
        replicates=replicates,
        lam_range=args.lam_range,
        flip_range=args.flip_range,
        transition_range=args.transition_range,
        workers=_workers(args),
    )
    try:
        cfg.validate()
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    return cfg


def _load_params(path: str, n: int) -> NetworkParams:
    with open(path, encoding="utf-8") as fh:
        raw = json.load(fh)
    model = raw.get("model", "cfn")
    edges = [tuple(e) if model == "k3p" else e for e in raw["edges"]]
    params = NetworkParams(raw["lambda"], tuple(edges), model)
    if params.n != n:
        raise ValueError(f"parameter file describes n={params.n}, expected {n}")
    return params


def cmd_simulate(args) -> int:
    cfg = _config(args, [args.length], 1)
    rep = draw_replicate(cfg, 0)
    params = _load_params(args.params, args.n) if args.params else rep.params
    theta = _labeling(args.labeling, args.n) or rep.labeling
    sim_seed = simulation_seed(args.seed, 0, args.length)
    aln = simulate_labeled(params, theta, args.length, sim_seed)
    if args.output is None:
        sys.stdout.write(format_fasta(aln))
    else:
        write_fasta(aln, args.output)
    meta_path = args.metadata or (args.output + ".json" if args.output else None)
    if meta_path:
        meta = {
            "config": cfg.resolved(),
            "simulation_seed": sim_seed,
            "params": params.to_dict(),
            "true_labeling": list(theta.perm),
            "canonical_labeling": list(canonicalize(theta).perm),
            "labels": list(aln.labels),
        }
        _emit(_json(meta), meta_path)
    return EXIT_OK


def cmd_infer(args) -> int:
    aln = read_fasta(args.fasta, args.alphabet)
    if args.n is not None and args.n != aln.n:
        raise AlignmentError(f"expected {args.n} sequences, found {aln.n}")
    if aln.n < 4:
        raise AlignmentError(f"need at least 4 sequences, found {aln.n}")
    theta = _labeling(args.true_labeling, aln.n)
    if args.top_k is not None and args.top_k < 0:
        raise UsageError("--top-k must be non-negative")
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        result = infer_alignment(aln, workers=_workers(args))
    report = result.to_dict(args.top_k)
    if theta is not None:
        report["true_labeling"] = list(canonicalize(theta).perm)
        report["true_rank"] = true_rank(result.entries, theta)
    if aln.n in (4, 5):
        print(f"warning: {aln.n}-leaf sunlets are not identifiable; scores carry no signal", file=sys.stderr)
    fmt = args.format or "json"
    if fmt == "json":
        _emit(_json(report), args.output)
    else:
        rows = [(e["rank"], e["score"], " ".join(map(str, e["labeling"]))) for e in report["entries"]]
        _emit(_csv(["rank", "score", "labeling"], rows), args.output)
    return EXIT_OK


def cmd_invariants(args) -> int:
    if args.n < 4:
        raise UsageError("--n must be at least 4")
    minors = generate_minors(args.n)
    fmt = args.format or "text"
    items = [{"variant": "two" if isinstance(m, Two) else "three", "rows": list(m.rows), "cols": list(m.cols)} for m in minors]
    if fmt == "json":
        _emit(_json({"n": args.n, "count": len(items), "minors": items}), args.output)
    elif fmt == "csv":
        rows = [(it["variant"], " ".join(map(str, it["rows"])), " ".join(map(str, it["cols"]))) for it in items]
        _emit(_csv(["variant", "rows", "cols"], rows), args.output)
    else:
        lines = [f"{it['variant']}\t{','.join(map(str, it['rows']))}\t{','.join(map(str, it['cols']))}" for it in items]
        _emit("".join(line + "\n" for line in lines), args.output)
    return EXIT_OK


def cmd_verify(args) -> int:
    if not 4 <= args.n_max <= 9:
        raise UsageError("--n-max must lie in 4..9")
    report = run_verify(args.n_max, args.seed)
    fmt = args.format or "text"
    if fmt == "json":
        _emit(_json(report.to_dict(timing=args.timing)), args.output)
    elif fmt == "csv":
        _emit(_csv(["check", "ok", "detail"], [(c.name, c.ok, c.detail) for c in report.checks]), args.output)
    else:
        lines = []
        for c in report.checks:
            status = "SKIP" if c.skipped else ("PASS" if c.ok else "FAIL")
            timing = f" ({report.timings[c.name]:.2f}s)" if args.timing else ""
            lines.append(f"{status} {c.name}: {c.detail}{timing}")
        _emit("".join(line + "\n" for line in lines), args.output)
    return EXIT_OK if report.ok else EXIT_VERIFY


def cmd_complex(args) -> int:
    n = args.n
    if not 5 <= n <= 12:
        raise UsageError("--n must lie in 5..12")
    if args.check_shelling and n > sr.MAX_SHELLING_N:
        raise UsageError(f"--check-shelling supports n <= {sr.MAX_SHELLING_N}")
    facets = sr.enumerate_facets(n)
    report: dict = {
        "n": n,
        "ground_set_size": n * (n - 1) // 2,
        "minimal_nonfaces": len(sr.minimal_nonfaces(n)),
        "dyck_paths": len(sr.dyck_paths(n)),
        "facets": len(facets),
    }
    ok = True
    if args.check_purity:
        sizes = sorted({len(f) for f in facets})
        report["purity"] = {"ok": sizes == [2 * n - 1], "facet_sizes": sizes, "expected": 2 * n - 1}
        ok &= sizes == [2 * n - 1]
    if args.check_shelling:
        result = sr.check_shelling(n)
        entry = {"ok": result.ok, "method": result.method, "first_failure": result.first_failure}
        if not result.ok:
            found = sr.search_shelling(n, seed=args.seed)
            entry["search"] = {"ok": found.ok, "first_failure": found.first_failure}
            result = found
        report["shelling"] = entry
        ok &= result.ok
        if result.ok and args.facets:
            report["shelling_order"] = [[list(p) for p in sorted(f)] for f in result.order]
    if args.facets:
        report["facet_list"] = [[list(p) for p in sorted(f)] for f in facets]
    fmt = args.format or "text"
    if fmt == "json":
        _emit(_json(report), args.output)
    elif fmt == "csv":
        rows = [(k, json.dumps(v) if isinstance(v, (dict, list)) else v) for k, v in report.items()]
        _emit(_csv(["key", "value"], rows), args.output)
    else:
        lines = []
        for key, value in report.items():
            if key in ("facet_list", "shelling_order"):
                lines.append(f"{key}:")
                lines.extend("  " + " ".join(f"{a}-{b}" for a, b in f) for f in value)
            elif isinstance(value, dict):
                lines.append(f"{key}: {'PASS' if value['ok'] else 'FAIL'} " + json.dumps(value))
            else:
                lines.append(f"{key}: {value}")
        _emit("".join(line + "\n" for line in lines), args.output)
    return EXIT_OK if ok else EXIT_VERIFY


def cmd_experiment(args) -> int:
    cfg = _config(args, args.lengths, args.replicates)
    start = time.perf_counter()
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        report = run_experiment(cfg)
    timings = report.pop("timings")
    timings["total"] = time.perf_counter() - start
    if args.timing:
        report["timings"] = timings
    fmt = args.format or "json"
    if fmt == "json":
        _emit(_json(report), args.output)
    else:
        header = ["length", "replicates"] + RANK_COLUMNS + ["rank1_fraction"]
        rows = [[r["length"], r["replicates"]] + [r["counts"][c] for c in RANK_COLUMNS] + [r["rank1_fraction"]] for r in report["table"]]
        _emit(_csv(header, rows), args.output)
    return EXIT_OK


COMMANDS = {
    "simulate": cmd_simulate,
    "infer": cmd_infer,
    "invariants": cmd_invariants,
    "verify": cmd_verify,
    "complex": cmd_complex,
    "experiment": cmd_experiment,
}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"sunlet: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (AlignmentError, OSError, ValueError, KeyError, json.JSONDecodeError) as exc:
        print(f"sunlet: data error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
