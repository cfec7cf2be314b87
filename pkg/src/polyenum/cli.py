"""Command-line interface: ``polyenum {enumerate,generate,estimate,probe,bench}``.

Exit codes: 0 ok, 1 usage, 2 input error, 3 infeasible or unbounded,
4 timeout, 5 resource cap (including 64-bit overflow), 6 internal error.
"""

from __future__ import annotations

import argparse
import csv
import logging
import os
import sys
import tempfile
import time
from dataclasses import dataclass
from pathlib import Path

from . import doubledesc, parjobs, revsearch
from .errors import (
    ArithmeticOverflow,
    EnumerationTimeout,
    InvariantViolation,
    PolyenumError,
    ResourceCapError,
)
from .exact import ArithmeticMode
from .polyio import Representation, format_row, parse, serialize
from .shapes import FAMILIES, GeneratorSpec

log = logging.getLogger("polyenum")

EXIT_OK, EXIT_USAGE, EXIT_INPUT, EXIT_GEOMETRY, EXIT_TIMEOUT, EXIT_CAP, EXIT_INTERNAL = range(7)
AUTO_PROBE_BASES = 10_000
AUTO_THRESHOLD = 100
BENCH_HEADER = ["instance", "engine", "workers", "seconds", "outputs", "bases", "status"]


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad usage; that code is reserved for input errors
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _add_engine_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--mode", choices=["rs", "dd", "auto"], default="rs", help="enumeration engine (default rs)")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--id", dest="init_depth", type=int, default=2, help="initial seeding depth")
    p.add_argument("--lmin", type=int, default=3)
    p.add_argument("--maxc", type=int, default=50)
    p.add_argument("--scale", type=int, default=100)
    p.add_argument("--maxbuf", type=int, default=512000, help="worker output chunk size in bytes")
    p.add_argument("--executor", choices=["process", "thread"], default="process")
    p.add_argument("--timeout", type=float, default=None, help="wall-clock limit in seconds")
    p.add_argument("--memcap", type=int, default=None, help="cap on intermediate DD generators")
    p.add_argument("--arith", choices=[m.value for m in ArithmeticMode], default="big")
    p.add_argument("--order", default="asgiven", help="DD insertion order: asgiven, lexmin, maxcutoff, random[:seed]")
    p.add_argument("--seed", type=int, default=None, help="seed for --order random")
    p.add_argument("--threshold", type=float, default=AUTO_THRESHOLD, help="auto mode: bases per output above which dd is used")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="polyenum", description="Exact vertex and facet enumeration of polytopes.")
    parser.add_argument("-v", "--verbose", action="count", default=0)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("enumerate", help="convert H to V or V to H")
    p.add_argument("input", nargs="?", default="-")
    p.add_argument("-o", "--output", default="-")
    p.add_argument("--sorted", action="store_true", help="write rows in canonical sorted order")
    _add_engine_flags(p)

    p = sub.add_parser("generate", help="write a generated family member")
    p.add_argument("family", help=", ".join(sorted(FAMILIES)))
    p.add_argument("params", nargs="*", type=int)
    p.add_argument("-o", "--output", default="-")

    p = sub.add_parser("estimate", help="random-probe estimate of tree size")
    p.add_argument("input", nargs="?", default="-")
    p.add_argument("--probes", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("probe", help="partial run reporting bases per output")
    p.add_argument("input", nargs="?", default="-")
    p.add_argument("--bases", type=int, default=AUTO_PROBE_BASES)
    p.add_argument("--arith", choices=[m.value for m in ArithmeticMode], default="big")

    p = sub.add_parser("bench", help="run an instance x engine matrix")
    p.add_argument("instances", nargs="+", help="files or generator specs such as cube:3")
    p.add_argument("--engines", default="rs,dd", help="comma list of rs, dd, par:N")
    p.add_argument("--timeout", type=float, default=None)
    p.add_argument("--memcap", type=int, default=None)
    p.add_argument("--baseline", default=None, help="engine used as speedup baseline (default: first)")
    p.add_argument("--csv", default=None, help="write CSV here instead of stdout")
    p.add_argument("--arith", choices=[m.value for m in ArithmeticMode], default="big")
    return parser


# -- helpers ----------------------------------------------------------------


def _read_input(path: str) -> Representation:
    try:
        data = sys.stdin.buffer.read() if path == "-" else Path(path).read_bytes()
    except OSError as exc:
        raise _InputError(f"cannot read {path}: {exc.strerror}") from None
    return parse(data)


class _InputError(PolyenumError):
    exit_code = EXIT_INPUT


def _open_output(path: str):
    if path == "-":
        return sys.stdout
    return open(path, "w", encoding="ascii", newline="\n")


def _arith(args) -> str:
    return os.environ.get("POLYENUM_ARITH") or args.arith


def _deadline(timeout):
    return None if timeout is None else time.monotonic() + timeout


def _order(args) -> doubledesc.InsertionOrder:
    try:
        return doubledesc.InsertionOrder.parse(args.order, args.seed)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _params(args) -> parjobs.ParallelParams:
    try:
        return parjobs.ParallelParams(
            workers=args.workers,
            init_depth=args.init_depth,
            lmin=args.lmin,
            maxc=args.maxc,
            scale=args.scale,
            maxbuf_bytes=args.maxbuf,
            executor=args.executor,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def choose_mode(rep: Representation, mode: str, threshold: float = AUTO_THRESHOLD, arith="big") -> str:
    if mode != "auto":
        return mode
    report = revsearch.degeneracy_report(rep, AUTO_PROBE_BASES, arith)
    chosen = "dd" if report.ratio > threshold else "rs"
    log.info("auto mode: %d bases / %d outputs -> %s", report.bases_seen, report.outputs_seen, chosen)
    return chosen


@dataclass
class RunSummary:
    engine: str
    outputs: int
    bases: int
    depth: int
    seconds: float


def run_engine(rep, engine: str, sink, *, workers=1, params=None, order=None, memcap=None, arith="big", deadline=None) -> RunSummary:
    """Run one engine, streaming rows to ``sink``."""
    start = time.monotonic()
    if engine == "dd":
        res = doubledesc.dd_enumerate(rep, order or doubledesc.AS_GIVEN, max_generators=memcap, deadline=deadline, sink=sink)
        return RunSummary("dd", res.n_outputs, 0, 0, time.monotonic() - start)
    if engine == "rs" and workers == 1 and params is None and ArithmeticMode.parse(arith) is not ArithmeticMode.HYBRID:
        res = revsearch.solve(rep, arith=arith, sink=sink, deadline=deadline)
        return RunSummary("rs", res.n_outputs, res.bases, res.max_depth_seen, time.monotonic() - start)
    params = params or parjobs.ParallelParams(workers=workers)
    report = parjobs.manager_loop(rep, params, sink, arith=arith, deadline=deadline)
    label = f"par:{params.workers}" if engine == "par" or params.workers > 1 else "rs"
    return RunSummary(label, report.total_outputs, report.total_bases, report.max_depth_seen, time.monotonic() - start)


def _output_header(rep: Representation, kind: str, count: int, equations) -> list[str]:
    out = []
    if rep.name:
        out.append(rep.name)
    out.append(f"{kind}-representation")
    if equations:
        k = len(equations)
        out.append("linearity " + " ".join(str(x) for x in [k, *range(1, k + 1)]))
    out += ["begin", f"{count + len(equations)} {rep.n} rational"]
    return out


# -- commands ---------------------------------------------------------------


def cmd_enumerate(args) -> int:
    checked_params = _params(args)
    order = _order(args)
    rep = _read_input(args.input)
    arith = _arith(args)
    deadline = _deadline(args.timeout)
    mode = choose_mode(rep, args.mode, args.threshold, arith)
    params = checked_params if mode == "rs" and args.workers > 1 else None
    kind = "V" if rep.kind == "H" else "H"
    with tempfile.TemporaryFile("w+", encoding="ascii") as spool:
        sink = parjobs.TextSink(spool)
        summary = run_engine(rep, mode, sink, params=params, order=order, memcap=args.memcap, arith=arith, deadline=deadline)
        equations = []
        if kind == "H":
            from .transform import prepare

            equations = prepare(rep).equations
        spool.seek(0)
        out = _open_output(args.output)
        try:
            out.write("\n".join(_output_header(rep, kind, sink.count, equations)) + "\n")
            for row in equations:
                out.write(format_row(row) + "\n")
            if args.sorted:
                rows = sorted(parjobs.rows_from_text(spool.read()))
                for row in rows:
                    out.write(format_row(row) + "\n")
            else:
                for line in spool:
                    out.write(line)
            out.write("end\n")
        finally:
            if out is not sys.stdout:
                out.close()
            else:
                out.flush()
    print(
        f"bases={summary.bases} depth={summary.depth} seconds={summary.seconds:.3f} "
        f"outputs={summary.outputs} engine={summary.engine}",
        file=sys.stderr,
    )
    return EXIT_OK


def cmd_generate(args) -> int:
    try:
        spec = GeneratorSpec(args.family.lower(), tuple(args.params))
        rep = spec.generate()
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    out = _open_output(args.output)
    try:
        out.write(serialize(rep))
    finally:
        if out is not sys.stdout:
            out.close()
    return EXIT_OK


def cmd_estimate(args) -> int:
    if args.probes < 1:
        raise UsageError("--probes must be >= 1")
    rep = _read_input(args.input)
    problem = revsearch.Problem.from_representation(rep)
    if problem.trivial:
        n = len(problem.system.trivial_outputs())
        print(f"est_bases=0 est_outputs={n} variance=0 probes=0")
        return EXIT_OK
    est = revsearch.estimate(problem.root(), args.probes, args.seed)
    print(
        f"est_bases={float(est.bases):.6g} est_outputs={float(est.outputs):.6g} "
        f"variance={float(est.variance):.6g} probes={est.probes}"
    )
    return EXIT_OK


def cmd_probe(args) -> int:
    if args.bases < 1:
        raise UsageError("--bases must be >= 1")
    rep = _read_input(args.input)
    r = revsearch.degeneracy_report(rep, args.bases, _arith(args))
    print(f"bases={r.bases_seen} outputs={r.outputs_seen} ratio={float(r.ratio):.6g} complete={str(r.complete).lower()}")
    return EXIT_OK


@dataclass
class BenchRow:
    instance: str
    engine: str
    workers: int
    seconds: float
    outputs: int | None
    bases: int | None
    status: str

    def csv_fields(self) -> list[str]:
        def fmt(x):
            return "" if x is None else str(x)

        return [self.instance, self.engine, str(self.workers), f"{self.seconds:.3f}", fmt(self.outputs), fmt(self.bases), self.status]


class _CountSink:
    def __init__(self):
        self.count = 0

    def __call__(self, row):
        self.count += 1

    def write_chunk(self, text):
        self.count += text.count("\n")


def _load_instance(text: str) -> Representation:
    if Path(text).exists():
        return parse(Path(text).read_bytes())
    try:
        return GeneratorSpec.parse(text).generate()
    except ValueError as exc:
        raise UsageError(f"{text!r} is neither a file nor a generator spec: {exc}") from None


def _parse_engine(text: str) -> tuple[str, int]:
    text = text.strip().lower()
    if text in ("rs", "dd"):
        return text, 1
    if text.startswith("par"):
        try:
            return "par", int(text[3:].lstrip(":") or 1)
        except ValueError:
            pass
    raise UsageError(f"unknown engine {text!r} (use rs, dd or par:N)")


def bench_cell(name, rep, engine, workers, timeout=None, memcap=None, arith="big") -> BenchRow:
    start = time.monotonic()
    label = engine if engine != "par" else f"par:{workers}"
    try:
        params = parjobs.ParallelParams(workers=workers) if engine == "par" else None
        s = run_engine(rep, engine, _CountSink(), params=params, memcap=memcap, arith=arith, deadline=_deadline(timeout))
    except EnumerationTimeout:
        status = "timeout"
    except ArithmeticOverflow:
        status = "overflow"
    except ResourceCapError:
        status = "memcap"
    except PolyenumError as exc:
        log.warning("%s/%s failed: %s", name, label, exc)
        status = "error"
    else:
        bases = None if engine == "dd" else s.bases
        return BenchRow(name, label, workers, s.seconds, s.outputs, bases, "ok")
    return BenchRow(name, label, workers, time.monotonic() - start, None, None, status)


def run_bench(instances, engines, timeout=None, memcap=None, arith="big") -> list[BenchRow]:
    rows = []
    for text in instances:
        rep = _load_instance(text)
        name = rep.name or Path(text).stem
        cells = [bench_cell(name, rep, e, w, timeout, memcap, arith) for e, w in engines]
        counts = {r.outputs for r in cells if r.status == "ok"}
        if len(counts) > 1:
            raise InvariantViolation(f"engines disagree on output count for {name}: {sorted(counts)}")
        rows.extend(cells)
    return rows


def format_table(rows: list[BenchRow], baseline: str | None = None) -> str:
    """Aligned text table with a speedup column relative to ``baseline``."""
    base_seconds = {}
    for r in rows:
        if r.status == "ok" and (baseline is None and r.instance not in base_seconds or r.engine == baseline):
            base_seconds[r.instance] = r.seconds
    header = BENCH_HEADER + ["speedup"]
    body = []
    for r in rows:
        b = base_seconds.get(r.instance)
        speed = f"{b / r.seconds:.2f}" if r.status == "ok" and b is not None and r.seconds > 0 else ""
        body.append(r.csv_fields() + [speed])
    widths = [max(len(x) for x in col) for col in zip(header, *body)]
    lines = ["  ".join(x.ljust(w) for x, w in zip(line, widths)).rstrip() for line in [header] + body]
    return "\n".join(lines) + "\n"


def cmd_bench(args) -> int:
    engines = [_parse_engine(e) for e in args.engines.split(",") if e.strip()]
    if not engines:
        raise UsageError("no engines given")
    baseline = None
    if args.baseline:
        e, w = _parse_engine(args.baseline)
        baseline = e if e != "par" else f"par:{w}"
    rows = run_bench(args.instances, engines, args.timeout, args.memcap, _arith(args))
    out = open(args.csv, "w", newline="") if args.csv else sys.stdout
    try:
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(BENCH_HEADER)
        for r in rows:
            writer.writerow(r.csv_fields())
    finally:
        if out is not sys.stdout:
            out.close()
    sys.stderr.write(format_table(rows, baseline))
    return EXIT_OK


COMMANDS = {
    "enumerate": cmd_enumerate,
    "generate": cmd_generate,
    "estimate": cmd_estimate,
    "probe": cmd_probe,
    "bench": cmd_bench,
}


def main(argv=None) -> int:
    if hasattr(sys, "set_int_max_str_digits"):
        sys.set_int_max_str_digits(0)
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2), format="%(levelname)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"polyenum: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except PolyenumError as exc:
        print(f"polyenum: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code
    except Exception as exc:  # pragma: no cover - last-resort guard
        log.exception("internal error")
        print(f"polyenum: internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
