"""Command-line entry point: ``starcodes <subcommand> ...``.

Exit codes: 0 on success, 1 when a verification fails, search8 finds no
code or a search runs out of budget, 2 on unreadable input.
"""

from __future__ import annotations

import argparse
import logging
import sys
import time
from concurrent.futures import FIRST_COMPLETED, Future, ProcessPoolExecutor, wait
from pathlib import Path
from typing import TextIO

from . import diameter, pipeline
from .binary_codes import (
    CodeFormatError,
    CodeVerificationError,
    export_codes,
    extended_hamming,
    import_codes,
    is_extended_perfect,
)
from .designs import read_solution, stage_restriction, steiner_from_solution, write_solution
from .ternary_codes import TernaryCode, closest_pair, decompose, read_ternary, verify_params, write_ternary

log = logging.getLogger("starcodes")

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


def parse_range(text: str, count: int) -> range:
    """1-based inclusive ``A..B``; either end may be omitted."""
    lo, sep, hi = text.partition("..")
    if not sep:
        lo = hi = text
    a = int(lo) if lo else 1
    b = int(hi) if hi else count
    if not 1 <= a <= b <= count:
        raise ValueError(f"range {text!r} is outside 1..{count}")
    return range(a, b + 1)


# -- search8 --------------------------------------------------------------

def cmd_search8(args) -> int:
    try:
        result = pipeline.search8(args.budget)
    except RuntimeError as exc:
        print(f"search8 failed: {exc}", file=sys.stderr)
        return EXIT_FAIL
    code = result.code
    c0, c1 = decompose(code)
    ball = diameter.anticode_ball2(8)
    cert = diameter.is_diameter_perfect(code, ball, 5)
    halves = [is_extended_perfect(c) for c in (c0, c1)]
    print(f"found (8,5,7;16) code in {result.seconds:.2f}s (e{result.outcome.star + 1}, "
          f"{len(result.outcome.full_solutions)} full solutions)")
    print(f"verify_params: {verify_params(code, 8, 5, 7, 16).reason}")
    print(f"halves: {halves[0].reason} and {halves[1].reason} extended perfect (8,16,4)")
    print(f"certificate: {cert.reason} -> {'diameter perfect' if cert else 'not diameter perfect'}")
    if args.out:
        write_ternary(code, args.out)
        print(f"code written to {args.out}")
    if args.ball_out:
        write_ternary(TernaryCode(8, ball.words), args.ball_out)
        print(f"anticode written to {args.ball_out}")
    if args.solution_out:
        write_solution(args.solution_out, sorted(c1.words), 8, result.outcome.star)
        print(f"odd half written to {args.solution_out}")
    if not args.out:
        for w in code:
            print(w)
    return EXIT_OK if cert and all(halves) else EXIT_FAIL


# -- pipeline16 -----------------------------------------------------------

def _prepare(index: int, c0, reduce: bool):
    start = time.perf_counter()
    c0, order, reps = pipeline.prepare_code(c0, reduce)
    return index, c0, order, reps, time.perf_counter() - start


def _solve_rep(index: int, c0, star: int, stage: str, budget: int | None, keep: bool):
    start = time.perf_counter()
    outcome = pipeline.search_representative(c0, star, stage, budget, keep=keep)
    return index, outcome, time.perf_counter() - start


class _Sink:
    """Writes report lines in code order, whatever order tasks finish in."""

    def __init__(self, out: TextIO, order: list[int], timing: bool):
        self.out, self.timing = out, timing
        self.pending = list(order)
        self.ready: dict[int, pipeline.CodeReport] = {}
        self.reports: list[pipeline.CodeReport] = []

    def put(self, report: pipeline.CodeReport) -> None:
        self.ready[report.code_index] = report
        while self.pending and self.pending[0] in self.ready:
            r = self.ready.pop(self.pending.pop(0))
            self.out.write(r.to_line(self.timing) + "\n")
            self.out.flush()
            self.reports.append(r)


class _CodeState:
    def __init__(self, index, c0, order, reps, seconds):
        self.index, self.c0, self.order, self.reps = index, c0, order, reps
        self.seconds = seconds
        self.outcomes: dict[int, pipeline.StageOutcome] = {}


def _dump_solutions(directory: Path, index: int, n: int, outcome: pipeline.StageOutcome) -> None:
    for label, sols in (("s2", outcome.s2_solutions), ("s3", outcome.s3_solutions),
                        ("full", outcome.full_solutions)):
        for k, sol in enumerate(sols):
            write_solution(directory / f"code{index}_e{outcome.star + 1}_{label}_{k}.txt",
                           sorted(sol), n, outcome.star)


def run_pipeline(codes, indices, stage, budget, jobs, reduce, sink: _Sink,
                 solutions_dir: Path | None = None) -> None:
    keep = solutions_dir is not None
    states: dict[int, _CodeState] = {}

    def finish(state: _CodeState) -> None:
        outcomes = [state.outcomes[s] for s in state.reps]
        if solutions_dir is not None:
            for o in outcomes:
                _dump_solutions(solutions_dir, state.index, state.c0.n, o)
        sink.put(pipeline.merge_outcomes(state.index, state.order, state.reps, outcomes,
                                         stage, state.seconds))

    def add_rep(index, outcome, seconds):
        state = states[index]
        state.outcomes[outcome.star] = outcome
        state.seconds += seconds
        if len(state.outcomes) == len(state.reps):
            finish(state)

    if jobs <= 1:
        for i in indices:
            index, c0, order, reps, secs = _prepare(i, codes[i - 1], reduce)
            states[index] = _CodeState(index, c0, order, reps, secs)
            for star in reps:
                add_rep(*_solve_rep(index, c0, star, stage, budget, keep))
        return

    with ProcessPoolExecutor(max_workers=jobs) as pool:
        running: dict[Future, str] = {
            pool.submit(_prepare, i, codes[i - 1], reduce): "prep" for i in indices
        }
        while running:
            done, _ = wait(running, return_when=FIRST_COMPLETED)
            for fut in done:
                kind = running.pop(fut)
                if kind == "prep":
                    index, c0, order, reps, secs = fut.result()
                    states[index] = _CodeState(index, c0, order, reps, secs)
                    for star in reps:
                        running[pool.submit(_solve_rep, index, c0, star, stage, budget, keep)] = "rep"
                else:
                    add_rep(*fut.result())


def _completed_indices(path: Path) -> set[int]:
    done = set()
    if path.exists():
        for line in path.read_text().splitlines():
            if line.strip():
                done.add(pipeline.CodeReport.from_line(line).code_index)
    return done


def cmd_pipeline16(args) -> int:
    try:
        codes = import_codes(args.codes, args.format)
        indices = list(parse_range(args.range, len(codes))) if args.range else list(range(1, len(codes) + 1))
    except (OSError, CodeFormatError, CodeVerificationError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if codes and codes[0].n != 16:
        log.warning("codes have length %d, not 16", codes[0].n)
    solutions_dir = Path(args.solutions_dir) if args.solutions_dir else None
    if solutions_dir:
        solutions_dir.mkdir(parents=True, exist_ok=True)
    if args.out:
        out_path = Path(args.out)
        if args.resume:
            skip = _completed_indices(out_path)
            indices = [i for i in indices if i not in skip]
            log.info("resuming: %d codes already reported", len(skip))
        stream = out_path.open("a" if args.resume else "w")
    else:
        stream = sys.stdout
    sink = _Sink(stream, indices, not args.no_timing)
    try:
        run_pipeline(codes, indices, args.stage, args.budget, args.jobs, not args.no_reduce,
                     sink, solutions_dir)
    finally:
        if stream is not sys.stdout:
            stream.close()
    reports = sink.reports
    with_s2 = sum(1 for r in reports if r.s2_solutions)
    with_s3 = sum(1 for r in reports if r.s3_solutions)
    incomplete = [r.code_index for r in reports if not r.exhausted]
    summary = f"codes={len(reports)} with_s2={with_s2}"
    if args.stage == "s3":
        summary += f" with_s3={with_s3}"
    summary += f" incomplete={','.join(map(str, incomplete)) or '-'}"
    print(summary, file=sys.stderr)
    return EXIT_OK if not incomplete else EXIT_FAIL


# -- verify ---------------------------------------------------------------

def _verify_binary(paths, args) -> int:
    status = EXIT_OK
    for path in paths:
        codes = import_codes(path, args.format, verify=False)
        for i, c in enumerate(codes, start=1):
            verdict = is_extended_perfect(c)
            reason = verdict.reason if verdict else f"not extended perfect: {verdict.reason}"
            print(f"file={path} code={i} kind=binary ok={str(bool(verdict)).lower()} reason={reason!r}")
            if not verdict:
                status = EXIT_FAIL
    return status


def _verify_ternary(paths, args) -> int:
    status = EXIT_OK
    for path in paths:
        c = read_ternary(path)
        n = args.n if args.n is not None else c.n
        w = args.w if args.w is not None else c.n - 1
        size = args.M if args.M is not None else len(c)
        verdict = verify_params(c, n, args.d, w, size)
        print(f"file={path} kind=ternary params=({n},{args.d},{w};{size}) "
              f"ok={str(bool(verdict)).lower()} reason={verdict.reason!r}")
        if not verdict:
            if len(c) >= 2:
                dist, a, b = closest_pair(c)
                if dist < args.d:
                    print(f"  closest pair at distance {dist}: {a} {b}")
            status = EXIT_FAIL
    return status


def _verify_diameter_perfect(paths, args) -> int:
    if len(paths) != 2:
        print("error: diameter-perfect needs CODE_FILE ANTICODE_FILE", file=sys.stderr)
        return EXIT_INPUT
    c = read_ternary(paths[0])
    a_code = read_ternary(paths[1])
    a = diameter.Anticode(a_code.n, a_code.words)
    verdict = diameter.is_diameter_perfect(c, a, args.d)
    print(f"code={paths[0]} anticode={paths[1]} kind=diameter-perfect d={args.d} "
          f"anticode_diameter={a.diameter} ok={str(bool(verdict)).lower()} reason={verdict.reason!r}")
    return EXIT_OK if verdict else EXIT_FAIL


def cmd_verify(args) -> int:
    handlers = {"binary": _verify_binary, "ternary": _verify_ternary,
                "diameter-perfect": _verify_diameter_perfect}
    if args.kind in ("ternary", "diameter-perfect") and args.d is None:
        print("error: --d is required for this kind", file=sys.stderr)
        return EXIT_INPUT
    try:
        return handlers[args.kind](args.paths, args)
    except (OSError, CodeFormatError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


# -- sts-check ------------------------------------------------------------

def cmd_sts_check(args) -> int:
    try:
        n, star, words = read_solution(args.file)
    except (OSError, CodeFormatError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if args.e is not None:
        star = args.e - 1
    if star is None or not 0 <= star < n:
        print("error: give e^i with --e or an e= header", file=sys.stderr)
        return EXIT_INPUT
    if any(not w.bit_count() & 1 for w in words):
        print("error: solution words must have odd weight", file=sys.stderr)
        return EXIT_INPUT
    kind = None
    if args.stage != "auto":
        words = stage_restriction(words, star, args.stage)
        kind = "STS" if args.stage == "s2" else "SQS"
    report = steiner_from_solution(words, star, n, kind)
    print(report.summary())
    return EXIT_OK if report else EXIT_FAIL


# -- export ---------------------------------------------------------------

def cmd_export(args) -> int:
    if args.what == "hamming":
        export_codes([extended_hamming(args.m)], args.out)
    else:
        ball = diameter.anticode_ball2(args.n)
        write_ternary(TernaryCode(args.n, ball.words), args.out)
    print(f"wrote {args.out}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="starcodes", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="count", default=0)
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("search8", help="find an (8,5,7;16) ternary code and certify it")
    s.add_argument("--budget", type=int, default=None, help="node budget per exact-cover search")
    s.add_argument("--out", help="write the code here (ternary format)")
    s.add_argument("--ball-out", help="write anticode_ball2(8) here")
    s.add_argument("--solution-out", help="write the odd half (the exact-cover solution) here")
    s.set_defaults(func=cmd_search8)

    s = sub.add_parser("pipeline16", help="staged search over a list of (16,2048,4) codes")
    s.add_argument("--codes", required=True, help="code list file")
    s.add_argument("--format", default="native", help="code list format (default native)")
    s.add_argument("--range", help="1-based inclusive A..B (default all)")
    s.add_argument("--stage", choices=("s2", "s3"), default="s3")
    s.add_argument("--budget", type=int, default=None, help="node budget per exact-cover search")
    s.add_argument("--jobs", type=int, default=1, help="worker processes")
    s.add_argument("--out", help="append-safe report file (default stdout)")
    s.add_argument("--resume", action="store_true", help="skip codes already in --out")
    s.add_argument("--no-reduce", action="store_true", help="try every e^i, not orbit representatives")
    s.add_argument("--no-timing", action="store_true", help="write seconds=- for byte-stable reports")
    s.add_argument("--solutions-dir", help="write every stage solution found to this directory")
    s.set_defaults(func=cmd_pipeline16)

    s = sub.add_parser("verify", help="check code files")
    s.add_argument("--kind", required=True, choices=("binary", "ternary", "diameter-perfect"))
    s.add_argument("--format", default="native", help="binary code list format")
    s.add_argument("--d", type=int, help="required minimum distance (ternary, diameter-perfect)")
    s.add_argument("--n", type=int)
    s.add_argument("--w", type=int)
    s.add_argument("--M", type=int)
    s.add_argument("paths", nargs="+")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("sts-check", help="read a Steiner system off a stage solution")
    s.add_argument("file", help="solution file (n=, e= header then binary words)")
    s.add_argument("--e", type=int, help="1-based index i of e^i (overrides the header)")
    s.add_argument("--stage", choices=("auto", "s2", "s3"), default="auto",
                   help="restrict a larger solution to the S″ or S‴ cover first")
    s.set_defaults(func=cmd_sts_check)

    s = sub.add_parser("export", help="write reference inputs")
    s.add_argument("what", choices=("hamming", "ball"))
    s.add_argument("--m", type=int, default=4, help="hamming: length 2^m")
    s.add_argument("--n", type=int, default=8, help="ball: length n")
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_export)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    level = logging.WARNING - 10 * min(args.verbose, 2)
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
