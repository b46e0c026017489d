"""``matchshap`` command line.

Exit codes: 0 ok, 1 verification failure, 2 usage or parse error,
3 capability (instance too large / method not applicable).
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from fractions import Fraction

from . import config, exact, fpras, reduction, structured
from .graph import Coalition, GraphParseError, WeightedGraph, parse_graph
from .matching import coalition_value

EXIT_OK, EXIT_VERIFY, EXIT_USAGE, EXIT_CAPABILITY = 0, 1, 2, 3


class CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _read_input(path: str) -> bytes:
    if path == "-":
        return sys.stdin.buffer.read()
    try:
        with open(path, "rb") as fh:
            return fh.read()
    except OSError as exc:
        raise CliError(EXIT_USAGE, f"cannot read {path}: {exc.strerror}") from None


def _load(path: str) -> tuple[WeightedGraph, str]:
    data = _read_input(path)
    try:
        g = parse_graph(data)
    except GraphParseError as exc:
        raise CliError(EXIT_USAGE, f"{path}: {exc}") from None
    return g, hashlib.sha256(data).hexdigest()


def _fraction_arg(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


def _seed_arg(text: str) -> int:
    try:
        value = int(text, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"seed must be an integer: {text!r}") from None
    if not 0 <= value < 1 << 64:
        raise argparse.ArgumentTypeError("seed must fit in 64 bits")
    return value


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer: {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return value


def _check_player(g: WeightedGraph, player: int | None) -> None:
    if player is not None and not 0 <= player < g.n:
        raise CliError(EXIT_USAGE, f"player {player} out of range 0..{g.n - 1}")


def _emit(report: dict, lines: list[str], as_json: bool) -> None:
    if as_json:
        sys.stdout.write(json.dumps(report, indent=2, sort_keys=True) + "\n")
    else:
        sys.stdout.write("".join(line + "\n" for line in lines))


_METHODS = {
    "bruteforce": exact.shapley_brute_force,
    "degree2": structured.shapley_degree_two,
    "modular": structured.shapley_modular,
    "components": lambda g: exact.shapley_by_components(g, exact.shapley_brute_force),
    "auto": exact.shapley_auto,
}


def cmd_exact(args) -> tuple[dict, list[str]]:
    g, digest = _load(args.graph)
    _check_player(g, args.player)
    try:
        vec = _METHODS[args.method](g)
    except (exact.InstanceTooLarge, exact.MethodNotApplicable) as exc:
        msg = str(exc)
        if "approx" not in msg:
            msg += "; for large or unstructured graphs use `matchshap approx`"
        raise CliError(EXIT_CAPABILITY, msg) from None
    total = coalition_value(g, Coalition.full(g.n))
    if sum(vec.values, Fraction(0)) != total:
        raise CliError(EXIT_VERIFY, f"efficiency violated: sum != v(N) = {total}")
    methods = vec.methods or (args.method,) * g.n
    players = range(g.n) if args.player is None else [args.player]
    rows = [(i, vec[i], methods[i]) for i in players]
    lines = [f"{i}\t{val}\t{m}" for i, val, m in rows]
    report = {
        "command": "exact",
        "input_sha256": digest,
        "results": [{"vertex": i, "value": str(val), "method": m} for i, val, m in rows],
        "value_of_grand_coalition": str(total),
    }
    return report, lines


def cmd_approx(args) -> tuple[dict, list[str]]:
    if args.eps <= 0:
        raise CliError(EXIT_USAGE, "--eps must be positive")
    if not 0 < args.delta < 1:
        raise CliError(EXIT_USAGE, "--delta must lie strictly between 0 and 1")
    g, digest = _load(args.graph)
    _check_player(g, args.player)
    players = None if args.player is None else [args.player]
    ests = fpras.approx_all(
        g, args.eps, args.delta, args.seed, args.threads, raw=args.raw, players=players
    )
    runs = fpras.amplification_runs(args.delta)
    mode = "raw" if args.raw else "normalized"
    lines = [f"# eps={args.eps} delta={args.delta} seed={args.seed} runs={runs} mode={mode}"]
    lines += [f"{e.player}\t{e.decimal()}\t{e.samples_used}" for e in ests]
    report = {
        "command": "approx",
        "input_sha256": digest,
        "seed": args.seed,
        "epsilon": str(args.eps),
        "delta": str(args.delta),
        "runs": runs,
        "mode": mode,
        "results": [
            {"vertex": e.player, "estimate": e.decimal(), "samples_used": e.samples_used}
            for e in ests
        ],
    }
    return report, lines


def cmd_count_matchable(args) -> tuple[dict, list[str]]:
    g, digest = _load(args.graph)
    if g.n > config.COUNT_MAX_N:
        raise CliError(
            EXIT_CAPABILITY,
            f"exhaustive counting is limited to {config.COUNT_MAX_N} vertices, got {g.n}",
        )
    report = {"command": "count-matchable", "input_sha256": digest}
    if args.all:
        alpha = reduction.matchable_counts(g).alpha
        report["alpha"] = list(alpha)
        return report, [" ".join(map(str, alpha))]
    k = args.k
    if not 0 <= k <= g.n:
        raise CliError(EXIT_USAGE, f"-k must lie in 0..{g.n}")
    if k % 2:
        print(f"note: k={k} is odd; no odd vertex set is perfectly matchable", file=sys.stderr)
    value = reduction.count_matchable_subsets(g, k)
    report["k"] = k
    report["alpha_k"] = value
    return report, [str(value)]


def cmd_verify_reduction(args) -> tuple[dict, list[str]]:
    g, digest = _load(args.graph)
    if not g.is_unweighted:
        raise CliError(EXIT_USAGE, "verify-reduction needs an unweighted graph")
    if g.n > config.REDUCTION_MAX_N:
        raise CliError(
            EXIT_CAPABILITY,
            f"verify-reduction is limited to {config.REDUCTION_MAX_N} vertices, got {g.n}",
        )
    rep = reduction.verify_reduction(g, threads=args.threads)
    lines = ["k\trecovered\tcounted\tstatus"]
    for k, counted in enumerate(rep.counted):
        got = rep.recovered[k] if rep.recovered else "-"
        lines.append(f"{k}\t{got}\t{counted}\t{'ok' if got == counted else 'MISMATCH'}")
    if rep.error:
        lines.append(f"# error: {rep.error}")
    lines.append("PASS" if rep.ok else "FAIL")
    report = {
        "command": "verify-reduction",
        "input_sha256": digest,
        "raw_tail_values": [str(x) for x in rep.raw_values],
        "recovered": list(rep.recovered),
        "counted": list(rep.counted),
        "pass": rep.ok,
        "error": rep.error,
    }
    return report, lines


def cmd_bench(args) -> tuple[dict, list[str]]:
    from .bench import run_benchmark

    rows = run_benchmark(args.n, args.repeat, args.seed)
    lines = ["kernel\tbackend\tn\tseconds"]
    lines += [f"{r['kernel']}\t{r['backend']}\t{r['n']}\t{r['seconds']:.6f}" for r in rows]
    return {"command": "bench", "results": rows}, lines


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="matchshap", description="Shapley values of matching games on weighted graphs."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, graph=True):
        if graph:
            p.add_argument("graph", help="graph file in edge-list format, or - for stdin")
        p.add_argument("--json", action="store_true", help="emit the full run report as JSON")
        p.add_argument("--threads", type=_positive_int, default=1, help="worker threads")

    p = sub.add_parser("exact", help="exact Shapley values")
    common(p)
    p.add_argument("--player", type=int)
    p.add_argument("--method", choices=sorted(_METHODS), default="auto")
    p.set_defaults(func=cmd_exact)

    p = sub.add_parser("approx", help="sampled Shapley values (FPRAS)")
    common(p)
    p.add_argument("--eps", type=_fraction_arg, required=True)
    p.add_argument("--delta", type=_fraction_arg, default=Fraction(1, 4))
    p.add_argument("--seed", type=_seed_arg, default=0)
    p.add_argument("--player", type=int)
    p.add_argument("--raw", action="store_true", help="report n! times the Shapley value")
    p.set_defaults(func=cmd_approx)

    p = sub.add_parser("count-matchable", help="count perfectly matchable vertex subsets")
    common(p)
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("-k", type=int)
    group.add_argument("--all", action="store_true")
    p.set_defaults(func=cmd_count_matchable)

    p = sub.add_parser("verify-reduction", help="recover subset counts from Shapley values")
    common(p)
    p.set_defaults(func=cmd_verify_reduction)

    p = sub.add_parser("bench", help="time compiled against fallback kernels")
    common(p, graph=False)
    p.add_argument("--n", type=_positive_int, default=16)
    p.add_argument("--repeat", type=_positive_int, default=3)
    p.add_argument("--seed", type=_seed_arg, default=0)
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    start = time.perf_counter()
    try:
        report, lines = args.func(args)
    except CliError as exc:
        print(f"matchshap: {exc}", file=sys.stderr)
        return exc.code
    except ValueError as exc:
        print(f"matchshap: {exc}", file=sys.stderr)
        return EXIT_USAGE
    report["timing_ms"] = round((time.perf_counter() - start) * 1000, 3)
    _emit(report, lines, args.json)
    if report.get("pass") is False:
        return EXIT_VERIFY
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
