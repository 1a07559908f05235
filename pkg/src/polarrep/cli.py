"""Command line: ``polarrep design | simulate | verify``.

Exit status 0 on success, 1 on usage or input errors, 2 when verification
fails. Diagnostics go to stderr.
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

from .channel import ebn0_to_esn0
from .design import SearchParams, design_concatenated, select_information_set
from .reliability import DesignChannel, UnsupportedMethodError, awgn_reliability_ga, genie_mc_reliability
from .sim import DECODERS, SweepConfig, results_csv, simulate
from .specio import SpecFormatError, load_spec, save_spec
from .transform import PolarParams
from .verify import SUITES, run_suites

EXIT_OK, EXIT_USAGE, EXIT_VERIFY = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _log(msg: str) -> None:
    print(msg, file=sys.stderr, flush=True)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="polarrep", description="Polar codes with outer repetition blocks.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    d = sub.add_parser("design", help="construct a code and write its JSON spec")
    d.add_argument("--n", type=int, required=True, help="block length N (power of two)")
    d.add_argument("--rate", type=float, required=True)
    snr = d.add_mutually_exclusive_group(required=True)
    snr.add_argument("--design-esn0-db", type=float)
    snr.add_argument("--design-ebn0-db", type=float)
    d.add_argument("--method", choices=("ga", "genie"), default="ga")
    d.add_argument("--concatenated", choices=("on", "off"), default="on")
    d.add_argument("--delta-max", type=int, default=SearchParams.delta_max)
    d.add_argument("--block-len-max", type=int, default=SearchParams.block_len_max)
    d.add_argument("--candidate-window", type=int, default=SearchParams.candidate_window)
    d.add_argument("--genie-trials", type=int, default=100_000)
    d.add_argument("--seed", type=int, default=0, help="seed for the genie Monte Carlo")
    d.add_argument("--out", required=True)

    s = sub.add_parser("simulate", help="Monte Carlo WER sweep, CSV output")
    s.add_argument("--config", help="JSON file with SweepConfig fields; flags override it")
    s.add_argument("--spec", dest="code_spec_path")
    s.add_argument("--decoder", choices=DECODERS)
    s.add_argument("--list-size", type=int)
    s.add_argument("--snr", dest="snr_points", type=float, nargs="+", metavar="EBN0_DB")
    s.add_argument("--snr-range", type=float, nargs=3, metavar=("START", "STOP", "STEP"),
                   help="inclusive Eb/N0 grid")
    s.add_argument("--min-word-errors", type=int)
    s.add_argument("--max-trials", dest="max_trials_per_point", type=int)
    s.add_argument("--seed", dest="master_seed", type=int)
    s.add_argument("--workers", type=int)
    s.add_argument("--batch-size", type=int)
    s.add_argument("--min-sum", action="store_true", default=None)
    s.add_argument("--out", default="-", help="CSV path, '-' for stdout")

    v = sub.add_parser("verify", help="run the built-in oracle suites")
    v.add_argument("--suite", choices=("all",) + SUITES + ("spec",), default="all")
    v.add_argument("--spec", help="code spec file to validate (adds the spec suite)")
    v.add_argument("--n", type=int, default=16, help="block length for the bec suite")
    v.add_argument("--trials", type=int)
    v.add_argument("--seed", type=int, default=0)
    return p


def _snr_grid(start: float, stop: float, step: float) -> list[float]:
    if step <= 0.0 or stop < start:
        raise UsageError("--snr-range needs START <= STOP and STEP > 0")
    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    return [round(start + k * step, 10) for k in range(count)]


def cmd_design(args) -> int:
    try:
        params = PolarParams.from_length(args.n)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    if not 0.0 < args.rate <= 1.0:
        raise UsageError("--rate must lie in (0, 1]")
    k_real = args.rate * params.N
    K = round(k_real)
    if abs(k_real - K) > 1e-9 or K < 1:
        raise UsageError(f"rate * N = {k_real} is not a positive integer")
    es = args.design_esn0_db if args.design_esn0_db is not None else ebn0_to_esn0(args.design_ebn0_db, K / params.N)
    if args.method == "ga":
        profile = awgn_reliability_ga(params, es)
    else:
        profile = genie_mc_reliability(params, DesignChannel.bi_awgn(es), args.genie_trials, args.seed)
    if args.concatenated == "off":
        spec = select_information_set(profile, K)
    else:
        try:
            search = SearchParams(args.delta_max, args.block_len_max, args.candidate_window)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
        try:
            spec = design_concatenated(profile, K, search)
        except UnsupportedMethodError as exc:
            raise UsageError(f"{exc}; concatenated design needs --method ga") from exc
    save_spec(spec, args.out)
    blocks = getattr(spec, "blocks", ())
    _log(f"wrote {args.out}: N={params.N} K={K} Es/N0={es:.4f} dB, {len(blocks)} repetition blocks")
    return EXIT_OK


def cmd_simulate(args) -> int:
    fields = {k: getattr(args, k) for k in (
        "code_spec_path", "decoder", "list_size", "snr_points", "min_word_errors",
        "max_trials_per_point", "master_seed", "workers", "batch_size", "min_sum")}
    if args.snr_range is not None:
        if fields["snr_points"] is not None:
            raise UsageError("give either --snr or --snr-range")
        fields["snr_points"] = _snr_grid(*args.snr_range)
    try:
        if args.config:
            config = SweepConfig.from_json(args.config, **fields)
        else:
            missing = [f"--{k}" for k in ("decoder",) if fields[k] is None]
            if fields["code_spec_path"] is None:
                missing.append("--spec")
            if fields["snr_points"] is None:
                missing.append("--snr or --snr-range")
            if missing:
                raise UsageError("missing " + ", ".join(missing))
            config = SweepConfig(**{k: v for k, v in fields.items() if v is not None})
    except (TypeError, ValueError, OSError) as exc:
        raise UsageError(f"invalid sweep configuration: {exc}") from exc
    try:
        spec = load_spec(config.code_spec_path)
    except SpecFormatError as exc:
        raise UsageError(str(exc)) from exc
    try:
        results = simulate(config, spec)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    for r in results:
        _log(f"Eb/N0={r.eb_n0_db:g} dB: {r.word_errors}/{r.trials} word errors, WER={r.wer:.3e} ({r.stop_reason})")
    text = results_csv(results, config)
    if args.out == "-":
        sys.stdout.write(text)
    else:
        Path(args.out).write_text(text)
    return EXIT_OK


def cmd_verify(args) -> int:
    if args.suite == "spec" and not args.spec:
        raise UsageError("--suite spec needs --spec FILE")
    if args.suite == "all":
        names = SUITES + (("spec",) if args.spec else ())
    else:
        names = (args.suite,)
    try:
        n = PolarParams.from_length(args.n).n
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    failed = 0
    for r in run_suites(names, n=n, trials=args.trials, seed=args.seed, spec_path=args.spec):
        print(f"{'PASS' if r.passed else 'FAIL'} {r.name}: {r.detail}", flush=True)
        failed += not r.passed
    return EXIT_VERIFY if failed else EXIT_OK


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:  # --help or a usage error already reported
        return int(exc.code or 0)
    handler = {"design": cmd_design, "simulate": cmd_simulate, "verify": cmd_verify}[args.command]
    try:
        return handler(args)
    except UsageError as exc:
        _log(f"polarrep {args.command}: error: {exc}")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
