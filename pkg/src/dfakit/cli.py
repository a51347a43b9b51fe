"""Command-line front end.

Exit codes: 0 success, 1 validation or property failure, 2 I/O or parse error.
"""
from __future__ import annotations

import argparse
import json
import os
import sys

from . import channel_file
from .channel import KINDS, ChannelError, random_channel, reduce_kraus, validate
from .channel_file import ChannelFileError
from .checks import action_residual, ensemble, run_checks
from .dfa import compute_algebras, inclusion_report
from .linalg import DEFAULT_RANK_RTOL, DEFAULT_SUBSPACE_TOL, RankPolicy

EXIT_OK, EXIT_FAIL, EXIT_IO = 0, 1, 2
SEED_ENV = "DFAKIT_SEED"
CHANNEL_TOL = 1e-10


class InputError(Exception):
    pass


def _eprint(*args):
    print(*args, file=sys.stderr)


def _load(path):
    try:
        return channel_file.read_channel(path)
    except (OSError, ChannelFileError, ValueError) as exc:
        raise InputError(f"cannot read channel file {path}: {exc}") from exc


def _write(ch, path):
    try:
        channel_file.write_channel(ch, path)
    except OSError as exc:
        raise InputError(f"cannot write {path}: {exc}") from exc


def _seed(text: str) -> int:
    value = int(text)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must be a 64-bit unsigned integer")
    return value


def _default_seed(fallback: int) -> int:
    env = os.environ.get(SEED_ENV)
    if env is None:
        return fallback
    try:
        return _seed(env)
    except (ValueError, argparse.ArgumentTypeError) as exc:
        raise InputError(f"{SEED_ENV}={env!r} is not a valid seed") from exc


def _int_list(text: str) -> list[int]:
    try:
        values = [int(t) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc
    if not values or any(v < 1 for v in values):
        raise argparse.ArgumentTypeError("expected a comma-separated list of positive integers")
    return values


def _kind_list(text: str) -> list[str]:
    kinds = [t.strip() for t in text.split(",") if t.strip()]
    bad = [k for k in kinds if k not in KINDS]
    if not kinds or bad:
        raise argparse.ArgumentTypeError(f"kinds must be drawn from {','.join(KINDS)}")
    return kinds


def cmd_validate(args) -> int:
    ch = _load(args.path)
    flags = validate(ch, args.tol)
    result = {"dim": ch.dim, "m": ch.m, "unital": flags.unital,
              "trace_preserving": flags.trace_preserving,
              "unital_residual": flags.unital_residual, "tp_residual": flags.tp_residual}
    if args.json:
        print(json.dumps(result, indent=2))
    else:
        print(f"dim={ch.dim} m={ch.m}")
        print(f"unital={flags.unital} residual={flags.unital_residual:.3e}")
        print(f"trace_preserving={flags.trace_preserving} residual={flags.tp_residual:.3e}")
    return EXIT_OK if flags.unital and flags.trace_preserving else EXIT_FAIL


def cmd_report(args) -> int:
    ch = _load(args.path)
    policy = RankPolicy(args.rank_rtol)
    try:
        algebras = compute_algebras(ch, policy)
        report = inclusion_report(ch, policy, args.tol, CHANNEL_TOL, algebras=algebras)
    except ChannelError as exc:
        _eprint(f"refused: {exc}")
        return EXIT_FAIL
    doc = {"dim": ch.dim, "m": ch.m, **report.to_dict()}
    if args.emit_basis:
        doc["dfa_basis"] = [channel_file.matrix_to_json(b) for b in algebras.dfa.basis]
    print(json.dumps(doc, indent=2))
    _eprint(f"dims A'={report.dim_A_comm} M={report.dim_fixed} N={report.dim_dfa} "
            f"B'={report.dim_B_comm} chain_ok={report.chain_ok} "
            f"oracle_distance={report.oracle_distance:.2e} luders_ok={report.luders_ok}")
    return EXIT_OK


def cmd_random(args) -> int:
    seed = args.seed if args.seed is not None else _default_seed(0)
    try:
        ch = random_channel(args.kind, args.n, args.k, seed)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    if args.out:
        _write(ch, args.out)
    else:
        sys.stdout.write(channel_file.dumps(ch))
    return EXIT_OK


def cmd_reduce(args) -> int:
    ch = _load(args.path)
    try:
        red = reduce_kraus(ch, RankPolicy(args.rank_rtol))
    except ChannelError as exc:
        _eprint(f"refused: {exc}")
        return EXIT_FAIL
    residual = action_residual(red.reduced, ch)
    result = {"m": ch.m, "l": red.reduced.m, "action_residual": residual}
    if args.out:
        _write(red.reduced, args.out)
        out = sys.stdout
    else:
        sys.stdout.write(channel_file.dumps(red.reduced))
        out = sys.stderr
    if args.json:
        print(json.dumps(result), file=out)
    else:
        print(f"m={ch.m} l={red.reduced.m} action_residual={residual:.3e}", file=out)
    return EXIT_OK


def cmd_check(args) -> int:
    seed = args.seed if args.seed is not None else _default_seed(1)
    specs = ensemble(args.kinds, args.dims, args.counts, args.trials, seed)
    summary = run_checks(specs, args.tol, RankPolicy(args.rank_rtol), jobs=args.jobs)
    if args.json:
        print(json.dumps({"ok": summary.ok, "channels": summary.channels, "seed": seed,
                          "thresholds": summary.thresholds, "max_values": summary.max_values,
                          "dims": summary.dims, "failures": summary.failures}, indent=2))
    else:
        print(f"checked {summary.channels} channels (seed {seed})")
        for name in summary.thresholds:
            if name not in summary.max_values:
                continue
            value, limit = summary.max_values[name], summary.thresholds[name]
            status = "PASS" if value <= limit else "FAIL"
            print(f"{status} {name:<26} max={value:.3e} limit={limit:.1e}")
    if summary.failures:
        first = summary.failures[0]
        _eprint(f"first failure: {first['property']} on {first['kind']} n={first['n']} "
                f"k={first['k']} #{first['index']} (value {first['value']:.3e})")
        return EXIT_FAIL
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dfakit", description="Decoherence-free algebras of unital quantum channels.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, tol=None, tol_help=None, rank=True):
        if tol is not None:
            p.add_argument("--tol", type=float, default=tol, help=tol_help)
        if rank:
            p.add_argument("--rank-rtol", type=float, default=DEFAULT_RANK_RTOL,
                           help="relative singular-value cut for rank decisions")
        p.add_argument("--json", action="store_true", help="machine-readable output")

    p = sub.add_parser("validate", help="check unitality and trace preservation")
    p.add_argument("path")
    common(p, CHANNEL_TOL, "threshold on ||sum A^*A - 1|| and ||sum AA^* - 1||", rank=False)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("report", help="inclusion-chain report as JSON")
    p.add_argument("path")
    p.add_argument("--emit-basis", action="store_true", help="include the N_phi basis")
    common(p, DEFAULT_SUBSPACE_TOL, "subspace comparison threshold")
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("random", help="write a random channel file")
    p.add_argument("kind", choices=KINDS)
    p.add_argument("n", type=int)
    p.add_argument("k", type=int)
    p.add_argument("--seed", type=_seed, default=None)
    p.add_argument("--out")
    p.set_defaults(func=cmd_random)

    p = sub.add_parser("reduce", help="drop linearly dependent Kraus operators")
    p.add_argument("path")
    p.add_argument("--out")
    common(p)
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("check", help="run the property suite on random ensembles")
    p.add_argument("--kinds", type=_kind_list, default=list(KINDS))
    p.add_argument("--dims", type=_int_list, default=[2, 3, 4])
    p.add_argument("--counts", type=_int_list, default=[1, 2, 3, 4],
                   help="Kraus counts k, cycled over the channels of each group")
    p.add_argument("--trials", type=int, default=25, help="channels per (kind, n)")
    p.add_argument("--seed", type=_seed, default=None)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--tol", type=float, default=None,
                   help="override every per-property threshold")
    p.add_argument("--rank-rtol", type=float, default=DEFAULT_RANK_RTOL)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_check)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        _eprint(f"error: {exc}")
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
