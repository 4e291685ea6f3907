"""Command-line front end.

    delaycrn analyze  NET [--out FILE]
    delaycrn certify  NET [--semilocking-cap N] [--class-cap N] [--out FILE]
    delaycrn simulate NET [--step H] [--t-end T] [--history SPEC] [--conv-eps E]
                          [--conv-window W] [--downsample K] [--out FILE]
    delaycrn reduce   NET --keep X1,X2 [--out FILE]

Exit status: 0 success, 1 analysis/input error, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import List, Optional, Sequence

from . import boundary
from .network import NetworkError, parse_network
from .reduced import format_reduced, reduce
from .sim import (
    HistoryFunction,
    SimConfig,
    SimulationError,
    read_history_csv,
    simulate,
    stats_json,
    trajectory_csv,
    trajectory_stats,
)
from .structure import (
    complex_balanced_eligibility,
    deficiency,
    is_weakly_reversible,
    linkage_classes,
    stoichiometry_decomposition,
)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(2, f"{self.prog}: error: {message}\n")


def _build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="delaycrn", description="Persistence analysis of delayed mass-action networks.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("analyze", help="structural summary as JSON")
    p.add_argument("network")
    p.add_argument("--out")

    p = sub.add_parser("certify", help="persistence certificate as JSON")
    p.add_argument("network")
    p.add_argument("--semilocking-cap", type=int, default=boundary.DEFAULT_SEMILOCKING_CAP)
    p.add_argument("--class-cap", type=int, default=boundary.DEFAULT_CLASS_CAP)
    p.add_argument("--out")

    p = sub.add_parser("simulate", help="trajectory CSV plus stats JSON")
    p.add_argument("network")
    p.add_argument("--step", type=float, help="step size (default min(0.01, min positive delay / 10))")
    p.add_argument("--t-end", type=float, default=50.0)
    p.add_argument("--history", help="comma-separated constant history, or a CSV file (default: all ones)")
    p.add_argument("--conv-eps", type=float, default=1e-6)
    p.add_argument("--conv-window", type=float, default=5.0)
    p.add_argument("--downsample", type=int, default=1, help="write every K-th grid row")
    p.add_argument("--out", help="CSV path; stats JSON then goes to stdout (else CSV to stdout, stats to stderr)")

    p = sub.add_parser("reduce", help="text dump of the reduced network")
    p.add_argument("network")
    p.add_argument("--keep", required=True, help="comma-separated species to keep")
    p.add_argument("--out")
    return parser


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def analyze_dict(net) -> dict:
    dec = stoichiometry_decomposition(net)
    links = linkage_classes(net)
    return {
        "species": list(net.names),
        "dim_s": dec.dim_s,
        "s_basis": [list(v) for v in dec.s_basis],
        "sperp_basis": [list(v) for v in dec.sperp_basis],
        "linkage_classes": [[links.complexes[c].format(net.names) for c in cls] for cls in links.classes],
        "deficiency": deficiency(net),
        "weakly_reversible": is_weakly_reversible(net),
        "eligibility": complex_balanced_eligibility(net),
    }


def _history(spec: Optional[str], net) -> HistoryFunction:
    if spec is None:
        return HistoryFunction.constant([1.0] * net.n)
    if os.path.exists(spec):
        with open(spec, encoding="utf-8") as fh:
            return read_history_csv(fh.read(), net)
    try:
        values = [float(v) for v in spec.split(",")]
    except ValueError:
        raise ValueError(f"--history must be a comma list of numbers or an existing CSV file, got {spec!r}") from None
    if len(values) != net.n:
        raise ValueError(f"--history has {len(values)} values, network has {net.n} species")
    return HistoryFunction.constant(values)


def _run(args) -> None:
    with open(args.network, encoding="utf-8") as fh:
        net = parse_network(fh.read())

    if args.command == "analyze":
        _emit(json.dumps(analyze_dict(net), indent=2) + "\n", args.out)
    elif args.command == "certify":
        cert = boundary.certify_persistence(net, args.semilocking_cap, args.class_cap)
        _emit(boundary.certificate_json(cert), args.out)
    elif args.command == "simulate":
        overrides = dict(t_end=args.t_end, convergence_eps=args.conv_eps, convergence_window=args.conv_window)
        if args.step is not None:
            overrides["step_h"] = args.step
        cfg = SimConfig.for_network(net, **overrides)
        traj = simulate(net, _history(args.history, net), cfg)
        stats = stats_json(trajectory_stats(traj, cfg), net.names)
        csv_text = trajectory_csv(traj, args.downsample)
        if args.out:
            _emit(csv_text, args.out)
            sys.stdout.write(stats)
        else:
            sys.stdout.write(csv_text)
            sys.stderr.write(stats)
    elif args.command == "reduce":
        rn = reduce(net, [s.strip() for s in args.keep.split(",") if s.strip()])
        _emit(format_reduced(rn), args.out)


def run_cli(argv: Optional[Sequence[str]] = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        _run(args)
    except FileNotFoundError as exc:
        print(f"delaycrn: file not found: {exc.filename}", file=sys.stderr)
        return 1
    except (NetworkError, SimulationError, ValueError) as exc:
        print(f"delaycrn: {exc}", file=sys.stderr)
        return 1
    return 0


def main(argv: Optional[List[str]] = None) -> None:
    sys.exit(run_cli(argv))


if __name__ == "__main__":
    main()
