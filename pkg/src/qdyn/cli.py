"""Command-line interface.

Subcommands: fixed-points, classify, simulate, basin, verify.  Output is
JSON or CSV on stdout with shortest round-trip float formatting, so runs
with identical configuration are byte-identical.  Exit codes: 0 success,
1 verification failure, 2 usage or precondition error.  The QDYN_LOG
environment variable sets diagnostic verbosity on stderr and never affects
computed numbers.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import os
import sys
from dataclasses import dataclass, replace

import numpy as np

from .dynamics import DEFAULT_BUDGET, EPS_CONV, R_ESCAPE, basin_boundary, classify_fate, iterate
from .errors import QdynError
from .fixed_points import FixedPoint, SupportMask, enumerate_fixed_points, fixed_point_for_support
from .model import Rates
from .stability import TAU_UNIT, classify, spectrum_at
from .verify import verification_sweep

DEFAULT_BISECT_TOL = 1e-8


@dataclass(frozen=True)
class RunConfig:
    theta: tuple[float, ...] | None
    seed: int = 0
    tau_unit: float = TAU_UNIT
    eps_conv: float = EPS_CONV
    r_escape: float = R_ESCAPE
    bisect_tol: float = DEFAULT_BISECT_TOL
    budget: int = DEFAULT_BUDGET
    output_format: str = "json"

    def __post_init__(self) -> None:
        if self.theta is not None and any(t <= 0.0 for t in self.theta):
            raise QdynError("all rates must be strictly positive")
        for name in ("tau_unit", "eps_conv", "r_escape", "bisect_tol"):
            if getattr(self, name) <= 0.0:
                raise QdynError(f"{name} must be positive")
        if self.budget < 1:
            raise QdynError("budget must be >= 1")
        if self.seed < 0:
            raise QdynError("seed must be a nonnegative integer")
        if self.output_format not in ("json", "csv"):
            raise QdynError(f"unknown format {self.output_format!r}")

    def rates(self) -> Rates:
        if self.theta is None:
            raise QdynError("--theta is required for this command")
        if len(self.theta) < 2:
            raise QdynError(f"n must be >= 2, got {len(self.theta)} rate(s)")
        return Rates(np.array(self.theta))


def _fmt(value: float) -> str:
    return repr(float(value))


def _parse_floats(text: str, flag: str) -> tuple[float, ...]:
    try:
        return tuple(float(part) for part in text.split(","))
    except ValueError as exc:
        raise QdynError(f"{flag} expects comma-separated decimals, got {text!r}") from exc


def _parse_range(text: str) -> np.ndarray:
    parts = text.split(":")
    if len(parts) != 3:
        raise QdynError(f"--x1-range expects lo:hi:count, got {text!r}")
    try:
        lo, hi, count = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as exc:
        raise QdynError(f"--x1-range expects lo:hi:count, got {text!r}") from exc
    if count < 1:
        raise QdynError("--x1-range count must be >= 1")
    return np.linspace(lo, hi, count)


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    tol = getattr(args, "tol", None)
    budget = getattr(args, "budget", None)
    cfg = RunConfig(
        theta=_parse_floats(args.theta, "--theta") if getattr(args, "theta", None) else None,
        seed=getattr(args, "seed", 0) or 0,
        tau_unit=tol if args.command in ("fixed-points", "classify") and tol is not None else TAU_UNIT,
        bisect_tol=tol if args.command == "basin" and tol is not None else DEFAULT_BISECT_TOL,
        budget=budget if budget is not None else DEFAULT_BUDGET,
        output_format=getattr(args, "format", None) or ("csv" if args.command in ("simulate", "basin") else "json"),
    )
    if getattr(args, "config", None):
        with open(args.config, encoding="utf-8") as fh:
            overrides = json.load(fh)
        known = {"theta", "seed", "tau_unit", "eps_conv", "r_escape", "bisect_tol", "budget", "format"}
        unknown = set(overrides) - known
        if unknown:
            raise QdynError(f"unknown config keys: {sorted(unknown)}")
        if "theta" in overrides:
            overrides["theta"] = tuple(float(t) for t in overrides["theta"])
        if "format" in overrides:
            overrides["output_format"] = str(overrides.pop("format"))
        cfg = replace(cfg, **overrides)
    return cfg


def _point_record(rates: Rates, index: int, point: FixedPoint, tau_unit: float) -> dict:
    spectrum = spectrum_at(rates, point)
    cls = classify(spectrum, tau_unit)
    return {
        "mask": point.support.mask_int,
        "support": list(point.support.bits()),
        "coords": [float(c) for c in point.coords],
        "feasible": point.feasible,
        "residual": point.residual,
        "eigenvalues": [[float(e.real), float(e.imag)] for e in spectrum],
        "class": cls.tag.value,
        "inside": cls.inside,
        "outside": cls.outside,
        "on_unit": cls.on_unit,
        "index": index,
    }


def _emit_point_records(rates: Rates, records: list[dict], fmt: str) -> None:
    if fmt == "json":
        payload = {
            "theta": [float(t) for t in rates.values],
            "n": rates.n,
            "fixed_points": records,
        }
        print(json.dumps(payload, indent=2))
        return
    writer = csv.writer(sys.stdout, lineterminator="\n")
    header = ["mask", "support", "feasible", "residual"]
    header += [f"x{k + 1}" for k in range(rates.n)]
    for k in range(rates.n):
        header += [f"eig{k + 1}_re", f"eig{k + 1}_im"]
    header.append("class")
    writer.writerow(header)
    for rec in records:
        row = [rec["mask"], "".join(str(b) for b in rec["support"]), str(rec["feasible"]).lower(), _fmt(rec["residual"])]
        row += [_fmt(c) for c in rec["coords"]]
        for re_part, im_part in rec["eigenvalues"]:
            row += [_fmt(re_part), _fmt(im_part)]
        row.append(rec["class"])
        writer.writerow(row)


def cmd_fixed_points(cfg: RunConfig, args: argparse.Namespace) -> int:
    rates = cfg.rates()
    points = enumerate_fixed_points(rates)
    records = [_point_record(rates, i, p, cfg.tau_unit) for i, p in enumerate(points)]
    _emit_point_records(rates, records, cfg.output_format)
    return 0


def cmd_classify(cfg: RunConfig, args: argparse.Namespace) -> int:
    rates = cfg.rates()
    bits = [int(round(b)) for b in _parse_floats(args.support, "--support")]
    if len(bits) != rates.n or any(b not in (0, 1) for b in bits):
        raise QdynError(f"--support expects {rates.n} bits (0 or 1)")
    support = SupportMask.from_bits(bits)
    point = fixed_point_for_support(rates, support)
    record = _point_record(rates, support.mask_int, point, cfg.tau_unit)
    _emit_point_records(rates, [record], cfg.output_format)
    return 0


def _fate_dict(report) -> dict:
    return {
        "outcome": report.outcome.value,
        "steps_used": report.steps_used,
        "evidence": report.evidence.value,
        "fixed_point_index": report.fixed_point_index,
        "final_state": [float(c) for c in report.final_state],
    }


def cmd_simulate(cfg: RunConfig, args: argparse.Namespace) -> int:
    rates = cfg.rates()
    x0 = np.array(_parse_floats(args.x0, "--x0"))
    trajectory = iterate(rates, x0, args.steps, eps_conv=cfg.eps_conv, r_escape=cfg.r_escape)
    report = classify_fate(rates, x0, cfg.budget, eps_conv=cfg.eps_conv, r_escape=cfg.r_escape)
    if cfg.output_format == "json":
        payload = {
            "theta": [float(t) for t in rates.values],
            "trajectory": [[float(c) for c in row] for row in trajectory],
            "fate": _fate_dict(report),
        }
        print(json.dumps(payload, indent=2))
        return 0
    writer = csv.writer(sys.stdout, lineterminator="\n")
    writer.writerow(["step"] + [f"x{k + 1}" for k in range(rates.n)])
    for step, row in enumerate(trajectory):
        writer.writerow([step] + [_fmt(c) for c in row])
    fate = _fate_dict(report)
    print(
        "# fate={outcome} steps_used={steps_used} evidence={evidence} "
        "fixed_point_index={fixed_point_index} final={final}".format(
            outcome=fate["outcome"],
            steps_used=fate["steps_used"],
            evidence=fate["evidence"],
            fixed_point_index=fate["fixed_point_index"],
            final=",".join(_fmt(c) for c in fate["final_state"]),
        )
    )
    return 0


def cmd_basin(cfg: RunConfig, args: argparse.Namespace) -> int:
    rates = cfg.rates()
    if rates.n != 2:
        raise QdynError(f"basin requires n = 2, got n = {rates.n}")
    grid = _parse_range(args.x1_range)
    samples = basin_boundary(
        rates, grid, tol=cfg.bisect_tol, budget=cfg.budget,
        eps_conv=cfg.eps_conv, r_escape=cfg.r_escape,
    )
    if cfg.output_format == "json":
        payload = {
            "theta": [float(t) for t in rates.values],
            "tol": cfg.bisect_tol,
            "samples": [
                {
                    "x1": s.x1, "x2_low": s.x2_low, "x2_high": s.x2_high,
                    "width": s.width, "flagged": s.flagged, "note": s.note,
                }
                for s in samples
            ],
        }
        print(json.dumps(payload, indent=2))
        return 0
    writer = csv.writer(sys.stdout, lineterminator="\n")
    writer.writerow(["x1", "x2_low", "x2_high", "width", "flagged"])
    for s in samples:
        writer.writerow([_fmt(s.x1), _fmt(s.x2_low), _fmt(s.x2_high), _fmt(s.width), str(s.flagged).lower()])
    return 0


def cmd_verify(cfg: RunConfig, args: argparse.Namespace) -> int:
    if args.n < 2 or args.n > 12:
        raise QdynError(f"verify requires 2 <= n <= 12, got n = {args.n}")
    if args.trials < 1:
        raise QdynError("--trials must be >= 1")
    summary = verification_sweep(args.n, args.trials, cfg.seed)
    if getattr(args, "format", None) == "json":
        payload = {
            "n": summary.n,
            "trials": summary.trials,
            "seed": summary.seed,
            "passed": summary.passed,
            "checks": [
                {
                    "name": c.name, "worst": c.worst, "tolerance": c.tolerance,
                    "passed": c.passed, "failures": list(c.failures),
                }
                for c in summary.checks
            ],
        }
        print(json.dumps(payload, indent=2))
    else:
        for c in summary.checks:
            status = "PASS" if c.passed else "FAIL"
            print(f"{c.name}: max = {c.worst:.3e} (tol {c.tolerance:.1e}): {status}")
            for theta in c.failures:
                print(f"  offending theta: {theta}")
        verdict = "all checks passed" if summary.passed else "FAILURES above"
        print(f"verified {summary.trials} draws at n={summary.n}, seed={summary.seed}: {verdict}")
    return 0 if summary.passed else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qdyn", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser, theta: bool = True) -> None:
        if theta:
            p.add_argument("--theta", help="comma-separated positive rates, e.g. 0.4,0.6")
        p.add_argument("--config", help="JSON config file; its keys override flags")
        p.add_argument("--format", choices=("json", "csv"), help="output format")
        p.add_argument("--budget", type=int, help="iteration cap for fate classification")

    p = sub.add_parser("fixed-points", help="enumerate all 2^n fixed points with spectra and classes")
    add_common(p)
    p.add_argument("--tol", type=float, help="unit-circle tolerance for classification")
    p.set_defaults(handler=cmd_fixed_points)

    p = sub.add_parser("classify", help="one fixed point selected by its support bit list")
    add_common(p)
    p.add_argument("--support", required=True, help="bit list, e.g. 1,0,1")
    p.add_argument("--tol", type=float, help="unit-circle tolerance for classification")
    p.set_defaults(handler=cmd_classify)

    p = sub.add_parser("simulate", help="iterate from an initial state and report the fate")
    add_common(p)
    p.add_argument("--x0", required=True, help="comma-separated initial state")
    p.add_argument("--steps", type=int, default=100, help="trajectory length to emit")
    p.set_defaults(handler=cmd_simulate)

    p = sub.add_parser("basin", help="bisect the basin boundary on a grid of x1 values (n=2)")
    add_common(p)
    p.add_argument("--x1-range", dest="x1_range", required=True, help="lo:hi:count")
    p.add_argument("--tol", type=float, help="bisection bracket width")
    p.set_defaults(handler=cmd_basin)

    p = sub.add_parser("verify", help="randomized verification sweep over seeded rate draws")
    add_common(p, theta=False)
    p.add_argument("--n", type=int, required=True, help="dimension (2..12)")
    p.add_argument("--trials", type=int, default=100, help="number of rate draws")
    p.add_argument("--seed", type=int, default=0, help="generator seed")
    p.set_defaults(handler=cmd_verify)
    return parser


def _setup_logging() -> None:
    level_name = os.environ.get("QDYN_LOG", "").upper()
    if not level_name:
        return
    level = getattr(logging, level_name, logging.INFO)
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter("%(name)s %(levelname)s %(message)s"))
    logger = logging.getLogger("qdyn")
    logger.addHandler(handler)
    logger.setLevel(level)


def main(argv=None) -> int:
    _setup_logging()
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = _config_from_args(args)
        return args.handler(cfg, args)
    except QdynError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def entrypoint() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    entrypoint()
