"""``strand-id`` command line entry point."""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from pathlib import Path

from strand_id import harness
from strand_id.harness import ConfigError, SweepConfig
from strand_id.verify import CheckTally, run_peeling_checks, run_uniqueness_checks

EXIT_OK, EXIT_BOUND, EXIT_CONFIG = 0, 1, 2


def _simulate(cfg: SweepConfig, out: Path) -> int:
    rows = harness.run_sweep(cfg)
    harness.emit_csv(rows, out / "simulate.csv", harness.SIMULATE_COLUMNS)
    bad = harness.failed_checks(rows)
    for line in bad:
        print(f"bound check failed at {line}", file=sys.stderr)
    print(f"wrote {len(rows)} rows to {out / 'simulate.csv'}")
    return EXIT_BOUND if bad else EXIT_OK


def _thresholds(cfg: SweepConfig, out: Path) -> int:
    rows = harness.run_sweep(cfg)
    harness.emit_csv(rows, out / "thresholds.csv", harness.THRESHOLD_COLUMNS)
    cols = ["n", "N", "p", "eps1", "eps2", "L", "beta_th", "beta_0", "n_th", "n_0", "u_cycle", "u0", "u1", "u2", "region"]
    print(" ".join(cols))
    for r in rows:
        print(" ".join(format(r[c], ".6g") if isinstance(r[c], float) else str(r[c]) for c in cols))
    return EXIT_OK


def _figures(cfg: SweepConfig, out: Path) -> int:
    for name, (cols, rows) in harness.figure_rows().items():
        harness.emit_csv(rows, out / f"{name}.csv", cols)
        print(f"wrote {out / f'{name}.csv'}")
    return EXIT_OK


def _verify(cfg: SweepConfig, out: Path) -> int:
    tally = CheckTally()
    coverage = run_peeling_checks(tally) + run_uniqueness_checks(tally, sample=cfg.sample, seed=cfg.base_seed)
    rows = [
        {"check": k, "cases": tally.cases[k], "failures": tally.failures[k], "status": "pass" if tally.passed(k) else "fail"}
        for k in tally.names
    ]
    harness.emit_csv(rows, out / "verify.csv", ["check", "cases", "failures", "status"])
    harness.emit_csv(
        [{"n": c.shape[0], "N": c.shape[1], "L": c.shape[2], "mode": c.mode, "worlds": c.worlds} for c in coverage],
        out / "verify_coverage.csv",
        ["n", "N", "L", "mode", "worlds"],
    )
    for r in rows:
        print(f"{r['status'].upper():4}  {r['check']}  ({r['failures']}/{r['cases']} failing)")
    return EXIT_OK if all(r["status"] == "pass" for r in rows) else EXIT_BOUND


HANDLERS = {"simulate": _simulate, "thresholds": _thresholds, "figures": _figures, "verify": _verify}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="strand-id", description=__doc__)
    ap.add_argument("mode", choices=sorted(HANDLERS))
    ap.add_argument("--config", type=Path, help="flat key=value sweep file (required for simulate/thresholds)")
    ap.add_argument("--out", type=Path, default=None, help="output directory")
    ap.add_argument("--seed", type=int, default=None)
    ap.add_argument("--jobs", type=int, default=None)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.config is not None:
            cfg = harness.load_config(args.config)
        elif args.mode in ("simulate", "thresholds"):
            raise ConfigError(f"{args.mode} needs --config")
        else:
            cfg = SweepConfig(mode=args.mode)
        cfg = harness.apply_overrides(cfg, seed=args.seed, jobs=args.jobs)
        out = args.out if args.out is not None else Path(cfg.out)
        if args.mode in ("simulate", "thresholds"):
            harness.grid(cfg)
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    cfg = replace(cfg, mode=args.mode)
    return HANDLERS[args.mode](cfg, out)


if __name__ == "__main__":
    sys.exit(main())
