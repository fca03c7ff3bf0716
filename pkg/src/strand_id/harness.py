"""Seeded sweeps, bound checks and CSV output."""

from __future__ import annotations

import csv
import io
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from itertools import product
from pathlib import Path

import numpy as np

from strand_id import analysis as an
from strand_id.graph import address_orders, build_graph, confusability_graph, has_cycle, two_hop_sizes
from strand_id.model import generate_instance, is_correct, payload_length
from strand_id.oracle import find_faulty_reads
from strand_id.pma import run_pma
from strand_id.pruner import run_pruning, stats_record

MODES = ("simulate", "thresholds", "verify", "figures")
SEED_ENV = "STRAND_ID_SEED"
LOW_N = 100
Z95 = 1.959963984540054


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class SweepConfig:
    mode: str = "simulate"
    n: tuple = (8,)
    N: tuple = (8,)
    p: tuple = (0.2,)
    beta: tuple = ("th",)
    eps1: tuple = (0.01,)
    eps2: tuple = (0.01,)
    trials: int = 100
    base_seed: int = 0
    out: str = "out"
    jobs: int = 1
    faulty: bool = False
    sample: int = 20_000

    def __post_init__(self):
        if self.mode not in MODES:
            raise ConfigError(f"unknown mode {self.mode!r}")
        if self.trials < 1:
            raise ConfigError("trials must be >= 1")
        if self.jobs < 1:
            raise ConfigError("jobs must be >= 1")


@dataclass(frozen=True)
class GridPoint:
    index: int
    n: int
    N: int
    p: float
    beta: float
    eps1: float
    eps2: float

    @property
    def L(self) -> int:
        return payload_length(self.n, self.beta)

    @property
    def params(self) -> an.AnalysisParams:
        return an.AnalysisParams(self.n, self.N, self.p, self.eps1, self.eps2, beta=self.beta)


# --- config parsing --------------------------------------------------------

def _number(tok: str):
    try:
        return int(tok)
    except ValueError:
        return float(tok)


def _expand(value: str) -> tuple:
    out = []
    for tok in (t.strip() for t in value.split(",")):
        if not tok:
            continue
        if ":" in tok:
            start, stop, step = (_number(t) for t in tok.split(":"))
            if step <= 0:
                raise ConfigError(f"range step must be positive in {tok!r}")
            count = int(math.floor((stop - start) / step + 1e-9)) + 1
            vals = [start + k * step for k in range(count)]
            if isinstance(start, float) or isinstance(step, float):
                vals = [float(f"{v:.12g}") for v in vals]
            out.extend(vals)
        elif tok[0].isalpha():
            out.append(tok)
        else:
            out.append(_number(tok))
    if not out:
        raise ConfigError(f"empty value list {value!r}")
    return tuple(out)


GRID_KEYS = ("n", "N", "p", "beta", "eps1", "eps2")
SCALAR_KEYS = {"mode": str, "trials": int, "base_seed": int, "seed": int, "out": str, "jobs": int, "sample": int}


def parse_config(text: str) -> SweepConfig:
    """Flat ``key = value`` lines; ``#`` starts a comment."""
    kw: dict = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key=value")
        key, value = (s.strip() for s in line.split("=", 1))
        try:
            if key in GRID_KEYS:
                kw[key] = _expand(value)
            elif key == "faulty":
                kw[key] = value.lower() in ("1", "true", "yes", "on")
            elif key in SCALAR_KEYS:
                kw["base_seed" if key == "seed" else key] = SCALAR_KEYS[key](value)
            else:
                raise ConfigError(f"line {lineno}: unknown key {key!r}")
        except ValueError as e:
            raise ConfigError(f"line {lineno}: {e}") from None
    return SweepConfig(**kw)


def load_config(path) -> SweepConfig:
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise ConfigError(str(e)) from None
    return parse_config(text)


def apply_overrides(config: SweepConfig, seed: int | None = None, jobs: int | None = None) -> SweepConfig:
    """Seed precedence: explicit argument, then the environment, then the file."""
    env = os.environ.get(SEED_ENV)
    if seed is None and env is not None:
        try:
            seed = int(env)
        except ValueError:
            raise ConfigError(f"{SEED_ENV}={env!r} is not an integer") from None
    if seed is not None:
        config = replace(config, base_seed=seed)
    if jobs is not None:
        config = replace(config, jobs=jobs)
    return config


def _resolve_N(tok, n: int, p: float, eps2: float) -> int:
    if tok == "th":
        return math.ceil(an.n_th(n, p, eps2))
    if tok == "n0":
        return math.ceil(an.n_0(n, p))
    if isinstance(tok, int) and tok >= 1:
        return tok
    raise ConfigError(f"N must be a positive integer, 'th' or 'n0', got {tok!r}")


def _resolve_beta(tok, n: int, N: int, p: float, eps1: float) -> float:
    if tok == "th":
        return an.beta_th(n, N, p, eps1)
    if tok == "b0":
        return an.beta_0(n, N, p, eps1)
    if tok == "max":
        return max(an.beta_th(n, N, p, eps1), an.beta_0(n, N, p, eps1))
    if isinstance(tok, (int, float)) and tok > 0:
        return float(tok)
    raise ConfigError(f"beta must be positive, 'th', 'b0' or 'max', got {tok!r}")


def grid(config: SweepConfig) -> list[GridPoint]:
    points = []
    for n, Ntok, p, btok, e1, e2 in product(config.n, config.N, config.p, config.beta, config.eps1, config.eps2):
        try:
            if not isinstance(n, int) or n < 1:
                raise ConfigError(f"n must be a positive integer, got {n!r}")
            N = _resolve_N(Ntok, n, p, e2)
            beta = _resolve_beta(btok, n, N, p, e1)
            pt = GridPoint(len(points), n, N, float(p), beta, float(e1), float(e2))
            pt.params
        except (TypeError, ValueError) as e:
            raise ConfigError(f"invalid grid point: {e}") from None
        points.append(pt)
    return points


# --- closed form -----------------------------------------------------------

THRESHOLD_COLUMNS = [
    "n", "N", "p", "eps1", "eps2", "beta", "L", "beta_th", "beta_0", "n_th", "n_0", "n_0_ln",
    "u_cycle", "cycle_lb", "cycle_lb_flag", "p_faulty", "two_hop", "u0", "u1", "u2",
    "kappa_u0", "kappa_u2", "region",
]


def closed_form(pt: GridPoint) -> dict:
    n, N, p = pt.n, pt.N, pt.p
    lb = an.cycle_prob_lower_bound(n, N, p)
    k0, k_plus = an.kappa_bounds(n, p)
    return {
        "n": n, "N": N, "p": p, "eps1": pt.eps1, "eps2": pt.eps2, "beta": pt.beta, "L": pt.L,
        "beta_th": an.beta_th(n, N, p, pt.eps1),
        "beta_0": an.beta_0(n, N, p, pt.eps1),
        "n_th": an.n_th(n, p, pt.eps2),
        "n_0": an.n_0(n, p),
        "n_0_ln": an.n_0(n, p, base=math.e),
        "u_cycle": an.u_cycle(n, N, p),
        "cycle_lb": lb.value,
        "cycle_lb_flag": lb.flagged,
        "p_faulty": an.p_read_faulty(n, pt.L, N, p),
        "two_hop": an.expected_two_hop(n, N, p),
        "u0": an.u0(n, N, p),
        "u1": an.u1(n, N, p),
        "u2": an.u2(n, N, p),
        "kappa_u0": k0,
        "kappa_u2": k_plus / N,
        "region": an.region_membership(pt.params),
    }


# --- simulation ------------------------------------------------------------

def trial_seed(base_seed: int, point: int, trial: int) -> int:
    ss = np.random.SeedSequence([base_seed & 0xFFFFFFFFFFFFFFFF, point, trial])
    return int(ss.generate_state(1, np.uint64)[0])


def run_trial(pt: GridPoint, seed: int, faulty: bool = False) -> dict:
    inst = generate_instance(pt.n, pt.beta, pt.N, pt.p, seed)
    res = run_pruning(inst)
    rec = stats_record(res)
    rec["correct"] = is_correct(res, inst)
    g = build_graph(inst)
    rec["cycle"] = has_cycle(g)
    rec["pma_correct"] = is_correct(run_pma(g, inplace=True), inst)
    rec["orders"] = np.bincount(np.log2(address_orders(inst)).astype(int), minlength=pt.n + 1)
    rec["T_connected"] = confusability_graph(inst).connected
    rec["two_hop_mean"] = float(two_hop_sizes(inst).mean())
    if faulty:
        rep = find_faulty_reads(inst)
        rec["faulty_reads"] = len(rep.reads) / inst.num_reads
        rec["faulty_sources"] = len(rep.sources) / inst.M
    return rec


def _trial_job(args) -> dict:
    return run_trial(*args)


def _rate(xs) -> tuple[float, float]:
    k = len(xs)
    r = float(np.mean(xs))
    return r, math.sqrt(r * (1 - r) / k)


def fold(pt: GridPoint, recs: list[dict]) -> dict:
    """Aggregate per-trial records, in trial order."""
    T = len(recs)
    comps = np.array([r["comparisons"] for r in recs], float)
    mean = float(comps.mean())
    half = Z95 * float(comps.std(ddof=1)) / math.sqrt(T) if T > 1 else math.nan
    succ, succ_se = _rate([r["correct"] for r in recs])
    cyc, cyc_se = _rate([r["cycle"] for r in recs])
    orders = np.sum([r["orders"] for r in recs], axis=0)
    hist = ";".join(f"{1 << e}:{c / orders.sum():.6g}" for e, c in enumerate(orders.tolist()) if c)
    row = {
        "trials": T,
        "low_n": T < LOW_N,
        "success_rate": succ,
        "success_se": succ_se,
        "pma_success_rate": float(np.mean([r["pma_correct"] for r in recs])),
        "cycle_rate": cyc,
        "cycle_se": cyc_se,
        "mean_comparisons": mean,
        "comparison_ci_lo": mean - half,
        "comparison_ci_hi": mean + half,
        "mean_prune_rounds": float(np.mean([r["prune_rounds"] for r in recs])),
        "mean_groups_resolved": float(np.mean([r["groups_resolved"] for r in recs])),
        "two_hop_empirical": float(np.mean([r["two_hop_mean"] for r in recs])),
        "order_histogram": hist,
        "T_connected_rate": float(np.mean([r["T_connected"] for r in recs])),
        "faulty_rate": float(np.mean([r["faulty_reads"] for r in recs])) if "faulty_reads" in recs[0] else math.nan,
        "faulty_source_rate": (
            float(np.mean([r["faulty_sources"] for r in recs])) if "faulty_sources" in recs[0] else math.nan
        ),
        "kappa_empirical": mean / float(pt.N << pt.n) ** 2,
        "kappa_addresses": mean / float(1 << pt.n) ** 2,
    }
    return row


def bound_checks(cf: dict, emp: dict) -> dict:
    """'pass', 'fail' or 'n/a' for each bound that applies at this point."""
    region = cf["region"]
    out = {}
    target = 1.0 - (cf["eps1"] + cf["eps2"])
    out["check_success"] = (
        "n/a" if region == "none" else _verdict(emp["success_rate"] >= target - 3 * emp["success_se"])
    )
    out["check_u0"] = "n/a" if region == "none" else _verdict(emp["mean_comparisons"] <= cf["u0"])
    out["check_u2"] = _verdict(emp["mean_comparisons"] <= cf["u2"]) if region == "R''" else "n/a"
    out["check_kappa"] = "n/a" if region == "none" else _verdict(emp["kappa_empirical"] <= cf["kappa_u0"])
    out["check_cycle"] = (
        "n/a" if cf["cycle_lb_flag"] else _verdict(emp["cycle_rate"] >= cf["cycle_lb"] - 3 * emp["cycle_se"])
    )
    return out


def _verdict(ok: bool) -> str:
    return "pass" if ok else "fail"


SIMULATE_COLUMNS = THRESHOLD_COLUMNS + [
    "trials", "low_n", "success_rate", "success_se", "pma_success_rate", "cycle_rate", "cycle_se",
    "mean_comparisons", "comparison_ci_lo", "comparison_ci_hi", "mean_prune_rounds",
    "mean_groups_resolved", "two_hop_empirical", "order_histogram", "T_connected_rate",
    "faulty_rate", "faulty_source_rate", "kappa_empirical", "kappa_addresses",
    "check_success", "check_u0", "check_u2", "check_kappa", "check_cycle",
]


def run_sweep(config: SweepConfig) -> list[dict]:
    points = grid(config)
    if config.mode == "thresholds":
        return [closed_form(pt) for pt in points]
    if config.mode != "simulate":
        raise ConfigError(f"run_sweep handles simulate and thresholds, not {config.mode!r}")
    rows = []
    pool = ProcessPoolExecutor(config.jobs) if config.jobs > 1 else None
    try:
        for pt in points:
            jobs = [(pt, trial_seed(config.base_seed, pt.index, t), config.faulty) for t in range(config.trials)]
            recs = list(pool.map(_trial_job, jobs, chunksize=4)) if pool else [_trial_job(j) for j in jobs]
            cf = closed_form(pt)
            emp = fold(pt, recs)
            rows.append({**cf, **emp, **bound_checks(cf, emp)})
    finally:
        if pool:
            pool.shutdown()
    return rows


def failed_checks(rows: list[dict]) -> list[str]:
    return [f"point {i}: {k}" for i, r in enumerate(rows) for k, v in r.items() if k.startswith("check_") and v == "fail"]


# --- figures ---------------------------------------------------------------

def figure_rows() -> dict[str, tuple[list[str], list[dict]]]:
    out = {}
    n, p, e1 = 20, 0.3, 0.01
    opt = an.beta_th_min_N(n, e1)
    out["beta_th_vs_N"] = (
        ["n", "p", "eps1", "N", "beta_th", "beta_th_bound", "argmin_N_real"],
        [
            {"n": n, "p": p, "eps1": e1, "N": N, "beta_th": an.beta_th(n, N, p, e1),
             "beta_th_bound": an.beta_th_bound(N, p, e1), "argmin_N_real": opt}
            for N in range(1, 61)
        ],
    )
    N, p = 2, 0.2
    out["beta_th_vs_n"] = (
        ["n", "N", "p", "eps1", "beta_th", "beta_th_bound"],
        [
            {"n": k, "N": N, "p": p, "eps1": e1, "beta_th": an.beta_th(k, N, p, e1),
             "beta_th_bound": an.beta_th_bound(N, p, e1)}
            for k in range(4, 31)
        ],
    )
    p, e2 = 0.3, 0.01
    rows = []
    for k in range(4, 31):
        lo, hi = an.n_th_sandwich(k, p, e2)
        rows.append({"n": k, "p": p, "eps2": e2, "n_th": an.n_th(k, p, e2), "n_th_lower": lo, "n_th_upper": hi})
    out["n_th_vs_n"] = (["n", "p", "eps2", "n_th", "n_th_lower", "n_th_upper"], rows)
    n = 30
    rows = []
    for k in range(1, 20):
        p = round(0.05 * k, 2)
        N = math.ceil(an.n_th(n, p, e2))
        u0, u1 = an.u0(n, N, p), an.u1(n, N, p)
        rows.append({"n": n, "p": p, "N": N, "u0": u0, "u1": u1, "ratio": N * u1 / u0})
    out["pruning_ratio_vs_p"] = (["n", "p", "N", "u0", "u1", "ratio"], rows)
    return out


# --- output ----------------------------------------------------------------

def format_cell(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".12g")
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return str(v)


def render_csv(rows: list[dict], columns: list[str]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n", quoting=csv.QUOTE_MINIMAL)
    w.writerow(columns)
    for r in rows:
        w.writerow([format_cell(r.get(c, "")) for c in columns])
    return buf.getvalue()


def emit_csv(rows: list[dict], path, columns: list[str] | None = None) -> None:
    if columns is None:
        columns = list(rows[0]) if rows else []
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        fh.write(render_csv(rows, columns))
