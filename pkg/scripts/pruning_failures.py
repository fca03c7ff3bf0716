"""Break down pruning failures by whether some strand had only faulty reads."""

import argparse
import math
from collections import Counter

from strand_id.analysis import beta_th, n_th
from strand_id.model import generate_instance, is_correct
from strand_id.oracle import find_faulty_reads
from strand_id.pruner import run_pruning


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=8)
    ap.add_argument("--p", type=float, default=0.2)
    ap.add_argument("--eps", type=float, default=0.01)
    ap.add_argument("--trials", type=int, default=100)
    ap.add_argument("--beta-scale", type=float, default=1.0, help="multiply the threshold beta")
    args = ap.parse_args()
    N = math.ceil(n_th(args.n, args.p, args.eps))
    beta = args.beta_scale * beta_th(args.n, N, args.p, args.eps)
    tally = Counter()
    for s in range(args.trials):
        inst = generate_instance(args.n, beta, N, args.p, s)
        ok = is_correct(run_pruning(inst), inst)
        bad_sources = bool(find_faulty_reads(inst).sources)
        tally[(ok, bad_sources)] += 1
    print(f"n={args.n} N={N} p={args.p} beta={beta:.4f} trials={args.trials}")
    for (ok, bad), k in sorted(tally.items()):
        print(f"  success={ok!s:5} all-faulty-strand-present={bad!s:5} count={k}")


if __name__ == "__main__":
    main()
