"""Compare the closed-form faulty-read probability with the exact value and Monte Carlo."""

import argparse

import numpy as np

from strand_id.analysis import p_read_faulty
from strand_id.model import generate_instance
from strand_id.oracle import exact_p_read_faulty, find_faulty_reads


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=6)
    ap.add_argument("--beta", type=float, default=1.0)
    ap.add_argument("--N", type=int, nargs="+", default=[1, 2, 4, 8])
    ap.add_argument("--p", type=float, nargs="+", default=[0.1, 0.2, 0.3])
    ap.add_argument("--instances", type=int, default=100)
    args = ap.parse_args()
    print("n L N p formula exact monte_carlo se")
    for N in args.N:
        for p in args.p:
            fracs = []
            for s in range(args.instances):
                inst = generate_instance(args.n, args.beta, N, p, s)
                fracs.append(len(find_faulty_reads(inst).reads) / inst.num_reads)
            L = inst.L
            se = np.std(fracs, ddof=1) / np.sqrt(len(fracs))
            print(
                f"{args.n} {L} {N} {p} {p_read_faulty(args.n, L, N, p):.4f} "
                f"{exact_p_read_faulty(args.n, L, N, p):.4f} {np.mean(fracs):.4f} {se:.4f}"
            )


if __name__ == "__main__":
    main()
