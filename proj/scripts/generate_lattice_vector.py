#!/usr/bin/env python3
"""Generate an embedded rank-1 lattice generating vector in base 2.

The vector is built component by component for product weights
gamma_j = j**-2 in the unanchored first-order Sobolev space (shift-averaged
kernel B2(x) = x^2 - x + 1/6). Every candidate is scored at all levels
n = 2**m_min .. 2**m_max and the candidate minimizing the worst ratio
e_m^2(z) / min_z' e_m^2(z') is kept, so that every 2**(m_max - m)-th point
of the full rule forms a good 2**m-point rule on its own.

The search over the odd residues mod 2**m uses the cyclic structure of the
unit group (every odd residue is +-5**k), which turns each level into a
two-dimensional cyclic cross-correlation evaluated with FFTs.

Output: two columns "j z_j" (1-based), the layout used by published
embedded lattice files.
"""
import argparse
import sys

import numpy as np


def bernoulli2(x):
    return x * x - x + 1.0 / 6.0


class UnitGroup:
    """Odd residues mod M = 2**r written as (-1)**a * 5**k."""

    def __init__(self, r):
        self.r = r
        self.M = 1 << r
        if r >= 3:
            self.K = self.M // 4
            pow5 = np.empty(self.K, dtype=np.int64)
            acc = 1
            for k in range(self.K):
                pow5[k] = acc
                acc = (acc * 5) % self.M
            self.units = np.stack([pow5, (-pow5) % self.M])  # shape (2, K)
            kernel = bernoulli2(self.units / self.M)
            self.kernel_hat = np.fft.fft2(kernel)


def level_scores(P, m, groups):
    """S(z) = sum_i P[i] * B2(frac(i z / 2**m)) for every odd z mod 2**m."""
    n = 1 << m
    S = np.full(n, P[0] * bernoulli2(0.0))
    z_all = np.arange(n)
    for t in range(m):
        r = m - t
        M = 1 << r
        stride = 1 << t
        if r == 1:
            S += P[stride] * bernoulli2(0.5)
            continue
        if r == 2:
            # units {1, 3}
            p1, p3 = P[stride * 1], P[stride * 3]
            term = np.empty(4)
            term[1] = p1 * bernoulli2(1 / 4) + p3 * bernoulli2(3 / 4)
            term[3] = p1 * bernoulli2(3 / 4) + p3 * bernoulli2(1 / 4)
            term[0] = term[2] = 0.0
            S += term[z_all % 4]
            continue
        g = groups[r]
        A = P[stride * g.units]
        T = np.real(np.fft.ifft2(np.conj(np.fft.fft2(A)) * g.kernel_hat))
        table = np.zeros(M)
        table[g.units] = T
        S += table[z_all % M]
    return S


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--dims", type=int, default=3600)
    ap.add_argument("--m-min", type=int, default=10)
    ap.add_argument("--m-max", type=int, default=20)
    ap.add_argument("--weight-decay", type=float, default=2.0)
    ap.add_argument("--out", required=True)
    args = ap.parse_args()

    levels = list(range(args.m_min, args.m_max + 1))
    groups = {r: UnitGroup(r) for r in range(3, args.m_max + 1)}
    P = {m: np.ones(1 << m) for m in levels}
    idx = {m: np.arange(1 << m, dtype=np.int64) for m in levels}
    n_max = 1 << args.m_max
    candidates = np.arange(1, n_max, 2, dtype=np.int64)

    z = [1]
    for m in levels:
        n = 1 << m
        P[m] *= 1.0 + bernoulli2((idx[m] % n) / n)

    with open(args.out, "w") as fh:
        fh.write("1 1\n")
        for d in range(1, args.dims):
            gamma = (d + 1) ** -args.weight_decay
            worst = np.zeros(candidates.size)
            for m in levels:
                n = 1 << m
                S = level_scores(P[m], m, groups)
                base = P[m].sum() - n
                err = (base + gamma * S) / n
                odd = err[1::2]
                ratio = odd / odd.min()
                np.maximum(worst, ratio[(candidates % n) // 2], out=worst)
            zd = int(candidates[np.argmin(worst)])
            z.append(zd)
            for m in levels:
                n = 1 << m
                P[m] *= 1.0 + gamma * bernoulli2(((idx[m] * zd) % n) / n)
            fh.write(f"{d + 1} {zd}\n")
            fh.flush()
            if (d + 1) % 100 == 0:
                print(f"dim {d + 1}", file=sys.stderr, flush=True)


if __name__ == "__main__":
    main()
