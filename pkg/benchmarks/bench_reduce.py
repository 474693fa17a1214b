"""Compare the compiled and pure-Python mod-p reduction kernels.

Two workloads:

* ``nf``: normal forms of random polynomials against a fixed Groebner basis, calling the
  kernel directly;
* ``groebner``: a full Buchberger run on the graded parts of a random germ, with the
  active kernel swapped in.

Usage: ``python3 benchmarks/bench_reduce.py [--repeat N] [--M M] [--mu MU]``.
"""

from __future__ import annotations

import argparse
import random
import time

import numpy as np

from fanorigid import _kernels
from fanorigid.algebra import GF, groebner
from fanorigid.algebra.groebner import _ModpRep
from fanorigid.algebra.polynomial import random_homogeneous
from fanorigid.germ import random_germ


def _use(module):
    _kernels.nf_modp = module.nf_modp
    _kernels.spoly_modp = module.spoly_modp


def _time(fn, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def workload(M, mu, seed):
    g = random_germ(M, mu, seed)
    gens = [g.q(d) for d in range(mu, M + 1)]
    return g.field, gens


def bench(M, mu, repeat, seed=0):
    field, gens = workload(M, mu, seed)
    rep = _ModpRep(field)
    saved = (_kernels.nf_modp, _kernels.spoly_modp)
    impls = _kernels.backends()
    rows = []
    try:
        G = groebner(gens)
        basis = [rep.from_poly(b) for b in G.polys]
        rng = random.Random(seed)
        targets = [rep.from_poly(random_homogeneous(M, mu + 2, field, rng)) for _ in range(20)]
        results = {}
        for name, mod in impls.items():
            _use(mod)
            t_nf, nfs = _time(lambda: [mod.nf_modp(e, c, basis, field.p) for e, c in targets], repeat)
            t_gb, gb = _time(lambda: groebner(gens), repeat)
            results[name] = (nfs, gb)
            rows.append((name, t_nf, t_gb))
        ref_nf, ref_gb = results["python"]
        for name, (nfs, gb) in results.items():
            same_nf = all(np.array_equal(a[0], b[0]) and np.array_equal(a[1], b[1])
                          for a, b in zip(nfs, ref_nf))
            if not same_nf or [str(b) for b in gb.polys] != [str(b) for b in ref_gb.polys]:
                raise AssertionError(f"backend {name} disagrees with the Python fallback")
    finally:
        _kernels.nf_modp, _kernels.spoly_modp = saved
    return rows, len(G.polys)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--M", type=int, default=5)
    ap.add_argument("--mu", type=int, default=3)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    rows, size = bench(args.M, args.mu, args.repeat)
    print(f"workload: M={args.M} mu={args.mu} over GF({GF().p}), basis size {size}; best of {args.repeat}")
    print(f"{'backend':<8} {'nf x20 (s)':>12} {'groebner (s)':>14}")
    for name, t_nf, t_gb in rows:
        print(f"{name:<8} {t_nf:>12.4f} {t_gb:>14.4f}")
    if len(rows) == 2:
        (_, pn, pg), (_, cn, cg) = sorted(rows, key=lambda r: r[0] != "python")
        print(f"speedup (python / cython): nf {pn / cn:.1f}x, groebner {pg / cg:.1f}x")
    print("outputs identical across backends")


if __name__ == "__main__":
    main()
