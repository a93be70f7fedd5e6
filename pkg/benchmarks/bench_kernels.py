"""Time the compiled and numpy kernels on the workloads the checks actually run.

    python benchmarks/bench_kernels.py [--repeat 3] [--threads 1 4]

Inputs are Gromov-product and distance matrices from real length functions
(two deformations and log on Z, word length on F2), so the exact int64 path,
the object-array path for huge denominators (always numpy) and the float64
path are all exercised.  Each backend's answer is compared with the
other's before timing is reported.
"""
from __future__ import annotations

import argparse
import time
from fractions import Fraction

from lengthlab import chiswell, kernels
from lengthlab.axioms import gromov_matrix
from lengthlab.groups import F2, Z, word_ball
from lengthlab.length import additive_eps, epsilon_deformation, log_deformation, word_length


def workloads():
    add = additive_eps(Fraction(1, 2))
    yield "delta  |n|+1/2  |n|<=200 (exact int64)", "delta", kernels.to_matrix(gromov_matrix(add, word_ball(Z, 200)))
    l_half = epsilon_deformation(Fraction(1, 2))
    yield "delta  l_1/2  |n|<=40 (exact, object)", "delta", kernels.to_matrix(gromov_matrix(l_half, word_ball(Z, 40)))
    log = log_deformation()
    yield "delta  log    |n|<=200 (float64)", "delta", kernels.to_matrix(gromov_matrix(log, word_ball(Z, 200)))
    lf = word_length(F2)
    ball = word_ball(F2, 3)
    tree = chiswell.build_tree(lf, ball)
    D = kernels.to_matrix(tree.dist)
    yield f"triangle  F2 tree, {len(tree)} points", "triangle", D
    yield f"four-point exhaustive, {len(tree)} points", "four", D
    yield "four-point sampled, 10^6 quadruples", "sampled", D


def call(kind, M, threads, name):
    if kind == "delta":
        return kernels.delta_scan(M, threads=threads, name=name)
    if kind == "triangle":
        return kernels.triangle_scan(M, threads=threads, name=name)
    if kind == "four":
        return kernels.four_point_scan(M, threads=threads, name=name)
    return kernels.four_point_sampled(M, chiswell.SAMPLES, chiswell.SEED, threads=threads, name=name)


def best_of(fn, repeat):
    times = []
    out = None
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t)
    return min(times), out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--threads", type=int, nargs="+", default=[1, 4])
    args = ap.parse_args(argv)

    names = ["python"] + (["cython"] if kernels.BACKEND == "cython" else [])
    if len(names) == 1:
        print("compiled kernels not built; timing the numpy fallback only")
    header = f"{'workload':<42}{'threads':>8}" + "".join(f"{n:>12}" for n in names)
    if len(names) == 2:
        header += f"{'speedup':>10}"
    print(header)
    for label, kind, M in workloads():
        for threads in args.threads:
            row, answers = [], []
            for name in names:
                t, out = best_of(lambda: call(kind, M, threads, name), args.repeat)
                row.append(t)
                answers.append(out)
            if any(a != answers[0] for a in answers):
                raise SystemExit(f"backends disagree on {label}: {answers}")
            line = f"{label:<42}{threads:>8}" + "".join(f"{t * 1e3:>10.1f}ms" for t in row)
            if len(row) == 2:
                line += f"{row[0] / row[1]:>9.1f}x"
            print(line)


if __name__ == "__main__":
    main()
