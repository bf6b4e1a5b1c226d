#!/usr/bin/env python3
"""Ground-state pairon scan along gx + gy = const, with collapse report.

Sweeps the coupling line, tracks the ten pairon branches of the j = 10
ground state, locates the zero-collapse points from the dispersion
profile, and checks them against the closed-form hyperbola intersections
(including the merged-zero multiplicity pattern at each point).
"""
import argparse
import csv
import sys
import time

from pairons import (ModelParams, TrajectorySpec, collapse_points,
                     collapse_zero_pattern, detect_collapses, refine_collapse,
                     sample_dispersion, scan_trajectory)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--j", type=int, default=10)
    ap.add_argument("--line-sum", type=float, default=10.0)
    ap.add_argument("--steps", type=int, default=200)
    ap.add_argument("--state", type=int, default=0)
    ap.add_argument("--threads", type=int, default=1)
    ap.add_argument("--out", help="write the dispersion profile as CSV")
    args = ap.parse_args(argv)

    spec = TrajectorySpec(j=args.j, start=0.05 * args.line_sum / 10.0,
                          stop=args.line_sum - 0.05 * args.line_sum / 10.0,
                          steps=args.steps, line="sum",
                          line_sum=args.line_sum, state_index=args.state)
    t0 = time.perf_counter()
    table = scan_trajectory(spec, threads=args.threads)
    dt = time.perf_counter() - t0
    print(f"scan: j={args.j} line gx+gy={args.line_sum} "
          f"({args.steps} samples, state {args.state}) in {dt:.2f}s")
    if table.failures:
        print(f"  {len(table.failures)} samples failed:")
        for gx, msg in table.failures[:5]:
            print(f"    gx={gx:.4f}: {msg}")

    # regime structure: where do the pairons leave the real axis?
    real = [all(abs(r.energy.imag) <= 1e-8 for r in s.records)
            for s in table.samples]
    edges = [i for i in range(1, len(real)) if real[i] != real[i - 1]]
    labels = []
    start = 0
    for i in edges + [len(real)]:
        kind = "real" if real[start] else "complex-paired"
        labels.append(f"[{table.samples[start].gamma_x:.3f}, "
                      f"{table.samples[i - 1].gamma_x:.3f}] {kind}")
        start = i
    print("pairon regimes: " + "; ".join(labels))

    disp = [sample_dispersion(s) for s in table.samples]
    if args.out:
        with open(args.out, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["gx", "gy", "dispersion"])
            for s, d in zip(table.samples, disp):
                w.writerow([f"{s.gamma_x:.17g}", f"{s.gamma_y:.17g}",
                            f"{d:.17g}"])
        print(f"dispersion profile -> {args.out}")

    analytic = collapse_points(args.j, args.line_sum)
    candidates = detect_collapses(table)
    print(f"\ncollapse points: {len(analytic)} analytic, "
          f"{len(candidates)} dispersion minima at this resolution")
    print(f"{'k':>2} {'branch':>6} {'gx analytic':>12} {'gx refined':>12} "
          f"{'|delta|':>9}  zero pattern")
    for cp in sorted(analytic, key=lambda c: c.gamma_x):
        got = refine_collapse(spec, max(spec.start, cp.gamma_x - 0.02),
                              min(spec.stop, cp.gamma_x + 0.02))
        delta = abs(got.gamma_x - cp.gamma_x)
        params = ModelParams.from_gammas(args.j, cp.gamma_x, cp.gamma_y)
        pattern = sorted(collapse_zero_pattern(params, cp.k,
                                               state_index=args.state),
                         reverse=True)
        expect = sorted([2 * (cp.k + 1)] + [2] * (args.j - cp.k - 1),
                        reverse=True)
        mark = "" if pattern == expect else "  << unexpected"
        print(f"{cp.k:>2} {cp.branch:>6} {cp.gamma_x:12.6f} "
              f"{got.gamma_x:12.6f} {delta:9.2e}  "
              f"{'+'.join(map(str, pattern))}{mark}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
