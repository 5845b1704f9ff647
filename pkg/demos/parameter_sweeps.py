"""Sweeps over the parameter interval.

Four measurements, all deterministic given their seeds:
  * averaged pair correlation over an interval stays linear in s (no
    attraction and no repulsion on average);
  * the smallest gap beats a summable threshold 3^-N N^-1.1 at some level
    for every sampled parameter;
  * sublevel sets {|g| <= rho} of random {0,±1} polynomials have measure
    O(rho) with a stable constant (transversality);
  * nesting intervals around {0,±1}-polynomial zeros produces a parameter
    whose pair correlation is certifiably enormous at a small scale.

Run:  python3 demos/parameter_sweeps.py
"""

from bcvlab import (SweepConfig, averaged_pair_correlation,
                    construct_attracting_parameter, min_gap_scan,
                    transversality_check)

print("=== averaged pair correlation on [0.51, 0.66], N=14 ===")
cfg = SweepConfig(interval=(0.51, 0.66), levels=14,
                  s_grid=(0.5, 1.0, 2.0, 4.0), sample_count=64)
report = averaged_pair_correlation(cfg)
for s, m in zip(report.s_grid, report.mean):
    print(f"  s={s:3}: mean R2 = {m:8.4f}   slope = {m / s:.4f}")
print(f"  slope band [{report.c_hat:.4f}, {report.C_hat:.4f}] "
      f"(Poisson slope would be 2)")

print("\n=== min-gap exceedances of alpha_N = 3^-N N^-1.1, N = 10..18 ===")
scan = min_gap_scan((0.51, 0.66), 12, range(10, 19),
                    lambda n: 3.0**-n * n**-1.1, seed=8)
hits = [len(e) for e in scan.exceedances]
print(f"  12 sampled parameters, exceedance levels per parameter: {hits}")
print("  every parameter beats the threshold somewhere (typically everywhere)")

print("\n=== transversality: measure{|g| <= rho} / rho for random degree-30 g ===")
report = transversality_check(30, 50, (1e-2, 1e-3, 1e-4), (0.5, 0.668),
                              seed=2024)
for rho, c in zip(report.rho_grid, report.max_ratio_per_rho):
    print(f"  rho={rho:8.0e}: max ratio {c:.4f}")
print(f"  empirical constant C = {report.empirical_C:.4f}, flat across decades")

print("\n=== constructing a strongly attracting parameter ===")
result = construct_attracting_parameter((0.6, 0.63), 1, 0.5)
cert = result.certificates[0]
print(f"  stage-1 parameter: {result.lam:.12f} (the golden ratio)")
print(f"  certificate: R2(0) >= {cert.r2_lower_bound:.2f} at N={cert.levels}, "
      f"threshold 2^sqrt(N) = {2 ** cert.levels ** 0.5:.2f}")
print(f"  complete: {result.complete}; deeper stages need levels beyond the "
      "exact-backend cap and stop with an explicit flag")
