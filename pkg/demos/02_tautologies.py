"""Self-fulfilling correlations, detected structurally and measured empirically.

Three classics:

* two per-capita indices share a denominator, so they correlate even when
  their numerators are simulated as completely unrelated;
* a change score is negatively correlated with the baseline it subtracts
  (analytically -1/sqrt(2) when baseline and follow-up are independent with
  equal variance);
* an area-level mean and an area-level prevalence computed from the same
  individual measurements move together across areas with no area-level
  structure at all.
"""

import numpy as np

from detdag import (
    SimParams,
    detect_tautologies,
    load_fixture,
    partial_correlation,
    simulate,
)

print("-- shared denominator ------------------------------------------------")
fig2a = load_fixture("fig2a")
for f in detect_tautologies(fig2a):
    print(f"  {f.pair[0]} ~ {f.pair[1]}  [{f.relation}]  shared base: {list(f.shared_base)}")
ds = simulate(fig2a, n=100_000, seed=42)
print(f"  corr(Z1, Z2) = {partial_correlation(ds, 'Z1', 'Z2'):+.4f}"
      f"   (numerators: corr(X, Y) = {partial_correlation(ds, 'X', 'Y'):+.4f})")

print("-- change score vs baseline ------------------------------------------")
fig2b = load_fixture("fig2b")
ds = simulate(fig2b, SimParams(coefs={("X0", "X1"): 0.0}), n=100_000, seed=42)
r = partial_correlation(ds, "X", "X0")
print(f"  corr(change score, baseline) = {r:+.4f}   analytic -1/sqrt(2) = {-1/np.sqrt(2):+.4f}")

print("-- aggregate siblings --------------------------------------------------")
fig2c = load_fixture("fig2c")
ds = simulate(fig2c, n=100_000, seed=42)
r = partial_correlation(ds, "X1_j", "X_j")
print(f"  corr(area mean, area prevalence) = {r:+.4f} across 50 equal areas")
print("  (no area effects were simulated; the association is pure construction)")
