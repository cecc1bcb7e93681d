"""
LMMSE error against pilot energy and length
===========================================

The simulated error follows the closed form. Both approach the Bayesian
bound once the pilot energy dominates the prior.
"""

from irs_est import ExperimentConfig, run_mse_vs_energy, run_mse_vs_length

cfg = ExperimentConfig(trials=20_000, n_samples=20_000, out_dir="demo_results")

res = run_mse_vs_energy(cfg)
print(f"prior Fisher information: {res.prior.value:.5f}")
print("energy  closed     simulated  bayes      classical")
for pt in res.points:
    print(f"{pt.sweep_value:6g}  {pt.closed_form:.5f}  {pt.empirical:.5f}  {pt.crlb_bayes:.5f}  {pt.crlb_classical:.5f}")

res = run_mse_vs_length(cfg)
print("\nlength  closed     simulated")
for pt in res.points:
    print(f"{pt.sweep_value:6d}  {pt.closed_form:.5f}  {pt.empirical:.5f}")
print(f"\nCSV files written under {cfg.out_dir}/")
