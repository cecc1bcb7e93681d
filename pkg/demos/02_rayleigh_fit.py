"""
Rayleigh fit of the cascade magnitude
=====================================

|J1| is fitted with a Rayleigh density by maximum likelihood. The KS
distance shows how much better the fit gets with more surface elements.
"""

import numpy as np

from irs_est import SystemParams, rayleigh_mle, rayleigh_pdf, sample_cascades

for n1 in (5, 60):
    z = sample_cascades(SystemParams(N1=n1), 1, 100_000, seed=0)
    fit = rayleigh_mle(z)
    print(f"N1={n1:2d}  b_hat={fit.b_hat:.4f}  KS={fit.ks_stat:.4f}")

# a coarse text histogram against the fitted density for N1=5
z = sample_cascades(SystemParams(N1=5), 1, 100_000, seed=0)
fit = rayleigh_mle(z)
density, edges = np.histogram(np.abs(z), bins=12, density=True)
centres = 0.5 * (edges[1:] + edges[:-1])
for c, d, f in zip(centres, density, rayleigh_pdf(centres, fit.b_hat)):
    print(f"{c:6.2f}  {'#' * int(d * 600):<50s} fit={f:.4f}")
