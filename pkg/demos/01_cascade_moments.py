"""
Cascaded channel statistics
===========================

A cascade through one surface is a sum of N products of independent
complex Gaussians. It has zero mean and variance N times the product of
the two hop variances.
"""

from dataclasses import replace

import numpy as np

from irs_est import SystemParams, sample_cascades, theoretical_moments

# unit hop variances make the expected variance equal to N1
for n1 in (1, 5, 60):
    p = replace(SystemParams(), N1=n1, sigma1_2=1.0, sigma2_2=1.0)
    z = sample_cascades(p, 1, 100_000, seed=0)
    print(f"N1={n1:3d}  mean={abs(z.mean()):.4f}  var={np.var(z):8.3f}  theory={theoretical_moments(p).var(1):.1f}")

# link 3 bounces off both surfaces, so its variance scales with N1 * N2
p = replace(SystemParams(), N1=5, N2=5)
z = sample_cascades(p, 3, 50_000, seed=0)
print(f"link 3: var={np.var(z):.1f}  theory={theoretical_moments(p).var(3):.1f}")
