"""A short burst of acceleration, then the unitarity diagnostics.

A top-hat profile is evolved two ways (segment composition and the
linear-order Fourier formula), and the Hilbert-Schmidt sum of beta is
checked for massive fields and for a cavity with transverse extent.
"""
import numpy as np

from relcavity import (
    AccelerationProfile,
    CavityConfig,
    evolve_fourier,
    evolve_segments,
    f_sum,
    transverse_verdict,
)

cfg = CavityConfig(bc="neumann", mass=1.0)
prof = AccelerationProfile.from_segments([(1.5, 0.01), (1.0, 0.0), (1.5, -0.01)])
a = evolve_segments(cfg, prof, 4).beta
b = evolve_fourier(cfg, prof, 4).beta
print("|beta| by composition\n", np.array2string(np.abs(a), precision=3))
print("max difference from Fourier formula", f"{np.max(np.abs(a - b)):.2e}")

for M in (1.0, 10.0, 50.0):
    r = f_sum(M, "dirichlet", cutoff=400)
    print(f"M = {M:5.1f}  M^2 sum |beta_hat|^2 / large-M constant = {r.relative_to_constant:.4f}")

for d in (2, 3):
    v = transverse_verdict(d, 1.0)
    print(f"{d - 1} transverse dimension(s): {v.verdict}")
