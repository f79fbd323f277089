"""How the Bogoliubov coefficients for entering uniform acceleration scale.

The exact (quadrature) coefficients differ from the linear-order ones by a
term quadratic in h, so halving h cuts the difference by four.
"""
import numpy as np

from relcavity import CavityConfig, coefficients_perturbative, coefficients_quadrature

prev = None
for h in (0.04, 0.02, 0.01, 0.005):
    cfg = CavityConfig(bc="dirichlet", mass=1.0, h=h)
    q, p = coefficients_quadrature(cfg, 6), coefficients_perturbative(cfg, 6)
    d = max(np.max(np.abs(q.alpha - p.alpha)), np.max(np.abs(q.beta - p.beta)))
    note = "" if prev is None else f"  ratio {prev / d:.3f}"
    print(f"h = {h:<6} max |exact - linear| = {d:.3e}{note}")
    prev = d
