"""Inertial and accelerated spectra of a cavity, side by side.

Prints the lowest frequencies of each field type at rest and under a
moderate proper acceleration, with h * Omega / omega, which tends to one
as the acceleration goes to zero.
"""
import numpy as np

from relcavity import CavityConfig, minkowski_spectrum, rindler_spectrum

M, h = 1.0, 0.3

for bc in ("dirichlet", "neumann", "dirac_mit"):
    rest = minkowski_spectrum(CavityConfig(bc=bc, mass=M), 4)
    acc = rindler_spectrum(CavityConfig(bc=bc, mass=M, h=h), 4)
    w = rest.frequencies[rest.frequencies > 0][:4]
    Om = acc.frequencies[acc.frequencies > 0][:4]
    print(f"{bc:10s} omega L      ", np.array2string(w, precision=5))
    print(f"{'':10s} h Omega/omega", np.array2string(h * Om / w, precision=5))
