#!/usr/bin/env python3
# Hydrogen radial equation: Laguerre match, 1/n^2 levels and l-degeneracy.

import numpy as np

from phasematrix import models as M
from phasematrix.oracle import count_nodes

params = M.HydrogenParams.electron_volts()
n_max = 4
states = M.hydrogen_spectrum(params, n_max)

print(f"a0 = {params.a0} angstrom, E_g = {params.E_g} eV")
print(" n  l   E (eV)         finite diff    nodes  r_c")
for s in states:
    n, l = s.quantum_numbers["n"], s.quantum_numbers["l"]
    fd = M.hydrogen_reference(params, l, n_max - l).eigenvalues[n - l - 1]
    r = np.linspace(1e-3, 200 * params.a0, 8001)
    nodes = count_nodes(s.wavefunction(r))
    print(f"{n:2d} {l:2d}   {s.energy:.8f}   {fd:.8f}   {nodes:3d}    {s.match.scale.x_c:.4f}")
