#!/usr/bin/env python3
# Harmonic oscillator: Hermite match, closed-form levels against two numerical routes.

import numpy as np

from phasematrix import models as M
from phasematrix.matching import verify_match
from phasematrix.phase_space import Grid, shoot_eigenvalue

params = M.HarmonicOscillatorParams(mass=1.0, omega=1.0)
states = M.ho_spectrum(params, 5)
reference = M.ho_reference(params, len(states))
tise = M.dimensionless_form(params)

print(f"x_c = {params.x_c:.6f}")
print(" n   closed form     finite diff      shooting        match residual")
for s, e_fd in zip(states, reference.eigenvalues):
    n = s.quantum_numbers["n"]
    parity = "even" if n % 2 == 0 else "odd"
    eps = shoot_eigenvalue(tise.b, tise.k_squared_of, (s.epsilon - 0.5, s.epsilon + 0.5), Grid(0, 8, 3200), parity)
    m = s.match
    res = verify_match(m.tise, m.template, m.spec, m.verify_grid)
    print(f"{n:2d}   {s.energy:.10f}   {e_fd:.10f}   {eps / 2:.10f}   {res:.1e}")

# normalized states on a coarse grid
q = np.linspace(-3, 3, 7)
for s in states[:3]:
    print(s.quantum_numbers, np.round(s.normalized(q), 5))
