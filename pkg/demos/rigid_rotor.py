#!/usr/bin/env python3
# Rigid rotor: polar Legendre match, (2l+1)-fold levels and orthogonality in theta.

import math

import numpy as np

from phasematrix import models as M
from phasematrix.oracle import gram_matrix
from phasematrix.phase_space import Grid

params = M.RigidRotorParams(mu=1.0, bond_length=1.0)
states = M.rotor_spectrum(params, 4)

print(f"I = {params.inertia}, hbar^2/2I = {params.energy_scale}")
for l in range(5):
    level = [s for s in states if s.quantum_numbers["l"] == l]
    fd = [M.rotor_reference(params, abs(s.quantum_numbers["m"]), 5 - abs(s.quantum_numbers["m"])).eigenvalues[l - abs(s.quantum_numbers["m"])] for s in level]
    print(f"l={l}  E={level[0].energy:.6f}  states={len(level)}  fd spread {max(fd) - min(fd):.1e}")

grid = Grid(0.0, math.pi, 2001)
for m in (0, 1):
    group = [s.normalized for s in states if s.quantum_numbers["m"] == m]
    gram = gram_matrix(group, grid, np.sin)
    print(f"m={m} Gram off-diagonal max: {np.max(np.abs(gram - np.eye(len(group)))):.1e}")

psi = M.rotor_full_wavefunction(params, 2, 1)
print("Y_2^1(0.7, 1.3) ~", psi(0.7, 1.3))
