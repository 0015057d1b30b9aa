#!/usr/bin/env python3
# Phase-space trajectories of the oscillator at and away from an eigenvalue.

import numpy as np

from phasematrix import models as M
from phasematrix.phase_space import Grid, PhaseVector, integrate_phase_space

tise = M.dimensionless_form(M.HarmonicOscillatorParams())
grid = Grid(0.0, 6.0, 4801)

for eps in (1.0, 1.2, 2.0, 3.0):
    traj = integrate_phase_space(tise.b, tise.k_squared_of(eps), PhaseVector(1.0, 0.0), grid)
    turn = np.sqrt(eps)
    print(f"eps={eps:.1f}  turning point {turn:.3f}  phi(6)={traj.final.value:+.3e}  phi'(6)={traj.final.slope:+.3e}")

# the even ground state decays, everything else blows up past the turning point
traj = integrate_phase_space(tise.b, tise.k_squared_of(1.0), PhaseVector(1.0, 0.0), grid)
for x, (u, w) in zip(grid.points[::600], traj.samples[::600]):
    print(f"x={x:4.2f}  phi={u:.6f}  phi'={w:+.6f}")
