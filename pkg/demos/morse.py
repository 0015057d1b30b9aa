#!/usr/bin/env python3
# Morse oscillator: confluent hypergeometric match in y = 2 delta exp(-alpha q).

from phasematrix import models as M
from phasematrix.matching import admissible_morse_levels, diagnose_morse_branches

params = M.MorseParams.from_delta(5.0, D_e=1.0)
print(f"delta = {params.delta:.3f}, alpha = {params.alpha:.4f}")

states = M.morse_spectrum(params)
reference = M.morse_reference(params, len(states))
for s, fd in zip(states, reference.eigenvalues):
    c = s.match.spec.c
    print(f"n={s.quantum_numbers['n']}  E={s.energy:+.8f}  fd={fd:+.8f}  c={c:.1f}")

# why only one root of the quadratic in a is kept
eps0 = states[0].epsilon
for name, report in diagnose_morse_branches(params.delta, eps0).items():
    print(f"{name:9s} a={report.a:+.2f} c={report.c:+.2f}  {report.reason}")
print("levels on the other root:", admissible_morse_levels(params.delta, "rejected"))

try:
    M.morse_spectrum(M.MorseParams.from_delta(0.4))
except M.NoBoundStatesError as exc:
    print("delta = 0.4:", exc)
