"""
Phase-space matrices and template matching for exactly solvable
Schrodinger equations.

Submodules:
    phase_space   2x2 phase-space matrices, RK4 transport and shooting
    templates     classical polynomial ODEs and their invariants
    matching      the matching condition and integrating factor
    models        harmonic oscillator, rigid rotor, hydrogen, Morse
    oracle        finite-difference reference spectra and checks
    cli           command-line front end
"""
from .errors import *  # noqa: F401,F403
from .matching import *  # noqa: F401,F403
from .models import *  # noqa: F401,F403
from .oracle import *  # noqa: F401,F403
from .phase_space import *  # noqa: F401,F403
from .templates import *  # noqa: F401,F403

__version__ = "0.1.0"
