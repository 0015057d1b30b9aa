"""
The four model systems: harmonic oscillator, rigid rotor, hydrogen radial
equation and Morse oscillator.

Each model provides

* a parameter dataclass validated on construction,
* ``*_match``: the closed-form identification of one state with its
  template (scale, template parameters, energy, integrating factor),
* ``*_spectrum``: the list of :class:`Eigenstate` objects,
* ``*_reference``: an independent finite-difference spectrum built from the
  physical Hamiltonian alone.

``dimensionless_form`` returns the equation the matching works on.
"""
from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field
from typing import Callable, Mapping

import numpy as np

from .errors import InvalidParameterError, InvalidSpecError, NoBoundStatesError
from .matching import (
    DimensionlessTISE,
    MatchSolution,
    NondimensionalizationMap,
    admissible_morse_levels,
    morse_template_parameters,
)
from .oracle import NumericalSpectrumReport, conservative_fd_spectrum, fd_spectrum, quadrature
from .phase_space import Grid
from .templates import Family, PolynomialSpec, eval_polynomial, template_for

__all__ = [
    "HBAR_EV_AMU_ANGSTROM",
    "HarmonicOscillatorParams",
    "RigidRotorParams",
    "HydrogenParams",
    "MorseParams",
    "Eigenstate",
    "dimensionless_form",
    "ho_match",
    "ho_spectrum",
    "ho_reference",
    "rotor_match",
    "rotor_spectrum",
    "rotor_full_wavefunction",
    "rotor_reference",
    "hydrogen_match",
    "hydrogen_spectrum",
    "hydrogen_scale_for_energy",
    "hydrogen_reference",
    "morse_match",
    "morse_spectrum",
    "morse_reference",
]

# hbar in sqrt(eV * amu) * angstrom: energies in eV, masses in amu, lengths in angstrom
HBAR_EV_AMU_ANGSTROM = 0.06465415
BOHR_RADIUS_ANGSTROM = 0.529177210903
HARTREE_HALF_EV = -13.605693122994


def _positive(**values) -> None:
    for name, value in values.items():
        if not (isinstance(value, (int, float)) and math.isfinite(value) and value > 0):
            raise InvalidParameterError(f"{name} must be a positive finite number, got {value!r}")


@dataclass(frozen=True)
class HarmonicOscillatorParams:
    mass: float = 1.0
    omega: float = 1.0
    hbar: float = 1.0

    def __post_init__(self):
        _positive(mass=self.mass, omega=self.omega, hbar=self.hbar)

    @property
    def x_c(self) -> float:
        return math.sqrt(self.hbar / (self.mass * self.omega))


@dataclass(frozen=True)
class RigidRotorParams:
    mu: float = 1.0
    bond_length: float = 1.0
    hbar: float = 1.0

    def __post_init__(self):
        _positive(mu=self.mu, bond_length=self.bond_length, hbar=self.hbar)

    @property
    def inertia(self) -> float:
        return self.mu * self.bond_length**2

    @property
    def energy_scale(self) -> float:
        return self.hbar**2 / (2.0 * self.inertia)


@dataclass(frozen=True)
class HydrogenParams:
    """Bohr radius ``a0`` and ground-state energy ``E_g`` (negative).

    The defaults are atomic units (hbar = m_e = a0 = 1, E_g = -1/2).
    """

    a0: float = 1.0
    E_g: float = -0.5

    def __post_init__(self):
        _positive(a0=self.a0)
        if not (math.isfinite(self.E_g) and self.E_g < 0):
            raise InvalidParameterError(f"E_g must be negative, got {self.E_g!r}")

    @classmethod
    def from_constants(cls, electron_mass: float, hbar: float, a0: float) -> "HydrogenParams":
        _positive(electron_mass=electron_mass, hbar=hbar, a0=a0)
        return cls(a0, -(hbar**2) / (2.0 * electron_mass * a0**2))

    @classmethod
    def electron_volts(cls) -> "HydrogenParams":
        return cls(BOHR_RADIUS_ANGSTROM, HARTREE_HALF_EV)


@dataclass(frozen=True)
class MorseParams:
    """Morse well ``D_e (exp(-2 alpha q) - 2 exp(-alpha q))``."""

    mass: float = 1.0
    D_e: float = 1.0
    alpha: float = 1.0
    hbar: float = 1.0

    def __post_init__(self):
        _positive(mass=self.mass, D_e=self.D_e, alpha=self.alpha, hbar=self.hbar)

    @classmethod
    def from_delta(cls, delta: float, D_e: float = 1.0, mass: float = 1.0, hbar: float = 1.0) -> "MorseParams":
        """Parameters with the requested well parameter ``delta``."""
        _positive(delta=delta, D_e=D_e, mass=mass, hbar=hbar)
        return cls(mass, D_e, math.sqrt(2.0 * mass * D_e) / (delta * hbar), hbar)

    @property
    def delta(self) -> float:
        return math.sqrt(2.0 * self.mass * self.D_e) / (self.alpha * self.hbar)

    @property
    def energy_scale(self) -> float:
        return (self.alpha * self.hbar) ** 2 / (2.0 * self.mass)


@dataclass(frozen=True)
class Eigenstate:
    """One bound state.

    ``wavefunction`` is the unnormalized ``g * p`` as a function of the
    physical coordinate; ``norm`` is its L2 norm under ``measure`` so that
    ``normalized(q) = wavefunction(q) / norm``.
    """

    quantum_numbers: Mapping[str, int]
    epsilon: float
    energy: float
    wavefunction: Callable
    norm: float
    coordinate: str
    measure: str
    match: MatchSolution = field(repr=False)

    def normalized(self, q):
        return self.wavefunction(q) / self.norm


# harmonic oscillator ------------------------------------------------------------


def _ho_form(params: HarmonicOscillatorParams) -> DimensionlessTISE:
    return DimensionlessTISE(
        b=lambda x: 0.0 * np.asarray(x, dtype=float),
        b_prime=lambda x: 0.0 * np.asarray(x, dtype=float),
        v=lambda x: np.asarray(x, dtype=float) ** 2,
        domain=(-math.inf, math.inf),
    )


def ho_match(params: HarmonicOscillatorParams, n: int) -> MatchSolution:
    """Hermite identification: ``x_c = sqrt(hbar/(m omega))``, ``eps = 1 + 2n``."""
    if n < 0:
        raise InvalidSpecError(f"oscillator quantum number must be >= 0, got {n}")
    scale = NondimensionalizationMap.from_length(params.x_c, params.mass, params.hbar)
    epsilon = 1.0 + 2.0 * n

    def energy_of(n):
        return params.hbar * params.omega * (n + 0.5)

    return MatchSolution(
        template=template_for(Family.HERMITE),
        spec=PolynomialSpec.hermite(n),
        tise=_ho_form(params).bound(epsilon),
        param_map={"lambda": n, "x_c": params.x_c},
        scale=scale,
        energy=energy_of(n),
        energy_of=energy_of,
        g=lambda x: np.exp(-0.5 * np.asarray(x, dtype=float) ** 2),
        to_dimensionless=lambda q: np.asarray(q, dtype=float) / params.x_c,
        verify_grid=Grid(-5.0, 5.0, 500),
    )


def ho_spectrum(params: HarmonicOscillatorParams, n_max: int) -> list[Eigenstate]:
    if n_max < 0:
        raise InvalidParameterError(f"n_max must be >= 0, got {n_max}")
    states = []
    for n in range(n_max + 1):
        match = ho_match(params, n)
        psi = _physical(match)
        half = params.x_c * max(12.0, math.sqrt(2 * n + 1) + 10.0)
        norm = math.sqrt(quadrature(lambda q: psi(q) ** 2, Grid(-half, half, 4001)))
        states.append(Eigenstate({"n": n}, match.epsilon, match.energy, psi, norm, "q", "dq", match))
    return states


@functools.lru_cache(maxsize=None)
def ho_reference(params: HarmonicOscillatorParams, count: int, half_width: float = 12.0, n_points: int = 4001) -> NumericalSpectrumReport:
    """Finite-difference energies of ``-hbar^2/2m d^2/dq^2 + m omega^2 q^2 / 2``.

    Lengths are measured in ``L = sqrt(hbar/(m omega))`` only to keep the
    matrix well scaled; eigenvalues are returned in physical energy units.
    """
    L = params.x_c
    unit = params.hbar**2 / (2.0 * params.mass * L**2)
    V = lambda q: 0.5 * params.mass * params.omega**2 * q**2
    report = fd_spectrum(lambda x: V(L * x) / unit, Grid(-half_width, half_width, n_points), count)
    return report.scaled(unit)


# rigid rotor --------------------------------------------------------------------


def _rotor_form(m: int) -> DimensionlessTISE:
    def cot(t):
        return np.cos(t) / np.sin(t)

    return DimensionlessTISE(
        b=lambda t: -cot(t),
        b_prime=lambda t: 1.0 / np.sin(t) ** 2,
        v=lambda t: m * m / np.sin(t) ** 2,
        domain=(0.0, math.pi),
        singular_points=(0.0, math.pi),
    )


def rotor_match(params: RigidRotorParams, l: int, m: int) -> MatchSolution:
    """Polar Legendre identification: ``beta = l(l+1)``, ``g = 1``."""
    if l < 0 or abs(m) > l:
        raise InvalidSpecError(f"rotor needs l >= 0 and |m| <= l, got l={l}, m={m}")
    beta = float(l * (l + 1))
    unit = params.energy_scale

    def energy_of(l, m=0):
        return unit * l * (l + 1)

    return MatchSolution(
        template=template_for(Family.POLAR_ASSOC_LEGENDRE),
        spec=PolynomialSpec.polar_assoc_legendre(l, m),
        tise=_rotor_form(m).bound(beta),
        param_map={"l": l, "m": m, "beta": beta},
        scale=NondimensionalizationMap(params.bond_length, unit),
        energy=energy_of(l),
        energy_of=energy_of,
        g=lambda t: np.ones_like(np.asarray(t, dtype=float)),
        to_dimensionless=lambda theta: np.asarray(theta, dtype=float),
        verify_grid=Grid(0.05, math.pi - 0.05, 500),
    )


def rotor_spectrum(params: RigidRotorParams, l_max: int) -> list[Eigenstate]:
    """All ``(l, m)`` states up to ``l_max``; ``wavefunction`` is Theta(theta)."""
    if l_max < 0:
        raise InvalidParameterError(f"l_max must be >= 0, got {l_max}")
    grid = Grid(0.0, math.pi, 2001)
    states = []
    for l in range(l_max + 1):
        for m in range(-l, l + 1):
            match = rotor_match(params, l, m)
            theta = _physical(match)
            norm = math.sqrt(quadrature(lambda t: theta(t) ** 2, grid, np.sin))
            states.append(Eigenstate({"l": l, "m": m}, match.epsilon, match.energy, theta, norm, "theta", "sin(theta) dtheta", match))
    return states


def rotor_full_wavefunction(params: RigidRotorParams, l: int, m: int) -> Callable:
    """``(theta, phi) -> (Re, Im)`` of the normalized ``Theta(theta) exp(i m phi) / sqrt(2 pi)``."""
    state = next(s for s in rotor_spectrum(params, l) if s.quantum_numbers == {"l": l, "m": m})

    def psi(theta, phi):
        radial = state.normalized(theta) / math.sqrt(2.0 * math.pi)
        return radial * np.cos(m * np.asarray(phi)), radial * np.sin(m * np.asarray(phi))

    return psi


@functools.lru_cache(maxsize=None)
def rotor_reference(params: RigidRotorParams, m: int, count: int, n_points: int = 2001) -> NumericalSpectrumReport:
    """Finite-difference energies of the m-block of the rotor.

    m = 0 is solved in ``t = cos(theta)`` as ``-((1 - t^2) u')'`` with zero
    flux at ``t = +-1``; other m use the theta form with its first-derivative
    term removed and Dirichlet walls at 0 and pi.
    """
    unit = params.energy_scale
    if m == 0:
        report = conservative_fd_spectrum(lambda t: 1.0 - t * t, lambda t: 0.0 * t, Grid(-1.0, 1.0, n_points), count)
    else:
        report = fd_spectrum(
            lambda t: m * m / np.sin(t) ** 2,
            Grid(0.0, math.pi, n_points),
            count,
            first_derivative_b=lambda t: -np.cos(t) / np.sin(t),
            b_prime=lambda t: 1.0 / np.sin(t) ** 2,
        )
    return report.scaled(unit)


# hydrogen -----------------------------------------------------------------------


def _hydrogen_form(n: int, l: int) -> DimensionlessTISE:
    """Radial equation in ``rho = r / r_c`` with ``r_c = a0 n / 2``."""
    return DimensionlessTISE(
        b=lambda rho: -2.0 / rho,
        b_prime=lambda rho: 2.0 / rho**2,
        v=lambda rho: -n / rho + l * (l + 1) / rho**2,
        domain=(0.0, math.inf),
        singular_points=(0.0,),
    )


def hydrogen_scale_for_energy(params: HydrogenParams, energy: float) -> float:
    """Length scale ``r_c = sqrt(a0^2 E_g / (4 E))`` fixed by a bound energy E < 0."""
    if not energy < 0:
        raise InvalidParameterError(f"bound hydrogen energies are negative, got {energy}")
    return math.sqrt(params.a0**2 * params.E_g / (4.0 * energy))


def hydrogen_match(params: HydrogenParams, n: int, l: int) -> MatchSolution:
    """Laguerre identification: ``nu = 2l+1``, ``lam = n-l-1``, ``E = E_g / n^2``.

    Before quantization the scale is energy dependent; once ``E = E_g/n^2``
    it collapses to ``r_c = a0 n / 2``, which is what is stored here.
    """
    if n < 1 or not 0 <= l <= n - 1:
        raise InvalidSpecError(f"hydrogen needs n >= 1 and 0 <= l <= n-1, got n={n}, l={l}")

    def energy_of(n, l=0):
        return params.E_g / n**2

    energy = energy_of(n)
    r_c = hydrogen_scale_for_energy(params, energy)
    assert math.isclose(r_c, params.a0 * n / 2.0, rel_tol=1e-12)
    unit = -params.E_g * params.a0**2 / r_c**2
    epsilon = energy / unit
    return MatchSolution(
        template=template_for(Family.ASSOC_LAGUERRE),
        spec=PolynomialSpec.assoc_laguerre(n - l - 1, 2 * l + 1),
        tise=_hydrogen_form(n, l).bound(epsilon),
        param_map={"n": n, "l": l, "lambda": n - l - 1, "nu": 2 * l + 1, "r_c": r_c},
        scale=NondimensionalizationMap(r_c, unit),
        energy=energy,
        energy_of=energy_of,
        g=lambda rho: np.asarray(rho, dtype=float) ** l * np.exp(-0.5 * np.asarray(rho, dtype=float)),
        to_dimensionless=lambda r: np.asarray(r, dtype=float) / r_c,
        verify_grid=Grid(0.1, 60.0, 1000),
    )


def hydrogen_spectrum(params: HydrogenParams, n_max: int) -> list[Eigenstate]:
    """States ``n = 1..n_max``, ``l = 0..n-1``; ``wavefunction`` is R(r)."""
    if n_max < 1:
        raise InvalidParameterError(f"n_max must be >= 1, got {n_max}")
    states = []
    for n in range(1, n_max + 1):
        for l in range(n):
            match = hydrogen_match(params, n, l)
            radial = _physical(match)
            r_max = match.scale.x_c * (4.0 * n + 80.0)
            norm = math.sqrt(quadrature(lambda r: radial(r) ** 2, Grid(0.0, r_max, 4001), lambda r: r * r))
            states.append(Eigenstate({"n": n, "l": l}, match.epsilon, match.energy, radial, norm, "r", "r^2 dr", match))
    return states


@functools.lru_cache(maxsize=None)
def hydrogen_reference(params: HydrogenParams, l: int, count: int, r_max_bohr: float = 160.0, n_points: int = 4001) -> NumericalSpectrumReport:
    """Finite-difference energies of the radial equation for angular momentum ``l``.

    ``R'' + (2/r) R' + ...`` is symmetrized by ``u = r R`` (done generically
    by removing the first-derivative term); r is measured in Bohr radii.
    """
    unit = -params.E_g
    report = fd_spectrum(
        lambda r: l * (l + 1) / r**2 - 2.0 / r,
        Grid(0.0, r_max_bohr, n_points),
        count,
        first_derivative_b=lambda r: -2.0 / r,
        b_prime=lambda r: 2.0 / r**2,
    )
    return report.scaled(unit)


# Morse --------------------------------------------------------------------------


def _morse_form(delta: float) -> DimensionlessTISE:
    """Equation in ``y = 2 delta exp(-alpha q)``: energy enters as ``eps / y^2``."""
    return DimensionlessTISE(
        b=lambda y: -1.0 / y,
        b_prime=lambda y: 1.0 / y**2,
        v=lambda y: -delta / y + 0.25,
        domain=(0.0, math.inf),
        weight=lambda y: 1.0 / y**2,
        singular_points=(0.0,),
    )


def morse_match(params: MorseParams, n: int) -> MatchSolution:
    """Confluent identification on the retained root: ``a = -n``, ``c = 1 + 2 sqrt(-eps)``."""
    delta = params.delta
    if n not in admissible_morse_levels(delta):
        raise InvalidSpecError(f"n={n} is not a bound Morse level for delta={delta:.6g}")
    s = delta - n - 0.5
    epsilon = -s * s
    a, c = morse_template_parameters(delta, epsilon)
    assert abs(a + n) < 1e-9 and math.isclose(math.sqrt(-epsilon), s)
    unit = params.energy_scale

    def energy_of(n):
        return -params.D_e * (1.0 - (n + 0.5) / delta) ** 2

    return MatchSolution(
        template=template_for(Family.CONFLUENT_HYPERGEOMETRIC),
        spec=PolynomialSpec.confluent(-n, c),
        tise=_morse_form(delta).bound(epsilon),
        param_map={"n": n, "a": -n, "c": c, "delta": delta, "sqrt_neg_epsilon": s},
        scale=NondimensionalizationMap(1.0 / params.alpha, unit),
        energy=energy_of(n),
        energy_of=energy_of,
        g=lambda y: np.exp(-0.5 * np.asarray(y, dtype=float)) * np.asarray(y, dtype=float) ** s,
        to_dimensionless=lambda q: 2.0 * delta * np.exp(-params.alpha * np.asarray(q, dtype=float)),
        verify_grid=Grid(0.1, 30.0, 1000),
    )


def morse_q_grid(params: MorseParams, n: int, n_points: int = 8001) -> Grid:
    """Grid in q wide enough for state n to decay on both sides."""
    delta = params.delta
    s = delta - n - 0.5
    y_max = 2.0 * s + 4.0 * n + 90.0
    z_lo = -math.log(y_max / (2.0 * delta))
    z_hi = math.log(2.0 * delta) + 40.0 / s
    return Grid(z_lo / params.alpha, z_hi / params.alpha, n_points)


def morse_spectrum(params: MorseParams) -> list[Eigenstate]:
    """All bound states; ``wavefunction`` is psi(q)."""
    delta = params.delta
    if delta <= 0.5:
        raise NoBoundStatesError(f"no bound states: delta = {delta:.6g} <= 1/2")
    states = []
    for n in admissible_morse_levels(delta):
        match = morse_match(params, n)
        psi = _physical(match)
        norm = math.sqrt(quadrature(lambda q: psi(q) ** 2, morse_q_grid(params, n)))
        states.append(Eigenstate({"n": n}, match.epsilon, match.energy, psi, norm, "q", "dq = dy / (alpha y)", match))
    return states


@functools.lru_cache(maxsize=None)
def morse_reference(params: MorseParams, count: int, z_range: tuple[float, float] = (-2.0, 40.0), n_points: int = 4001) -> NumericalSpectrumReport:
    """Finite-difference energies of the Morse well in ``z = alpha q``."""
    d2 = params.delta**2
    report = fd_spectrum(lambda z: d2 * (np.exp(-2.0 * z) - 2.0 * np.exp(-z)), Grid(*z_range, n_points), count)
    return report.scaled(params.energy_scale)


# shared -------------------------------------------------------------------------


def _physical(match: MatchSolution) -> Callable:
    g, spec, to_x = match.g, match.spec, match.to_dimensionless

    def psi(q):
        x = to_x(q)
        with np.errstate(divide="ignore", invalid="ignore"):
            return g(x) * eval_polynomial(spec, x)

    return psi


@functools.singledispatch
def dimensionless_form(params, **quantum_numbers) -> DimensionlessTISE:
    """Dimensionless equation of a model, with epsilon left unbound.

    Rotor needs ``m``; hydrogen needs ``n`` (it fixes the length scale) and
    ``l``.
    """
    raise TypeError(f"no dimensionless form for {type(params).__name__}")


@dimensionless_form.register
def _(params: HarmonicOscillatorParams, **qn) -> DimensionlessTISE:
    return _ho_form(params)


@dimensionless_form.register
def _(params: RigidRotorParams, m: int = 0, **qn) -> DimensionlessTISE:
    return _rotor_form(m)


@dimensionless_form.register
def _(params: HydrogenParams, n: int = 1, l: int = 0, **qn) -> DimensionlessTISE:
    return _hydrogen_form(n, l)


@dimensionless_form.register
def _(params: MorseParams, **qn) -> DimensionlessTISE:
    return _morse_form(params.delta)
