"""
Template ODEs with polynomial solutions.

Each template is ``P y'' + Q y' + R y = 0`` together with its invariant

    G(x) = -(Q^2 - 2 Q P' + 2 P (Q' - 2 R)) / (4 P^2)

which is what a Schrodinger equation has to reproduce for the template to
apply.  Families and their polynomial solutions:

=========================  ==================  =====================================
family                     polynomial          parameters (degree, order)
=========================  ==================  =====================================
hermite                    H_lam(x)            lam >= 0
assoc_legendre             P_l^m(x)            l >= 0, |m| <= l
polar_assoc_legendre       P_l^m(cos theta)    l >= 0, |m| <= l
assoc_laguerre             L_lam^nu(x)         lam >= 0, nu >= 0 integer
confluent_hypergeometric   1F1(a; c; x)        a = -degree <= 0, c > 0
=========================  ==================  =====================================

Polynomials are evaluated by recurrence and differentiated with the
families' derivative identities, never by finite differences.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable

import numpy as np

from .errors import InvalidSpecError, SingularPointError

__all__ = [
    "Family",
    "PolynomialSpec",
    "TemplateODE",
    "TEMPLATES",
    "template_for",
    "template_invariant",
    "template_invariant_from_pqr",
    "eval_polynomial",
    "eval_polynomial_derivatives",
    "eval_confluent_hypergeometric",
    "ode_residual",
    "template_residual",
]


class Family(str, Enum):
    HERMITE = "hermite"
    ASSOC_LEGENDRE = "assoc_legendre"
    POLAR_ASSOC_LEGENDRE = "polar_assoc_legendre"
    ASSOC_LAGUERRE = "assoc_laguerre"
    CONFLUENT_HYPERGEOMETRIC = "confluent_hypergeometric"


def _is_integer(value) -> bool:
    return float(value) == math.floor(float(value))


@dataclass(frozen=True)
class PolynomialSpec:
    """Polynomial solution of a template: family, degree and order.

    ``degree`` is lam (Hermite, Laguerre), l (Legendre) or -a (confluent);
    ``order`` is m (Legendre), nu (Laguerre) or c (confluent) and is unused
    for Hermite.
    """

    family: Family
    degree: int
    order: float = 0

    def __post_init__(self):
        object.__setattr__(self, "family", Family(self.family))
        if not _is_integer(self.degree):
            raise InvalidSpecError(f"{self.family.value}: degree must be an integer, got {self.degree}")
        object.__setattr__(self, "degree", int(self.degree))
        fam, n, k = self.family, self.degree, self.order
        if n < 0:
            raise InvalidSpecError(f"{fam.value}: degree must be >= 0, got {n}")
        if fam in (Family.ASSOC_LEGENDRE, Family.POLAR_ASSOC_LEGENDRE):
            if not _is_integer(k) or abs(k) > n:
                raise InvalidSpecError(f"{fam.value}: need integer m with -l <= m <= l, got l={n}, m={k}")
            object.__setattr__(self, "order", int(k))
        elif fam is Family.ASSOC_LAGUERRE:
            if not _is_integer(k) or k < 0:
                raise InvalidSpecError(f"{fam.value}: need integer nu >= 0, got nu={k}")
            object.__setattr__(self, "order", int(k))
        elif fam is Family.CONFLUENT_HYPERGEOMETRIC:
            if not k > 0:
                raise InvalidSpecError(f"{fam.value}: need c > 0, got c={k}")
            object.__setattr__(self, "order", float(k))

    @classmethod
    def hermite(cls, lam: int) -> "PolynomialSpec":
        return cls(Family.HERMITE, lam)

    @classmethod
    def assoc_legendre(cls, l: int, m: int) -> "PolynomialSpec":
        return cls(Family.ASSOC_LEGENDRE, l, m)

    @classmethod
    def polar_assoc_legendre(cls, l: int, m: int) -> "PolynomialSpec":
        return cls(Family.POLAR_ASSOC_LEGENDRE, l, m)

    @classmethod
    def assoc_laguerre(cls, lam: int, nu: int) -> "PolynomialSpec":
        return cls(Family.ASSOC_LAGUERRE, lam, nu)

    @classmethod
    def confluent(cls, a: int, c: float) -> "PolynomialSpec":
        if not _is_integer(a) or a > 0:
            raise InvalidSpecError(f"confluent_hypergeometric: need integer a <= 0, got a={a}")
        return cls(Family.CONFLUENT_HYPERGEOMETRIC, -int(a), c)

    @property
    def a(self) -> int:
        return -self.degree

    @property
    def c(self) -> float:
        return float(self.order)


Coefficient = Callable[[np.ndarray, PolynomialSpec], np.ndarray]


@dataclass(frozen=True)
class TemplateODE:
    """One template family: coefficient functions, their derivatives and G."""

    family: Family
    P: Coefficient
    Q: Coefficient
    R: Coefficient
    dP: Coefficient
    dQ: Coefficient
    G: Coefficient
    domain: tuple[float, float]
    singular_points: tuple[float, ...]

    def is_singular(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if self.family is Family.POLAR_ASSOC_LEGENDRE:
            return np.abs(np.sin(x)) < 1e-12
        hit = np.zeros(x.shape, dtype=bool)
        for s in self.singular_points:
            hit |= np.abs(x - s) < 1e-12
        return hit


def _const(value, x):
    return np.full(np.shape(x), float(value)) if np.ndim(x) else float(value)


def _hermite() -> TemplateODE:
    return TemplateODE(
        Family.HERMITE,
        P=lambda x, s: _const(1.0, x),
        Q=lambda x, s: -2.0 * x,
        R=lambda x, s: _const(2.0 * s.degree, x),
        dP=lambda x, s: _const(0.0, x),
        dQ=lambda x, s: _const(-2.0, x),
        G=lambda x, s: 1.0 + 2.0 * s.degree - x * x,
        domain=(-math.inf, math.inf),
        singular_points=(),
    )


def _assoc_legendre() -> TemplateODE:
    def G(x, s):
        l, m = s.degree, s.order
        return -(m * m - 1.0 + (x * x - 1.0) * (l + 1) * l) / (x * x - 1.0) ** 2

    return TemplateODE(
        Family.ASSOC_LEGENDRE,
        P=lambda x, s: 1.0 - x * x,
        Q=lambda x, s: -2.0 * x,
        R=lambda x, s: s.degree * (s.degree + 1.0) - s.order**2 / (1.0 - x * x),
        dP=lambda x, s: -2.0 * x,
        dQ=lambda x, s: _const(-2.0, x),
        G=G,
        domain=(-1.0, 1.0),
        singular_points=(-1.0, 1.0),
    )


def _polar_assoc_legendre() -> TemplateODE:
    def G(t, s):
        l, m = s.degree, s.order
        return 0.25 + l * (l + 1.0) + (0.25 - m * m) / np.sin(t) ** 2

    return TemplateODE(
        Family.POLAR_ASSOC_LEGENDRE,
        P=lambda t, s: _const(1.0, t),
        Q=lambda t, s: np.cos(t) / np.sin(t),
        R=lambda t, s: s.degree * (s.degree + 1.0) - s.order**2 / np.sin(t) ** 2,
        dP=lambda t, s: _const(0.0, t),
        dQ=lambda t, s: -1.0 / np.sin(t) ** 2,
        G=G,
        domain=(0.0, math.pi),
        singular_points=(0.0, math.pi),
    )


def _assoc_laguerre() -> TemplateODE:
    def G(x, s):
        lam, nu = s.degree, s.order
        return -0.25 + (1.0 + nu + 2.0 * lam) / (2.0 * x) + (1.0 - nu * nu) / (4.0 * x * x)

    return TemplateODE(
        Family.ASSOC_LAGUERRE,
        P=lambda x, s: x * 1.0,
        Q=lambda x, s: s.order + 1.0 - x,
        R=lambda x, s: _const(s.degree, x),
        dP=lambda x, s: _const(1.0, x),
        dQ=lambda x, s: _const(-1.0, x),
        G=G,
        domain=(0.0, math.inf),
        singular_points=(0.0,),
    )


def _confluent() -> TemplateODE:
    def G(x, s):
        a, c = s.a, s.c
        return -0.25 + (c - 2.0 * a) / (2.0 * x) + c * (2.0 - c) / (4.0 * x * x)

    return TemplateODE(
        Family.CONFLUENT_HYPERGEOMETRIC,
        P=lambda x, s: x * 1.0,
        Q=lambda x, s: s.c - x,
        R=lambda x, s: _const(-s.a, x),
        dP=lambda x, s: _const(1.0, x),
        dQ=lambda x, s: _const(-1.0, x),
        G=G,
        domain=(0.0, math.inf),
        singular_points=(0.0,),
    )


TEMPLATES: dict[Family, TemplateODE] = {
    Family.HERMITE: _hermite(),
    Family.ASSOC_LEGENDRE: _assoc_legendre(),
    Family.POLAR_ASSOC_LEGENDRE: _polar_assoc_legendre(),
    Family.ASSOC_LAGUERRE: _assoc_laguerre(),
    Family.CONFLUENT_HYPERGEOMETRIC: _confluent(),
}


def template_for(family) -> TemplateODE:
    return TEMPLATES[Family(family)]


def _as_template(template) -> TemplateODE:
    return template if isinstance(template, TemplateODE) else template_for(template)


def _check_regular(template: TemplateODE, x) -> None:
    if np.any(template.is_singular(x)):
        raise SingularPointError(f"{template.family.value}: x is a singular point of the template")


def template_invariant(template, spec: PolynomialSpec, x):
    """Closed-form G of the template at x."""
    template = _as_template(template)
    _check_regular(template, x)
    with np.errstate(divide="ignore", invalid="ignore"):
        return template.G(np.asarray(x, dtype=float) if np.ndim(x) else float(x), spec)


def template_invariant_from_pqr(template, spec: PolynomialSpec, x):
    """G assembled from P, Q, R and the analytic P', Q'."""
    template = _as_template(template)
    x = np.asarray(x, dtype=float) if np.ndim(x) else float(x)
    with np.errstate(divide="ignore", invalid="ignore"):
        P = template.P(x, spec)
        if np.any(np.abs(P) == 0.0) or np.any(template.is_singular(x)):
            raise SingularPointError(f"{template.family.value}: P vanishes at x")
        Q, R = template.Q(x, spec), template.R(x, spec)
        dP, dQ = template.dP(x, spec), template.dQ(x, spec)
        return -(Q * Q - 2.0 * Q * dP + 2.0 * P * (dQ - 2.0 * R)) / (4.0 * P * P)


# polynomial families ---------------------------------------------------------


def _hermite_upto(n: int, x) -> list:
    """[H_0(x), ..., H_n(x)] via H_{k+1} = 2x H_k - 2k H_{k-1}."""
    h = [np.ones_like(x) if np.ndim(x) else 1.0]
    if n >= 1:
        h.append(2.0 * x)
    for k in range(1, n):
        h.append(2.0 * x * h[k] - 2.0 * k * h[k - 1])
    return h


def _laguerre(n: int, alpha: float, x):
    """L_n^alpha(x) via (k+1) L_{k+1} = (2k+1+alpha-x) L_k - (k+alpha) L_{k-1}."""
    if n < 0:
        return np.zeros_like(x) if np.ndim(x) else 0.0
    prev = np.ones_like(x) if np.ndim(x) else 1.0
    if n == 0:
        return prev
    cur = 1.0 + alpha - x
    for k in range(1, n):
        prev, cur = cur, ((2 * k + 1 + alpha - x) * cur - (k + alpha) * prev) / (k + 1)
    return cur


def _legendre_column(l: int, m: int, x) -> list:
    """[P_0^m, ..., P_l^m] for m >= 0 with the Condon-Shortley phase; zero below k = m."""
    zero = np.zeros_like(x) if np.ndim(x) else 0.0
    out = [zero] * (l + 1)
    if m > l:
        return out
    pmm = (-1.0) ** m * _double_factorial(2 * m - 1) * (1.0 - x * x) ** (0.5 * m)
    out[m] = pmm
    if l > m:
        out[m + 1] = x * (2 * m + 1) * pmm
    for k in range(m + 2, l + 1):
        out[k] = (x * (2 * k - 1) * out[k - 1] - (k + m - 1) * out[k - 2]) / (k - m)
    return out


def _double_factorial(n: int) -> float:
    return float(math.prod(range(n, 0, -2))) if n > 0 else 1.0


def _legendre_derivs(l: int, m: int, x):
    """P_l^m and its first two x-derivatives, from (x^2-1) P' = l x P_l - (l+m) P_{l-1}."""
    mm = abs(m)
    col = _legendre_column(l, mm, x)
    zero = np.zeros_like(x) if np.ndim(x) else 0.0
    p = col[l]
    p1 = col[l - 1] if l >= 1 else zero
    p2 = col[l - 2] if l >= 2 else zero
    w = x * x - 1.0
    dp = (l * x * p - (l + mm) * p1) / w
    dp1 = ((l - 1) * x * p1 - (l - 1 + mm) * p2) / w if l >= 1 else zero
    d2p = (l * p + (l - 2) * x * dp - (l + mm) * dp1) / w
    if m < 0:
        factor = (-1.0) ** mm * math.factorial(l - mm) / math.factorial(l + mm)
        p, dp, d2p = factor * p, factor * dp, factor * d2p
    return p, dp, d2p


def eval_confluent_hypergeometric(a, c, x):
    """Terminating Kummer series ``1F1(a; c; x)`` for integer ``a <= 0``."""
    if not c > 0:
        raise InvalidSpecError(f"confluent hypergeometric needs c > 0, got c={c}")
    if not _is_integer(a) or a > 0:
        raise InvalidSpecError(f"only terminating series (integer a <= 0) are supported, got a={a}")
    a, c = int(a), float(c)
    term = np.ones_like(x, dtype=float) if np.ndim(x) else 1.0
    total = term
    for k in range(-a):
        term = term * (a + k) * x / ((c + k) * (k + 1))
        total = total + term
    return total


def _confluent_derivs(a: int, c: float, x):
    y = eval_confluent_hypergeometric(a, c, x)
    zero = np.zeros_like(x, dtype=float) if np.ndim(x) else 0.0
    dy = (a / c) * eval_confluent_hypergeometric(a + 1, c + 1, x) if a < 0 else zero
    d2y = (a * (a + 1) / (c * (c + 1))) * eval_confluent_hypergeometric(a + 2, c + 2, x) if a < -1 else zero
    return y, dy, d2y


def eval_polynomial_derivatives(spec: PolynomialSpec, x):
    """``(y, y', y'')`` of the polynomial described by ``spec`` at x."""
    x = np.asarray(x, dtype=float) if np.ndim(x) else float(x)
    fam, n, k = spec.family, spec.degree, spec.order
    if fam is Family.HERMITE:
        h = _hermite_upto(n, x)
        zero = 0.0 * h[0]
        dy = 2.0 * n * h[n - 1] if n >= 1 else zero
        d2y = 4.0 * n * (n - 1) * h[n - 2] if n >= 2 else zero
        return h[n], dy, d2y
    if fam is Family.ASSOC_LAGUERRE:
        return _laguerre(n, k, x), -_laguerre(n - 1, k + 1, x), _laguerre(n - 2, k + 2, x)
    if fam is Family.CONFLUENT_HYPERGEOMETRIC:
        return _confluent_derivs(spec.a, spec.c, x)
    if fam is Family.ASSOC_LEGENDRE:
        with np.errstate(divide="ignore", invalid="ignore"):
            return _legendre_derivs(n, k, x)
    if fam is Family.POLAR_ASSOC_LEGENDRE:
        t, s = np.cos(x), np.sin(x)
        with np.errstate(divide="ignore", invalid="ignore"):
            p, dp, d2p = _legendre_derivs(n, k, t)
        return p, -s * dp, s * s * d2p - t * dp
    raise InvalidSpecError(f"unknown family {fam}")


def eval_polynomial(spec: PolynomialSpec, x):
    """Value of the polynomial described by ``spec`` (polar Legendre: ``P_l^m(cos x)``)."""
    x = np.asarray(x, dtype=float) if np.ndim(x) else float(x)
    fam, n, k = spec.family, spec.degree, spec.order
    if fam is Family.HERMITE:
        return _hermite_upto(n, x)[n]
    if fam is Family.ASSOC_LAGUERRE:
        return _laguerre(n, k, x)
    if fam is Family.CONFLUENT_HYPERGEOMETRIC:
        return eval_confluent_hypergeometric(spec.a, spec.c, x)
    if fam in (Family.ASSOC_LEGENDRE, Family.POLAR_ASSOC_LEGENDRE):
        t = np.cos(x) if fam is Family.POLAR_ASSOC_LEGENDRE else x
        p = _legendre_column(n, abs(k), t)[n]
        if k < 0:
            p = p * (-1.0) ** k * math.factorial(n + k) / math.factorial(n - k)
        return p
    raise InvalidSpecError(f"unknown family {fam}")


def ode_residual(template, spec: PolynomialSpec, x, y, dy, d2y):
    """``P y'' + Q y' + R y`` for caller-supplied y and derivatives."""
    template = _as_template(template)
    _check_regular(template, x)
    with np.errstate(divide="ignore", invalid="ignore"):
        return template.P(x, spec) * d2y + template.Q(x, spec) * dy + template.R(x, spec) * y


def template_residual(template, spec: PolynomialSpec, x):
    """Residual of the template ODE for its own polynomial solution."""
    template = _as_template(template)
    if template.family is not spec.family:
        raise InvalidSpecError(f"spec family {spec.family.value} does not match template {template.family.value}")
    x = np.asarray(x, dtype=float) if np.ndim(x) else float(x)
    y, dy, d2y = eval_polynomial_derivatives(spec, x)
    return ode_residual(template, spec, x, y, dy, d2y)
