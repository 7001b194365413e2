"""Core SVEIQHR model: parameters, state, derived constants, vector field.

The model tracks seven compartments: susceptible (S), vaccinated (V),
exposed (E), infected (I), quarantined (Q), hospitalised (H) and
recovered (R). Five intervention rates u1..u5 (vaccination, mobility
restriction, contact tracing, rapid testing, treatment) modulate the
flows. Everything in this module is a pure function of its arguments;
all values are immutable after construction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import ValidationError

# Baseline scenario scale: Indonesian population at the start of the
# vaccination campaign, with life expectancy 65 years.
N0 = 273523621.0
LIFE_EXPECTANCY_DAYS = 65 * 365  # 23725

# Parameters that must be strictly positive versus those confined to [0, 1].
_POSITIVE = (
    "lam", "lam_prime", "mu", "mu_prime", "beta",
    "alpha", "theta", "gamma", "phi", "kappa", "tau",
)
_UNIT_INTERVAL = ("delta", "u1", "u2", "u3", "u4", "u5")

# Canonical parameter order. Rank ties in the sensitivity table break by
# this order, so it must stay fixed.
PARAM_ORDER = (
    "lambda", "lambda_prime", "mu", "mu_prime", "beta", "delta", "alpha",
    "theta", "gamma", "phi", "kappa", "tau", "u1", "u2", "u3", "u4", "u5",
)

# "lambda" is reserved in Python; map external names to attribute names.
_ATTR_FOR = {"lambda": "lam", "lambda_prime": "lam_prime"}


def _attr(name: str) -> str:
    return _ATTR_FOR.get(name, name)


@dataclass(frozen=True)
class ModelParameters:
    """The 17 model rates and efficacies.

    delta (vaccine efficacy) and u2 (mobility intervention rate) have no
    baseline value and must always be chosen explicitly; the remaining
    fields default to the baseline estimates. lam is the newborn
    recruitment rate mu * N0, kept at full double precision.

    Units: lam, lam_prime in individuals/day; beta in 1/(individual*day);
    delta and u2 dimensionless in [0, 1]; all other rates in 1/day.
    """

    delta: float
    u2: float
    lam: float = N0 / LIFE_EXPECTANCY_DAYS
    lam_prime: float = 3000.0
    mu: float = 1.0 / LIFE_EXPECTANCY_DAYS
    mu_prime: float = 0.0291
    beta: float = 4.74396e-8
    alpha: float = 0.011
    theta: float = 0.4
    gamma: float = 0.1
    phi: float = 0.8198
    kappa: float = 0.1
    tau: float = 0.01
    u1: float = 0.4
    u3: float = 0.5
    u4: float = 0.3
    u5: float = 0.0833

    def __post_init__(self):
        for name in _POSITIVE:
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ValidationError(name, f"must be finite and > 0, got {value!r}")
        for name in _UNIT_INTERVAL:
            value = getattr(self, name)
            if not (math.isfinite(value) and 0.0 <= value <= 1.0):
                raise ValidationError(name, f"must lie in [0, 1], got {value!r}")

    def value_of(self, name: str) -> float:
        """Look up a parameter by its external name (e.g. "lambda")."""
        if name not in PARAM_ORDER:
            raise ValidationError(name, "unknown parameter")
        return getattr(self, _attr(name))

    def with_value(self, name: str, value: float) -> "ModelParameters":
        """Return a copy with one parameter replaced (revalidates)."""
        if name not in PARAM_ORDER:
            raise ValidationError(name, "unknown parameter")
        return replace(self, **{_attr(name): value})

    def as_dict(self) -> dict:
        """Parameters keyed by external name, in canonical order."""
        return {name: self.value_of(name) for name in PARAM_ORDER}


@dataclass(frozen=True)
class State:
    """Compartment populations (individuals, real-valued, non-negative)."""

    S: float
    V: float
    E: float
    I: float
    Q: float
    H: float
    R: float

    def __post_init__(self):
        for name in ("S", "V", "E", "I", "Q", "H", "R"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value >= 0):
                raise ValidationError(name, f"must be finite and >= 0, got {value!r}")

    @property
    def total(self) -> float:
        return self.S + self.V + self.E + self.I + self.Q + self.H + self.R

    @property
    def non_healthy(self) -> float:
        """E + I + Q + H, the series the trajectory figures track."""
        return self.E + self.I + self.Q + self.H

    def as_array(self) -> np.ndarray:
        return np.array([self.S, self.V, self.E, self.I, self.Q, self.H, self.R])

    @classmethod
    def from_array(cls, y: np.ndarray) -> "State":
        return cls(*(float(v) for v in y))

    def as_dict(self) -> dict:
        return {k: getattr(self, k) for k in ("S", "V", "E", "I", "Q", "H", "R")}


@dataclass(frozen=True)
class DerivedConstants:
    """Composite rates k1..k6 and the population cap, derived from the
    parameters.

    k1..k5 are the total outflow rates of E, I, Q, H, R respectively;
    k6 is the disease-free susceptible population; n_cap is the
    asymptotic bound (lam + lam_prime)/mu on the total population.
    """

    k1: float
    k2: float
    k3: float
    k4: float
    k5: float
    k6: float
    n_cap: float


def derive_constants(p: ModelParameters) -> DerivedConstants:
    """Compute k1..k6 and n_cap.

    k6 is evaluated as the sum of its three fractions rather than over a
    common denominator, so each term can be audited independently.
    """
    k1 = p.theta + p.u3 + p.mu
    k2 = p.gamma + p.u4 + p.u5 + p.mu + p.mu_prime
    k3 = p.kappa + p.tau + p.mu
    k4 = p.phi + p.mu + p.mu_prime
    k5 = p.mu + p.alpha
    k6 = (
        p.lam / (p.u1 + p.mu)
        + p.alpha * p.lam_prime * p.kappa / ((p.u1 + p.mu) * k3 * k5)
        + p.alpha * p.lam_prime * p.phi * p.tau / ((p.u1 + p.mu) * k3 * k4 * k5)
    )
    n_cap = (p.lam + p.lam_prime) / p.mu
    return DerivedConstants(k1, k2, k3, k4, k5, k6, n_cap)


def rhs_array(y: np.ndarray, p: ModelParameters) -> np.ndarray:
    """Vector field on a raw 7-array (S, V, E, I, Q, H, R).

    Hot path for the integrators; `rhs` wraps it for State inputs.
    """
    S, V, E, I, Q, H, R = y
    foi_s = (1.0 - p.u2) * p.beta * S * I
    foi_v = (1.0 - p.delta) * p.beta * V * I
    return np.array([
        p.lam + p.alpha * R - foi_s - p.u1 * S - p.mu * S,
        p.u1 * S - foi_v - p.mu * V,
        foi_s + foi_v - (p.theta + p.u3 + p.mu) * E,
        p.theta * E - (p.gamma + p.u4 + p.u5 + p.mu + p.mu_prime) * I,
        p.lam_prime + p.u3 * E + p.u4 * I - (p.kappa + p.tau + p.mu) * Q,
        p.tau * Q + p.u5 * I - (p.phi + p.mu + p.mu_prime) * H,
        p.gamma * I + p.kappa * Q + p.phi * H - (p.alpha + p.mu) * R,
    ])


def rhs(state: State, p: ModelParameters) -> np.ndarray:
    """Time derivatives of the seven compartments (individuals/day).

    The component sum telescopes to
    lam + lam_prime - mu*N - mu_prime*(I + H), the population
    bookkeeping identity behind the invariant-region bound.
    """
    return rhs_array(state.as_array(), p)


def jacobian_array(y: np.ndarray, p: ModelParameters) -> np.ndarray:
    """Analytic Jacobian of rhs_array at a raw state array."""
    S, V, E, I, Q, H, R = y
    bs = (1.0 - p.u2) * p.beta
    bv = (1.0 - p.delta) * p.beta
    J = np.zeros((7, 7))
    # dS/dt
    J[0, 0] = -bs * I - p.u1 - p.mu
    J[0, 3] = -bs * S
    J[0, 6] = p.alpha
    # dV/dt
    J[1, 0] = p.u1
    J[1, 1] = -bv * I - p.mu
    J[1, 3] = -bv * V
    # dE/dt
    J[2, 0] = bs * I
    J[2, 1] = bv * I
    J[2, 2] = -(p.theta + p.u3 + p.mu)
    J[2, 3] = bs * S + bv * V
    # dI/dt
    J[3, 2] = p.theta
    J[3, 3] = -(p.gamma + p.u4 + p.u5 + p.mu + p.mu_prime)
    # dQ/dt
    J[4, 2] = p.u3
    J[4, 3] = p.u4
    J[4, 4] = -(p.kappa + p.tau + p.mu)
    # dH/dt
    J[5, 3] = p.u5
    J[5, 4] = p.tau
    J[5, 5] = -(p.phi + p.mu + p.mu_prime)
    # dR/dt
    J[6, 3] = p.gamma
    J[6, 4] = p.kappa
    J[6, 5] = p.phi
    J[6, 6] = -(p.alpha + p.mu)
    return J


def jacobian(state: State, p: ModelParameters) -> np.ndarray:
    """Analytic 7x7 Jacobian of `rhs` (1/day)."""
    return jacobian_array(state.as_array(), p)


def gross_flux(y: np.ndarray, p: ModelParameters) -> np.ndarray:
    """Per-equation sum of the absolute values of every flow term.

    Residuals of candidate equilibria are judged relative to this scale:
    an equation whose terms are ~1e4 individuals/day cancelling to 1e-5
    is in far better balance than the bare residual suggests.
    """
    S, V, E, I, Q, H, R = np.abs(y)
    foi_s = (1.0 - p.u2) * p.beta * S * I
    foi_v = (1.0 - p.delta) * p.beta * V * I
    return np.array([
        p.lam + p.alpha * R + foi_s + p.u1 * S + p.mu * S,
        p.u1 * S + foi_v + p.mu * V,
        foi_s + foi_v + (p.theta + p.u3 + p.mu) * E,
        p.theta * E + (p.gamma + p.u4 + p.u5 + p.mu + p.mu_prime) * I,
        p.lam_prime + p.u3 * E + p.u4 * I + (p.kappa + p.tau + p.mu) * Q,
        p.tau * Q + p.u5 * I + (p.phi + p.mu + p.mu_prime) * H,
        p.gamma * I + p.kappa * Q + p.phi * H + (p.alpha + p.mu) * R,
    ])


def relative_residual(state: State, p: ModelParameters) -> float:
    """Max over equations of |rhs| / max(1, gross flux)."""
    y = state.as_array()
    scale = np.maximum(1.0, gross_flux(y, p))
    return float(np.max(np.abs(rhs_array(y, p)) / scale))
