"""Equilibria of the model: closed-form disease-free point, basic
reproduction number via the next-generation matrix, endemic equilibria
as roots of a quadratic in the infected population, and local stability
classification through the Jacobian spectrum.

At the disease-free equilibrium the characteristic polynomial of the
Jacobian factorizes as

    (x + mu)(x + u1 + mu)(x + k3)(x + k4)(x + k5)(x^2 + b x + c)

with b = k1 + k2 and c = k1 k2 (1 - R0), which ties the eigenvalue
verdict to the sign of R0 - 1.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateQuadratic, InvariantViolation, SingularDenominator
from .model import (
    ModelParameters,
    State,
    derive_constants,
    jacobian,
    relative_residual,
)

# Eigenvalue real parts within this dead-band of zero cannot be certified
# either side by a double-precision eigensolve.
STABILITY_BAND = 1e-10
RESIDUAL_TOL = 1e-8


@dataclass(frozen=True)
class NgmPair:
    """New-infection matrix F and transition matrix V of the infected
    subsystem (E, I, Q, H), both evaluated at the disease-free point.

    F has a single nonzero entry, F[0, 1]; V is lower-triangular with
    diagonal (k1, k2, k3, k4) and is therefore invertible.
    """

    F: np.ndarray
    V: np.ndarray

    def next_generation_matrix(self) -> np.ndarray:
        return self.F @ np.linalg.inv(self.V)


@dataclass(frozen=True)
class EquilibriumReport:
    point: State
    kind: str  # "disease-free" | "endemic"
    r0: float
    eigenvalues: np.ndarray  # 7 complex values, sorted by real part, descending
    verdict: str  # "locally-asymptotically-stable" | "unstable" | "marginal"
    b: float | None = None  # quadratic factor of the characteristic
    c: float | None = None  # polynomial; disease-free reports only

    def as_dict(self) -> dict:
        d = {
            "point": self.point.as_dict(),
            "kind": self.kind,
            "r0": self.r0,
            "eigenvalues": [{"re": z.real, "im": z.imag} for z in self.eigenvalues],
            "verdict": self.verdict,
        }
        if self.b is not None:
            d["b"] = self.b
            d["c"] = self.c
        return d

    def to_json(self, **kw) -> str:
        return json.dumps(self.as_dict(), **kw)


@dataclass(frozen=True)
class EndemicSolveReport:
    """Roots of d*I^2 + e*I + f = 0 and, when admissible, the endemic
    equilibrium built from the positive root by back-substitution."""

    d: float
    e: float
    f: float
    roots: tuple
    r0: float
    positive_equilibrium: State | None
    # two positive roots below R0 = 1 would fall outside the established
    # analysis; surfaced for manual review instead of silently resolved
    flagged_for_review: bool = False

    def as_dict(self) -> dict:
        return {
            "d": self.d,
            "e": self.e,
            "f": self.f,
            "roots": [{"re": complex(r).real, "im": complex(r).imag} for r in self.roots],
            "r0": self.r0,
            "positive_equilibrium": (
                None if self.positive_equilibrium is None else self.positive_equilibrium.as_dict()
            ),
            "flagged_for_review": self.flagged_for_review,
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.as_dict(), **kw)


def disease_free_equilibrium(p: ModelParameters) -> State:
    """The unique equilibrium with E = I = 0, in closed form."""
    dc = derive_constants(p)
    return State(
        S=dc.k6,
        V=p.u1 * dc.k6 / p.mu,
        E=0.0,
        I=0.0,
        Q=p.lam_prime / dc.k3,
        H=p.tau * p.lam_prime / (dc.k3 * dc.k4),
        R=p.lam_prime * (p.kappa * dc.k4 + p.phi * p.tau) / (dc.k3 * dc.k4 * dc.k5),
    )


def ngm(p: ModelParameters) -> NgmPair:
    dc = derive_constants(p)
    F = np.zeros((4, 4))
    F[0, 1] = (1.0 - p.u2) * p.beta * dc.k6 + (1.0 - p.delta) * p.beta * p.u1 * dc.k6 / p.mu
    V = np.array([
        [dc.k1, 0.0, 0.0, 0.0],
        [-p.theta, dc.k2, 0.0, 0.0],
        [-p.u3, -p.u4, dc.k3, 0.0],
        [0.0, -p.u5, -p.tau, dc.k4],
    ])
    return NgmPair(F=F, V=V)


def ngm_spectral_radius(p: ModelParameters) -> float:
    """rho(F V^-1) by numeric eigensolve; independent check of compute_r0."""
    K = ngm(p).next_generation_matrix()
    return float(np.max(np.abs(np.linalg.eigvals(K))))


def compute_r0(p: ModelParameters) -> float:
    """Closed-form basic reproduction number."""
    dc = derive_constants(p)
    return (
        p.theta * p.beta * dc.k6 * (p.mu * (1.0 - p.u2) + (1.0 - p.delta) * p.u1)
        / (dc.k1 * dc.k2 * p.mu)
    )


def char_quadratic(p: ModelParameters) -> tuple[float, float]:
    """Coefficients (b, c) of the x^2 + b x + c factor of the
    characteristic polynomial at the disease-free point, evaluated from
    their expanded closed forms (not re-derived symbolically)."""
    dc = derive_constants(p)
    b = 2.0 * p.mu + p.gamma + p.theta + p.u3 + p.u4 + p.u5 + p.mu_prime
    c = (
        p.mu ** 2
        + (p.gamma + p.theta + p.u3 + p.u4 + p.u5 + p.mu_prime) * p.mu
        + ((p.u2 - 1.0) * p.beta * dc.k6 + p.gamma + p.u4 + p.u5 + p.mu_prime) * p.theta
        + p.u3 * (p.gamma + p.u4 + p.u5 + p.mu_prime)
        + p.beta * p.theta * dc.k6 * p.u1 * (p.delta - 1.0) / p.mu
    )
    return b, c


def _verdict(eigenvalues: np.ndarray) -> str:
    re = eigenvalues.real
    if np.all(re < -STABILITY_BAND):
        return "locally-asymptotically-stable"
    if np.any(re > STABILITY_BAND):
        return "unstable"
    return "marginal"


def _sorted_eigs(J: np.ndarray) -> np.ndarray:
    eigs = np.linalg.eigvals(J)
    order = np.lexsort((eigs.imag, -eigs.real))
    return eigs[order]


def dfe_stability(p: ModelParameters) -> EquilibriumReport:
    """Stability report for the disease-free equilibrium.

    The sign of c must oppose the sign of R0 - 1 (c = k1 k2 (1 - R0));
    a mismatch would mean the closed forms and the Jacobian disagree.
    """
    point = disease_free_equilibrium(p)
    r0 = compute_r0(p)
    b, c = char_quadratic(p)
    if abs(r0 - 1.0) > 1e-12 and math.copysign(1.0, c) == math.copysign(1.0, r0 - 1.0):
        raise InvariantViolation(
            f"sign(c)={math.copysign(1.0, c)} inconsistent with R0-1={r0 - 1.0!r}"
        )
    eigs = _sorted_eigs(jacobian(point, p))
    return EquilibriumReport(
        point=point, kind="disease-free", r0=r0, eigenvalues=eigs,
        verdict=_verdict(eigs), b=b, c=c,
    )


def endemic_coefficients(p: ModelParameters) -> tuple[float, float, float]:
    """Quadratic coefficients (d, e, f) for the endemic infected count.

    Written exactly in the grouped form of their derivation so each
    bracket can be audited; f factors as
    theta*k1*k2*k3*k4*k5*mu*(mu+u1)*(R0-1), hence sign(f) = sign(R0-1).
    """
    dc = derive_constants(p)
    k1, k2, k3, k4, k5 = dc.k1, dc.k2, dc.k3, dc.k4, dc.k5
    K = k1 * k2 * k3 * k4 * k5
    lam, lamp, mu, mup = p.lam, p.lam_prime, p.mu, p.mu_prime
    beta, delta, alpha, theta = p.beta, p.delta, p.alpha, p.theta
    gamma, phi, kappa, tau = p.gamma, p.phi, p.kappa, p.tau
    u1, u2, u3, u4, u5 = p.u1, p.u2, p.u3, p.u4, p.u5

    d = (1.0 - delta) * theta * (1.0 - u2) * beta ** 2 * (
        (((gamma * k3 + kappa * u4) * k4 + phi * (k3 * u5 + tau * u4)) * theta
         + u3 * k2 * (k4 * kappa + tau * phi)) * alpha
        - K
    )
    e = theta * beta * (
        alpha * (
            theta * (
                k4 * (
                    gamma * ((1.0 - u2) * mu + u1 * (1.0 - delta)) * k3
                    - kappa * (u4 * (u2 - 1.0) * mu
                               + (u1 * u4 - beta * lamp * (u2 - 1.0)) * (delta - 1.0))
                )
                - phi * (
                    u5 * ((u2 - 1.0) * mu + u1 * (delta - 1.0)) * k3
                    + tau * (u4 * (u2 - 1.0) * mu
                             + (u1 * u4 - beta * lamp * (u2 - 1.0)) * (delta - 1.0))
                )
            )
            - u3 * k2 * (k4 * kappa + tau * phi) * ((u2 - 1.0) * mu + u1 * (delta - 1.0))
        )
        + k3 * k4 * k5 * (
            beta * lam * (u2 - 1.0) * (delta - 1.0) * theta
            + ((delta + u2 - 2.0) * mu + u1 * (delta - 1.0)) * k1 * k2
        )
    )
    f = theta * (
        ((1.0 - u2) * mu + u1 * (1.0 - delta))
        * ((alpha * kappa * lamp + k3 * k5 * lam) * k4 + alpha * phi * lamp * tau)
        * beta * theta
        - K * mu * (mu + u1)
    )
    return d, e, f


def endemic_state_from_root(p: ModelParameters, I: float) -> State:
    """Back-substitute a positive infected count into the equilibrium
    chain E, Q, H, R, S, V."""
    dc = derive_constants(p)
    E = dc.k2 * I / p.theta
    Q = (p.lam_prime + p.u3 * E + p.u4 * I) / dc.k3
    H = (p.tau * Q + p.u5 * I) / dc.k4
    R = (p.gamma * I + p.kappa * Q + p.phi * H) / dc.k5
    S = (p.lam + p.alpha * R) / (p.mu + p.u1 + (1.0 - p.u2) * p.beta * I)
    V = p.u1 * S / ((1.0 - p.delta) * p.beta * I + p.mu)
    return State(S=S, V=V, E=E, I=I, Q=Q, H=H, R=R)


def _stable_roots(d: float, e: float, f: float) -> tuple:
    """Both roots of d x^2 + e x + f via the sign-matched quadratic
    formula (coefficients here span ~14 orders of magnitude, so the
    naive formula would cancel catastrophically on the small root)."""
    disc = e * e - 4.0 * d * f
    if disc < 0.0:
        s = math.sqrt(-disc)
        return complex(-e / (2.0 * d), -s / (2.0 * abs(d))), complex(-e / (2.0 * d), s / (2.0 * abs(d)))
    q = -0.5 * (e + math.copysign(math.sqrt(disc), e)) if e != 0.0 else math.sqrt(disc) * 0.5
    if q == 0.0:  # e = 0 and disc = 0: double root at zero
        return 0.0, 0.0
    r1, r2 = q / d, f / q
    return (r1, r2) if r1 <= r2 else (r2, r1)


def endemic_equilibrium(p: ModelParameters) -> EndemicSolveReport:
    """Solve the endemic quadratic and, when exactly one root is real and
    positive, construct and certify the endemic equilibrium.

    Raises DegenerateQuadratic when the leading coefficient vanishes
    (delta = 1 or u2 = 1 make the quadratic collapse to linear).
    """
    d, e, f = endemic_coefficients(p)
    if abs(d) < 1e-300:
        raise DegenerateQuadratic(d, e, f)
    r0 = compute_r0(p)
    roots = _stable_roots(d, e, f)
    positive = [r for r in roots if not isinstance(r, complex) and r > 0.0]

    equilibrium = None
    flagged = False
    if len(positive) == 1:
        equilibrium = endemic_state_from_root(p, positive[0])
        res = relative_residual(equilibrium, p)
        if res > RESIDUAL_TOL:
            raise InvariantViolation(
                f"endemic equilibrium residual {res:.3e} exceeds {RESIDUAL_TOL:.0e}"
            )
    elif len(positive) == 2 and r0 < 1.0:
        flagged = True

    return EndemicSolveReport(
        d=d, e=e, f=f, roots=roots, r0=r0,
        positive_equilibrium=equilibrium, flagged_for_review=flagged,
    )


def endemic_consistency_check(p: ModelParameters, I: float) -> tuple[float, float]:
    """Compare the two independent closed forms of the endemic S at a
    given infected count, and measure the full-state residual there.

    Returns (relative S mismatch, relative rhs residual). Both vanish to
    ~1e-8 exactly when I is a positive root of the endemic quadratic, so
    this is an oracle for the transcription of (d, e, f).
    """
    dc = derive_constants(p)
    beta, delta, mu, u1, u2 = p.beta, p.delta, p.mu, p.u1, p.u2
    den = beta * p.theta * (
        beta * delta * u2 * I - beta * delta * I - beta * u2 * I + beta * I
        - u1 * delta - mu * u2 + mu + u1
    )
    if abs(den) < 1e-300:
        raise SingularDenominator(f"alternative S form undefined at I={I!r}")
    s_alt = dc.k1 * dc.k2 * (mu + beta * I - beta * delta * I) / den
    state = endemic_state_from_root(p, I)
    gap = abs(s_alt - state.S) / max(abs(s_alt), abs(state.S), 1.0)
    return gap, relative_residual(state, p)


def endemic_stability(p: ModelParameters) -> EquilibriumReport:
    """Eigenvalue report at the endemic equilibrium (when it exists)."""
    report = endemic_equilibrium(p)
    if report.positive_equilibrium is None:
        raise ValueError("no unique positive endemic equilibrium at these parameters")
    point = report.positive_equilibrium
    eigs = _sorted_eigs(jacobian(point, p))
    return EquilibriumReport(
        point=point, kind="endemic", r0=report.r0,
        eigenvalues=eigs, verdict=_verdict(eigs),
    )
