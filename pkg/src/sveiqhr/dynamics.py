"""Time integration of the model with invariant monitoring.

Two integrators are provided: classic fixed-step RK4 and an adaptive
Dormand-Prince 5(4) pair ("rk45", the default). Both land exactly on the
requested sample instants, so output spacing is decoupled from internal
step size. Sampled states are monitored against the model's qualitative
guarantees (non-negativity, total population bounded by
(lam + lam_prime)/mu up to an exponentially decaying transient).
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import EmptyTrajectory, InvariantViolation, StepFailure, ValidationError
from .model import N0, ModelParameters, State, derive_constants, rhs_array

# Negativity beyond -NEG_TOL*n_cap on a sampled component is an error;
# anything smaller is roundoff and clamps to zero in the stored sample.
NEG_TOL = 1e-9
# Relative slack on the population bound checks.
BOUND_TOL = 1e-9
MIN_STEP = 1e-12  # days; adaptive step below this raises StepFailure

_METHODS = ("rk45", "rk4")


@dataclass(frozen=True)
class IntegratorConfig:
    """Integration settings.

    method "rk4" requires `step`; "rk45" uses (abs_tol, rel_tol), with
    abs_tol defaulting to 1e-8 * n_cap at run time when left None.
    horizon and sample_interval are in days.
    """

    horizon: float
    sample_interval: float = 1.0
    method: str = "rk45"
    step: float | None = None
    abs_tol: float | None = None
    rel_tol: float = 1e-8

    def __post_init__(self):
        if self.method not in _METHODS:
            raise ValidationError("method", f"must be one of {_METHODS}, got {self.method!r}")
        if not (math.isfinite(self.horizon) and self.horizon > 0):
            raise ValidationError("horizon", f"must be finite and > 0, got {self.horizon!r}")
        if not (math.isfinite(self.sample_interval) and self.sample_interval > 0):
            raise ValidationError("sample_interval", f"must be > 0, got {self.sample_interval!r}")
        if self.method == "rk4":
            if self.step is None or not (math.isfinite(self.step) and self.step > 0):
                raise ValidationError("step", "rk4 needs a finite step > 0")
        if self.abs_tol is not None and not self.abs_tol > 0:
            raise ValidationError("abs_tol", "must be > 0 when given")
        if not self.rel_tol > 0:
            raise ValidationError("rel_tol", "must be > 0")


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Sampled solution: times (days) and states, one row per instant."""

    times: np.ndarray
    states: np.ndarray  # shape (n, 7), columns S, V, E, I, Q, H, R
    non_healthy: np.ndarray = field(init=False, repr=False)
    total: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "non_healthy", self.states[:, 2:6].sum(axis=1))
        object.__setattr__(self, "total", self.states.sum(axis=1))

    def __len__(self) -> int:
        return len(self.times)

    def state_at(self, i: int) -> State:
        return State.from_array(self.states[i])

    def to_csv(self, path=None):
        """Write `t,S,V,E,I,Q,H,R,N,non_healthy` rows at 17 significant
        digits; returns the CSV text when no path is given."""
        buf = io.StringIO()
        buf.write("t,S,V,E,I,Q,H,R,N,non_healthy\n")
        for i in range(len(self.times)):
            row = [self.times[i], *self.states[i], self.total[i], self.non_healthy[i]]
            buf.write(",".join("%.17g" % v for v in row) + "\n")
        text = buf.getvalue()
        if path is None:
            return text
        with open(path, "w") as fh:
            fh.write(text)
        return None


@dataclass(frozen=True)
class PeakSummary:
    """Peak and terminal values of the non-healthy series E+I+Q+H."""

    peak: float
    peak_time: float
    terminal: float

    def as_dict(self) -> dict:
        return {"peak": self.peak, "peak_time": self.peak_time, "terminal": self.terminal}


def default_initial(i0: float = 1000.0) -> State:
    """Seed scenario: the whole baseline population susceptible except i0
    infected. The trajectory experiments use this reconstruction since no
    canonical initial condition exists for them."""
    return State(S=N0 - i0, V=0.0, E=0.0, I=i0, Q=0.0, H=0.0, R=0.0)


# Dormand-Prince 5(4) tableau.
_DP_C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])
_DP_A = [
    np.array([]),
    np.array([1 / 5]),
    np.array([3 / 40, 9 / 40]),
    np.array([44 / 45, -56 / 15, 32 / 9]),
    np.array([19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729]),
    np.array([9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656]),
    np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84]),
]
_DP_B5 = np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0])
# b5 - b4; dot with the stage slopes gives the embedded error estimate
_DP_ERR = np.array([
    71 / 57600, 0.0, -71 / 16695, 71 / 1920, -17253 / 339200, 22 / 525, -1 / 40,
])


def _rk4_step(y, t, h, p):
    k1 = rhs_array(y, p)
    k2 = rhs_array(y + 0.5 * h * k1, p)
    k3 = rhs_array(y + 0.5 * h * k2, p)
    k4 = rhs_array(y + h * k3, p)
    return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def _rk4_segment(y, t0, t1, step, p):
    # land exactly on t1: round the step count up, never stretch a step
    n = max(1, math.ceil((t1 - t0) / step - 1e-12))
    h = (t1 - t0) / n
    t = t0
    for _ in range(n):
        y = _rk4_step(y, t, h, p)
        t += h
    return y


def _dp_segment(y, t0, t1, h, atol, rtol, neg_floor, p):
    """Advance y from t0 to t1 adaptively; returns (y, suggested h)."""
    t = t0
    while t < t1 - 1e-14 * max(1.0, abs(t1)):
        h = min(h, t1 - t)
        if h < MIN_STEP:
            raise StepFailure(f"step size {h:.3e} days underflowed at t={t:.6g}")
        k = np.empty((7, len(y)))
        k[0] = rhs_array(y, p)
        for i in range(1, 7):
            k[i] = rhs_array(y + h * (_DP_A[i] @ k[:i]), p)
        y_new = y + h * (_DP_B5 @ k)
        err = h * (_DP_ERR @ k)
        scale = atol + rtol * np.maximum(np.abs(y), np.abs(y_new))
        err_norm = math.sqrt(float(np.mean((err / scale) ** 2)))
        if float(y_new.min()) < neg_floor:
            # The exact flow never leaves the orthant, so a step that
            # overshoots past the negativity band is rejected outright;
            # shrinking h always escapes since y itself sits above the band.
            h *= 0.5
        elif err_norm <= 1.0:
            t += h
            y = y_new
            factor = 5.0 if err_norm == 0.0 else min(5.0, 0.9 * err_norm ** -0.2)
            h *= factor
        else:
            h *= max(0.2, 0.9 * err_norm ** -0.2)
    return y, h


def _sample_times(horizon, interval):
    n = int(math.floor(horizon / interval + 1e-9))
    times = [i * interval for i in range(n + 1)]
    if times[-1] < horizon - 1e-9 * interval:
        times.append(horizon)
    return times


def simulate(params: ModelParameters, initial: State, config: IntegratorConfig) -> Trajectory:
    """Integrate the model from `initial` over config.horizon days.

    Sampled components in [-1e-9*n_cap, 0) clamp to zero (integration
    itself proceeds unclamped); more negative values raise
    InvariantViolation, as does a total population escaping the bound
    n_cap + (N(0) - n_cap) * exp(-mu t) beyond relative slack 1e-9.
    Raises StepFailure if the adaptive step underflows below 1e-12 days.
    """
    dc = derive_constants(params)
    atol = config.abs_tol if config.abs_tol is not None else 1e-8 * dc.n_cap
    times = _sample_times(config.horizon, config.sample_interval)
    y = initial.as_array().astype(float)
    n_start = float(y.sum())
    neg_floor = -NEG_TOL * dc.n_cap
    slack = BOUND_TOL * max(dc.n_cap, n_start)

    rows = np.empty((len(times), 7))
    rows[0] = y
    h = min(config.sample_interval, 1.0)
    for i in range(1, len(times)):
        t0, t1 = times[i - 1], times[i]
        if config.method == "rk4":
            y = _rk4_segment(y, t0, t1, config.step, params)
        else:
            y, h = _dp_segment(y, t0, t1, h, atol, config.rel_tol, neg_floor, params)
        low = float(y.min())
        if low < neg_floor:
            raise InvariantViolation(
                f"component {low:.6g} below tolerance {neg_floor:.6g} at t={t1:.6g}"
            )
        bound = dc.n_cap + (n_start - dc.n_cap) * math.exp(-params.mu * t1)
        total = float(y.sum())
        if total > bound + slack:
            raise InvariantViolation(
                f"total population {total:.17g} exceeds bound {bound:.17g} at t={t1:.6g}"
            )
        rows[i] = np.maximum(y, 0.0)

    return Trajectory(times=np.array(times, dtype=float), states=rows)


def peak_and_limit(traj: Trajectory) -> PeakSummary:
    """Peak (value, time) and terminal value of non_healthy."""
    if len(traj) == 0:
        raise EmptyTrajectory("no samples")
    i = int(np.argmax(traj.non_healthy))
    return PeakSummary(
        peak=float(traj.non_healthy[i]),
        peak_time=float(traj.times[i]),
        terminal=float(traj.non_healthy[-1]),
    )
