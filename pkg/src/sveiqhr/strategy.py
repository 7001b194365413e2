"""Intervention-strategy analytics on top of the reproduction number:
PPKM restriction levels mapped to u2, the geometry of the feasible
(disease-eradicating) region in the (u1, u2) plane, parameter
sensitivity indices with a significance ranking, and boost sweeps that
rerun the simulator under strengthened interventions.

R0 restricted to the (u1, u2) plane is affine in u2 and a ratio of
affine functions in u1:

    R0(u1, u2) = W * (mu*(1 - u2) + (1 - delta)*u1) / (D * (u1 + mu))

with W = theta*beta*(lam + T1 + T2) and D = k1*k2*mu, where T1, T2 are
the two immigration correction terms of k6's numerator. The R0 = 1 locus
is the line u2 = l2 + slope * u1; its intercepts l1 (u2 = 0), l2
(u1 = 0) and l3 (the u1 value at u2 = 1) bound the feasible region.
"""

from __future__ import annotations

import io
import json
import math
from dataclasses import dataclass

import numpy as np

from . import dynamics
from .errors import SingularL1, UnknownLevel, ValidationError, ZeroR0
from .model import PARAM_ORDER, ModelParameters, State, derive_constants
from .equilibrium import compute_r0

SINGULAR_L1_TOL = 1e-12


@dataclass(frozen=True)
class RestrictionProfile:
    """Operating capacities p1..p9 of the nine PPKM-regulated sectors
    (workplaces, essential sectors, schooling, malls, construction,
    worship, public facilities, arts/culture, transport)."""

    capacities: tuple
    level_label: int | None = None

    def __post_init__(self):
        if len(self.capacities) != 9:
            raise ValidationError("capacities", f"need 9 entries, got {len(self.capacities)}")
        for i, c in enumerate(self.capacities):
            if not (math.isfinite(c) and 0.0 <= c <= 1.0):
                raise ValidationError(f"capacities[{i}]", f"must lie in [0, 1], got {c!r}")


# Level 1 is the only level itemized sector by sector; levels 2-4 are
# kept as the reported aggregate u2 values.
LEVEL1_PROFILE = RestrictionProfile(
    capacities=(0.75, 1.00, 0.75, 0.75, 0.75, 0.75, 0.75, 0.50, 0.50),
    level_label=1,
)
PPKM_U2 = {2: 0.389, 3: 0.694, 4: 0.861}


def u2_from_profile(profile: RestrictionProfile) -> float:
    """Average restriction fraction: 1 - mean operating capacity."""
    return 1.0 - sum(profile.capacities) / 9.0


def ppkm_level_u2(level: int) -> float:
    """u2 for a PPKM level: level 1 from its itemized sector profile
    (0.2777..., displayed 0.278), levels 2-4 from the published
    aggregates (no sector breakdown exists for them)."""
    if isinstance(level, bool):
        raise UnknownLevel(f"PPKM level must be 1, 2, 3 or 4, got {level!r}")
    if level == 1:
        return u2_from_profile(LEVEL1_PROFILE)
    try:
        return PPKM_U2[level]
    except (KeyError, TypeError):
        raise UnknownLevel(f"PPKM level must be 1, 2, 3 or 4, got {level!r}") from None


def _plane_coefficients(p: ModelParameters) -> tuple[float, float]:
    """(W, D) of the R0 restriction to the (u1, u2) plane; both are
    independent of delta, u1 and u2."""
    dc = derive_constants(p)
    # lam + T1 + T2, i.e. k6 with its 1/(u1 + mu) factor stripped; built
    # directly rather than by multiplying k6 back, so the result carries
    # no roundoff from the parameter set's own u1
    t1 = p.alpha * p.lam_prime * p.kappa / (dc.k3 * dc.k5)
    t2 = p.alpha * p.lam_prime * p.phi * p.tau / (dc.k3 * dc.k4 * dc.k5)
    W = p.theta * p.beta * (p.lam + t1 + t2)
    D = dc.k1 * dc.k2 * p.mu
    return W, D


def r0_on_plane(p: ModelParameters, delta, u1, u2):
    """R0 with (delta, u1, u2) overridden, other rates from p.

    Accepts scalars or numpy arrays for u1/u2/delta; unlike
    ModelParameters this does not clamp to [0, 1], so the line
    intercepts can be evaluated wherever they land.
    """
    W, D = _plane_coefficients(p)
    return W * (p.mu * (1.0 - u2) + (1.0 - delta) * u1) / (D * (u1 + p.mu))


@dataclass(frozen=True)
class RegionGeometry:
    """R0 = 1 line and feasible sub-square for a given vaccine efficacy.

    l1: u1-axis intercept (may fall outside [0, 1] or be negative);
    l2: u2-axis intercept, independent of delta;
    l3: u1 value where the line reaches u2 = 1;
    slope: du2/du1 along the line; slope_sign its sign;
    feasible_polygon: vertices (u1, u2) of {R0 < 1} clipped to [0, 1]^2,
    counter-clockwise, possibly empty.
    """

    delta: float
    l1: float
    l2: float
    l3: float
    slope: float
    slope_sign: int
    feasible_polygon: tuple

    def as_dict(self) -> dict:
        return {
            "delta": self.delta,
            "l1": self.l1,
            "l2": self.l2,
            "l3": self.l3,
            "slope": self.slope,
            "slope_sign": self.slope_sign,
            "feasible_polygon": [[x, y] for x, y in self.feasible_polygon],
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.as_dict(), **kw)


def _clip_halfplane(vertices, keep):
    """Sutherland-Hodgman clip of a convex polygon against keep(x,y) >= 0."""
    out = []
    n = len(vertices)
    for i in range(n):
        a, b = vertices[i], vertices[(i + 1) % n]
        ka, kb = keep(*a), keep(*b)
        if ka >= 0.0:
            out.append(a)
        if (ka >= 0.0) != (kb >= 0.0):
            t = ka / (ka - kb)
            out.append((a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])))
    return out


def region_geometry(p: ModelParameters, delta: float) -> RegionGeometry:
    """Feasible-region geometry over the (u1, u2) plane at efficacy delta.

    p supplies the biological rates and u3..u5; its delta, u1 and u2
    fields are ignored. Raises SingularL1 when delta coincides with l2
    (within 1e-12), where the line runs parallel to the u1 axis and l1,
    l3 blow up.
    """
    if not (math.isfinite(delta) and 0.0 <= delta <= 1.0):
        raise ValidationError("delta", f"must lie in [0, 1], got {delta!r}")
    W, D = _plane_coefficients(p)
    l2 = (W - D) / W
    if abs(delta - l2) < SINGULAR_L1_TOL:
        raise SingularL1(
            f"l1 undefined at delta={delta!r}: the R0=1 line does not cross u2=0 "
            f"(delta equals the u2 intercept {l2!r})"
        )
    # den = W*(delta - l2); positive exactly when delta > l2
    den = W * (delta - 1.0) + D
    l1 = p.mu * (W - D) / den
    l3 = -p.mu * D / den
    slope = ((1.0 - delta) * W - D) / (W * p.mu)

    line = lambda u1: l2 + slope * u1
    square = [(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)]
    polygon = _clip_halfplane(square, lambda x, y: y - line(x))
    return RegionGeometry(
        delta=delta, l1=l1, l2=l2, l3=l3, slope=slope,
        slope_sign=int(math.copysign(1.0, slope)) if slope != 0.0 else 0,
        feasible_polygon=tuple(polygon),
    )


def r0_slice(p: ModelParameters, vary: str, grid) -> list:
    """Pointwise R0 along a grid in one of u1, u2 or delta, the other two
    taken from p. Returns [(value, r0), ...]."""
    if vary not in ("u1", "u2", "delta"):
        raise ValidationError("vary", f"must be u1, u2 or delta, got {vary!r}")
    grid = np.asarray(grid, dtype=float)
    if grid.size and (not np.all(np.isfinite(grid)) or grid.min() < 0.0 or grid.max() > 1.0):
        raise ValidationError("grid", "values must be finite and lie in [0, 1]")
    args = {"delta": p.delta, "u1": p.u1, "u2": p.u2}
    args[vary] = grid
    r0 = r0_on_plane(p, args["delta"], args["u1"], args["u2"])
    r0 = np.broadcast_to(r0, grid.shape)
    return [(float(g), float(v)) for g, v in zip(grid, r0)]


def _elasticities(p: ModelParameters) -> dict:
    """All 17 normalized sensitivity indices (d log R0 / d log param).

    Derived from R0 = theta*beta*A*G / (k1*k2*mu*(u1+mu)) with
    A = lam + T1 + T2 and G = mu*(1-u2) + (1-delta)*u1; each line is the
    log-derivative of the factors the parameter enters.
    """
    dc = derive_constants(p)
    k1, k2, k3, k4, k5 = dc.k1, dc.k2, dc.k3, dc.k4, dc.k5
    T1 = p.alpha * p.lam_prime * p.kappa / (k3 * k5)
    T2 = p.alpha * p.lam_prime * p.phi * p.tau / (k3 * k4 * k5)
    A = p.lam + T1 + T2
    G = p.mu * (1.0 - p.u2) + (1.0 - p.delta) * p.u1
    return {
        "beta": 1.0,
        "lambda": p.lam / A,
        "lambda_prime": (T1 + T2) / A,
        "alpha": (T1 + T2) * p.mu / (k5 * A),
        "kappa": (T1 - (T1 + T2) * p.kappa / k3) / A,
        "tau": (T2 - (T1 + T2) * p.tau / k3) / A,
        "phi": T2 * (p.mu + p.mu_prime) / (k4 * A),
        "theta": (p.u3 + p.mu) / k1,
        "gamma": -p.gamma / k2,
        "u3": -p.u3 / k1,
        "u4": -p.u4 / k2,
        "u5": -p.u5 / k2,
        "mu_prime": -p.mu_prime / k2 - (T2 / A) * (p.mu_prime / k4),
        "u1": p.u1 * (1.0 - p.delta) / G - p.u1 / (p.u1 + p.mu),
        "u2": -p.mu * p.u2 / G,
        "delta": -p.delta * p.u1 / G,
        "mu": (
            p.mu * (1.0 - p.u2) / G - 1.0 - p.mu / (p.u1 + p.mu) - p.mu / k1 - p.mu / k2
            - (T1 * (p.mu / k3 + p.mu / k5) + T2 * (p.mu / k3 + p.mu / k4 + p.mu / k5)) / A
        ),
    }


def sensitivity_index(p: ModelParameters, name: str) -> float:
    """Normalized sensitivity index of R0 with respect to one parameter.

    A parameter sitting exactly at zero has index 0 by the definition's
    p-factor (see significance_ranking for the degeneracy flag). Raises
    ZeroR0 where R0 vanishes (u1 = 0 with u2 = 1), since the index is
    undefined there.
    """
    if name not in PARAM_ORDER:
        raise ValidationError("parameter", f"unknown parameter {name!r}")
    if compute_r0(p) == 0.0:
        raise ZeroR0("sensitivity index undefined at R0 = 0")
    if p.value_of(name) == 0.0:
        return 0.0
    return _elasticities(p)[name]


@dataclass(frozen=True)
class SensitivityRow:
    parameter: str
    upsilon: float
    sign: int
    abs: float
    rank: int
    degenerate: bool = False  # parameter pinned at zero, index trivially 0


@dataclass(frozen=True)
class SensitivityTable:
    rows: tuple  # ordered by rank
    r0: float

    def ordering(self) -> tuple:
        return tuple(row.parameter for row in self.rows)

    def row_for(self, name: str) -> SensitivityRow:
        for row in self.rows:
            if row.parameter == name:
                return row
        raise ValidationError("parameter", f"unknown parameter {name!r}")

    def to_csv(self, path=None):
        buf = io.StringIO()
        buf.write("parameter,upsilon,abs,rank\n")
        for row in self.rows:
            buf.write("%s,%.17g,%.17g,%d\n" % (row.parameter, row.upsilon, row.abs, row.rank))
        text = buf.getvalue()
        if path is None:
            return text
        with open(path, "w") as fh:
            fh.write(text)
        return None

    def as_dict(self) -> dict:
        return {
            "r0": self.r0,
            "rows": [
                {
                    "parameter": r.parameter, "upsilon": r.upsilon, "sign": r.sign,
                    "abs": r.abs, "rank": r.rank, "degenerate": r.degenerate,
                }
                for r in self.rows
            ],
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.as_dict(), **kw)


def significance_ranking(p: ModelParameters) -> SensitivityTable:
    """Full sensitivity table, ranked by decreasing |index|.

    Ties (possible at contrived parameter sets) break by the canonical
    parameter order, keeping the ranking a deterministic bijection onto
    1..17.
    """
    r0 = compute_r0(p)
    if r0 == 0.0:
        raise ZeroR0("sensitivity table undefined at R0 = 0")
    values = _elasticities(p)
    entries = []
    for name in PARAM_ORDER:
        degenerate = p.value_of(name) == 0.0
        ups = 0.0 if degenerate else values[name]
        entries.append((name, ups, degenerate))
    order = sorted(
        range(17), key=lambda i: (-abs(entries[i][1]), i)
    )
    rows = [None] * 17
    for rank0, i in enumerate(order):
        name, ups, degenerate = entries[i]
        rows[rank0] = SensitivityRow(
            parameter=name,
            upsilon=ups,
            sign=0 if ups == 0.0 else int(math.copysign(1.0, ups)),
            abs=abs(ups),
            rank=rank0 + 1,
            degenerate=degenerate,
        )
    return SensitivityTable(rows=tuple(rows), r0=r0)


@dataclass(frozen=True)
class SweepEntry:
    target: str
    boost: float
    boosted_value: float
    peak: float
    peak_time: float
    terminal: float
    peak_delta: float  # versus baseline; negative means improvement
    terminal_delta: float


@dataclass(frozen=True)
class SweepResult:
    baseline: dynamics.PeakSummary
    entries: tuple

    def to_csv(self, path=None):
        buf = io.StringIO()
        buf.write("target,boost,boosted_value,peak,peak_time,terminal,peak_delta,terminal_delta\n")
        for s in self.entries:
            buf.write(
                "%s,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n"
                % (s.target, s.boost, s.boosted_value, s.peak, s.peak_time,
                   s.terminal, s.peak_delta, s.terminal_delta)
            )
        text = buf.getvalue()
        if path is None:
            return text
        with open(path, "w") as fh:
            fh.write(text)
        return None

    def as_dict(self) -> dict:
        return {
            "baseline": self.baseline.as_dict(),
            "entries": [
                {
                    "target": s.target, "boost": s.boost, "boosted_value": s.boosted_value,
                    "peak": s.peak, "peak_time": s.peak_time, "terminal": s.terminal,
                    "peak_delta": s.peak_delta, "terminal_delta": s.terminal_delta,
                }
                for s in self.entries
            ],
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.as_dict(), **kw)


_SWEEP_TARGETS = ("u1", "u2", "u3", "u4", "u5")


def intervention_sweep(
    p: ModelParameters,
    targets,
    boosts,
    initial: State | None = None,
    config: dynamics.IntegratorConfig | None = None,
) -> SweepResult:
    """Rerun the simulation with each target intervention boosted by each
    relative fraction (0.3 means +30%), clamped to [0, 1], and compare
    peak/terminal non-healthy counts against the baseline.

    Entries are ordered by (u1..u5, boosts as given) regardless of the
    order targets arrive in, so output is deterministic.
    """
    targets = list(targets)
    for t in targets:
        if t not in _SWEEP_TARGETS:
            raise ValidationError("targets", f"must be among {_SWEEP_TARGETS}, got {t!r}")
    boosts = [float(b) for b in boosts]
    for b in boosts:
        if not (math.isfinite(b) and b >= -1.0):
            raise ValidationError("boosts", f"must be finite and >= -1, got {b!r}")
    if initial is None:
        initial = dynamics.default_initial()
    if config is None:
        config = dynamics.IntegratorConfig(horizon=730.0, sample_interval=1.0)

    base = dynamics.peak_and_limit(dynamics.simulate(p, initial, config))
    entries = []
    for target in (t for t in _SWEEP_TARGETS if t in targets):
        current = p.value_of(target)
        for boost in boosts:
            value = min(1.0, max(0.0, current * (1.0 + boost)))
            summary = dynamics.peak_and_limit(
                dynamics.simulate(p.with_value(target, value), initial, config)
            )
            entries.append(SweepEntry(
                target=target, boost=boost, boosted_value=value,
                peak=summary.peak, peak_time=summary.peak_time, terminal=summary.terminal,
                peak_delta=summary.peak - base.peak,
                terminal_delta=summary.terminal - base.terminal,
            ))
    return SweepResult(baseline=base, entries=tuple(entries))
