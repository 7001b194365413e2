"""Exception types shared by all sveiqhr modules."""


class ModelError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(ModelError):
    """A parameter, state component, or config field is out of its domain.

    Carries the offending field name so callers (CLI, HTTP service) can
    report field-level diagnostics.
    """

    def __init__(self, field, message):
        self.field = field
        super().__init__(f"{field}: {message}")


class ParseError(ModelError):
    """A config file failed to parse; message includes line/column."""

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        if line is not None:
            message = f"{message} (line {line}, column {column})"
        super().__init__(message)


class StepFailure(ModelError):
    """The adaptive integrator's step size underflowed (below 1e-12 days)."""


class InvariantViolation(ModelError):
    """A runtime invariant broke: negativity beyond tolerance, population
    bound exceeded, or an equilibrium residual above its certified level.
    Usually signals integrator misconfiguration or a numerical pathology."""


class EmptyTrajectory(ModelError):
    """A trajectory summary was requested on an empty trajectory."""


class UnknownLevel(ModelError):
    """PPKM restriction level outside {1, 2, 3, 4}."""


class SingularL1(ModelError):
    """The R0 = 1 line is parallel to the u1 axis (delta equals the u2
    intercept), so the u1-axis intercept l1 is undefined."""


class ZeroR0(ModelError):
    """Sensitivity indices are undefined where R0 = 0."""


class SingularDenominator(ModelError):
    """The alternative closed form for the endemic S component has a
    vanishing denominator at the requested prevalence."""


class DegenerateQuadratic(ModelError):
    """The quadratic in the endemic prevalence degenerates to a linear
    equation (leading coefficient ~ 0, e.g. delta = 1 or u2 = 1).

    Carries the coefficients and, when the linear term is nonzero, the
    root of the linear fallback e*I + f = 0.
    """

    def __init__(self, d, e, f):
        self.d = d
        self.e = e
        self.f = f
        self.linear_root = -f / e if e != 0 else None
        super().__init__(
            f"quadratic leading coefficient degenerate (d={d!r}); "
            f"linear fallback root {self.linear_root!r}"
        )
