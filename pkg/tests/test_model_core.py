"""Core model: parameter validation, vector field, Jacobian, constants."""

import fractions

import numpy as np
import pytest

from sveiqhr import (
    DerivedConstants,
    ModelParameters,
    State,
    ValidationError,
    derive_constants,
    jacobian,
    rhs,
)
from sveiqhr.model import PARAM_ORDER, gross_flux, relative_residual, rhs_array

from conftest import random_params


class TestModelParameters:
    def test_delta_and_u2_are_required(self):
        with pytest.raises(TypeError):
            ModelParameters()  # noqa: intentional missing arguments
        with pytest.raises(TypeError):
            ModelParameters(delta=0.5)
        with pytest.raises(TypeError):
            ModelParameters(u2=0.5)

    @pytest.mark.parametrize("name", ["delta", "u1", "u2", "u3", "u4", "u5"])
    @pytest.mark.parametrize("value", [-0.1, 1.5, float("nan"), float("inf")])
    def test_unit_interval_bounds(self, name, value):
        kwargs = {"delta": 0.5, "u2": 0.5}
        kwargs[name] = value
        with pytest.raises(ValidationError) as exc:
            ModelParameters(**kwargs)
        assert exc.value.field == name

    @pytest.mark.parametrize("name", ["mu", "beta", "theta", "gamma", "lam"])
    @pytest.mark.parametrize("value", [0.0, -1.0, float("nan")])
    def test_positive_rate_bounds(self, name, value):
        with pytest.raises(ValidationError) as exc:
            ModelParameters(delta=0.5, u2=0.5, **{name: value})
        assert exc.value.field == name

    def test_unit_interval_endpoints_allowed(self):
        p = ModelParameters(delta=1.0, u2=0.0, u1=0.0, u3=1.0)
        assert p.delta == 1.0 and p.u1 == 0.0

    def test_value_of_uses_external_names(self):
        p = ModelParameters(delta=0.5, u2=0.5)
        assert p.value_of("lambda") == p.lam
        assert p.value_of("lambda_prime") == p.lam_prime
        assert p.value_of("delta") == 0.5
        with pytest.raises(ValidationError):
            p.value_of("lam")  # internal attribute names are not accepted

    def test_with_value_replaces_and_revalidates(self):
        p = ModelParameters(delta=0.5, u2=0.5)
        q = p.with_value("u2", 0.9)
        assert q.u2 == 0.9 and p.u2 == 0.5
        with pytest.raises(ValidationError):
            p.with_value("u2", 1.5)

    def test_as_dict_order_and_roundtrip(self):
        p = ModelParameters(delta=0.653, u2=0.278)
        d = p.as_dict()
        assert tuple(d) == PARAM_ORDER
        rebuilt = ModelParameters(
            **{("lam" if k == "lambda" else "lam_prime" if k == "lambda_prime" else k): v
               for k, v in d.items()}
        )
        assert rebuilt == p


class TestState:
    def test_rejects_negative_or_nonfinite(self):
        with pytest.raises(ValidationError) as exc:
            State(S=-1.0, V=0, E=0, I=0, Q=0, H=0, R=0)
        assert exc.value.field == "S"
        with pytest.raises(ValidationError):
            State(S=1.0, V=0, E=float("nan"), I=0, Q=0, H=0, R=0)

    def test_total_and_non_healthy(self):
        s = State(S=10, V=20, E=1, I=2, Q=3, H=4, R=5)
        assert s.total == 45
        assert s.non_healthy == 10

    def test_array_roundtrip(self):
        s = State(S=1, V=2, E=3, I=4, Q=5, H=6, R=7)
        assert State.from_array(s.as_array()) == s
        assert list(s.as_dict()) == ["S", "V", "E", "I", "Q", "H", "R"]


class TestDerivedConstants:
    def test_n_cap_is_exact_at_baseline(self, endemic_params):
        # lam = N0 * mu, so (lam + lam_prime)/mu = N0 + 3000/mu exactly
        dc = derive_constants(endemic_params)
        assert dc.n_cap == 344698621.0

    def test_k_rates_against_exact_rationals(self, endemic_params):
        p = endemic_params
        Fr = fractions.Fraction
        exact = {
            "k1": Fr(4, 10) + Fr(5, 10) + Fr(1, 23725),
            "k2": Fr(1, 10) + Fr(3, 10) + Fr(833, 10000) + Fr(1, 23725) + Fr(291, 10000),
            "k3": Fr(1, 10) + Fr(1, 100) + Fr(1, 23725),
            "k4": Fr(8198, 10000) + Fr(1, 23725) + Fr(291, 10000),
            "k5": Fr(1, 23725) + Fr(11, 1000),
        }
        dc = derive_constants(p)
        for name, frac in exact.items():
            assert getattr(dc, name) == pytest.approx(float(frac), rel=1e-15)

    def test_k6_matches_exact_rational_form(self, endemic_params):
        # independent evaluation of the three-fraction disease-free S
        p = endemic_params
        Fr = fractions.Fraction
        lam = Fr(273523621) * Fr(1, 23725)
        mu = Fr(1, 23725)
        k3 = Fr(1, 10) + Fr(1, 100) + mu
        k4 = Fr(8198, 10000) + mu + Fr(291, 10000)
        k5 = mu + Fr(11, 1000)
        u1 = Fr(4, 10)
        alpha, lamp = Fr(11, 1000), Fr(3000)
        phi, tau, kappa = Fr(8198, 10000), Fr(1, 100), Fr(1, 10)
        k6 = (
            lam / (u1 + mu)
            + alpha * lamp * kappa / ((u1 + mu) * k3 * k5)
            + alpha * lamp * phi * tau / ((u1 + mu) * k3 * k4 * k5)
        )
        assert derive_constants(p).k6 == pytest.approx(float(k6), rel=1e-14)

    def test_returns_dataclass_fields(self, endemic_params):
        dc = derive_constants(endemic_params)
        assert isinstance(dc, DerivedConstants)
        assert dc.k1 > 0 and dc.k6 > 0


class TestVectorField:
    def test_conservation_identity(self, rng):
        # sum of the seven equations telescopes to the bookkeeping identity
        for _ in range(20):
            p = random_params(rng)
            y = rng.uniform(0.0, 1e7, size=7)
            s = State.from_array(y)
            lhs = float(np.sum(rhs(s, p)))
            expected = p.lam + p.lam_prime - p.mu * s.total - p.mu_prime * (s.I + s.H)
            assert lhs == pytest.approx(expected, rel=1e-12, abs=1e-9)

    def test_boundary_points_inward(self, rng):
        # with one compartment at zero and the rest non-negative, the
        # corresponding derivative never points out of the orthant
        for _ in range(20):
            p = random_params(rng)
            for i in range(7):
                y = rng.uniform(0.0, 1e6, size=7)
                y[i] = 0.0
                assert rhs_array(y, p)[i] >= 0.0

    def test_field_linear_in_state_except_infection_terms(self, endemic_params):
        # superposition holds exactly once the bilinear S*I, V*I terms vanish
        p = endemic_params.with_value("beta", 1e-30)
        y1 = np.arange(1.0, 8.0)
        y2 = np.arange(10.0, 80.0, 10.0)
        lhs = rhs_array(y1 + y2, p) - rhs_array(np.zeros(7), p)
        rhs_sum = (rhs_array(y1, p) - rhs_array(np.zeros(7), p)) + (
            rhs_array(y2, p) - rhs_array(np.zeros(7), p)
        )
        assert np.allclose(lhs, rhs_sum, rtol=1e-12, atol=1e-20)

    def test_jacobian_matches_finite_differences(self, rng):
        # the field is bilinear, so central differences are exact up to
        # roundoff at any step; a 1% step keeps the cancellation tiny
        for _ in range(10):
            p = random_params(rng)
            y = rng.uniform(1.0, 1e7, size=7)
            J = jacobian(State.from_array(y), p)
            num = np.empty((7, 7))
            for j in range(7):
                h = max(0.01 * abs(y[j]), 1.0)
                up, dn = y.copy(), y.copy()
                up[j] += h
                dn[j] -= h
                num[:, j] = (rhs_array(up, p) - rhs_array(dn, p)) / (2.0 * h)
            scale = np.maximum(np.abs(J), np.max(np.abs(J)) * 1e-9)
            assert np.max(np.abs(J - num) / scale) < 1e-6

    def test_jacobian_constant_entries(self, endemic_params):
        J = jacobian(State(S=1, V=2, E=3, I=4, Q=5, H=6, R=7), endemic_params)
        p = endemic_params
        assert J[3, 2] == p.theta
        assert J[4, 2] == p.u3
        assert J[4, 3] == p.u4
        assert J[5, 4] == p.tau
        assert J[6, 5] == p.phi
        assert J[0, 6] == p.alpha
        assert J[2, 6] == 0.0  # recovered do not feed the exposed pool

    def test_relative_residual_zero_only_near_equilibrium(self, endemic_params):
        y = np.full(7, 1e6)
        s = State.from_array(y)
        assert relative_residual(s, endemic_params) > 1e-4
        assert np.all(gross_flux(y, endemic_params) > 0.0)
