"""Stateless HTTP service exposing the model as a JSON API.

Validation failures return 400 with the offending field; domain errors
(singular geometry, undefined indices, degenerate quadratics, step
failures) return 422 with the error class name. Every request is served
from its own pure computation; there is no session state, so any request
permutation yields identical per-request responses.
"""

from __future__ import annotations

from fastapi import Body, FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from .. import dynamics, equilibrium, strategy
from ..errors import ModelError, ParseError, ValidationError
from ..model import ModelParameters
from . import config as cfgmod

# Bounded work per request; larger grids are CLI territory.
MAX_SAMPLES = 1_000_000
MAX_SWEEP_RUNS = 64


def _error_response(exc: ModelError):
    if isinstance(exc, (ValidationError, ParseError)):
        detail = {"error": str(exc)}
        if isinstance(exc, ValidationError):
            detail["field"] = exc.field
        return JSONResponse(status_code=400, content=detail)
    return JSONResponse(
        status_code=422,
        content={"error": str(exc), "code": type(exc).__name__},
    )


def _simulate_payload(body: dict):
    if not isinstance(body, dict):
        raise ValidationError("body", "must be a JSON object")
    unknown = [k for k in body if k not in ("parameters", "initial", "integrator")]
    if unknown:
        raise ValidationError(unknown[0], "unknown key")
    params = cfgmod.parameters_from_fragment(body.get("parameters", {}))
    initial = body.get("initial", "default")
    integrator = body.get("integrator", {})
    cfg = cfgmod.config_from_dict({
        "parameters": body.get("parameters", {}),
        "initial": initial,
        "integrator": integrator,
    })
    samples = cfg.integrator.horizon / cfg.integrator.sample_interval + 1
    if samples > MAX_SAMPLES:
        raise ValidationError(
            "integrator.sample_interval",
            f"request would produce {samples:.0f} samples; capped at {MAX_SAMPLES}",
        )
    return params, cfg


def create_app() -> FastAPI:
    from .. import __version__

    app = FastAPI(title="sveiqhr service", version=__version__)
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    @app.exception_handler(ModelError)
    async def model_error_handler(request: Request, exc: ModelError):
        return _error_response(exc)

    @app.exception_handler(RequestValidationError)
    async def body_error_handler(request: Request, exc: RequestValidationError):
        return JSONResponse(status_code=400, content={"error": "malformed request body"})

    @app.get("/api/health")
    def health():
        return {"status": "ok", "version": __version__}

    @app.get("/api/defaults")
    def defaults():
        baseline = ModelParameters(delta=0.0, u2=0.0).as_dict()
        # delta and u2 carry no baseline value; they are always chosen
        for required in ("delta", "u2"):
            baseline[required] = None
        return {
            "parameters": baseline,
            "required": ["delta", "u2"],
            "ppkm_levels": {str(k): strategy.ppkm_level_u2(k) for k in (1, 2, 3, 4)},
            "initial_presets": list(cfgmod.INITIAL_PRESETS),
            "integrator": {"method": "rk45", "rel_tol": 1e-8,
                           "horizon": 365.0, "sample_interval": 1.0},
        }

    @app.post("/api/r0")
    def r0(body: dict = Body(...)):
        params = cfgmod.parameters_from_fragment(body)
        return {"r0": equilibrium.compute_r0(params)}

    @app.post("/api/sensitivity")
    def sensitivity(body: dict = Body(...)):
        params = cfgmod.parameters_from_fragment(body)
        return strategy.significance_ranking(params).as_dict()

    @app.post("/api/region")
    def region(body: dict = Body(...)):
        params = cfgmod.parameters_from_fragment(body, require_u2=False)
        return strategy.region_geometry(params, params.delta).as_dict()

    @app.post("/api/simulate")
    def simulate(body: dict = Body(...)):
        params, cfg = _simulate_payload(body)
        traj = dynamics.simulate(params, cfg.resolve_initial(), cfg.integrator)
        summary = dynamics.peak_and_limit(traj)
        return {
            "times": traj.times.tolist(),
            "states": {
                name: traj.states[:, i].tolist()
                for i, name in enumerate(("S", "V", "E", "I", "Q", "H", "R"))
            },
            "total": traj.total.tolist(),
            "non_healthy": traj.non_healthy.tolist(),
            "peak": summary.as_dict(),
            "initial_preset": cfg.initial if isinstance(cfg.initial, str) else None,
        }

    @app.post("/api/sweep")
    def sweep(body: dict = Body(...)):
        if not isinstance(body, dict):
            raise ValidationError("body", "must be a JSON object")
        unknown = [k for k in body
                   if k not in ("parameters", "targets", "boosts", "integrator", "initial")]
        if unknown:
            raise ValidationError(unknown[0], "unknown key")
        params = cfgmod.parameters_from_fragment(body.get("parameters", {}))
        targets = body.get("targets", ["u1", "u2", "u3", "u4", "u5"])
        boosts = body.get("boosts", [0.3, 0.6])
        if not isinstance(targets, list) or not isinstance(boosts, list):
            raise ValidationError("targets", "targets and boosts must be lists")
        if (len(targets) and len(boosts)) and len(targets) * len(boosts) > MAX_SWEEP_RUNS:
            raise ValidationError("targets", f"sweep capped at {MAX_SWEEP_RUNS} runs")
        cfg = cfgmod.config_from_dict({
            "parameters": body.get("parameters", {}),
            "initial": body.get("initial", "default"),
            "integrator": body.get("integrator", {"horizon": 730.0}),
        })
        samples = cfg.integrator.horizon / cfg.integrator.sample_interval + 1
        if samples * (len(targets) * len(boosts) + 1) > MAX_SAMPLES:
            raise ValidationError("integrator.sample_interval",
                                  f"sweep would exceed {MAX_SAMPLES} total samples")
        result = strategy.intervention_sweep(
            params, targets, boosts, initial=cfg.resolve_initial(), config=cfg.integrator,
        )
        return result.as_dict()

    return app
