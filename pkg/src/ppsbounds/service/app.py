"""FastAPI application exposing the calculator.

Every endpoint is a plain function over the pydantic request models, so the
CLI can call the same handlers in-process and produce identical results.
"""

from __future__ import annotations

import numpy as np
from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from ppsbounds import __version__
from ppsbounds.bounds import TABLE_COLUMNS, combine, expand_family, zcl_lower
from ppsbounds.charclass import (
    axial_exists_interval,
    axial_obstruction,
    axial_obstructed,
    immersion_report,
)
from ppsbounds.cohomology import CapacityError, SphereTuple, make_ring
from ppsbounds.config import OverrideConfig
from ppsbounds.nonsingular import (
    biradial_extend,
    biradial_extend_v,
    check_nonsingular,
    from_classical,
    named_map,
    sphere_map_from_classical,
)
from ppsbounds.planner import (
    even_sphere_planner,
    odd_sphere_planner,
    product_planner,
    verify_planner,
)
from ppsbounds.service import schemas

app = FastAPI(
    title="ppsbounds",
    version=__version__,
    description=(
        "Exact TC/cat bounds, immersion obstructions and equivariant motion "
        "planners for sphere-product quotients."
    ),
)


@app.exception_handler(CapacityError)
async def _capacity_handler(request: Request, exc: CapacityError):
    return JSONResponse(status_code=422, content={"error": str(exc), "exit_code": 3})


@app.exception_handler(ValueError)
async def _value_handler(request: Request, exc: ValueError):
    return JSONResponse(status_code=400, content={"error": str(exc), "exit_code": 2})


def _config(overrides: list[schemas.OverrideItem]) -> OverrideConfig | None:
    if not overrides:
        return None
    return OverrideConfig.from_items(
        (item.key, item.value, item.provenance) for item in overrides
    )


def _planner_for(spheres: list[int], cap_radius: float = 0.5, pole=None):
    planners = []
    for n in spheres:
        if n < 1:
            raise ValueError(f"sphere dimension must be at least 1: {n}")
        if n % 2:
            planners.append(odd_sphere_planner(n))
        else:
            planners.append(even_sphere_planner(n, pole=pole, cap_radius=cap_radius))
    planner = planners[0]
    for nxt in planners[1:]:
        planner = product_planner(planner, nxt)
    return planner


def _nest_points(spheres: list[int], coords: list[float]):
    dims = [n + 1 for n in spheres]
    if len(coords) != sum(dims):
        raise ValueError(
            f"expected {sum(dims)} coordinates for spheres {spheres}, got {len(coords)}"
        )
    blocks = []
    at = 0
    for d in dims:
        block = np.asarray(coords[at: at + d], dtype=float)
        norm = np.linalg.norm(block)
        if norm == 0:
            raise ValueError("a sphere point cannot be the zero vector")
        blocks.append(block / norm)
        at += d
    point = blocks[0]
    for nxt in blocks[1:]:
        point = (point, nxt)
    return point


def _flatten_rule(planner, rule) -> list[int]:
    if planner.kind == "sphere":
        return [int(rule)]
    i, j = rule
    left = _flatten_rule(planner.left, planner.left.rule_pairs[i]
                         if planner.left.kind == "product" else i)
    right = _flatten_rule(planner.right, planner.right.rule_pairs[j]
                          if planner.right.kind == "product" else j)
    return left + right


@app.get("/health", response_model=schemas.HealthResponse)
def health() -> schemas.HealthResponse:
    return schemas.HealthResponse(status="ok", version=__version__)


@app.post("/bounds", response_model=schemas.BoundsResponse)
def bounds_endpoint(req: schemas.BoundsRequest) -> schemas.BoundsResponse:
    spheres = SphereTuple(tuple(req.spheres))
    report = combine(spheres, _config(req.overrides))
    data = report.to_jsonable()
    data["row"] = report.to_row()
    return schemas.BoundsResponse(**data)


@app.post("/axial", response_model=schemas.AxialResponse)
def axial_endpoint(req: schemas.AxialRequest) -> schemas.AxialResponse:
    obstructed = axial_obstructed(req.m, req.n, req.l)
    return schemas.AxialResponse(
        m=req.m,
        n=req.n,
        l=req.l,
        obstructed=obstructed,
        verdict=axial_obstruction(req.m, req.n, req.l),
    )


@app.post("/axial-interval", response_model=schemas.AxialIntervalResponse)
def axial_interval_endpoint(
    req: schemas.AxialIntervalRequest,
) -> schemas.AxialIntervalResponse:
    interval = axial_exists_interval(
        SphereTuple(tuple(req.spheres)), SphereTuple(tuple(req.other))
    )
    note = (
        "upper end certified by a multiplicative construction"
        if interval.hi is not None
        else "no construction certifies an upper end"
    )
    return schemas.AxialIntervalResponse(lo=interval.lo, hi=interval.hi, note=note)


@app.post("/immersion", response_model=schemas.ImmersionResponse)
def immersion_endpoint(req: schemas.ImmersionRequest) -> schemas.ImmersionResponse:
    spheres = SphereTuple(tuple(req.spheres))
    gd_override = None
    if req.gd is not None:
        gd_override = (req.gd, req.gd_provenance or "request override")
    report = immersion_report(spheres, gd_override, _config(req.overrides))
    return schemas.ImmersionResponse(**report.to_jsonable())


@app.post("/ring", response_model=schemas.RingResponse)
def ring_endpoint(req: schemas.RingRequest) -> schemas.RingResponse:
    spheres = SphereTuple(tuple(req.spheres))
    ring = make_ring(spheres)
    relations = [f"x^{ring.n1 + 1} = 0"]
    for j, d in enumerate(ring.ext_degrees):
        i = j + 2
        if (ring.exceptional_mask >> j) & 1:
            relations.append(f"x{i}^2 = x^{ring.n1}*x{i}")
        else:
            relations.append(f"x{i}^2 = 0")
    basis = None
    if req.degree is not None:
        basis = [ring.mono_str(m) for m in ring.basis(req.degree)]
    return schemas.RingResponse(
        spheres=list(spheres.entries),
        total_rank=ring.total_rank(),
        top_degree=ring.top_degree(),
        relations=relations,
        poincare=ring.poincare_series() if req.poincare else None,
        degree=req.degree,
        basis=basis,
    )


@app.post("/zcl", response_model=schemas.ZclResponse)
def zcl_endpoint(req: schemas.ZclRequest) -> schemas.ZclResponse:
    spheres = SphereTuple(tuple(req.spheres))
    value = zcl_lower(spheres, req.max_len)
    return schemas.ZclResponse(
        spheres=list(spheres.entries), zcl=value, search="standard-generator"
    )


@app.post("/plan", response_model=schemas.PlanResponse)
def plan_endpoint(req: schemas.PlanRequest) -> schemas.PlanResponse:
    pole = np.asarray(req.pole, dtype=float) if req.pole is not None else None
    if pole is not None and len(req.spheres) != 1:
        raise ValueError("a custom pole is only supported for a single sphere")
    planner = _planner_for(req.spheres, cap_radius=req.cap_radius, pole=pole)
    start = _nest_points(req.spheres, req.start)
    goal = _nest_points(req.spheres, req.goal)
    rule, path = planner.plan(start, goal)
    ts = np.linspace(0.0, 1.0, req.t_samples)
    pts = path.evaluate(ts)
    if isinstance(pts, tuple):
        flat = _flatten_components(pts)
        points = [comp.tolist() for comp in flat]
        level = sum(
            _component_levels(planner, rule)
        )
        rule_list = _flatten_rule(planner, rule)
    else:
        points = [pts.tolist()]
        level = int(rule)
        rule_list = [int(rule)]
    return schemas.PlanResponse(
        spheres=req.spheres,
        rule=rule_list,
        level=level,
        rule_count=planner.rule_count,
        t_samples=req.t_samples,
        points=points,
    )


def _flatten_components(pts):
    if isinstance(pts, tuple):
        out = []
        for p in pts:
            out.extend(_flatten_components(p))
        return out
    return [pts]


def _component_levels(planner, rule) -> list[int]:
    if planner.kind == "sphere":
        return [int(rule)]
    i, j = rule
    left_rule = planner.left.rule_pairs[i] if planner.left.kind == "product" else i
    right_rule = planner.right.rule_pairs[j] if planner.right.kind == "product" else j
    return _component_levels(planner.left, left_rule) + _component_levels(
        planner.right, right_rule
    )


@app.post("/verify", response_model=schemas.VerifyResponse)
def verify_endpoint(req: schemas.VerifyRequest) -> schemas.VerifyResponse:
    planner = _planner_for(req.spheres, cap_radius=req.cap_radius)
    report = verify_planner(
        planner,
        samples=req.samples,
        seed=req.seed,
        tolerance=req.tolerance,
        t_points=req.t_samples,
    )
    return schemas.VerifyResponse(**report.to_jsonable())


@app.post("/table", response_model=schemas.TableResponse)
def table_endpoint(req: schemas.TableRequest) -> schemas.TableResponse:
    config = _config(req.overrides)
    rows = []
    for spheres in expand_family(req.family, req.start, req.stop):
        rows.append(combine(spheres, config).to_row())
    return schemas.TableResponse(columns=list(TABLE_COLUMNS), rows=rows)


@app.post("/check-map", response_model=schemas.MapCheckResponse)
def check_map_endpoint(req: schemas.MapCheckRequest) -> schemas.MapCheckResponse:
    base = named_map(req.map)
    left = SphereTuple(tuple(req.left)) if req.left else SphereTuple(
        (base.x_block_dims[0] - 1,)
    )
    right = SphereTuple(tuple(req.right)) if req.right else SphereTuple(
        (base.y_block_dims[0] - 1,)
    )
    if req.variant == "classical":
        candidate = from_classical(base, left, right)
    elif req.variant == "biradial":
        candidate = biradial_extend(sphere_map_from_classical(base), left, right)
    elif req.variant == "blockwise":
        candidate = biradial_extend_v(sphere_map_from_classical(base), left, right)
    else:
        raise ValueError(
            f"unknown variant {req.variant!r}: classical, biradial or blockwise"
        )
    result = check_nonsingular(candidate, budget=req.budget, seed=req.seed)
    return schemas.MapCheckResponse(
        map=result.label,
        ok=result.ok,
        samples=result.samples,
        min_norm=result.min_norm,
        counterexample=result.counterexample,
    )


LOCAL_HANDLERS = {
    "/bounds": (schemas.BoundsRequest, bounds_endpoint),
    "/axial": (schemas.AxialRequest, axial_endpoint),
    "/axial-interval": (schemas.AxialIntervalRequest, axial_interval_endpoint),
    "/immersion": (schemas.ImmersionRequest, immersion_endpoint),
    "/ring": (schemas.RingRequest, ring_endpoint),
    "/zcl": (schemas.ZclRequest, zcl_endpoint),
    "/plan": (schemas.PlanRequest, plan_endpoint),
    "/verify": (schemas.VerifyRequest, verify_endpoint),
    "/table": (schemas.TableRequest, table_endpoint),
    "/check-map": (schemas.MapCheckRequest, check_map_endpoint),
}
