"""Request and response models of the HTTP service (also used by the CLI)."""

from __future__ import annotations

from pydantic import BaseModel, Field


class OverrideItem(BaseModel):
    key: str
    value: int = Field(ge=0)
    provenance: str = Field(min_length=1)


class IntervalOut(BaseModel):
    lo: int
    hi: int | None


class BoundItemOut(BaseModel):
    tag: str
    kind: str
    quantity: str
    value: int | None
    applicable: bool
    hypothesis: str
    citation: str


class BoundsRequest(BaseModel):
    spheres: list[int] = Field(min_length=1)
    overrides: list[OverrideItem] = []


class BoundsResponse(BaseModel):
    spheres: list[int]
    dim: int
    tc: IntervalOut
    cat: IntervalOut
    items: list[BoundItemOut]
    flags: dict
    base_registry: dict
    row: dict


class AxialRequest(BaseModel):
    m: int = Field(ge=1)
    n: int = Field(ge=1)
    l: int = Field(ge=1)


class AxialResponse(BaseModel):
    m: int
    n: int
    l: int
    obstructed: bool
    verdict: str


class AxialIntervalRequest(BaseModel):
    spheres: list[int] = Field(min_length=1)
    other: list[int] = Field(min_length=1)


class AxialIntervalResponse(BaseModel):
    lo: int
    hi: int | None
    note: str


class ImmersionRequest(BaseModel):
    spheres: list[int] = Field(min_length=1)
    gd: int | None = None
    gd_provenance: str | None = None
    overrides: list[OverrideItem] = []


class ImmersionResponse(BaseModel):
    spheres: list[int]
    dim: int
    stably_parallelizable: bool
    imm_lower: int
    imm_exact: int | None
    gd_value: int | None
    gd_source: str | None
    gd_is_exact: bool
    metastable_ok: bool
    gd_above_half: bool
    notes: list[str]


class RingRequest(BaseModel):
    spheres: list[int] = Field(min_length=1)
    degree: int | None = None
    poincare: bool = False


class RingResponse(BaseModel):
    spheres: list[int]
    total_rank: int
    top_degree: int
    relations: list[str]
    poincare: list[int] | None
    degree: int | None
    basis: list[str] | None


class ZclRequest(BaseModel):
    spheres: list[int] = Field(min_length=1)
    max_len: int | None = None


class ZclResponse(BaseModel):
    spheres: list[int]
    zcl: int
    search: str


class PlanRequest(BaseModel):
    spheres: list[int] = Field(min_length=1)
    start: list[float]
    goal: list[float]
    pole: list[float] | None = None
    cap_radius: float = 0.5
    t_samples: int = Field(default=11, ge=2)


class PlanResponse(BaseModel):
    spheres: list[int]
    rule: list[int]
    level: int
    rule_count: int
    t_samples: int
    points: list


class VerifyRequest(BaseModel):
    spheres: list[int] = Field(min_length=1)
    samples: int = Field(default=100_000, ge=1)
    seed: int = 0
    tolerance: float = 1e-9
    t_samples: int = Field(default=11, ge=2)
    cap_radius: float = 0.5


class VerifyResponse(BaseModel):
    planner: str
    samples: int
    coverage: float
    max_endpoint_err: float
    max_equivariance_defect: float
    max_offsphere: float
    rule_usage: dict
    level_histogram: dict
    max_level: int
    rule_count: int
    continuity: dict
    tolerance: float
    ok: bool
    failures: list


class TableRequest(BaseModel):
    family: str
    start: int = 1
    stop: int = 5
    overrides: list[OverrideItem] = []


class TableResponse(BaseModel):
    columns: list[str]
    rows: list[dict]


class MapCheckRequest(BaseModel):
    map: str
    left: list[int] | None = None
    right: list[int] | None = None
    variant: str = "classical"  # classical | biradial | blockwise
    budget: int = Field(default=100_000, ge=1)
    seed: int = 0


class MapCheckResponse(BaseModel):
    map: str
    ok: bool
    samples: int
    min_norm: float
    counterexample: dict | None


class HealthResponse(BaseModel):
    status: str
    version: str
