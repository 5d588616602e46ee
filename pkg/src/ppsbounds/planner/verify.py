"""Sampling verification harness for motion planners.

Checks, over uniform pairs plus adversarial families (antipodal, equal, pole
and equator pairs), that every pair is covered by some rule, that sections
start and end where they should, stay on the sphere, and are equivariant, and
estimates an empirical continuity modulus per rule from perturbed pairs well
inside a rule domain.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass
class VerificationReport:
    planner: str
    samples: int
    coverage: float
    max_endpoint_err: float
    max_equivariance_defect: float
    max_offsphere: float
    rule_usage: dict[int, int]
    level_histogram: dict[int, int]
    max_level: int
    rule_count: int
    continuity: dict[int, dict]
    tolerance: float
    ok: bool
    failures: list[dict] = field(default_factory=list)

    def to_jsonable(self) -> dict:
        return {
            "planner": self.planner,
            "samples": self.samples,
            "coverage": self.coverage,
            "max_endpoint_err": self.max_endpoint_err,
            "max_equivariance_defect": self.max_equivariance_defect,
            "max_offsphere": self.max_offsphere,
            "rule_usage": {str(k): v for k, v in sorted(self.rule_usage.items())},
            "level_histogram": {
                str(k): v for k, v in sorted(self.level_histogram.items())
            },
            "max_level": self.max_level,
            "rule_count": self.rule_count,
            "continuity": {str(k): v for k, v in sorted(self.continuity.items())},
            "tolerance": self.tolerance,
            "ok": self.ok,
            "failures": self.failures,
        }


def _component_rows(planner, P, idx):
    return [comp[idx].tolist() for comp in planner.as_components(P)]


def verify_planner(
    planner,
    samples: int = 100_000,
    seed: int = 0,
    tolerance: float = 1e-9,
    t_points: int = 11,
    continuity_pairs: int = 256,
    delta: float = 1e-6,
) -> VerificationReport:
    """Run the sampling checks and return the full report."""
    if samples < 1:
        raise ValueError("need at least one sample")
    rng = np.random.default_rng(seed)
    A_u = planner.sample_points(rng, samples)
    B_u = planner.sample_points(rng, samples)
    A_a, B_a = planner.adversarial_pairs(rng)

    def cat(P, Q):
        if isinstance(P, tuple):
            return tuple(cat(p, q) for p, q in zip(P, Q))
        return np.concatenate([P, Q])

    A = cat(A_u, A_a)
    B = cat(B_u, B_a)
    total = planner.as_components(A)[0].shape[0]

    failures: list[dict] = []
    sel = planner.select(A, B)
    covered = sel >= 0
    coverage = float(np.mean(covered))
    if not covered.all():
        for idx in np.flatnonzero(~covered)[:5]:
            failures.append(
                {
                    "kind": "coverage",
                    "start": _component_rows(planner, A, int(idx)),
                    "goal": _component_rows(planner, B, int(idx)),
                }
            )

    def take(P, mask):
        if isinstance(P, tuple):
            return tuple(take(p, mask) for p in P)
        return P[mask]

    A_c = take(A, covered)
    B_c = take(B, covered)
    sel_c = sel[covered]
    ts = np.linspace(0.0, 1.0, t_points)

    pts = planner.section_points(sel_c, A_c, B_c, ts)
    pts_comps = planner.points_components(pts)
    a_comps = planner.as_components(A_c)
    b_comps = planner.as_components(B_c)

    endpoint_err = 0.0
    offsphere = 0.0
    for comp, ac, bc in zip(pts_comps, a_comps, b_comps):
        endpoint_err = max(
            endpoint_err,
            float(np.max(np.linalg.norm(comp[:, 0, :] - ac, axis=-1))),
            float(np.max(np.linalg.norm(comp[:, -1, :] - bc, axis=-1))),
        )
        offsphere = max(
            offsphere, float(np.max(np.abs(np.linalg.norm(comp, axis=-1) - 1.0)))
        )

    sel_neg = planner.select(planner.negate(A_c), planner.negate(B_c))
    if not np.array_equal(sel_neg, sel_c):
        bad = np.flatnonzero(sel_neg != sel_c)
        for idx in bad[:5]:
            failures.append(
                {
                    "kind": "selection_not_invariant",
                    "rule": int(sel_c[idx]),
                    "rule_negated": int(sel_neg[idx]),
                    "start": _component_rows(planner, A_c, int(idx)),
                    "goal": _component_rows(planner, B_c, int(idx)),
                }
            )
    pts_neg = planner.section_points(
        sel_c, planner.negate(A_c), planner.negate(B_c), ts
    )
    equivariance = 0.0
    for comp, comp_neg in zip(pts_comps, planner.points_components(pts_neg)):
        equivariance = max(
            equivariance, float(np.max(np.linalg.norm(comp_neg + comp, axis=-1)))
        )

    levels = planner.levels(sel_c)
    level_histogram = {
        int(level): int(count)
        for level, count in zip(*np.unique(levels, return_counts=True))
    }
    rule_usage = {
        int(rule): int(count)
        for rule, count in zip(*np.unique(sel_c, return_counts=True))
    }

    continuity = _continuity_stats(
        planner, A_c, B_c, sel_c, ts, rng, continuity_pairs, delta
    )

    if endpoint_err > tolerance:
        failures.append({"kind": "endpoint", "defect": endpoint_err})
    if offsphere > tolerance:
        failures.append({"kind": "offsphere", "defect": offsphere})
    if equivariance > tolerance:
        failures.append({"kind": "equivariance", "defect": equivariance})

    ok = coverage == 1.0 and not failures
    return VerificationReport(
        planner=planner.label,
        samples=total,
        coverage=coverage,
        max_endpoint_err=endpoint_err,
        max_equivariance_defect=equivariance,
        max_offsphere=offsphere,
        rule_usage=rule_usage,
        level_histogram=level_histogram,
        max_level=int(levels.max()) if levels.size else -1,
        rule_count=planner.rule_count,
        continuity=continuity,
        tolerance=tolerance,
        ok=ok,
        failures=failures,
    )


def _perturb(planner, P, rng, delta):
    if isinstance(P, tuple):
        return tuple(_perturb(planner, p, rng, delta) for p in P)
    noisy = P + delta * rng.standard_normal(P.shape)
    return noisy / np.linalg.norm(noisy, axis=-1, keepdims=True)


def _pair_distance(planner, A, B, A2, B2) -> np.ndarray:
    total = 0.0
    for p, q in zip(planner.as_components(A), planner.as_components(A2)):
        total = total + np.sum((p - q) ** 2, axis=-1)
    for p, q in zip(planner.as_components(B), planner.as_components(B2)):
        total = total + np.sum((p - q) ** 2, axis=-1)
    return np.sqrt(total)


def _continuity_stats(planner, A, B, sel, ts, rng, count, delta) -> dict[int, dict]:
    """Empirical continuity modulus per rule, on pairs with margin > 10 delta."""
    keep = min(count, sel.shape[0])
    idx = np.arange(keep)

    def take(P):
        if isinstance(P, tuple):
            return tuple(take(p) for p in P)
        return P[idx]

    A0, B0, s0 = take(A), take(B), sel[idx]
    A1 = _perturb(planner, A0, rng, delta)
    B1 = _perturb(planner, B0, rng, delta)
    deep = (planner.rule_margin(s0, A0, B0) > 10 * delta) & (
        planner.rule_margin(s0, A1, B1) > 10 * delta
    )
    stats: dict[int, dict] = {}
    if not deep.any():
        return stats

    def mask_points(P, mask):
        if isinstance(P, tuple):
            return tuple(mask_points(p, mask) for p in P)
        return P[mask]

    A0m, B0m, A1m, B1m = (
        mask_points(A0, deep),
        mask_points(B0, deep),
        mask_points(A1, deep),
        mask_points(B1, deep),
    )
    s0m = s0[deep]
    pts0 = planner.points_components(planner.section_points(s0m, A0m, B0m, ts))
    pts1 = planner.points_components(planner.section_points(s0m, A1m, B1m, ts))
    deviation = 0.0
    for c0, c1 in zip(pts0, pts1):
        deviation = deviation + np.max(np.linalg.norm(c0 - c1, axis=-1), axis=-1)
    dist = _pair_distance(planner, A0m, B0m, A1m, B1m)
    modulus = np.divide(deviation, dist, out=np.zeros_like(deviation), where=dist > 0)
    for rule in np.unique(s0m):
        mask = s0m == rule
        stats[int(rule)] = {
            "pairs": int(mask.sum()),
            "max_deviation": float(deviation[mask].max()),
            "max_modulus": float(modulus[mask].max()),
        }
    return stats
