"""Motion planners on spheres, equivariant for the antipodal involution.

A planner is a finite ordered list of rules.  Each rule has an open domain of
start/goal pairs given by a continuous margin function (positive exactly on
the domain and invariant under simultaneous antipodes) and a continuous
section assigning a path to every pair in the domain, with
section(-A, -B) = -section(A, B).

The odd-dimensional sphere has two rules built on the tangent unit field
(-a2, a1, -a4, a3, ...).  The even-dimensional sphere needs three: the pole
pair (C, -C) cannot be handled by any tangent field, so near-antipodal pairs
at the poles are routed along a fixed meridian.  The near-antipodal pole
domain is an open thickening (radius parameter w) of the bare antipodal set,
so that all three domains are open.

All geometric kernels are vectorized over batches of pairs; scalar use goes
through `plan`, which returns the matched rule and a Path object.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

NORM_TOLERANCE = 1e-12


def unit_check(P: np.ndarray, name: str = "point") -> np.ndarray:
    P = np.asarray(P, dtype=float)
    norms = np.linalg.norm(P, axis=-1)
    if np.any(np.abs(norms - 1.0) > NORM_TOLERANCE):
        worst = float(np.max(np.abs(norms - 1.0)))
        raise ValueError(f"{name} must lie on the unit sphere (defect {worst:.2e})")
    return P


def half_square_dist(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """0.5 * |A - B|^2, which is 1 - <A, B> on unit vectors.

    Margins use this instead of dot products so that the excluded pairs
    (equal, or antipodal via B = -A) give an exact float zero.
    """
    diff = A - B
    return 0.5 * np.einsum("nd,nd->n", diff, diff)


def slerp_points(A: np.ndarray, B: np.ndarray, ss: np.ndarray) -> np.ndarray:
    """Constant-speed minimal geodesics, batched: (N,d),(N,d),(T,) -> (N,T,d).

    Tangent form: B is split as cos(theta) A + sin(theta) T with T a unit
    tangent at A, and the path is cos(t theta) A + sin(t theta) T.  The angle
    comes from arctan2, and T is re-orthogonalized against A, so the output is
    unit and hits both endpoints to machine precision at every angle the rule
    domains allow.  Exactly antipodal endpoints (T undefined) are excluded by
    every caller's margin.
    """
    dot = np.einsum("nd,nd->n", A, B)
    perp = B - dot[:, None] * A
    norm_perp = np.linalg.norm(perp, axis=-1)
    theta = np.arctan2(norm_perp, dot)  # (N,)
    safe = np.where(norm_perp > 0, norm_perp, 1.0)[:, None]
    T = np.where(norm_perp[:, None] > 0, perp / safe, 0.0)
    T -= np.einsum("nd,nd->n", T, A)[:, None] * A
    t_norm = np.linalg.norm(T, axis=-1, keepdims=True)
    T = np.divide(T, t_norm, out=T, where=t_norm > 0)
    ang = theta[:, None] * np.atleast_2d(ss)  # (N, T); ss may be (T,) or (N, T)
    return (
        np.cos(ang)[..., None] * A[:, None, :]
        + np.sin(ang)[..., None] * T[:, None, :]
    )


def geodesic_angle(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Angle between unit vectors via arctan2 (stable at both ends)."""
    dot = np.einsum("nd,nd->n", A, B)
    perp = B - dot[:, None] * A
    return np.arctan2(np.linalg.norm(perp, axis=-1), dot)


def _detour_points(A: np.ndarray, B: np.ndarray, V: np.ndarray,
                   ts: np.ndarray) -> np.ndarray:
    """Half great circle from A to -A in the direction V, then the minimal
    geodesic from -A to B, at constant overall speed.

    When B = -A the circle occupies the whole parameter range, so the halfway
    point is V itself.
    """
    tail = geodesic_angle(-A, B)
    switch = np.pi / (np.pi + tail)  # (N,) in (1/2, 1]
    s_circle = np.clip(ts[None, :] / switch[:, None], 0.0, 1.0)
    ang = np.pi * s_circle
    circle = (
        np.cos(ang)[..., None] * A[:, None, :]
        + np.sin(ang)[..., None] * V[:, None, :]
    )
    denom = np.where(switch < 1.0, 1.0 - switch, 1.0)
    s_geo = np.clip((ts[None, :] - switch[:, None]) / denom[:, None], 0.0, 1.0)
    geo = slerp_points(-A, B, s_geo)
    on_circle = ts[None, :] <= switch[:, None]
    return np.where(on_circle[..., None], circle, geo)


def pairing_field(A):
    """The unit tangent field (-a2, a1, -a4, a3, ...) on an odd sphere.

    Linear, orthogonal to A, norm-preserving, and odd.  Accepts numpy arrays
    (pairing the last axis) or plain sequences, so exactness can be checked
    on rational coordinates.
    """
    if isinstance(A, np.ndarray):
        if A.shape[-1] % 2:
            raise ValueError("pairing field needs an even number of coordinates")
        out = np.empty_like(A)
        out[..., 0::2] = -A[..., 1::2]
        out[..., 1::2] = A[..., 0::2]
        return out
    seq = list(A)
    if len(seq) % 2:
        raise ValueError("pairing field needs an even number of coordinates")
    out = []
    for i in range(0, len(seq), 2):
        out.append(-seq[i + 1])
        out.append(seq[i])
    return out


def orthonormal_frame(pole: np.ndarray) -> np.ndarray:
    """Deterministic orthonormal matrix whose first column is the pole."""
    pole = unit_check(pole, "pole")
    d = pole.shape[0]
    Q = np.zeros((d, d))
    Q[:, 0] = pole
    col = 1
    for i in range(d):
        if col == d:
            break
        v = np.zeros(d)
        v[i] = 1.0
        for j in range(col):
            v -= np.dot(Q[:, j], v) * Q[:, j]
        norm = np.linalg.norm(v)
        if norm > 1e-8:
            Q[:, col] = v / norm
            col += 1
    if col < d:
        raise ValueError("could not complete an orthonormal frame at the pole")
    return Q


class Path:
    """Continuous path [0, 1] -> sphere (or product), piecewise closed form."""

    def __init__(self, fn: Callable[[np.ndarray], np.ndarray]):
        self._fn = fn

    def evaluate(self, t):
        ts = np.atleast_1d(np.asarray(t, dtype=float))
        if np.any((ts < 0) | (ts > 1)):
            raise ValueError("path parameter must lie in [0, 1]")
        pts = self._fn(ts)
        if np.isscalar(t) or np.asarray(t).ndim == 0:
            if isinstance(pts, tuple):
                return tuple(p[0] for p in pts)
            return pts[0]
        return pts

    __call__ = evaluate


@dataclass(frozen=True)
class PlannerRule:
    """One motion-planning rule: id, invariant margin, equivariant section."""

    id: int
    label: str
    margin: Callable[[np.ndarray, np.ndarray], np.ndarray]
    points: Callable[[np.ndarray, np.ndarray, np.ndarray], np.ndarray]

    def member(self, A: np.ndarray, B: np.ndarray):
        return self.margin(A, B) > 0


class SpherePlanner:
    """Ordered rules on one sphere; overlaps resolve by first positive margin."""

    kind = "sphere"

    def __init__(self, n: int, rules: list[PlannerRule], label: str,
                 pole: np.ndarray | None = None, cap_radius: float | None = None):
        self.n = n
        self.ambient = n + 1
        self.rules = list(rules)
        self.label = label
        self.pole = pole
        self.cap_radius = cap_radius

    @property
    def rule_count(self) -> int:
        return len(self.rules)

    @property
    def max_level(self) -> int:
        return len(self.rules) - 1

    def without_rule(self, rule_id: int) -> "SpherePlanner":
        """Copy with one rule removed (for designed-failure coverage tests)."""
        kept = [r for r in self.rules if r.id != rule_id]
        return SpherePlanner(self.n, kept, f"{self.label} minus rule {rule_id}",
                             self.pole, self.cap_radius)

    # -- batched interface ---------------------------------------------------

    def margins(self, A: np.ndarray, B: np.ndarray) -> np.ndarray:
        return np.stack([r.margin(A, B) for r in self.rules], axis=-1)

    def select(self, A: np.ndarray, B: np.ndarray) -> np.ndarray:
        """Index of the first rule with positive margin; -1 when uncovered."""
        positive = self.margins(A, B) > 0
        sel = np.argmax(positive, axis=-1)
        sel[~positive.any(axis=-1)] = -1
        return sel

    def rule_margin(self, sel: np.ndarray, A: np.ndarray, B: np.ndarray) -> np.ndarray:
        m = self.margins(A, B)
        return np.take_along_axis(m, sel[:, None], axis=-1)[:, 0]

    def section_points(self, sel: np.ndarray, A: np.ndarray, B: np.ndarray,
                       ts: np.ndarray) -> np.ndarray:
        out = np.empty((A.shape[0], len(ts), self.ambient))
        for k, rule in enumerate(self.rules):
            mask = sel == k
            if mask.any():
                out[mask] = rule.points(A[mask], B[mask], ts)
        if np.any(sel < 0):
            raise ValueError("section requested for an uncovered pair")
        return out

    def levels(self, sel: np.ndarray) -> np.ndarray:
        return np.asarray(sel).copy()

    # -- single-pair interface -------------------------------------------------

    def plan(self, A, B) -> tuple[int, Path]:
        A = unit_check(np.asarray(A, dtype=float), "start")
        B = unit_check(np.asarray(B, dtype=float), "goal")
        if A.shape != (self.ambient,) or B.shape != (self.ambient,):
            raise ValueError(f"points must have {self.ambient} coordinates")
        sel = self.select(A[None, :], B[None, :])[0]
        if sel < 0:
            raise RuntimeError("no rule covers this pair (planner incomplete)")
        rule = self.rules[sel]
        return int(sel), Path(lambda ts: rule.points(A[None, :], B[None, :], ts)[0])

    # -- sampling helpers ------------------------------------------------------

    def sample_points(self, rng: np.random.Generator, count: int) -> np.ndarray:
        P = rng.standard_normal((count, self.ambient))
        return P / np.linalg.norm(P, axis=-1, keepdims=True)

    def adversarial_pairs(self, rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
        """Antipodal, equal, pole and equator pairs that stress the rules."""
        base = self.sample_points(rng, 256)
        A = [base, base]
        B = [-base, base.copy()]
        axes = np.eye(self.ambient)
        A.append(axes)
        B.append(-axes)
        if self.pole is not None:
            C = self.pole
            # exact pole-antipodal pairs, both orientations
            A.append(np.stack([C, -C]))
            B.append(np.stack([-C, C]))
            for eps in (1e-3, 1e-6):
                near = C[None, :] + eps * rng.standard_normal((64, self.ambient))
                near /= np.linalg.norm(near, axis=-1, keepdims=True)
                A.append(near)
                B.append(-near)
            # equator points (orthogonal to the pole) with antipodal goals
            eq = rng.standard_normal((64, self.ambient))
            eq -= np.outer(eq @ C, C)
            eq /= np.linalg.norm(eq, axis=-1, keepdims=True)
            A.append(eq)
            B.append(-eq)
        return np.concatenate(A), np.concatenate(B)

    def negate(self, P):
        return -P

    def as_components(self, P) -> list[np.ndarray]:
        return [P]

    def points_components(self, pts) -> list[np.ndarray]:
        return [pts]


def tc_g_sphere(n: int) -> int:
    """Equivariant complexity of the antipodal sphere: 1 odd, 2 even."""
    if n < 1:
        raise ValueError(f"sphere dimension must be at least 1: {n}")
    return 1 if n % 2 else 2


def odd_sphere_planner(n: int) -> SpherePlanner:
    """Two-rule equivariant planner on an odd sphere.

    Rule 0 handles non-antipodal pairs by the minimal geodesic.  Rule 1
    handles pairs with distinct endpoints: half a great circle from A to -A in
    the direction of the pairing field, then the minimal geodesic to B.
    """
    if n < 1 or n % 2 == 0:
        raise ValueError(f"odd sphere dimension required, got {n}")

    def margin0(A, B):
        return half_square_dist(A, -B)

    def points0(A, B, ts):
        return slerp_points(A, B, ts)

    def margin1(A, B):
        return half_square_dist(A, B)

    def points1(A, B, ts):
        return _detour_points(A, B, pairing_field(A), ts)

    rules = [
        PlannerRule(0, "minimal geodesic on A != -B", margin0, points0),
        PlannerRule(1, "through -A via the pairing field on A != B", margin1, points1),
    ]
    planner = SpherePlanner(n, rules, f"odd sphere S^{n}")
    planner.tangent_field = pairing_field
    return planner


def even_sphere_planner(
    n: int, pole: np.ndarray | None = None, cap_radius: float = 0.5
) -> SpherePlanner:
    """Three-rule equivariant planner on an even sphere.

    Rule 0: minimal geodesic on A != -B.  Rule 1: for A != B away from the
    poles, half a great circle from A to -A directed by the tangent field that
    vanishes only at the poles, then the minimal geodesic to B.  Rule 2: pairs
    with B near -A and A near a pole are routed along the fixed meridian
    through the frame direction E1, from pole to opposite pole.
    """
    if n < 2 or n % 2:
        raise ValueError(f"even sphere dimension >= 2 required, got {n}")
    if not 0 < cap_radius < np.pi / 4:
        raise ValueError(f"cap radius must lie in (0, pi/4), got {cap_radius}")
    if pole is None:
        pole = np.zeros(n + 1)
        pole[0] = 1.0
    pole = unit_check(np.asarray(pole, dtype=float), "pole")
    Q = orthonormal_frame(pole)
    meridian_dir = Q[:, 1]
    w2 = cap_radius * cap_radius

    def margin0(A, B):
        return half_square_dist(A, -B)

    def points0(A, B, ts):
        return slerp_points(A, B, ts)

    def margin1(A, B):
        dot_ac = A @ pole
        return np.minimum(half_square_dist(A, B), 1.0 - dot_ac * dot_ac)

    def pole_field(A):
        # coordinates in the pole frame; drop the pole coordinate, pair the rest
        U = A @ Q
        V = np.empty_like(U)
        V[:, 0] = 0.0
        V[:, 1::2] = -U[:, 2::2]
        V[:, 2::2] = U[:, 1::2]
        norm = np.linalg.norm(V, axis=-1, keepdims=True)
        V = np.divide(V, norm, out=V, where=norm > 0)
        return V @ Q.T

    def points1(A, B, ts):
        return _detour_points(A, B, pole_field(A), ts)

    def margin2(A, B):
        dot_ac = A @ pole
        m = np.minimum(w2 - half_square_dist(A, -B), w2 - (1.0 - dot_ac * dot_ac))
        return np.maximum(m, 0.0)

    def points2(A, B, ts):
        count = A.shape[0]
        dot_ac = A @ pole
        sign = np.where(dot_ac > 0, 1.0, -1.0)  # +1: A in the cap at the pole
        P1 = sign[:, None] * pole[None, :]      # nearest pole
        out = np.empty((count, len(ts), A.shape[1]))
        seg0 = ts <= 1.0 / 3.0
        seg1 = (ts > 1.0 / 3.0) & (ts <= 2.0 / 3.0)
        seg2 = ts > 2.0 / 3.0
        if seg0.any():
            out[:, seg0, :] = slerp_points(A, P1, 3.0 * ts[seg0])
        if seg1.any():
            ang = np.pi * (3.0 * ts[seg1] - 1.0)
            meridian = (
                np.cos(ang)[:, None] * pole[None, :]
                + np.sin(ang)[:, None] * meridian_dir[None, :]
            )  # (T1, d), from the pole to its antipode
            out[:, seg1, :] = sign[:, None, None] * meridian[None, :, :]
        if seg2.any():
            out[:, seg2, :] = slerp_points(-P1, B, 3.0 * ts[seg2] - 2.0)
        return out

    rules = [
        PlannerRule(0, "minimal geodesic on A != -B", margin0, points0),
        PlannerRule(1, "through -A via the pole-avoiding field", margin1, points1),
        PlannerRule(2, "meridian route for near-antipodal pole pairs", margin2, points2),
    ]
    planner = SpherePlanner(n, rules, f"even sphere S^{n}", pole=pole,
                            cap_radius=cap_radius)
    planner.tangent_field = pole_field
    return planner
