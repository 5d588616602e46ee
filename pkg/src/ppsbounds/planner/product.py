"""Product planners from an invariant partition-of-unity weighting.

A rule of the product planner is a pair (i, j) of factor rules.  Its weight
at a pair of product points is f_i * g_j, where f and g are the normalized
positive parts of the factor margins; the rule with the largest weight wins,
ties broken lexicographically.  The section is the pair of factor sections.
The level of rule (i, j) is i + j, and never exceeds the sum of the factor
complexities.
"""

from __future__ import annotations

import numpy as np

from ppsbounds.cohomology import SphereTuple
from ppsbounds.planner.spheres import Path, tc_g_sphere


def tc_g_product_bound(values: list[int]) -> int:
    """Subadditive bound: the equivariant complexity of a product is at most
    the sum of the factor complexities."""
    return sum(values)


def tc_g_sphere_product(spheres: SphereTuple) -> int:
    """Equivariant complexity of a diagonal-antipodal sphere product:
    number of factors plus the number of even-dimensional ones."""
    return sum(tc_g_sphere(n) for n in spheres.entries)


def tc_upper_borel(tcg_fiber: int, tc_base: int) -> int:
    """Inclusive form of the fibration bound TC < (TC_G(fiber)+1)(TC(base)+1)."""
    if tcg_fiber < 0 or tc_base < 0:
        raise ValueError("complexities must be nonnegative")
    return (tcg_fiber + 1) * (tc_base + 1) - 1


class ProductPlanner:
    """Pairwise-indexed planner on a product of two planned spaces."""

    kind = "product"

    def __init__(self, left, right):
        self.left = left
        self.right = right
        self.rule_pairs = [
            (i, j) for i in range(left.rule_count) for j in range(right.rule_count)
        ]
        self.label = f"product({left.label}, {right.label})"

    @property
    def rule_count(self) -> int:
        return len(self.rule_pairs)

    @property
    def max_level(self) -> int:
        return self.left.max_level + self.right.max_level

    def _split(self, P):
        if not isinstance(P, tuple) or len(P) != 2:
            raise ValueError("product points are (left, right) tuples")
        return P

    def _weights(self, A, B) -> np.ndarray:
        Ax, Ay = self._split(A)
        Bx, By = self._split(B)
        f = np.maximum(self.left.margins(Ax, Bx), 0.0)
        g = np.maximum(self.right.margins(Ay, By), 0.0)
        fs = f.sum(axis=-1, keepdims=True)
        gs = g.sum(axis=-1, keepdims=True)
        f = np.divide(f, fs, out=np.zeros_like(f), where=fs > 0)
        g = np.divide(g, gs, out=np.zeros_like(g), where=gs > 0)
        w = np.einsum("ni,nj->nij", f, g)
        return w.reshape(w.shape[0], -1)

    def margins(self, A, B) -> np.ndarray:
        """Rule margins: the componentwise minimum of the factor margins."""
        Ax, Ay = self._split(A)
        Bx, By = self._split(B)
        f = self.left.margins(Ax, Bx)
        g = self.right.margins(Ay, By)
        m = np.minimum(f[:, :, None], g[:, None, :])
        return m.reshape(m.shape[0], -1)

    def select(self, A, B) -> np.ndarray:
        w = self._weights(A, B)
        sel = np.argmax(w, axis=-1)
        sel[w.max(axis=-1) <= 0] = -1
        return sel

    def rule_margin(self, sel, A, B) -> np.ndarray:
        m = self.margins(A, B)
        return np.take_along_axis(m, sel[:, None], axis=-1)[:, 0]

    def section_points(self, sel, A, B, ts):
        Ax, Ay = self._split(A)
        Bx, By = self._split(B)
        kr = self.right.rule_count
        li = sel // kr
        rj = sel % kr
        pts_left = self.left.section_points(li, Ax, Bx, ts)
        pts_right = self.right.section_points(rj, Ay, By, ts)
        return (pts_left, pts_right)

    def levels(self, sel) -> np.ndarray:
        kr = self.right.rule_count
        li = sel // kr
        rj = sel % kr
        left_levels = self.left.levels(li)
        right_levels = self.right.levels(rj)
        return left_levels + right_levels

    def plan(self, A, B) -> tuple[tuple[int, int], Path]:
        Ab = _batch_point(self._split(A))
        Bb = _batch_point(self._split(B))
        sel = self.select(Ab, Bb)
        if sel[0] < 0:
            raise RuntimeError("no rule covers this pair (planner incomplete)")
        pair = self.rule_pairs[sel[0]]

        def fn(ts):
            pts = self.section_points(sel, Ab, Bb, ts)
            return tuple(comp[0] for comp in self.points_components(pts))

        return pair, Path(fn)

    # -- sampling helpers ----------------------------------------------------

    def sample_points(self, rng, count):
        return (
            self.left.sample_points(rng, count),
            self.right.sample_points(rng, count),
        )

    def adversarial_pairs(self, rng):
        Al, Bl = self.left.adversarial_pairs(rng)
        Ar, Br = self.right.adversarial_pairs(rng)
        nl, nr = _point_count(Al), _point_count(Ar)
        # align the factor families index by index, recycling the shorter one
        count = max(nl, nr)
        idx_l = np.arange(count) % nl
        idx_r = np.arange(count) % nr
        A = (_take_points(Al, idx_l), _take_points(Ar, idx_r))
        B = (_take_points(Bl, idx_l), _take_points(Br, idx_r))
        # also mix adversarial left factors with uniform right factors and back
        ur = self.right.sample_points(rng, nl)
        vr = self.right.sample_points(rng, nl)
        ul = self.left.sample_points(rng, nr)
        vl = self.left.sample_points(rng, nr)
        A2 = (_concat_points(Al, ul), _concat_points(ur, Ar))
        B2 = (_concat_points(Bl, vl), _concat_points(vr, Br))
        return (
            (_concat_points(A[0], A2[0]), _concat_points(A[1], A2[1])),
            (_concat_points(B[0], B2[0]), _concat_points(B[1], B2[1])),
        )

    def negate(self, P):
        Px, Py = self._split(P)
        return (self.left.negate(Px), self.right.negate(Py))

    def as_components(self, P) -> list[np.ndarray]:
        Px, Py = self._split(P)
        return self.left.as_components(Px) + self.right.as_components(Py)

    def points_components(self, pts) -> list[np.ndarray]:
        pl, pr = pts
        return self.left.points_components(pl) + self.right.points_components(pr)


def _batch_point(P):
    if isinstance(P, tuple):
        return tuple(_batch_point(p) for p in P)
    return np.asarray(P, dtype=float)[None, :]


def _point_count(P) -> int:
    while isinstance(P, tuple):
        P = P[0]
    return P.shape[0]


def _take_points(P, idx):
    if isinstance(P, tuple):
        return tuple(_take_points(p, idx) for p in P)
    return P[idx]


def _concat_points(P, Q):
    if isinstance(P, tuple):
        return tuple(_concat_points(p, q) for p, q in zip(P, Q))
    return np.concatenate([P, Q])


def product_planner(left, right) -> ProductPlanner:
    """Planner on the product of two planned spaces (diagonal action)."""
    return ProductPlanner(left, right)
