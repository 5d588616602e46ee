"""Characteristic classes and parity obstructions.

Total Stiefel-Whitney classes of sphere-product quotients, the binomial
obstruction to axial maps P^m x P^n -> P^L, geometric-dimension lower bounds,
stable parallelizability, and the immersion-dimension report they combine
into.

The stable tangent class of the quotient of S^{n1} x ... x S^{nr} is
(dim + r) copies of the canonical line bundle, so its total Stiefel-Whitney
class is (1 + x)^{dim + r} truncated at degree n1.  In the non stably
parallelizable case the immersion dimension equals dim + g where g is the
geometric dimension of the negative of that stable bundle; only its binomial
parity lower bound is computable here, exact values must arrive as overrides
with provenance.
"""

from __future__ import annotations

from dataclasses import dataclass

from ppsbounds.arith import binom_mod2, nu, phi
from ppsbounds.cohomology import (
    ProductRing,
    PpsRing,
    RingElement,
    SphereTuple,
    make_ring,
)
from ppsbounds.interval import Interval

OBSTRUCTED = "obstructed"
UNOBSTRUCTED = "unobstructed"


def total_sw(spheres: SphereTuple) -> RingElement:
    """Total Stiefel-Whitney class (1 + x)^{dim + r}, truncated at x^{n1}."""
    ring = make_ring(spheres)
    power = spheres.dim + spheres.ell
    monos = [(j, 0) for j in range(ring.n1 + 1) if binom_mod2(power, j)]
    return ring.element(monos)


def sw_of_projective_product(dims: list[int]) -> RingElement:
    """Total Stiefel-Whitney class of a product of classical projective spaces.

    The result lives in the tensor product of the truncated polynomial rings
    and equals the product of (1 + x_i)^{d_i + 1}.
    """
    if not dims:
        raise ValueError("need at least one projective space")
    factors = tuple(PpsRing(SphereTuple((d,))) for d in dims)
    if len(factors) == 1:
        ring = factors[0]
        d = dims[0]
        return ring.element([(j, 0) for j in range(d + 1) if binom_mod2(d + 1, j)])
    ring = ProductRing(factors)
    parts = []
    for f, d in zip(factors, dims):
        parts.append(f.element([(j, 0) for j in range(d + 1) if binom_mod2(d + 1, j)]))
    return ring.embed(*parts)


def axial_obstructed(m: int, n: int, L: int) -> bool:
    """Whether (x + y)^{L+1} is nonzero in H*(P^m x P^n), forbidding an axial
    map P^m x P^n -> P^L."""
    if m < 1 or n < 1 or L < 1:
        raise ValueError("all of m, n, L must be at least 1")
    lo = max(0, L + 1 - n)
    hi = min(m, L + 1)
    return any(binom_mod2(L + 1, a) for a in range(lo, hi + 1))


def axial_obstruction(m: int, n: int, L: int) -> str:
    """String verdict for the axial obstruction, for reports."""
    return OBSTRUCTED if axial_obstructed(m, n, L) else UNOBSTRUCTED


def gd_lower_bound(kk: int, n1: int) -> int:
    """Largest g <= n1 with C(kk + g - 1, g) odd; 0 when there is none.

    A lower bound for the geometric dimension of -kk copies of the canonical
    line bundle over P^{n1}.
    """
    if kk < 1 or n1 < 1:
        raise ValueError("kk and n1 must be at least 1")
    for g in range(n1, 0, -1):
        if binom_mod2(kk + g - 1, g):
            return g
    return 0


def stably_parallelizable(spheres: SphereTuple) -> bool:
    """nu(dim + r) >= phi(n1)."""
    return nu(spheres.dim + spheres.ell) >= phi(spheres.n1)


@dataclass(frozen=True)
class ImmersionReport:
    """Audit of what is known about the Euclidean immersion dimension."""

    spheres: SphereTuple
    stably_parallelizable: bool
    imm_lower: int
    imm_exact: int | None
    gd_value: int | None
    gd_source: str | None
    gd_is_exact: bool
    metastable_ok: bool
    gd_above_half: bool
    notes: tuple[str, ...]

    def to_jsonable(self) -> dict:
        return {
            "spheres": list(self.spheres.entries),
            "dim": self.spheres.dim,
            "stably_parallelizable": self.stably_parallelizable,
            "imm_lower": self.imm_lower,
            "imm_exact": self.imm_exact,
            "gd_value": self.gd_value,
            "gd_source": self.gd_source,
            "gd_is_exact": self.gd_is_exact,
            "metastable_ok": self.metastable_ok,
            "gd_above_half": self.gd_above_half,
            "notes": list(self.notes),
        }


def immersion_report(
    spheres: SphereTuple,
    gd_override: tuple[int, str] | None = None,
    config=None,
) -> ImmersionReport:
    """Immersion-dimension report for one sphere tuple.

    Stably parallelizable quotients immerse in exactly dim + 1.  Otherwise the
    immersion dimension is dim + g for the geometric dimension g of the
    negated stable tangent bundle; g is reported as the binomial parity lower
    bound unless an override with provenance pins it.
    """
    sp = stably_parallelizable(spheres)
    k = spheres.dim + spheres.ell
    g_parity = gd_lower_bound(k, spheres.n1)
    if gd_override is None and config is not None:
        found = config.gd(spheres.n1, k)
        if found is not None:
            gd_override = found
    notes: list[str] = []
    if sp:
        imm_exact: int | None = spheres.dim + 1
        imm_lower = spheres.dim + 1
        gd_value: int | None = None
        gd_source: str | None = None
        gd_is_exact = False
        notes.append(
            "stably parallelizable (nu(dim + r) >= phi(n1)): "
            "immersion dimension is dim + 1"
        )
    elif gd_override is not None:
        g, provenance = gd_override
        if g < 1:
            raise ValueError(f"gd override must be at least 1, got {g}")
        if not provenance:
            raise ValueError("gd override requires a provenance string")
        if g < g_parity:
            notes.append(
                f"override g={g} is below the parity lower bound {g_parity}; "
                "the supplied value is reported as given"
            )
        gd_value, gd_source, gd_is_exact = g, provenance, True
        imm_exact = spheres.dim + g
        imm_lower = imm_exact
        notes.append(f"immersion dimension dim + g = {spheres.dim} + {g}")
    else:
        gd_value, gd_source, gd_is_exact = (
            g_parity,
            "binomial parity lower bound",
            False,
        )
        imm_exact = None
        imm_lower = spheres.dim + g_parity
        notes.append(
            f"gd lower bound {g_parity} from C({k} + g - 1, g) odd, g <= {spheres.n1}"
        )
    metastable_ok = 3 * spheres.dim < 2 * imm_lower
    gd_above_half = gd_value is not None and gd_value > (spheres.n1 + 2) // 2
    return ImmersionReport(
        spheres=spheres,
        stably_parallelizable=sp,
        imm_lower=imm_lower,
        imm_exact=imm_exact,
        gd_value=gd_value,
        gd_source=gd_source,
        gd_is_exact=gd_is_exact,
        metastable_ok=metastable_ok,
        gd_above_half=gd_above_half,
        notes=tuple(notes),
    )


def axial_exists_interval(nt: SphereTuple, mt: SphereTuple) -> Interval:
    """Certified range for the minimal L admitting an axial map of the pair.

    Existence depends only on the two leading entries.  The lower end is the
    smallest L, at least max(n1, m1), at which the binomial obstruction
    vanishes; the upper end is set only for the known multiplicative
    constructions n1 = m1 in {1, 3, 7}.
    """
    n1, m1 = nt.n1, mt.n1
    lo = max(n1, m1)
    while axial_obstructed(n1, m1, lo):
        lo += 1
    hi = n1 if (n1 == m1 and n1 in (1, 3, 7)) else None
    if hi is not None and hi < lo:
        raise AssertionError(
            f"construction at L={hi} contradicts the obstruction bound {lo}"
        )
    return Interval(lo, hi)
