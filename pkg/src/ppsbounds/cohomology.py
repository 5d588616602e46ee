"""Mod-2 cohomology rings of sphere-product quotients and their products.

For a nondecreasing tuple (n1, ..., nr) of positive integers, the quotient of
S^{n1} x ... x S^{nr} by the diagonal antipodal involution has cohomology ring

    GF(2)[x] / (x^{n1+1})  tensor  Lambda[x_2, ..., x_r]

with deg x = 1 and deg x_i = n_i, except that x_i^2 = x^{n1} * x_i whenever
n1 is even and n_i = n1.  The case r = 1 is the truncated polynomial ring of
the real projective space P^{n1}.

Monomials are encoded as (x_exponent, exterior_mask) pairs, mask bit j
standing for the generator x_{j+2}.  Elements are frozen sets of monomials;
addition is symmetric difference (coefficients live in GF(2)).  Product rings
hold tuples of factor monomials and multiply componentwise.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

MAX_FACTORS = 16
MAX_DIM = 64


class CapacityError(Exception):
    """An input exceeds the caps of the exhaustive machinery."""


@dataclass(frozen=True)
class SphereTuple:
    """Nondecreasing tuple of positive sphere dimensions."""

    entries: tuple[int, ...]

    def __post_init__(self):
        entries = tuple(int(n) for n in self.entries)
        object.__setattr__(self, "entries", entries)
        if not entries:
            raise ValueError("sphere tuple must have at least one entry")
        if any(n < 1 for n in entries):
            raise ValueError(f"sphere dimensions must be positive: {entries}")
        if any(a > b for a, b in zip(entries, entries[1:])):
            raise ValueError(f"sphere dimensions must be nondecreasing: {entries}")
        if len(entries) > MAX_FACTORS:
            raise CapacityError(
                f"at most {MAX_FACTORS} sphere factors supported, got {len(entries)}"
            )
        if sum(entries) > MAX_DIM:
            raise CapacityError(
                f"total dimension capped at {MAX_DIM}, got {sum(entries)}"
            )

    @classmethod
    def parse(cls, text: str) -> "SphereTuple":
        """Parse a comma-separated tuple such as "2,7"."""
        parts = [p.strip() for p in str(text).split(",") if p.strip()]
        if not parts:
            raise ValueError(f"cannot parse sphere tuple from {text!r}")
        try:
            return cls(tuple(int(p) for p in parts))
        except ValueError as exc:
            raise ValueError(f"cannot parse sphere tuple from {text!r}: {exc}") from None

    @property
    def ell(self) -> int:
        """Number of sphere factors."""
        return len(self.entries)

    @property
    def dim(self) -> int:
        """Dimension of the quotient manifold (sum of the entries)."""
        return sum(self.entries)

    @property
    def n1(self) -> int:
        return self.entries[0]

    @property
    def even_tail_count(self) -> int:
        """Number of even entries beyond the first."""
        return sum(1 for n in self.entries[1:] if n % 2 == 0)

    @property
    def even_count(self) -> int:
        return sum(1 for n in self.entries if n % 2 == 0)

    def __str__(self) -> str:
        return ",".join(str(n) for n in self.entries)


@dataclass(frozen=True)
class RingElement:
    """GF(2) sum of monomials of one ring; empty set is zero."""

    ring: "PpsRing | ProductRing"
    monomials: frozenset

    def __add__(self, other: "RingElement") -> "RingElement":
        self._check_same_ring(other)
        return RingElement(self.ring, self.monomials ^ other.monomials)

    __sub__ = __add__  # characteristic 2

    def __mul__(self, other: "RingElement") -> "RingElement":
        self._check_same_ring(other)
        acc: set = set()
        mul_mono = self.ring.mul_mono
        for a in self.monomials:
            for b in other.monomials:
                m = mul_mono(a, b)
                if m is not None:
                    if m in acc:
                        acc.remove(m)
                    else:
                        acc.add(m)
        return RingElement(self.ring, frozenset(acc))

    def __pow__(self, k: int) -> "RingElement":
        if k < 0:
            raise ValueError("negative powers are not defined")
        result = self.ring.one()
        for _ in range(k):
            result = result * self
        return result

    def _check_same_ring(self, other: "RingElement") -> None:
        if self.ring != other.ring:
            raise ValueError("elements belong to different rings")

    @property
    def is_zero(self) -> bool:
        return not self.monomials

    def degrees(self) -> list[int]:
        """Sorted distinct degrees of the monomials present."""
        return sorted({self.ring.mono_degree(m) for m in self.monomials})

    def degree(self) -> int | None:
        """Degree of a homogeneous element; None for zero."""
        ds = self.degrees()
        if not ds:
            return None
        if len(ds) > 1:
            raise ValueError(f"element is not homogeneous, degrees {ds}")
        return ds[0]

    def homogeneous_part(self, degree: int) -> "RingElement":
        keep = frozenset(
            m for m in self.monomials if self.ring.mono_degree(m) == degree
        )
        return RingElement(self.ring, keep)

    def __str__(self) -> str:
        if not self.monomials:
            return "0"
        keyed = sorted(
            self.monomials, key=lambda m: (self.ring.mono_degree(m), self.ring.mono_sort_key(m))
        )
        return " + ".join(self.ring.mono_str(m) for m in keyed)

    __repr__ = __str__


class PpsRing:
    """Ring descriptor for one sphere tuple (r = 1 gives the classical P^n)."""

    def __init__(self, spheres: SphereTuple):
        if not isinstance(spheres, SphereTuple):
            spheres = SphereTuple(tuple(spheres))
        self.spheres = spheres
        self.n1 = spheres.n1
        self.ext_degrees = spheres.entries[1:]
        exceptional = 0
        if self.n1 % 2 == 0:
            for j, d in enumerate(self.ext_degrees):
                if d == self.n1:
                    exceptional |= 1 << j
        self.exceptional_mask = exceptional
        self._mask_degrees: list[int] | None = None
        self._mono_index: tuple[list, dict] | None = None

    def __eq__(self, other) -> bool:
        return isinstance(other, PpsRing) and other.spheres == self.spheres

    def __hash__(self) -> int:
        return hash(("pps", self.spheres))

    def __repr__(self) -> str:
        return f"PpsRing({self.spheres})"

    # -- monomial structure ------------------------------------------------

    def mul_mono(self, a, b):
        """Normal form of a product of monomials; None when it vanishes."""
        ea, ma = a
        eb, mb = b
        common = ma & mb
        if common & ~self.exceptional_mask:
            return None  # an honest exterior square
        e = ea + eb + self.n1 * common.bit_count()
        if e > self.n1:
            return None
        return (e, ma | mb)

    def mask_degree(self, mask: int) -> int:
        if self._mask_degrees is None:
            degs = [0] * (1 << len(self.ext_degrees))
            for m in range(1, len(degs)):
                low = m & -m
                degs[m] = degs[m ^ low] + self.ext_degrees[low.bit_length() - 1]
            self._mask_degrees = degs
        return self._mask_degrees[mask]

    def mono_degree(self, mono) -> int:
        e, mask = mono
        return e + self.mask_degree(mask)

    def mono_sort_key(self, mono):
        return mono

    def monomials(self):
        for mask in range(1 << len(self.ext_degrees)):
            for e in range(self.n1 + 1):
                yield (e, mask)

    def mono_index(self):
        """All monomials in a fixed order, plus the inverse lookup."""
        if self._mono_index is None:
            monos = sorted(self.monomials(), key=lambda m: (self.mono_degree(m), m))
            self._mono_index = (monos, {m: i for i, m in enumerate(monos)})
        return self._mono_index

    def generator_action(self) -> dict:
        """For each generator g, the map mono_id -> id of g * mono (or -1)."""
        monos, index = self.mono_index()
        action = {}
        gens = [("x", (1, 0))]
        gens += [(f"x{j + 2}", (0, 1 << j)) for j in range(len(self.ext_degrees))]
        for name, gm in gens:
            col = []
            for m in monos:
                p = self.mul_mono(gm, m)
                col.append(index[p] if p is not None else -1)
            action[name] = col
        return action

    # -- elements ----------------------------------------------------------

    def zero(self) -> RingElement:
        return RingElement(self, frozenset())

    def one(self) -> RingElement:
        return RingElement(self, frozenset({(0, 0)}))

    def element(self, monos) -> RingElement:
        out: set = set()
        for m in monos:
            if m in out:
                out.remove(m)
            else:
                out.add(m)
        for e, mask in out:
            if not (0 <= e <= self.n1):
                raise ValueError(f"x-exponent {e} outside [0, {self.n1}]")
            if mask >> len(self.ext_degrees):
                raise ValueError(f"exterior mask {mask:#b} has no matching generator")
        return RingElement(self, frozenset(out))

    def x_power(self, e: int) -> RingElement:
        if e > self.n1:
            return self.zero()
        return self.element([(e, 0)])

    def ext_gen(self, i: int) -> RingElement:
        """The generator x_i, 2 <= i <= r."""
        if not 2 <= i <= self.spheres.ell:
            raise ValueError(f"no exterior generator x{i} in this ring")
        return self.element([(0, 1 << (i - 2))])

    def gens(self) -> list[RingElement]:
        out = [self.x_power(1)] if self.n1 >= 1 else []
        out += [self.ext_gen(i) for i in range(2, self.spheres.ell + 1)]
        return out

    def restrict_to_base(self, elem: RingElement) -> RingElement:
        """Ring map onto the classical subspace ring: every x_i goes to zero."""
        if elem.ring != self:
            raise ValueError("element of a different ring")
        base = PpsRing(SphereTuple((self.n1,)))
        return base.element([(e, 0) for (e, mask) in elem.monomials if mask == 0])

    # -- enumeration -------------------------------------------------------

    def basis(self, degree: int) -> list:
        out = []
        for mask in range(1 << len(self.ext_degrees)):
            e = degree - self.mask_degree(mask)
            if 0 <= e <= self.n1:
                out.append((e, mask))
        return sorted(out)

    def top_degree(self) -> int:
        return self.spheres.dim

    def total_rank(self) -> int:
        return (self.n1 + 1) << max(self.spheres.ell - 1, 0)

    def poincare_series(self) -> list[int]:
        """Rank of each graded piece, degrees 0 .. top."""
        series = [0] * (self.top_degree() + 1)
        for mask in range(1 << len(self.ext_degrees)):
            d = self.mask_degree(mask)
            for e in range(self.n1 + 1):
                series[d + e] += 1
        return series

    # -- text form ---------------------------------------------------------

    def mono_str(self, mono) -> str:
        e, mask = mono
        parts = []
        if e == 1:
            parts.append("x")
        elif e > 1:
            parts.append(f"x^{e}")
        j = 0
        while mask >> j:
            if (mask >> j) & 1:
                parts.append(f"x{j + 2}")
            j += 1
        return "*".join(parts) if parts else "1"

    def parse_mono(self, text: str):
        e, mask = 0, 0
        for token in text.replace(" ", "").split("*"):
            if token == "1":
                continue
            if token == "x":
                e += 1
            elif token.startswith("x^"):
                e += int(token[2:])
            elif token.startswith("x") and token[1:].isdigit():
                i = int(token[1:])
                if not 2 <= i <= self.spheres.ell:
                    raise ValueError(f"unknown generator {token!r}")
                bit = 1 << (i - 2)
                if mask & bit:
                    raise ValueError(f"generator {token!r} repeated in one monomial")
                mask |= bit
            else:
                raise ValueError(f"cannot parse monomial token {token!r}")
        if e > self.n1:
            raise ValueError(f"x-exponent {e} exceeds the truncation degree {self.n1}")
        return (e, mask)

    def parse(self, text: str) -> RingElement:
        text = text.strip()
        if text == "0":
            return self.zero()
        return self.element([self.parse_mono(p) for p in text.split("+")])


class ProductRing:
    """Tensor product over GF(2) of cohomology rings; monomials are tuples."""

    def __init__(self, factors):
        factors = tuple(factors)
        if len(factors) < 2:
            raise ValueError("a product ring needs at least two factors")
        self.factors = factors

    def __eq__(self, other) -> bool:
        return isinstance(other, ProductRing) and other.factors == self.factors

    def __hash__(self) -> int:
        return hash(("product", self.factors))

    def __repr__(self) -> str:
        return "ProductRing(" + ", ".join(repr(f) for f in self.factors) + ")"

    def mul_mono(self, a, b):
        out = []
        for factor, ma, mb in zip(self.factors, a, b):
            m = factor.mul_mono(ma, mb)
            if m is None:
                return None
            out.append(m)
        return tuple(out)

    def mono_degree(self, mono) -> int:
        return sum(f.mono_degree(m) for f, m in zip(self.factors, mono))

    def mono_sort_key(self, mono):
        return mono

    def zero(self) -> RingElement:
        return RingElement(self, frozenset())

    def one(self) -> RingElement:
        return RingElement(self, frozenset({tuple(next(iter(f.one().monomials)) for f in self.factors)}))

    def element(self, monos) -> RingElement:
        out: set = set()
        for m in monos:
            m = tuple(m)
            if len(m) != len(self.factors):
                raise ValueError("monomial arity does not match the factor count")
            if m in out:
                out.remove(m)
            else:
                out.add(m)
        return RingElement(self, frozenset(out))

    def embed(self, *factor_elems: RingElement) -> RingElement:
        """Tensor of one element per factor."""
        if len(factor_elems) != len(self.factors):
            raise ValueError("need one element per factor")
        for f, el in zip(self.factors, factor_elems):
            if el.ring != f:
                raise ValueError("factor element belongs to the wrong ring")
        combos = itertools.product(*(el.monomials for el in factor_elems))
        return self.element(tuple(c) for c in combos)

    def basis(self, degree: int) -> list:
        def rec(i: int, d: int):
            if i == len(self.factors) - 1:
                return [(m,) for m in self.factors[i].basis(d)]
            out = []
            top = self.factors[i].top_degree()
            for d0 in range(0, min(d, top) + 1):
                heads = self.factors[i].basis(d0)
                if not heads:
                    continue
                for tail in rec(i + 1, d - d0):
                    out.extend((h,) + tail for h in heads)
            return out

        if degree < 0 or degree > self.top_degree():
            return []
        return sorted(rec(0, degree))

    def top_degree(self) -> int:
        return sum(f.top_degree() for f in self.factors)

    def total_rank(self) -> int:
        rank = 1
        for f in self.factors:
            rank *= f.total_rank()
        return rank

    def poincare_series(self) -> list[int]:
        series = [1]
        for f in self.factors:
            fs = f.poincare_series()
            out = [0] * (len(series) + len(fs) - 1)
            for i, a in enumerate(series):
                if a:
                    for j, b in enumerate(fs):
                        out[i + j] += a * b
            series = out
        return series

    def mono_str(self, mono) -> str:
        return " # ".join(f.mono_str(m) for f, m in zip(self.factors, mono))

    def parse_mono(self, text: str):
        parts = text.split("#")
        if len(parts) != len(self.factors):
            raise ValueError(
                f"expected {len(self.factors)} tensor factors, got {len(parts)}"
            )
        return tuple(f.parse_mono(p.strip()) for f, p in zip(self.factors, parts))

    def parse(self, text: str) -> RingElement:
        text = text.strip()
        if text == "0":
            return self.zero()
        return self.element([self.parse_mono(p) for p in text.split("+")])


def make_ring(spheres: SphereTuple | tuple | list) -> PpsRing:
    """Ring descriptor for the quotient of the given sphere product."""
    if not isinstance(spheres, SphereTuple):
        spheres = SphereTuple(tuple(spheres))
    return PpsRing(spheres)


def product_ring(left, right) -> ProductRing:
    """Tensor product of two ring descriptors (no signs over GF(2))."""
    return ProductRing((left, right))


def tensor_square(ring: PpsRing) -> ProductRing:
    return ProductRing((ring, ring))


def mul(a: RingElement, b: RingElement) -> RingElement:
    return a * b


def basis(ring, degree: int) -> list:
    return ring.basis(degree)


def poincare_series(ring) -> list[int]:
    return ring.poincare_series()
