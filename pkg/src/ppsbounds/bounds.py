"""Certified topological-complexity and category bounds.

Every applicable estimate is computed as an auditable item (tag, kind, value,
hypothesis, citation); the combined report takes the max of the lower items
and the min of the upper items and refuses to emit an inconsistent interval.

Lower bounds come from zero-divisor cup-length searches in the tensor square
of the cohomology ring and from the registry of known TC values of classical
projective spaces.  Upper bounds come from the axial-map argument, from the
fibration over the bottom projective space with its equivariant fiber
complexity, from categorical estimates, and from sphere-splitting
subadditivity.
"""

from __future__ import annotations

from dataclasses import dataclass

from ppsbounds.arith import epsilon, nu, phi
from ppsbounds.charclass import stably_parallelizable
from ppsbounds.cohomology import CapacityError, SphereTuple, make_ring
from ppsbounds.config import OverrideConfig
from ppsbounds.interval import Interval

SEARCH_NODE_CAP = 200_000
SEARCH_RANK_CAP = 2_048


class InconsistentBoundsError(Exception):
    """A lower item exceeded an upper item; this signals a bug, not bad input."""


def _toggle(acc: set, item) -> None:
    if item in acc:
        acc.remove(item)
    else:
        acc.add(item)


def zcl_lower(spheres: SphereTuple, max_len: int | None = None) -> int:
    """Standard-generator zero-divisor cup-length, a lower bound for TC.

    Searches products zbar^a * prod zbar_i^{b_i} with a <= 2 n1, b_i <= 2,
    where zbar = x # 1 + 1 # x and zbar_i = x_i # 1 + 1 # x_i in the tensor
    square of the cohomology ring.  Exhaustive with zero-product pruning.
    """
    ring = make_ring(spheres)
    n1, r = ring.n1, spheres.ell
    nodes = (2 * n1 + 1) * 3 ** (r - 1)
    if nodes > SEARCH_NODE_CAP:
        raise CapacityError(
            f"zcl search needs {nodes} exponent nodes, cap is {SEARCH_NODE_CAP}"
        )
    monos, index = ring.mono_index()
    n_monos = len(monos)
    if n_monos > SEARCH_RANK_CAP:
        raise CapacityError(
            f"zcl search needs ring rank {n_monos}, cap is {SEARCH_RANK_CAP}"
        )
    action = ring.generator_action()
    x_col = action["x"]
    ext_cols = [action[f"x{i}"] for i in range(2, r + 1)]
    limit = max_len if max_len is not None else 2 * spheres.dim + r

    def mul_zero_divisor(elem: set, col: list) -> set:
        # multiply by g # 1 + 1 # g, monomial ids packed as i * n_monos + j
        out: set = set()
        for t in elem:
            i, j = divmod(t, n_monos)
            gi = col[i]
            if gi >= 0:
                _toggle(out, gi * n_monos + j)
            gj = col[j]
            if gj >= 0:
                _toggle(out, i * n_monos + gj)
        return out

    best = 0

    def dfs(elem: set, gi: int, length: int) -> None:
        nonlocal best
        if length > best:
            best = length
        if gi == len(ext_cols) or length + 2 * (len(ext_cols) - gi) <= best:
            return
        dfs(elem, gi + 1, length)
        cur = elem
        for b in (1, 2):
            if length + b > limit:
                break
            cur = mul_zero_divisor(cur, ext_cols[gi])
            if not cur:
                break
            dfs(cur, gi + 1, length + b)

    one = index[(0, 0)]
    power: set = {one * n_monos + one}
    a = 0
    while True:
        dfs(power, 0, a)
        if a >= min(2 * n1, limit):
            break
        power = mul_zero_divisor(power, x_col)
        if not power:
            break
        a += 1
    return best


def zcl_projective(n: int) -> int:
    """Zero-divisor cup-length of the classical projective space P^n."""
    return zcl_lower(SphereTuple((n,)))


def cup_length(spheres: SphereTuple) -> int:
    """Longest nonzero product of positive-degree generators; cat lower bound.

    x is used up to n1 times; each x_i once, or twice when its square is the
    exceptional x^{n1} x_i.
    """
    ring = make_ring(spheres)
    n1, r = ring.n1, spheres.ell
    nodes = (n1 + 1) * 3 ** (r - 1)
    if nodes > SEARCH_NODE_CAP:
        raise CapacityError(
            f"cup-length search needs {nodes} exponent nodes, cap is {SEARCH_NODE_CAP}"
        )
    gens = [(0, 1 << j) for j in range(r - 1)]
    best = 0

    def dfs(mono, gi: int, length: int) -> None:
        nonlocal best
        if length > best:
            best = length
        if gi == len(gens):
            return
        dfs(mono, gi + 1, length)
        cur = mono
        b_max = 2 if (ring.exceptional_mask >> gi) & 1 else 1
        for b in range(1, b_max + 1):
            cur = ring.mul_mono(cur, gens[gi])
            if cur is None:
                break
            dfs(cur, gi + 1, length + b)

    for a in range(n1 + 1):
        dfs((a, 0), 0, a)
    return best


def mersenne_tc_lower(n: int) -> int | None:
    """Immersion-theoretic lower bound for TC(P^n) when n = 2^e - 1.

    Value 2^(e+1) - 2e - c with c = (2, 1, 1, 3) for e = (0, 1, 2, 3) mod 4.
    """
    m = n + 1
    if n < 1 or m & (m - 1):
        return None
    e = m.bit_length() - 1
    c = (2, 1, 1, 3)[e % 4]
    return 2 ** (e + 1) - 2 * e - c


def tc_projective(
    n: int, config: OverrideConfig | None = None
) -> tuple[Interval, str]:
    """Certified interval for TC(P^n), with the source of the endpoints.

    Exact for the multiplicative spheres (TC = n for n in {1, 3, 7}) and for
    powers of two (TC = 2n - 1, where the zero-divisor bound is sharp).
    Otherwise an interval [max(zcl, immersion-theoretic lower), 2n], unless an
    override with provenance pins the value: a tc.P.n entry directly, or an
    imm.P.n entry via TC = Imm - epsilon(n).
    """
    if n < 1:
        raise ValueError(f"projective space dimension must be positive: {n}")
    if config is not None:
        found = config.tc(n)
        if found is not None:
            v, prov = found
            return Interval(v, v), f"override ({prov})"
        found = config.imm(n)
        if found is not None:
            v, prov = found
            tc = v - epsilon(n)
            return Interval(tc, tc), f"immersion override, TC = Imm - epsilon ({prov})"
    if n in (1, 3, 7):
        return Interval(n, n), "multiplicative sphere, TC = n"
    if n & (n - 1) == 0:
        return Interval(2 * n - 1, 2 * n - 1), "power of two, zero-divisor bound sharp"
    lo = zcl_projective(n)
    mers = mersenne_tc_lower(n)
    if mers is not None:
        lo = max(lo, mers)
    return Interval(lo, 2 * n), "interval [max(zcl, immersion-theoretic), 2n]"


def dyadic_zcl_bound(spheres: SphereTuple) -> tuple[int, int]:
    """(e, 2^(e+1) + l - 2) for the largest e with 2^e <= n1."""
    e = spheres.n1.bit_length() - 1
    return e, 2 ** (e + 1) + spheres.ell - 2


def tc_upper_axial(spheres: SphereTuple) -> int | None:
    """2 dim - n1 + 1 for more than one factor; None otherwise."""
    if spheres.ell < 2:
        return None
    return 2 * spheres.dim - spheres.n1 + 1


def tc_lower_base(spheres: SphereTuple, config: OverrideConfig | None = None) -> int:
    """TC of the bottom projective space (a retract), lower end."""
    return tc_projective(spheres.n1, config)[0].lo


def tc_upper_borel_product(
    spheres: SphereTuple, config: OverrideConfig | None = None
) -> int:
    """(tc_hi(P^{n1}) + 1)(l + k) - 1, k counting even entries beyond the first.

    Inclusive form of the strict fibration bound; the fiber's equivariant
    complexity over the bottom projective space is l + k - 1.
    """
    hi = tc_projective(spheres.n1, config)[0].hi
    assert hi is not None
    return (hi + 1) * (spheres.ell + spheres.even_tail_count) - 1


def tc_upper_double_cat(spheres: SphereTuple) -> int | None:
    """2 (n1 + 1) l - 2 for more than one factor (doubled category bound)."""
    if spheres.ell < 2:
        return None
    return 2 * (spheres.n1 + 1) * spheres.ell - 2


def split_indices(spheres: SphereTuple) -> list[int]:
    """1-based positions i > 1 whose sphere splits off: nu(n_i + 1) >= phi(n1)."""
    p = phi(spheres.n1)
    return [
        i
        for i in range(2, spheres.ell + 1)
        if nu(spheres.entries[i - 1] + 1) >= p
    ]


def factored_spheres_interval(
    spheres: SphereTuple, config: OverrideConfig | None = None
) -> Interval | None:
    """[zcl(P^{n1}) + l - 1, tc_hi(P^{n1}) + l - 1] when every trailing sphere
    splits off (nu(n_i + 1) >= phi(n1) for all i > 1); None otherwise."""
    if spheres.ell < 2:
        return None
    if len(split_indices(spheres)) != spheres.ell - 1:
        return None
    lo = zcl_projective(spheres.n1) + spheres.ell - 1
    hi = tc_projective(spheres.n1, config)[0].hi
    assert hi is not None
    return Interval(lo, hi + spheres.ell - 1)


def _cat_hi_quick(spheres: SphereTuple) -> int:
    hi = spheres.dim
    if spheres.n1 > 1 and spheres.ell > 1:
        hi = min(hi, spheres.dim - 1)
    return min(hi, (spheres.n1 + 1) * spheres.ell - 1)


def _tc_hi_quick(spheres: SphereTuple, config: OverrideConfig | None) -> int:
    if spheres.ell == 1:
        hi = tc_projective(spheres.n1, config)[0].hi
        assert hi is not None
        return hi
    candidates = [
        tc_upper_borel_product(spheres, config),
        2 * _cat_hi_quick(spheres),
    ]
    upper = tc_upper_axial(spheres)
    if upper is not None:
        candidates.append(upper)
    upper = tc_upper_double_cat(spheres)
    if upper is not None:
        candidates.append(upper)
    factored = factored_spheres_interval(spheres, config)
    if factored is not None and factored.hi is not None:
        candidates.append(factored.hi)
    return min(candidates)


def split_upper(
    spheres: SphereTuple, config: OverrideConfig | None = None
) -> int | None:
    """Subadditive upper bound after removing every splitting sphere factor.

    Each split factor contributes TC(S^odd) = 1 or TC(S^even) = 2; the
    splitting test forces n_i odd, so the even case is vacuous but kept for
    the record.  None when nothing splits.
    """
    idx = split_indices(spheres)
    if not idx:
        return None
    removed = set(idx)
    remaining = tuple(
        n for pos, n in enumerate(spheres.entries, start=1) if pos not in removed
    )
    add = sum(1 if spheres.entries[i - 1] % 2 else 2 for i in idx)
    return _tc_hi_quick(SphereTuple(remaining), config) + add


@dataclass(frozen=True)
class BoundItem:
    tag: str
    kind: str  # lower | upper | exact
    quantity: str  # tc | cat
    value: int | None
    applicable: bool
    hypothesis: str
    citation: str

    def to_jsonable(self) -> dict:
        return {
            "tag": self.tag,
            "kind": self.kind,
            "quantity": self.quantity,
            "value": self.value,
            "applicable": self.applicable,
            "hypothesis": self.hypothesis,
            "citation": self.citation,
        }


@dataclass(frozen=True)
class BoundReport:
    spheres: SphereTuple
    tc: Interval
    cat: Interval
    items: tuple[BoundItem, ...]
    flags: dict
    base_registry: dict

    def item(self, tag: str) -> BoundItem:
        found = [it for it in self.items if it.tag == tag]
        if not found:
            raise KeyError(f"no bound item tagged {tag!r}")
        if len(found) > 1:
            raise KeyError(f"tag {tag!r} is ambiguous; use items directly")
        return found[0]

    def to_jsonable(self) -> dict:
        return {
            "spheres": list(self.spheres.entries),
            "dim": self.spheres.dim,
            "tc": self.tc.to_jsonable(),
            "cat": self.cat.to_jsonable(),
            "items": [it.to_jsonable() for it in self.items],
            "flags": dict(self.flags),
            "base_registry": dict(self.base_registry),
        }

    def to_row(self) -> dict:
        """Flat row used by the CSV table output (fixed column set)."""
        row = {
            "spheres": str(self.spheres),
            "dim": self.spheres.dim,
            "tc_lo": self.tc.lo,
            "tc_hi": self.tc.hi,
            "cat_lo": self.cat.lo,
            "cat_hi": self.cat.hi,
            "tc_below_dim": self.flags["tc_below_dim"],
            "stably_parallelizable": self.flags["stably_parallelizable"],
        }
        for tag in TABLE_ITEM_TAGS:
            matching = [
                it for it in self.items if it.tag == tag and it.value is not None
            ]
            row[tag] = matching[0].value if matching else None
        borel = self.item("borel_product")
        row["borel_product_strict"] = (
            borel.value + 1 if borel.value is not None else None
        )
        return row


TABLE_ITEM_TAGS = (
    "zcl",
    "dyadic_zcl",
    "base_tc",
    "mersenne_imm",
    "axial_dim",
    "borel_product",
    "double_cat_formula",
    "twice_cat",
    "split_subadditive",
    "cup_length",
    "cat_factor_formula",
    "below_dim",
    "dim",
)

TABLE_COLUMNS = (
    "spheres",
    "dim",
    "tc_lo",
    "tc_hi",
    "cat_lo",
    "cat_hi",
    "tc_below_dim",
    "stably_parallelizable",
) + TABLE_ITEM_TAGS + ("borel_product_strict",)


def cat_bounds(spheres: SphereTuple) -> tuple[Interval, list[BoundItem]]:
    """Certified category interval plus the items feeding it."""
    cup = cup_length(spheres)
    items = [
        BoundItem(
            tag="cup_length",
            kind="lower",
            quantity="cat",
            value=cup,
            applicable=True,
            hypothesis="",
            citation="cat >= cup length (longest nonzero product of positive-degree classes)",
        )
    ]
    cates = (spheres.n1 + 1) * spheres.ell - 1
    items.append(
        BoundItem(
            tag="cat_factor_formula",
            kind="upper",
            quantity="cat",
            value=cates,
            applicable=True,
            hypothesis="",
            citation=(
                f"strict bound cat < (n1 + 1) * l = {cates + 1}, stored inclusively; "
                "fibration over the bottom projective space"
            ),
        )
    )
    below_dim_ok = spheres.n1 > 1 and spheres.ell > 1
    items.append(
        BoundItem(
            tag="below_dim",
            kind="upper",
            quantity="cat",
            value=spheres.dim - 1 if below_dim_ok else None,
            applicable=below_dim_ok,
            hypothesis="n1 > 1 and l > 1",
            citation="cat < dim when n1 > 1 and l > 1",
        )
    )
    items.append(
        BoundItem(
            tag="dim",
            kind="upper",
            quantity="cat",
            value=spheres.dim,
            applicable=True,
            hypothesis="",
            citation="cat <= dim",
        )
    )
    hi = min(it.value for it in items if it.kind == "upper" and it.value is not None)
    if cup > hi:
        raise InconsistentBoundsError(
            f"cat lower {cup} exceeds cat upper {hi} on {spheres}"
        )
    return Interval(cup, hi), items


def combine(
    spheres: SphereTuple, config: OverrideConfig | None = None
) -> BoundReport:
    """Full audited bound report for one sphere tuple."""
    base, base_source = tc_projective(spheres.n1, config)
    cat, items = cat_bounds(spheres)

    zcl = zcl_lower(spheres)
    items.append(
        BoundItem(
            tag="zcl",
            kind="lower",
            quantity="tc",
            value=zcl,
            applicable=True,
            hypothesis="",
            citation=(
                "TC >= zero-divisor cup-length; standard-generator search over "
                "zbar^a * prod zbar_i^{b_i}, a <= 2 n1, b_i <= 2"
            ),
        )
    )
    e, dyadic = dyadic_zcl_bound(spheres)
    items.append(
        BoundItem(
            tag="dyadic_zcl",
            kind="lower",
            quantity="tc",
            value=dyadic,
            applicable=True,
            hypothesis=f"n1 >= 2^{e}",
            citation=f"TC >= 2^(e+1) + l - 2 with e = {e} (zero-divisor power formula)",
        )
    )
    items.append(
        BoundItem(
            tag="base_tc",
            kind="lower",
            quantity="tc",
            value=base.lo,
            applicable=True,
            hypothesis="",
            citation=(
                "the bottom projective space is a retract, so TC >= TC(P^{n1}); "
                f"registry: {base_source}"
            ),
        )
    )
    mers = mersenne_tc_lower(spheres.n1)
    items.append(
        BoundItem(
            tag="mersenne_imm",
            kind="lower",
            quantity="tc",
            value=mers,
            applicable=mers is not None,
            hypothesis="n1 = 2^e - 1",
            citation=(
                "TC(P^{2^e - 1}) >= 2^(e+1) - 2e - c, c = (2,1,1,3) by e mod 4 "
                "(immersion-theoretic)"
            ),
        )
    )

    axial = tc_upper_axial(spheres)
    items.append(
        BoundItem(
            tag="axial_dim",
            kind="upper",
            quantity="tc",
            value=axial,
            applicable=axial is not None,
            hypothesis="l > 1",
            citation="TC <= 2*dim - n1 + 1 for l > 1 (axial-map argument)",
        )
    )
    borel = tc_upper_borel_product(spheres, config)
    strict = borel + 1
    items.append(
        BoundItem(
            tag="borel_product",
            kind="upper",
            quantity="tc",
            value=borel,
            applicable=True,
            hypothesis="",
            citation=(
                f"strict bound TC < (TC(P^n1)+1)(l+k) = {strict}, stored inclusively; "
                "fibration over P^{n1} with equivariant fiber complexity l + k - 1"
            ),
        )
    )
    dcat = tc_upper_double_cat(spheres)
    items.append(
        BoundItem(
            tag="double_cat_formula",
            kind="upper",
            quantity="tc",
            value=dcat,
            applicable=dcat is not None,
            hypothesis="l > 1",
            citation=(
                f"strict bound TC < 2(n1+1)l - 1 = {dcat + 1 if dcat is not None else ''}, "
                "stored inclusively; doubles the category product bound"
            ),
        )
    )
    assert cat.hi is not None
    items.append(
        BoundItem(
            tag="twice_cat",
            kind="upper",
            quantity="tc",
            value=2 * cat.hi,
            applicable=True,
            hypothesis="",
            citation="TC <= 2 cat",
        )
    )

    factored = factored_spheres_interval(spheres, config)
    if factored is not None:
        if factored.exact:
            items.append(
                BoundItem(
                    tag="factored_spheres",
                    kind="exact",
                    quantity="tc",
                    value=factored.lo,
                    applicable=True,
                    hypothesis="nu(n_i + 1) >= phi(n1) for every i > 1",
                    citation=(
                        "zcl(P^{n1}) + l - 1 <= TC <= TC(P^{n1}) + l - 1, collapsed: "
                        "every trailing sphere splits off and the ends agree"
                    ),
                )
            )
        else:
            items.append(
                BoundItem(
                    tag="factored_spheres",
                    kind="lower",
                    quantity="tc",
                    value=factored.lo,
                    applicable=True,
                    hypothesis="nu(n_i + 1) >= phi(n1) for every i > 1",
                    citation="TC >= zcl(P^{n1}) + l - 1 when every trailing sphere splits off",
                )
            )
            items.append(
                BoundItem(
                    tag="factored_spheres",
                    kind="upper",
                    quantity="tc",
                    value=factored.hi,
                    applicable=True,
                    hypothesis="nu(n_i + 1) >= phi(n1) for every i > 1",
                    citation=(
                        "TC <= TC(P^{n1}) + l - 1 when every trailing sphere splits off "
                        "(subadditivity; split spheres are odd)"
                    ),
                )
            )
    else:
        items.append(
            BoundItem(
                tag="factored_spheres",
                kind="exact",
                quantity="tc",
                value=None,
                applicable=False,
                hypothesis="nu(n_i + 1) >= phi(n1) for every i > 1",
                citation="not applicable: some trailing sphere does not split off",
            )
        )

    split = split_upper(spheres, config)
    items.append(
        BoundItem(
            tag="split_subadditive",
            kind="upper",
            quantity="tc",
            value=split,
            applicable=split is not None,
            hypothesis="some i > 1 has nu(n_i + 1) >= phi(n1)",
            citation=(
                "TC <= TC(remaining quotient, upper) + sum of TC(S^{n_i}) over split "
                "factors, TC(S^odd) = 1 and TC(S^even) = 2; the product decomposition "
                "is read as: the quotient splits as (quotient of the rest) x S^{n_i}"
            ),
        )
    )

    tc_lowers = [
        it for it in items if it.quantity == "tc" and it.kind in ("lower", "exact")
        and it.value is not None
    ]
    tc_uppers = [
        it for it in items if it.quantity == "tc" and it.kind in ("upper", "exact")
        and it.value is not None
    ]
    lo_item = max(tc_lowers, key=lambda it: it.value)
    hi_item = min(tc_uppers, key=lambda it: it.value)
    if lo_item.value > hi_item.value:
        raise InconsistentBoundsError(
            f"on {spheres}: lower item {lo_item.tag}={lo_item.value} exceeds "
            f"upper item {hi_item.tag}={hi_item.value}"
        )
    tc = Interval(lo_item.value, hi_item.value)

    splits = split_indices(spheres)
    flags = {
        "stably_parallelizable": stably_parallelizable(spheres),
        "factored_applicable": factored is not None,
        "factored_exact": factored is not None and factored.exact,
        "circle_factors": sum(1 for n in spheres.entries[1:] if n == 1),
        "splits": splits,
        "tc_below_dim": tc.hi is not None and tc.hi < spheres.dim,
    }
    base_registry = {
        "n1": spheres.n1,
        "lo": base.lo,
        "hi": base.hi,
        "source": base_source,
    }
    return BoundReport(
        spheres=spheres,
        tc=tc,
        cat=cat,
        items=tuple(items),
        flags=flags,
        base_registry=base_registry,
    )


def expand_family(family: str, start: int, stop: int) -> list[SphereTuple]:
    """Expand a parameterized family such as "2^e,2^e" over e = start..stop.

    Each comma-separated entry is an integer expression in e using the
    operators + - * and ^ (power).
    """
    allowed = set("0123456789e+-*^() ")
    entries = [p.strip() for p in family.split(",") if p.strip()]
    if not entries:
        raise ValueError(f"cannot parse family {family!r}")
    for entry in entries:
        if not set(entry) <= allowed:
            raise ValueError(f"family entry {entry!r} has unsupported characters")
    if stop < start:
        raise ValueError(f"empty family range {start}..{stop}")
    out = []
    for e in range(start, stop + 1):
        values = []
        for entry in entries:
            expr = entry.replace("^", "**")
            value = eval(expr, {"__builtins__": {}}, {"e": e})  # noqa: S307
            if not isinstance(value, int) or value < 1:
                raise ValueError(
                    f"family entry {entry!r} gives {value!r} at e = {e}, "
                    "expected a positive integer"
                )
            values.append(value)
        out.append(SphereTuple(tuple(values)))
    return out
