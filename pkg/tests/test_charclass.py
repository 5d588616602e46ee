import math

import pytest

from ppsbounds.charclass import (
    UNOBSTRUCTED,
    axial_exists_interval,
    axial_obstructed,
    axial_obstruction,
    gd_lower_bound,
    immersion_report,
    stably_parallelizable,
    sw_of_projective_product,
    total_sw,
)
from ppsbounds.cohomology import SphereTuple, make_ring, product_ring
from ppsbounds.config import OverrideConfig


def tuples_with_dim_up_to(limit):
    out = []

    def rec(prefix, minimum, budget):
        if prefix:
            out.append(SphereTuple(tuple(prefix)))
        if len(prefix) >= 16:
            return
        for n in range(minimum, budget + 1):
            rec(prefix + [n], n, budget - n)

    rec([], 1, limit)
    return out


class TestTotalSw:
    def test_examples(self):
        assert str(total_sw(SphereTuple((2, 2)))) == "1 + x^2"
        assert str(total_sw(SphereTuple((1, 3)))) == "1"
        assert str(total_sw(SphereTuple((1,)))) == "1"

    def test_classical_against_comb(self):
        for n in range(1, 33):
            elem = total_sw(SphereTuple((n,)))
            expected = {
                (j, 0) for j in range(n + 1) if math.comb(n + 1, j) % 2 == 1
            }
            assert elem.monomials == frozenset(expected)

    def test_stably_parallelizable_implies_trivial_class(self):
        for t in tuples_with_dim_up_to(20):
            if stably_parallelizable(t):
                assert str(total_sw(t)) == "1", t


class TestSwOfProjectiveProduct:
    def test_two_planes(self):
        elem = sw_of_projective_product([2, 2])
        part = elem.homogeneous_part(2)
        assert str(part) == "1 # x^2 + x # x + x^2 # 1"
        assert not part.is_zero

    def test_parallelizable_p3(self):
        assert str(sw_of_projective_product([3])) == "1"

    def test_matches_binomial_expansion(self):
        elem = sw_of_projective_product([2, 4])
        ring = elem.ring
        for (j, _), (k, _) in elem.monomials:
            assert math.comb(3, j) % 2 == 1 and math.comb(5, k) % 2 == 1
        count = sum(math.comb(3, j) % 2 for j in range(3)) * sum(
            math.comb(5, k) % 2 for k in range(5)
        )
        assert len(elem.monomials) == count
        assert ring.total_rank() == 15


class TestAxialObstruction:
    def test_examples(self):
        assert axial_obstructed(2, 2, 2)
        assert not axial_obstructed(12, 27, 31)
        assert not axial_obstructed(1, 1, 1)
        assert axial_obstruction(12, 27, 31) == UNOBSTRUCTED

    def test_against_ring_engine(self):
        # oracle: expand (x # 1 + 1 # x)^(L+1) in the product ring directly
        for m in range(1, 7):
            for n in range(m, 9):
                pm, pn = make_ring((m,)), make_ring((n,))
                ring = product_ring(pm, pn)
                z = ring.embed(pm.x_power(1), pn.one()) + ring.embed(
                    pm.one(), pn.x_power(1)
                )
                for L in range(1, m + n + 2):
                    assert axial_obstructed(m, n, L) == (not (z ** (L + 1)).is_zero)

    def test_monotone_in_l(self):
        for m in range(1, 10):
            for n in range(m, 12):
                seen_unobstructed = False
                for L in range(1, m + n + 2):
                    if not axial_obstructed(m, n, L):
                        seen_unobstructed = True
                    elif seen_unobstructed:
                        pytest.fail(f"obstruction returned after vanishing: {(m, n, L)}")


class TestGdLowerBound:
    def test_examples(self):
        assert gd_lower_bound(11, 6) == 5
        assert gd_lower_bound(7, 6) == 1
        assert gd_lower_bound(28, 12) == 4

    def test_residue_table_for_base_six(self):
        by_residue = {1: 6, 2: 6, 3: 5, 4: 4, 5: 3, 6: 2, 7: 1}
        for kk in range(9, 65):
            if kk % 8 == 0:
                continue
            g = gd_lower_bound(kk, 6)
            assert g == by_residue[kk % 8], (kk, g)
            assert math.comb(kk + g - 1, g) % 2 == 1

    def test_certifying_binomials_are_odd(self):
        fixed = [(6, 6), (7, 6), (7, 5), (7, 4), (7, 3), (7, 2), (7, 1)]
        assert all(math.comb(n, k) % 2 == 1 for n, k in fixed)

    def test_bounded_by_n1(self):
        for kk in range(1, 60):
            for n1 in range(1, 12):
                g = gd_lower_bound(kk, n1)
                assert 0 <= g <= n1
                if math.comb(kk + n1 - 1, n1) % 2 == 1:
                    assert g == n1


class TestStablyParallelizable:
    def test_examples(self):
        assert stably_parallelizable(SphereTuple((1, 1)))
        assert not stably_parallelizable(SphereTuple((2, 2)))
        assert not stably_parallelizable(SphereTuple((12, 14)))


class TestImmersionReport:
    def test_torus(self):
        rep = immersion_report(SphereTuple((1, 1)))
        assert rep.stably_parallelizable
        assert rep.imm_exact == 3
        assert rep.imm_lower == 3

    def test_override_gives_exact(self):
        rep = immersion_report(
            SphereTuple((12, 14)), gd_override=(5, "external gd tables")
        )
        assert not rep.stably_parallelizable
        assert rep.imm_exact == 31
        assert rep.gd_value == 5
        assert rep.gd_source == "external gd tables"
        assert rep.gd_is_exact

    def test_without_override_reports_lower_bound(self):
        rep = immersion_report(SphereTuple((12, 14)))
        assert rep.imm_exact is None
        assert rep.gd_value == 4  # parity lower bound for kk = 28, n1 = 12
        assert rep.imm_lower == 26 + 4
        assert not rep.gd_is_exact

    def test_config_override_applies(self):
        config = OverrideConfig.from_text(
            'gd.12.28 = 5 ; provenance="generalized vector field tables"'
        )
        rep = immersion_report(SphereTuple((12, 14)), config=config)
        assert rep.imm_exact == 31
        assert rep.gd_source == "generalized vector field tables"

    def test_exact_at_least_lower(self):
        for t in tuples_with_dim_up_to(14):
            rep = immersion_report(t)
            assert rep.imm_lower >= t.dim
            if rep.imm_exact is not None:
                assert rep.imm_exact >= rep.imm_lower

    def test_metastable_predicate(self):
        # dim 2 with lower 3: 6 < 6 fails; a deep immersion bound satisfies it
        assert not immersion_report(SphereTuple((1, 1))).metastable_ok
        rep = immersion_report(SphereTuple((6,)))  # P^6: lower 6 + gd(7, 6)
        assert rep.metastable_ok == (3 * 6 < 2 * rep.imm_lower)

    def test_rejects_bad_override(self):
        with pytest.raises(ValueError):
            immersion_report(SphereTuple((2, 2)), gd_override=(0, "nonsense"))
        with pytest.raises(ValueError):
            immersion_report(SphereTuple((2, 2)), gd_override=(3, ""))


class TestAxialExistsInterval:
    def test_multiplicative_case(self):
        interval = axial_exists_interval(SphereTuple((3, 5)), SphereTuple((3, 5)))
        assert (interval.lo, interval.hi) == (3, 3)

    def test_plane_case(self):
        interval = axial_exists_interval(SphereTuple((2, 2)), SphereTuple((2, 2)))
        assert interval.lo == 3
        assert interval.hi is None

    def test_circle_case(self):
        interval = axial_exists_interval(SphereTuple((1, 4)), SphereTuple((1, 9)))
        assert (interval.lo, interval.hi) == (1, 1)

    def test_lower_end_is_unobstructed_and_floor(self):
        for n1 in range(1, 8):
            for m1 in range(n1, 8):
                interval = axial_exists_interval(
                    SphereTuple((n1,)), SphereTuple((m1,))
                )
                assert interval.lo >= max(n1, m1)
                assert not axial_obstructed(n1, m1, interval.lo)
                if interval.lo > max(n1, m1):
                    assert axial_obstructed(n1, m1, interval.lo - 1)
