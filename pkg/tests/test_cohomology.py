import random

import pytest

from ppsbounds.cohomology import (
    CapacityError,
    ProductRing,
    SphereTuple,
    make_ring,
    product_ring,
    tensor_square,
)


def poincare_oracle(entries):
    # generating function (1 + t + ... + t^{n1}) * prod (1 + t^{n_i}),
    # independent of the monomial enumeration
    poly = [1] * (entries[0] + 1)
    for d in entries[1:]:
        out = [0] * (len(poly) + d)
        for i, c in enumerate(poly):
            out[i] += c
            out[i + d] += c
        poly = out
    return poly


def random_element(rnd, ring, max_monos=3):
    monos = []
    r = ring.spheres.ell
    for _ in range(rnd.randrange(0, max_monos + 1)):
        monos.append((rnd.randrange(0, ring.n1 + 1), rnd.randrange(0, 1 << (r - 1))))
    return ring.element(monos)


class TestSphereTuple:
    def test_parse_and_derived(self):
        t = SphereTuple.parse("2,7")
        assert t.entries == (2, 7)
        assert t.ell == 2
        assert t.dim == 9
        assert t.even_tail_count == 0
        assert SphereTuple((3, 4)).even_tail_count == 1

    def test_rejects_bad_tuples(self):
        with pytest.raises(ValueError):
            SphereTuple((7, 2))
        with pytest.raises(ValueError):
            SphereTuple((0, 1))
        with pytest.raises(ValueError):
            SphereTuple(())
        with pytest.raises(CapacityError):
            SphereTuple((1,) * 17)
        with pytest.raises(CapacityError):
            SphereTuple((65,))


class TestRingStructure:
    def test_exceptional_relation(self):
        ring = make_ring((2, 2))
        x2 = ring.ext_gen(2)
        assert str(x2 * x2) == "x^2*x2"

    def test_exterior_square_vanishes(self):
        ring = make_ring((3, 3))
        x2 = ring.ext_gen(2)
        assert (x2 * x2).is_zero

    def test_truncation(self):
        ring = make_ring((2, 2))
        assert (ring.x_power(1) * ring.x_power(2)).is_zero
        classical = make_ring((5,))
        assert (classical.x_power(5) * classical.x_power(1)).is_zero
        assert not (classical.x_power(3) * classical.x_power(2)).is_zero

    def test_basis_examples(self):
        ring = make_ring((2, 2))
        assert {ring.mono_str(m) for m in ring.basis(2)} == {"x^2", "x2"}
        assert ring.total_rank() == 6
        assert sum(ring.poincare_series()) == 6
        ring13 = make_ring((1, 3))
        degrees = [d for d, r in enumerate(ring13.poincare_series()) if r]
        assert degrees == [0, 1, 3, 4]

    def test_poincare_examples(self):
        assert make_ring((2, 2)).poincare_series() == [1, 1, 2, 1, 1]
        assert make_ring((3,)).poincare_series() == [1, 1, 1, 1]
        assert make_ring((1, 1)).poincare_series() == [1, 2, 1]

    def test_poincare_against_generating_function(self):
        rnd = random.Random(5)
        for _ in range(60):
            r = rnd.randrange(1, 5)
            entries = sorted(rnd.randrange(1, 7) for _ in range(r))
            ring = make_ring(tuple(entries))
            assert ring.poincare_series() == poincare_oracle(tuple(entries))
            assert ring.total_rank() == (entries[0] + 1) * 2 ** (r - 1)
            series = ring.poincare_series()
            assert series[0] == 1 and series[-1] == 1  # top class survives

    def test_top_class(self):
        ring = make_ring((2, 2, 4))
        top = ring.basis(8)
        assert len(top) == 1
        assert ring.mono_str(top[0]) == "x^2*x2*x3"


class TestMultiplication:
    def test_commutative_associative_random(self):
        rnd = random.Random(99)
        tuples = [(2, 2), (1, 1, 1), (2, 2, 2), (3, 4, 5), (1, 2, 4), (4, 4, 4),
                  (2, 4), (6, 6), (1, 1, 5, 5), (2, 2, 2, 2)]
        rings = [make_ring(t) for t in tuples if sum(t) <= 12 or len(t) <= 4]
        for _ in range(10_000):
            ring = rnd.choice(rings)
            a = random_element(rnd, ring)
            b = random_element(rnd, ring)
            c = random_element(rnd, ring)
            assert a * b == b * a
            assert (a * b) * c == a * (b * c)

    def test_distributive_random(self):
        rnd = random.Random(7)
        ring = make_ring((2, 2, 3))
        for _ in range(500):
            a, b, c = (random_element(rnd, ring) for _ in range(3))
            assert a * (b + c) == a * b + a * c

    def test_grading(self):
        rnd = random.Random(3)
        for t in [(2, 2), (3, 3, 3), (2, 4, 4)]:
            ring = make_ring(t)
            top = ring.top_degree()
            for _ in range(300):
                da = rnd.randrange(0, top + 1)
                db = rnd.randrange(0, top + 1)
                abasis = ring.basis(da)
                bbasis = ring.basis(db)
                if not abasis or not bbasis:
                    continue
                a = ring.element([rnd.choice(abasis)])
                b = ring.element([rnd.choice(bbasis)])
                prod = a * b
                if not prod.is_zero:
                    assert prod.degree() == da + db

    def test_exceptional_preserves_grading(self):
        ring = make_ring((2, 2))
        x2 = ring.ext_gen(2)
        sq = x2 * x2
        assert sq.degree() == 4 == 2 * ring.spheres.entries[1]

    def test_ring_mismatch(self):
        a = make_ring((2, 2)).one()
        b = make_ring((2, 3)).one()
        with pytest.raises(ValueError):
            a * b

    def test_restriction_is_ring_map(self):
        rnd = random.Random(17)
        ring = make_ring((2, 2, 5))
        for _ in range(400):
            a = random_element(rnd, ring)
            b = random_element(rnd, ring)
            lhs = ring.restrict_to_base(a * b)
            rhs = ring.restrict_to_base(a) * ring.restrict_to_base(b)
            assert lhs == rhs


class TestProductRing:
    def test_cross_term(self):
        p2 = make_ring((2,))
        ring = product_ring(p2, p2)
        x_left = ring.embed(p2.x_power(1), p2.one())
        y_right = ring.embed(p2.one(), p2.x_power(1))
        assert str(x_left * y_right) == "x # x"

    def test_diagonal_cube(self):
        p2 = make_ring((2,))
        ring = product_ring(p2, p2)
        z = ring.embed(p2.x_power(1), p2.one()) + ring.embed(p2.one(), p2.x_power(1))
        cube = z ** 3
        assert cube == ring.parse("x^2 # x + x # x^2")
        assert (z ** 4).is_zero

    def test_circle_square_vanishes(self):
        p1 = make_ring((1,))
        ring = product_ring(p1, p1)
        z = ring.embed(p1.x_power(1), p1.one()) + ring.embed(p1.one(), p1.x_power(1))
        assert (z * z).is_zero

    def test_tensor_square_poincare(self):
        ring = make_ring((2, 2))
        sq = tensor_square(ring)
        base = ring.poincare_series()
        convolved = [0] * (2 * len(base) - 1)
        for i, a in enumerate(base):
            for j, b in enumerate(base):
                convolved[i + j] += a * b
        assert sq.poincare_series() == convolved
        assert sq.total_rank() == ring.total_rank() ** 2

    def test_three_factors(self):
        p1 = make_ring((1,))
        ring = ProductRing((p1, p1, p1))
        gens = [
            ring.embed(*(p1.x_power(1) if i == j else p1.one() for j in range(3)))
            for i in range(3)
        ]
        prod = gens[0] * gens[1] * gens[2]
        assert str(prod) == "x # x # x"
        assert (gens[0] * gens[0]).is_zero


class TestTextForm:
    def test_round_trip_pps(self):
        rnd = random.Random(12)
        for t in [(2, 2), (1, 3), (3, 3, 3), (5,)]:
            ring = make_ring(t)
            for _ in range(200):
                elem = random_element(rnd, ring)
                assert ring.parse(str(elem)) == elem

    def test_round_trip_product(self):
        rnd = random.Random(13)
        ring = tensor_square(make_ring((2, 2)))
        left = make_ring((2, 2))
        for _ in range(200):
            elem = ring.embed(random_element(rnd, left), random_element(rnd, left))
            assert ring.parse(str(elem)) == elem

    def test_explicit_strings(self):
        ring = make_ring((2, 2))
        assert str(ring.zero()) == "0"
        assert str(ring.one()) == "1"
        assert str(ring.parse("x^2*x2 + x")) == "x + x^2*x2"

    def test_parse_rejects_garbage(self):
        ring = make_ring((2, 2))
        with pytest.raises(ValueError):
            ring.parse("x^3")  # beyond truncation
        with pytest.raises(ValueError):
            ring.parse("x5")
        with pytest.raises(ValueError):
            ring.parse("y + 1")
