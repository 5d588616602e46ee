import numpy as np
import pytest

from ppsbounds.cohomology import SphereTuple
from ppsbounds.nonsingular import (
    BlackBoxMap,
    ConeVector,
    SignConsistencyError,
    biradial_extend,
    biradial_extend_v,
    check_nonsingular,
    from_classical,
    induced_axial,
    named_map,
    sample_cone_blocks,
    sphere_map_from_classical,
)


def t(*entries):
    return SphereTuple(tuple(entries))


class TestConeVector:
    def test_accepts_equal_norms(self):
        v = ConeVector((np.array([3.0, 4.0]), np.array([0.0, 5.0])))
        assert v.block_norm == 5.0
        assert not v.is_zero
        assert ConeVector((np.zeros(2), np.zeros(3))).is_zero

    def test_rejects_unequal_norms(self):
        with pytest.raises(ValueError):
            ConeVector((np.array([1.0, 0.0]), np.array([2.0, 0.0])))


class TestDivisionAlgebras:
    def test_norm_multiplicative(self):
        rng = np.random.default_rng(0)
        for name in ("real", "complex", "quaternion", "octonion"):
            f = named_map(name)
            d = f.x_block_dims[0]
            a = rng.standard_normal((200, d))
            b = rng.standard_normal((200, d))
            values = f.fn((a,), (b,))
            assert np.allclose(
                np.linalg.norm(values, axis=-1),
                np.linalg.norm(a, axis=-1) * np.linalg.norm(b, axis=-1),
                atol=1e-12,
            )

    def test_complex_is_angle_addition(self):
        f = named_map("complex")
        a, b = 0.3, 2.2
        out = f.evaluate(np.array([np.cos(a), np.sin(a)]), np.array([np.cos(b), np.sin(b)]))
        assert np.allclose(out, [np.cos(a + b), np.sin(a + b)], atol=1e-12)

    def test_unknown_name(self):
        with pytest.raises(ValueError):
            named_map("sedenion")


class TestBiradial:
    def test_zero_input_gives_zero(self):
        g = sphere_map_from_classical(named_map("complex"))
        f = biradial_extend(g, t(1), t(1))
        out = f.evaluate(np.zeros(2), np.array([1.0, 0.0]))
        assert np.allclose(out, 0.0)

    def test_positive_scaling(self):
        g = sphere_map_from_classical(named_map("quaternion"))
        f = biradial_extend(g, t(3), t(3))
        x = np.array([1.0, 0, 0, 0])
        y = np.array([0, 1.0, 0, 0])
        assert np.allclose(f.evaluate(2 * x, 3 * y), 6 * f.evaluate(x, y), atol=1e-12)

    def test_complex_circle_value(self):
        g = sphere_map_from_classical(named_map("complex"))
        f = biradial_extend(g, t(1), t(1))
        a, b = 0.8, -0.4
        out = f.evaluate(np.array([np.cos(a), np.sin(a)]), np.array([np.cos(b), np.sin(b)]))
        assert np.allclose(out, [np.cos(a + b), np.sin(a + b)], atol=1e-12)

    def test_homogeneity_identity(self):
        rng = np.random.default_rng(4)
        g = sphere_map_from_classical(named_map("complex"))
        nt = mt = t(1, 3)

        def block_map(xb, yb):
            return g.fn((xb[0],), (yb[0],))

        lifted = BlackBoxMap(
            label="first-block complex sphere map",
            x_block_dims=(2, 4),
            y_block_dims=(2, 4),
            out_dim=2,
            fn=block_map,
            biequivariant=True,
            nonsingular_declared=True,
        )
        f = biradial_extend(lifted, nt, mt)
        for _ in range(300):
            xb = sample_cone_blocks(rng, f.x_block_dims, 1)
            yb = sample_cone_blocks(rng, f.y_block_dims, 1)
            lam, mu = rng.uniform(-3, 3, size=2)
            if abs(lam) < 1e-3 or abs(mu) < 1e-3:
                continue
            scaled = f.fn(
                tuple(lam * b for b in xb), tuple(mu * b for b in yb)
            )
            assert np.allclose(scaled, lam * mu * f.fn(xb, yb), atol=1e-9)

    def test_output_bounded_by_norms(self):
        g = sphere_map_from_classical(named_map("complex"))
        f = biradial_extend(g, t(1), t(1))
        rng = np.random.default_rng(9)
        radius = rng.uniform(0, 2, size=64)
        xb = sample_cone_blocks(rng, f.x_block_dims, 64, radius=radius)
        yb = sample_cone_blocks(rng, f.y_block_dims, 64)
        values = f.fn(xb, yb)
        xnorm = np.sqrt(sum(np.sum(b * b, axis=-1) for b in xb))
        ynorm = np.sqrt(sum(np.sum(b * b, axis=-1) for b in yb))
        assert np.all(np.linalg.norm(values, axis=-1) <= xnorm * ynorm + 1e-9)

    def test_requires_biequivariance_flag(self):
        plain = BlackBoxMap("undeclared", (2,), (2,), 2, lambda xb, yb: xb[0])
        with pytest.raises(ValueError):
            biradial_extend(plain, t(1), t(1))

    def test_rejects_off_cone_input(self):
        g = sphere_map_from_classical(named_map("complex"))

        def block_map(xb, yb):
            return g.fn((xb[0],), (yb[0],))

        lifted = BlackBoxMap(
            label="first-block complex sphere map",
            x_block_dims=(2, 2),
            y_block_dims=(2, 2),
            out_dim=2,
            fn=block_map,
            biequivariant=True,
        )
        f = biradial_extend(lifted, t(1, 1), t(1, 1))
        good = (np.array([1.0, 0.0]), np.array([0.0, 1.0]))
        bad = (np.array([1.0, 0.0]), np.array([0.0, 2.0]))
        f.evaluate(good, good)
        with pytest.raises(ValueError):
            f.evaluate(bad, good)

    def test_block_shape_mismatch_rejected(self):
        g = sphere_map_from_classical(named_map("complex"))
        with pytest.raises(ValueError):
            biradial_extend(g, t(1, 1), t(1, 1))


class TestBiradialBlockwise:
    def _lifted(self):
        g = sphere_map_from_classical(named_map("complex"))

        def block_map(xb, yb):
            return g.fn((xb[0],), (yb[0],))

        return BlackBoxMap(
            label="first-block complex sphere map",
            x_block_dims=(2, 2),
            y_block_dims=(2,),
            out_dim=2,
            fn=block_map,
            biequivariant=True,
        )

    def test_zero_block_kills_output(self):
        f = biradial_extend_v(self._lifted(), t(1, 1), t(1))
        x = (np.array([1.0, 0.0]), np.zeros(2))
        y = (np.array([1.0, 0.0]),)
        assert np.allclose(f.evaluate(x, y), 0.0)

    def test_unit_blocks_reproduce_value(self):
        f = biradial_extend_v(self._lifted(), t(1, 1), t(1))
        x = (np.array([0.0, 1.0]), np.array([1.0, 0.0]))
        y = (np.array([np.cos(0.5), np.sin(0.5)]),)
        expected = named_map("complex").evaluate(x[0], y[0])
        expected /= np.linalg.norm(expected)
        assert np.allclose(f.evaluate(x, y), expected, atol=1e-12)

    def test_one_block_scaling_power(self):
        f = biradial_extend_v(self._lifted(), t(1, 1), t(1))
        x = (np.array([0.0, 1.0]), np.array([1.0, 0.0]))
        y = (np.array([1.0, 0.0]),)
        base = f.evaluate(x, y)
        scaled = f.evaluate((x[0], 4.0 * x[1]), y)
        assert np.allclose(scaled, 2.0 * base, atol=1e-12)  # 4^(1/2)


class TestFromClassical:
    def test_first_block_only(self):
        f = from_classical(named_map("complex"), t(1, 3), t(1, 1))
        x = (np.array([0.0, 1.0]), np.array([1.0, 0, 0, 0]))
        y = (np.array([1.0, 0.0]), np.array([0.0, 1.0]))
        out = f.evaluate(x, y)
        assert np.allclose(out, named_map("complex").evaluate(x[0], y[0]))

    def test_shape_mismatch(self):
        with pytest.raises(ValueError):
            from_classical(named_map("complex"), t(3,), t(1,))


class TestInducedAxial:
    def test_quaternion_line_map(self):
        lines = induced_axial(from_classical(named_map("quaternion"), t(3), t(3)))
        x = np.array([1.0, 0, 0, 0])
        y = np.array([0.0, 1.0, 0, 0])
        u1 = lines.evaluate(x, y)
        u2 = lines.evaluate(-x, y)
        assert np.allclose(u1, u2, atol=1e-12)  # same line, canonical sign

    def test_agrees_with_classical_on_first_blocks(self):
        base = from_classical(named_map("quaternion"), t(3, 5), t(3, 3))
        lifted_lines = induced_axial(base)
        classical_lines = induced_axial(from_classical(named_map("quaternion"), t(3), t(3)))
        rng = np.random.default_rng(8)
        for _ in range(50):
            xb = sample_cone_blocks(rng, base.x_block_dims, 1)
            yb = sample_cone_blocks(rng, base.y_block_dims, 1)
            u = lifted_lines.fn(xb, yb)[0]
            v = classical_lines.fn((xb[0],), (yb[0],))[0]
            assert np.allclose(u, v, atol=1e-9)

    def test_non_odd_map_yields_witness(self):
        shifted = BlackBoxMap(
            "shifted sum", (2,), (2,), 2, lambda xb, yb: xb[0] + yb[0]
        )
        with pytest.raises(SignConsistencyError) as err:
            induced_axial(shifted)
        assert err.value.witness["side"] in ("x", "y")
        assert "x" in err.value.witness


class TestCheckNonsingular:
    def test_inner_product_counterexample(self):
        result = check_nonsingular(
            from_classical(named_map("inner_product"), t(1), t(1)),
            budget=20_000,
            seed=3,
        )
        assert not result.ok
        ce = result.counterexample
        assert ce is not None and ce["norm"] < 1e-8
        x = np.asarray(ce["x"][0])
        y = np.asarray(ce["y"][0])
        assert abs(np.linalg.norm(x) - 1) < 1e-6
        assert abs(float(x @ y)) < 1e-6  # an orthogonal unit pair

    def test_division_algebras_pass(self):
        for name in ("complex", "quaternion"):
            f = named_map(name)
            d = f.x_block_dims[0]
            result = check_nonsingular(
                from_classical(f, t(d - 1), t(d - 1)), budget=20_000, seed=3
            )
            assert result.ok
            assert result.min_norm > 0.9  # norm multiplicativity on unit blocks
