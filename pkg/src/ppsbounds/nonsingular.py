"""Non-singular maps on cones of equal-norm block tuples.

The cone over a sphere tuple (n1, ..., nl) consists of tuples of vectors
x_i in R^{n_i + 1} with equal Euclidean norms.  A map of two such cones to
R^{k+1} is non-singular when it is bihomogeneous, f(s x, t y) = s t f(x, y),
and vanishes only when one input is zero.  Such maps correspond to axial maps
of the projectivized cones; here they are produced by bi-radially extending
biequivariant sphere maps, or by lifting a classical non-singular map through
the first blocks, and they are checked numerically by sampling plus local
descent (a verdict, not a proof).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import optimize

from ppsbounds.cohomology import SphereTuple

CONE_TOLERANCE = 1e-10


class SignConsistencyError(ValueError):
    """The sampled map is not odd in each argument; carries a witness."""

    def __init__(self, message: str, witness: dict):
        super().__init__(message)
        self.witness = witness


@dataclass(frozen=True)
class ConeVector:
    """Point of a cone: blocks of equal norm (tolerance 1e-10); zero allowed."""

    blocks: tuple

    def __post_init__(self):
        blocks = tuple(np.asarray(b, dtype=float) for b in self.blocks)
        object.__setattr__(self, "blocks", blocks)
        if not blocks:
            raise ValueError("a cone vector needs at least one block")
        norms = [float(np.linalg.norm(b)) for b in blocks]
        if max(norms) - min(norms) > CONE_TOLERANCE:
            raise ValueError(
                f"blocks must have equal norms within {CONE_TOLERANCE}: {norms}"
            )

    @property
    def block_norm(self) -> float:
        return float(np.linalg.norm(self.blocks[0]))

    @property
    def is_zero(self) -> bool:
        return self.block_norm <= 0.0

    def scaled(self, factor: float) -> "ConeVector":
        return ConeVector(tuple(factor * b for b in self.blocks))


@dataclass(frozen=True)
class BlackBoxMap:
    """Deterministic map on pairs of block tuples, evaluated in batches.

    `fn` receives two tuples of arrays shaped (N, d) and returns (N, out_dim).
    Declared flags record what the construction promises, they are not proofs.
    """

    label: str
    x_block_dims: tuple[int, ...]
    y_block_dims: tuple[int, ...]
    out_dim: int
    fn: object
    biequivariant: bool = False
    bilinear: bool = False
    nonsingular_declared: bool = False

    def _blocks(self, value, dims, name):
        if isinstance(value, ConeVector):
            value = value.blocks
        if isinstance(value, np.ndarray) and len(dims) == 1:
            value = (value,)
        blocks = tuple(np.asarray(b, dtype=float) for b in value)
        if len(blocks) != len(dims):
            raise ValueError(
                f"{name} needs {len(dims)} blocks, got {len(blocks)}"
            )
        for b, d in zip(blocks, dims):
            if b.shape[-1] != d:
                raise ValueError(f"{name} block has {b.shape[-1]} coords, wanted {d}")
        return blocks

    def evaluate_batch(self, x, y) -> np.ndarray:
        xb = self._blocks(x, self.x_block_dims, "x")
        yb = self._blocks(y, self.y_block_dims, "y")
        return self.fn(xb, yb)

    def evaluate(self, x, y) -> np.ndarray:
        xb = self._blocks(x, self.x_block_dims, "x")
        yb = self._blocks(y, self.y_block_dims, "y")
        xb = tuple(b[None, :] if b.ndim == 1 else b for b in xb)
        yb = tuple(b[None, :] if b.ndim == 1 else b for b in yb)
        return self.fn(xb, yb)[0]


def _cd_conj(a: np.ndarray) -> np.ndarray:
    d = a.shape[-1]
    if d == 1:
        return a
    h = d // 2
    return np.concatenate([_cd_conj(a[..., :h]), -a[..., h:]], axis=-1)


def _cd_mult(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    # Cayley-Dickson doubling; norm-multiplicative for dimensions 1, 2, 4, 8
    d = a.shape[-1]
    if d == 1:
        return a * b
    h = d // 2
    a1, a2 = a[..., :h], a[..., h:]
    b1, b2 = b[..., :h], b[..., h:]
    return np.concatenate(
        [
            _cd_mult(a1, b1) - _cd_mult(_cd_conj(b2), a2),
            _cd_mult(b2, a1) + _cd_mult(a2, _cd_conj(b1)),
        ],
        axis=-1,
    )


DIVISION_ALGEBRA_DIMS = {"real": 1, "complex": 2, "quaternion": 4, "octonion": 8}


def named_map(name: str) -> BlackBoxMap:
    """Built-in classical maps: the four normed multiplications, plus the
    real inner product on R^2 (a designed non-singularity failure)."""
    if name in DIVISION_ALGEBRA_DIMS:
        d = DIVISION_ALGEBRA_DIMS[name]

        def fn(xb, yb, _d=d):
            return _cd_mult(xb[0], yb[0])

        return BlackBoxMap(
            label=f"{name} multiplication",
            x_block_dims=(d,),
            y_block_dims=(d,),
            out_dim=d,
            fn=fn,
            biequivariant=True,
            bilinear=True,
            nonsingular_declared=True,
        )
    if name == "inner_product":

        def fn(xb, yb):
            return np.sum(xb[0] * yb[0], axis=-1, keepdims=True)

        return BlackBoxMap(
            label="real inner product on R^2",
            x_block_dims=(2,),
            y_block_dims=(2,),
            out_dim=1,
            fn=fn,
            biequivariant=True,
            bilinear=True,
            nonsingular_declared=False,
        )
    raise ValueError(
        f"unknown map {name!r}; known: "
        + ", ".join(sorted(DIVISION_ALGEBRA_DIMS) + ["inner_product"])
    )


def sphere_map_from_classical(f: BlackBoxMap) -> BlackBoxMap:
    """Normalize the output of a classical non-singular map to a sphere map."""
    if not f.nonsingular_declared:
        raise ValueError("the underlying classical map must be non-singular")

    def fn(xb, yb):
        v = f.fn(xb, yb)
        return v / np.linalg.norm(v, axis=-1, keepdims=True)

    return BlackBoxMap(
        label=f"normalized {f.label}",
        x_block_dims=f.x_block_dims,
        y_block_dims=f.y_block_dims,
        out_dim=f.out_dim,
        fn=fn,
        biequivariant=f.biequivariant,
        bilinear=False,
        nonsingular_declared=True,
    )


def _block_norms(blocks) -> np.ndarray:
    return np.stack([np.linalg.norm(b, axis=-1) for b in blocks], axis=0)


def _fill_dead(block: np.ndarray, live: np.ndarray) -> np.ndarray:
    unit = np.zeros(block.shape[-1])
    unit[0] = 1.0
    return np.where(live[:, None], block, unit[None, :])


def _check_cone_batch(blocks, name: str) -> np.ndarray:
    norms = _block_norms(blocks)
    spread = norms.max(axis=0) - norms.min(axis=0)
    if np.any(spread > CONE_TOLERANCE):
        worst = float(spread.max())
        raise ValueError(
            f"{name} is not on the cone: block norms differ by {worst:.2e} "
            f"(tolerance {CONE_TOLERANCE})"
        )
    return norms[0]


def biradial_extend(g: BlackBoxMap, nt: SphereTuple, mt: SphereTuple) -> BlackBoxMap:
    """Bi-radial extension of a biequivariant sphere map to the cones.

    With r and s the factor counts and |x|, |y| the full-tuple norms,

        f(x, y) = (|x| / sqrt(r)) (|y| / sqrt(s)) g(sqrt(r) x / |x|, sqrt(s) y / |y|)

    and f = 0 when either input is zero.  Inputs must lie on the cones.
    """
    if not g.biequivariant:
        raise ValueError("the sphere map must be declared biequivariant")
    x_dims = tuple(n + 1 for n in nt.entries)
    y_dims = tuple(m + 1 for m in mt.entries)
    if g.x_block_dims != x_dims or g.y_block_dims != y_dims:
        raise ValueError("sphere map block shapes do not match the cone tuples")
    r, s = nt.ell, mt.ell

    def fn(xb, yb):
        _check_cone_batch(xb, "x")
        _check_cone_batch(yb, "y")
        xn = np.sqrt(sum(np.sum(b * b, axis=-1) for b in xb))
        yn = np.sqrt(sum(np.sum(b * b, axis=-1) for b in yb))
        live = (xn > 0) & (yn > 0)
        xs = np.where(live, xn, 1.0)
        ys = np.where(live, yn, 1.0)
        gx = tuple((np.sqrt(r) / xs)[:, None] * b for b in xb)
        gy = tuple((np.sqrt(s) / ys)[:, None] * b for b in yb)
        if not live.all():
            # dead rows get unit placeholder blocks so g stays finite there;
            # the zero scale below erases whatever g returns
            gx = tuple(_fill_dead(b, live) for b in gx)
            gy = tuple(_fill_dead(b, live) for b in gy)
        value = g.fn(gx, gy)
        scale = np.where(live, (xn / np.sqrt(r)) * (yn / np.sqrt(s)), 0.0)
        return scale[:, None] * value

    return BlackBoxMap(
        label=f"bi-radial extension of {g.label}",
        x_block_dims=x_dims,
        y_block_dims=y_dims,
        out_dim=g.out_dim,
        fn=fn,
        biequivariant=True,
        nonsingular_declared=g.nonsingular_declared,
    )


def biradial_extend_v(g: BlackBoxMap, nt: SphereTuple, mt: SphereTuple) -> BlackBoxMap:
    """Blockwise variant on the full products of Euclidean spaces.

    f = N(x, y) g(x_1/|x_1|, ..., y_1/|y_1|, ...) with
    N = (|x_1| ... |x_r|)^{1/r} (|y_1| ... |y_s|)^{1/s}, and f = 0 as soon as
    one block vanishes.  No cone restriction.
    """
    if not g.biequivariant:
        raise ValueError("the sphere map must be declared biequivariant")
    x_dims = tuple(n + 1 for n in nt.entries)
    y_dims = tuple(m + 1 for m in mt.entries)
    if g.x_block_dims != x_dims or g.y_block_dims != y_dims:
        raise ValueError("sphere map block shapes do not match the tuples")
    r, s = nt.ell, mt.ell

    def fn(xb, yb):
        xn = _block_norms(xb)  # (r, N)
        yn = _block_norms(yb)
        live = (xn > 0).all(axis=0) & (yn > 0).all(axis=0)
        gx = tuple(
            _fill_dead(b / np.where(nrm > 0, nrm, 1.0)[:, None], live)
            for b, nrm in zip(xb, xn)
        )
        gy = tuple(
            _fill_dead(b / np.where(nrm > 0, nrm, 1.0)[:, None], live)
            for b, nrm in zip(yb, yn)
        )
        value = g.fn(gx, gy)
        weight = np.prod(xn, axis=0) ** (1.0 / r) * np.prod(yn, axis=0) ** (1.0 / s)
        return np.where(live, weight, 0.0)[:, None] * value

    return BlackBoxMap(
        label=f"blockwise bi-radial extension of {g.label}",
        x_block_dims=x_dims,
        y_block_dims=y_dims,
        out_dim=g.out_dim,
        fn=fn,
        biequivariant=True,
        nonsingular_declared=g.nonsingular_declared,
    )


def from_classical(f: BlackBoxMap, nt: SphereTuple, mt: SphereTuple) -> BlackBoxMap:
    """Lift of a classical non-singular map through the first blocks.

    On the cone, the first block vanishes only when the whole tuple does, so
    (x, y) -> f(x_1, y_1) stays non-singular.
    """
    if f.x_block_dims != (nt.n1 + 1,) or f.y_block_dims != (mt.n1 + 1,):
        raise ValueError(
            f"classical map expects blocks of {f.x_block_dims[0]} and "
            f"{f.y_block_dims[0]} coordinates"
        )
    x_dims = tuple(n + 1 for n in nt.entries)
    y_dims = tuple(m + 1 for m in mt.entries)

    def fn(xb, yb):
        return f.fn((xb[0],), (yb[0],))

    return BlackBoxMap(
        label=f"first-block lift of {f.label}",
        x_block_dims=x_dims,
        y_block_dims=y_dims,
        out_dim=f.out_dim,
        fn=fn,
        biequivariant=f.biequivariant,
        bilinear=f.bilinear,
        nonsingular_declared=f.nonsingular_declared,
    )


def sample_cone_blocks(rng, dims, count, radius=None):
    """Uniform unit-block cone points; optional common radius per sample."""
    blocks = []
    for d in dims:
        v = rng.standard_normal((count, d))
        v /= np.linalg.norm(v, axis=-1, keepdims=True)
        blocks.append(v)
    if radius is not None:
        blocks = [radius[:, None] * b for b in blocks]
    return tuple(blocks)


def induced_axial(
    f: BlackBoxMap, samples: int = 2048, seed: int = 0, tol: float = 1e-8
) -> BlackBoxMap:
    """Map on sign classes induced by a non-singular map: the output line.

    Verifies on sampled pairs that f is odd in each argument separately (so
    the line through f(x, y) does not depend on representative signs), then
    returns a map producing a canonical unit representative of that line.
    Raises SignConsistencyError with a witness when the check fails.
    """
    rng = np.random.default_rng(seed)
    xb = sample_cone_blocks(rng, f.x_block_dims, samples)
    yb = sample_cone_blocks(rng, f.y_block_dims, samples)
    base = f.fn(xb, yb)
    scale = np.maximum(1.0, np.linalg.norm(base, axis=-1))
    for side, flipped in (("x", (tuple(-b for b in xb), yb)),
                          ("y", (xb, tuple(-b for b in yb)))):
        value = f.fn(*flipped)
        defect = np.linalg.norm(value + base, axis=-1) / scale
        worst = int(np.argmax(defect))
        if defect[worst] > tol:
            raise SignConsistencyError(
                f"map is not odd in {side}: defect {float(defect[worst]):.2e}",
                witness={
                    "side": side,
                    "x": [b[worst].tolist() for b in xb],
                    "y": [b[worst].tolist() for b in yb],
                    "value": base[worst].tolist(),
                    "flipped_value": value[worst].tolist(),
                },
            )

    def fn(xblocks, yblocks):
        v = f.fn(xblocks, yblocks)
        norms = np.linalg.norm(v, axis=-1, keepdims=True)
        if np.any(norms <= tol):
            raise ValueError("map vanished on a nonzero pair; no line is defined")
        u = v / norms
        # canonical sign: first coordinate of significant size is positive
        lead = np.argmax(np.abs(u) > 0.5 / np.sqrt(u.shape[-1]), axis=-1)
        signs = np.sign(np.take_along_axis(u, lead[:, None], axis=-1))
        return u * signs

    return BlackBoxMap(
        label=f"induced line map of {f.label}",
        x_block_dims=f.x_block_dims,
        y_block_dims=f.y_block_dims,
        out_dim=f.out_dim,
        fn=fn,
    )


@dataclass(frozen=True)
class NonsingularityCheck:
    label: str
    ok: bool
    samples: int
    min_norm: float
    counterexample: dict | None

    def to_jsonable(self) -> dict:
        return {
            "map": self.label,
            "ok": self.ok,
            "samples": self.samples,
            "min_norm": self.min_norm,
            "counterexample": self.counterexample,
        }


def check_nonsingular(
    f: BlackBoxMap,
    budget: int = 100_000,
    seed: int = 0,
    tol: float = 1e-8,
    descent_starts: int = 6,
) -> NonsingularityCheck:
    """Hunt for zeros of f on unit-block inputs: sampling plus local descent.

    Returns a counterexample pair (unit blocks, |f| < tol) when one is found;
    an `ok` verdict reflects only the sampling budget, it is not a proof.
    """
    rng = np.random.default_rng(seed)
    x_dims, y_dims = f.x_block_dims, f.y_block_dims
    batch = 8192
    remaining = budget
    best: list[tuple[float, tuple, tuple]] = []
    min_norm = np.inf
    while remaining > 0:
        count = min(batch, remaining)
        remaining -= count
        xb = sample_cone_blocks(rng, x_dims, count)
        yb = sample_cone_blocks(rng, y_dims, count)
        norms = np.linalg.norm(f.fn(xb, yb), axis=-1)
        order = np.argsort(norms)[:descent_starts]
        for idx in order:
            best.append(
                (
                    float(norms[idx]),
                    tuple(b[idx] for b in xb),
                    tuple(b[idx] for b in yb),
                )
            )
        min_norm = min(min_norm, float(norms.min()))
    best.sort(key=lambda rec: rec[0])
    best = best[:descent_starts]

    sizes = list(x_dims) + list(y_dims)
    offsets = np.cumsum([0] + sizes)

    def unpack(z):
        parts = [z[offsets[i]: offsets[i + 1]] for i in range(len(sizes))]
        blocks = []
        for p in parts:
            nrm = np.linalg.norm(p)
            if nrm < 1e-6:
                return None
            blocks.append(p / nrm)
        return (
            tuple(b[None, :] for b in blocks[: len(x_dims)]),
            tuple(b[None, :] for b in blocks[len(x_dims):]),
        )

    def objective(z):
        unpacked = unpack(z)
        if unpacked is None:
            return 10.0
        xb, yb = unpacked
        v = f.fn(xb, yb)[0]
        return float(v @ v)

    for start_norm, xs, ys in best:
        z0 = np.concatenate(list(xs) + list(ys))
        result = optimize.minimize(
            objective,
            z0,
            method="Nelder-Mead",
            options={"maxiter": 1500, "fatol": 1e-20, "xatol": 1e-10},
        )
        value = float(np.sqrt(max(result.fun, 0.0)))
        min_norm = min(min_norm, value)
        if value < tol:
            unpacked = unpack(result.x)
            assert unpacked is not None
            xb, yb = unpacked
            return NonsingularityCheck(
                label=f.label,
                ok=False,
                samples=budget,
                min_norm=value,
                counterexample={
                    "x": [b[0].tolist() for b in xb],
                    "y": [b[0].tolist() for b in yb],
                    "norm": value,
                },
            )
    return NonsingularityCheck(
        label=f.label, ok=True, samples=budget, min_norm=min_norm, counterexample=None
    )
