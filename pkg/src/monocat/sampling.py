"""Seeded random instances for sweeps: modules, maps, squares, functors.

Every generator takes a numpy Generator so sweeps stay reproducible and
splittable: callers derive child generators from (seed, instance index)
and the same pair always replays the same instance.
"""
from __future__ import annotations

import numpy as np

from .fieldmat import FpMatrix, rank
from .modules import (
    LambdaModule,
    LambdaMorphism,
    RingCtx,
    hom_basis,
    image_module,
    module_from_blocks,
    zero_morphism,
)
from .morphcat import MorphMap, MorphObject, hom_h, make
from .functors import CoFunctor, ContraFunctor

__all__ = [
    "random_epi",
    "random_co_functor",
    "random_contra_functor",
    "random_invertible",
    "random_jordan_blocks",
    "random_module",
    "random_mono",
    "random_morphism",
    "random_square",
]


def random_jordan_blocks(
    rng: np.random.Generator, n: int, max_dim: int
) -> tuple[int, ...]:
    """A nonempty multiset of block sizes <= n with total size <= max_dim."""
    blocks: list[int] = []
    total = 0
    while True:
        b = int(rng.integers(1, n + 1))
        if total + b > max_dim:
            break
        blocks.append(b)
        total += b
        if total >= max_dim or rng.random() < 0.25:
            break
    if not blocks:
        blocks = [1]
    return tuple(sorted(blocks, reverse=True))


def random_invertible(p: int, dim: int, rng: np.random.Generator) -> FpMatrix:
    if dim == 0:
        return FpMatrix(p, np.zeros((0, 0), dtype=np.int64))
    while True:
        cand = FpMatrix(p, rng.integers(0, p, size=(dim, dim)))
        if rank(cand) == dim:
            return cand


def random_module(
    ctx: RingCtx,
    rng: np.random.Generator,
    max_dim: int,
    conjugate: bool = False,
) -> LambdaModule:
    """A random module; optionally in a random (non-Jordan) basis."""
    m = module_from_blocks(ctx, random_jordan_blocks(rng, ctx.n, max_dim))
    if not conjugate or m.dim == 0:
        return m
    g = random_invertible(ctx.p, m.dim, rng)
    ginv = _inverse(g)
    return LambdaModule(ctx, m.dim, g @ m.x @ ginv, _check=False)


def _inverse(g: FpMatrix) -> FpMatrix:
    from .fieldmat import solve_matrix

    eye = FpMatrix(g.p, np.eye(g.rows, dtype=np.int64))
    inv = solve_matrix(g, eye)
    if inv is None:
        raise AssertionError("matrix passed as invertible is singular")
    return inv


def random_morphism(
    src: LambdaModule, dst: LambdaModule, rng: np.random.Generator
) -> LambdaMorphism:
    f = zero_morphism(src, dst)
    for h in hom_basis(src, dst):
        c = int(rng.integers(0, src.ctx.p))
        if c:
            f = f + h.scale(c)
    return f


def random_mono(
    ctx: RingCtx, rng: np.random.Generator, max_dim: int
) -> MorphObject:
    """A random injective map, as the image inclusion of a random map."""
    y = random_module(ctx, rng, max_dim)
    w = random_module(ctx, rng, max_dim)
    f = random_morphism(w, y, rng)
    _, _, incl = image_module(f)
    return make(incl, "S")


def random_epi(
    ctx: RingCtx, rng: np.random.Generator, max_dim: int
) -> MorphObject:
    """A random surjective map, as the corestriction of a random map."""
    y = random_module(ctx, rng, max_dim)
    w = random_module(ctx, rng, max_dim)
    f = random_morphism(y, w, rng)
    _, core, _ = image_module(f)
    return make(core, "F")


def random_square(
    o1: MorphObject, o2: MorphObject, rng: np.random.Generator
) -> MorphMap:
    """A random commuting square o1 -> o2 (zero if none other exists)."""
    basis = hom_h(o1, o2)
    from .morphcat import zero_map

    sq = zero_map(o1, o2)
    for b in basis:
        c = int(rng.integers(0, o1.ctx.p))
        if c:
            sq = sq + b.scale(c)
    return sq


def random_contra_functor(
    ctx: RingCtx, rng: np.random.Generator, max_dim: int
) -> ContraFunctor:
    a = random_module(ctx, rng, max_dim)
    b = random_module(ctx, rng, max_dim)
    return ContraFunctor(random_morphism(a, b, rng))


def random_co_functor(
    ctx: RingCtx, rng: np.random.Generator, max_dim: int
) -> CoFunctor:
    a = random_module(ctx, rng, max_dim)
    b = random_module(ctx, rng, max_dim)
    return CoFunctor(random_morphism(a, b, rng))
