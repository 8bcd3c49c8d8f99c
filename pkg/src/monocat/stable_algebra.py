"""The stable endomorphism algebra of the non-projective blocks, and its modules.

Over k[x]/(x^n) the non-projective indecomposables are the blocks J_1..J_{n-1};
the algebra collects all stable Hom spaces between them with multiplication by
composition of coset representatives.  Its dimension is (n-1)n(n+1)/6, matching
the preprojective algebra of type A_{n-1}.

Modules over the algebra are stored as value spaces V_1..V_{n-1} with one
action matrix per algebra basis element.  A contravariant module has phi: a->b
acting V_b -> V_a, a covariant one V_a -> V_b.  Construction validates the
structure-constant compatibility and that identity cosets act as identities;
building a module out of functor evaluations additionally checks that every
morphism factoring through a projective acts as zero.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .fieldmat import FpMatrix, kernel_basis, rank
from .modules import (
    LambdaMorphism,
    RingCtx,
    projective_hom_generators,
    stable_class_coords,
    stable_hom,
)

__all__ = [
    "CompatibilityViolation",
    "GammaAlgebra",
    "GammaBasisElement",
    "GammaModule",
    "GammaModuleMap",
    "direct_sum_gamma",
    "from_functor",
    "gamma_algebra",
    "gamma_hom_basis",
    "iso_test",
    "representable_co",
    "representable_contra",
    "zero_gamma_module",
]

ISO_EXHAUSTIVE_LIMIT = 10**6
ISO_RANDOM_TRIALS = 64


class CompatibilityViolation(ValueError):
    """Evaluation data is not a module over the stable algebra."""


@dataclass(frozen=True)
class GammaBasisElement:
    """One basis coset: a stable map J_src -> J_dst with its representative."""

    index: int
    src: int
    dst: int
    rep: LambdaMorphism


class GammaAlgebra:
    """Stable Hom spaces between the blocks J_1..J_{n-1} with composition."""

    def __init__(self, ctx: RingCtx):
        if ctx.n < 2:
            raise ValueError(
                "the stable algebra is zero for n < 2; refusing the degenerate case"
            )
        self.ctx = ctx
        self.p = ctx.p
        self.n = ctx.n
        elements: list[GammaBasisElement] = []
        by_pair: dict[tuple[int, int], list[int]] = {}
        sizes = list(ctx.stable_sizes())
        for a in sizes:
            for b in sizes:
                reps, _ = stable_hom(ctx.jordan(a), ctx.jordan(b))
                idxs = []
                for r in reps:
                    idxs.append(len(elements))
                    elements.append(GammaBasisElement(len(elements), a, b, r))
                by_pair[(a, b)] = idxs
        self.elements = tuple(elements)
        self.by_pair = by_pair
        self.dim = len(elements)
        # identity cosets, one per block, expanded in the (a, a) basis
        self.identity_coords: dict[int, np.ndarray] = {}
        for a in sizes:
            ja = ctx.jordan(a)
            ident = LambdaMorphism(ja, ja, ctx.field.identity(a), _check=False)
            self.identity_coords[a] = stable_class_coords(ja, ja, ident)
        # structure constants for composable pairs: (i after j)
        self.mult: dict[tuple[int, int], np.ndarray] = {}
        for ei in elements:
            for ej in elements:
                if ej.dst != ei.src:
                    continue
                comp = ei.rep.compose(ej.rep)
                coords = stable_class_coords(
                    ctx.jordan(ej.src), ctx.jordan(ei.dst), comp
                )
                self.mult[(ei.index, ej.index)] = coords
        self._validate_table()

    def stable_dims(self) -> list[list[int]]:
        sizes = list(self.ctx.stable_sizes())
        return [[len(self.by_pair[(a, b)]) for b in sizes] for a in sizes]

    def product_coords(self, i: int, j: int) -> np.ndarray | None:
        """Coefficients of e_i . e_j over the (src_j, dst_i) basis, or None."""
        return self.mult.get((i, j))

    def _validate_table(self) -> None:
        p = self.p
        # associativity through the table itself, all composable triples
        for ei in self.elements:
            for ej in self.elements:
                if ej.dst != ei.src:
                    continue
                cij = self.mult[(ei.index, ej.index)]
                for ek in self.elements:
                    if ek.dst != ej.src:
                        continue
                    cjk = self.mult[(ej.index, ek.index)]
                    left = np.zeros(len(self.by_pair[(ek.src, ei.dst)]), dtype=np.int64)
                    for m_local, em_idx in enumerate(self.by_pair[(ej.src, ei.dst)]):
                        if cij[m_local]:
                            left = (
                                left + int(cij[m_local]) * self.mult[(em_idx, ek.index)]
                            ) % p
                    right = np.zeros_like(left)
                    for m_local, em_idx in enumerate(self.by_pair[(ek.src, ej.dst)]):
                        if cjk[m_local]:
                            right = (
                                right + int(cjk[m_local]) * self.mult[(ei.index, em_idx)]
                            ) % p
                    if left.tolist() != right.tolist():
                        raise AssertionError(
                            f"associativity fails on triple "
                            f"({ei.index},{ej.index},{ek.index})"
                        )
        # unitality of the identity cosets
        for e in self.elements:
            for side_block, acts_left in ((e.dst, True), (e.src, False)):
                idc = self.identity_coords[side_block]
                total = np.zeros(len(self.by_pair[(e.src, e.dst)]), dtype=np.int64)
                for k_local, k_idx in enumerate(self.by_pair[(side_block, side_block)]):
                    if idc[k_local]:
                        pair = (k_idx, e.index) if acts_left else (e.index, k_idx)
                        total = (total + int(idc[k_local]) * self.mult[pair]) % p
                expected = np.zeros_like(total)
                expected[self.by_pair[(e.src, e.dst)].index(e.index)] = 1
                if total.tolist() != expected.tolist():
                    raise AssertionError(f"unitality fails at element {e.index}")

    def __repr__(self) -> str:
        return f"GammaAlgebra(p={self.p}, n={self.n}, dim={self.dim})"


def gamma_algebra(ctx: RingCtx) -> GammaAlgebra:
    """The (cached) stable endomorphism algebra for this ring."""
    if ctx._gamma is None:
        ctx._gamma = GammaAlgebra(ctx)
    return ctx._gamma


class GammaModule:
    """A finite-dimensional module over the stable algebra.

    ``dims[a-1]`` is the dimension of the value space at J_a and
    ``actions[i]`` the matrix of basis element i.  Construction validates
    identity actions and composition compatibility.
    """

    __slots__ = ("algebra", "variance", "dims", "actions")

    def __init__(
        self,
        algebra: GammaAlgebra,
        variance: str,
        dims: tuple[int, ...],
        actions: tuple[FpMatrix, ...],
        _check: bool = True,
    ):
        if variance not in ("contra", "co"):
            raise ValueError(f"variance must be 'contra' or 'co', got {variance!r}")
        sizes = list(algebra.ctx.stable_sizes())
        if len(dims) != len(sizes):
            raise ValueError("one value dimension per non-projective block required")
        if len(actions) != algebra.dim:
            raise ValueError("one action matrix per algebra basis element required")
        for e in algebra.elements:
            va, vb = dims[e.src - 1], dims[e.dst - 1]
            want = (va, vb) if variance == "contra" else (vb, va)
            if actions[e.index].shape != want:
                raise ValueError(
                    f"action of element {e.index} has shape "
                    f"{actions[e.index].shape}, expected {want}"
                )
        object.__setattr__(self, "algebra", algebra)
        object.__setattr__(self, "variance", variance)
        object.__setattr__(self, "dims", tuple(int(d) for d in dims))
        object.__setattr__(self, "actions", tuple(actions))
        if _check:
            self._validate()

    def __setattr__(self, name, value):
        raise AttributeError("GammaModule is immutable")

    def _validate(self) -> None:
        alg = self.algebra
        p = alg.p
        field = alg.ctx.field
        # identity cosets act as the identity on their block
        for a in alg.ctx.stable_sizes():
            idc = alg.identity_coords[a]
            d = self.dims[a - 1]
            total = field.zeros(d, d)
            for k_local, k_idx in enumerate(alg.by_pair[(a, a)]):
                if idc[k_local]:
                    total = total + self.actions[k_idx].scale(int(idc[k_local]))
            if total != field.identity(d):
                raise CompatibilityViolation(
                    f"identity coset at block {a} does not act as identity"
                )
        # composition against structure constants
        for ei in alg.elements:
            for ej in alg.elements:
                if ej.dst != ei.src:
                    continue
                coords = alg.mult[(ei.index, ej.index)]
                pair = (ej.src, ei.dst)
                if self.variance == "contra":
                    composite = self.actions[ej.index] @ self.actions[ei.index]
                else:
                    composite = self.actions[ei.index] @ self.actions[ej.index]
                total = FpMatrix(
                    p, np.zeros(composite.shape, dtype=np.int64)
                )
                for m_local, m_idx in enumerate(alg.by_pair[pair]):
                    if coords[m_local]:
                        total = total + self.actions[m_idx].scale(int(coords[m_local]))
                if total != composite:
                    raise CompatibilityViolation(
                        f"composition compatibility fails on pair "
                        f"({ei.index},{ej.index})"
                    )

    @property
    def total_dim(self) -> int:
        return sum(self.dims)

    def is_zero(self) -> bool:
        return self.total_dim == 0

    def key(self) -> tuple:
        return (
            self.variance,
            self.dims,
            tuple(m.a.tobytes() for m in self.actions),
        )

    def __repr__(self) -> str:
        return f"GammaModule({self.variance}, dims={self.dims})"


def zero_gamma_module(algebra: GammaAlgebra, variance: str) -> GammaModule:
    sizes = list(algebra.ctx.stable_sizes())
    dims = tuple(0 for _ in sizes)
    actions = tuple(
        algebra.ctx.field.zeros(0, 0) for _ in range(algebra.dim)
    )
    return GammaModule(algebra, variance, dims, actions, _check=False)


def direct_sum_gamma(g1: GammaModule, g2: GammaModule) -> GammaModule:
    if g1.algebra is not g2.algebra and g1.algebra.ctx != g2.algebra.ctx:
        raise ValueError("direct sum over different algebras")
    if g1.variance != g2.variance:
        raise ValueError("direct sum with mixed variance")
    from .fieldmat import block_diag

    dims = tuple(d1 + d2 for d1, d2 in zip(g1.dims, g2.dims))
    actions = tuple(
        block_diag(g1.algebra.p, [m1, m2])
        for m1, m2 in zip(g1.actions, g2.actions)
    )
    return GammaModule(g1.algebra, g1.variance, dims, actions, _check=False)


def from_functor(
    algebra: GammaAlgebra,
    variance: str,
    value_dims: tuple[int, ...],
    eval_morphism,
) -> GammaModule:
    """Package functor evaluation data as a module over the stable algebra.

    ``eval_morphism(f)`` must return the induced matrix of a module map
    f: J_a -> J_b between value spaces (V_b -> V_a for contravariant data,
    V_a -> V_b for covariant).  Rejects data under which a map factoring
    through a projective acts nonzero; such data does not descend to the
    stable category.
    """
    ctx = algebra.ctx
    for a in ctx.stable_sizes():
        for b in ctx.stable_sizes():
            for g in projective_hom_generators(ctx.jordan(a), ctx.jordan(b)):
                if not eval_morphism(g).is_zero():
                    raise CompatibilityViolation(
                        f"a projective-factoring map J_{a} -> J_{b} acts nonzero"
                    )
    actions = tuple(eval_morphism(e.rep) for e in algebra.elements)
    return GammaModule(algebra, variance, tuple(value_dims), actions)


class GammaModuleMap:
    """A homomorphism of stable-algebra modules: one matrix per block."""

    __slots__ = ("src", "dst", "mats")

    def __init__(
        self,
        src: GammaModule,
        dst: GammaModule,
        mats: tuple[FpMatrix, ...],
        _check: bool = True,
    ):
        if src.variance != dst.variance:
            raise ValueError("map between modules of different variance")
        sizes = list(src.algebra.ctx.stable_sizes())
        if len(mats) != len(sizes):
            raise ValueError("one matrix per block required")
        for a in sizes:
            if mats[a - 1].shape != (dst.dims[a - 1], src.dims[a - 1]):
                raise ValueError(f"component at block {a} has the wrong shape")
        if _check:
            alg = src.algebra
            for e in alg.elements:
                if src.variance == "contra":
                    lhs = mats[e.src - 1] @ src.actions[e.index]
                    rhs = dst.actions[e.index] @ mats[e.dst - 1]
                else:
                    lhs = mats[e.dst - 1] @ src.actions[e.index]
                    rhs = dst.actions[e.index] @ mats[e.src - 1]
                if lhs != rhs:
                    raise ValueError(
                        f"component matrices do not intertwine element {e.index}"
                    )
        object.__setattr__(self, "src", src)
        object.__setattr__(self, "dst", dst)
        object.__setattr__(self, "mats", tuple(mats))

    def __setattr__(self, name, value):
        raise AttributeError("GammaModuleMap is immutable")

    def flatten(self) -> np.ndarray:
        parts = [m.reshape_vec() for m in self.mats]
        if not parts:
            return np.zeros(0, dtype=np.int64)
        return np.concatenate(parts)

    def is_zero(self) -> bool:
        return all(m.is_zero() for m in self.mats)

    def is_invertible(self) -> bool:
        return all(
            m.rows == m.cols and rank(m) == m.rows for m in self.mats
        )


def gamma_hom_basis(g1: GammaModule, g2: GammaModule) -> list[GammaModuleMap]:
    """Basis of the space of module homomorphisms g1 -> g2."""
    if g1.variance != g2.variance:
        raise ValueError("hom between modules of different variance")
    alg = g1.algebra
    p = alg.p
    sizes = list(alg.ctx.stable_sizes())
    widths = [g2.dims[a - 1] * g1.dims[a - 1] for a in sizes]
    offsets = np.concatenate([[0], np.cumsum(widths)])
    total = int(offsets[-1])
    if total == 0:
        return []
    rows: list[np.ndarray] = []
    eye = np.eye

    def block_cols(a: int) -> slice:
        return slice(int(offsets[a - 1]), int(offsets[a - 1]) + widths[a - 1])

    for e in alg.elements:
        # intertwining at element e relates the components at e.src and e.dst
        if g1.variance == "contra":
            left_block, right_block = e.src, e.dst
            a1 = g1.actions[e.index]  # V1_dst -> V1_src
            a2 = g2.actions[e.index]
        else:
            left_block, right_block = e.dst, e.src
            a1 = g1.actions[e.index]  # V1_src -> V1_dst
            a2 = g2.actions[e.index]
        r = g2.dims[left_block - 1] * g1.dims[right_block - 1]
        if r == 0:
            continue
        block = np.zeros((r, total), dtype=np.int64)
        # vec(T_left @ a1) = kron(I, a1^T) vec(T_left)
        block[:, block_cols(left_block)] = np.kron(
            eye(g2.dims[left_block - 1], dtype=np.int64), a1.a.T
        )
        # vec(a2 @ T_right) = kron(a2, I) vec(T_right)
        block[:, block_cols(right_block)] = (
            block[:, block_cols(right_block)]
            - np.kron(a2.a, eye(g1.dims[right_block - 1], dtype=np.int64))
        ) % p
        rows.append(block % p)
    if rows:
        system = FpMatrix(p, np.vstack(rows))
    else:
        system = FpMatrix(p, np.zeros((0, total), dtype=np.int64))
    ker = kernel_basis(system)
    out = []
    for j in range(ker.dim):
        vec = ker.basis.a[:, j]
        mats = []
        for a in sizes:
            seg = vec[block_cols(a)]
            mats.append(
                FpMatrix(p, seg.reshape(g2.dims[a - 1], g1.dims[a - 1]))
            )
        out.append(GammaModuleMap(g1, g2, tuple(mats), _check=False))
    return out


def _invertible_combo(
    basis: list[GammaModuleMap], coeffs
) -> bool:
    p = basis[0].src.algebra.p
    first = basis[0]
    for a_idx in range(len(first.mats)):
        d = first.mats[a_idx].rows
        if d == 0:
            continue
        acc = np.zeros((d, d), dtype=np.int64)
        for c, bm in zip(coeffs, basis):
            if c:
                acc = acc + int(c) * bm.mats[a_idx].a
        if rank(FpMatrix(p, acc % p)) != d:
            return False
    return True


def iso_test(g1: GammaModule, g2: GammaModule, seed: int = 0) -> str:
    """Decide isomorphism: returns 'iso', 'not_iso' or 'unknown'.

    Dimension data and Hom-space dimensions give fast negatives; otherwise
    an invertible homomorphism is searched for, exhaustively whenever the
    coefficient space is small enough and by seeded sampling otherwise.
    Sampling failure is reported as 'unknown', never as 'not_iso'.
    """
    if g1.algebra.ctx != g2.algebra.ctx:
        raise ValueError("modules over different rings")
    if g1.variance != g2.variance:
        raise ValueError("modules of different variance")
    if g1.dims != g2.dims:
        return "not_iso"
    if g1.total_dim == 0:
        return "iso"
    basis12 = gamma_hom_basis(g1, g2)
    h = len(basis12)
    if h == 0:
        return "not_iso"
    # an isomorphism forces all four Hom spaces to share one dimension
    h21 = len(gamma_hom_basis(g2, g1))
    e1 = len(gamma_hom_basis(g1, g1))
    e2 = len(gamma_hom_basis(g2, g2))
    if not (h == h21 == e1 == e2):
        return "not_iso"
    p = g1.algebra.p
    if p**h <= ISO_EXHAUSTIVE_LIMIT:
        for coeffs in itertools.product(range(p), repeat=h):
            if any(coeffs) and _invertible_combo(basis12, coeffs):
                return "iso"
        return "not_iso"
    rng = np.random.default_rng([seed & 0x7FFFFFFF, g1.total_dim, h])
    for _ in range(ISO_RANDOM_TRIALS):
        coeffs = rng.integers(0, p, size=h)
        if any(coeffs) and _invertible_combo(basis12, coeffs):
            return "iso"
    return "unknown"


def representable_contra(algebra: GammaAlgebra, m) -> GammaModule:
    """The stable functor T |-> stable-Hom(T, m) as a contravariant module."""
    ctx = algebra.ctx
    dims = []
    reps_by_block = {}
    for b in ctx.stable_sizes():
        reps, _ = stable_hom(ctx.jordan(b), m)
        reps_by_block[b] = reps
        dims.append(len(reps))

    def eval_morphism(f: LambdaMorphism) -> FpMatrix:
        a, b = f.src.dim, f.dst.dim
        cols = []
        for g in reps_by_block[b]:
            cols.append(stable_class_coords(ctx.jordan(a), m, g.compose(f)))
        if not cols:
            return ctx.field.zeros(dims[a - 1], 0)
        return FpMatrix(ctx.p, np.column_stack(cols))

    return from_functor(algebra, "contra", tuple(dims), eval_morphism)


def representable_co(algebra: GammaAlgebra, m) -> GammaModule:
    """The stable functor T |-> stable-Hom(m, T) as a covariant module."""
    ctx = algebra.ctx
    dims = []
    reps_by_block = {}
    for b in ctx.stable_sizes():
        reps, _ = stable_hom(m, ctx.jordan(b))
        reps_by_block[b] = reps
        dims.append(len(reps))

    def eval_morphism(f: LambdaMorphism) -> FpMatrix:
        a, b = f.src.dim, f.dst.dim
        cols = []
        for g in reps_by_block[a]:
            cols.append(stable_class_coords(m, ctx.jordan(b), f.compose(g)))
        if not cols:
            return ctx.field.zeros(dims[b - 1], 0)
        return FpMatrix(ctx.p, np.column_stack(cols))

    return from_functor(algebra, "co", tuple(dims), eval_morphism)
