"""Finite modules over the truncated polynomial ring k[x]/(x^n), k = GF(p).

A module is a finite-dimensional GF(p) vector space together with a
nilpotent matrix giving the action of x.  Everything downstream (module
categories, functor categories, the stable endomorphism algebra) reduces
to exact linear algebra on these pairs, so this file concentrates the
classification (Jordan types), the projective/injective theory (covers,
envelopes, syzygies), tensor products and Tor, stable Hom spaces and the
transpose construction.

Conventions fixed here:
  * the Jordan block J_a is the lower shift matrix (x sends basis vector
    e_i to e_{i+1});
  * the free module of rank t is t consecutive blocks J_n, the generator
    of copy i sitting at coordinate i*n;
  * all quotient/kernel coordinates come from the echelon conventions of
    :mod:`monocat.fieldmat`, so repeated runs pick identical bases.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .fieldmat import (
    FpContext,
    FpMatrix,
    Subspace,
    block_diag,
    cokernel,
    column_echelon,
    complement_cols,
    hstack,
    kernel_basis,
    kron,
    rref,
    solve_matrix,
)

__all__ = [
    "ContextMismatch",
    "JordanType",
    "LambdaModule",
    "LambdaMorphism",
    "RingCtx",
    "cokernel_module",
    "direct_sum",
    "direct_sum_with_maps",
    "dual",
    "hom_basis",
    "hom_matrix",
    "identity_morphism",
    "image_module",
    "injective_envelope",
    "is_isomorphic",
    "jordan_block",
    "jordan_type",
    "kernel_module",
    "module_from_blocks",
    "projective_cover",
    "projective_hom_generators",
    "reversal_matrix",
    "stable_hom",
    "stably_isomorphic",
    "syzygy",
    "cosyzygy",
    "tensor",
    "tensor_left_map",
    "tensor_right_map",
    "to_jordan_form",
    "tor1",
    "transpose",
    "zero_module",
    "zero_morphism",
]


class ContextMismatch(ValueError):
    """Raised when objects over different rings k[x]/(x^n) are combined."""


class RingCtx:
    """The ring k[x]/(x^n) over GF(p), with memoized derived data.

    Caches are write-once maps keyed by matrix content, so concurrent
    readers can only ever observe a missing entry (and recompute the same
    value) or the finished entry; results never depend on timing.
    """

    def __init__(self, p: int, n: int):
        self.field = FpContext(p)
        if not isinstance(n, int) or n < 1:
            raise ValueError(f"nilpotency degree must be a positive int: {n!r}")
        self.p = p
        self.n = n
        self._jordan: dict[int, LambdaModule] = {}
        self._free: dict[int, LambdaModule] = {}
        self._hom: dict[tuple, list[LambdaMorphism]] = {}
        self._cover: dict[tuple, tuple] = {}
        self._envelope: dict[tuple, tuple] = {}
        self._tensor: dict[tuple, tuple] = {}
        self._stable: dict[tuple, "StableHomData"] = {}
        self._gamma = None

    def __repr__(self) -> str:
        return f"RingCtx(p={self.p}, n={self.n})"

    def __eq__(self, other) -> bool:
        return isinstance(other, RingCtx) and (self.p, self.n) == (other.p, other.n)

    def __hash__(self) -> int:
        return hash((self.p, self.n))

    def jordan(self, a: int) -> "LambdaModule":
        """The indecomposable with one Jordan block of size a (0 <= a <= n)."""
        if not 0 <= a <= self.n:
            raise ValueError(f"block size must be within [0, {self.n}]: {a}")
        if a not in self._jordan:
            x = np.zeros((a, a), dtype=np.int64)
            for i in range(a - 1):
                x[i + 1, i] = 1
            self._jordan[a] = LambdaModule(self, a, FpMatrix(self.p, x))
        return self._jordan[a]

    def free_module(self, t: int) -> "LambdaModule":
        """The free module of rank t (t blocks of size n)."""
        if t not in self._free:
            xn = self.jordan(self.n).x
            self._free[t] = LambdaModule(
                self, t * self.n, block_diag(self.p, [xn] * t)
            )
        return self._free[t]

    def indecomposables(self) -> list["LambdaModule"]:
        return [self.jordan(a) for a in range(1, self.n + 1)]

    def stable_sizes(self) -> range:
        """Block sizes of the non-projective indecomposables."""
        return range(1, self.n)

    def gamma_algebra(self):
        """The stable endomorphism algebra of the non-projective blocks."""
        if self._gamma is None:
            from .stable_algebra import gamma_algebra

            self._gamma = gamma_algebra(self)
        return self._gamma


class LambdaModule:
    """A module: a GF(p)-space of dimension ``dim`` with nilpotent action ``x``."""

    __slots__ = ("ctx", "dim", "x")

    def __init__(self, ctx: RingCtx, dim: int, x: FpMatrix, _check: bool = True):
        if x.shape != (dim, dim):
            raise ValueError(f"action must be {dim}x{dim}, got {x.shape}")
        if x.p != ctx.p:
            raise ContextMismatch("action matrix modulus differs from the ring")
        if _check and dim:
            power = x
            for _ in range(ctx.n - 1):
                if power.is_zero():
                    break
                power = power @ x
            if not power.is_zero():
                raise ValueError("action is not nilpotent of the required degree")
        object.__setattr__(self, "ctx", ctx)
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "x", x)

    def __setattr__(self, name, value):
        raise AttributeError("LambdaModule is immutable")

    def key(self) -> tuple:
        return (self.ctx.p, self.ctx.n, self.dim, self.x.a.tobytes())

    def __eq__(self, other) -> bool:
        if not isinstance(other, LambdaModule):
            return NotImplemented
        return self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())

    def is_zero(self) -> bool:
        return self.dim == 0

    def x_power(self, k: int) -> FpMatrix:
        out = self.ctx.field.identity(self.dim)
        for _ in range(k):
            out = out @ self.x
        return out

    def __repr__(self) -> str:
        return f"LambdaModule(p={self.ctx.p}, n={self.ctx.n}, dim={self.dim})"


class LambdaMorphism:
    """A module map f: src -> dst, i.e. a matrix with f x_src = x_dst f."""

    __slots__ = ("src", "dst", "f")

    def __init__(
        self,
        src: LambdaModule,
        dst: LambdaModule,
        f: FpMatrix,
        _check: bool = True,
    ):
        if src.ctx != dst.ctx:
            raise ContextMismatch("source and target live over different rings")
        if f.shape != (dst.dim, src.dim):
            raise ValueError(
                f"matrix must be {dst.dim}x{src.dim}, got {f.shape}"
            )
        if _check and (f @ src.x) != (dst.x @ f):
            raise ValueError("matrix does not commute with the x-action")
        object.__setattr__(self, "src", src)
        object.__setattr__(self, "dst", dst)
        object.__setattr__(self, "f", f)

    def __setattr__(self, name, value):
        raise AttributeError("LambdaMorphism is immutable")

    @property
    def ctx(self) -> RingCtx:
        return self.src.ctx

    def compose(self, other: "LambdaMorphism") -> "LambdaMorphism":
        """self after other."""
        if other.dst.key() != self.src.key():
            raise ValueError("composition shape mismatch")
        return LambdaMorphism(other.src, self.dst, self.f @ other.f, _check=False)

    def __add__(self, other: "LambdaMorphism") -> "LambdaMorphism":
        if (self.src.key(), self.dst.key()) != (other.src.key(), other.dst.key()):
            raise ValueError("sum of morphisms with different endpoints")
        return LambdaMorphism(self.src, self.dst, self.f + other.f, _check=False)

    def scale(self, c: int) -> "LambdaMorphism":
        return LambdaMorphism(self.src, self.dst, self.f.scale(c), _check=False)

    def rank(self) -> int:
        return rref(self.f)[1]

    def is_injective(self) -> bool:
        return self.rank() == self.src.dim

    def is_surjective(self) -> bool:
        return self.rank() == self.dst.dim

    def is_zero(self) -> bool:
        return self.f.is_zero()

    def flatten(self) -> np.ndarray:
        return self.f.reshape_vec()

    def key(self) -> tuple:
        return (self.src.key(), self.dst.key(), self.f.a.tobytes())

    def __eq__(self, other) -> bool:
        if not isinstance(other, LambdaMorphism):
            return NotImplemented
        return self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())

    def __repr__(self) -> str:
        return f"LambdaMorphism({self.src.dim} -> {self.dst.dim})"


def zero_module(ctx: RingCtx) -> LambdaModule:
    return ctx.jordan(0)


def zero_morphism(src: LambdaModule, dst: LambdaModule) -> LambdaMorphism:
    return LambdaMorphism(src, dst, src.ctx.field.zeros(dst.dim, src.dim), _check=False)


def identity_morphism(m: LambdaModule) -> LambdaMorphism:
    return LambdaMorphism(m, m, m.ctx.field.identity(m.dim), _check=False)


def jordan_block(ctx: RingCtx, a: int) -> LambdaModule:
    return ctx.jordan(a)


@dataclass(frozen=True)
class JordanType:
    """Multiset of Jordan block sizes, stored descending."""

    blocks: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "blocks", tuple(sorted(self.blocks, reverse=True)))

    @property
    def dim(self) -> int:
        return sum(self.blocks)

    def without_size(self, size: int) -> "JordanType":
        return JordanType(tuple(b for b in self.blocks if b != size))

    def __iter__(self):
        return iter(self.blocks)


def jordan_type(m: LambdaModule) -> JordanType:
    """Block sizes from the rank profile of the powers of the action."""
    n = m.ctx.n
    ranks = [m.dim]
    power = m.ctx.field.identity(m.dim)
    for _ in range(n):
        power = power @ m.x
        ranks.append(rref(power)[1])
    ranks.append(0)
    blocks: list[int] = []
    for s in range(1, n + 1):
        count = (ranks[s - 1] - ranks[s]) - (ranks[s] - ranks[s + 1])
        blocks.extend([s] * count)
    out = JordanType(tuple(blocks))
    if out.dim != m.dim:
        raise AssertionError("rank profile does not add up to the dimension")
    return out


def module_from_blocks(ctx: RingCtx, blocks) -> LambdaModule:
    sizes = sorted(blocks, reverse=True)
    if not sizes:
        return zero_module(ctx)
    mats = [ctx.jordan(a).x for a in sizes]
    return LambdaModule(ctx, sum(sizes), block_diag(ctx.p, mats), _check=False)


def to_jordan_form(m: LambdaModule) -> LambdaModule:
    return module_from_blocks(m.ctx, jordan_type(m).blocks)


def is_isomorphic(m: LambdaModule, n: LambdaModule) -> bool:
    if m.ctx != n.ctx:
        raise ContextMismatch("modules over different rings")
    return jordan_type(m) == jordan_type(n)


def stably_isomorphic(m: LambdaModule, n: LambdaModule) -> bool:
    """Isomorphic after deleting all free (size-n) blocks."""
    if m.ctx != n.ctx:
        raise ContextMismatch("modules over different rings")
    top = m.ctx.n
    return jordan_type(m).without_size(top) == jordan_type(n).without_size(top)


def direct_sum(mods: list[LambdaModule]) -> LambdaModule:
    if not mods:
        raise ValueError("direct sum of an empty list has no context")
    ctx = mods[0].ctx
    for m in mods:
        if m.ctx != ctx:
            raise ContextMismatch("direct sum over different rings")
    return LambdaModule(
        ctx, sum(m.dim for m in mods), block_diag(ctx.p, [m.x for m in mods]),
        _check=False,
    )


def direct_sum_with_maps(
    mods: list[LambdaModule],
) -> tuple[LambdaModule, list[LambdaMorphism], list[LambdaMorphism]]:
    """Direct sum together with the canonical inclusions and projections."""
    total = direct_sum(mods)
    ctx = total.ctx
    incs, prjs = [], []
    offset = 0
    for m in mods:
        inc = np.zeros((total.dim, m.dim), dtype=np.int64)
        inc[offset : offset + m.dim, :] = np.eye(m.dim, dtype=np.int64)
        incs.append(LambdaMorphism(m, total, FpMatrix(ctx.p, inc), _check=False))
        prjs.append(LambdaMorphism(total, m, FpMatrix(ctx.p, inc.T), _check=False))
        offset += m.dim
    return total, incs, prjs


def morphism_direct_sum(fs: list[LambdaMorphism]) -> LambdaMorphism:
    src = direct_sum([f.src for f in fs])
    dst = direct_sum([f.dst for f in fs])
    return LambdaMorphism(
        src, dst, block_diag(src.ctx.p, [f.f for f in fs]), _check=False
    )


def hom_basis(m: LambdaModule, n: LambdaModule) -> list[LambdaMorphism]:
    """Basis of Hom(m, n), the kernel of f |-> f x_m - x_n f.

    The ordering is the canonical echelon ordering of that kernel, so it
    is deterministic and depends only on the two action matrices.
    """
    if m.ctx != n.ctx:
        raise ContextMismatch("hom between modules over different rings")
    ctx = m.ctx
    cache_key = (m.key(), n.key())
    hit = ctx._hom.get(cache_key)
    if hit is not None:
        return hit
    dm, dn = m.dim, n.dim
    if dm == 0 or dn == 0:
        out: list[LambdaMorphism] = []
    else:
        eye_m = ctx.field.identity(dm)
        eye_n = ctx.field.identity(dn)
        sylv = kron(eye_n, m.x.T) - kron(n.x, eye_m)
        ker = kernel_basis(sylv)
        out = [
            LambdaMorphism(
                m, n, FpMatrix(ctx.p, ker.basis.a[:, j].reshape(dn, dm)),
                _check=False,
            )
            for j in range(ker.dim)
        ]
    ctx._hom[cache_key] = out
    return out


def hom_matrix(m: LambdaModule, n: LambdaModule) -> FpMatrix:
    """The hom basis as columns of one flattened matrix."""
    basis = hom_basis(m, n)
    p = m.ctx.p
    if not basis:
        return FpMatrix(p, np.zeros((m.dim * n.dim, 0), dtype=np.int64))
    return FpMatrix(p, np.column_stack([f.flatten() for f in basis]))


def hom_coordinates(m: LambdaModule, n: LambdaModule, f: LambdaMorphism) -> np.ndarray:
    """Coordinates of f in the canonical hom basis."""
    mat = hom_matrix(m, n)
    if mat.cols == 0:
        if not f.f.is_zero():
            raise ValueError("nonzero morphism in a zero hom space")
        return np.zeros(0, dtype=np.int64)
    sol = solve_matrix(mat, FpMatrix(m.ctx.p, f.flatten().reshape(-1, 1)))
    if sol is None:
        raise ValueError("morphism does not lie in the hom space")
    return sol.a[:, 0].copy()


def projective_cover(m: LambdaModule) -> tuple[LambdaModule, LambdaMorphism]:
    """Minimal surjection from a free module.

    The generator count equals dim(m) - rank(x_m) (the dimension of the
    top m/xm) and the generators are the canonical section of the quotient
    onto the top, so the construction is deterministic.
    """
    ctx = m.ctx
    hit = ctx._cover.get(m.key())
    if hit is not None:
        return hit
    _, section = cokernel(m.x)
    t = section.cols
    free = ctx.free_module(t)
    cols = np.zeros((m.dim, t * ctx.n), dtype=np.int64)
    for i in range(t):
        v = FpMatrix(ctx.p, section.a[:, i].reshape(-1, 1))
        for j in range(ctx.n):
            cols[:, i * ctx.n + j] = v.a[:, 0]
            v = m.x @ v
    pi = LambdaMorphism(free, m, FpMatrix(ctx.p, cols), _check=False)
    if pi.rank() != m.dim:
        raise AssertionError("cover candidate is not surjective")
    out = (free, pi)
    ctx._cover[m.key()] = out
    return out


def dual(m: LambdaModule) -> LambdaModule:
    """The linear dual, with the transposed action."""
    return LambdaModule(m.ctx, m.dim, m.x.T, _check=False)


def reversal_matrix(p: int, d: int) -> FpMatrix:
    """Antidiagonal permutation; conjugates the upper shift to the lower."""
    out = np.zeros((d, d), dtype=np.int64)
    for i in range(d):
        out[i, d - 1 - i] = 1
    return FpMatrix(p, out)


def injective_envelope(m: LambdaModule) -> tuple[LambdaModule, LambdaMorphism]:
    """Minimal embedding into a free module (the ring is self-injective).

    Built as the dual of the projective cover of the dual module, with a
    per-block coordinate reversal identifying the dual of a free module
    with the standard free module.  The rank equals dim ker(x_m), the
    socle dimension.
    """
    ctx = m.ctx
    hit = ctx._envelope.get(m.key())
    if hit is not None:
        return hit
    free, pi = projective_cover(dual(m))
    s = free.dim // ctx.n if ctx.n else 0
    rev = block_diag(ctx.p, [reversal_matrix(ctx.p, ctx.n)] * s)
    iota = LambdaMorphism(m, free, rev @ pi.f.T)
    if iota.rank() != m.dim:
        raise AssertionError("envelope candidate is not injective")
    socle = kernel_basis(m.x).dim
    if s != socle:
        raise AssertionError("envelope rank differs from the socle dimension")
    out = (free, iota)
    ctx._envelope[m.key()] = out
    return out


def kernel_module(f: LambdaMorphism) -> tuple[LambdaModule, LambdaMorphism]:
    """The kernel with its inclusion, in canonical kernel coordinates."""
    ker = kernel_basis(f.f)
    ctx = f.ctx
    act = solve_matrix(ker.basis, f.src.x @ ker.basis)
    if act is None:
        raise AssertionError("kernel is not invariant under the action")
    k = LambdaModule(ctx, ker.dim, act, _check=False)
    return k, LambdaMorphism(k, f.src, ker.basis, _check=False)


def image_module(
    f: LambdaMorphism,
) -> tuple[LambdaModule, LambdaMorphism, LambdaMorphism]:
    """Image as a module: (im, corestriction src ->> im, inclusion im -> dst)."""
    basis, r, _ = column_echelon(f.f)
    ctx = f.ctx
    act = solve_matrix(basis, f.dst.x @ basis)
    if act is None:
        raise AssertionError("image is not invariant under the action")
    img = LambdaModule(ctx, r, act, _check=False)
    core = solve_matrix(basis, f.f)
    if core is None:
        raise AssertionError("image basis does not span the image")
    return (
        img,
        LambdaMorphism(f.src, img, core, _check=False),
        LambdaMorphism(img, f.dst, basis, _check=False),
    )


def cokernel_module(
    f: LambdaMorphism,
) -> tuple[LambdaModule, LambdaMorphism, FpMatrix]:
    """Cokernel with the quotient map and a linear (not module) section."""
    proj, section = cokernel(f.f)
    ctx = f.ctx
    act = proj @ f.dst.x @ section
    c = LambdaModule(ctx, proj.rows, act, _check=False)
    cm = LambdaMorphism(f.dst, c, proj, _check=False)
    return c, cm, section


def syzygy(m: LambdaModule) -> LambdaModule:
    """Kernel of the projective cover, in Jordan normal form."""
    _, pi = projective_cover(m)
    k, _ = kernel_module(pi)
    return to_jordan_form(k)


def cosyzygy(m: LambdaModule) -> LambdaModule:
    """Cokernel of the injective envelope, in Jordan normal form."""
    _, iota = injective_envelope(m)
    c, _, _ = cokernel_module(iota)
    return to_jordan_form(c)


def tensor_data(
    m: LambdaModule, n: LambdaModule
) -> tuple[LambdaModule, FpMatrix, FpMatrix]:
    """Tensor product over the ring: (module, projection, linear section).

    Coordinates are the quotient of the k-tensor space (row-major pairs)
    by the image of x (x) 1 - 1 (x) x; the action is induced by 1 (x) x and
    its well-definedness on the quotient is asserted.
    """
    if m.ctx != n.ctx:
        raise ContextMismatch("tensor of modules over different rings")
    ctx = m.ctx
    cache_key = (m.key(), n.key())
    hit = ctx._tensor.get(cache_key)
    if hit is not None:
        return hit
    eye_m = ctx.field.identity(m.dim)
    eye_n = ctx.field.identity(n.dim)
    diff = kron(m.x, eye_n) - kron(eye_m, n.x)
    proj, section = cokernel(diff)
    act_big = kron(eye_m, n.x)
    if not (proj @ (act_big @ diff)).is_zero():
        raise AssertionError("induced action is not well defined on the quotient")
    t = LambdaModule(ctx, proj.rows, proj @ act_big @ section, _check=False)
    out = (t, proj, section)
    ctx._tensor[cache_key] = out
    return out


def tensor(m: LambdaModule, n: LambdaModule) -> tuple[LambdaModule, FpMatrix]:
    t, proj, _ = tensor_data(m, n)
    return t, proj


def tensor_left_map(phi: LambdaMorphism, n: LambdaModule) -> FpMatrix:
    """Matrix of phi (x) id on tensor coordinates."""
    _, _, section_s = tensor_data(phi.src, n)
    _, proj_d, _ = tensor_data(phi.dst, n)
    big = kron(phi.f, n.ctx.field.identity(n.dim))
    return proj_d @ (big @ section_s)


def tensor_right_map(m: LambdaModule, psi: LambdaMorphism) -> FpMatrix:
    """Matrix of id (x) psi on tensor coordinates."""
    _, _, section_s = tensor_data(m, psi.src)
    _, proj_d, _ = tensor_data(m, psi.dst)
    big = kron(m.ctx.field.identity(m.dim), psi.f)
    return proj_d @ (big @ section_s)


def _presentation_chain(n_mod: LambdaModule, length: int) -> list[LambdaMorphism]:
    """Maps d1, d2, ... of a minimal free resolution (d_i: P_i -> P_{i-1}).

    Each kernel is taken of the corestricted cover P_i ->> K_i, so the
    inclusion of the next kernel already lands in P_i and d_{i+1} is the
    plain composite inclusion-after-cover.
    """
    maps: list[LambdaMorphism] = []
    _, pi = projective_cover(n_mod)
    for _ in range(length):
        k, incl = kernel_module(pi)
        _, pi_next = projective_cover(k)
        maps.append(incl.compose(pi_next))
        pi = pi_next
    return maps


def minimal_presentation(m: LambdaModule) -> tuple[LambdaMorphism, LambdaMorphism]:
    """Minimal presentation (d1: P1 -> P0, pi: P0 ->> m)."""
    _, pi = projective_cover(m)
    k, incl = kernel_module(pi)
    _, pi1 = projective_cover(k)
    return incl.compose(pi1), pi


def tor1(m: LambdaModule, n: LambdaModule) -> tuple[int, Subspace]:
    """First Tor group via a minimal free resolution of the right factor.

    Returns the dimension together with a subspace of m (x) P1 whose
    classes realize it (a complement of the boundary inside the cycles).
    """
    d1, d2 = _presentation_chain(n, 2)
    t1 = tensor_right_map(m, d1)
    t2 = tensor_right_map(m, d2)
    cycles = kernel_basis(t1)
    boundary, _, _ = column_echelon(t2)
    kept = complement_cols(boundary, cycles.basis)
    dim = len(kept)
    if dim != cycles.dim - boundary.cols:
        raise AssertionError("boundary does not embed into the cycles")
    if dim == 0:
        basis = FpMatrix(m.ctx.p, np.zeros((t1.cols, 0), dtype=np.int64))
    else:
        basis, _, _ = column_echelon(cycles.basis.take_cols(kept))
    return dim, Subspace(m.ctx.p, t1.cols, basis)


@dataclass(frozen=True)
class StableHomData:
    """Cached stable Hom data for one ordered pair of modules."""

    hom_mat: FpMatrix
    reps: tuple[LambdaMorphism, ...]
    proj_coords: FpMatrix
    projective_part: tuple[LambdaMorphism, ...]

    @property
    def dim(self) -> int:
        return len(self.reps)


def _stable_data(m: LambdaModule, n: LambdaModule) -> StableHomData:
    ctx = m.ctx
    cache_key = (m.key(), n.key())
    hit = ctx._stable.get(cache_key)
    if hit is not None:
        return hit
    homs = hom_basis(m, n)
    hmat = hom_matrix(m, n)
    cover, pi = projective_cover(n)
    through = [pi.compose(g) for g in hom_basis(m, cover)]
    if hmat.cols == 0:
        coords = FpMatrix(ctx.p, np.zeros((0, len(through)), dtype=np.int64))
    elif not through:
        coords = FpMatrix(ctx.p, np.zeros((hmat.cols, 0), dtype=np.int64))
    else:
        stacked = FpMatrix(
            ctx.p, np.column_stack([g.flatten() for g in through])
        )
        sol = solve_matrix(hmat, stacked)
        if sol is None:
            raise AssertionError("projective-factoring maps escape the hom space")
        coords = sol
    proj_coords, section = cokernel(coords)
    reps = []
    for j in range(section.cols):
        combo = hmat @ FpMatrix(ctx.p, section.a[:, j].reshape(-1, 1))
        reps.append(
            LambdaMorphism(
                m, n, FpMatrix(ctx.p, combo.a[:, 0].reshape(n.dim, m.dim)),
                _check=False,
            )
        )
    data = StableHomData(hmat, tuple(reps), proj_coords, tuple(through))
    ctx._stable[cache_key] = data
    return data


def stable_hom(
    m: LambdaModule, n: LambdaModule
) -> tuple[list[LambdaMorphism], FpMatrix]:
    """Coset representatives and coordinate map for Hom modulo maps
    factoring through a projective.

    Any map factoring through some projective factors through the
    projective cover of the target, so the factoring subspace is the span
    of cover-composites; representatives come from the canonical echelon
    complement.
    """
    data = _stable_data(m, n)
    return list(data.reps), data.proj_coords


def projective_hom_generators(
    m: LambdaModule, n: LambdaModule
) -> list[LambdaMorphism]:
    """Spanning set of the maps m -> n that factor through a projective."""
    return list(_stable_data(m, n).projective_part)


def stable_class_coords(
    m: LambdaModule, n: LambdaModule, f: LambdaMorphism
) -> np.ndarray:
    """Coordinates of the stable class of f in the representative basis."""
    data = _stable_data(m, n)
    coords = hom_coordinates(m, n, f)
    if data.proj_coords.cols == 0:
        return np.zeros(data.proj_coords.rows, dtype=np.int64)
    out = data.proj_coords @ FpMatrix(m.ctx.p, coords.reshape(-1, 1))
    return out.a[:, 0].copy()


def _lambda_entry_matrix(d: LambdaMorphism) -> list[list[list[int]]]:
    """Entries of a map between free modules as ring-element coefficient lists.

    Entry [i][j] is the coefficient list (by power of x) of the component
    of the j-th source generator in the i-th target copy.
    """
    ctx = d.ctx
    n = ctx.n
    t_src = d.src.dim // n
    t_dst = d.dst.dim // n
    out = []
    for i in range(t_dst):
        row = []
        for j in range(t_src):
            col = d.f.a[i * n : (i + 1) * n, j * n]
            row.append([int(v) for v in col])
        out.append(row)
    return out


def _multiplication_matrix(ctx: RingCtx, coeffs: list[int]) -> np.ndarray:
    """Matrix of multiplication by sum(coeffs[k] x^k) on one free block."""
    n = ctx.n
    out = np.zeros((n, n), dtype=np.int64)
    for k, c in enumerate(coeffs):
        if c:
            for i in range(n - k):
                out[i + k, i] = (out[i + k, i] + c) % ctx.p
    return out


def transpose(m: LambdaModule) -> LambdaModule:
    """Cokernel of the dualized minimal presentation, in Jordan form.

    The presentation map between free modules is read off as a matrix of
    ring elements, transposed, and re-evaluated as a map of free modules;
    the transpose of the module is the cokernel of that map.  Minimality
    of the presentation makes the result free of full-size blocks.
    """
    ctx = m.ctx
    d1, _ = minimal_presentation(m)
    entries = _lambda_entry_matrix(d1)
    t0 = d1.dst.dim // ctx.n
    t1 = d1.src.dim // ctx.n
    star = np.zeros((t1 * ctx.n, t0 * ctx.n), dtype=np.int64)
    for i in range(t0):
        for j in range(t1):
            star[j * ctx.n : (j + 1) * ctx.n, i * ctx.n : (i + 1) * ctx.n] = (
                _multiplication_matrix(ctx, entries[i][j])
            )
    fstar = LambdaMorphism(
        ctx.free_module(t0), ctx.free_module(t1), FpMatrix(ctx.p, star)
    )
    cok, _, _ = cokernel_module(fstar)
    return to_jordan_form(cok)
