"""Coherent functors on the module category, in two presentations.

A contravariant coherent functor is carried by one module map u: A -> B and
evaluates as T |-> Hom(T,B) / u.Hom(T,A).  A covariant one is carried by
v: E0 -> E1 and evaluates as T |-> Ker(T (x) E0 -> T (x) E1).  Both cache
their evaluation data per module and produce induced matrices on maps.

On top of these sit the flat-resolution calculus and the functors gluing
the functor category out of plain modules and modules over the stable
algebra: evaluation/embedding in both variances, their derived versions,
and the left/right companions of each quotient or inclusion.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .fieldmat import (
    FpMatrix,
    cokernel,
    hstack,
    kernel_basis,
    solve_matrix,
    vstack,
)
from .modules import (
    ContextMismatch,
    LambdaModule,
    LambdaMorphism,
    RingCtx,
    cokernel_module,
    direct_sum_with_maps,
    hom_basis,
    hom_matrix,
    image_module,
    injective_envelope,
    kernel_module,
    minimal_presentation,
    projective_cover,
    tensor_left_map,
    tensor_right_map,
    to_jordan_form,
    zero_module,
    zero_morphism,
)
from .stable_algebra import GammaModule, from_functor, gamma_algebra

__all__ = [
    "CoFunctor",
    "ContraFunctor",
    "FlatResolution",
    "i_lambda",
    "i_rho",
    "j_lambda",
    "j_rho",
    "l0",
    "morphism_through_hom",
    "nat_contra_basis",
    "nat_contra_dim",
    "nu",
    "r0",
    "special_flat_resolution",
    "t",
    "theta_eval",
    "upsilon",
]


def morphism_through_hom(
    src: LambdaModule, dst: LambdaModule, constraint, rhs: FpMatrix
) -> LambdaMorphism | None:
    """Solve for a module map src -> dst subject to a linear condition.

    ``constraint(f)`` maps a candidate morphism matrix to a matrix whose
    flattened form must equal ``rhs`` flattened.  The solve runs over the
    hom basis, so any solution returned is a genuine module map.
    """
    basis = hom_basis(src, dst)
    p = src.ctx.p
    target = rhs.reshape_vec().reshape(-1, 1)
    if not basis:
        if not target.any():
            return zero_morphism(src, dst)
        return None
    cols = np.column_stack([constraint(f.f).reshape_vec() for f in basis])
    sol = solve_matrix(FpMatrix(p, cols), FpMatrix(p, target))
    if sol is None:
        return None
    out = zero_morphism(src, dst)
    for i, c in enumerate(sol.a[:, 0]):
        if c:
            out = out + basis[i].scale(int(c))
    return out


@dataclass(frozen=True)
class _ContraEval:
    dim: int
    proj: FpMatrix
    section: FpMatrix


class ContraFunctor:
    """Cokernel presentation: F(T) = Hom(T, B) / u.Hom(T, A) for u: A -> B."""

    def __init__(self, pres: LambdaMorphism):
        self.pres = pres
        self.ctx: RingCtx = pres.ctx
        self._evals: dict[tuple, _ContraEval] = {}

    def _eval(self, t_mod: LambdaModule) -> _ContraEval:
        if t_mod.ctx != self.ctx:
            raise ContextMismatch("evaluation module over a different ring")
        hit = self._evals.get(t_mod.key())
        if hit is not None:
            return hit
        ctx = self.ctx
        h_b = hom_matrix(t_mod, self.pres.dst)
        h_a = hom_basis(t_mod, self.pres.src)
        if h_a:
            stacked = np.column_stack(
                [(self.pres.f @ g.f).reshape_vec() for g in h_a]
            )
            coords = solve_matrix(h_b, FpMatrix(ctx.p, stacked))
            if coords is None:
                raise AssertionError("composite maps escape the hom space")
        else:
            coords = ctx.field.zeros(h_b.cols, 0)
        proj, section = cokernel(coords)
        out = _ContraEval(proj.rows, proj, section)
        self._evals[t_mod.key()] = out
        return out

    def eval_dim(self, t_mod: LambdaModule) -> int:
        return self._eval(t_mod).dim

    def eval_data(self, t_mod: LambdaModule) -> tuple[int, FpMatrix, FpMatrix]:
        """Value dimension with the (projection, section) coordinate pair.

        The projection maps hom-basis coordinates of Hom(t_mod, pres.dst)
        onto value coordinates; the section picks representatives back.
        """
        ev = self._eval(t_mod)
        return ev.dim, ev.proj, ev.section

    def induced(self, phi: LambdaMorphism) -> FpMatrix:
        """Matrix of F(phi): F(phi.dst) -> F(phi.src) (precomposition)."""
        ev_src = self._eval(phi.src)
        ev_dst = self._eval(phi.dst)
        ctx = self.ctx
        h_src = hom_matrix(phi.src, self.pres.dst)
        basis_dst = hom_basis(phi.dst, self.pres.dst)
        if basis_dst:
            stacked = np.column_stack(
                [(h.f @ phi.f).reshape_vec() for h in basis_dst]
            )
            pre = solve_matrix(h_src, FpMatrix(ctx.p, stacked))
            if pre is None:
                raise AssertionError("precomposition escapes the hom space")
        else:
            pre = ctx.field.zeros(h_src.cols, 0)
        return ev_src.proj @ (pre @ ev_dst.section)

    def is_zero(self) -> bool:
        return all(
            self.eval_dim(self.ctx.jordan(a)) == 0
            for a in range(1, self.ctx.n + 1)
        )

    def value_dims(self) -> tuple[int, ...]:
        return tuple(
            self.eval_dim(self.ctx.jordan(a)) for a in range(1, self.ctx.n + 1)
        )

    def gamma_module(self) -> GammaModule:
        """Restrict to the non-projective blocks as a stable-algebra module.

        Only valid when the functor kills projectives; that is exactly
        what the packaging validation checks.
        """
        alg = gamma_algebra(self.ctx)
        dims = tuple(
            self.eval_dim(self.ctx.jordan(a)) for a in self.ctx.stable_sizes()
        )
        return from_functor(alg, "contra", dims, self.induced)

    def __repr__(self) -> str:
        return (
            f"ContraFunctor(pres {self.pres.src.dim} -> {self.pres.dst.dim})"
        )


class CoFunctor:
    """Kernel presentation: G(T) = Ker(T (x) E0 -> T (x) E1) for v: E0 -> E1."""

    def __init__(self, copres: LambdaMorphism):
        self.copres = copres
        self.ctx: RingCtx = copres.ctx
        self._kernels: dict[tuple, FpMatrix] = {}

    def _kernel(self, t_mod: LambdaModule) -> FpMatrix:
        if t_mod.ctx != self.ctx:
            raise ContextMismatch("evaluation module over a different ring")
        hit = self._kernels.get(t_mod.key())
        if hit is not None:
            return hit
        mat = tensor_right_map(t_mod, self.copres)
        ker = kernel_basis(mat).basis
        self._kernels[t_mod.key()] = ker
        return ker

    def eval_dim(self, t_mod: LambdaModule) -> int:
        return self._kernel(t_mod).cols

    def kernel_at(self, t_mod: LambdaModule) -> FpMatrix:
        """Basis of the value space inside t_mod (x) copres.src coordinates."""
        return self._kernel(t_mod)

    def induced(self, phi: LambdaMorphism) -> FpMatrix:
        """Matrix of G(phi): G(phi.src) -> G(phi.dst) (tensor and restrict)."""
        k_src = self._kernel(phi.src)
        k_dst = self._kernel(phi.dst)
        big = tensor_left_map(phi, self.copres.src)
        restricted = solve_matrix(k_dst, big @ k_src)
        if restricted is None:
            raise AssertionError("induced map does not preserve the kernels")
        return restricted

    def is_zero(self) -> bool:
        return all(
            self.eval_dim(self.ctx.jordan(a)) == 0
            for a in range(1, self.ctx.n + 1)
        )

    def value_dims(self) -> tuple[int, ...]:
        return tuple(
            self.eval_dim(self.ctx.jordan(a)) for a in range(1, self.ctx.n + 1)
        )

    def gamma_module(self) -> GammaModule:
        """Restrict to the non-projective blocks as a stable-algebra module."""
        alg = gamma_algebra(self.ctx)
        dims = tuple(
            self.eval_dim(self.ctx.jordan(a)) for a in self.ctx.stable_sizes()
        )
        return from_functor(alg, "co", dims, self.induced)

    def __repr__(self) -> str:
        return (
            f"CoFunctor(copres {self.copres.src.dim} -> {self.copres.dst.dim})"
        )


@dataclass(frozen=True)
class FlatResolution:
    """0 -> (-, e1) -> (-, e0) -> (-, l) -> F -> 0 with g mono."""

    e1: LambdaModule
    e0: LambdaModule
    l: LambdaModule
    g: LambdaMorphism
    f: LambdaMorphism


def special_flat_resolution(f_functor: ContraFunctor) -> FlatResolution:
    """Two-step flat resolution read off the presentation.

    The kernel of the presentation map represents the leftmost term
    because Hom is left exact.  A functor that evaluates to zero
    everywhere collapses to the zero resolution.
    """
    ctx = f_functor.ctx
    if f_functor.is_zero():
        z = zero_module(ctx)
        zm = zero_morphism(z, z)
        return FlatResolution(z, z, z, zm, zm)
    u = f_functor.pres
    k, incl = kernel_module(u)
    return FlatResolution(k, u.src, u.dst, incl, u)


def nu(f_functor: ContraFunctor) -> LambdaModule:
    """Cokernel of the resolution's right map, in Jordan form."""
    res = special_flat_resolution(f_functor)
    c, _, _ = cokernel_module(res.f)
    return to_jordan_form(c)


def upsilon(m: LambdaModule) -> ContraFunctor:
    """The representable functor Hom(-, m)."""
    return ContraFunctor(
        LambdaMorphism(
            zero_module(m.ctx), m, m.ctx.field.zeros(m.dim, 0), _check=False
        )
    )


def l0(m: LambdaModule) -> ContraFunctor:
    """Functor presented by the minimal projective presentation of m."""
    d1, _ = minimal_presentation(m)
    return ContraFunctor(d1)


def i_lambda(f_functor: ContraFunctor) -> GammaModule:
    """Cokernel of the comparison from the presented-by-covers functor.

    Lifting the projective cover of nu(F) through the resolution's right
    map enlarges the presentation by one projective column; the cokernel
    functor vanishes on projectives and is returned over the stable
    algebra.
    """
    res = special_flat_resolution(f_functor)
    nu_mod, q, _ = cokernel_module(res.f)
    cover, pi = projective_cover(nu_mod)
    lift = morphism_through_hom(
        cover, res.l, lambda mat: q.f @ mat, pi.f
    )
    if lift is None:
        raise AssertionError("cover does not lift through the quotient")
    big, _, _ = direct_sum_with_maps([res.e0, cover])
    combined = LambdaMorphism(
        big, res.l, hstack([res.f.f, lift.f]), _check=False
    )
    return ContraFunctor(combined).gamma_module()


def i_rho(f_functor: ContraFunctor) -> ContraFunctor:
    """Functor presented by the corestriction onto the image of the right map."""
    res = special_flat_resolution(f_functor)
    _, core, _ = image_module(res.f)
    return ContraFunctor(core)


def t(m: LambdaModule) -> CoFunctor:
    """The tensor-embedding T |-> T (x) m, as a degenerate kernel functor."""
    return CoFunctor(zero_morphism(m, zero_module(m.ctx)))


def theta_eval(g_functor: CoFunctor) -> LambdaModule:
    """Evaluation at the ring: the kernel of the copresentation, in Jordan form."""
    k, _ = kernel_module(g_functor.copres)
    return to_jordan_form(k)


def r0(m: LambdaModule) -> CoFunctor:
    """Functor carried by the minimal injective copresentation of m."""
    env0, iota = injective_envelope(m)
    c, proj, _ = cokernel_module(iota)
    env1, iota2 = injective_envelope(c)
    return CoFunctor(iota2.compose(proj))


def j_lambda(g_functor: CoFunctor) -> CoFunctor:
    """Kernel functor of the inclusion of the copresentation's kernel."""
    _, incl = kernel_module(g_functor.copres)
    return CoFunctor(incl)


def j_rho(g_functor: CoFunctor) -> GammaModule:
    """Kernel of the comparison into the copresented-by-envelopes functor.

    The copresentation's kernel embeds in its injective envelope; the
    extension of that embedding across E0 tightens the copresentation and
    the kernel functor of the combined map is returned over the stable
    algebra.
    """
    v = g_functor.copres
    m, incl = kernel_module(v)
    env, iota = injective_envelope(m)
    ext = morphism_through_hom(
        v.src, env, lambda mat: mat @ incl.f, iota.f
    )
    if ext is None:
        raise AssertionError("envelope does not extend across the copresentation")
    big, _, _ = direct_sum_with_maps([v.dst, env])
    combined = LambdaMorphism(
        v.src, big, vstack([v.f, ext.f]), _check=False
    )
    return CoFunctor(combined).gamma_module()


def nat_contra_basis(
    f1: ContraFunctor, f2: ContraFunctor
) -> list[tuple[FpMatrix, ...]]:
    """Basis of natural transformations f1 -> f2.

    Components are indexed by the blocks J_1..J_n; naturality against the
    full hom bases between all blocks is a complete condition because
    every module splits into blocks.
    """
    ctx = f1.ctx
    if ctx != f2.ctx:
        raise ContextMismatch("functors over different rings")
    p = ctx.p
    blocks = [ctx.jordan(a) for a in range(1, ctx.n + 1)]
    d1 = [f1.eval_dim(j) for j in blocks]
    d2 = [f2.eval_dim(j) for j in blocks]
    widths = [x * y for x, y in zip(d2, d1)]
    offsets = np.concatenate([[0], np.cumsum(widths)])
    total = int(offsets[-1])
    if total == 0:
        return []
    rows: list[np.ndarray] = []
    eye = np.eye
    for ia, ja in enumerate(blocks):
        for ib, jb in enumerate(blocks):
            for phi in hom_basis(ja, jb):
                a1 = f1.induced(phi)  # F1(jb) -> F1(ja)
                a2 = f2.induced(phi)
                r = d2[ia] * d1[ib]
                if r == 0:
                    continue
                block = np.zeros((r, total), dtype=np.int64)
                sl_a = slice(int(offsets[ia]), int(offsets[ia]) + widths[ia])
                sl_b = slice(int(offsets[ib]), int(offsets[ib]) + widths[ib])
                block[:, sl_a] = np.kron(eye(d2[ia], dtype=np.int64), a1.a.T)
                block[:, sl_b] = (
                    block[:, sl_b]
                    - np.kron(a2.a, eye(d1[ib], dtype=np.int64))
                ) % p
                rows.append(block % p)
    system = (
        FpMatrix(p, np.vstack(rows))
        if rows
        else FpMatrix(p, np.zeros((0, total), dtype=np.int64))
    )
    ker = kernel_basis(system)
    out = []
    for j in range(ker.dim):
        vec = ker.basis.a[:, j]
        mats = []
        for i in range(len(blocks)):
            seg = vec[int(offsets[i]) : int(offsets[i]) + widths[i]]
            mats.append(FpMatrix(p, seg.reshape(d2[i], d1[i])))
        out.append(tuple(mats))
    return out


def nat_contra_dim(f1: ContraFunctor, f2: ContraFunctor) -> int:
    return len(nat_contra_basis(f1, f2))
