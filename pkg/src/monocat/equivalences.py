"""Bridges between map categories and modules over the stable algebra.

Four assignments send a single module map to a stable-algebra module:

* ``psi``: an injective map, through the cokernel of its quotient;
* ``phi``: a surjective map, through the kernel of its kernel inclusion;
* ``theta``: an injective map, through a cover-enlarged presentation;
* ``im_functor``: a surjective map, through an envelope-enlarged
  copresentation.

Each comes with an action on commuting squares (``*_on_map``) and a
packaged linear map on whole Hom spaces (``*_hom_map``), whose rank and
kernel measure fullness and the ideal of squares killed.  ``psi_inverse``
rebuilds an injective map from a module, ``xi`` composes the round trip
into the covariant side, and ``rho_check`` / ``tor_compare`` /
``auto_equiv`` package the dualities built from these pieces.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .fieldmat import (
    FpMatrix,
    _EchelonAccumulator,
    hstack,
    kernel_basis,
    rank,
    solve_matrix,
    vstack,
)
from .modules import (
    LambdaModule,
    LambdaMorphism,
    RingCtx,
    cokernel_module,
    direct_sum,
    direct_sum_with_maps,
    hom_basis,
    hom_coordinates,
    hom_matrix,
    injective_envelope,
    kernel_module,
    projective_cover,
    reversal_matrix,
    stable_class_coords,
    tensor_right_map,
    tor1,
    transpose,
    zero_module,
    zero_morphism,
)
from .morphcat import KindMismatch, MorphMap, MorphObject, cok, cok_map, hom_h, ker_map, make
from .functors import CoFunctor, ContraFunctor, morphism_through_hom
from .stable_algebra import (
    GammaModule,
    GammaModuleMap,
    gamma_algebra,
    gamma_hom_basis,
    iso_test,
    representable_co,
    representable_contra,
)

__all__ = [
    "InducedHomMap",
    "auto_equiv",
    "im_functor",
    "im_hom_map",
    "im_on_map",
    "phi",
    "phi_hom_map",
    "phi_on_map",
    "psi",
    "psi_hom_map",
    "psi_inverse",
    "psi_on_map",
    "rho_check",
    "theta",
    "theta_hom_map",
    "theta_on_map",
    "tor_compare",
    "xi",
]


def _require_kind(o: MorphObject, kind: str, who: str) -> None:
    if o.kind != kind:
        raise KindMismatch(f"{who} expects a {kind!r}-kind object, got {o.kind!r}")


# ---------------------------------------------------------------------------
# the four object assignments, with their raw functor carriers
# ---------------------------------------------------------------------------


def _psi_contra(s: MorphObject) -> ContraFunctor:
    _require_kind(s, "S", "psi")
    _, q, _ = cokernel_module(s.f)
    return ContraFunctor(q)


def psi(s: MorphObject) -> GammaModule:
    """Quotient-of-maps module of an injective map (contravariant)."""
    return _psi_contra(s).gamma_module()


def _phi_co(o: MorphObject) -> CoFunctor:
    _require_kind(o, "F", "phi")
    _, incl = kernel_module(o.f)
    return CoFunctor(incl)


def phi(o: MorphObject) -> GammaModule:
    """Kernel-of-tensors module of a surjective map (covariant)."""
    return _phi_co(o).gamma_module()


def _theta_contra(s: MorphObject) -> ContraFunctor:
    _require_kind(s, "S", "theta")
    z, q, _ = cokernel_module(s.f)
    cover, pi = projective_cover(z)
    d1 = morphism_through_hom(cover, s.f.dst, lambda mat: q.f @ mat, pi.f)
    if d1 is None:
        raise AssertionError("cover does not lift through the quotient")
    big, _, _ = direct_sum_with_maps([cover, s.f.src])
    combined = LambdaMorphism(big, s.f.dst, hstack([d1.f, s.f.f]), _check=False)
    return ContraFunctor(combined)


def theta(s: MorphObject) -> GammaModule:
    """Cover-enlarged quotient module of an injective map (contravariant).

    Vanishes exactly on maps into projective modules: enlarging the
    presentation by a lifted cover makes it split in that case.
    """
    return _theta_contra(s).gamma_module()


def _im_co(o: MorphObject) -> CoFunctor:
    _require_kind(o, "F", "im_functor")
    x, kincl = kernel_module(o.f)
    env, iota = injective_envelope(x)
    ext = morphism_through_hom(o.f.src, env, lambda mat: mat @ kincl.f, iota.f)
    if ext is None:
        raise AssertionError("envelope does not extend across the kernel inclusion")
    big, _, _ = direct_sum_with_maps([o.f.dst, env])
    combined = LambdaMorphism(o.f.src, big, vstack([o.f.f, ext.f]), _check=False)
    return CoFunctor(combined)


def im_functor(o: MorphObject) -> GammaModule:
    """Envelope-enlarged kernel module of a surjective map (covariant).

    Vanishes exactly on maps out of projective modules.
    """
    return _im_co(o).gamma_module()


# ---------------------------------------------------------------------------
# actions on commuting squares
# ---------------------------------------------------------------------------


def _postcompose_coords(
    t_mod: LambdaModule, sigma: LambdaMorphism
) -> FpMatrix:
    """Matrix of (sigma . -): Hom(t, sigma.src) -> Hom(t, sigma.dst) in hom bases."""
    ctx = t_mod.ctx
    target = hom_matrix(t_mod, sigma.dst)
    basis = hom_basis(t_mod, sigma.src)
    if not basis:
        return ctx.field.zeros(target.cols, 0)
    stacked = np.column_stack([(sigma.f @ h.f).reshape_vec() for h in basis])
    coords = solve_matrix(target, FpMatrix(ctx.p, stacked))
    if coords is None:
        raise AssertionError("postcomposition escapes the hom space")
    return coords


def _contra_square_mats(
    f1: ContraFunctor, f2: ContraFunctor, sigma: LambdaMorphism
) -> tuple[FpMatrix, ...]:
    ctx = f1.ctx
    mats = []
    for a in ctx.stable_sizes():
        ja = ctx.jordan(a)
        _, _, section = f1.eval_data(ja)
        _, proj, _ = f2.eval_data(ja)
        mats.append(proj @ (_postcompose_coords(ja, sigma) @ section))
    return tuple(mats)


def _co_square_mats(
    g1: CoFunctor, g2: CoFunctor, sigma: LambdaMorphism
) -> tuple[FpMatrix, ...]:
    ctx = g1.ctx
    mats = []
    for a in ctx.stable_sizes():
        ja = ctx.jordan(a)
        k1 = g1.kernel_at(ja)
        k2 = g2.kernel_at(ja)
        restricted = solve_matrix(k2, tensor_right_map(ja, sigma) @ k1)
        if restricted is None:
            raise AssertionError("square does not restrict between the kernels")
        mats.append(restricted)
    return tuple(mats)


def psi_on_map(m: MorphMap) -> GammaModuleMap:
    """Induced module map: postcompose with the square's cokernel component."""
    f1, f2 = _psi_contra(m.src), _psi_contra(m.dst)
    sigma3 = cok_map(m).sigma2
    return GammaModuleMap(
        f1.gamma_module(), f2.gamma_module(), _contra_square_mats(f1, f2, sigma3)
    )


def theta_on_map(m: MorphMap) -> GammaModuleMap:
    """Induced module map: postcompose with the square's target component."""
    f1, f2 = _theta_contra(m.src), _theta_contra(m.dst)
    return GammaModuleMap(
        f1.gamma_module(), f2.gamma_module(), _contra_square_mats(f1, f2, m.sigma2)
    )


def phi_on_map(m: MorphMap) -> GammaModuleMap:
    """Induced module map: restrict the square's kernel component."""
    g1, g2 = _phi_co(m.src), _phi_co(m.dst)
    kappa = ker_map(m).sigma1
    return GammaModuleMap(
        g1.gamma_module(), g2.gamma_module(), _co_square_mats(g1, g2, kappa)
    )


def im_on_map(m: MorphMap) -> GammaModuleMap:
    """Induced module map: restrict the square's source component."""
    g1, g2 = _im_co(m.src), _im_co(m.dst)
    return GammaModuleMap(
        g1.gamma_module(), g2.gamma_module(), _co_square_mats(g1, g2, m.sigma1)
    )


# ---------------------------------------------------------------------------
# whole Hom spaces at once
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class InducedHomMap:
    """The linear map Hom(squares) -> Hom(stable-algebra modules).

    ``matrix`` holds, column by column, the coordinates of the image of
    each square-basis element in ``dst_basis``.  Its rank against
    ``len(dst_basis)`` measures fullness; its kernel is the subspace of
    squares killed.
    """

    src_basis: list[MorphMap]
    src_module: GammaModule
    dst_module: GammaModule
    dst_basis: list[GammaModuleMap]
    images: list[GammaModuleMap]
    matrix: FpMatrix

    @property
    def rank(self) -> int:
        return rank(self.matrix)

    @property
    def kernel_dim(self) -> int:
        return len(self.src_basis) - self.rank

    @property
    def is_surjective(self) -> bool:
        return self.rank == len(self.dst_basis)

    def kernel_squares(self) -> list[MorphMap]:
        """A basis of the squares mapped to zero."""
        ker = kernel_basis(self.matrix).basis
        out = []
        for j in range(ker.cols):
            sq = None
            for i, c in enumerate(ker.a[:, j]):
                if c:
                    term = self.src_basis[i].scale(int(c))
                    sq = term if sq is None else sq + term
            if sq is not None:
                out.append(sq)
        return out


def _induced_hom_map(
    s1: MorphObject,
    s2: MorphObject,
    carrier,
    square_mats,
    sigma_of,
) -> InducedHomMap:
    c1, c2 = carrier(s1), carrier(s2)
    g1, g2 = c1.gamma_module(), c2.gamma_module()
    src_basis = hom_h(s1, s2)
    dst_basis = gamma_hom_basis(g1, g2)
    p = s1.ctx.p
    images = [
        GammaModuleMap(g1, g2, square_mats(c1, c2, sigma_of(b))) for b in src_basis
    ]
    if dst_basis:
        target = FpMatrix(p, np.column_stack([m.flatten() for m in dst_basis]))
        if images:
            stacked = FpMatrix(p, np.column_stack([m.flatten() for m in images]))
            matrix = solve_matrix(target, stacked)
            if matrix is None:
                raise AssertionError("an induced map escapes the hom space")
        else:
            matrix = FpMatrix(p, np.zeros((len(dst_basis), 0), dtype=np.int64))
    else:
        for m in images:
            if not m.is_zero():
                raise AssertionError("nonzero image into a zero hom space")
        matrix = FpMatrix(p, np.zeros((0, len(src_basis)), dtype=np.int64))
    return InducedHomMap(src_basis, g1, g2, dst_basis, images, matrix)


def psi_hom_map(s1: MorphObject, s2: MorphObject) -> InducedHomMap:
    return _induced_hom_map(
        s1, s2, _psi_contra, _contra_square_mats, lambda b: cok_map(b).sigma2
    )


def theta_hom_map(s1: MorphObject, s2: MorphObject) -> InducedHomMap:
    return _induced_hom_map(
        s1, s2, _theta_contra, _contra_square_mats, lambda b: b.sigma2
    )


def phi_hom_map(o1: MorphObject, o2: MorphObject) -> InducedHomMap:
    return _induced_hom_map(
        o1, o2, _phi_co, _co_square_mats, lambda b: ker_map(b).sigma1
    )


def im_hom_map(o1: MorphObject, o2: MorphObject) -> InducedHomMap:
    return _induced_hom_map(
        o1, o2, _im_co, _co_square_mats, lambda b: b.sigma1
    )


# ---------------------------------------------------------------------------
# rebuilding an injective map from a module
# ---------------------------------------------------------------------------


def psi_inverse(g_mod: GammaModule, generators: str = "reduced") -> MorphObject:
    """An injective map whose ``psi`` image is isomorphic to ``g_mod``.

    The target of the rebuilt quotient is L = sum of J_a copies, one per
    value-space basis vector.  Maps J_b -> L evaluate into the value
    space at b through the stable class of each component; the kernel of
    that evaluation is computed at every block (the top block evaluates
    to zero, so everything from it is kernel).  Kernel elements assemble
    a map onto L whose module kernel, included in its source, is the
    result.

    ``generators`` picks how many kernel elements carry the assembly:
    ``"full"`` uses one summand per kernel basis vector at every block;
    ``"reduced"`` (default) keeps only elements that grow the span of the
    kernel subfunctor, closing under precomposition level by level.  Both
    satisfy the same round-trip; ``"full"`` matches the one-summand-per-
    kernel-dimension bookkeeping at the cost of a larger source.
    """
    if g_mod.variance != "contra":
        raise ValueError("psi_inverse expects a contravariant module")
    if generators not in ("reduced", "full"):
        raise ValueError(f"unknown generator policy {generators!r}")
    alg = g_mod.algebra
    ctx: RingCtx = alg.ctx
    p = ctx.p
    if g_mod.total_dim == 0:
        z = zero_module(ctx)
        return make(zero_morphism(z, z), "S")

    summands = [
        (a, i) for a in ctx.stable_sizes() for i in range(g_mod.dims[a - 1])
    ]
    big_l, _, prjs = direct_sum_with_maps([ctx.jordan(a) for a, _ in summands])

    def eval_matrix(b: int) -> FpMatrix:
        jb = ctx.jordan(b)
        basis = hom_basis(jb, big_l)
        vdim = g_mod.dims[b - 1] if b < ctx.n else 0
        cols = np.zeros((vdim, len(basis)), dtype=np.int64)
        if vdim:
            for j, h in enumerate(basis):
                acc = np.zeros(vdim, dtype=np.int64)
                for idx, (a, i) in enumerate(summands):
                    comp = prjs[idx].compose(h)
                    coords = stable_class_coords(jb, ctx.jordan(a), comp)
                    for k, ck in zip(alg.by_pair[(b, a)], coords):
                        if ck:
                            acc = (acc + int(ck) * g_mod.actions[k].a[:, i]) % p
                cols[:, j] = acc
        return FpMatrix(p, cols)

    bases = {b: hom_basis(ctx.jordan(b), big_l) for b in range(1, ctx.n + 1)}
    selected: list[tuple[int, np.ndarray]] = []
    if generators == "full":
        for b in range(1, ctx.n + 1):
            kb = kernel_basis(eval_matrix(b)).basis
            for j in range(kb.cols):
                selected.append((b, kb.a[:, j]))
    else:
        accs = {
            b: _EchelonAccumulator(p, len(bases[b])) for b in range(1, ctx.n + 1)
        }
        for b in range(1, ctx.n + 1):
            jb = ctx.jordan(b)
            kb = kernel_basis(eval_matrix(b)).basis
            for j in range(kb.cols):
                vec = kb.a[:, j]
                if not accs[b].add(vec):
                    continue
                selected.append((b, vec))
                mat = _combine(p, bases[b], vec)
                for c in range(b, ctx.n + 1):
                    jc = ctx.jordan(c)
                    for gmap in hom_basis(jc, jb):
                        comp = LambdaMorphism(
                            jc, big_l, mat @ gmap.f, _check=False
                        )
                        accs[c].add(hom_coordinates(jc, big_l, comp))

    cols = [_combine(p, bases[b], vec) for b, vec in selected]
    e0 = direct_sum([ctx.jordan(b) for b, _ in selected])
    u = LambdaMorphism(e0, big_l, hstack(cols), _check=False)
    if not u.is_surjective():
        raise AssertionError("kernel elements do not assemble onto the target")
    _, incl = kernel_module(u)
    return make(incl, "S")


def _combine(p: int, basis: list[LambdaMorphism], coords: np.ndarray) -> FpMatrix:
    out = basis[0].f.a * 0
    for c, h in zip(coords, basis):
        if c:
            out = (out + int(c) * h.f.a) % p
    return FpMatrix(p, out)


# ---------------------------------------------------------------------------
# composite dualities
# ---------------------------------------------------------------------------


def xi(g_mod: GammaModule, generators: str = "reduced") -> GammaModule:
    """Contravariant-to-covariant switch: rebuild, take cokernel, apply phi."""
    return phi(cok(psi_inverse(g_mod, generators)))


def rho_check(m: LambdaModule, seed: int = 0) -> bool:
    """Compare xi of the contravariant representable at m with the
    covariant representable at the transpose of m."""
    alg = gamma_algebra(m.ctx)
    left = xi(representable_contra(alg, m))
    right = representable_co(alg, transpose(m))
    return iso_test(left, right, seed=seed) == "iso"


def tor_compare(z: LambdaModule, seed: int = 0) -> bool:
    """Check xi of the representable at z against the torsion functor of z.

    Dimensions are compared against the direct torsion computation, then
    the full module structures are compared against the kernel module of
    the cover's surjection.
    """
    ctx = z.ctx
    alg = gamma_algebra(ctx)
    left = xi(representable_contra(alg, z))
    for b in ctx.stable_sizes():
        want, _ = tor1(ctx.jordan(b), z)
        if left.dims[b - 1] != want:
            return False
    _, pi = projective_cover(z)
    right = phi(make(pi, "F"))
    return iso_test(left, right, seed=seed) == "iso"


def auto_equiv(g_mod: GammaModule) -> GammaModule:
    """Contravariant self-map: xi, then transport back along self-duality.

    The underlying ring is self-dual block by block; pulling the covariant
    result back along that duality (reversal-conjugated transposes of
    representatives) lands in contravariant modules again.
    """
    if g_mod.variance != "contra":
        raise ValueError("auto_equiv expects a contravariant module")
    alg = g_mod.algebra
    ctx = alg.ctx
    p = ctx.p
    h_mod = xi(g_mod)
    actions = []
    for e in alg.elements:
        ja, jb = ctx.jordan(e.src), ctx.jordan(e.dst)
        dual_mat = (
            reversal_matrix(p, e.src) @ e.rep.f.T @ reversal_matrix(p, e.dst)
        )
        dual_map = LambdaMorphism(jb, ja, dual_mat, _check=False)
        coords = stable_class_coords(jb, ja, dual_map)
        shape = (h_mod.dims[e.src - 1], h_mod.dims[e.dst - 1])
        acc = np.zeros(shape, dtype=np.int64)
        for k, ck in zip(alg.by_pair[(e.dst, e.src)], coords):
            if ck:
                acc = (acc + int(ck) * h_mod.actions[k].a) % p
        actions.append(FpMatrix(p, acc))
    return GammaModule(alg, "contra", h_mod.dims, tuple(actions))
