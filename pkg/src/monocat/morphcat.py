"""Categories of module maps: all maps, injective maps, surjective maps.

An object is a single module map f: X -> Y carrying a kind tag:
``"H"`` (no constraint), ``"S"`` (f injective), ``"F"`` (f surjective).
A morphism between objects is a strictly commuting square (sigma1, sigma2).

The injective and surjective worlds are exchanged by taking cokernels and
kernels; both composites are canonically isomorphic to the identity and
the witnesses are produced explicitly (no search).

Four ideals of squares are decided here, each through one designated
right approximation of the target object:

  * ``V`` (on injective objects): squares factoring through sums of
    identity objects (E = E) and socle-type objects (0 -> E);
  * ``U`` (on surjective objects): squares factoring through sums of
    identity objects and collapse objects (E -> 0);
  * ``X`` (on injective objects): squares factoring through injections
    into projective modules;
  * ``Y`` (on surjective objects): squares factoring through surjections
    out of projective modules.

Membership then reduces to one linear solve against the approximation.
"""
from __future__ import annotations

import numpy as np

from .fieldmat import (
    FpMatrix,
    Subspace,
    column_echelon,
    hstack,
    kernel_basis,
    kron,
    solve_matrix,
)
from .modules import (
    ContextMismatch,
    LambdaModule,
    LambdaMorphism,
    RingCtx,
    cokernel_module,
    direct_sum_with_maps,
    hom_basis,
    identity_morphism,
    kernel_module,
    morphism_direct_sum,
    projective_cover,
    zero_module,
    zero_morphism,
)

__all__ = [
    "EpiViolation",
    "IDEALS",
    "KINDS",
    "KindMismatch",
    "MonoViolation",
    "MorphMap",
    "MorphObject",
    "cok",
    "cok_ker_iso",
    "cok_map",
    "factors_through",
    "hom_h",
    "hom_h_matrix",
    "ideal_span_dim",
    "ideal_subspace",
    "identity_map",
    "ker",
    "ker_cok_iso",
    "ker_map",
    "make",
    "right_approximation",
    "zero_map",
]

KINDS = ("H", "S", "F")
IDEALS = ("V", "U", "X", "Y")


class KindMismatch(ValueError):
    """An operation was applied to an object of the wrong kind."""


class MonoViolation(ValueError):
    """A map declared injective is not injective."""


class EpiViolation(ValueError):
    """A map declared surjective is not surjective."""


class MorphObject:
    """One module map together with its kind tag."""

    __slots__ = ("f", "kind")

    def __init__(self, f: LambdaMorphism, kind: str = "H"):
        if kind not in KINDS:
            raise KindMismatch(f"unknown kind {kind!r}; expected one of {KINDS}")
        if kind == "S" and not f.is_injective():
            raise MonoViolation("map declared injective has a kernel")
        if kind == "F" and not f.is_surjective():
            raise EpiViolation("map declared surjective misses part of the target")
        object.__setattr__(self, "f", f)
        object.__setattr__(self, "kind", kind)

    def __setattr__(self, name, value):
        raise AttributeError("MorphObject is immutable")

    @property
    def ctx(self) -> RingCtx:
        return self.f.ctx

    @property
    def src(self) -> LambdaModule:
        return self.f.src

    @property
    def dst(self) -> LambdaModule:
        return self.f.dst

    def key(self) -> tuple:
        return (self.kind, self.f.key())

    def __eq__(self, other) -> bool:
        if not isinstance(other, MorphObject):
            return NotImplemented
        return self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())

    def __repr__(self) -> str:
        return f"MorphObject[{self.kind}]({self.src.dim} -> {self.dst.dim})"


def make(f: LambdaMorphism, kind: str = "H") -> MorphObject:
    """Wrap a module map as a category object, validating the kind."""
    return MorphObject(f, kind)


class MorphMap:
    """A commuting square between two objects."""

    __slots__ = ("src", "dst", "sigma1", "sigma2")

    def __init__(
        self,
        src: MorphObject,
        dst: MorphObject,
        sigma1: LambdaMorphism,
        sigma2: LambdaMorphism,
        _check: bool = True,
    ):
        if src.ctx != dst.ctx:
            raise ContextMismatch("square endpoints live over different rings")
        if (sigma1.src.key(), sigma1.dst.key()) != (src.src.key(), dst.src.key()):
            raise ValueError("sigma1 endpoints do not match the objects")
        if (sigma2.src.key(), sigma2.dst.key()) != (src.dst.key(), dst.dst.key()):
            raise ValueError("sigma2 endpoints do not match the objects")
        if _check and (sigma2.f @ src.f.f) != (dst.f.f @ sigma1.f):
            raise ValueError("square does not commute")
        object.__setattr__(self, "src", src)
        object.__setattr__(self, "dst", dst)
        object.__setattr__(self, "sigma1", sigma1)
        object.__setattr__(self, "sigma2", sigma2)

    def __setattr__(self, name, value):
        raise AttributeError("MorphMap is immutable")

    @property
    def ctx(self) -> RingCtx:
        return self.src.ctx

    def compose(self, other: "MorphMap") -> "MorphMap":
        """self after other."""
        if other.dst.key() != self.src.key():
            raise ValueError("square composition mismatch")
        return MorphMap(
            other.src,
            self.dst,
            self.sigma1.compose(other.sigma1),
            self.sigma2.compose(other.sigma2),
            _check=False,
        )

    def __add__(self, other: "MorphMap") -> "MorphMap":
        if (self.src.key(), self.dst.key()) != (other.src.key(), other.dst.key()):
            raise ValueError("sum of squares with different endpoints")
        return MorphMap(
            self.src, self.dst, self.sigma1 + other.sigma1,
            self.sigma2 + other.sigma2, _check=False,
        )

    def scale(self, c: int) -> "MorphMap":
        return MorphMap(
            self.src, self.dst, self.sigma1.scale(c), self.sigma2.scale(c),
            _check=False,
        )

    def is_zero(self) -> bool:
        return self.sigma1.is_zero() and self.sigma2.is_zero()

    def is_isomorphism(self) -> bool:
        return (
            self.sigma1.is_injective()
            and self.sigma1.is_surjective()
            and self.sigma2.is_injective()
            and self.sigma2.is_surjective()
        )

    def flatten(self) -> np.ndarray:
        return np.concatenate([self.sigma1.flatten(), self.sigma2.flatten()])

    def key(self) -> tuple:
        return (self.src.key(), self.dst.key(), self.sigma1.key(), self.sigma2.key())

    def __eq__(self, other) -> bool:
        if not isinstance(other, MorphMap):
            return NotImplemented
        return self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())

    def __repr__(self) -> str:
        return f"MorphMap({self.src!r} -> {self.dst!r})"


def identity_map(obj: MorphObject) -> MorphMap:
    return MorphMap(
        obj, obj, identity_morphism(obj.src), identity_morphism(obj.dst),
        _check=False,
    )


def zero_map(o1: MorphObject, o2: MorphObject) -> MorphMap:
    return MorphMap(
        o1, o2, zero_morphism(o1.src, o2.src), zero_morphism(o1.dst, o2.dst),
        _check=False,
    )


def object_direct_sum(
    objs: list[MorphObject], kind: str
) -> tuple[MorphObject, list[MorphMap], list[MorphMap]]:
    """Direct sum of objects with inclusion and projection squares."""
    total_f = morphism_direct_sum([o.f for o in objs])
    total = MorphObject(total_f, kind)
    _, src_incs, src_prjs = direct_sum_with_maps([o.src for o in objs])
    _, dst_incs, dst_prjs = direct_sum_with_maps([o.dst for o in objs])
    incs = [
        MorphMap(o, total, si, di, _check=False)
        for o, si, di in zip(objs, src_incs, dst_incs)
    ]
    prjs = [
        MorphMap(total, o, sp, dp, _check=False)
        for o, sp, dp in zip(objs, src_prjs, dst_prjs)
    ]
    return total, incs, prjs


def cok(o: MorphObject) -> MorphObject:
    """Send an injective object (A -> B) to the surjective (B -> B/A)."""
    if o.kind != "S":
        raise KindMismatch("cok expects an injective-kind object")
    _, proj, _ = cokernel_module(o.f)
    return MorphObject(proj, "F")


def cok_map(m: MorphMap) -> MorphMap:
    """Induced square between the cokernel objects."""
    src_c = cok(m.src)
    dst_c = cok(m.dst)
    # sigma2 preserves images, so it descends to quotient coordinates
    _, _, section = cokernel_module(m.src.f)
    induced = dst_c.f.f @ (m.sigma2.f @ section)
    bar = LambdaMorphism(src_c.dst, dst_c.dst, induced, _check=False)
    return MorphMap(src_c, dst_c, m.sigma2, bar)


def ker(o: MorphObject) -> MorphObject:
    """Send a surjective object (B -> C) to the injective (ker -> B)."""
    if o.kind != "F":
        raise KindMismatch("ker expects a surjective-kind object")
    _, incl = kernel_module(o.f)
    return MorphObject(incl, "S")


def ker_map(m: MorphMap) -> MorphMap:
    """Induced square between the kernel objects."""
    src_k = ker(m.src)
    dst_k = ker(m.dst)
    cols = m.sigma1.f @ src_k.f.f
    restricted = solve_matrix(dst_k.f.f, cols)
    if restricted is None:
        raise AssertionError("sigma1 does not preserve kernels")
    top = LambdaMorphism(src_k.src, dst_k.src, restricted, _check=False)
    return MorphMap(src_k, dst_k, top, m.sigma1)


def ker_cok_iso(o: MorphObject) -> MorphMap:
    """Canonical isomorphism (A -> B) => ker(cok(A -> B)) for injective o."""
    kc = ker(cok(o))
    core = solve_matrix(kc.f.f, o.f.f)
    if core is None:
        raise AssertionError("image does not land in the kernel of the quotient")
    top = LambdaMorphism(o.src, kc.src, core, _check=False)
    out = MorphMap(o, kc, top, identity_morphism(o.dst))
    if not out.is_isomorphism():
        raise AssertionError("kernel-of-cokernel witness is not invertible")
    return out


def cok_ker_iso(o: MorphObject) -> MorphMap:
    """Canonical isomorphism cok(ker(B -> C)) => (B -> C) for surjective o."""
    k = ker(o)
    ck = cok(k)
    _, _, section = cokernel_module(k.f)
    bottom = LambdaMorphism(ck.dst, o.dst, o.f.f @ section, _check=False)
    out = MorphMap(ck, o, identity_morphism(o.src), bottom)
    if not out.is_isomorphism():
        raise AssertionError("cokernel-of-kernel witness is not invertible")
    return out


def hom_h(o1: MorphObject, o2: MorphObject) -> list[MorphMap]:
    """Basis of the space of commuting squares from o1 to o2.

    Coordinates run over the hom bases of the two component spaces; the
    commuting condition is one linear system and the returned squares
    correspond to the canonical kernel basis of that system.
    """
    if o1.ctx != o2.ctx:
        raise ContextMismatch("objects over different rings")
    ctx = o1.ctx
    tops = hom_basis(o1.src, o2.src)
    bots = hom_basis(o1.dst, o2.dst)
    a, b = len(tops), len(bots)
    rows = o2.dst.dim * o1.src.dim
    cols = []
    for g in tops:
        cols.append((-(o2.f.f @ g.f)).reshape_vec())
    for h in bots:
        cols.append((h.f @ o1.f.f).reshape_vec())
    if a + b == 0:
        return []
    constraint = FpMatrix(
        ctx.p,
        np.column_stack(cols) if cols else np.zeros((rows, 0), dtype=np.int64),
    )
    kerb = kernel_basis(constraint)
    out = []
    for j in range(kerb.dim):
        coeffs = kerb.basis.a[:, j]
        s1 = zero_morphism(o1.src, o2.src)
        for i in range(a):
            if coeffs[i]:
                s1 = s1 + tops[i].scale(int(coeffs[i]))
        s2 = zero_morphism(o1.dst, o2.dst)
        for i in range(b):
            if coeffs[a + i]:
                s2 = s2 + bots[i].scale(int(coeffs[a + i]))
        out.append(MorphMap(o1, o2, s1, s2, _check=False))
    return out


def hom_h_matrix(o1: MorphObject, o2: MorphObject) -> tuple[list[MorphMap], FpMatrix]:
    """Square basis together with its flattened column matrix."""
    basis = hom_h(o1, o2)
    p = o1.ctx.p
    rows = o1.src.dim * o2.src.dim + o1.dst.dim * o2.dst.dim
    if not basis:
        return [], FpMatrix(p, np.zeros((rows, 0), dtype=np.int64))
    return basis, FpMatrix(p, np.column_stack([m.flatten() for m in basis]))


def _pullback_with_cover(
    f: LambdaMorphism,
) -> tuple[LambdaModule, LambdaMorphism, LambdaMorphism, LambdaMorphism]:
    """Pullback of (f: A -> B) against the projective cover of B.

    Returns (Q, to_A, to_P, pi) where Q sits inside A + P_B as the kernel
    of the difference map and pi is the cover P_B ->> B.
    """
    a_mod, b_mod = f.src, f.dst
    cover, pi = projective_cover(b_mod)
    diff = hstack([f.f, -pi.f])
    big, incs, prjs = direct_sum_with_maps([a_mod, cover])
    d = LambdaMorphism(big, b_mod, diff, _check=False)
    q, incl = kernel_module(d)
    to_a = prjs[0].compose(incl)
    to_p = prjs[1].compose(incl)
    return q, to_a, to_p, pi


def right_approximation(
    ideal: str, target: MorphObject
) -> tuple[MorphObject, MorphMap]:
    """The designated approximation object with its map onto the target.

    Every square from an ideal generator into the target factors through
    the returned map, so ideal membership reduces to one linear solve.
    """
    if ideal not in IDEALS:
        raise KindMismatch(f"unknown ideal {ideal!r}; expected one of {IDEALS}")
    ctx = target.ctx
    if ideal in ("V", "X") and target.kind != "S":
        raise KindMismatch(f"ideal {ideal} applies to injective-kind objects")
    if ideal in ("U", "Y") and target.kind != "F":
        raise KindMismatch(f"ideal {ideal} applies to surjective-kind objects")
    f = target.f
    a_mod, b_mod = f.src, f.dst
    zero = zero_module(ctx)

    if ideal == "V":
        first = MorphObject(identity_morphism(a_mod), "S")
        second = MorphObject(LambdaMorphism(
            zero, b_mod, ctx.field.zeros(b_mod.dim, 0), _check=False), "S")
        app, incs, _ = object_direct_sum([first, second], "S")
        m1 = MorphMap(first, target, identity_morphism(a_mod), f, _check=False)
        m2 = MorphMap(
            second, target, zero_morphism(zero, a_mod),
            identity_morphism(b_mod), _check=False,
        )
    elif ideal == "U":
        kmod, incl = kernel_module(f)
        first = MorphObject(identity_morphism(a_mod), "F")
        second = MorphObject(LambdaMorphism(
            kmod, zero, ctx.field.zeros(0, kmod.dim), _check=False), "F")
        app, incs, _ = object_direct_sum([first, second], "F")
        m1 = MorphMap(first, target, identity_morphism(a_mod), f, _check=False)
        m2 = MorphMap(
            second, target, incl, zero_morphism(zero, b_mod), _check=False
        )
    elif ideal == "X":
        q, to_a, to_p, pi = _pullback_with_cover(f)
        first = MorphObject(identity_morphism(a_mod), "S")
        second = MorphObject(to_p, "S")
        app, incs, _ = object_direct_sum([first, second], "S")
        m1 = MorphMap(first, target, identity_morphism(a_mod), f, _check=False)
        m2 = MorphMap(second, target, to_a, pi)
    else:  # Y
        cover, pi = projective_cover(a_mod)
        composite = f.compose(pi)
        first = MorphObject(identity_morphism(a_mod), "F")
        second = MorphObject(composite, "F")
        app, incs, _ = object_direct_sum([first, second], "F")
        m1 = MorphMap(first, target, identity_morphism(a_mod), f, _check=False)
        m2 = MorphMap(second, target, pi, identity_morphism(b_mod), _check=False)

    sigma1 = hstack([m1.sigma1.f, m2.sigma1.f])
    sigma2 = hstack([m1.sigma2.f, m2.sigma2.f])
    app_map = MorphMap(
        app,
        target,
        LambdaMorphism(app.src, target.src, sigma1, _check=False),
        LambdaMorphism(app.dst, target.dst, sigma2, _check=False),
    )
    return app, app_map


def factors_through(ideal: str, h: MorphMap) -> MorphMap | None:
    """Witness w with app_map . w = h through the target's approximation,
    or None when h does not lie in the ideal."""
    app, app_map = right_approximation(ideal, h.dst)
    basis, _ = hom_h_matrix(h.src, app)
    if not basis:
        return zero_map(h.src, app) if h.is_zero() else None
    composed = np.column_stack([app_map.compose(w).flatten() for w in basis])
    sol = solve_matrix(
        FpMatrix(h.ctx.p, composed),
        FpMatrix(h.ctx.p, h.flatten().reshape(-1, 1)),
    )
    if sol is None:
        return None
    witness = zero_map(h.src, app)
    for i, c in enumerate(sol.a[:, 0]):
        if c:
            witness = witness + basis[i].scale(int(c))
    recomposed = app_map.compose(witness)
    if recomposed.flatten().tolist() != h.flatten().tolist():
        raise AssertionError("witness does not recompose to the tested square")
    return witness


def ideal_subspace(ideal: str, o1: MorphObject, o2: MorphObject) -> Subspace:
    """The squares o1 -> o2 lying in the ideal, in flattened coordinates.

    Flattened coordinates are those of :meth:`MorphMap.flatten`; the
    result is canonical (echelonized), so it can be compared for equality
    or containment against any other subspace of squares.
    """
    app, app_map = right_approximation(ideal, o2)
    basis, _ = hom_h_matrix(o1, app)
    total = o2.src.dim * o1.src.dim + o2.dst.dim * o1.dst.dim
    p = o1.ctx.p
    if not basis:
        return Subspace(p, total, FpMatrix(p, np.zeros((total, 0), dtype=np.int64)))
    composed = np.column_stack([app_map.compose(w).flatten() for w in basis])
    ech, _, _ = column_echelon(FpMatrix(p, composed))
    return Subspace(p, total, ech)


def ideal_span_dim(ideal: str, o1: MorphObject, o2: MorphObject) -> int:
    """Dimension of the subspace of squares o1 -> o2 lying in the ideal."""
    return ideal_subspace(ideal, o1, o2).dim
