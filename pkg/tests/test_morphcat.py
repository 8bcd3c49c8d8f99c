"""Tests for the categories of injective and surjective module maps."""
import itertools

import numpy as np
import pytest

from monocat.fieldmat import FpMatrix, rank
from monocat.modules import (
    LambdaMorphism,
    RingCtx,
    hom_basis,
    identity_morphism,
    is_isomorphic,
    jordan_type,
    kernel_module,
    module_from_blocks,
    projective_cover,
    zero_module,
    zero_morphism,
)
from monocat.morphcat import (
    EpiViolation,
    KindMismatch,
    MonoViolation,
    MorphMap,
    cok,
    cok_ker_iso,
    cok_map,
    factors_through,
    hom_h,
    ideal_span_dim,
    ideal_subspace,
    identity_map,
    ker,
    ker_cok_iso,
    ker_map,
    make,
    object_direct_sum,
    right_approximation,
    zero_map,
)


def ctx3():
    return RingCtx(2, 3)


def socle_mono(ctx):
    """J_1 into J_2 hitting the socle."""
    f = LambdaMorphism(
        ctx.jordan(1), ctx.jordan(2), ctx.field.matrix([[0], [1]])
    )
    return make(f, "S")


def top_epi(ctx):
    """J_2 onto J_1 killing the socle."""
    f = LambdaMorphism(
        ctx.jordan(2), ctx.jordan(1), ctx.field.matrix([[1, 0]])
    )
    return make(f, "F")


# --- kinds and validation -----------------------------------------------------


def test_kind_validation():
    ctx = ctx3()
    epi = top_epi(ctx).f
    with pytest.raises(MonoViolation):
        make(epi, "S")
    mono = socle_mono(ctx).f
    with pytest.raises(EpiViolation):
        make(mono, "F")
    with pytest.raises(KindMismatch):
        make(mono, "Q")
    # H accepts anything
    assert make(epi, "H").kind == "H"


def test_square_must_commute():
    ctx = ctx3()
    s = socle_mono(ctx)
    with pytest.raises(ValueError):
        MorphMap(
            s,
            s,
            identity_morphism(s.src),
            zero_morphism(s.dst, s.dst),
        )


def test_square_algebra():
    ctx = ctx3()
    s = socle_mono(ctx)
    i = identity_map(s)
    z = zero_map(s, s)
    assert i.compose(i) == i
    assert (i + z) == i
    assert i.scale(0) == z
    assert z.is_zero() and not i.is_zero()
    assert i.is_isomorphism() and not z.is_isomorphism()
    assert len(i.flatten()) == s.src.dim * s.src.dim + s.dst.dim * s.dst.dim


def test_object_direct_sum_identities():
    ctx = ctx3()
    s1, s2 = socle_mono(ctx), make(identity_morphism(ctx.jordan(2)), "S")
    total, incs, prjs = object_direct_sum([s1, s2], "S")
    assert total.kind == "S"
    assert total.src.dim == s1.src.dim + s2.src.dim
    for inc, prj in zip(incs, prjs):
        assert prj.compose(inc).is_isomorphism()


# --- kernel / cokernel switch ---------------------------------------------------


def test_cok_of_zero_inclusion_is_identity_like():
    ctx = ctx3()
    m = module_from_blocks(ctx, [2, 1])
    z = make(zero_morphism(zero_module(ctx), m), "S")
    c = cok(z)
    assert c.kind == "F"
    assert is_isomorphic(c.dst, m)
    assert c.f.is_surjective() and c.f.is_injective()


def test_cok_and_ker_shapes():
    ctx = ctx3()
    s = socle_mono(ctx)
    c = cok(s)
    assert c.kind == "F"
    assert jordan_type(c.dst).blocks == (1,)
    o = top_epi(ctx)
    k = ker(o)
    assert k.kind == "S"
    assert jordan_type(k.src).blocks == (1,)
    with pytest.raises(KindMismatch):
        cok(o)
    with pytest.raises(KindMismatch):
        ker(s)


def test_round_trip_isos():
    ctx = ctx3()
    for s in [socle_mono(ctx), make(identity_morphism(ctx.jordan(2)), "S")]:
        w = ker_cok_iso(s)
        assert w.src == s and w.is_isomorphism()
    for o in [top_epi(ctx), make(identity_morphism(ctx.jordan(2)), "F")]:
        w = cok_ker_iso(o)
        assert w.dst == o and w.is_isomorphism()


def test_cok_map_and_ker_map_are_functorial():
    ctx = ctx3()
    s1 = socle_mono(ctx)
    s2 = make(identity_morphism(ctx.jordan(2)), "S")
    for m in hom_h(s1, s2):
        cm = cok_map(m)
        assert cm.src == cok(s1) and cm.dst == cok(s2)
    o1 = top_epi(ctx)
    o2 = make(identity_morphism(ctx.jordan(1)), "F")
    for m in hom_h(o1, o2):
        km = ker_map(m)
        assert km.src == ker(o1) and km.dst == ker(o2)


# --- hom spaces of squares ------------------------------------------------------


def brute_square_dim(o1, o2):
    """Independent recomputation: solve the commuting condition directly."""
    ctx = o1.ctx
    p = ctx.p
    h1 = hom_basis(o1.src, o2.src)
    h2 = hom_basis(o1.dst, o2.dst)
    if not h1 and not h2:
        return 0
    rows = []
    for a in h1:
        rows.append((o2.f.f @ a.f).reshape_vec())
    cols = []
    for b in h2:
        cols.append((b.f @ o1.f.f).reshape_vec())
    width = len(h1) + len(h2)
    height = o2.dst.dim * o1.src.dim
    m = np.zeros((height, width), dtype=np.int64)
    for j, v in enumerate(rows):
        m[:, j] = v
    for j, v in enumerate(cols):
        m[:, len(h1) + j] = (p - 1) * v % p
    from monocat.fieldmat import kernel_basis

    return kernel_basis(FpMatrix(p, m)).dim


def test_hom_h_dimension_matches_direct_solve():
    ctx = ctx3()
    objs = [
        socle_mono(ctx),
        make(identity_morphism(ctx.jordan(1)), "S"),
        make(identity_morphism(ctx.jordan(3)), "S"),
        make(zero_morphism(zero_module(ctx), ctx.jordan(2)), "S"),
    ]
    for o1, o2 in itertools.product(objs, repeat=2):
        basis = hom_h(o1, o2)
        assert len(basis) == brute_square_dim(o1, o2)
        if basis:
            cols = np.column_stack([m.flatten() for m in basis])
            assert rank(FpMatrix(ctx.p, cols)) == len(basis)
        for m in basis:
            # re-validate the commuting condition through the constructor
            MorphMap(o1, o2, m.sigma1, m.sigma2)


# --- ideals ----------------------------------------------------------------------


def test_right_approximation_kinds():
    ctx = ctx3()
    s = socle_mono(ctx)
    o = top_epi(ctx)
    for ideal, target in [("V", s), ("X", s), ("U", o), ("Y", o)]:
        app, app_map = right_approximation(ideal, target)
        assert app.kind == target.kind
        assert app_map.dst == target
    with pytest.raises(KindMismatch):
        right_approximation("V", o)
    with pytest.raises(KindMismatch):
        right_approximation("Y", s)
    with pytest.raises(KindMismatch):
        right_approximation("W", s)


def test_v_membership_cases():
    ctx = ctx3()
    s = socle_mono(ctx)
    # identity of a non-split object is not in V
    assert factors_through("V", identity_map(s)) is None
    # identity objects and zero-source objects are in V
    for obj in [
        make(identity_morphism(ctx.jordan(2)), "S"),
        make(zero_morphism(zero_module(ctx), ctx.jordan(2)), "S"),
    ]:
        w = factors_through("V", identity_map(obj))
        assert w is not None
    # the zero square always factors
    assert factors_through("V", zero_map(s, s)) is not None


def test_x_membership_cases():
    ctx = ctx3()
    # inclusions into projectives generate X: their identities factor
    _, pi = projective_cover(ctx.jordan(1))
    _, incl = kernel_module(pi)
    obj = make(incl, "S")
    assert factors_through("X", identity_map(obj)) is not None
    # X contains V: the socle mono of a projective target... its identity
    # is not in X (theta value is nonzero), but identity objects are
    assert factors_through("X", identity_map(socle_mono(ctx))) is None
    idobj = make(identity_morphism(ctx.jordan(2)), "S")
    assert factors_through("X", identity_map(idobj)) is not None


def test_u_and_y_membership_cases():
    ctx = ctx3()
    o = top_epi(ctx)
    assert factors_through("U", identity_map(o)) is None
    assert factors_through("Y", identity_map(o)) is None
    collapse = make(zero_morphism(ctx.jordan(2), zero_module(ctx)), "F")
    assert factors_through("U", identity_map(collapse)) is not None
    _, pi = projective_cover(ctx.jordan(1))
    cover_obj = make(pi, "F")
    assert factors_through("Y", identity_map(cover_obj)) is not None
    assert factors_through("U", identity_map(cover_obj)) is None


def test_witness_recomposes():
    ctx = ctx3()
    idobj = make(identity_morphism(ctx.jordan(2)), "S")
    h = identity_map(idobj)
    w = factors_through("V", h)
    app, app_map = right_approximation("V", idobj)
    assert w.dst == app
    assert app_map.compose(w).flatten().tolist() == h.flatten().tolist()


def test_ideal_subspace_is_canonical_and_sized():
    ctx = ctx3()
    s = socle_mono(ctx)
    idobj = make(identity_morphism(ctx.jordan(2)), "S")
    for o1, o2 in itertools.product([s, idobj], repeat=2):
        sub = ideal_subspace("V", o1, o2)
        assert sub.dim == ideal_span_dim("V", o1, o2)
        assert sub.ambient_dim == o2.src.dim * o1.src.dim + o2.dst.dim * o1.dst.dim
        # every basis square of the subspace really factors
        for j in range(sub.dim):
            vec = sub.basis.a[:, j]
            cut = o2.src.dim * o1.src.dim
            sigma1 = LambdaMorphism(
                o1.src,
                o2.src,
                FpMatrix(ctx.p, vec[:cut].reshape(o2.src.dim, o1.src.dim)),
            )
            sigma2 = LambdaMorphism(
                o1.dst,
                o2.dst,
                FpMatrix(ctx.p, vec[cut:].reshape(o2.dst.dim, o1.dst.dim)),
            )
            square = MorphMap(o1, o2, sigma1, sigma2)
            assert factors_through("V", square) is not None
