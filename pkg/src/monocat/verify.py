"""Verification suites: seeded, replayable property sweeps.

Each suite function takes a configuration and returns a result dict with
one entry per property: status, instance count, and a list of
counterexamples (empty on pass).  Counterexamples carry the full
offending instance in the same JSON shapes the CLI consumes, so a failure
can be replayed directly.
"""
from __future__ import annotations

import time
from typing import Callable

import numpy as np

from . import jsonio
from .fieldmat import is_prime
from .modules import (
    RingCtx,
    hom_basis,
    identity_morphism,
    is_isomorphic,
    kernel_module,
    module_from_blocks,
    projective_cover,
    stable_hom,
    stably_isomorphic,
    syzygy,
    tor1,
    transpose,
    zero_module,
    zero_morphism,
)
from .morphcat import (
    cok_ker_iso,
    factors_through,
    identity_map,
    ideal_subspace,
    ker_cok_iso,
    make,
)
from .functors import (
    i_lambda,
    l0,
    nat_contra_dim,
    nu,
    r0,
    t,
    theta_eval,
    upsilon,
)
from .stable_algebra import gamma_algebra, iso_test, representable_contra
from .equivalences import (
    auto_equiv,
    im_functor,
    im_hom_map,
    phi,
    phi_hom_map,
    psi,
    psi_hom_map,
    psi_inverse,
    rho_check,
    theta,
    theta_hom_map,
    tor_compare,
)
from . import sampling

SUITES = (
    "dims",
    "transpose",
    "psi",
    "phi",
    "theta",
    "im",
    "rho",
    "recollement",
    "ideals",
    "all",
)

__all__ = ["SUITES", "run_suite"]


def _result(prop: str, instances: int, counterexamples: list) -> dict:
    return {
        "property": prop,
        "status": "pass" if not counterexamples else "fail",
        "instances": instances,
        "counterexamples": counterexamples,
    }


def _contexts(n_max: int, primes: list[int]) -> list[RingCtx]:
    return [RingCtx(p, n) for p in primes for n in range(2, n_max + 1)]


def _rng(seed: int, *path: int) -> np.random.Generator:
    return np.random.default_rng([seed & 0x7FFFFFFF, *[x & 0x7FFFFFFF for x in path]])


def _partitions(total_max: int, part_max: int) -> list[tuple[int, ...]]:
    """All nonempty descending block lists with sum <= total_max."""
    out: list[tuple[int, ...]] = []

    def rec(prefix: list[int], remaining: int, cap: int) -> None:
        for b in range(min(cap, remaining), 0, -1):
            cur = prefix + [b]
            out.append(tuple(cur))
            rec(cur, remaining - b, b)

    rec([], total_max, part_max)
    return out


# ---------------------------------------------------------------------------
# suites
# ---------------------------------------------------------------------------


def suite_dims(cfg: dict) -> list[dict]:
    bad: list[dict] = []
    count = 0
    for p in cfg["primes"]:
        for n in range(1, cfg["n_max"] + 1):
            ctx = RingCtx(p, n)
            for a in range(1, n + 1):
                for b in range(1, n + 1):
                    ja, jb = ctx.jordan(a), ctx.jordan(b)
                    count += 3
                    checks = [
                        ("hom", len(hom_basis(ja, jb)), min(a, b)),
                        (
                            "stable-hom",
                            len(stable_hom(ja, jb)[0]),
                            min(a, b, n - a, n - b),
                        ),
                        ("tor", tor1(ja, jb)[0], min(a, b) - max(a + b - n, 0)),
                    ]
                    for kind, got, want in checks:
                        if got != want:
                            bad.append(
                                {
                                    "kind": kind,
                                    "p": p,
                                    "n": n,
                                    "a": a,
                                    "b": b,
                                    "got": got,
                                    "want": want,
                                }
                            )
    return [_result("dimension-laws", count, bad)]


def suite_transpose(cfg: dict) -> list[dict]:
    bad: list[dict] = []
    count = 0
    for ctx in _contexts(cfg["n_max"], cfg["primes"]):
        n = ctx.n
        for a in range(1, n):
            count += 2
            if not is_isomorphic(syzygy(ctx.jordan(a)), ctx.jordan(n - a)):
                bad.append({"kind": "syzygy", "p": ctx.p, "n": n, "a": a})
            if not stably_isomorphic(transpose(ctx.jordan(a)), ctx.jordan(a)):
                bad.append({"kind": "transpose-block", "p": ctx.p, "n": n, "a": a})
        count += 1
        if transpose(ctx.free_module(1)).dim != 0:
            bad.append({"kind": "transpose-projective", "p": ctx.p, "n": n})
        rng = _rng(cfg["seed"], 1, ctx.p, ctx.n)
        for i in range(cfg["samples"]):
            m = sampling.random_module(ctx, rng, 2 * n, conjugate=True)
            count += 1
            if not stably_isomorphic(transpose(transpose(m)), m):
                bad.append(
                    {
                        "kind": "transpose-involution",
                        "instance": jsonio.encode_module(m),
                    }
                )
    return [_result("transpose-syzygy-laws", count, bad)]


def _vanishing_and_fullness(
    cfg: dict,
    tag: str,
    stream: int,
    sample_obj: Callable,
    trivial_objs: Callable,
    functor: Callable,
    hom_map: Callable,
    ideal: str,
) -> list[dict]:
    """Shared shape of the psi/phi/theta/im suites."""
    bad_vanish: list[dict] = []
    bad_full: list[dict] = []
    n_vanish = 0
    n_full = 0
    for ctx in _contexts(min(cfg["n_max"], 4), cfg["primes"]):
        for obj in trivial_objs(ctx):
            n_vanish += 1
            if functor(obj).total_dim != 0:
                bad_vanish.append(
                    {
                        "kind": f"{tag}-ideal-object-nonzero",
                        "instance": jsonio.encode_morphism(obj),
                    }
                )
        rng = _rng(cfg["seed"], stream, ctx.p, ctx.n)
        for i in range(cfg["samples"]):
            o1 = sample_obj(ctx, rng, 8)
            o2 = sample_obj(ctx, rng, 8)
            n_full += 1
            hm = hom_map(o1, o2)
            ideal_dim = ideal_subspace(ideal, o1, o2).dim
            if not hm.is_surjective or hm.kernel_dim != ideal_dim:
                bad_full.append(
                    {
                        "kind": f"{tag}-hom-map",
                        "surjective": hm.is_surjective,
                        "kernel_dim": hm.kernel_dim,
                        "ideal_dim": ideal_dim,
                        "src": jsonio.encode_morphism(o1),
                        "dst": jsonio.encode_morphism(o2),
                    }
                )
    return [
        _result(f"{tag}-kills-ideal-objects", n_vanish, bad_vanish),
        _result(f"{tag}-full-with-{ideal}-kernel", n_full, bad_full),
    ]


def _v_objects(ctx: RingCtx) -> list:
    out = []
    for a in range(1, ctx.n + 1):
        e = ctx.jordan(a)
        out.append(make(identity_morphism(e), "S"))
        out.append(make(zero_morphism(zero_module(ctx), e), "S"))
    return out


def _u_objects(ctx: RingCtx) -> list:
    out = []
    for a in range(1, ctx.n + 1):
        e = ctx.jordan(a)
        out.append(make(identity_morphism(e), "F"))
        out.append(make(zero_morphism(e, zero_module(ctx)), "F"))
    return out


def _x_objects(ctx: RingCtx) -> list:
    out = []
    for a in range(1, ctx.n + 1):
        e = ctx.jordan(a)
        out.append(make(identity_morphism(e), "S"))
        _, pi = projective_cover(e)
        _, incl = kernel_module(pi)
        out.append(make(incl, "S"))
    return out


def _y_objects(ctx: RingCtx) -> list:
    out = []
    for a in range(1, ctx.n + 1):
        e = ctx.jordan(a)
        out.append(make(identity_morphism(e), "F"))
        _, pi = projective_cover(e)
        out.append(make(pi, "F"))
    return out


def suite_psi(cfg: dict) -> list[dict]:
    results = _vanishing_and_fullness(
        cfg, "psi", 11, sampling.random_mono, _v_objects, psi, psi_hom_map, "V"
    )
    bad: list[dict] = []
    count = 0
    for ctx in _contexts(min(cfg["n_max"], 4), cfg["primes"]):
        rng = _rng(cfg["seed"], 2, ctx.p, ctx.n)
        for i in range(cfg["samples"]):
            s = sampling.random_mono(ctx, rng, 8)
            g = psi(s)
            back = psi(psi_inverse(g))
            count += 1
            if iso_test(back, g, seed=cfg["seed"] + i) != "iso":
                bad.append(
                    {
                        "kind": "psi-round-trip",
                        "instance": jsonio.encode_morphism(s),
                    }
                )
    results.append(_result("psi-denseness-round-trip", count, bad))
    return results


def suite_phi(cfg: dict) -> list[dict]:
    return _vanishing_and_fullness(
        cfg, "phi", 12, sampling.random_epi, _u_objects, phi, phi_hom_map, "U"
    )


def suite_theta(cfg: dict) -> list[dict]:
    results = _vanishing_and_fullness(
        cfg, "theta", 13, sampling.random_mono, _x_objects, theta, theta_hom_map, "X"
    )
    bad: list[dict] = []
    count = 0
    for ctx in _contexts(min(cfg["n_max"], 4), cfg["primes"]):
        alg = gamma_algebra(ctx)
        for a in ctx.stable_sizes():
            ja = ctx.jordan(a)
            g = theta(make(zero_morphism(zero_module(ctx), ja), "S"))
            count += 1
            if iso_test(g, representable_contra(alg, ja), seed=cfg["seed"]) != "iso":
                bad.append({"kind": "theta-representable", "p": ctx.p, "n": ctx.n, "a": a})
    results.append(_result("theta-of-inclusion-is-representable", count, bad))
    return results


def suite_im(cfg: dict) -> list[dict]:
    return _vanishing_and_fullness(
        cfg, "im", 14, sampling.random_epi, _y_objects, im_functor, im_hom_map, "Y"
    )


def suite_rho(cfg: dict) -> list[dict]:
    bad: list[dict] = []
    count = 0
    n_cap = min(cfg["n_max"], 5)
    for p in cfg["primes"]:
        for n in range(2, n_cap + 1):
            ctx = RingCtx(p, n)
            for blocks in _partitions(n, n):
                m = module_from_blocks(ctx, blocks)
                count += 2
                if not rho_check(m, seed=cfg["seed"]):
                    bad.append(
                        {"kind": "rho", "instance": jsonio.encode_module(m, blocks=True)}
                    )
                if not tor_compare(m, seed=cfg["seed"]):
                    bad.append(
                        {"kind": "tor", "instance": jsonio.encode_module(m, blocks=True)}
                    )
            rng = _rng(cfg["seed"], 3, p, n)
            for i in range(max(1, cfg["samples"] // 4)):
                m = sampling.random_module(ctx, rng, n + 2)
                count += 2
                if not rho_check(m, seed=cfg["seed"] + i):
                    bad.append(
                        {"kind": "rho", "instance": jsonio.encode_module(m, blocks=True)}
                    )
                if not tor_compare(m, seed=cfg["seed"] + i):
                    bad.append(
                        {"kind": "tor", "instance": jsonio.encode_module(m, blocks=True)}
                    )
    results = [_result("rho-transpose-comparison", count, bad)]

    # auto-equivalence bookkeeping at n = 3: recorded, dimension-checked
    table = []
    bad_auto: list[dict] = []
    for p in cfg["primes"]:
        ctx = RingCtx(p, 3)
        alg = gamma_algebra(ctx)
        for a in ctx.stable_sizes():
            rep = representable_contra(alg, ctx.jordan(a))
            image = auto_equiv(rep)
            table.append(
                {
                    "p": p,
                    "block": a,
                    "dims": list(rep.dims),
                    "image_dims": list(image.dims),
                }
            )
            if image.total_dim != rep.total_dim:
                bad_auto.append({"kind": "auto-equiv-total-dim", "p": p, "block": a})
    res = _result("auto-equivalence-table", len(table), bad_auto)
    res["table"] = table
    results.append(res)
    return results


def suite_recollement(cfg: dict) -> list[dict]:
    bad: list[dict] = []
    count = 0
    for ctx in _contexts(min(cfg["n_max"], 4), cfg["primes"]):
        for a in range(1, ctx.n + 1):
            m = ctx.jordan(a)
            count += 4
            if not is_isomorphic(nu(upsilon(m)), m):
                bad.append({"kind": "nu-representable", "p": ctx.p, "n": ctx.n, "a": a})
            if not is_isomorphic(nu(l0(m)), m):
                bad.append({"kind": "nu-L0", "p": ctx.p, "n": ctx.n, "a": a})
            if not is_isomorphic(theta_eval(t(m)), m):
                bad.append({"kind": "eval-tensor", "p": ctx.p, "n": ctx.n, "a": a})
            if not is_isomorphic(theta_eval(r0(m)), m):
                bad.append({"kind": "eval-R0", "p": ctx.p, "n": ctx.n, "a": a})
            if ctx.n >= 2:
                count += 1
                got = i_lambda(upsilon(m)).dims
                want = tuple(
                    len(stable_hom(ctx.jordan(b), m)[0]) for b in ctx.stable_sizes()
                )
                if got != want:
                    bad.append(
                        {
                            "kind": "i-lambda-representable",
                            "p": ctx.p,
                            "n": ctx.n,
                            "a": a,
                            "got": list(got),
                            "want": list(want),
                        }
                    )
    # adjunction dimension identity on random presentations
    for p in cfg["primes"]:
        ctx = RingCtx(p, 3)
        rng = _rng(cfg["seed"], 4, p)
        for i in range(cfg["samples"]):
            f = sampling.random_contra_functor(ctx, rng, 6)
            m = sampling.random_module(ctx, rng, 6)
            count += 1
            lhs = len(hom_basis(nu(f), m))
            rhs = nat_contra_dim(f, upsilon(m))
            if lhs != rhs:
                bad.append(
                    {
                        "kind": "nu-adjunction",
                        "p": p,
                        "pres": jsonio.encode_morphism(make(f.pres, "H")),
                        "module": jsonio.encode_module(m),
                        "hom_dim": lhs,
                        "nat_dim": rhs,
                    }
                )
    return [_result("recollement-identities", count, bad)]


def suite_ideals(cfg: dict) -> list[dict]:
    """Object-level kernel-ideal equivalences, exhaustively at small size."""
    bad: list[dict] = []
    count = 0
    n_cap = min(cfg["n_max"], 3)
    ctx = RingCtx(2, n_cap)
    monos: list = []
    epis: list = []
    mods = [module_from_blocks(ctx, b) for b in _partitions(4, n_cap)]
    mods.append(zero_module(ctx))
    for msrc in mods:
        for mdst in mods:
            for h in hom_basis(msrc, mdst):
                if h.is_injective():
                    monos.append(make(h, "S"))
                if h.is_surjective():
                    epis.append(make(h, "F"))
        if msrc.dim == 0:
            for mdst in mods:
                monos.append(make(zero_morphism(msrc, mdst), "S"))
                epis.append(make(zero_morphism(mdst, msrc), "F"))
    for s in monos:
        count += 2
        psi_zero = psi(s).total_dim == 0
        v_member = factors_through("V", identity_map(s)) is not None
        if psi_zero != v_member:
            bad.append({"kind": "psi-V", "instance": jsonio.encode_morphism(s)})
        theta_zero = theta(s).total_dim == 0
        x_member = factors_through("X", identity_map(s)) is not None
        if theta_zero != x_member:
            bad.append({"kind": "theta-X", "instance": jsonio.encode_morphism(s)})
    for o in epis:
        count += 2
        phi_zero = phi(o).total_dim == 0
        u_member = factors_through("U", identity_map(o)) is not None
        if phi_zero != u_member:
            bad.append({"kind": "phi-U", "instance": jsonio.encode_morphism(o)})
        im_zero = im_functor(o).total_dim == 0
        y_member = factors_through("Y", identity_map(o)) is not None
        if im_zero != y_member:
            bad.append({"kind": "im-Y", "instance": jsonio.encode_morphism(o)})
    # the two composites of the kernel/cokernel switch are identities
    bad_inv: list[dict] = []
    n_inv = 0
    for s in monos:
        n_inv += 1
        if not ker_cok_iso(s).is_isomorphism():
            bad_inv.append({"kind": "ker-cok", "instance": jsonio.encode_morphism(s)})
    for o in epis:
        n_inv += 1
        if not cok_ker_iso(o).is_isomorphism():
            bad_inv.append({"kind": "cok-ker", "instance": jsonio.encode_morphism(o)})
    return [
        _result("kernel-ideal-equivalences", count, bad),
        _result("inverse-equivalences", n_inv, bad_inv),
    ]


_SUITE_FNS: dict[str, Callable[[dict], list[dict]]] = {
    "dims": suite_dims,
    "transpose": suite_transpose,
    "psi": suite_psi,
    "phi": suite_phi,
    "theta": suite_theta,
    "im": suite_im,
    "rho": suite_rho,
    "recollement": suite_recollement,
    "ideals": suite_ideals,
}


def run_suite(
    suite: str,
    n_max: int = 4,
    primes: list[int] | None = None,
    seed: int = 42,
    samples: int = 20,
) -> dict:
    """Run one suite (or all) and package the outcome as a report body."""
    if suite not in SUITES:
        raise jsonio.InputError(
            f"unknown suite {suite!r}; choose from {', '.join(SUITES)}"
        )
    primes = primes or [2, 5]
    for p in primes:
        if not is_prime(p):
            raise jsonio.InputError(f"--p entries must be prime, got {p}")
    if n_max < 2:
        raise jsonio.InputError("--n-max must be at least 2")
    cfg = {"n_max": n_max, "primes": primes, "seed": seed, "samples": samples}
    names = [s for s in SUITES if s != "all"] if suite == "all" else [suite]
    t0 = time.perf_counter()
    properties: list[dict] = []
    for name in names:
        t_s = time.perf_counter()
        for res in _SUITE_FNS[name](cfg):
            res["suite"] = name
            res["seconds"] = round(time.perf_counter() - t_s, 3)
            properties.append(res)
    ok = all(r["status"] == "pass" for r in properties)
    return {
        "suite": suite,
        "config": cfg,
        "properties": properties,
        "all_passed": ok,
        "seconds": round(time.perf_counter() - t0, 3),
    }
