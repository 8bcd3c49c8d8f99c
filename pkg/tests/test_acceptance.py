"""Acceptance gate: one test per headline guarantee, one pass/fail line each."""
import itertools
import json
import time

import numpy as np

from monocat.cli import main
from monocat.equivalences import (
    im_functor,
    im_hom_map,
    im_on_map,
    phi,
    phi_hom_map,
    psi,
    psi_hom_map,
    psi_inverse,
    rho_check,
    theta,
    theta_hom_map,
    theta_on_map,
    tor_compare,
)
from monocat.functors import i_lambda, l0, nat_contra_dim, nu, r0, t, theta_eval, upsilon
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
    stable_hom,
    stably_isomorphic,
    syzygy,
    tor1,
    transpose,
    zero_module,
    zero_morphism,
)
from monocat.morphcat import (
    cok_ker_iso,
    factors_through,
    ideal_span_dim,
    ker_cok_iso,
    make,
)
from monocat.sampling import (
    random_contra_functor,
    random_epi,
    random_module,
    random_mono,
)
from monocat.stable_algebra import (
    direct_sum_gamma,
    gamma_algebra,
    iso_test,
    representable_contra,
)


def _finish(label, failures, elapsed=None, budget=None):
    ok = not failures and (budget is None or elapsed < budget)
    line = f"[{'PASS' if ok else 'FAIL'}] {label}"
    if elapsed is not None:
        line += f" ({elapsed:.2f}s)"
    print(line)
    assert not failures, f"{label}: {failures[:3]}"
    if budget is not None:
        assert elapsed < budget, f"{label}: {elapsed:.2f}s over the {budget}s budget"


def _rng(*path):
    return np.random.default_rng(list(path))


def _partitions(total_max, part_max):
    out = []

    def rec(prefix, remaining, cap):
        for part in range(min(remaining, cap), 0, -1):
            blocks = prefix + (part,)
            out.append(blocks)
            rec(blocks, remaining - part, part)

    rec((), total_max, part_max)
    return out


def test_criterion_01_dimension_laws():
    start = time.perf_counter()
    failures = []
    for p in (2, 5):
        for n in range(1, 7):
            ctx = RingCtx(p, n)
            for a, b in itertools.product(range(1, n + 1), repeat=2):
                ja, jb = ctx.jordan(a), ctx.jordan(b)
                got_hom = len(hom_basis(ja, jb))
                got_stable = len(stable_hom(ja, jb)[0])
                got_tor = tor1(ja, jb)[0]
                want = (
                    min(a, b),
                    min(a, b, n - a, n - b),
                    min(a, b) - max(a + b - n, 0),
                )
                if (got_hom, got_stable, got_tor) != want:
                    failures.append((p, n, a, b, got_hom, got_stable, got_tor))
    _finish("dimension laws", failures, time.perf_counter() - start, 5.0)


def _global_product_tensor(alg):
    """full[i][:, j] = coordinates of e_i . e_j over the whole algebra."""
    d = alg.dim
    full = np.zeros((d, d, d), dtype=np.int64)
    for ei in alg.elements:
        for ej in alg.elements:
            coeffs = alg.product_coords(ei.index, ej.index)
            if coeffs is None:
                continue
            block = alg.by_pair[(ej.src, ei.dst)]
            full[ei.index, block, ej.index] = np.asarray(coeffs) % alg.p
    return full


def test_criterion_02_stable_algebra_structure():
    start = time.perf_counter()
    failures = []
    for p in (2, 5):
        for n in range(2, 8):
            alg = gamma_algebra(RingCtx(p, n))
            want = (n - 1) * n * (n + 1) // 6
            if alg.dim != want:
                failures.append((p, n, "dim", alg.dim, want))
                continue
            full = _global_product_tensor(alg)
            d = alg.dim
            # associativity: left multiplication by e_i.e_j equals the
            # composite of the two left multiplications, for every pair
            for i in range(d):
                for j in range(d):
                    lhs = (full[i] @ full[j]) % p
                    rhs = np.tensordot(full[i][:, j], full, axes=(0, 0)) % p
                    if not np.array_equal(lhs, rhs):
                        failures.append((p, n, "assoc", i, j))
            unit = np.zeros(d, dtype=np.int64)
            for a, coeffs in alg.identity_coords.items():
                unit[alg.by_pair[(a, a)]] = np.asarray(coeffs) % p
            left = np.tensordot(unit, full, axes=(0, 0)) % p
            right = np.einsum("icj,j->ci", full, unit) % p
            eye = np.eye(d, dtype=np.int64)
            if not np.array_equal(left, eye):
                failures.append((p, n, "left unit"))
            if not np.array_equal(right, eye):
                failures.append((p, n, "right unit"))
    assert gamma_algebra(RingCtx(2, 4)).dim == 10
    _finish("stable algebra structure", failures, time.perf_counter() - start, 5.0)


def test_criterion_03_transpose_and_syzygy():
    failures = []
    for p in (2, 5):
        for n in range(2, 7):
            ctx = RingCtx(p, n)
            for a in range(1, n + 1):
                ja = ctx.jordan(a)
                want = (n - a,) if a < n else ()
                if jordan_type(syzygy(ja)).blocks != want:
                    failures.append((p, n, a, "syzygy"))
                if not stably_isomorphic(transpose(ja), ja):
                    failures.append((p, n, a, "transpose"))
        for n in (2, 3, 4, 5):
            ctx = RingCtx(p, n)
            rng = _rng(31, p, n)
            for _ in range(10):
                m = random_module(ctx, rng, 2 * n, conjugate=True)
                if not stably_isomorphic(transpose(transpose(m)), m):
                    failures.append((p, n, "involution", jordan_type(m).blocks))
    _finish("transpose and syzygy laws", failures)


def _vanishing_failures(tag, functor, objects):
    return [
        (tag, i)
        for i, obj in enumerate(objects)
        if functor(obj).total_dim != 0
    ]


def test_criterion_04_injective_side_bridge():
    failures = []
    pairs = 0
    for n in (2, 3, 4):
        ctx = RingCtx(5, n)
        rng = _rng(41, n)
        trivial = [make(identity_morphism(ctx.jordan(a)), "S") for a in range(1, n + 1)]
        trivial += [
            make(zero_morphism(zero_module(ctx), random_module(ctx, rng, 6)), "S")
            for _ in range(5)
        ]
        trivial += [make(identity_morphism(random_module(ctx, rng, 8)), "S") for _ in range(5)]
        failures += _vanishing_failures((n, "vanishing"), psi, trivial)
        quota = 67 if n < 4 else 66
        for _ in range(quota):
            o1 = random_mono(ctx, rng, 10)
            o2 = random_mono(ctx, rng, 10)
            pairs += 1
            hm = psi_hom_map(o1, o2)
            if not hm.is_surjective:
                failures.append((n, "not surjective", pairs))
            if hm.kernel_dim != ideal_span_dim("V", o1, o2):
                failures.append((n, "kernel", pairs))
        alg = gamma_algebra(ctx)
        rng2 = _rng(42, n)
        for i in range(34 if n > 2 else 32):
            pick = i % 3
            if pick == 0:
                g = psi(random_mono(ctx, rng2, 8))
            elif pick == 1:
                a = int(rng2.integers(1, n))
                g = representable_contra(alg, ctx.jordan(a))
            else:
                a = int(rng2.integers(1, n))
                b = int(rng2.integers(1, n))
                g = direct_sum_gamma(
                    representable_contra(alg, ctx.jordan(a)),
                    representable_contra(alg, ctx.jordan(b)),
                )
            back = psi(psi_inverse(g))
            if iso_test(back, g, seed=i) != "iso":
                failures.append((n, "round trip", i))
    assert pairs == 200
    _finish("injective-side bridge: full, ideal kernel, dense", failures)


def test_criterion_05_projective_side_bridge():
    failures = []
    pairs = 0
    for n in (2, 3, 4):
        ctx = RingCtx(5, n)
        rng = _rng(51, n)
        trivial = [make(identity_morphism(ctx.jordan(a)), "F") for a in range(1, n + 1)]
        trivial += [
            make(zero_morphism(random_module(ctx, rng, 6), zero_module(ctx)), "F")
            for _ in range(5)
        ]
        trivial += [make(identity_morphism(random_module(ctx, rng, 8)), "F") for _ in range(5)]
        failures += _vanishing_failures((n, "vanishing"), phi, trivial)
        quota = 67 if n < 4 else 66
        for _ in range(quota):
            o1 = random_epi(ctx, rng, 10)
            o2 = random_epi(ctx, rng, 10)
            pairs += 1
            hm = phi_hom_map(o1, o2)
            if not hm.is_surjective:
                failures.append((n, "not surjective", pairs))
            if hm.kernel_dim != ideal_span_dim("U", o1, o2):
                failures.append((n, "kernel", pairs))
    assert pairs == 200
    _finish("projective-side bridge: full with ideal kernel", failures)


def _small_monos(ctx):
    objs = []
    mods = [module_from_blocks(ctx, b) for b in _partitions(4, ctx.n)]
    for m in mods:
        objs.append(make(identity_morphism(m), "S"))
        objs.append(make(zero_morphism(zero_module(ctx), m), "S"))
    for src, dst in itertools.product(mods, repeat=2):
        if src.dim >= dst.dim:
            continue
        for h in hom_basis(src, dst):
            if h.is_injective():
                objs.append(make(h, "S"))
    return objs


def _small_epis(ctx):
    objs = []
    mods = [module_from_blocks(ctx, b) for b in _partitions(4, ctx.n)]
    for m in mods:
        objs.append(make(identity_morphism(m), "F"))
        objs.append(make(zero_morphism(m, zero_module(ctx)), "F"))
    for src, dst in itertools.product(mods, repeat=2):
        if src.dim <= dst.dim:
            continue
        for h in hom_basis(src, dst):
            if h.is_surjective():
                objs.append(make(h, "F"))
    return objs


def _ideal_equivalence_failures(tag, objs, hom_map, on_map, ideal):
    """Induced map on a square is zero exactly when the square factors
    through the ideal, witnessed; checked on a spanning set of squares."""
    failures = []
    for o1, o2 in itertools.product(objs, repeat=2):
        hm = hom_map(o1, o2)
        if not hm.is_surjective:
            failures.append((tag, "not surjective"))
        if hm.kernel_dim != ideal_span_dim(ideal, o1, o2):
            failures.append((tag, "kernel dim"))
        for sq in hm.kernel_squares():
            if not on_map(sq).is_zero():
                failures.append((tag, "kernel square not killed"))
            if factors_through(ideal, sq) is None:
                failures.append((tag, "no witness for kernel square"))
    return failures


def test_criterion_06_stable_yoneda_on_monos():
    failures = []
    for n in (2, 3):
        ctx = RingCtx(2, n)
        alg = gamma_algebra(ctx)
        for a in ctx.stable_sizes():
            ja = ctx.jordan(a)
            th = theta(make(zero_morphism(zero_module(ctx), ja), "S"))
            if iso_test(th, representable_contra(alg, ja), seed=a) != "iso":
                failures.append((n, a, "not the representable"))
        x_objects = [make(identity_morphism(module_from_blocks(ctx, b)), "S")
                     for b in _partitions(4, n)]
        for a in range(1, n + 1):
            _, pi = projective_cover(ctx.jordan(a))
            _, incl = kernel_module(pi)
            x_objects.append(make(incl, "S"))
        failures += _vanishing_failures((n, "vanishing"), theta, x_objects)
        failures += _ideal_equivalence_failures(
            n, _small_monos(ctx), theta_hom_map, theta_on_map, "X"
        )
    _finish("stable Yoneda bridge on injections", failures)


def test_criterion_07_cokernel_side_bridge():
    failures = []
    for p in (2, 5):
        ctx3 = RingCtx(p, 3)
        f = np.zeros((1, 2), dtype=np.int64)
        f[0, 0] = 1
        epi21 = make(
            LambdaMorphism(ctx3.jordan(2), ctx3.jordan(1), ctx3.field.matrix(f)),
            "F",
        )
        if im_functor(epi21).dims != (0, 1):
            failures.append((p, "pinned value", im_functor(epi21).dims))
    for n in (2, 3):
        ctx = RingCtx(2, n)
        y_objects = [make(identity_morphism(module_from_blocks(ctx, b)), "F")
                     for b in _partitions(4, n)]
        for b in _partitions(4, n):
            m = module_from_blocks(ctx, b)
            _, pi = projective_cover(m)
            y_objects.append(make(pi, "F"))
        failures += _vanishing_failures((n, "vanishing"), im_functor, y_objects)
        failures += _ideal_equivalence_failures(
            n, _small_epis(ctx), im_hom_map, im_on_map, "Y"
        )
    _finish("cokernel-side bridge on surjections", failures)


def test_criterion_08_inverse_equivalences():
    failures = []
    for p in (2, 5):
        for n in (2, 3):
            ctx = RingCtx(p, n)
            for s in _small_monos(ctx):
                if not ker_cok_iso(s).is_isomorphism():
                    failures.append((p, n, "mono side"))
            for o in _small_epis(ctx):
                if not cok_ker_iso(o).is_isomorphism():
                    failures.append((p, n, "epi side"))
    _finish("kernel and cokernel are inverse up to isomorphism", failures)


def test_criterion_09_dual_shift_matches_transpose():
    failures = []
    for p in (2, 5):
        for n in range(2, 6):
            ctx = RingCtx(p, n)
            for blocks in _partitions(n, n):
                m = module_from_blocks(ctx, blocks)
                if not rho_check(m):
                    failures.append((p, n, blocks, "dual shift"))
                if not tor_compare(m):
                    failures.append((p, n, blocks, "tor pairing"))
    rng = _rng(91)
    for i in range(50):
        p = (2, 5)[i % 2]
        n = 2 + i % 4
        ctx = RingCtx(p, n)
        m = random_module(ctx, rng, n + 2, conjugate=True)
        if not rho_check(m, seed=i):
            failures.append((p, n, "random dual shift", i))
        if not tor_compare(m, seed=i):
            failures.append((p, n, "random tor pairing", i))
    _finish("dual-shift functor matches the transpose", failures)


def test_criterion_10_recollement_identities():
    failures = []
    for p in (2, 5):
        for n in (2, 3):
            ctx = RingCtx(p, n)
            mods = [module_from_blocks(ctx, b) for b in _partitions(4, n)]
            rng = _rng(101, p, n)
            mods += [random_module(ctx, rng, 6) for _ in range(4)]
            for m in mods:
                if not is_isomorphic(nu(upsilon(m)), m):
                    failures.append((p, n, "hom functor section"))
                if not is_isomorphic(nu(l0(m)), m):
                    failures.append((p, n, "flat lift section"))
                if not is_isomorphic(theta_eval(t(m)), m):
                    failures.append((p, n, "tensor lift section"))
                if not is_isomorphic(theta_eval(r0(m)), m):
                    failures.append((p, n, "right lift section"))
                got = i_lambda(upsilon(m)).dims
                want = tuple(
                    len(stable_hom(ctx.jordan(a), m)[0]) for a in ctx.stable_sizes()
                )
                if got != want:
                    failures.append((p, n, "stable restriction dims"))
    count = 0
    for p in (2, 5):
        for n in (2, 3):
            ctx = RingCtx(p, n)
            rng = _rng(102, p, n)
            for _ in range(13 if (p, n) != (5, 3) else 11):
                f = random_contra_functor(ctx, rng, 5)
                m = random_module(ctx, rng, 5)
                count += 1
                lhs = len(hom_basis(nu(f), m))
                rhs = nat_contra_dim(f, upsilon(m))
                if lhs != rhs:
                    failures.append((p, n, "adjunction count", count))
    assert count == 50
    _finish("recollement identities and adjunction", failures)


def test_criterion_11_end_to_end_verify(tmp_path, capsys):
    out = tmp_path / "report.json"
    start = time.perf_counter()
    code = main(
        [
            "verify", "--suite", "all", "--n-max", "4", "--p", "2,5",
            "--seed", "42", "--out", str(out),
        ]
    )
    elapsed = time.perf_counter() - start
    capsys.readouterr()
    failures = []
    if code != 0:
        failures.append(("exit code", code))
    report = json.loads(out.read_text())
    if set(report) != {"command", "results", "certificates", "seed", "timing"}:
        failures.append(("report keys", sorted(report)))
    if not report["results"]["all_passed"]:
        bad = [r["property"] for r in report["results"]["properties"]
               if r["status"] != "pass"]
        failures.append(("failing properties", bad))
    for cert in report["certificates"]:
        if "witness" not in cert or "replay" not in cert["witness"]:
            failures.append(("certificate not replayable", cert.get("property")))
    _finish("end-to-end verification drive", failures, elapsed, 60.0)
