"""Command line entry point.

Subcommands either answer one query about a JSON-encoded input (module,
morphism, functor, or square) or run a seeded verification suite and
emit a replayable report.  Exit codes: 0 on success and for properties
that hold, 1 when a checked property fails (the report carries a
counterexample), 2 for malformed input.
"""
from __future__ import annotations

import argparse
import json
import sys
import time

from . import jsonio
from .fieldmat import is_prime
from .modules import RingCtx, hom_basis, jordan_type, stable_hom, tor1, transpose
from .morphcat import cok, factors_through, ker
from .functors import ContraFunctor
from .stable_algebra import gamma_algebra
from .equivalences import im_functor, phi, psi, rho_check, theta, xi
from .verify import SUITES, run_suite

__all__ = ["main"]


def _emit(payload: dict, args: argparse.Namespace) -> None:
    text = json.dumps(payload, indent=2 if args.pretty else None)
    print(text)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")


def _gamma_payload(g) -> dict:
    return {
        "p": g.algebra.ctx.p,
        "n": g.algebra.ctx.n,
        "variance": g.variance,
        "dims": list(g.dims),
        "total_dim": g.total_dim,
    }


def _cmd_jordan(args, argv) -> tuple[dict, int]:
    m = jsonio.decode_module(jsonio.load_json(args.module))
    return {"type": list(jordan_type(m).blocks)}, 0


def _pair(args):
    m1 = jsonio.decode_module(jsonio.load_json(args.module_a))
    m2 = jsonio.decode_module(jsonio.load_json(args.module_b), ctx=m1.ctx)
    return m1, m2


def _cmd_hom(args, argv) -> tuple[dict, int]:
    m1, m2 = _pair(args)
    return {"dim": len(hom_basis(m1, m2))}, 0


def _cmd_stable_hom(args, argv) -> tuple[dict, int]:
    m1, m2 = _pair(args)
    return {"dim": len(stable_hom(m1, m2)[0])}, 0


def _cmd_tor(args, argv) -> tuple[dict, int]:
    m1, m2 = _pair(args)
    return {"dim": tor1(m1, m2)[0]}, 0


def _cmd_transpose(args, argv) -> tuple[dict, int]:
    m = jsonio.decode_module(jsonio.load_json(args.module))
    tr = transpose(m)
    payload = jsonio.encode_module(tr)
    payload["type"] = list(jordan_type(tr).blocks)
    return payload, 0


def _functor_image_cmd(fn, kind):
    def handler(args, argv) -> tuple[dict, int]:
        o = jsonio.decode_morphism(jsonio.load_json(args.morphism), require_kind=kind)
        return _gamma_payload(fn(o)), 0

    return handler


def _cmd_xi(args, argv) -> tuple[dict, int]:
    f = jsonio.decode_functor(jsonio.load_json(args.functor))
    if not isinstance(f, ContraFunctor):
        raise jsonio.InputError("xi expects a contravariant functor input")
    return _gamma_payload(xi(f.gamma_module())), 0


def _cmd_rho_check(args, argv) -> tuple[dict, int]:
    m = jsonio.decode_module(jsonio.load_json(args.module))
    holds = rho_check(m, seed=args.seed)
    return {"holds": holds, "seed": args.seed}, 0 if holds else 1


def _cmd_gamma_table(args, argv) -> tuple[dict, int]:
    if args.n < 2:
        raise jsonio.InputError("--n must be at least 2")
    if not is_prime(args.p):
        raise jsonio.InputError(f"--p must be prime, got {args.p}")
    alg = gamma_algebra(RingCtx(args.p, args.n))
    return {
        "n": args.n,
        "p": args.p,
        "dims": alg.stable_dims(),
        "total_dim": alg.dim,
        "assoc_checked": True,
    }, 0


def _cmd_cok(args, argv) -> tuple[dict, int]:
    o = jsonio.decode_morphism(jsonio.load_json(args.morphism), require_kind="S")
    return jsonio.encode_morphism(cok(o)), 0


def _cmd_ker(args, argv) -> tuple[dict, int]:
    o = jsonio.decode_morphism(jsonio.load_json(args.morphism), require_kind="F")
    return jsonio.encode_morphism(ker(o)), 0


def _cmd_ideal_test(args, argv) -> tuple[dict, int]:
    ideal, square = jsonio.decode_square(jsonio.load_json(args.square))
    witness = factors_through(ideal, square)
    payload = {
        "ideal": ideal,
        "factors": witness is not None,
        "witness": jsonio.encode_square(witness) if witness is not None else None,
    }
    return payload, 0


def _cmd_verify(args, argv) -> tuple[dict, int]:
    primes = []
    for part in str(args.p).split(","):
        part = part.strip()
        if part:
            try:
                primes.append(int(part))
            except ValueError as e:
                raise jsonio.InputError(f"--p must be a comma list of primes: {e}")
    t0 = time.perf_counter()
    body = run_suite(
        args.suite,
        n_max=args.n_max,
        primes=primes,
        seed=args.seed,
        samples=args.samples,
    )
    certificates = []
    for prop in body["properties"]:
        cert = {"property": prop["property"], "suite": prop["suite"]}
        if prop["status"] == "pass":
            cert["witness"] = {
                "instances": prop["instances"],
                "seed": args.seed,
                "replay": f"verify --suite {prop['suite']} --n-max {args.n_max}"
                f" --p {args.p} --seed {args.seed} --samples {args.samples}",
            }
        else:
            cert["counterexample"] = prop["counterexamples"][0]
        certificates.append(cert)
    report = {
        "command": "monocat " + " ".join(argv),
        "results": body,
        "certificates": certificates,
        "seed": args.seed,
        "timing": {"seconds": round(time.perf_counter() - t0, 3)},
    }
    return report, 0 if body["all_passed"] else 1


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--pretty", action="store_true", help="indent the JSON output")
    common.add_argument("--out", metavar="FILE", help="also write the output to FILE")

    parser = argparse.ArgumentParser(
        prog="monocat",
        description="Exact linear algebra over k[x]/(x^n): module invariants, "
        "map-category functors, and seeded verification suites.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, handler, help_text, parents=(common,)):
        sp = sub.add_parser(name, parents=list(parents), help=help_text)
        sp.set_defaults(handler=handler)
        return sp

    sp = add("jordan", _cmd_jordan, "classify a module by its block sizes")
    sp.add_argument("module", help="module JSON file")

    for name, handler, help_text in (
        ("hom", _cmd_hom, "dimension of the space of maps"),
        ("stable-hom", _cmd_stable_hom, "dimension of maps modulo projectives"),
        ("tor", _cmd_tor, "dimension of the first torsion product"),
    ):
        sp = add(name, handler, help_text)
        sp.add_argument("module_a", help="module JSON file")
        sp.add_argument("module_b", help="module JSON file")

    sp = add("transpose", _cmd_transpose, "transpose of a module, in normal form")
    sp.add_argument("module", help="module JSON file")

    for name, fn, kind, help_text in (
        ("psi", psi, "S", "stable-algebra module attached to an injective map"),
        ("phi", phi, "F", "stable-algebra module attached to a surjective map"),
        ("theta", theta, "S", "second stable-algebra module of an injective map"),
        ("im", im_functor, "F", "second stable-algebra module of a surjective map"),
    ):
        sp = add(name, _functor_image_cmd(fn, kind), help_text)
        sp.add_argument("morphism", help="morphism JSON file")

    sp = add("xi", _cmd_xi, "covariant companion of a finitely presented functor")
    sp.add_argument("functor", help="functor JSON file")

    sp = add("rho-check", _cmd_rho_check, "transpose comparison on one module")
    sp.add_argument("module", help="module JSON file")
    sp.add_argument("--seed", type=int, default=0, help="seed for iso search")

    sp = add("gamma-table", _cmd_gamma_table, "dimension table of the stable algebra")
    sp.add_argument("--n", type=int, required=True, help="nilpotency degree")
    sp.add_argument("--p", type=int, required=True, help="field characteristic")

    sp = add("cok", _cmd_cok, "cokernel object of an injective map")
    sp.add_argument("morphism", help="morphism JSON file")

    sp = add("ker", _cmd_ker, "kernel object of a surjective map")
    sp.add_argument("morphism", help="morphism JSON file")

    sp = add("ideal-test", _cmd_ideal_test, "decide ideal membership of a square")
    sp.add_argument("square", help="square JSON file")

    sp = add("verify", _cmd_verify, "run seeded verification suites")
    sp.add_argument(
        "--suite", default="all", choices=SUITES, help="which suite to run"
    )
    sp.add_argument("--n-max", type=int, default=4, help="largest nilpotency degree")
    sp.add_argument("--p", default="2,5", help="comma list of primes")
    sp.add_argument("--seed", type=int, default=42, help="root seed")
    sp.add_argument(
        "--samples", type=int, default=16, help="random instances per context"
    )

    return parser


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:]) if argv is None else list(argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 0 if e.code in (0, None) else 2
    try:
        payload, code = args.handler(args, argv)
    except jsonio.InputError as e:
        print(json.dumps({"error": str(e)}), file=sys.stderr)
        return 2
    except ValueError as e:
        print(json.dumps({"error": f"invalid input: {e}"}), file=sys.stderr)
        return 2
    _emit(payload, args)
    return code


if __name__ == "__main__":
    sys.exit(main())
