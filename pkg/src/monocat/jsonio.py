"""JSON encoding and validation for CLI inputs and outputs.

All decoding errors raise InputError, which the CLI maps to exit code 2.
Decoders validate structure first (types, shapes, ranges) and then the
algebraic constraints (nilpotency, intertwining, kind), so a report can
always say which contract the input broke.
"""
from __future__ import annotations

import json
from typing import Any

import numpy as np

from .fieldmat import FpMatrix, is_prime
from .modules import (
    LambdaModule,
    LambdaMorphism,
    RingCtx,
    jordan_type,
    module_from_blocks,
)
from .morphcat import (
    IDEALS,
    EpiViolation,
    KindMismatch,
    MonoViolation,
    MorphMap,
    MorphObject,
    make,
)
from .functors import CoFunctor, ContraFunctor

__all__ = [
    "InputError",
    "decode_functor",
    "decode_module",
    "decode_morphism",
    "decode_square",
    "encode_module",
    "encode_morphism",
    "encode_square",
    "load_json",
]


class InputError(ValueError):
    """Malformed or contract-violating input; CLI exit code 2."""


def load_json(path: str) -> Any:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as e:
        raise InputError(f"cannot read {path}: {e}") from e
    except json.JSONDecodeError as e:
        raise InputError(f"{path} is not valid JSON: {e}") from e


def _require(cond: bool, msg: str) -> None:
    if not cond:
        raise InputError(msg)


def _int_field(obj: dict, name: str) -> int:
    _require(name in obj, f"missing field {name!r}")
    v = obj[name]
    _require(isinstance(v, int) and not isinstance(v, bool), f"{name!r} must be an integer")
    return v


def _int_matrix(obj: Any, name: str, rows: int, cols: int, p: int) -> FpMatrix:
    _require(isinstance(obj, list), f"{name!r} must be a list of rows")
    _require(len(obj) == rows, f"{name!r} must have {rows} rows, got {len(obj)}")
    for r in obj:
        _require(isinstance(r, list), f"{name!r} rows must be lists")
        _require(len(r) == cols, f"{name!r} rows must have {cols} entries")
        for v in r:
            _require(
                isinstance(v, int) and not isinstance(v, bool),
                f"{name!r} entries must be integers",
            )
    if rows == 0 or cols == 0:
        return FpMatrix(p, np.zeros((rows, cols), dtype=np.int64))
    return FpMatrix(p, obj)


def decode_module(obj: Any, ctx: RingCtx | None = None) -> LambdaModule:
    """Parse {"p","n","dim","x"} or {"p","n","blocks"} into a module."""
    _require(isinstance(obj, dict), "module must be a JSON object")
    p = _int_field(obj, "p")
    n = _int_field(obj, "n")
    _require(is_prime(p), f"p must be prime, got {p}")
    _require(n >= 1, f"n must be >= 1, got {n}")
    if ctx is not None:
        _require(
            ctx.p == p and ctx.n == n,
            f"module is over p={p}, n={n}; expected p={ctx.p}, n={ctx.n}",
        )
    else:
        ctx = RingCtx(p, n)
    if "blocks" in obj:
        blocks = obj["blocks"]
        _require(isinstance(blocks, list), "'blocks' must be a list")
        for b in blocks:
            _require(
                isinstance(b, int) and not isinstance(b, bool) and 1 <= b <= n,
                f"block sizes must be integers in 1..{n}",
            )
        return module_from_blocks(ctx, sorted(blocks, reverse=True))
    dim = _int_field(obj, "dim")
    _require(dim >= 0, "dim must be >= 0")
    x = _int_matrix(obj.get("x"), "x", dim, dim, p)
    try:
        return LambdaModule(ctx, dim, x)
    except ValueError as e:
        raise InputError(f"invalid module action: {e}") from e


def encode_module(m: LambdaModule, blocks: bool = False) -> dict:
    if blocks:
        return {
            "p": m.ctx.p,
            "n": m.ctx.n,
            "blocks": list(jordan_type(m).blocks),
        }
    return {
        "p": m.ctx.p,
        "n": m.ctx.n,
        "dim": m.dim,
        "x": m.x.to_lists(),
    }


def decode_morphism(
    obj: Any, require_kind: str | None = None
) -> MorphObject:
    """Parse {"module_src","module_dst","f","kind"} into a tagged map."""
    _require(isinstance(obj, dict), "morphism must be a JSON object")
    _require("module_src" in obj, "missing field 'module_src'")
    _require("module_dst" in obj, "missing field 'module_dst'")
    src = decode_module(obj["module_src"])
    dst = decode_module(obj["module_dst"], ctx=src.ctx)
    f = _int_matrix(obj.get("f"), "f", dst.dim, src.dim, src.ctx.p)
    kind = obj.get("kind", "H")
    _require(kind in ("H", "S", "F"), f"kind must be 'H', 'S' or 'F', got {kind!r}")
    if require_kind is not None:
        _require(
            kind == require_kind,
            f"this command needs a {require_kind!r}-kind morphism, got {kind!r}",
        )
    try:
        morphism = LambdaMorphism(src, dst, f)
    except ValueError as e:
        raise InputError(f"matrix does not commute with the action: {e}") from e
    try:
        return make(morphism, kind)
    except (MonoViolation, EpiViolation, KindMismatch) as e:
        raise InputError(str(e)) from e


def encode_morphism(o: MorphObject) -> dict:
    return {
        "module_src": encode_module(o.src),
        "module_dst": encode_module(o.dst),
        "f": o.f.f.to_lists(),
        "kind": o.kind,
    }


def decode_square(obj: Any) -> tuple[str, MorphMap]:
    """Parse {"ideal","src","dst","sigma1","sigma2"} into an ideal name
    plus a commuting square between the two decoded objects."""
    _require(isinstance(obj, dict), "square must be a JSON object")
    ideal = obj.get("ideal")
    _require(
        ideal in IDEALS, f"'ideal' must be one of {', '.join(IDEALS)}, got {ideal!r}"
    )
    kind = "S" if ideal in ("V", "X") else "F"
    _require("src" in obj, "missing field 'src'")
    _require("dst" in obj, "missing field 'dst'")
    src = decode_morphism(obj["src"], require_kind=kind)
    dst = decode_morphism(obj["dst"], require_kind=kind)
    _require(
        src.ctx == dst.ctx,
        "the two objects of the square live over different rings",
    )
    p = src.ctx.p
    s1 = _int_matrix(obj.get("sigma1"), "sigma1", dst.src.dim, src.src.dim, p)
    s2 = _int_matrix(obj.get("sigma2"), "sigma2", dst.dst.dim, src.dst.dim, p)
    try:
        sigma1 = LambdaMorphism(src.src, dst.src, s1)
        sigma2 = LambdaMorphism(src.dst, dst.dst, s2)
    except ValueError as e:
        raise InputError(f"sigma matrix does not commute with the action: {e}") from e
    try:
        return ideal, MorphMap(src, dst, sigma1, sigma2)
    except ValueError as e:
        raise InputError(str(e)) from e


def encode_square(m: MorphMap) -> dict:
    return {
        "src": encode_morphism(m.src),
        "dst": encode_morphism(m.dst),
        "sigma1": m.sigma1.f.to_lists(),
        "sigma2": m.sigma2.f.to_lists(),
    }


def decode_functor(obj: Any) -> ContraFunctor | CoFunctor:
    """Parse {"kind":"contra","pres":{...}} / {"kind":"co","copres":{...}}."""
    _require(isinstance(obj, dict), "functor must be a JSON object")
    kind = obj.get("kind")
    _require(
        kind in ("contra", "co"), f"functor kind must be 'contra' or 'co', got {kind!r}"
    )
    if kind == "contra":
        _require("pres" in obj, "contravariant functor needs a 'pres' morphism")
        return ContraFunctor(decode_morphism(obj["pres"]).f)
    _require("copres" in obj, "covariant functor needs a 'copres' morphism")
    return CoFunctor(decode_morphism(obj["copres"]).f)
