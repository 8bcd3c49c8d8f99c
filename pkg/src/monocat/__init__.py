"""Exact computations with module categories over k[x]/(x^n).

The package provides, over a prime field GF(p):

  * dense exact linear algebra (:mod:`monocat.fieldmat`);
  * finite modules over the truncated polynomial ring, their Jordan
    classification, Hom/tensor/Tor, projective covers and syzygies,
    stable Hom and the transpose (:mod:`monocat.modules`);
  * categories of morphisms between such modules, with the mono/epi full
    subcategories and ideal-membership tests (:mod:`monocat.morphcat`);
  * finitely presented functors on those categories, flat resolutions and
    the six-plus-two functor calculus relating them to plain modules
    (:mod:`monocat.functors`);
  * the stable endomorphism algebra of the non-projective blocks and
    modules over it (:mod:`monocat.stable_algebra`);
  * the equivalences carrying monomorphisms/epimorphisms to modules over
    that algebra (:mod:`monocat.equivalences`);
  * a JSON command line interface, ``monocat`` (:mod:`monocat.cli`).
"""

from .fieldmat import FpContext, FpMatrix, Subspace
from .modules import (
    JordanType,
    LambdaModule,
    LambdaMorphism,
    RingCtx,
    hom_basis,
    jordan_block,
    jordan_type,
    module_from_blocks,
    projective_cover,
    stable_hom,
    syzygy,
    tensor,
    tor1,
    transpose,
)

__version__ = "0.1.0"

__all__ = [
    "FpContext",
    "FpMatrix",
    "JordanType",
    "LambdaModule",
    "LambdaMorphism",
    "RingCtx",
    "Subspace",
    "hom_basis",
    "jordan_block",
    "jordan_type",
    "module_from_blocks",
    "projective_cover",
    "stable_hom",
    "syzygy",
    "tensor",
    "tor1",
    "transpose",
    "__version__",
]
