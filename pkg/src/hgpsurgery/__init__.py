"""Code surgery on hypergraph-product codes over GF(2).

Bit-packed GF(2) linear algebra, chain complexes and mapping cones, surgery
gadget synthesis with expansion checks, fast-surgery verification, toric
studies and a command-line pipeline.
"""

__version__ = "0.1.0"

from .codes import CodeSpec, cyclic_repetition, emit_alist, hamming, parse_alist, repetition
from .complex import ChainComplex, homology, kunneth_check, product_distance_check, tensor_product
from .cone import ChainMap, cone_product_isomorphism_check, extract_css, mapping_cone, validate_map
from .distance import Distance
from .errors import SurgeryError
from .gadgets import cheeger_constant, relative_cheeger, synthesize, verify_conditions
from .gf2 import BinaryMatrix, BinaryVector
from .surgery import (
    SurgerySequence,
    build_compacted,
    build_deformed,
    build_hgp,
    canonical_basis,
    measured_logicals,
    verify_fast_conditions,
)

__all__ = [
    "BinaryMatrix",
    "BinaryVector",
    "ChainComplex",
    "ChainMap",
    "CodeSpec",
    "Distance",
    "SurgeryError",
    "SurgerySequence",
    "build_compacted",
    "build_deformed",
    "build_hgp",
    "canonical_basis",
    "cheeger_constant",
    "cone_product_isomorphism_check",
    "cyclic_repetition",
    "emit_alist",
    "extract_css",
    "hamming",
    "homology",
    "kunneth_check",
    "mapping_cone",
    "measured_logicals",
    "parse_alist",
    "product_distance_check",
    "relative_cheeger",
    "repetition",
    "synthesize",
    "tensor_product",
    "validate_map",
    "verify_conditions",
    "verify_fast_conditions",
]
