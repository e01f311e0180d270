"""Executable Singleton-type bounds for quantum and entanglement-assisted codes."""

from .bounds import (
    BoundVerdict,
    CodeParams,
    RateRegion,
    classify,
    entropic_classify,
    rate_region,
    region_contains,
)
from .errors import SingletonLabError
from .gf import erasure_decode, make_field, min_distance, reed_solomon
from .propagate import CodeRecord, closure, theorem5_execute
from .qstate import (
    DensityMatrix,
    TensorState,
    avg_block_entropy,
    conditional_entropy,
    entropy,
    mutual_information,
    partial_trace,
)
from .stabilizer import PauliWord, StabilizerCode, knill_laflamme_check, purified_code_state
from .verify import check_decoupling, check_entropic_singleton, check_lemma1, check_lemma2, fuzz

__all__ = [
    "BoundVerdict", "CodeParams", "CodeRecord", "DensityMatrix", "PauliWord", "RateRegion",
    "SingletonLabError", "StabilizerCode", "TensorState", "avg_block_entropy", "check_decoupling",
    "check_entropic_singleton", "check_lemma1", "check_lemma2", "classify", "closure",
    "conditional_entropy", "entropic_classify", "entropy", "erasure_decode", "fuzz",
    "knill_laflamme_check", "make_field", "min_distance", "mutual_information", "partial_trace",
    "purified_code_state", "rate_region", "reed_solomon", "region_contains", "theorem5_execute",
]
