"""Edit-based linguistic steganography with a masked language model."""

from .bits import BitCursor, BitString, chunk_size
from .backends import (BackendError, BigramBackend, Distribution, HashBackend,
                       ModelBackend, TableBackend)
from .codec import (CandidateSet, CapacityExhausted, DecodeMismatch, HeaderUnderflow,
                    StegoResult, candidate_set, check_retokenization_safe, decode,
                    encode, encode_sentence)
from .config import ConfigError, Framing, StegoConfig, validate_config
from .descriptor import DescriptorMismatch, build_descriptor, parse_descriptor, \
    verify_descriptor
from .eligibility import EligibilityClass, StopwordList, classify
from .harness import (CapacityReport, DistortionReport, audit_distortion, load_corpus,
                      measure_capacity, sweep, sweep_csv)
from .planner import compute_mask_plan
from .tokenizer import Vocabulary, split_sentences

__version__ = "0.1.0"

__all__ = [
    "BitCursor", "BitString", "chunk_size",
    "BackendError", "BigramBackend", "Distribution", "HashBackend", "ModelBackend",
    "TableBackend",
    "CandidateSet", "CapacityExhausted", "DecodeMismatch", "HeaderUnderflow",
    "StegoResult", "candidate_set", "check_retokenization_safe", "decode", "encode",
    "encode_sentence",
    "ConfigError", "Framing", "StegoConfig", "validate_config",
    "DescriptorMismatch", "build_descriptor", "parse_descriptor", "verify_descriptor",
    "EligibilityClass", "StopwordList", "classify",
    "CapacityReport", "DistortionReport", "audit_distortion", "load_corpus",
    "measure_capacity", "sweep", "sweep_csv",
    "compute_mask_plan",
    "Vocabulary", "split_sentences",
]
