"""Ordinal largeness, fallow colorings and EM-density, checked and extracted."""

from ._backend import BACKEND
from .certificate import Certificate
from .colorings import PairColoring, encode_family, indicator, is_fallow, is_transitive
from .density import check_em_alpha_large, check_em_dense, refute_density
from .finset import FinSet, Interval
from .largeness import (
    decompose_large,
    is_alpha_large,
    is_alpha_sparse,
    least_large_endpoint,
    sparsify,
    union_split,
)
from .ordinal import Ordinal, parse_ordinal, step
from .witness import build_grouping, em_witness, fallow_base_witness, stabilize, verify_grouping

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "Certificate",
    "FinSet",
    "Interval",
    "Ordinal",
    "PairColoring",
    "build_grouping",
    "check_em_alpha_large",
    "check_em_dense",
    "decompose_large",
    "em_witness",
    "encode_family",
    "fallow_base_witness",
    "indicator",
    "is_alpha_large",
    "is_alpha_sparse",
    "is_fallow",
    "is_transitive",
    "least_large_endpoint",
    "parse_ordinal",
    "refute_density",
    "sparsify",
    "stabilize",
    "step",
    "union_split",
    "verify_grouping",
]
