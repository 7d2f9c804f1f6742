"""tracekit: trace-channel simulation, exact likelihoods, and seed
reconstruction over small alphabets.

The package models processes that corrupt a seed string into a trace
(trimming, random extension, symbol mutation, independent deletion,
segment concatenation) and provides exact log-space likelihoods, exact
maximum-likelihood reconstruction (prefix-trie and brute-force), fast
heuristics, population recovery for seed mixtures, and reproducible Monte
Carlo benchmarking on top of them.
"""

from . import bench, channels, exact, heuristics, io, kernels, multiseed
from .channels import (
    CONCAT2,
    DELETION,
    EXTEND_MUTATE_TRIM,
    KINDS,
    MUTATE_TRIM_AND_EXTEND,
    SUFFIX_EXTEND_MUTATE_TRIM_SUFFIX,
    SUFFIX_EXTEND_TRIM_SUFFIX,
    TRIM_AND_EXTEND,
    TRIM_SUFFIX_AND_EXTEND,
    VDJ,
    ModelSpec,
    TraceSet,
    generate_trace,
    generate_trace_set,
    normalize_seeds,
    sample_trace_counts,
)
from .core import BINARY, DNA, Alphabet, ModelParams, RandomStream
from .errors import (
    AlphabetError,
    ArityError,
    BracketingError,
    BudgetError,
    ConfigError,
    FormatError,
    InvalidTrimError,
    ModelParamError,
    TraceLengthError,
    TracekitError,
)
from .exact import PrefixTrie, brute_force_mle, build_trie, mle_trim_suffix_and_extend
from .likelihood import (
    IMPOSSIBLE,
    lp_concat2,
    lp_deletion,
    lp_extend_mutate_trim,
    lp_multiseed,
    lp_mutate_trim_and_extend,
    lp_suffix_extend_mutate_trim_suffix,
    lp_suffix_extend_trim_suffix,
    lp_trace,
    lp_trace_set,
    lp_trim_and_extend,
    lp_trim_suffix_and_extend,
    lp_vdj,
    lp_vdj_multi,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # alphabets, parameters, randomness
    "Alphabet",
    "DNA",
    "BINARY",
    "ModelParams",
    "RandomStream",
    # models and generation
    "ModelSpec",
    "TraceSet",
    "KINDS",
    "TRIM_SUFFIX_AND_EXTEND",
    "SUFFIX_EXTEND_TRIM_SUFFIX",
    "SUFFIX_EXTEND_MUTATE_TRIM_SUFFIX",
    "TRIM_AND_EXTEND",
    "MUTATE_TRIM_AND_EXTEND",
    "EXTEND_MUTATE_TRIM",
    "CONCAT2",
    "VDJ",
    "DELETION",
    "normalize_seeds",
    "generate_trace",
    "generate_trace_set",
    "sample_trace_counts",
    # likelihoods
    "IMPOSSIBLE",
    "lp_trim_suffix_and_extend",
    "lp_suffix_extend_trim_suffix",
    "lp_suffix_extend_mutate_trim_suffix",
    "lp_trim_and_extend",
    "lp_mutate_trim_and_extend",
    "lp_extend_mutate_trim",
    "lp_concat2",
    "lp_vdj",
    "lp_vdj_multi",
    "lp_deletion",
    "lp_multiseed",
    "lp_trace",
    "lp_trace_set",
    # exact reconstruction
    "PrefixTrie",
    "build_trie",
    "mle_trim_suffix_and_extend",
    "brute_force_mle",
    # errors
    "TracekitError",
    "AlphabetError",
    "InvalidTrimError",
    "ArityError",
    "TraceLengthError",
    "ModelParamError",
    "BudgetError",
    "FormatError",
    "ConfigError",
    "BracketingError",
    # submodules
    "bench",
    "channels",
    "exact",
    "heuristics",
    "io",
    "kernels",
    "multiseed",
]
