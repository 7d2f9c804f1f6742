"""Backend selection for the hot string kernels.

The compiled extension (``tracekit._speedups``) is used when importable;
otherwise the pure-Python module ``tracekit._pure`` serves the same API.
Setting the environment variable ``TRACEKIT_PURE=1`` before import forces the
pure backend, which is how the benchmark script compares the two.
"""

import os

import numpy as np

from . import _pure

if os.environ.get("TRACEKIT_PURE"):
    _speedups = None
else:
    try:
        from . import _speedups
    except ImportError:
        _speedups = None

BACKEND = "pure" if _speedups is None else "compiled"


def _codes(s: str) -> np.ndarray:
    # fixed-width codepoints so the compiled kernels never see multi-byte symbols
    return np.frombuffer(s.encode("utf-32-le"), dtype=np.uint32)


def subsequence_count(s: str, c: str) -> int:
    """Number of distinct index sets under which c appears as a subsequence of s.

    Exact at any magnitude: the compiled path counts in 64-bit and defers to
    the big-int path on overflow.
    """
    if _speedups is None:
        return _pure.subsequence_count(s, c)
    try:
        return _speedups.subsequence_count_u64(_codes(s), _codes(c))
    except OverflowError:
        return _pure.subsequence_count(s, c)


def edit_distance(a: str, b: str, limit: int | None = None) -> int:
    """Levenshtein distance between a and b.

    With a limit, returns the exact distance when it is <= limit and
    limit + 1 otherwise (banded computation, much cheaper for small limits).
    """
    lim = -1 if limit is None else int(limit)
    if lim < -1:
        raise ValueError("limit must be None or >= 0")
    if _speedups is None:
        return _pure.edit_distance(a, b, lim)
    return _speedups.edit_distance(_codes(a), _codes(b), lim)
