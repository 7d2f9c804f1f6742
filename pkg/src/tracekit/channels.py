"""Generative trace channels.

A :class:`ModelSpec` names one of nine channel kinds plus its parameters;
``generate_trace`` draws a single trace by literally composing the primitive
operations in the kind's definition, and ``generate_trace_set`` draws T
traces on independent per-trace substreams, so trace i depends only on
(master seed, stream key, i).

``sample_trace_counts`` is a vectorised sampler for the same distributions
used by the large-sample statistical checks; it aggregates outcome counts
without materialising per-trace streams or strings.
"""

from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from .core import (
    DNA,
    Alphabet,
    ModelParams,
    RandomStream,
    mutate,
    random_string,
    sample_random_leq_t,
    sample_trim_pair,
    trim,
    trim_prefix,
    trim_suffix,
)
from .errors import ArityError, ModelParamError, TraceLengthError

__all__ = [
    "TRIM_SUFFIX_AND_EXTEND",
    "SUFFIX_EXTEND_TRIM_SUFFIX",
    "SUFFIX_EXTEND_MUTATE_TRIM_SUFFIX",
    "TRIM_AND_EXTEND",
    "MUTATE_TRIM_AND_EXTEND",
    "EXTEND_MUTATE_TRIM",
    "CONCAT2",
    "VDJ",
    "DELETION",
    "KINDS",
    "ModelSpec",
    "TraceSet",
    "normalize_seeds",
    "generate_trace",
    "generate_trace_set",
    "sample_trace_counts",
    "sample_deletion_bit_means",
]

TRIM_SUFFIX_AND_EXTEND = "trim-suffix-and-extend"
SUFFIX_EXTEND_TRIM_SUFFIX = "suffix-extend-trim-suffix"
SUFFIX_EXTEND_MUTATE_TRIM_SUFFIX = "suffix-extend-mutate-trim-suffix"
TRIM_AND_EXTEND = "trim-and-extend"
MUTATE_TRIM_AND_EXTEND = "mutate-trim-and-extend"
EXTEND_MUTATE_TRIM = "extend-mutate-trim"
CONCAT2 = "concat2-suffix-extend-trim-suffix"
VDJ = "vdj"
DELETION = "deletion"

KINDS = (
    TRIM_SUFFIX_AND_EXTEND,
    SUFFIX_EXTEND_TRIM_SUFFIX,
    SUFFIX_EXTEND_MUTATE_TRIM_SUFFIX,
    TRIM_AND_EXTEND,
    MUTATE_TRIM_AND_EXTEND,
    EXTEND_MUTATE_TRIM,
    CONCAT2,
    VDJ,
    DELETION,
)

_REQUIRED_PARAMS = {
    TRIM_SUFFIX_AND_EXTEND: frozenset(),
    SUFFIX_EXTEND_TRIM_SUFFIX: frozenset({"t"}),
    SUFFIX_EXTEND_MUTATE_TRIM_SUFFIX: frozenset({"t", "epsilon"}),
    TRIM_AND_EXTEND: frozenset(),
    MUTATE_TRIM_AND_EXTEND: frozenset({"epsilon"}),
    EXTEND_MUTATE_TRIM: frozenset({"t", "epsilon"}),
    CONCAT2: frozenset({"t"}),
    VDJ: frozenset({"t", "epsilon"}),
    DELETION: frozenset({"q"}),
}

# kinds whose traces always have the seed's length
_LENGTH_PRESERVING = frozenset({TRIM_SUFFIX_AND_EXTEND, TRIM_AND_EXTEND, MUTATE_TRIM_AND_EXTEND})


@dataclass(frozen=True)
class ModelSpec:
    """A channel kind, its parameters, its alphabet, and an optional
    multi-seed arrangement (an int M for single-seed kinds, a triple
    (M_v, M_d, M_j) for the VDJ kind)."""

    kind: str
    params: ModelParams = field(default_factory=ModelParams)
    alphabet: Alphabet = DNA
    multi_seed: int | tuple[int, int, int] | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ModelParamError(f"unknown model kind {self.kind!r}; known kinds: {', '.join(KINDS)}")
        required = _REQUIRED_PARAMS[self.kind]
        for name in ("t", "epsilon", "q"):
            have = getattr(self.params, name) is not None
            if name in required and not have:
                raise ModelParamError(f"model kind {self.kind!r} requires parameter {name!r}")
            if name not in required and have:
                raise ModelParamError(f"model kind {self.kind!r} does not accept parameter {name!r}")
        if self.multi_seed is not None:
            if self.kind == VDJ:
                ok = (
                    isinstance(self.multi_seed, tuple)
                    and len(self.multi_seed) == 3
                    and all(isinstance(m, int) and m >= 1 for m in self.multi_seed)
                )
                if not ok:
                    raise ModelParamError("VDJ multi_seed must be a triple of ints >= 1")
            elif self.kind == CONCAT2:
                raise ModelParamError("multi_seed is not supported for the concatenation kind")
            else:
                if not (isinstance(self.multi_seed, int) and self.multi_seed >= 1):
                    raise ModelParamError("multi_seed must be an int >= 1")

    @property
    def seed_arity(self) -> int:
        if self.kind == CONCAT2:
            return 2
        if self.kind == VDJ:
            return 3
        return 1

    @property
    def preserves_length(self) -> bool:
        return self.kind in _LENGTH_PRESERVING

    def max_trace_length(self, seed_lengths) -> int:
        """Upper bound on trace length given seed lengths (in arity order)."""
        t = self.params.t or 0
        if self.kind in _LENGTH_PRESERVING or self.kind == DELETION:
            return max(seed_lengths)
        if self.kind in (SUFFIX_EXTEND_TRIM_SUFFIX, SUFFIX_EXTEND_MUTATE_TRIM_SUFFIX):
            return max(seed_lengths) + t
        if self.kind == EXTEND_MUTATE_TRIM:
            return max(seed_lengths) + 2 * t
        if self.kind == CONCAT2:
            return sum(seed_lengths[:2]) + 2 * t
        if self.kind == VDJ:
            nv, nd, nj = seed_lengths
            return nv + nd + 2 * t + nj
        raise ModelParamError(self.kind)


@dataclass(frozen=True)
class TraceSet:
    """Traces plus the provenance needed to regenerate them."""

    traces: tuple[str, ...]
    model: ModelSpec
    master_seed: int | None = None
    stream_key: tuple[int, ...] | None = None
    seed_ids: tuple | None = None

    def __len__(self) -> int:
        return len(self.traces)

    def __iter__(self):
        return iter(self.traces)

    def __getitem__(self, i):
        return self.traces[i]


def _validated_seed_group(seeds, model: ModelSpec, role: str, equal_length: bool) -> tuple[str, ...]:
    if isinstance(seeds, str):
        group = (seeds,)
    else:
        group = tuple(seeds)
        if not group or not all(isinstance(s, str) for s in group):
            raise ArityError(f"{role} seeds must be a string or a non-empty collection of strings")
    for s in group:
        model.alphabet.validate(s)
    if len(set(group)) != len(group):
        raise ArityError(f"duplicate {role} seeds in a seed set")
    if equal_length and len({len(s) for s in group}) > 1:
        raise ArityError(f"{role} seeds in a set must share one length under kind {model.kind!r}")
    return tuple(sorted(group, key=model.alphabet.sort_key))


def normalize_seeds(model: ModelSpec, seeds):
    """Canonicalise seeds per the model's arity.

    Returns a tuple of seed strings for single-seed kinds (sorted, distinct;
    length > 1 means a uniform seed set), a (s1, s2) pair for concatenation,
    or a triple of seed tuples for VDJ.
    """
    if model.kind == CONCAT2:
        pair = (seeds,) if isinstance(seeds, str) else tuple(seeds)
        if len(pair) != 2:
            raise ArityError("the concatenation kind takes exactly 2 seeds (s1, s2)")
        s1, s2 = pair
        if not isinstance(s1, str) or not isinstance(s2, str):
            raise ArityError("concatenation seeds must be strings")
        model.alphabet.validate(s1)
        model.alphabet.validate(s2)
        if len(s1) != len(s2):
            raise ArityError("concatenation seeds must have equal length")
        return (s1, s2)
    if model.kind == VDJ:
        try:
            v, d, j = seeds
        except (TypeError, ValueError):
            raise ArityError("the VDJ kind takes exactly 3 seeds (v, d, j), each a string or a set") from None
        norm = (
            _validated_seed_group(v, model, "v", equal_length=False),
            _validated_seed_group(d, model, "d", equal_length=False),
            _validated_seed_group(j, model, "j", equal_length=False),
        )
        if model.multi_seed is not None:
            for group, m, role in zip(norm, model.multi_seed, "vdj"):
                if len(group) != m:
                    raise ArityError(f"expected {m} {role} seeds, got {len(group)}")
        elif any(len(g) != 1 for g in norm):
            raise ArityError("VDJ seed sets need a multi_seed=(M_v, M_d, M_j) model")
        return norm
    group = _validated_seed_group(seeds, model, "seed", equal_length=model.preserves_length)
    expected = model.multi_seed if model.multi_seed is not None else 1
    if len(group) != expected:
        raise ArityError(f"expected {expected} seed(s) for kind {model.kind!r}, got {len(group)}")
    return group


def _one_single_seed(kind: str, s: str, p: ModelParams, ab: Alphabet, rng: RandomStream) -> str:
    n = len(s)
    if kind == TRIM_SUFFIX_AND_EXTEND:
        k = int(rng.gen.integers(0, n + 1))
        return trim_suffix(s, k) + random_string(k, rng, ab)
    if kind == SUFFIX_EXTEND_TRIM_SUFFIX:
        k = int(rng.gen.integers(0, n + 1))
        return trim_suffix(s, k) + sample_random_leq_t(p.t, rng, ab)
    if kind == SUFFIX_EXTEND_MUTATE_TRIM_SUFFIX:
        k = int(rng.gen.integers(0, n + 1))
        return mutate(trim_suffix(s, k), p.epsilon, rng, ab) + sample_random_leq_t(p.t, rng, ab)
    if kind == TRIM_AND_EXTEND:
        l, k = sample_trim_pair(n, rng)
        return random_string(l, rng, ab) + trim(s, l, k) + random_string(k, rng, ab)
    if kind == MUTATE_TRIM_AND_EXTEND:
        l, k = sample_trim_pair(n, rng)
        filled = random_string(l, rng, ab) + trim(s, l, k) + random_string(k, rng, ab)
        return mutate(filled, p.epsilon, rng, ab)
    if kind == EXTEND_MUTATE_TRIM:
        l, k = sample_trim_pair(n, rng)
        middle = mutate(trim(s, l, k), p.epsilon, rng, ab)
        left = sample_random_leq_t(p.t, rng, ab)
        right = sample_random_leq_t(p.t, rng, ab)
        return left + middle + right
    if kind == DELETION:
        if n == 0:
            return ""
        kept = rng.gen.random(n) >= p.q
        return "".join(ch for ch, keep in zip(s, kept) if keep)
    raise ModelParamError(f"{kind!r} is not a single-seed kind")


def _generate_one(model: ModelSpec, norm, rng: RandomStream):
    """Draw one trace; returns (trace, seed_id or None)."""
    p, ab = model.params, model.alphabet
    if model.kind == CONCAT2:
        s1, s2 = norm
        k1 = int(rng.gen.integers(0, len(s1) + 1))
        part1 = trim_suffix(s1, k1) + sample_random_leq_t(p.t, rng, ab)
        k2 = int(rng.gen.integers(0, len(s2) + 1))
        part2 = trim_suffix(s2, k2) + sample_random_leq_t(p.t, rng, ab)
        return part1 + part2, None
    if model.kind == VDJ:
        vs, ds, js = norm
        if len(vs) > 1 or len(ds) > 1 or len(js) > 1:
            iv = int(rng.gen.integers(0, len(vs)))
            idx = int(rng.gen.integers(0, len(ds)))
            ij = int(rng.gen.integers(0, len(js)))
        else:
            iv = idx = ij = 0
        v, d, j = vs[iv], ds[idx], js[ij]
        kv = int(rng.gen.integers(0, len(v) + 1))
        part_v = trim_suffix(v, kv)
        l, k = sample_trim_pair(len(d), rng)
        middle = trim(d, l, k)
        left = sample_random_leq_t(p.t, rng, ab)
        right = sample_random_leq_t(p.t, rng, ab)
        kj = int(rng.gen.integers(0, len(j) + 1))
        part_j = trim_prefix(j, kj)
        whole = part_v + left + middle + right + part_j
        return mutate(whole, p.epsilon, rng, ab), (iv, idx, ij)
    if len(norm) > 1:
        i = int(rng.gen.integers(0, len(norm)))
        return _one_single_seed(model.kind, norm[i], p, ab, rng), i
    return _one_single_seed(model.kind, norm[0], p, ab, rng), None


def generate_trace(model: ModelSpec, seeds, rng: RandomStream) -> str:
    """Draw a single trace by composing the model's primitive operations."""
    norm = normalize_seeds(model, seeds)
    trace, _ = _generate_one(model, norm, rng)
    _check_trace_length(model, norm, trace)
    return trace


def _check_trace_length(model: ModelSpec, norm, trace: str) -> None:
    if model.kind == VDJ:
        bound = max(len(s) for s in norm[0]) + max(len(s) for s in norm[1]) + 2 * model.params.t + max(
            len(s) for s in norm[2]
        )
    elif model.kind == CONCAT2:
        bound = model.max_trace_length((len(norm[0]), len(norm[1])))
    else:
        bound = model.max_trace_length([len(s) for s in norm])
    if model.preserves_length:
        if len(trace) != bound:
            raise TraceLengthError(f"internal error: trace length {len(trace)} != seed length {bound}")
    elif len(trace) > bound:
        raise TraceLengthError(f"internal error: trace length {len(trace)} exceeds bound {bound}")


def generate_trace_set(model: ModelSpec, seeds, T: int, rng: RandomStream) -> TraceSet:
    """Draw T traces on per-trace substreams rng.child(0..T-1).

    Trace i is a pure function of (master seed, stream key, i): regenerating
    with the same stream reproduces the set bitwise, and trace order is by
    substream index.
    """
    if T < 0:
        raise ModelParamError("T must be non-negative")
    norm = normalize_seeds(model, seeds)
    traces = []
    seed_ids = []
    for i in range(T):
        trace, sid = _generate_one(model, norm, rng.child(i))
        _check_trace_length(model, norm, trace)
        traces.append(trace)
        seed_ids.append(sid)
    has_ids = any(sid is not None for sid in seed_ids)
    return TraceSet(
        traces=tuple(traces),
        model=model,
        master_seed=rng.master_seed,
        stream_key=rng.key,
        seed_ids=tuple(seed_ids) if has_ids else None,
    )


# ---------------------------------------------------------------------------
# vectorised bulk sampling
#
# The builders below draw whole blocks of traces with numpy and pack each
# trace into a single int64 (the index of the string in an infinite
# |A|-ary trie), which np.unique can aggregate quickly.  Random extension
# symbols are i.i.d. uniform, so filling a whole rectangle of uniform draws
# and masking the regions that belong to the trace gives the same
# distribution as the per-trace path.

_PAD = -1


def _pack(codes: np.ndarray, lengths: np.ndarray, size: int) -> np.ndarray:
    b, width = codes.shape
    if (width + 1) * np.log2(size + 1) > 62:
        raise ModelParamError("trace space too large to pack into 64-bit outcome ids")
    val = np.zeros(b, dtype=np.int64)
    cols = np.arange(width)
    for col in range(width):
        live = cols[col] < lengths
        val = np.where(live, val * size + codes[:, col] + 1, val)
    return val


def _unpack(val: int, size: int, alphabet: Alphabet) -> str:
    out = []
    while val:
        val, rem = divmod(val - 1, size)
        out.append(alphabet.symbols[rem])
    return "".join(reversed(out))


def _triangle_pairs(n: int, b: int, gen: np.random.Generator):
    total = (n + 1) * (n + 2) // 2
    u = gen.integers(0, total, size=b)
    d = ((np.sqrt(8.0 * u + 1.0) - 1.0) // 2).astype(np.int64)
    d[d * (d + 1) // 2 > u] -= 1
    d[(d + 1) * (d + 2) // 2 <= u] += 1
    l = u - d * (d + 1) // 2
    return l, d - l


def _mutate_block(codes, eps, size, gen):
    if eps == 0.0:
        return codes
    hit = gen.random(codes.shape) < eps
    off = gen.integers(1, size, size=codes.shape)
    return np.where(hit, (codes + off) % size, codes)


def _block_single(kind, s_codes, p, size, b, gen):
    """Return (codes, lengths) for b traces of a single-seed kind."""
    n = s_codes.shape[0]
    cols = None
    if kind == TRIM_SUFFIX_AND_EXTEND:
        keep = n - gen.integers(0, n + 1, size=b)
        uni = gen.integers(0, size, size=(b, n))
        cols = np.arange(n)
        codes = np.where(cols[None, :] < keep[:, None], s_codes[None, :], uni)
        return codes, np.full(b, n)
    if kind in (SUFFIX_EXTEND_TRIM_SUFFIX, SUFFIX_EXTEND_MUTATE_TRIM_SUFFIX):
        keep = n - gen.integers(0, n + 1, size=b)
        ext = gen.integers(0, p.t + 1, size=b)
        width = n + p.t
        uni = gen.integers(0, size, size=(b, width))
        cols = np.arange(width)
        base = np.where(cols[None, :] < keep[:, None], np.pad(s_codes, (0, p.t)), uni)
        if kind == SUFFIX_EXTEND_MUTATE_TRIM_SUFFIX:
            mut = _mutate_block(base, p.epsilon, size, gen)
            base = np.where(cols[None, :] < keep[:, None], mut, base)
        return base, keep + ext
    if kind in (TRIM_AND_EXTEND, MUTATE_TRIM_AND_EXTEND):
        l, k = _triangle_pairs(n, b, gen)
        uni = gen.integers(0, size, size=(b, n))
        cols = np.arange(n)
        middle = (cols[None, :] >= l[:, None]) & (cols[None, :] < (n - k)[:, None])
        codes = np.where(middle, s_codes[None, :], uni)
        if kind == MUTATE_TRIM_AND_EXTEND:
            codes = _mutate_block(codes, p.epsilon, size, gen)
        return codes, np.full(b, n)
    if kind == EXTEND_MUTATE_TRIM:
        l, k = _triangle_pairs(n, b, gen)
        mid = n - l - k
        e1 = gen.integers(0, p.t + 1, size=b)
        e2 = gen.integers(0, p.t + 1, size=b)
        width = n + 2 * p.t
        cols = np.arange(width)
        src = np.clip(l[:, None] + cols[None, :] - e1[:, None], 0, max(n - 1, 0))
        mid_part = np.take(s_codes, src) if n else np.zeros((b, width), dtype=np.int64)
        mid_part = _mutate_block(mid_part, p.epsilon, size, gen)
        uni = gen.integers(0, size, size=(b, width))
        in_mid = (cols[None, :] >= e1[:, None]) & (cols[None, :] < (e1 + mid)[:, None])
        codes = np.where(in_mid, mid_part, uni)
        return codes, e1 + mid + e2
    if kind == DELETION:
        if n == 0:
            return np.zeros((b, 0), dtype=np.int64), np.zeros(b, dtype=np.int64)
        kept = gen.random((b, n)) >= p.q
        order = np.where(kept, np.cumsum(kept, axis=1) - 1, n)
        codes = np.full((b, n), 0, dtype=np.int64)
        rows = np.repeat(np.arange(b), n).reshape(b, n)
        codes[rows[kept], order[kept]] = np.broadcast_to(s_codes, (b, n))[kept]
        return codes, kept.sum(axis=1)
    raise ModelParamError(f"{kind!r} is not a single-seed kind")


def _block_traces(model: ModelSpec, norm, b: int, gen: np.random.Generator) -> np.ndarray:
    """Packed outcome ids for b traces of any model."""
    p, ab = model.params, model.alphabet
    size = ab.size
    if model.kind == CONCAT2:
        s1 = ab.encode(norm[0]).astype(np.int64)
        s2 = ab.encode(norm[1]).astype(np.int64)
        n1, n2 = len(norm[0]), len(norm[1])
        keep1 = n1 - gen.integers(0, n1 + 1, size=b)
        ext1 = gen.integers(0, p.t + 1, size=b)
        keep2 = n2 - gen.integers(0, n2 + 1, size=b)
        ext2 = gen.integers(0, p.t + 1, size=b)
        width = n1 + n2 + 2 * p.t
        cols = np.arange(width)[None, :]
        half1 = (keep1 + ext1)[:, None]
        uni = gen.integers(0, size, size=(b, width))
        part1 = np.where(cols < keep1[:, None], np.pad(s1, (0, width - n1)), uni)
        src2 = np.clip(cols - half1, 0, max(n2 - 1, 0))
        part2_codes = np.take(s2, src2) if n2 else uni
        in_seed2 = (cols >= half1) & (cols < half1 + keep2[:, None])
        codes = np.where(cols < half1, part1, np.where(in_seed2, part2_codes, uni))
        return _pack(codes, keep1 + ext1 + keep2 + ext2, size)
    if model.kind == VDJ:
        vs, ds, js = norm
        parts = []
        iv = gen.integers(0, len(vs), size=b)
        idx = gen.integers(0, len(ds), size=b)
        ij = gen.integers(0, len(js), size=b)
        for a in range(len(vs)):
            for bb in range(len(ds)):
                for cc in range(len(js)):
                    nsel = int(np.sum((iv == a) & (idx == bb) & (ij == cc)))
                    if nsel:
                        parts.append(_block_vdj_single(vs[a], ds[bb], js[cc], p, ab, nsel, gen))
        return np.concatenate(parts) if parts else np.zeros(0, dtype=np.int64)
    seeds = norm
    if len(seeds) > 1:
        pick = gen.integers(0, len(seeds), size=b)
        parts = []
        for i, s in enumerate(seeds):
            nsel = int(np.sum(pick == i))
            if nsel:
                codes, lengths = _block_single(model.kind, ab.encode(s).astype(np.int64), p, size, nsel, gen)
                parts.append(_pack(codes, lengths, size))
        return np.concatenate(parts) if parts else np.zeros(0, dtype=np.int64)
    codes, lengths = _block_single(model.kind, ab.encode(seeds[0]).astype(np.int64), p, size, b, gen)
    return _pack(codes, lengths, size)


def _block_vdj_single(v, d, j, p, ab, b, gen):
    size = ab.size
    nv, nd, nj = len(v), len(d), len(j)
    v_codes = ab.encode(v).astype(np.int64)
    d_codes = ab.encode(d).astype(np.int64)
    j_codes = ab.encode(j).astype(np.int64)
    a = nv - gen.integers(0, nv + 1, size=b)  # kept v prefix
    l, k = _triangle_pairs(nd, b, gen)
    mid = nd - l - k
    e1 = gen.integers(0, p.t + 1, size=b)
    e2 = gen.integers(0, p.t + 1, size=b)
    bj = nj - gen.integers(0, nj + 1, size=b)  # kept j suffix
    width = nv + nd + 2 * p.t + nj
    cols = np.arange(width)[None, :]
    av = a[:, None]
    mid_start = (a + e1)[:, None]
    mid_end = (a + e1 + mid)[:, None]
    suf_start = (a + e1 + mid + e2)[:, None]
    total = (a + e1 + mid + e2 + bj)[:, None]
    uni = gen.integers(0, size, size=(b, width))
    out = np.where(cols < av, np.pad(v_codes, (0, width - nv)), uni)
    if nd:
        src_d = np.clip(l[:, None] + cols - mid_start, 0, nd - 1)
        out = np.where((cols >= mid_start) & (cols < mid_end), np.take(d_codes, src_d), out)
    if nj:
        src_j = np.clip((nj - bj)[:, None] + cols - suf_start, 0, nj - 1)
        out = np.where((cols >= suf_start) & (cols < total), np.take(j_codes, src_j), out)
    out = _mutate_block(out, p.epsilon, size, gen)
    return _pack(out, total[:, 0], size)


def sample_trace_counts(
    model: ModelSpec, seeds, T: int, rng: RandomStream, block: int = 1 << 16
) -> Counter:
    """Counter of trace -> occurrences over T vectorised draws.

    Distribution-identical to generate_trace (checked statistically in the
    test-suite), but orders of magnitude faster for large T.
    """
    norm = normalize_seeds(model, seeds)
    gen = rng.gen
    agg: Counter = Counter()
    done = 0
    packed_counts: dict[int, int] = {}
    while done < T:
        b = min(block, T - done)
        vals = _block_traces(model, norm, b, gen)
        uniq, cnt = np.unique(vals, return_counts=True)
        for u, n in zip(uniq.tolist(), cnt.tolist()):
            packed_counts[u] = packed_counts.get(u, 0) + n
        done += b
    for u, n in packed_counts.items():
        agg[_unpack(u, model.alphabet.size, model.alphabet)] = n
    return agg


def sample_deletion_bit_means(
    s: str, q: float, T: int, rng: RandomStream, block: int = 1 << 14
) -> np.ndarray:
    """Empirical zero-padded position means over T deletion-channel traces of
    a binary seed, computed without materialising the traces."""
    if any(ch not in "01" for ch in s):
        raise ModelParamError("bit means are defined for binary seeds")
    if not 0.0 <= q < 1.0:
        raise ModelParamError(f"q must lie in [0, 1), got {q!r}")
    n = len(s)
    ones = np.frombuffer(s.encode(), dtype=np.uint8) == ord("1")
    gen = rng.gen
    totals = np.zeros(n, dtype=np.int64)
    done = 0
    while done < T:
        b = min(block, T - done)
        kept = gen.random((b, n)) >= q
        ranks = np.cumsum(kept, axis=1) - 1
        sel = kept & ones[None, :]
        totals += np.bincount(ranks[sel], minlength=n)[:n]
        done += b
    return totals / float(T)
