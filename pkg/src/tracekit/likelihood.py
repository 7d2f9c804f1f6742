"""Exact trace log-probabilities for every channel model.

Each ``lp_*`` function returns the natural-log probability of observing one
trace given the seed(s); ``IMPOSSIBLE`` (-inf) marks probability zero.  The
latent trim/extension choices are summed out in closed form where one exists
and with small quadratic loops otherwise, always in log space at the end so
that long traces cannot underflow.

The two mutation models reduce bitwise to their mutation-free counterparts at
epsilon = 0 because both sides accumulate the same terms in the same order.
"""

import math
from collections import Counter
from dataclasses import dataclass

from . import channels as ch
from .core import DNA, Alphabet, lcp_len
from .errors import ModelParamError, TraceLengthError
from .kernels import subsequence_count

__all__ = [
    "IMPOSSIBLE",
    "LogProb",
    "MatchSummary",
    "subsequence_count",
    "lp_trim_suffix_and_extend",
    "lp_suffix_extend_trim_suffix",
    "lp_suffix_extend_mutate_trim_suffix",
    "lp_trim_and_extend",
    "lp_mutate_trim_and_extend",
    "lp_extend_mutate_trim",
    "lp_concat2",
    "lp_vdj",
    "lp_vdj_multi",
    "lp_multiseed",
    "lp_deletion",
    "lp_trace",
    "lp_trace_set",
    "logsumexp_list",
]

IMPOSSIBLE = float("-inf")
LogProb = float


def logsumexp_list(values) -> float:
    """log(sum(exp(v))) over a list that may be empty or contain -inf."""
    vals = [v for v in values if v != IMPOSSIBLE]
    if not vals:
        return IMPOSSIBLE
    m = max(vals)
    return m + math.log(math.fsum(math.exp(v - m) for v in vals))


@dataclass(frozen=True)
class MatchSummary:
    """Positionwise comparison of a trace against a seed.

    lcp                length of the longest common prefix
    prefix_mismatches  entry k = Hamming distance of the length-k prefixes
    match_runs         entry i = length of the run of matches starting at i
    """

    lcp: int
    prefix_mismatches: tuple[int, ...]
    match_runs: tuple[int, ...]

    @classmethod
    def of(cls, c: str, s: str) -> "MatchSummary":
        n = min(len(c), len(s))
        mis = [0] * (n + 1)
        for i in range(n):
            mis[i + 1] = mis[i] + (c[i] != s[i])
        runs = [0] * (n + 1)
        for i in range(n - 1, -1, -1):
            runs[i] = runs[i + 1] + 1 if c[i] == s[i] else 0
        return cls(lcp=lcp_len(c, s), prefix_mismatches=tuple(mis), match_runs=tuple(runs))


def _check_t(t: int) -> None:
    if not isinstance(t, int) or t < 0:
        raise ModelParamError(f"t must be a non-negative int, got {t!r}")


def _check_epsilon(epsilon: float) -> None:
    if not 0.0 <= epsilon <= 1.0:
        raise ModelParamError(f"epsilon must lie in [0, 1], got {epsilon!r}")


def lp_trim_suffix_and_extend(c: str, s: str, alphabet: Alphabet = DNA) -> LogProb:
    """Trace probability when a uniform suffix of s is replaced by uniform
    random symbols.  Requires |c| = |s|; closed form in the shared-prefix
    length m.
    """
    if len(c) != len(s):
        raise TraceLengthError(
            f"trace length {len(c)} != seed length {len(s)} (this model preserves length)"
        )
    size = alphabet.size
    m = lcp_len(c, s)
    # (1/(n+1)) * sum_{k=0..m} size^(k-n)  ==  (size^(m+1) - 1) / ((n+1) (size-1) size^n)
    log_top = (m + 1) * math.log(size) + math.log1p(-float(size) ** -(m + 1))
    return log_top - math.log(len(s) + 1) - len(s) * math.log(size) - math.log(size - 1)


def lp_suffix_extend_trim_suffix(c: str, s: str, t: int, alphabet: Alphabet = DNA) -> LogProb:
    """Trace probability under trim-a-suffix then extend-by-at-most-t."""
    _check_t(t)
    size = float(alphabet.size)
    lo = max(len(c) - t, 0)
    hi = MatchSummary.of(c, s).lcp
    if hi < lo:
        return IMPOSSIBLE
    acc = 0.0
    for k in range(lo, hi + 1):
        acc += size ** (k - len(c))
    return math.log(acc) - math.log((len(s) + 1) * (t + 1))


def lp_suffix_extend_mutate_trim_suffix(
    c: str, s: str, t: int, epsilon: float, alphabet: Alphabet = DNA
) -> LogProb:
    """Like lp_suffix_extend_trim_suffix with per-symbol substitution noise on
    the kept prefix before extension."""
    _check_t(t)
    _check_epsilon(epsilon)
    size = float(alphabet.size)
    lo = max(len(c) - t, 0)
    hi = min(len(c), len(s))
    if hi < lo:
        return IMPOSSIBLE
    mis = MatchSummary.of(c, s).prefix_mismatches
    sub = epsilon / (alphabet.size - 1)
    keep = 1.0 - epsilon
    acc = 0.0
    for k in range(lo, hi + 1):
        d = mis[k]
        acc += keep ** (k - d) * sub**d * size ** (k - len(c))
    if acc == 0.0:
        return IMPOSSIBLE
    return math.log(acc) - math.log((len(s) + 1) * (t + 1))


def lp_trim_and_extend(c: str, s: str, alphabet: Alphabet = DNA) -> LogProb:
    """Trace probability when a uniform (prefix, suffix) trim of s is refilled
    with random symbols on both sides.  Requires |c| = |s|."""
    n = len(s)
    if len(c) != n:
        raise TraceLengthError(
            f"trace length {len(c)} != seed length {n} (this model preserves length)"
        )
    size = float(alphabet.size)
    runs = MatchSummary.of(c, s).match_runs
    acc = 0.0
    for i in range(n + 1):
        for k in range(n - i - runs[i], n - i + 1):
            acc += size ** -(i + k)
    return math.log(acc) - math.log((n + 1) * (n + 2) // 2)


def lp_mutate_trim_and_extend(c: str, s: str, epsilon: float, alphabet: Alphabet = DNA) -> LogProb:
    """lp_trim_and_extend with substitution noise applied after refilling.

    Substitutions on the random refill symbols leave them uniform, so only the
    kept middle's mismatch pattern enters the sum.
    """
    n = len(s)
    if len(c) != n:
        raise TraceLengthError(
            f"trace length {len(c)} != seed length {n} (this model preserves length)"
        )
    _check_epsilon(epsilon)
    size = float(alphabet.size)
    mis = MatchSummary.of(c, s).prefix_mismatches
    sub = epsilon / (alphabet.size - 1)
    keep = 1.0 - epsilon
    acc = 0.0
    for i in range(n + 1):
        for k in range(0, n - i + 1):
            d = mis[n - k] - mis[i]
            acc += sub**d * keep ** (n - i - k - d) * size ** -(i + k)
    if acc == 0.0:
        return IMPOSSIBLE
    return math.log(acc) - math.log((n + 1) * (n + 2) // 2)


def lp_extend_mutate_trim(c: str, s: str, t: int, epsilon: float, alphabet: Alphabet = DNA) -> LogProb:
    """Trace probability under trim-both-sides, substitution noise on the kept
    middle, then independent extensions of at most t symbols per side.

    Sums over every (seed substring, trace window) pair of equal length l; the
    l = 0 case counts positions, not distinct strings, so the |s|+1 empty trims
    and each feasible empty window in c all contribute.
    """
    _check_t(t)
    _check_epsilon(epsilon)
    size = float(alphabet.size)
    ns, nc = len(s), len(c)
    sub = epsilon / (alphabet.size - 1)
    keep = 1.0 - epsilon
    # ham[a][p] holds the running Hamming distance of s[a:a+l] vs c[p:p+l]
    ham = [[0] * (nc + 1) for _ in range(ns + 1)]
    acc = 0.0
    for l in range(min(ns, nc) + 1):
        if l > 0:
            for a in range(ns - l + 1):
                row = ham[a]
                sa = s[a + l - 1]
                for p in range(nc - l + 1):
                    if sa != c[p + l - 1]:
                        row[p] += 1
        p_lo = max(0, nc - l - t)
        p_hi = min(t, nc - l)
        if p_hi < p_lo:
            continue
        inner = 0.0
        for a in range(ns - l + 1):
            row = ham[a]
            for p in range(p_lo, p_hi + 1):
                d = row[p]
                inner += keep ** (l - d) * sub**d
        acc += inner * size ** (l - nc)
    if acc == 0.0:
        return IMPOSSIBLE
    return math.log(acc) - 2.0 * math.log(t + 1) - math.log((ns + 1) * (ns + 2) // 2)


def lp_concat2(c: str, s1: str, s2: str, t: int, alphabet: Alphabet = DNA) -> LogProb:
    """Trace probability for the concatenation of two independent
    trim-suffix-then-extend segments: sum over every split of c."""
    _check_t(t)
    terms = []
    for l in range(len(c) + 1):
        lp1 = lp_suffix_extend_trim_suffix(c[:l], s1, t, alphabet)
        if lp1 == IMPOSSIBLE:
            continue
        lp2 = lp_suffix_extend_trim_suffix(c[l:], s2, t, alphabet)
        if lp2 == IMPOSSIBLE:
            continue
        terms.append(lp1 + lp2)
    return logsumexp_list(terms)


def lp_vdj(
    c: str, v: str, d: str, j: str, t: int, epsilon: float, alphabet: Alphabet = DNA
) -> LogProb:
    """Trace probability for a three-segment junction: a suffix-trimmed v, a
    both-sides-trimmed d with extensions, a prefix-trimmed j, with substitution
    noise over the whole concatenation.

    Substitutions on the random junction insertions keep them uniform, so the
    middle factor only carries noise on the kept part of d.
    """
    _check_t(t)
    _check_epsilon(epsilon)
    nv, nj, nc = len(v), len(j), len(c)
    sub = epsilon / (alphabet.size - 1)
    keep = 1.0 - epsilon
    # mismatches of c's prefixes vs v, and of c's suffixes vs j
    pref_mis = [0] * (min(nv, nc) + 1)
    for i in range(min(nv, nc)):
        pref_mis[i + 1] = pref_mis[i] + (c[i] != v[i])
    suf_mis = [0] * (min(nj, nc) + 1)
    for k in range(min(nj, nc)):
        suf_mis[k + 1] = suf_mis[k] + (c[nc - 1 - k] != j[nj - 1 - k])
    terms = []
    for i in range(min(nv, nc) + 1):
        p1 = sub ** pref_mis[i] * keep ** (i - pref_mis[i]) / (nv + 1)
        if p1 == 0.0:
            continue
        for k in range(min(nc - i, nj) + 1):
            p3 = sub ** suf_mis[k] * keep ** (k - suf_mis[k]) / (nj + 1)
            if p3 == 0.0:
                continue
            lp_mid = lp_extend_mutate_trim(c[i : nc - k], d, t, epsilon, alphabet)
            if lp_mid == IMPOSSIBLE:
                continue
            terms.append(math.log(p1) + lp_mid + math.log(p3))
    return logsumexp_list(terms)


def _seed_set(seeds, alphabet: Alphabet) -> list[str]:
    uniq = sorted(set(seeds), key=alphabet.sort_key)
    if not uniq:
        raise ModelParamError("seed set must be non-empty")
    return uniq


def lp_vdj_multi(c, v_set, d_set, j_set, t, epsilon, alphabet: Alphabet = DNA) -> LogProb:
    """VDJ probability under uniform seed sets per gene: the mean over all
    (v, d, j) triples."""
    vs = _seed_set(v_set, alphabet)
    ds = _seed_set(d_set, alphabet)
    js = _seed_set(j_set, alphabet)
    terms = [
        lp_vdj(c, v, d, j, t, epsilon, alphabet) for v in vs for d in ds for j in js
    ]
    out = logsumexp_list(terms)
    if out == IMPOSSIBLE:
        return IMPOSSIBLE
    return out - math.log(len(vs) * len(ds) * len(js))


def lp_deletion(c: str, s: str, q: float) -> LogProb:
    """Deletion-channel probability: every occurrence of c as a subsequence of
    s contributes q^(deleted) (1-q)^(kept)."""
    if not 0.0 <= q < 1.0:
        raise ModelParamError(f"q must lie in [0, 1), got {q!r}")
    n_del = len(s) - len(c)
    if n_del < 0:
        return IMPOSSIBLE
    count = subsequence_count(s, c)
    if count == 0:
        return IMPOSSIBLE
    out = math.log(count) + len(c) * math.log1p(-q)
    if n_del:
        if q == 0.0:
            return IMPOSSIBLE
        out += n_del * math.log(q)
    return out


def lp_multiseed(c: str, seeds, model) -> LogProb:
    """Mean trace probability over a uniform seed set for a single-seed model."""
    if model.seed_arity != 1:
        raise ModelParamError(f"lp_multiseed needs a single-seed kind, got {model.kind!r}")
    uniq = _seed_set(seeds, model.alphabet)
    terms = [_lp_single(c, s, model) for s in uniq]
    out = logsumexp_list(terms)
    if out == IMPOSSIBLE:
        return IMPOSSIBLE
    return out - math.log(len(uniq))


def _lp_single(c: str, s: str, model) -> LogProb:
    kind, p, ab = model.kind, model.params, model.alphabet
    if kind == ch.TRIM_SUFFIX_AND_EXTEND:
        return lp_trim_suffix_and_extend(c, s, ab)
    if kind == ch.SUFFIX_EXTEND_TRIM_SUFFIX:
        return lp_suffix_extend_trim_suffix(c, s, p.t, ab)
    if kind == ch.SUFFIX_EXTEND_MUTATE_TRIM_SUFFIX:
        return lp_suffix_extend_mutate_trim_suffix(c, s, p.t, p.epsilon, ab)
    if kind == ch.TRIM_AND_EXTEND:
        return lp_trim_and_extend(c, s, ab)
    if kind == ch.MUTATE_TRIM_AND_EXTEND:
        return lp_mutate_trim_and_extend(c, s, p.epsilon, ab)
    if kind == ch.EXTEND_MUTATE_TRIM:
        return lp_extend_mutate_trim(c, s, p.t, p.epsilon, ab)
    if kind == ch.DELETION:
        return lp_deletion(c, s, p.q)
    raise ModelParamError(f"{kind!r} is not a single-seed kind")


def lp_trace(c: str, seeds, model) -> LogProb:
    """Log-probability of one trace under any model; seeds follow the model's
    arity (a string or a set for single-seed kinds, a pair for concatenation,
    a triple of strings or sets for VDJ)."""
    norm = ch.normalize_seeds(model, seeds)
    if model.kind == ch.CONCAT2:
        s1, s2 = norm
        return lp_concat2(c, s1, s2, model.params.t, model.alphabet)
    if model.kind == ch.VDJ:
        vs, ds, js = norm
        return lp_vdj_multi(c, vs, ds, js, model.params.t, model.params.epsilon, model.alphabet)
    if len(norm) == 1:
        return _lp_single(c, norm[0], model)
    return lp_multiseed(c, norm, model)


def lp_trace_set(traces, seeds, model) -> LogProb:
    """Joint log-probability of an i.i.d. trace set.

    Deduplicates repeated traces and sums with fsum, so the result depends
    only on the multiset of traces (bitwise, regardless of order).
    """
    counts = Counter(traces)
    parts = []
    for c, cnt in counts.items():
        lp = lp_trace(c, seeds, model)
        if lp == IMPOSSIBLE:
            return IMPOSSIBLE
        parts.append(lp * cnt)
    if not parts:
        return 0.0
    return math.fsum(parts)
