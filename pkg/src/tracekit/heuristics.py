"""Reconstruction heuristics: greedy column consensus, significant-k-mer
mining with bidirectional extension, bitwise-majority alignment for the
deletion channel, and mean-based candidate selection for binary traces.
"""

import math
from collections import Counter
from dataclasses import dataclass

import numpy as np
from scipy import stats

from .core import BINARY, DNA, Alphabet
from .errors import ModelParamError, TraceLengthError

__all__ = [
    "greedy_reconstruct",
    "KmerCatalog",
    "build_kmer_catalog",
    "mine_seeds",
    "MINING_DEFAULTS",
    "bma_reconstruct",
    "MeanProfile",
    "mean_profile",
    "expected_mean_profile",
    "select_by_means",
    "mean_based_select",
]


def _argmax_symbol(counts, alphabet: Alphabet) -> str:
    """Most abundant symbol; ties go to the earliest symbol in the alphabet."""
    best = alphabet.symbols[0]
    best_n = counts.get(best, 0)
    for sym in alphabet.symbols[1:]:
        n = counts.get(sym, 0)
        if n > best_n:
            best, best_n = sym, n
    return best


def greedy_reconstruct(traces, n: int, alphabet: Alphabet = DNA) -> str:
    """Left-to-right column consensus.

    At each position the most abundant symbol among the surviving traces is
    appended and traces disagreeing there are discarded.  If no survivor
    reaches a position, the remaining positions fall back to the uniform tie
    rule, i.e. the alphabet's first symbol.
    """
    survivors = [tr for tr in traces]
    out = []
    for j in range(n):
        counts = Counter(tr[j] for tr in survivors if j < len(tr))
        if not counts:
            out.append(alphabet.symbols[0])
            continue
        sym = _argmax_symbol(counts, alphabet)
        out.append(sym)
        survivors = [tr for tr in survivors if j < len(tr) and tr[j] == sym]
    return "".join(out)


@dataclass(frozen=True)
class KmerCatalog:
    """Occurrence counts of every length-k window over a trace set."""

    k: int
    counts: dict
    positions_scanned: int

    def background_rate(self, alphabet: Alphabet) -> float:
        """Expected count of one specific k-mer under the uniform null."""
        return self.positions_scanned / alphabet.size**self.k


def build_kmer_catalog(traces, k: int) -> KmerCatalog:
    if k < 1:
        raise ModelParamError("k must be >= 1")
    counts: dict = {}
    positions = 0
    for tr in traces:
        for i in range(len(tr) - k + 1):
            w = tr[i : i + k]
            counts[w] = counts.get(w, 0) + 1
            positions += 1
    return KmerCatalog(k=k, counts=counts, positions_scanned=positions)


MINING_DEFAULTS = {
    "select_alpha": 0.01,  # family-wise, Bonferroni-corrected over the |A|^k cells
    "select_floor_frac": 0.1,  # of the most abundant selected k-mer's count
    "p_stop": 0.01,  # binomial tail threshold for extending one more symbol
    "min_support": 10,  # flank observations needed before extending at all
    "max_branches": 3,
}


def _flank_counts(cand: str, traces, right: bool) -> Counter:
    counts: Counter = Counter()
    for tr in traces:
        start = tr.find(cand)
        while start != -1:
            if right:
                pos = start + len(cand)
                if pos < len(tr):
                    counts[tr[pos]] += 1
            else:
                if start > 0:
                    counts[tr[start - 1]] += 1
            start = tr.find(cand, start + 1)
    return counts


def _passing_symbols(counts: Counter, alphabet: Alphabet, p_stop: float, min_support: int):
    total = sum(counts.values())
    if total < min_support:
        return []
    # Bonferroni across the alphabet: the test runs once per symbol.
    threshold = p_stop / alphabet.size
    passing = []
    for sym in alphabet.symbols:
        n = counts.get(sym, 0)
        if n == 0:
            continue
        # P(X >= n) under the uniform-flank null
        if stats.binom.sf(n - 1, total, 1.0 / alphabet.size) <= threshold:
            passing.append((counts[sym], sym))
    passing.sort(key=lambda item: -item[0])
    return [sym for _, sym in passing]


def mine_seeds(
    traces,
    k: int = 9,
    *,
    alphabet: Alphabet = DNA,
    select_alpha: float = MINING_DEFAULTS["select_alpha"],
    select_floor_frac: float = MINING_DEFAULTS["select_floor_frac"],
    p_stop: float = MINING_DEFAULTS["p_stop"],
    min_support: int = MINING_DEFAULTS["min_support"],
    max_branches: int = MINING_DEFAULTS["max_branches"],
    max_candidates: int = 64,
) -> set:
    """Mine statistically over-represented k-mers and grow them outwards.

    A k-mer is selected when its count clears a Bonferroni-corrected Poisson
    tail test against the uniform background rate and is at least
    select_floor_frac times the most abundant selected k-mer's count.  The
    floor matters because a k-mer straddling a trace's seed/filler boundary
    is genuinely over-represented relative to uniform noise, just an order
    of magnitude rarer than interior k-mers; the tail test alone admits it.

    Each selected k-mer is extended to the right and then to the left, one
    symbol at a time, while the best flanking symbol's count clears a
    binomial tail test at p_stop (Bonferroni-corrected across the alphabet)
    with at least min_support observations; up to max_branches symbols that
    clear the test fork separate candidates.  Candidates that are substrings
    of other candidates are dropped.

    The thresholds are package defaults, not published constants; callers
    that report results should surface them (the CLI echoes them as metadata).
    """
    traces = list(traces)
    catalog = build_kmer_catalog(traces, k)
    lam = catalog.background_rate(alphabet)
    cell_alpha = select_alpha / alphabet.size**k
    selected = [
        (cnt, kmer)
        for kmer, cnt in catalog.counts.items()
        if stats.poisson.sf(cnt - 1, lam) <= cell_alpha
    ]
    if selected and select_floor_frac > 0.0:
        floor = select_floor_frac * max(cnt for cnt, _ in selected)
        selected = [item for item in selected if item[0] >= floor]
    selected.sort(key=lambda item: (-item[0], alphabet.sort_key(item[1])))

    grown: set = set()
    memo: dict = {}

    def extend(cand: str, right: bool) -> list:
        key = (cand, right)
        if key not in memo:
            counts = _flank_counts(cand, traces, right)
            memo[key] = _passing_symbols(counts, alphabet, p_stop, min_support)[:max_branches]
        return memo[key]

    for _, kmer in selected:
        if len(grown) >= max_candidates:
            break
        if any(kmer in g for g in grown):
            continue
        # grow right to completion, then left
        frontier = [kmer]
        done_right = []
        while frontier:
            cand = frontier.pop()
            syms = extend(cand, right=True)
            if not syms:
                done_right.append(cand)
            else:
                frontier.extend(cand + sym for sym in syms)
            if len(done_right) + len(frontier) > max_candidates:
                done_right.extend(frontier)
                break
        frontier = done_right
        while frontier:
            cand = frontier.pop()
            syms = extend(cand, right=False)
            if not syms:
                grown.add(cand)
            else:
                frontier.extend(sym + cand for sym in syms)
            if len(grown) + len(frontier) > max_candidates:
                grown.update(frontier)
                break

    return {g for g in grown if not any(g != other and g in other for other in grown)}


def bma_reconstruct(traces, n: int, *, w: int = 2, alphabet: Alphabet = BINARY) -> str:
    """Bitwise-majority alignment for deletion-channel traces.

    One cursor per trace; each output position takes the majority symbol
    over the cursors, and cursors on the majority advance.  A disagreeing
    cursor is held (a presumed deletion in that trace) when its next w
    symbols align better with the majority lookahead unmoved than shifted.
    Output length is exactly n; if every cursor runs off its trace the
    remaining positions take the alphabet's first symbol.
    """
    if w < 0:
        raise ModelParamError("lookahead window w must be >= 0")
    traces = list(traces)
    cursors = [0] * len(traces)
    out = []
    for _ in range(n):
        active = [i for i, tr in enumerate(traces) if cursors[i] < len(tr)]
        counts = Counter(traces[i][cursors[i]] for i in active)
        if not counts:
            out.append(alphabet.symbols[0])
            continue
        sym = _argmax_symbol(counts, alphabet)
        agree = [i for i in active if traces[i][cursors[i]] == sym]
        look = []
        for d in range(w):
            cnt = Counter(
                traces[i][cursors[i] + 1 + d]
                for i in agree
                if cursors[i] + 1 + d < len(traces[i])
            )
            if not cnt:
                break
            look.append(_argmax_symbol(cnt, alphabet))
        for i in active:
            tr, cur = traces[i], cursors[i]
            if tr[cur] == sym:
                cursors[i] += 1
                continue
            held = sum(
                1 for d, b in enumerate(look) if cur + d < len(tr) and tr[cur + d] == b
            )
            shifted = sum(
                1 for d, b in enumerate(look) if cur + 1 + d < len(tr) and tr[cur + 1 + d] == b
            )
            if not held > shifted:
                cursors[i] += 1
        out.append(sym)
    return "".join(out)


@dataclass(frozen=True)
class MeanProfile:
    """Coordinate-wise means of zero-padded binary traces."""

    n: int
    means: np.ndarray

    def __post_init__(self):
        if self.means.shape != (self.n,):
            raise ModelParamError("means must have shape (n,)")


def mean_profile(traces, n: int) -> MeanProfile:
    """Empirical MeanProfile of binary traces padded with zeros to length n."""
    traces = list(traces)
    if not traces:
        raise ModelParamError("mean profile needs at least one trace")
    totals = np.zeros(n, dtype=np.int64)
    for tr in traces:
        if len(tr) > n:
            raise TraceLengthError(f"trace of length {len(tr)} exceeds padding length {n}")
        for i, ch in enumerate(tr):
            if ch == "1":
                totals[i] += 1
            elif ch != "0":
                raise ModelParamError("mean profiles are defined over the binary alphabet")
    return MeanProfile(n=n, means=totals / len(traces))


def expected_mean_profile(s: str, q: float, n: int | None = None) -> np.ndarray:
    """Exact expected zero-padded position means of deletion-channel traces.

    Seed position i survives to trace position j iff exactly j of the first
    i symbols survive and symbol i itself survives, so entry j is
    sum_{i >= j} s_i * C(i, j) (1-q)^(j+1) q^(i-j).
    """
    if not 0.0 <= q < 1.0:
        raise ModelParamError(f"q must lie in [0, 1), got {q!r}")
    BINARY.validate(s)
    if n is None:
        n = len(s)
    if n < len(s):
        raise TraceLengthError("padding length must cover the seed")
    out = np.zeros(n)
    p = 1.0 - q
    for j in range(min(n, len(s))):
        acc = 0.0
        for i in range(j, len(s)):
            if s[i] == "1":
                acc += math.comb(i, j) * p ** (j + 1) * q ** (i - j)
        out[j] = acc
    return out


def select_by_means(means: np.ndarray, candidates, q: float) -> str:
    """Candidate whose exact expected profile is nearest (squared distance)
    to the observed means; ties go to the lexicographically smallest."""
    candidates = list(candidates)
    if not candidates:
        raise ModelParamError("need at least one candidate")
    lengths = {len(c) for c in candidates}
    if len(lengths) != 1:
        raise TraceLengthError("candidates must share one length")
    (n,) = lengths
    if means.shape != (n,):
        raise TraceLengthError(f"means length {means.shape} does not match candidate length {n}")
    best = None
    best_d = math.inf
    for cand in sorted(set(candidates), key=BINARY.sort_key):
        dist = float(np.sum((expected_mean_profile(cand, q, n) - means) ** 2))
        if dist < best_d:
            best, best_d = cand, dist
    return best


def mean_based_select(traces, candidates, q: float) -> str:
    """Mean-based reconstruction over a candidate list: compare the empirical
    MeanProfile of the traces against each candidate's exact expectation."""
    candidates = list(candidates)
    if not candidates:
        raise ModelParamError("need at least one candidate")
    n = len(candidates[0])
    profile = mean_profile(traces, n)
    return select_by_means(profile.means, candidates, q)
