"""Exact maximum-likelihood seed reconstruction.

For the suffix-trim-and-extend channel the trace-set likelihood of a
candidate depends only on its shared-prefix lengths with the traces, which
lets a prefix trie over the traces score every candidate that matters in
O(|s| * T): the per-trace factor (|A|^(m+1) - 1) telescopes into per-node
increments log((|A|^(d+1) - 1) / (|A|^d - 1)) weighted by how many traces
pass through the depth-d node, and the maximiser over the whole universe is
always one of the traces, i.e. a leaf.

``brute_force_mle`` scores every candidate in the universe through the
likelihood module; it exists as an oracle and for the models without a fast
exact algorithm.
"""

import itertools
import math

from .core import DNA, Alphabet
from .errors import ArityError, BudgetError, ModelParamError, TraceLengthError
from . import channels as ch
from . import likelihood as lk

__all__ = [
    "PrefixTrie",
    "build_trie",
    "score_and_select",
    "mle_trim_suffix_and_extend",
    "brute_force_mle",
]

DEFAULT_BUDGET = 1_000_000


class _Node:
    __slots__ = ("children", "sim")

    def __init__(self):
        self.children: dict = {}
        self.sim = 0


class PrefixTrie:
    """Prefix trie over an equal-length trace set; each node counts the
    traces passing through it."""

    __slots__ = ("root", "depth", "n_traces", "alphabet")

    def __init__(self, depth: int, alphabet: Alphabet):
        self.root = _Node()
        self.depth = depth
        self.n_traces = 0
        self.alphabet = alphabet

    def insert(self, trace: str) -> None:
        if len(trace) != self.depth:
            raise TraceLengthError(
                f"trace length {len(trace)} != trie depth {self.depth}; "
                "this structure needs equal-length traces"
            )
        node = self.root
        node.sim += 1
        for ch_ in trace:
            nxt = node.children.get(ch_)
            if nxt is None:
                nxt = node.children[ch_] = _Node()
            nxt.sim += 1
            node = nxt
        self.n_traces += 1


def build_trie(traces, alphabet: Alphabet = DNA) -> PrefixTrie:
    traces = list(traces)
    if not traces:
        raise ArityError("cannot build a trie from an empty trace set")
    trie = PrefixTrie(depth=len(traces[0]), alphabet=alphabet)
    for tr in traces:
        alphabet.validate(tr)
        trie.insert(tr)
    return trie


def score_and_select(trie: PrefixTrie) -> tuple[str, float]:
    """Best full-depth string in the trie and its score.

    The score of a leaf equals the log-likelihood of the corresponding
    candidate up to a shared additive constant, so the argmax leaf is the
    exact trace-set MLE.  Ties resolve to the lexicographically smallest
    leaf under the alphabet order (depth-first traversal in symbol order,
    strict improvement only).
    """
    if trie.n_traces == 0:
        raise ArityError("cannot score an empty trie")
    size = trie.alphabet.size
    # tier[d] = log((size^(d+1) - 1) / (size^d - 1)) for depth d >= 1
    tier = [0.0] * (trie.depth + 1)
    for d in range(1, trie.depth + 1):
        tier[d] = (
            (d + 1) * math.log(size)
            + math.log1p(-float(size) ** -(d + 1))
            - d * math.log(size)
            - math.log1p(-float(size) ** -d)
        )
    root_score = trie.n_traces * math.log(size - 1)
    best_leaf = None
    best_score = -math.inf
    symbols = trie.alphabet.symbols
    # iterative DFS, children in alphabet order
    stack = [(trie.root, root_score, "", 0)]
    while stack:
        node, score, prefix, depth = stack.pop()
        if depth == trie.depth:
            if score > best_score:
                best_score = score
                best_leaf = prefix
            continue
        # push in reverse so the first alphabet symbol is explored first
        for sym in reversed(symbols):
            child = node.children.get(sym)
            if child is not None:
                stack.append((child, score + child.sim * tier[depth + 1], prefix + sym, depth + 1))
    if best_leaf is None:
        raise ArityError("trie has no full-depth leaf")
    return best_leaf, best_score


def mle_trim_suffix_and_extend(traces, alphabet: Alphabet = DNA) -> str:
    """Exact MLE seed for the suffix-trim-and-extend channel."""
    traces = list(traces)
    best, _ = score_and_select(build_trie(traces, alphabet))
    assert best in set(traces), "internal error: MLE must be one of the traces"
    return best


def _single_seed_universe(alphabet: Alphabet, n: int):
    return (("".join(tup),) for tup in itertools.product(alphabet.symbols, repeat=n))


def brute_force_mle(
    traces,
    model: ch.ModelSpec,
    n,
    budget: int = DEFAULT_BUDGET,
):
    """Exhaustive MLE over every candidate seed arrangement of length(s) n.

    n is the seed length (an int; VDJ takes a triple (n_v, n_d, n_j)).
    Candidates are enumerated in lexicographic order under the alphabet
    (seed sets as sorted tuples without repetition), scored through
    lp_trace_set, and ties keep the earliest candidate.  Raises BudgetError
    when the universe exceeds ``budget`` candidates.
    """
    traces = list(traces)
    ab = model.alphabet
    size = ab.size

    if model.kind == ch.VDJ:
        try:
            nv, nd, nj = n
        except (TypeError, ValueError):
            raise ModelParamError("VDJ brute force needs n as a triple (n_v, n_d, n_j)") from None
        if model.multi_seed is not None:
            raise BudgetError("brute force over VDJ seed-set universes is not supported")
        count = size ** (nv + nd + nj)
        if count > budget:
            raise BudgetError(f"universe of {count} candidates exceeds budget {budget}")
        universe = (
            (v, d, j)
            for v in ("".join(x) for x in itertools.product(ab.symbols, repeat=nv))
            for d in ("".join(x) for x in itertools.product(ab.symbols, repeat=nd))
            for j in ("".join(x) for x in itertools.product(ab.symbols, repeat=nj))
        )
    elif model.kind == ch.CONCAT2:
        if not isinstance(n, int):
            raise ModelParamError("concatenation brute force needs a single int n")
        count = size ** (2 * n)
        if count > budget:
            raise BudgetError(f"universe of {count} candidates exceeds budget {budget}")
        universe = (
            (s1, s2)
            for s1 in ("".join(x) for x in itertools.product(ab.symbols, repeat=n))
            for s2 in ("".join(x) for x in itertools.product(ab.symbols, repeat=n))
        )
    else:
        if not isinstance(n, int):
            raise ModelParamError("brute force needs a single int n for this kind")
        m = model.multi_seed if model.multi_seed is not None else 1
        count = math.comb(size**n, m)
        if count > budget:
            raise BudgetError(f"universe of {count} candidates exceeds budget {budget}")
        if m == 1:
            universe = _single_seed_universe(ab, n)
        else:
            universe = itertools.combinations(
                ("".join(tup) for tup in itertools.product(ab.symbols, repeat=n)), m
            )

    best = None
    best_lp = -math.inf
    for cand in universe:
        seeds = cand if model.kind in (ch.CONCAT2, ch.VDJ) else (cand[0] if len(cand) == 1 else cand)
        lp = lk.lp_trace_set(traces, seeds, model)
        if best is None or lp > best_lp:
            best_lp = lp
            best = cand
    if model.kind in (ch.CONCAT2, ch.VDJ):
        return best
    return best[0] if len(best) == 1 else best
