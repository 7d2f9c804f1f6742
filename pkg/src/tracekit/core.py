"""Alphabets, reproducible random streams, and the primitive string operations
(trimming, mutation, random extension) that every channel model composes.

Strings are plain Python ``str`` objects; an :class:`Alphabet` validates them
at module boundaries and defines the symbol order used for every
lexicographic tie-break in the package.
"""

import itertools
from dataclasses import dataclass
from math import isqrt

import numpy as np

from .errors import AlphabetError, InvalidTrimError, ModelParamError

__all__ = [
    "Alphabet",
    "DNA",
    "BINARY",
    "ModelParams",
    "RandomStream",
    "trim",
    "trim_suffix",
    "trim_prefix",
    "sample_trim_pair",
    "sample_random_leq_t",
    "random_string",
    "mutate",
    "lcp_len",
    "hamming",
    "all_strings",
    "all_strings_up_to",
]


class Alphabet:
    """An ordered set of single-character symbols.

    The declared order (not Python's codepoint order) is the lexicographic
    order used for tie-breaking, which matters for alphabets like ``TGCA``.
    """

    __slots__ = ("symbols", "_index")

    def __init__(self, symbols: str):
        if len(symbols) < 2:
            raise AlphabetError("alphabet needs at least 2 symbols")
        if len(set(symbols)) != len(symbols):
            raise AlphabetError(f"duplicate symbols in alphabet {symbols!r}")
        if any(len(ch) != 1 for ch in symbols):
            raise AlphabetError("alphabet symbols must be single characters")
        self.symbols: tuple[str, ...] = tuple(symbols)
        self._index = {ch: i for i, ch in enumerate(symbols)}

    @property
    def size(self) -> int:
        return len(self.symbols)

    def __len__(self) -> int:
        return len(self.symbols)

    def __contains__(self, ch: str) -> bool:
        return ch in self._index

    def __eq__(self, other) -> bool:
        return isinstance(other, Alphabet) and self.symbols == other.symbols

    def __hash__(self) -> int:
        return hash(self.symbols)

    def __repr__(self) -> str:
        return f"Alphabet({''.join(self.symbols)!r})"

    def index(self, ch: str) -> int:
        try:
            return self._index[ch]
        except KeyError:
            raise AlphabetError(f"symbol {ch!r} not in alphabet {''.join(self.symbols)!r}") from None

    def validate(self, s: str) -> str:
        """Return ``s`` unchanged, raising AlphabetError on a foreign symbol."""
        for pos, ch in enumerate(s):
            if ch not in self._index:
                raise AlphabetError(
                    f"symbol {ch!r} at position {pos} not in alphabet {''.join(self.symbols)!r}"
                )
        return s

    def encode(self, s: str) -> np.ndarray:
        """Map a string to a uint8 code array (0 .. size-1)."""
        return np.fromiter((self.index(ch) for ch in s), dtype=np.uint8, count=len(s))

    def decode(self, codes) -> str:
        syms = self.symbols
        return "".join(syms[int(c)] for c in codes)

    def sort_key(self, s: str):
        """Key for lexicographic comparison under the alphabet order."""
        return tuple(self._index[ch] for ch in s)


DNA = Alphabet("ACGT")
BINARY = Alphabet("01")


@dataclass(frozen=True)
class ModelParams:
    """Channel parameters. Only the fields a model kind requires may be set.

    t        maximum extension length per side (t >= 0)
    epsilon  per-symbol substitution probability (0 <= eps <= 1)
    q        per-symbol deletion probability (0 <= q < 1)
    """

    t: int | None = None
    epsilon: float | None = None
    q: float | None = None

    def __post_init__(self):
        if self.t is not None and (not isinstance(self.t, int) or self.t < 0):
            raise ModelParamError(f"t must be a non-negative int, got {self.t!r}")
        if self.epsilon is not None and not 0.0 <= self.epsilon <= 1.0:
            raise ModelParamError(f"epsilon must lie in [0, 1], got {self.epsilon!r}")
        if self.q is not None and not 0.0 <= self.q < 1.0:
            raise ModelParamError(f"q must lie in [0, 1), got {self.q!r}")


class RandomStream:
    """A named, reproducible stream of randomness.

    A stream is identified by a master seed plus a key path of non-negative
    integers; ``child(i)`` derives an independent sub-stream.  Two streams
    constructed with the same (master_seed, key) always produce the same
    draws, regardless of what any other stream consumed.
    """

    __slots__ = ("master_seed", "key", "_gen")

    def __init__(self, master_seed: int, key: tuple[int, ...] = ()):
        if master_seed < 0:
            raise ModelParamError("master seed must be non-negative")
        if any(k < 0 for k in key):
            raise ModelParamError("stream key entries must be non-negative")
        self.master_seed = int(master_seed)
        self.key = tuple(int(k) for k in key)
        self._gen = None

    @property
    def gen(self) -> np.random.Generator:
        if self._gen is None:
            seq = np.random.SeedSequence(self.master_seed, spawn_key=self.key)
            self._gen = np.random.default_rng(seq)
        return self._gen

    def child(self, i: int) -> "RandomStream":
        return RandomStream(self.master_seed, self.key + (i,))

    def __repr__(self) -> str:
        return f"RandomStream(master_seed={self.master_seed}, key={self.key})"


def trim(s: str, l: int, k: int) -> str:
    """Remove the first l and last k symbols of s.  Requires l + k <= |s|."""
    if l < 0 or k < 0 or l + k > len(s):
        raise InvalidTrimError(f"cannot trim (l={l}, k={k}) from a string of length {len(s)}")
    return s[l : len(s) - k]


def trim_suffix(s: str, k: int) -> str:
    return trim(s, 0, k)


def trim_prefix(s: str, k: int) -> str:
    return trim(s, k, 0)


def sample_trim_pair(n: int, rng: RandomStream) -> tuple[int, int]:
    """Draw (l, k) uniformly over all pairs with l + k <= n.

    There are (n+1)(n+2)/2 such pairs.  The draw decodes a single uniform
    index through the triangular layout (d = l + k ascending, then l), so it
    costs one integer draw regardless of n.
    """
    total = (n + 1) * (n + 2) // 2
    u = int(rng.gen.integers(0, total))
    d = (isqrt(8 * u + 1) - 1) // 2
    l = u - d * (d + 1) // 2
    return l, d - l


def random_string(length: int, rng: RandomStream, alphabet: Alphabet) -> str:
    if length == 0:
        return ""
    codes = rng.gen.integers(0, alphabet.size, size=length)
    return alphabet.decode(codes)


def sample_random_leq_t(t: int, rng: RandomStream, alphabet: Alphabet) -> str:
    """Draw r^l with l uniform on [0, t] and symbols i.i.d. uniform."""
    if t < 0:
        raise ModelParamError("t must be non-negative")
    length = int(rng.gen.integers(0, t + 1))
    return random_string(length, rng, alphabet)


def mutate(s: str, epsilon: float, rng: RandomStream, alphabet: Alphabet) -> str:
    """Substitute each symbol independently with probability epsilon.

    A substituted symbol becomes one of the other size-1 symbols uniformly,
    never itself.
    """
    if not 0.0 <= epsilon <= 1.0:
        raise ModelParamError("epsilon must lie in [0, 1]")
    if not s:
        return s
    codes = alphabet.encode(s)
    hit = rng.gen.random(len(s)) < epsilon
    n_hit = int(hit.sum())
    if n_hit == 0:
        return s
    offsets = rng.gen.integers(1, alphabet.size, size=n_hit)
    codes[hit] = (codes[hit] + offsets) % alphabet.size
    return alphabet.decode(codes)


def lcp_len(a: str, b: str) -> int:
    """Length of the longest common prefix."""
    m = 0
    for x, y in zip(a, b):
        if x != y:
            break
        m += 1
    return m


def hamming(a: str, b: str) -> int:
    """Hamming distance between equal-length strings (empty strings give 0)."""
    if len(a) != len(b):
        raise ValueError(f"hamming needs equal lengths, got {len(a)} and {len(b)}")
    return sum(x != y for x, y in zip(a, b))


def all_strings(alphabet: Alphabet, length: int):
    """Yield every string of the given length in alphabet-lexicographic order."""
    for tup in itertools.product(alphabet.symbols, repeat=length):
        yield "".join(tup)


def all_strings_up_to(alphabet: Alphabet, max_len: int):
    """Yield every string of length 0..max_len, shortest first, lexicographic within a length."""
    for n in range(max_len + 1):
        yield from all_strings(alphabet, n)
