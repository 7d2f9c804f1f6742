"""Monte Carlo benchmarking: success-rate estimation with Wilson intervals,
majority-vote amplification, and trace-complexity search (the smallest T at
which an algorithm clears a target success rate).
"""

import math
import time
from dataclasses import dataclass, field

from . import channels as ch
from . import exact, heuristics, kernels, multiseed
from .core import BINARY, DNA, RandomStream, random_string
from .errors import ArityError, BracketingError, ConfigError, ModelParamError

__all__ = [
    "wilson_interval",
    "Algorithm",
    "ALGORITHM_IDS",
    "make_algorithm",
    "amplify",
    "FixedSeeds",
    "RandomSeeds",
    "BenchReport",
    "estimate_success",
    "TraceComplexityResult",
    "estimate_trace_complexity",
]


def wilson_interval(successes: int, trials: int, z: float = 1.96):
    """Wilson score interval for a binomial proportion."""
    if trials <= 0:
        raise ModelParamError("trials must be positive")
    if not 0 <= successes <= trials:
        raise ModelParamError("successes must lie in [0, trials]")
    p = successes / trials
    denom = 1.0 + z * z / trials
    center = (p + z * z / (2 * trials)) / denom
    half = (z / denom) * math.sqrt(p * (1 - p) / trials + z * z / (4 * trials * trials))
    return (max(0.0, center - half), min(1.0, center + half))


@dataclass(frozen=True)
class Algorithm:
    """A named reconstruction procedure: traces plus a target length in,
    a seed estimate out (a string, or a set of strings for miners)."""

    name: str
    _fn: object

    def reconstruct(self, traces, n: int):
        return self._fn(traces, n)


ALGORITHM_IDS = (
    "trie-exact",
    "brute-force",
    "greedy",
    "bma",
    "mining-d",
    "mean-select",
    "population",
    "identity",
)


def make_algorithm(name: str, *, model: ch.ModelSpec | None = None, **kw) -> Algorithm:
    """Build a registry algorithm.

    Model-dependent entries (brute-force, mean-select, population) need the
    model; mean-select also needs candidates=[...].  Extra keyword arguments
    reach the underlying procedure (k for mining-d, w for bma, M and
    reconstructor for population).
    """
    alphabet = model.alphabet if model is not None else DNA

    if name == "trie-exact":
        fn = lambda traces, n: exact.mle_trim_suffix_and_extend(traces, alphabet)
    elif name == "brute-force":
        if model is None:
            raise ConfigError("brute-force needs the model")
        budget = kw.pop("budget", exact.DEFAULT_BUDGET)
        fn = lambda traces, n: exact.brute_force_mle(traces, model, n, budget=budget)
    elif name == "greedy":
        fn = lambda traces, n: heuristics.greedy_reconstruct(traces, n, alphabet)
    elif name == "bma":
        w = kw.pop("w", 2)
        fn = lambda traces, n: heuristics.bma_reconstruct(traces, n, w=w, alphabet=alphabet)
    elif name == "mining-d":
        opts = {key: kw.pop(key) for key in list(kw) if key in heuristics.MINING_DEFAULTS}
        k = kw.pop("k", 9)
        fn = lambda traces, n: frozenset(
            heuristics.mine_seeds(traces, k, alphabet=alphabet, **opts)
        )
    elif name == "mean-select":
        if model is None or model.params.q is None:
            raise ConfigError("mean-select needs a deletion model")
        candidates = kw.pop("candidates", None)
        if not candidates:
            raise ConfigError("mean-select needs candidates=[...]")
        q = model.params.q
        fn = lambda traces, n: heuristics.mean_based_select(traces, candidates, q)
    elif name == "population":
        if model is None:
            raise ConfigError("population needs the model")
        M = kw.pop("M", None)
        if M is None:
            raise ConfigError("population needs M=<seed count>")
        inner = kw.pop("reconstructor", "brute-force")
        d_max = kw.pop("d_max", None)
        fn = lambda traces, n: frozenset(
            multiseed.population_recover(
                traces, M, model, inner, n=n, d_max=d_max
            ).seeds
        )
    elif name == "identity":
        fn = lambda traces, n: traces[0] if traces else ""
    else:
        raise ConfigError(f"unknown algorithm {name!r}; known: {', '.join(ALGORITHM_IDS)}")

    if kw:
        raise ConfigError(f"unused algorithm options: {sorted(kw)}")
    return Algorithm(name=name, _fn=fn)


def amplify(algorithm: Algorithm, replicas: int) -> Algorithm:
    """Plurality vote of the algorithm over consecutive trace chunks.

    The trace list splits into `replicas` chunks of len(traces)//replicas
    (the remainder is dropped), the base algorithm runs on each, and the
    most common answer wins; ties go to the smallest answer under a stable
    sort key.  Raises if there are fewer traces than replicas.
    """
    if replicas < 1:
        raise ModelParamError("replicas must be >= 1")

    def fn(traces, n):
        traces = list(traces)
        if len(traces) < replicas:
            raise ArityError(f"need at least {replicas} traces to amplify")
        chunk = len(traces) // replicas
        votes = [
            algorithm.reconstruct(traces[i * chunk : (i + 1) * chunk], n)
            for i in range(replicas)
        ]
        tally: dict = {}
        for v in votes:
            tally[v] = tally.get(v, 0) + 1
        return min(tally, key=lambda v: (-tally[v], _vote_key(v)))

    return Algorithm(name=f"amplify({algorithm.name},{replicas})", _fn=fn)


def _vote_key(v):
    if isinstance(v, str):
        return (0, v)
    return (1, tuple(sorted(v)))


class FixedSeeds:
    """Seed source that plays back the same seeds every trial."""

    def __init__(self, seeds, model: ch.ModelSpec):
        self.seeds = ch.normalize_seeds(model, seeds)
        self.model = model

    @property
    def length(self) -> int:
        s = self.seeds
        if self.model.kind == ch.CONCAT2:
            return len(s[0]) + len(s[1])
        if self.model.kind == ch.VDJ:
            return len(s[0][0]) + len(s[1][0]) + len(s[2][0])
        return len(s[0])

    def draw(self, rng: RandomStream):
        return self.seeds

    def truth(self, seeds):
        return _truth_of(self.model, seeds)


class RandomSeeds:
    """Seed source drawing fresh uniform random seed(s) each trial."""

    def __init__(self, length: int, model: ch.ModelSpec, count: int = 1):
        if length < 0:
            raise ModelParamError("seed length must be >= 0")
        if count < 1:
            raise ModelParamError("seed count must be >= 1")
        if model.kind in (ch.CONCAT2, ch.VDJ) and count != 1:
            raise ConfigError("random multi-part seeds vary by part, not by count")
        self._length = length
        self.model = model
        self.count = count

    @property
    def length(self) -> int:
        if self.model.kind == ch.CONCAT2:
            return 2 * self._length
        if self.model.kind == ch.VDJ:
            return 3 * self._length
        return self._length

    def draw(self, rng: RandomStream):
        ab = self.model.alphabet
        if self.model.kind == ch.CONCAT2:
            return (
                random_string(self._length, rng.child(0), ab),
                random_string(self._length, rng.child(1), ab),
            )
        if self.model.kind == ch.VDJ:
            return (
                (random_string(self._length, rng.child(0), ab),),
                (random_string(self._length, rng.child(1), ab),),
                (random_string(self._length, rng.child(2), ab),),
            )
        seeds = set()
        i = 0
        while len(seeds) < self.count:
            seeds.add(random_string(self._length, rng.child(i), ab))
            i += 1
        return tuple(sorted(seeds, key=ab.sort_key))

    def truth(self, seeds):
        return _truth_of(self.model, ch.normalize_seeds(self.model, seeds))


def _truth_of(model: ch.ModelSpec, seeds):
    """Canonical comparison target: a string for one seed, the natural tuple
    for concatenation and VDJ, a frozenset for uniform seed mixtures."""
    if model.kind == ch.CONCAT2:
        return tuple(seeds)
    if model.kind == ch.VDJ:
        return tuple(tuple(g) for g in seeds)
    if len(seeds) == 1:
        return seeds[0]
    return frozenset(seeds)


def _is_success(result, truth) -> bool:
    # Set-valued results (miners, population recovery) are scored by
    # containment of the true seeds; everything else by exact equality.
    if isinstance(result, (set, frozenset)):
        want = truth if isinstance(truth, frozenset) else frozenset((truth,))
        return want <= result
    return result == truth


def _is_near_miss(result, truth) -> bool:
    if isinstance(result, str) and isinstance(truth, str):
        return kernels.edit_distance(result, truth, limit=1) <= 1
    return False


@dataclass(frozen=True)
class BenchReport:
    algorithm: str
    model: ch.ModelSpec
    n: int
    traces_per_trial: int
    trials: int
    successes: int
    success_rate: float
    wilson_low: float
    wilson_high: float
    target_rate: float | None
    master_seed: int
    wall_time_s: float
    near_misses: int

    @property
    def meets_target(self) -> bool | None:
        if self.target_rate is None:
            return None
        return self.wilson_low >= self.target_rate


def estimate_success(
    algorithm: Algorithm,
    seed_source,
    model: ch.ModelSpec,
    traces_per_trial: int,
    trials: int,
    rng: RandomStream,
    *,
    n: int | None = None,
    target_rate: float | None = None,
) -> BenchReport:
    """Run `trials` independent generate-and-reconstruct rounds.

    Trial i derives its own stream rng.child(i) (seed draw on child 0,
    trace generation on child 1), so results are reproducible and invariant
    to trial order.
    """
    if trials < 1:
        raise ModelParamError("trials must be >= 1")
    if traces_per_trial < 0:
        raise ModelParamError("traces_per_trial must be >= 0")
    if n is None:
        n = seed_source.length
    successes = 0
    near = 0
    t0 = time.perf_counter()
    for trial in range(trials):
        st = rng.child(trial)
        seeds = seed_source.draw(st.child(0))
        ts = ch.generate_trace_set(model, seeds, traces_per_trial, st.child(1))
        result = algorithm.reconstruct(list(ts.traces), n)
        truth = seed_source.truth(seeds)
        if _is_success(result, truth):
            successes += 1
        elif _is_near_miss(result, truth):
            near += 1
    wall = time.perf_counter() - t0
    low, high = wilson_interval(successes, trials)
    return BenchReport(
        algorithm=algorithm.name,
        model=model,
        n=n,
        traces_per_trial=traces_per_trial,
        trials=trials,
        successes=successes,
        success_rate=successes / trials,
        wilson_low=low,
        wilson_high=high,
        target_rate=target_rate,
        master_seed=rng.master_seed,
        wall_time_s=wall,
        near_misses=near,
    )


@dataclass(frozen=True)
class TraceComplexityResult:
    """Outcome of the doubling-plus-bisection search for the smallest trace
    budget T at which the algorithm's empirical success rate reaches the
    target.  evaluations holds every (T, success_rate) probed, in probe
    order; t_star is the smallest probed T meeting the target and t_below
    the largest probed T under it (0 when T=1 already meets it)."""

    algorithm: str
    target_rate: float
    trials: int
    t_star: int
    t_below: int
    evaluations: tuple
    master_seed: int


def estimate_trace_complexity(
    algorithm: Algorithm,
    seed_source,
    model: ch.ModelSpec,
    rng: RandomStream,
    *,
    target_rate: float = 0.9,
    trials: int = 50,
    t_cap: int = 4096,
    n: int | None = None,
) -> TraceComplexityResult:
    """Find the empirical trace complexity by doubling T until the success
    rate clears target_rate, then bisecting down to adjacent integers.

    Every probed T uses the dedicated stream rng.child(T), so a T's estimate
    does not depend on the search path.  Raises BracketingError when even
    t_cap traces per trial stay below the target.
    """
    if not 0.0 < target_rate <= 1.0:
        raise ModelParamError("target_rate must lie in (0, 1]")
    if t_cap < 1:
        raise ModelParamError("t_cap must be >= 1")
    if n is None:
        n = seed_source.length
    evaluations = []
    cache: dict = {}

    def rate_at(T: int) -> float:
        if T not in cache:
            st = rng.child(T)
            succ = 0
            for trial in range(trials):
                tt = st.child(trial)
                seeds = seed_source.draw(tt.child(0))
                ts = ch.generate_trace_set(model, seeds, T, tt.child(1))
                result = algorithm.reconstruct(list(ts.traces), n)
                if _is_success(result, seed_source.truth(seeds)):
                    succ += 1
            cache[T] = succ / trials
            evaluations.append((T, cache[T]))
        return cache[T]

    T = 1
    prev = 0
    while rate_at(T) < target_rate:
        if T >= t_cap:
            raise BracketingError(
                f"success rate {cache[T]:.3f} at T={T} (cap) is below target {target_rate}"
            )
        prev = T
        T = min(2 * T, t_cap)
    hi = T
    lo = prev
    while hi - lo > 1:
        mid = (hi + lo) // 2
        if rate_at(mid) >= target_rate:
            hi = mid
        else:
            lo = mid
    return TraceComplexityResult(
        algorithm=algorithm.name,
        target_rate=target_rate,
        trials=trials,
        t_star=hi,
        t_below=lo,
        evaluations=tuple(evaluations),
        master_seed=rng.master_seed,
    )
