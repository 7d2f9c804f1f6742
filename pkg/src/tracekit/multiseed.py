"""Population recovery for traces drawn from a mixture of unknown seeds:
greedy radius clustering by edit distance, then per-cluster reconstruction.
"""

import dataclasses
import math
from dataclasses import dataclass

from . import channels as ch
from . import kernels
from .core import ModelParams
from .errors import ArityError, ModelParamError

__all__ = [
    "Clustering",
    "cluster_traces",
    "expected_edit_errors",
    "default_cluster_radius",
    "RecoveryResult",
    "population_recover",
]


@dataclass(frozen=True)
class Clustering:
    """Partition of a trace list into clusters.

    labels[i] is the cluster index of trace i; clusters[j] lists member
    trace indices in input order; representatives[j] is the founding trace
    that later members were compared against.
    """

    labels: tuple
    clusters: tuple
    representatives: tuple

    def __len__(self) -> int:
        return len(self.clusters)

    def members(self, j: int, traces) -> list:
        return [traces[i] for i in self.clusters[j]]


def cluster_traces(traces, d_max: int) -> Clustering:
    """Single-pass greedy clustering.

    Each trace joins the first existing cluster whose founding trace is
    within edit distance d_max, else founds a new cluster.  Linear in the
    number of clusters per trace, and the banded distance kernel exits as
    soon as d_max is exceeded, so the radius also caps the per-pair cost.
    """
    if d_max < 0:
        raise ModelParamError("d_max must be >= 0")
    traces = list(traces)
    labels = []
    reps: list = []
    clusters: list = []
    for i, tr in enumerate(traces):
        placed = None
        for j, rep in enumerate(reps):
            if kernels.edit_distance(tr, rep, limit=d_max) <= d_max:
                placed = j
                break
        if placed is None:
            placed = len(reps)
            reps.append(tr)
            clusters.append([])
        clusters[placed].append(i)
        labels.append(placed)
    return Clustering(
        labels=tuple(labels),
        clusters=tuple(tuple(c) for c in clusters),
        representatives=tuple(reps),
    )


def expected_edit_errors(model: ch.ModelSpec, n: int) -> float:
    """Rough mean edit distance between a seed of length n and one trace.

    These are coarse first-moment estimates (trimmed symbols plus appended
    symbols plus expected substitutions), good enough to set a clustering
    radius; they are not exact channel statistics.
    """
    p = model.params
    eps = p.epsilon or 0.0
    t = p.t or 0
    kind = model.kind
    if kind == ch.DELETION:
        return p.q * n
    if kind == ch.TRIM_SUFFIX_AND_EXTEND:
        return n / 2
    if kind == ch.SUFFIX_EXTEND_TRIM_SUFFIX:
        return n / 2 + t / 2
    if kind == ch.SUFFIX_EXTEND_MUTATE_TRIM_SUFFIX:
        return n / 2 + t / 2 + eps * n
    if kind == ch.TRIM_AND_EXTEND:
        return 2 * n / 3
    if kind == ch.MUTATE_TRIM_AND_EXTEND:
        return 2 * n / 3 + eps * n
    if kind == ch.EXTEND_MUTATE_TRIM:
        return 2 * n / 3 + t + eps * n
    if kind == ch.CONCAT2:
        return n / 2 + t
    if kind == ch.VDJ:
        return 2 * n / 3 + t + eps * n
    raise ModelParamError(f"unknown model kind {kind!r}")


def default_cluster_radius(model: ch.ModelSpec, n: int) -> int:
    """Radius covering typical same-seed scatter without swallowing the
    whole space: three times the expected per-trace error count, capped at
    a quarter of the seed length, floored at 1."""
    est = expected_edit_errors(model, n)
    return max(1, min(math.ceil(3 * est), max(1, n // 4)))


@dataclass(frozen=True)
class RecoveryResult:
    seeds: frozenset
    clustering: Clustering
    complete: bool
    message: str


def population_recover(
    traces,
    M: int,
    model: ch.ModelSpec,
    reconstructor,
    *,
    n: int | None = None,
    d_max: int | None = None,
) -> RecoveryResult:
    """Recover an M-seed population: cluster the pooled traces, keep the M
    largest clusters, and run the reconstructor on each one.

    reconstructor is a callable (traces, n) -> str, or the name of a bench
    registry algorithm.  n defaults to the longest trace, which matches the
    true seed length for trimming-free channels and is a lower bound
    otherwise.  Returns complete=False when fewer than M clusters form or
    two clusters reconstruct to the same string.
    """
    if M < 1:
        raise ModelParamError("M must be >= 1")
    traces = list(traces)
    if not traces:
        raise ArityError("population recovery needs at least one trace")
    if n is None:
        n = max(len(tr) for tr in traces)
    if d_max is None:
        d_max = default_cluster_radius(model, n)
    if isinstance(reconstructor, str):
        from . import bench

        # each kept cluster is reconstructed as a single-seed instance
        single = dataclasses.replace(model, multi_seed=None)
        algo = bench.make_algorithm(reconstructor, model=single)
        reconstructor = lambda trs, nn: algo.reconstruct(trs, nn)

    clustering = cluster_traces(traces, d_max)
    order = sorted(range(len(clustering)), key=lambda j: (-len(clustering.clusters[j]), j))
    kept = order[:M]
    recovered = []
    for j in kept:
        members = clustering.members(j, traces)
        recovered.append(reconstructor(members, n))
    seeds = frozenset(recovered)

    if len(clustering) < M:
        msg = f"only {len(clustering)} clusters formed at radius {d_max}, expected {M}"
        return RecoveryResult(seeds=seeds, clustering=clustering, complete=False, message=msg)
    if len(seeds) < len(kept):
        msg = "distinct clusters reconstructed to the same seed"
        return RecoveryResult(seeds=seeds, clustering=clustering, complete=False, message=msg)
    leftover = len(traces) - sum(len(clustering.clusters[j]) for j in kept)
    msg = f"{len(clustering)} clusters at radius {d_max}; {leftover} traces outside the kept {M}"
    return RecoveryResult(seeds=seeds, clustering=clustering, complete=True, message=msg)
