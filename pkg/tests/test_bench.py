"""Benchmark harness: Wilson intervals, the algorithm registry, vote
amplification, success-rate estimation, and trace-complexity search."""

import dataclasses
import math

import pytest

from tracekit import bench
from tracekit import channels as ch
from tracekit.core import BINARY, DNA, ModelParams, RandomStream
from tracekit.errors import ArityError, BracketingError, ConfigError, ModelParamError


def deletion_model(q=0.1, alphabet=BINARY):
    return ch.ModelSpec(ch.DELETION, ModelParams(q=q), alphabet=alphabet)


class TestWilsonInterval:
    def test_frozen_value(self):
        low, high = bench.wilson_interval(95, 100)
        assert low == pytest.approx(0.8882480347279118, abs=1e-15)
        assert high == pytest.approx(0.9784566385436864, abs=1e-15)

    def test_degenerate_counts_stay_in_unit_interval(self):
        assert bench.wilson_interval(0, 10)[0] == 0.0
        assert bench.wilson_interval(10, 10)[1] == 1.0

    def test_interval_narrows_with_trials(self):
        w1 = bench.wilson_interval(8, 10)
        w2 = bench.wilson_interval(800, 1000)
        assert (w2[1] - w2[0]) < (w1[1] - w1[0])

    def test_validation(self):
        with pytest.raises(ModelParamError):
            bench.wilson_interval(1, 0)
        with pytest.raises(ModelParamError):
            bench.wilson_interval(5, 4)


class TestMakeAlgorithm:
    def test_unknown_id(self):
        with pytest.raises(ConfigError):
            bench.make_algorithm("simulated-annealing")

    def test_identity(self):
        algo = bench.make_algorithm("identity")
        assert algo.name == "identity"
        assert algo.reconstruct(["ACG", "T"], 3) == "ACG"
        assert algo.reconstruct([], 3) == ""

    def test_brute_force_needs_model(self):
        with pytest.raises(ConfigError):
            bench.make_algorithm("brute-force")

    def test_mean_select_needs_deletion_model_and_candidates(self):
        with pytest.raises(ConfigError):
            bench.make_algorithm("mean-select", model=None)
        with pytest.raises(ConfigError):
            bench.make_algorithm("mean-select", model=deletion_model())

    def test_population_needs_m(self):
        with pytest.raises(ConfigError):
            bench.make_algorithm("population", model=deletion_model())

    def test_unused_options_rejected(self):
        with pytest.raises(ConfigError):
            bench.make_algorithm("greedy", radius=3)

    def test_every_registry_id_constructible(self):
        model = deletion_model()
        by_id = {
            "trie-exact": {},
            "brute-force": {"model": model},
            "greedy": {},
            "bma": {},
            "mining-d": {},
            "mean-select": {"model": model, "candidates": ["01", "10"]},
            "population": {"model": model, "M": 2},
            "identity": {},
        }
        assert set(by_id) == set(bench.ALGORITHM_IDS)
        for name, kw in by_id.items():
            assert bench.make_algorithm(name, **kw).name == name

    def test_mining_options_forwarded(self):
        algo = bench.make_algorithm("mining-d", k=3, min_support=1, select_alpha=0.5)
        out = algo.reconstruct(["AAAA"] * 30, 4)
        assert isinstance(out, frozenset)


class TestAmplify:
    def test_majority_vote(self):
        algo = bench.make_algorithm("identity")
        amp = bench.amplify(algo, 3)
        # chunks of 2: identities 0 -> "x", 1 -> "y", 2 -> "y"
        assert amp.reconstruct(["x", "x", "y", "y", "y", "y"], 1) == "y"
        assert amp.name == "amplify(identity,3)"

    def test_remainder_dropped(self):
        algo = bench.make_algorithm("identity")
        amp = bench.amplify(algo, 2)
        # 5 traces -> chunks of 2; the fifth trace ("z") is never seen
        assert amp.reconstruct(["a", "a", "b", "b", "z"], 1) == "a"

    def test_tie_breaks_to_smallest(self):
        algo = bench.make_algorithm("identity")
        amp = bench.amplify(algo, 2)
        assert amp.reconstruct(["b", "a"], 1) == "a"

    def test_too_few_traces(self):
        amp = bench.amplify(bench.make_algorithm("identity"), 4)
        with pytest.raises(ArityError):
            amp.reconstruct(["a", "b"], 1)

    def test_replicas_must_be_positive(self):
        with pytest.raises(ModelParamError):
            bench.amplify(bench.make_algorithm("identity"), 0)


class TestSeedSources:
    def test_fixed_seeds_replay(self):
        model = deletion_model()
        src = bench.FixedSeeds("0110", model)
        assert src.length == 4
        assert src.draw(RandomStream(master_seed=1)) == ("0110",)
        assert src.truth(("0110",)) == "0110"

    def test_fixed_mixture_truth_is_frozenset(self):
        model = ch.ModelSpec(ch.DELETION, ModelParams(q=0.1), alphabet=BINARY, multi_seed=2)
        src = bench.FixedSeeds(("01", "10"), model)
        assert src.truth(src.draw(RandomStream(master_seed=1))) == frozenset({"01", "10"})

    def test_fixed_concat2_length_and_truth(self):
        model = ch.ModelSpec(ch.CONCAT2, ModelParams(t=1), alphabet=BINARY)
        src = bench.FixedSeeds(("011", "100"), model)
        assert src.length == 6
        assert src.truth(src.seeds) == ("011", "100")

    def test_random_seeds_deterministic_per_stream(self):
        model = deletion_model()
        src = bench.RandomSeeds(6, model)
        a = src.draw(RandomStream(master_seed=9))
        b = src.draw(RandomStream(master_seed=9))
        c = src.draw(RandomStream(master_seed=10))
        assert a == b
        assert len(a) == 1 and len(a[0]) == 6
        assert a != c  # overwhelmingly likely and pinned by the fixed seeds

    def test_random_seed_sets_distinct_and_sorted(self):
        model = ch.ModelSpec(ch.DELETION, ModelParams(q=0.1), alphabet=BINARY, multi_seed=3)
        src = bench.RandomSeeds(4, model, count=3)
        seeds = src.draw(RandomStream(master_seed=11))
        assert len(set(seeds)) == 3
        assert list(seeds) == sorted(seeds, key=BINARY.sort_key)

    def test_random_multipart_count_rejected(self):
        model = ch.ModelSpec(ch.CONCAT2, ModelParams(t=1), alphabet=BINARY)
        with pytest.raises(ConfigError):
            bench.RandomSeeds(3, model, count=2)

    def test_validation(self):
        with pytest.raises(ModelParamError):
            bench.RandomSeeds(-1, deletion_model())
        with pytest.raises(ModelParamError):
            bench.RandomSeeds(3, deletion_model(), count=0)


class TestEstimateSuccess:
    def test_identity_on_noiseless_channel_always_succeeds(self):
        model = deletion_model(q=0.0)
        src = bench.FixedSeeds("0110", model)
        algo = bench.make_algorithm("identity")
        rep = bench.estimate_success(
            algo, src, model, traces_per_trial=3, trials=20, rng=RandomStream(master_seed=5)
        )
        assert rep.successes == 20
        assert rep.success_rate == 1.0
        assert rep.n == 4
        assert rep.master_seed == 5
        assert rep.wilson_low == pytest.approx(bench.wilson_interval(20, 20)[0])

    def test_deterministic_up_to_wall_time(self):
        model = deletion_model(q=0.2)
        src = bench.RandomSeeds(6, model)
        algo = bench.make_algorithm("identity")
        reps = [
            bench.estimate_success(
                algo, src, model, traces_per_trial=4, trials=30, rng=RandomStream(master_seed=77)
            )
            for _ in range(2)
        ]
        a, b = (dataclasses.replace(r, wall_time_s=0.0) for r in reps)
        assert a == b

    def test_near_misses_counted(self):
        # Identity answers with its single trace; a one-deletion trace is
        # edit distance 1 from the seed, so near misses must show up.
        model = deletion_model(q=0.35)
        src = bench.FixedSeeds("1111", model)
        algo = bench.make_algorithm("identity")
        rep = bench.estimate_success(
            algo, src, model, traces_per_trial=1, trials=60, rng=RandomStream(master_seed=13)
        )
        assert rep.near_misses > 0
        assert rep.successes + rep.near_misses <= 60

    def test_meets_target(self):
        model = deletion_model(q=0.0)
        src = bench.FixedSeeds("0110", model)
        algo = bench.make_algorithm("identity")
        rep = bench.estimate_success(
            algo,
            src,
            model,
            traces_per_trial=1,
            trials=50,
            rng=RandomStream(master_seed=5),
            target_rate=0.9,
        )
        assert rep.meets_target is True
        rep2 = dataclasses.replace(rep, target_rate=None)
        assert rep2.meets_target is None
        rep3 = dataclasses.replace(rep, target_rate=0.999)
        assert rep3.meets_target is False

    def test_validation(self):
        model = deletion_model()
        src = bench.FixedSeeds("01", model)
        algo = bench.make_algorithm("identity")
        with pytest.raises(ModelParamError):
            bench.estimate_success(algo, src, model, 1, 0, RandomStream(master_seed=1))
        with pytest.raises(ModelParamError):
            bench.estimate_success(algo, src, model, -1, 5, RandomStream(master_seed=1))


def threshold_algorithm(t_min, answer="0110"):
    """Succeeds iff given at least t_min traces; used to pin the search."""
    return bench.Algorithm(
        name=f"threshold({t_min})",
        _fn=lambda traces, n: answer if len(traces) >= t_min else "",
    )


class TestTraceComplexity:
    def run_search(self, t_min, **kw):
        model = deletion_model(q=0.0)
        src = bench.FixedSeeds("0110", model)
        return bench.estimate_trace_complexity(
            threshold_algorithm(t_min),
            src,
            model,
            RandomStream(master_seed=3),
            trials=5,
            **kw,
        )

    def test_finds_exact_threshold(self):
        res = self.run_search(37)
        assert res.t_star == 37
        assert res.t_below == 36
        probed = [T for T, _ in res.evaluations]
        assert len(probed) == len(set(probed))
        rates = dict(res.evaluations)
        assert rates[37] == 1.0
        assert rates[36] == 0.0

    def test_immediate_success_reports_zero_below(self):
        res = self.run_search(1)
        assert res.t_star == 1
        assert res.t_below == 0
        assert res.evaluations == ((1, 1.0),)

    def test_threshold_at_cap_boundary(self):
        res = self.run_search(16, t_cap=16)
        assert res.t_star == 16
        assert res.t_below == 15

    def test_unreachable_target_raises(self):
        with pytest.raises(BracketingError):
            self.run_search(100, t_cap=16)

    def test_every_probe_recorded_once(self):
        res = self.run_search(23)
        probed = [T for T, _ in res.evaluations]
        assert len(probed) == len(set(probed))
        # the search must have probed both endpoints of the answer
        assert {22, 23} <= set(probed)

    def test_validation(self):
        with pytest.raises(ModelParamError):
            self.run_search(5, target_rate=0.0)
        with pytest.raises(ModelParamError):
            self.run_search(5, t_cap=0)


class TestSuccessScoring:
    def test_set_results_scored_by_containment(self):
        assert bench._is_success(frozenset({"ab", "cd"}), "ab")
        assert not bench._is_success(frozenset({"cd"}), "ab")
        assert bench._is_success(frozenset({"a", "b", "c"}), frozenset({"a", "b"}))

    def test_string_results_exact(self):
        assert bench._is_success("abc", "abc")
        assert not bench._is_success("abd", "abc")

    def test_near_miss_is_strings_only(self):
        assert bench._is_near_miss("abc", "abd")
        assert not bench._is_near_miss("abc", "abcde")
        assert not bench._is_near_miss(frozenset({"abc"}), "abc")
