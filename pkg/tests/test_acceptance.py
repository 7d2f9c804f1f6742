"""End-to-end acceptance suite.

Each test covers one numbered release criterion and prints a single
"criterion NN: PASS/FAIL - detail" line (visible with pytest -s; pytest -v
additionally shows the per-test verdicts).  Tolerances and time budgets are
asserted inside the tests; every random experiment is pinned to a fixed
master seed so the whole suite is reproducible bit for bit.

Statistical agreement between samplers and likelihoods is judged with the
exact two-sided binomial tail at the significance level of a five-sigma
normal test, erfc(5/sqrt(2)).  The normal z-score itself is not a valid
yardstick here: several models have outcomes whose expected count over 10^6
draws is far below one, and for those a single observation always lands
beyond five sigma even though it is a perfectly ordinary event.
"""

import gc
import json
import math
import statistics
import subprocess
import sys
import time
from fractions import Fraction as Fr

import numpy as np
from scipy import stats

import oracles
from tracekit import bench
from tracekit import channels as ch
from tracekit import exact
from tracekit import heuristics as hx
from tracekit import io as tio
from tracekit import kernels
from tracekit import likelihood as lk
from tracekit import multiseed
from tracekit.core import (
    BINARY,
    DNA,
    RandomStream,
    all_strings,
    all_strings_up_to,
    random_string,
)

FIVE_SIGMA_ALPHA = math.erfc(5.0 / math.sqrt(2.0))


def _verdict(num: int, ok: bool, detail: str) -> None:
    print(f"criterion {num:02d}: {'PASS' if ok else 'FAIL'} - {detail}")
    assert ok, f"criterion {num:02d} failed: {detail}"


def _seed_lengths(model: ch.ModelSpec, seeds) -> list[int]:
    """Seed lengths in the arity order max_trace_length expects."""
    if isinstance(seeds, str):
        return [len(seeds)]
    if model.kind == ch.VDJ:
        return [
            len(part) if isinstance(part, str) else max(len(x) for x in part)
            for part in seeds
        ]
    return [len(s) for s in seeds]


def _support(model: ch.ModelSpec, seeds) -> list[str]:
    """Every trace the model can emit, by bounded enumeration."""
    bound = model.max_trace_length(_seed_lengths(model, seeds))
    if model.preserves_length:
        cands = all_strings(model.alphabet, bound)
    else:
        cands = all_strings_up_to(model.alphabet, bound)
    out = []
    for c in cands:
        if lk.lp_trace(c, seeds, model) > float("-inf"):
            out.append(c)
    return out


def test_criterion_01_every_model_normalizes():
    """Trace distributions sum to one over the full enumerated support."""
    quaternary = [
        (ch.ModelSpec(ch.TRIM_SUFFIX_AND_EXTEND), "ACG"),
        (ch.ModelSpec(ch.SUFFIX_EXTEND_TRIM_SUFFIX, ch.ModelParams(t=2)), "ACG"),
        (
            ch.ModelSpec(
                ch.SUFFIX_EXTEND_MUTATE_TRIM_SUFFIX, ch.ModelParams(t=1, epsilon=0.25)
            ),
            "ACG",
        ),
        (ch.ModelSpec(ch.TRIM_AND_EXTEND), "ACG"),
        (ch.ModelSpec(ch.MUTATE_TRIM_AND_EXTEND, ch.ModelParams(epsilon=0.25)), "ACG"),
        (ch.ModelSpec(ch.EXTEND_MUTATE_TRIM, ch.ModelParams(t=1, epsilon=0.25)), "ACG"),
        (ch.ModelSpec(ch.CONCAT2, ch.ModelParams(t=1)), ("AC", "GT")),
        (ch.ModelSpec(ch.VDJ, ch.ModelParams(t=1, epsilon=0.25)), ("A", "C", "G")),
    ]
    binary = [
        (ch.ModelSpec(ch.TRIM_SUFFIX_AND_EXTEND, alphabet=BINARY), "010011"),
        (
            ch.ModelSpec(ch.SUFFIX_EXTEND_TRIM_SUFFIX, ch.ModelParams(t=2), BINARY),
            "010011",
        ),
        (
            ch.ModelSpec(
                ch.SUFFIX_EXTEND_MUTATE_TRIM_SUFFIX,
                ch.ModelParams(t=2, epsilon=0.3),
                BINARY,
            ),
            "010011",
        ),
        (ch.ModelSpec(ch.TRIM_AND_EXTEND, alphabet=BINARY), "010011"),
        (
            ch.ModelSpec(ch.MUTATE_TRIM_AND_EXTEND, ch.ModelParams(epsilon=0.3), BINARY),
            "010011",
        ),
        (
            ch.ModelSpec(
                ch.EXTEND_MUTATE_TRIM, ch.ModelParams(t=2, epsilon=0.3), BINARY
            ),
            "010011",
        ),
    ]
    start = time.perf_counter()
    worst = 0.0
    for model, seeds in quaternary + binary:
        bound = model.max_trace_length(_seed_lengths(model, seeds))
        if model.preserves_length:
            cands = all_strings(model.alphabet, bound)
        else:
            cands = all_strings_up_to(model.alphabet, bound)
        total = sum(math.exp(lk.lp_trace(c, seeds, model)) for c in cands)
        worst = max(worst, abs(total - 1.0))
        assert abs(total - 1.0) <= 1e-9, f"{model.kind}: sum(P) = {total!r}"
    elapsed = time.perf_counter() - start
    assert elapsed < 120.0
    _verdict(
        1,
        True,
        f"14 model instances normalize, worst |sum(P)-1| = {worst:.2e}, "
        f"{elapsed:.1f}s",
    )


def test_criterion_02_subsequence_count_and_deletion_likelihood():
    """Embedding count is exact and the deletion likelihood matches it."""
    count = kernels.subsequence_count("11010", "110")
    p = math.exp(lk.lp_deletion("110", "11010", 0.5))
    ok = count == 4 and abs(p - 0.125) <= 1e-12
    _verdict(
        2,
        ok,
        f"subsequence_count = {count} (want 4), "
        f"P(trace) = {p!r} (want 0.125 +/- 1e-12)",
    )


def test_criterion_03_trie_matches_brute_force():
    """Trie MLE and exhaustive MLE agree on 50 random instances."""
    model = ch.ModelSpec(ch.TRIM_SUFFIX_AND_EXTEND, alphabet=BINARY)
    root = RandomStream(303)
    start = time.perf_counter()
    agree = 0
    for inst in range(50):
        srng = root.child(inst)
        seed = random_string(5, srng.child(0), BINARY)
        traces = ch.generate_trace_set(model, seed, 10, srng.child(1)).traces
        via_trie = exact.mle_trim_suffix_and_extend(traces, BINARY)
        via_brute = exact.brute_force_mle(traces, model, 5)
        agree += via_trie == via_brute
    elapsed = time.perf_counter() - start
    assert elapsed < 60.0
    _verdict(3, agree == 50, f"{agree}/50 instances agree, {elapsed:.1f}s")


def test_criterion_04_samplers_match_likelihoods():
    """10^6 draws per model: every support outcome passes an exact
    binomial two-sided tail test at the five-sigma significance level,
    and no sampled outcome lies outside the support."""
    cases = [
        (ch.ModelSpec(ch.TRIM_SUFFIX_AND_EXTEND), "ACG"),
        (ch.ModelSpec(ch.SUFFIX_EXTEND_TRIM_SUFFIX, ch.ModelParams(t=2)), "AC"),
        (
            ch.ModelSpec(
                ch.SUFFIX_EXTEND_MUTATE_TRIM_SUFFIX, ch.ModelParams(t=2, epsilon=0.2)
            ),
            "AC",
        ),
        (ch.ModelSpec(ch.TRIM_AND_EXTEND), "ACG"),
        (ch.ModelSpec(ch.MUTATE_TRIM_AND_EXTEND, ch.ModelParams(epsilon=0.2)), "AC"),
        (ch.ModelSpec(ch.EXTEND_MUTATE_TRIM, ch.ModelParams(t=1, epsilon=0.2)), "AC"),
        (ch.ModelSpec(ch.CONCAT2, ch.ModelParams(t=1)), ("AC", "GT")),
        (ch.ModelSpec(ch.VDJ, ch.ModelParams(t=1, epsilon=0.2)), ("AC", "G", "T")),
        (ch.ModelSpec(ch.DELETION, ch.ModelParams(q=0.3), BINARY), "01011"),
        (
            ch.ModelSpec(ch.TRIM_SUFFIX_AND_EXTEND, multi_seed=2),
            ("AC", "GG"),
        ),
    ]
    T = 10**6
    root = RandomStream(2024)
    start = time.perf_counter()
    checked = 0
    for idx, (model, seeds) in enumerate(cases):
        counts = ch.sample_trace_counts(model, seeds, T, root.child(idx))
        support = _support(model, seeds)
        stray = set(counts) - set(support)
        assert not stray, f"{model.kind}: sampled impossible traces {sorted(stray)}"
        for c in support:
            p = math.exp(lk.lp_trace(c, seeds, model))
            cnt = counts.get(c, 0)
            tail = 2.0 * min(stats.binom.cdf(cnt, T, p), stats.binom.sf(cnt - 1, T, p))
            assert tail >= FIVE_SIGMA_ALPHA, (
                f"{model.kind}: outcome {c!r} count {cnt}, expected {T * p:.3f}, "
                f"exact tail {tail:.3e} below five-sigma level"
            )
            checked += 1
    elapsed = time.perf_counter() - start
    assert elapsed < 600.0
    _verdict(
        4,
        True,
        f"10 models x 10^6 draws, {checked} outcomes within the five-sigma "
        f"exact-tail bound, {elapsed:.1f}s",
    )


def test_criterion_05_known_probability_values():
    """Hand-checkable probabilities, each confirmed by the exact rational
    oracle and by the log-space implementation."""
    checks = [
        (
            "P_tse(A|A)",
            oracles.frac_trim_suffix_and_extend("A", "A"),
            lk.lp_trim_suffix_and_extend("A", "A"),
            Fr(5, 8),
        ),
        (
            "P_sets(A|A,t=1)",
            oracles.frac_suffix_extend_trim_suffix("A", "A", 1),
            lk.lp_suffix_extend_trim_suffix("A", "A", 1),
            Fr(5, 16),
        ),
        (
            "P_tae(AA|AA)",
            oracles.frac_trim_and_extend("AA", "AA"),
            lk.lp_trim_and_extend("AA", "AA"),
            Fr(9, 32),
        ),
        (
            "P_vdj(ACG|A,C,G,t=0)",
            oracles.frac_vdj("ACG", "A", "C", "G", 0, Fr(0)),
            lk.lp_vdj("ACG", "A", "C", "G", 0, 0.0),
            Fr(1, 12),
        ),
    ]
    for label, frac, lp, want in checks:
        assert frac == want, f"{label}: oracle gives {frac}, want {want}"
        got = math.exp(lp)
        assert abs(got - float(want)) <= 1e-12, f"{label}: exp(lp) = {got!r}"
    _verdict(5, True, "4 spot values exact (5/8, 5/16, 9/32, 1/12), both routes")


def test_criterion_06_trie_scales_near_linearly():
    """Doubling the trace count at most 2.5x-es the trie MLE wall time."""
    srng = RandomStream(606)
    seed = random_string(30, srng.child(0), DNA)
    model = ch.ModelSpec(ch.TRIM_SUFFIX_AND_EXTEND)
    traces = ch.generate_trace_set(model, seed, 40_000, srng.child(1)).traces

    def timed(T: int) -> float:
        subset = traces[:T]
        exact.mle_trim_suffix_and_extend(subset, DNA)  # warm up
        runs = []
        for _ in range(5):
            gc.collect()
            gc.disable()
            t0 = time.perf_counter()
            exact.mle_trim_suffix_and_extend(subset, DNA)
            runs.append(time.perf_counter() - t0)
            gc.enable()
        return statistics.median(runs)

    t1, t2, t4 = timed(10_000), timed(20_000), timed(40_000)
    r21, r42 = t2 / t1, t4 / t2
    ok = r21 <= 2.5 and r42 <= 2.5
    _verdict(
        6,
        ok,
        f"median times {t1:.3f}s / {t2:.3f}s / {t4:.3f}s, "
        f"doubling ratios {r21:.2f} and {r42:.2f} (limit 2.5)",
    )


def test_criterion_07_mean_profiles_separate_hard_pair():
    """Position means distinguish the alternating seed from its two-bit
    variant, and the closed-form mean profile matches mask enumeration."""
    s1 = "10" * 10
    s2 = s1[:8] + "01" + s1[10:]
    cands = (s1, s2)
    root = RandomStream(77)
    wins = 0
    for trial in range(100):
        st = root.child(trial)
        truth = cands[trial % 2]
        means = ch.sample_deletion_bit_means(truth, 0.5, 100_000, st)
        wins += hx.select_by_means(means, cands, 0.5) == truth

    alt15 = "101010101010101"
    exact_checks = [
        (alt15, Fr(1, 2)),
        (alt15[:6] + "01" + alt15[8:], Fr(1, 2)),
        ("110100111010", Fr(1, 4)),
    ]
    worst = 0.0
    for s, q in exact_checks:
        want = [float(x) for x in oracles.frac_deletion_means(s, q, len(s))]
        got = hx.expected_mean_profile(s, float(q))
        worst = max(worst, float(np.max(np.abs(got - np.asarray(want)))))
    ok = wins >= 95 and worst <= 1e-12
    _verdict(
        7,
        ok,
        f"{wins}/100 correct picks (need 95); closed-form vs enumeration "
        f"worst gap {worst:.2e}",
    )


def test_criterion_08_zero_noise_identities():
    """With mutation probability zero the two mutating models reduce
    exactly (same floats) to their mutation-free counterparts."""
    root = RandomStream(808)
    for i in range(500):
        st = root.child(i)
        lc, ls = (int(x) for x in st.gen.integers(0, 7, size=2))
        c = random_string(lc, st.child(0), DNA)
        s = random_string(ls, st.child(1), DNA)
        t = int(st.gen.integers(0, 4))
        assert lk.lp_suffix_extend_mutate_trim_suffix(
            c, s, t, 0.0
        ) == lk.lp_suffix_extend_trim_suffix(c, s, t), (c, s, t)
    for i in range(500, 1000):
        st = root.child(i)
        length = int(st.gen.integers(0, 7))
        c = random_string(length, st.child(0), DNA)
        s = random_string(length, st.child(1), DNA)
        assert lk.lp_mutate_trim_and_extend(c, s, 0.0) == lk.lp_trim_and_extend(
            c, s
        ), (c, s)
    _verdict(8, True, "1000 random (trace, seed) pairs, both identities exact")


def test_criterion_09_manifest_reruns_are_byte_identical(tmp_path):
    """The same manifest produces byte-identical output files in separate
    processes regardless of the thread count the environment requests."""
    gen_manifest = tio.ExperimentManifest(
        master_seed=424242,
        model=ch.ModelSpec(ch.DELETION, ch.ModelParams(q=0.1), BINARY),
        task={"type": "generate", "T": 64},
        seeds="01100110",
    )
    bench_manifest = tio.ExperimentManifest(
        master_seed=515151,
        model=ch.ModelSpec(ch.DELETION, ch.ModelParams(q=0.1), BINARY),
        task={
            "type": "bench",
            "algorithm": "bma",
            "traces_per_trial": 8,
            "trials": 40,
            "target_rate": 0.5,
        },
        random_seeds={"length": 8},
    )
    tio.save_manifest(tmp_path / "gen.json", gen_manifest)
    tio.save_manifest(tmp_path / "ben.json", bench_manifest)

    def run(tag: str, threads: str) -> tuple[bytes, bytes]:
        gen_out = tmp_path / f"traces-{tag}.json"
        ben_out = tmp_path / f"report-{tag}.json"
        env = {
            "PATH": "/usr/bin:/bin",
            "OMP_NUM_THREADS": threads,
            "OPENBLAS_NUM_THREADS": threads,
            "MKL_NUM_THREADS": threads,
        }
        for args, out in (
            (["generate", "--manifest", str(tmp_path / "gen.json")], gen_out),
            (["bench", "--manifest", str(tmp_path / "ben.json")], ben_out),
        ):
            proc = subprocess.run(
                [sys.executable, "-m", "tracekit.cli", *args, "-o", str(out)],
                capture_output=True,
                text=True,
                env=env,
            )
            assert proc.returncode == 0, proc.stderr
        return gen_out.read_bytes(), ben_out.read_bytes()

    first = run("a", "1")
    second = run("b", "4")
    ok = first[0] == second[0] and first[1] == second[1]
    _verdict(
        9,
        ok,
        f"generate ({len(first[0])} bytes) and bench ({len(first[1])} bytes) "
        f"outputs identical across 1-thread and 4-thread runs",
    )


def test_criterion_10_reference_pipelines_recover_seeds():
    """Three end-to-end pipelines hit their recovery targets."""
    # (a) bitwise majority alignment on the deletion channel
    model_a = ch.ModelSpec(ch.DELETION, ch.ModelParams(q=0.01), BINARY)
    report = bench.estimate_success(
        bench.make_algorithm("bma", model=model_a),
        bench.RandomSeeds(100, model_a),
        model_a,
        16,
        200,
        RandomStream(4242),
    )
    ok_a = report.success_rate >= 0.9

    # (b) population recovery of a two-seed deletion mixture
    seeds_b = ("10110001", "01001110")
    model_b = ch.ModelSpec(ch.DELETION, ch.ModelParams(q=0.01), BINARY, multi_seed=2)
    root = RandomStream(555)
    hits = 0
    for trial in range(100):
        st = root.child(trial)
        traces = ch.generate_trace_set(model_b, seeds_b, 80, st).traces
        result = multiseed.population_recover(traces, 2, model_b, "brute-force", n=8)
        hits += result.complete and result.seeds == frozenset(seeds_b)
    ok_b = hits >= 95

    # (c) k-mer mining on noiseless extend-trim traces
    model_c = ch.ModelSpec(ch.EXTEND_MUTATE_TRIM, ch.ModelParams(t=5, epsilon=0.0))
    srng = RandomStream(20250814)
    seed_c = random_string(20, srng.child(0), DNA)
    traces_c = ch.generate_trace_set(model_c, seed_c, 2000, srng.child(1)).traces
    mined = hx.mine_seeds(traces_c, k=9)
    ok_c = mined == {seed_c}

    _verdict(
        10,
        ok_a and ok_b and ok_c,
        f"majority alignment {report.success_rate:.2f} (need 0.90); "
        f"mixture recovery {hits}/100 (need 95); "
        f"mining found {sorted(mined)} for seed {seed_c}",
    )
