"""Compiled and pure string kernels must agree exactly; the compiled
subsequence count must fall back to big integers past the uint64 range."""

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tracekit import _pure, kernels

binary = st.text(alphabet="01", max_size=40)
dna = st.text(alphabet="ACGT", max_size=25)


def brute_subsequence_count(s: str, c: str) -> int:
    if not c:
        return 1
    total = 0
    for i in range(len(s)):
        if s[i] == c[0]:
            total += brute_subsequence_count(s[i + 1 :], c[1:])
    return total


def brute_edit_distance(a: str, b: str) -> int:
    if not a:
        return len(b)
    if not b:
        return len(a)
    return min(
        brute_edit_distance(a[1:], b) + 1,
        brute_edit_distance(a, b[1:]) + 1,
        brute_edit_distance(a[1:], b[1:]) + (a[0] != b[0]),
    )


class TestSubsequenceCount:
    def test_known_value(self):
        assert kernels.subsequence_count("11010", "110") == 4

    def test_empty_target(self):
        assert kernels.subsequence_count("1101", "") == 1
        assert kernels.subsequence_count("", "") == 1
        assert kernels.subsequence_count("", "1") == 0

    def test_all_ones_is_binomial(self):
        for n in range(0, 12):
            for k in range(0, n + 1):
                assert kernels.subsequence_count("1" * n, "1" * k) == math.comb(n, k)

    def test_longer_target_than_source(self):
        assert kernels.subsequence_count("10", "101") == 0

    @given(binary, binary)
    @settings(max_examples=150)
    def test_backends_agree(self, s, c):
        assert kernels.subsequence_count(s, c) == _pure.subsequence_count(s, c)

    @given(st.text(alphabet="01", max_size=9), st.text(alphabet="01", max_size=5))
    @settings(max_examples=60)
    def test_matches_brute_recursion(self, s, c):
        assert kernels.subsequence_count(s, c) == brute_subsequence_count(s, c)

    def test_uint64_overflow_falls_back_to_bigint(self):
        # C(80, 40) is about 1.08e23, far past 2**64
        want = math.comb(80, 40)
        assert want > 2**64
        assert kernels.subsequence_count("1" * 80, "1" * 40) == want


class TestEditDistance:
    def test_known_values(self):
        assert kernels.edit_distance("kitten", "sitting") == 3
        assert kernels.edit_distance("", "abc") == 3
        assert kernels.edit_distance("same", "same") == 0

    @given(dna, dna)
    @settings(max_examples=150)
    def test_backends_agree(self, a, b):
        assert kernels.edit_distance(a, b) == _pure.edit_distance(a, b)

    @given(st.text(alphabet="ACGT", max_size=7), st.text(alphabet="ACGT", max_size=7))
    @settings(max_examples=60)
    def test_matches_brute_recursion(self, a, b):
        assert kernels.edit_distance(a, b) == brute_edit_distance(a, b)

    @given(dna, dna, st.integers(0, 10))
    @settings(max_examples=100)
    def test_banded_contract(self, a, b, limit):
        full = kernels.edit_distance(a, b)
        banded = kernels.edit_distance(a, b, limit=limit)
        pure_banded = _pure.edit_distance(a, b, limit=limit)
        assert banded == pure_banded
        if full <= limit:
            assert banded == full
        else:
            assert banded > limit

    def test_symmetry(self):
        assert kernels.edit_distance("ACGT", "TGCA") == kernels.edit_distance("TGCA", "ACGT")


class TestBackendSelection:
    def test_backend_reported(self):
        assert kernels.BACKEND in ("compiled", "pure")

    def test_forced_pure_env(self, tmp_path):
        import subprocess
        import sys

        out = subprocess.run(
            [sys.executable, "-c", "from tracekit import kernels; print(kernels.BACKEND)"],
            env={"PATH": "/usr/bin:/bin", "TRACEKIT_PURE": "1"},
            capture_output=True,
            text=True,
        )
        assert out.stdout.strip() == "pure"
