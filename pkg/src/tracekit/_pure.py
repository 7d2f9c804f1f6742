"""Pure-Python kernels: subsequence counting and (banded) edit distance.

Reference implementations for the compiled versions in ``_speedups``; same
signatures, same results.  Counting is done with Python ints, so results are
exact at any magnitude.
"""


def subsequence_count(s, c) -> int:
    """Number of index sets under which c occurs as a subsequence of s."""
    lc = len(c)
    ls = len(s)
    if lc > ls:
        return 0
    if lc == 0:
        return 1
    ways = [0] * (lc + 1)
    ways[0] = 1
    for i in range(ls):
        ch = s[i]
        # descending j keeps the row usable in place
        lo = lc - (ls - i)  # entries above this cannot change the final count
        for j in range(lc, max(lo, 0), -1):
            if c[j - 1] == ch:
                ways[j] += ways[j - 1]
    return ways[lc]


def edit_distance(a, b, limit: int = -1) -> int:
    """Levenshtein distance; with limit >= 0, returns limit + 1 once the
    distance provably exceeds limit (Ukkonen band)."""
    la, lb = len(a), len(b)
    if la > lb:
        a, b, la, lb = b, a, lb, la
    if limit >= 0 and lb - la > limit:
        return limit + 1
    if la == 0:
        return lb if limit < 0 or lb <= limit else limit + 1
    big = la + lb + 1
    prev = list(range(lb + 1))
    for i in range(1, la + 1):
        if limit >= 0:
            lo = max(1, i - limit)
            hi = min(lb, i + limit)
            cur = [big] * (lb + 1)
            cur[0] = i if i <= limit else big
        else:
            lo, hi = 1, lb
            cur = [big] * (lb + 1)
            cur[0] = i
        ai = a[i - 1]
        for j in range(lo, hi + 1):
            v = prev[j - 1] + (0 if ai == b[j - 1] else 1)
            w = prev[j] + 1
            if w < v:
                v = w
            w = cur[j - 1] + 1
            if w < v:
                v = w
            cur[j] = v
        prev = cur
        if limit >= 0 and min(prev[lo - 1 : hi + 1]) > limit:
            return limit + 1
    d = prev[lb]
    if limit >= 0 and d > limit:
        return limit + 1
    return d
