"""Pure-Python edit-distance kernels (fallback when the compiled module is absent)."""


def levenshtein(a, b):
    """Unit-cost Levenshtein distance between two sequences."""
    n, m = len(a), len(b)
    if n == 0:
        return m
    if m == 0:
        return n
    prev = list(range(m + 1))
    for i in range(1, n + 1):
        ai = a[i - 1]
        cur = [i] + [0] * m
        for j in range(1, m + 1):
            cost = 0 if ai == b[j - 1] else 1
            cur[j] = min(prev[j - 1] + cost, prev[j] + 1, cur[j - 1] + 1)
        prev = cur
    return prev[m]


def osa_distance(a, b):
    """Levenshtein distance with adjacent transpositions (optimal string alignment)."""
    n, m = len(a), len(b)
    if n == 0:
        return m
    if m == 0:
        return n
    prev2 = [0] * (m + 1)
    prev = list(range(m + 1))
    for i in range(1, n + 1):
        cur = [i] + [0] * m
        for j in range(1, m + 1):
            cost = 0 if a[i - 1] == b[j - 1] else 1
            v = min(prev[j - 1] + cost, prev[j] + 1, cur[j - 1] + 1)
            if i > 1 and j > 1 and a[i - 1] == b[j - 2] and a[i - 2] == b[j - 1]:
                v = min(v, prev2[j - 2] + 1)
            cur[j] = v
        prev2, prev = prev, cur
    return prev[m]


def nearest(query, candidates):
    """Index and distance of the candidate closest to ``query`` (first wins on ties).

    Returns ``(-1, -1)`` for an empty candidate list.
    """
    best_i, best_d = -1, -1
    for i, cand in enumerate(candidates):
        d = levenshtein(query, cand)
        if best_d < 0 or d < best_d:
            best_i, best_d = i, d
    return best_i, best_d
