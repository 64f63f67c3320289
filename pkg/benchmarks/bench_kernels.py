"""Time the compiled and pure-Python edit-distance kernels on the same inputs.

    python3 benchmarks/bench_kernels.py [--pairs 20000] [--repeat 3]
"""

import argparse
import random
import string
import timeit

from qanoise import kernels


def make_pairs(n, seed=0, max_len=16):
    rng = random.Random(seed)
    alphabet = string.ascii_lowercase[:8]
    words = lambda: "".join(rng.choices(alphabet, k=rng.randint(1, max_len)))
    return [(words(), words()) for _ in range(n)]


def make_sentences(n, seed=1, max_words=15):
    rng = random.Random(seed)
    vocab = [f"w{i}" for i in range(40)]
    return [(rng.choices(vocab, k=rng.randint(1, max_words)), rng.choices(vocab, k=rng.randint(1, max_words)))
            for _ in range(n)]


def bench(name, fn, data, repeat):
    runs = timeit.repeat(lambda: [fn(a, b) for a, b in data], number=1, repeat=repeat)
    return min(runs)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--pairs", type=int, default=20000)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    words = make_pairs(args.pairs)
    sents = make_sentences(args.pairs // 4)
    queries = [a for a, _ in words[:500]]
    pool = [b for _, b in words[:400]]
    backends = sorted(kernels.BACKENDS)
    if "cython" not in backends:
        print("compiled extension not built; only the Python backend is timed")

    rows = []
    for kernel, data in (("levenshtein/chars", words), ("osa_distance/chars", words),
                         ("levenshtein/words", sents)):
        attr = kernel.split("/")[0]
        for b in backends:
            fn = getattr(kernels.BACKENDS[b], attr)
            rows.append((kernel, b, len(data), bench(kernel, fn, data, args.repeat)))
    for b in backends:
        fn = kernels.BACKENDS[b].nearest
        t = min(timeit.repeat(lambda: [fn(q, pool) for q in queries], number=1, repeat=args.repeat))
        rows.append(("nearest(400 cands)", b, len(queries), t))

    # sanity: both backends agree
    if "cython" in kernels.BACKENDS:
        py, cy = kernels.BACKENDS["python"], kernels.BACKENDS["cython"]
        assert all(py.levenshtein(a, b) == cy.levenshtein(a, b) for a, b in words[:2000])
        assert all(py.osa_distance(a, b) == cy.osa_distance(a, b) for a, b in words[:2000])

    print(f"{'kernel':<22}{'backend':<9}{'calls':>8}{'seconds':>10}{'us/call':>10}")
    base = {}
    for kernel, b, n, t in rows:
        base.setdefault(kernel, {})[b] = t
        print(f"{kernel:<22}{b:<9}{n:>8}{t:>10.3f}{1e6 * t / n:>10.2f}")
    for kernel, times in base.items():
        if "cython" in times:
            print(f"speedup {kernel}: {times['python'] / times['cython']:.1f}x")


if __name__ == "__main__":
    main()
