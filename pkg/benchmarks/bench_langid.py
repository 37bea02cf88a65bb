#!/usr/bin/env python3
"""Benchmark the compiled n-gram scoring kernel against the pure-Python one.

Classifying crawl records is the pipeline's hot loop: every record is
scored against every language profile over all extracted n-grams. This
times that loop end to end (extraction + scoring) and kernel-only, and
verifies both kernels produce bit-identical classifications.

Usage: python benchmarks/bench_langid.py [--records N] [--languages L]
"""

from __future__ import annotations

import argparse
import string
import time

import numpy as np

from langscape.langid import classify, kernels, train_profiles
from langscape.langid import _scorer_py

try:
    from langscape.langid import _scorer_c
except ImportError:
    _scorer_c = None


def synthetic_corpus(n_languages: int, rng: np.random.Generator):
    alphabets = []
    letters = list(string.ascii_lowercase) + list("àâçéèêëîïôûùüα βγδεζηθλμνξπρστυφχψωабвгдежзийклмн")
    for i in range(n_languages):
        start = (i * 7) % (len(letters) - 10)
        alphabets.append("".join(letters[start : start + 10]).replace(" ", "x"))

    def words(alphabet: str, count: int) -> str:
        weights = rng.random(len(alphabet)) + 0.2
        weights /= weights.sum()
        return " ".join(
            "".join(rng.choice(list(alphabet), size=rng.integers(2, 9), p=weights))
            for _ in range(count)
        )

    corpus = []
    for i, alphabet in enumerate(alphabets):
        code = f"{chr(97 + i // 26)}{chr(97 + i % 26)}x"
        corpus.append((code, words(alphabet, 500)))
    return corpus, alphabets, words


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--records", type=int, default=400)
    parser.add_argument("--languages", type=int, default=12)
    args = parser.parse_args()

    rng = np.random.default_rng(2024)
    corpus, alphabets, words = synthetic_corpus(args.languages, rng)
    model = train_profiles(corpus)
    texts = [words(alphabets[i % len(alphabets)], 60) for i in range(args.records)]

    backends = [("python", _scorer_py.accumulate)]
    if _scorer_c is not None:
        backends.insert(0, ("c", _scorer_c.accumulate))
    else:
        print("compiled kernel not built; timing pure Python only")

    original = kernels.accumulate
    results = {}
    timings = {}
    try:
        for name, impl in backends:
            kernels.accumulate = impl
            for text in texts[:10]:  # warm up
                classify(model, text)
            started = time.perf_counter()
            results[name] = [classify(model, text) for text in texts]
            timings[name] = time.perf_counter() - started
    finally:
        kernels.accumulate = original

    print(f"{args.records} records x {len(model.languages)} languages (selected backend: {kernels.BACKEND})")
    for name, elapsed in timings.items():
        print(f"  {name:>6}: {elapsed:8.3f}s  {args.records / elapsed:10.0f} docs/s")
    if len(results) == 2:
        identical = all(
            a.language == b.language and a.confidence == b.confidence and a.runner_up_margin == b.runner_up_margin
            for a, b in zip(results["c"], results["python"])
        )
        if not identical:
            print("MISMATCH: kernels disagree")
            return 1
        print(f"  outputs bit-identical across kernels; speedup x{timings['python'] / timings['c']:.1f}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
