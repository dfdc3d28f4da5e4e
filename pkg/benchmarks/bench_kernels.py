"""Compare the compiled and pure-Python kernels on the same inputs.

    python benchmarks/bench_kernels.py [--repeat N]

Each row runs one kernel call per backend and checks that both backends
agree before reporting timings.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from gdd4 import kernels
from gdd4.fixtures import build_fixture
from gdd4.grouptype import parse_type
from gdd4.search import _plain_formulation, canonical_groups


def _point_group(type_text: str) -> np.ndarray:
    gt = parse_type(type_text)
    pg = np.empty(gt.v, dtype=np.int64)
    for gi, g in enumerate(canonical_groups(gt)):
        pg[g] = gi
    return pg


def pair_count_case(name: str):
    d = build_fixture(name)
    blocks = np.ascontiguousarray(d.block_array(), dtype=np.int32)

    def run(mod):
        return mod.pair_counts(blocks, d.v)

    return f"pair_counts {name} ({len(d.blocks)} blocks)", run, np.array_equal


def cover_case(type_text: str, seed: int | None, budget: int):
    form = _plain_formulation(_point_group(type_text), 4, seed)
    forced = np.zeros(0, dtype=np.int32)

    def run(mod):
        cancel = np.zeros(1, dtype=np.int32)
        status, rows, nodes, _ = mod.exact_cover(form.n_cols, form.row_ptr, form.row_cols,
                                                 forced, budget, 0, cancel)
        return int(status), sorted(int(r) for r in rows) if rows is not None else None, int(nodes)

    return f"exact_cover {type_text} seed={seed}", run, lambda a, b: a == b


def timed(fn, repeat: int) -> tuple[float, object]:
    best, out = float("inf"), None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if kernels.compiled is None:
        raise SystemExit("compiled kernels are not built; reinstall with Cython available")

    cases = [
        pair_count_case("2858"),
        pair_count_case("21959"),
        cover_case("5^4", 11, 0),
        cover_case("2^7", 3, 0),
        cover_case("2^9 5^1", 1, 50_000),
        cover_case("2^4", None, 0),
    ]
    print(f"{'case':<40} {'compiled':>11} {'python':>11} {'speedup':>9}")
    for label, run, same in cases:
        tc, oc = timed(lambda: run(kernels.backend("compiled")), args.repeat)
        tp, op = timed(lambda: run(kernels.backend("python")), args.repeat)
        if not same(oc, op):
            raise SystemExit(f"{label}: backends disagree")
        print(f"{label:<40} {tc * 1e3:9.2f}ms {tp * 1e3:9.2f}ms {tp / tc:8.1f}x")


if __name__ == "__main__":
    main()
