"""Throughput comparison of the simulation and oracle backends.

Runs the same simulation plan through the numba kernel path and the object
engine path, and the same prediction workload through the oracle's numba and
numpy scan paths. Invoke from the repository root:

    python3 benchmarks/bench_backends.py [--messages 2000] [--interpreted]

--interpreted additionally times the kernel's un-jitted fallback (the code
path taken when KEYTRIE_NUMBA=0); expect it to be far slower, it exists for
portability, not speed.
"""

import argparse
import random
import time

from keytrie import EngineConfig, FlatWordOracle, SimulationPlan, Variant, run_simulation
from keytrie.accel import NUMBA_ENABLED
from keytrie.synth import session_corpus


def total_keystrokes(messages, plan):
    per_row = []
    for train in plan.train_sizes():
        msgs = messages[:train + plan.test_size]
        per_row.append(sum(len(m.text) + 1 for m in msgs))
    return sum(per_row) * len(plan.variants)


def bench_simulation(messages, plan, backend):
    t0 = time.perf_counter()
    report = run_simulation(messages, plan, backend=backend)
    elapsed = time.perf_counter() - t0
    return elapsed, report


def bench_oracle(backend, n_words=3000, n_queries=20000, seed=5):
    rng = random.Random(seed)
    oracle = FlatWordOracle(backend=backend)
    words = ["".join(rng.choice("abcdefghij") for _ in range(rng.randrange(3, 9)))
             for _ in range(n_words)]
    for w in words:
        oracle.add_word(w)
    prefixes = [rng.choice(words)[:rng.randrange(0, 4)] for _ in range(n_queries)]
    oracle.predict("a")  # warm the jit
    t0 = time.perf_counter()
    for p in prefixes:
        oracle.predict(p)
    return time.perf_counter() - t0


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--messages", type=int, default=2000)
    parser.add_argument("--interpreted", action="store_true",
                        help="also time the un-jitted kernel fallback")
    args = parser.parse_args()

    messages = session_corpus(args.messages, vocab_size=200, seed=11)
    plan = SimulationPlan(
        train_max=min(1500, args.messages - 500), train_step=250, test_size=500,
        variants=(Variant("T1", EngineConfig(partitions=1)),
                  Variant("T24", EngineConfig(partitions=24)),
                  Variant("T1-prune", EngineConfig(partitions=1, word_budget=300))))
    keystrokes = total_keystrokes(messages, plan)
    print(f"simulation workload: {len(messages)} messages, "
          f"{len(plan.variants) * len(plan.train_sizes())} rows, ~{keystrokes:,} keystrokes")

    results = {}
    if NUMBA_ENABLED:
        # first call includes jit compilation; time the second
        bench_simulation(messages, plan, "kernel")
        elapsed, fast_report = bench_simulation(messages, plan, "kernel")
        results["kernel (numba)"] = elapsed
    elapsed, py_report = bench_simulation(messages, plan, "python")
    results["object engine (python)"] = elapsed
    if NUMBA_ENABLED:
        assert fast_report.to_csv() == py_report.to_csv(), "backends diverged"

    if args.interpreted:
        import importlib
        import os
        os.environ["KEYTRIE_NUMBA"] = "0"
        import keytrie.accel, keytrie.kernels, keytrie.simulate
        importlib.reload(keytrie.accel)
        importlib.reload(keytrie.kernels)
        importlib.reload(keytrie.simulate)
        t0 = time.perf_counter()
        keytrie.simulate.run_simulation(messages, plan, backend="kernel")
        results["kernel (interpreted fallback)"] = time.perf_counter() - t0

    print("\nsimulation backends:")
    for name, secs in results.items():
        print(f"  {name:32s} {secs:8.2f} s   {keystrokes / secs / 1e6:6.2f} M keystrokes/s")

    print("\noracle scan backends (20k queries over 3k words):")
    for backend in (["numba"] if NUMBA_ENABLED else []) + ["numpy"]:
        secs = bench_oracle(backend)
        print(f"  {backend:32s} {secs:8.2f} s   {20000 / secs / 1e3:6.1f} k queries/s")


if __name__ == "__main__":
    main()
