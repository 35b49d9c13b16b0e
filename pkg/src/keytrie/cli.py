"""Command-line entry point.

Subcommands: accelerate (train a snapshot from a corpus), simulate (replay
evaluation grid to CSV), serve (local HTTP service), stats (snapshot
counters), export (learned words by recency).
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .corpus import load_corpus, load_wordlist
from .engine import EngineConfig, PredictionEngine
from .simulate import SimulationPlan, Variant, run_simulation
from .snapshot import load_snapshot, save_snapshot


def _add_config_flags(parser, partitions_as_list=False):
    if partitions_as_list:
        parser.add_argument("--partitions", default="1",
                            help="day partitions T; comma-separated list runs one variant per value")
    else:
        parser.add_argument("--partitions", type=int, default=1, help="day partitions T")
    parser.add_argument("--conf", type=int, default=5,
                        help="consecutive hits before the prediction bound shrinks")
    parser.add_argument("--diff", type=int, default=2,
                        help="consecutive feedbacks before the prediction bound grows")
    parser.add_argument("--n-initial", type=int, default=3, help="initial prediction bound")
    parser.add_argument("--n-min", type=int, default=1, help="lower clamp of the bound")
    parser.add_argument("--prune-budget", type=int, default=None,
                        help="LRU word budget per trie (default: pruning off)")
    parser.add_argument("--separators", default=None,
                        help="explicit separator characters (default: Unicode whitespace)")
    parser.add_argument("--tz-offset", type=int, default=0,
                        help="seconds added to timestamps before day partitioning")


def _config_from_args(args, partitions: int) -> EngineConfig:
    return EngineConfig(
        partitions=partitions,
        conf=args.conf,
        diff=args.diff,
        n_initial=args.n_initial,
        n_min=args.n_min,
        word_separators=frozenset(args.separators) if args.separators else None,
        word_budget=args.prune_budget,
        tz_offset=args.tz_offset,
    )


def _load_or_create_engine(args) -> PredictionEngine:
    if args.state and os.path.exists(args.state):
        return load_snapshot(args.state)
    return PredictionEngine(_config_from_args(args, args.partitions))


def _cmd_accelerate(args) -> int:
    engine = _load_or_create_engine(args)
    if args.wordlist:
        engine.preload(load_wordlist(args.wordlist), now=0)
    messages, stats = load_corpus(args.corpus)
    engine.accelerate(messages)
    save_snapshot(engine, args.state)
    print(f"trained on {stats.kept} messages "
          f"({stats.dropped_retweets} retweets dropped, {stats.stripped_links} links stripped); "
          f"{engine.words_learned()} words learned -> {args.state}")
    return 0


def _cmd_simulate(args) -> int:
    messages, _ = load_corpus(args.corpus)
    wordlist = load_wordlist(args.wordlist) if args.wordlist else None
    variants = []
    for part in str(args.partitions).split(","):
        t = int(part)
        name = f"T{t}"
        if args.prune_budget:
            name += "-prune"
        if wordlist:
            name += "-dict"
        variants.append(Variant(name=name, config=_config_from_args(args, t),
                                wordlist=wordlist,
                                auto_feedback=not args.no_auto_feedback))
    plan = SimulationPlan(train_max=args.train_max, train_step=args.train_step,
                          test_size=args.test_size, variants=tuple(variants))
    report = run_simulation(messages, plan, backend=args.backend)
    report.write_csv(args.out)
    print(f"wrote {len(report.rows)} rows -> {args.out}")
    return 0


def _cmd_serve(args) -> int:
    from .service import serve_forever

    engine = _load_or_create_engine(args)
    serve_forever(engine, host=args.host, port=args.port, quiet=args.quiet)
    return 0


def _cmd_stats(args) -> int:
    engine = _load_or_create_engine(args)
    print(json.dumps(engine.stats(), indent=2))
    return 0


def _cmd_export(args) -> int:
    engine = _load_or_create_engine(args)
    entries = []
    for part, trie in enumerate(engine.tries):
        for word, count, last_used in trie.iter_words():
            entries.append((last_used, word, count, part))
    entries.sort(key=lambda e: (-e[0], e[1], e[3]))
    out = sys.stdout if args.out == "-" else open(args.out, "w", encoding="utf-8")
    try:
        for last_used, word, count, part in entries:
            out.write(f"{word}\t{count}\t{last_used}\t{part}\n")
    finally:
        if out is not sys.stdout:
            out.close()
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="keytrie",
                                     description="adaptive next-character prediction engine")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("accelerate", help="train a snapshot from a message corpus")
    p.add_argument("--corpus", required=True)
    p.add_argument("--state", required=True, help="snapshot path (loaded if present)")
    p.add_argument("--wordlist", default=None, help="preload a dictionary word list")
    _add_config_flags(p)
    p.set_defaults(func=_cmd_accelerate)

    p = sub.add_parser("simulate", help="run the replay evaluation grid to CSV")
    p.add_argument("--corpus", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--train-max", type=int, default=1500)
    p.add_argument("--train-step", type=int, default=50)
    p.add_argument("--test-size", type=int, default=500)
    p.add_argument("--wordlist", default=None)
    p.add_argument("--no-auto-feedback", action="store_true",
                   help="do not fire feedback on simulated misses")
    p.add_argument("--backend", choices=["auto", "kernel", "python"], default=None)
    _add_config_flags(p, partitions_as_list=True)
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("serve", help="start the local prediction service")
    p.add_argument("--state", default=None, help="snapshot to serve (fresh engine if absent)")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8750)
    p.add_argument("--quiet", action="store_true")
    _add_config_flags(p)
    p.set_defaults(func=_cmd_serve)

    p = sub.add_parser("stats", help="print snapshot counters")
    p.add_argument("--state", default=None)
    _add_config_flags(p)
    p.set_defaults(func=_cmd_stats)

    p = sub.add_parser("export", help="dump learned words, most recent first")
    p.add_argument("--state", default=None)
    p.add_argument("--out", default="-")
    _add_config_flags(p)
    p.set_defaults(func=_cmd_export)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (OSError, ValueError) as exc:
        print(f"keytrie: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
