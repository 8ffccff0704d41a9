"""Command-line entry points: repl, replay, serve.

Exit codes: 0 success, 2 replay mismatch, 3 configuration error.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import session as sess
from .transduction import TransductionError, load_lexicon, load_trees
from .world import WorldError, load_world

EXIT_OK = 0
EXIT_MISMATCH = 2
EXIT_CONFIG = 3


def _load_grammar(trees_dir: str | None):
    if trees_dir is None:
        return None, None
    import os
    return (load_trees(os.path.join(trees_dir, "trees.lisp")),
            load_lexicon(os.path.join(trees_dir, "lexicon.lisp")))


def cmd_repl(args) -> int:
    world = load_world(args.world)
    trees, lex = _load_grammar(args.trees)
    s = sess.Session(world, trees=trees, lex=lex, realtime=not args.sim_clock)
    print("blocktalk repl; ask questions, or use "
          "'/move BLOCK X Y Z', '/tick SECONDS', '/quit'.")
    while True:
        try:
            line = input("> ").strip()
        except (EOFError, KeyboardInterrupt):
            print()
            break
        if not line:
            continue
        if line in ("/quit", "/exit"):
            break
        if line.startswith("/tick"):
            try:
                s.clock += float(line.split()[1])
            except (IndexError, ValueError):
                print("usage: /tick SECONDS")
            continue
        if line.startswith("/move"):
            parts = line.split()
            if len(parts) != 5:
                print("usage: /move BLOCK X Y Z")
                continue
            block = parts[1]
            try:
                to = tuple(float(v) for v in parts[2:])
            except ValueError:
                print("usage: /move BLOCK X Y Z")
                continue
            clock = s.clock if args.sim_clock else None
            result = s.handle_move(block, to, clock=clock)
            print(json.dumps(result))
            continue
        clock = s.clock if args.sim_clock else None
        out = s.handle_ask(line, clock=clock)
        print(out["answer"])
    if args.save:
        s.save_transcript(args.save)
        print(f"transcript saved to {args.save}")
    return EXIT_OK


def cmd_replay(args) -> int:
    trees, lex = _load_grammar(args.trees)
    report = sess.replay(args.transcript, trees=trees, lex=lex)
    for seq, expected, actual in report.mismatches:
        print(f"MISMATCH at event {seq}:")
        print(f"  recorded: {expected}")
        print(f"  fresh:    {actual}")
    print(f"{report.asked} question(s) replayed, "
          f"{len(report.mismatches)} mismatch(es)")
    return EXIT_OK if report.ok else EXIT_MISMATCH


def cmd_serve(args) -> int:
    from .server import serve
    world = load_world(args.world)
    serve(world, host=args.host, port=args.port)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="blocktalk",
                                description="blocks-world dialogue engine")
    sub = p.add_subparsers(dest="command", required=True)

    repl = sub.add_parser("repl", help="interactive dialogue loop")
    repl.add_argument("--world", required=True, help="world JSON file")
    repl.add_argument("--trees", help="directory with trees.lisp and lexicon.lisp")
    repl.add_argument("--sim-clock", action="store_true",
                      help="advance time only via /tick")
    repl.add_argument("--save", help="write a transcript on exit")
    repl.set_defaults(func=cmd_repl)

    replay = sub.add_parser("replay", help="re-run a transcript and verify answers")
    replay.add_argument("transcript", help="transcript JSONL file")
    replay.add_argument("--trees", help="directory with trees.lisp and lexicon.lisp")
    replay.set_defaults(func=cmd_replay)

    serve = sub.add_parser("serve", help="run the HTTP/WebSocket service")
    serve.add_argument("--world", required=True, help="world JSON file")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8000)
    serve.set_defaults(func=cmd_serve)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (OSError, ValueError, WorldError, TransductionError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
