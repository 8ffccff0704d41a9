#!/usr/bin/env python3
"""Parse every question in a corpus file and report the well-formed rate.

Usage: python3 scripts/run_corpus.py [CORPUS] [--show-failures]
Defaults to the bundled corpus. Lines starting with '#' are skipped.
"""
import argparse
from pathlib import Path

from blocktalk import data_path, default_grammar
from blocktalk.transduction import ParseFailure, parse_question
from blocktalk.ulf import print_sexpr, well_formed


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("corpus", nargs="?", default=str(data_path("corpus.txt")))
    ap.add_argument("--show-failures", action="store_true",
                    help="print one line per question that failed to parse")
    ap.add_argument("--show-parses", action="store_true",
                    help="print the ULF for every parsed question")
    args = ap.parse_args()

    trees, lex = default_grammar()
    questions = [ln for ln in Path(args.corpus).read_text().splitlines()
                 if ln.strip() and not ln.startswith("#")]
    parsed, failures = 0, []
    for q in questions:
        try:
            u = parse_question(q, trees, lex)
        except ParseFailure as e:
            failures.append((q, str(e)))
            continue
        if well_formed(u):
            parsed += 1
            if args.show_parses:
                print(f"{q}\n  {print_sexpr(u)}")
        else:
            failures.append((q, f"ill-formed: {print_sexpr(u)}"))

    if args.show_failures:
        for q, reason in failures:
            print(f"FAIL  {q}\n      {reason}")
    rate = parsed / len(questions) if questions else 0.0
    print(f"{parsed}/{len(questions)} questions parse to well-formed ULF "
          f"({rate:.1%})")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
