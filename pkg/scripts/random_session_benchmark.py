#!/usr/bin/env python3
"""Benchmark scene reconstruction over random sessions.

Drives N random sessions (random block counts and move sequences), eagerly
snapshots the scene at every time token, then times how long it takes to
reconstruct every token's scene from the move history and verifies the
reconstructions are exact.

Usage: python3 scripts/random_session_benchmark.py [--sessions N] [--moves K]
"""
import argparse
import random
import time

from blocktalk import memory as M
from blocktalk import world as W


def run_session(rng: random.Random, max_moves: int):
    n_blocks = rng.randrange(2, 9)
    names = [f"b{i}" for i in range(n_blocks)]
    positions = {n: (i * 0.3 - 1.0, 0.0, 0.075) for i, n in enumerate(names)}
    m = M.EpisodicMemory.start(
        W.Scene(positions=positions, side=0.15, table=(1.2, 1.2)), clock=0.0)
    snapshots = {0: m.current_scene}
    clock = 0.0
    for _ in range(rng.randrange(max_moves + 1)):
        clock += rng.uniform(0.5, 30)
        to = (rng.uniform(-1.1, 1.1), rng.uniform(-1.1, 1.1),
              rng.choice([0.075, 0.225]))
        before = m.current_scene
        try:
            m2, noise = M.record_move(m, rng.choice(names), to, clock)
        except W.WorldError:
            continue
        if noise:
            continue
        m = m2
        snapshots[m.now.index - 1] = before
        snapshots[m.now.index] = m.current_scene
    return m, snapshots


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--sessions", type=int, default=200)
    ap.add_argument("--moves", type=int, default=50)
    ap.add_argument("--seed", type=int, default=31)
    args = ap.parse_args()

    rng = random.Random(args.seed)
    runs = [run_session(rng, args.moves) for _ in range(args.sessions)]

    t0 = time.perf_counter()
    checked = mismatched = 0
    for m, snapshots in runs:
        for idx, snap in snapshots.items():
            if M.reconstruct_scene(m, m.times[idx]) != snap:
                mismatched += 1
            checked += 1
    elapsed = time.perf_counter() - t0

    print(f"{args.sessions} sessions, {checked} token scenes reconstructed "
          f"in {elapsed:.3f}s ({checked / elapsed:,.0f}/s), "
          f"{mismatched} mismatches")
    return 1 if mismatched else 0


if __name__ == "__main__":
    raise SystemExit(main())
