#!/usr/bin/env python3
"""Print a capacity table for a small family of modules.

Shows how the three capacities interact for sources of growing rank
against a fixed target, over Z by default or over a quadratic order
with a --disc argument (where the ideal-class obstruction appears).

    python3 scripts/capacity_table.py
    python3 scripts/capacity_table.py --disc -20 --max-rank 5
"""

import argparse

from caplab import FGModule, QuadraticRing, capacity, z_module
from caplab import rings as R


def fmt(v) -> str:
    return "inf" if v == float("inf") else str(int(v))


def z_family(max_rank: int):
    target = z_module(1, [2])
    for r in range(max_rank + 1):
        yield f"Z^{r} (+) Z/4", z_module(r, [4]), target


def quad_family(disc: int, max_rank: int):
    ring = QuadraticRing(disc)
    table = R.class_group_table(ring)
    nontrivial = next(
        (c for c in table.elements if not R.class_eq(c, R.identity_class(ring))),
        None,
    )
    if nontrivial is None:
        raise SystemExit(f"discriminant {disc} has trivial class group; try -20 or -23")
    target = FGModule(ring, 1, R.identity_class(ring), ())
    for r in range(1, max_rank + 1):
        label = f"rank {r}, twisted class"
        yield label, FGModule(ring, r, nontrivial, ()), target


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--disc", type=int, default=None,
                        help="negative discriminant for a quadratic order")
    parser.add_argument("--max-rank", type=int, default=4)
    args = parser.parse_args()

    rows = (
        quad_family(args.disc, args.max_rank) if args.disc is not None
        else z_family(args.max_rank)
    )
    target_label = "N = R (+) ..." if args.disc is not None else "N = Z (+) Z/2"
    print(f"{'source M':<24} {'sur':>5} {'spl':>5} {'inj':>5}   decided by")
    for label, m, n in rows:
        reps = {k: capacity(k, m, n) for k in ("sur", "spl", "inj")}
        print(
            f"{label:<24} {fmt(reps['sur'].value):>5} {fmt(reps['spl'].value):>5} "
            f"{fmt(reps['inj'].value):>5}   {reps['sur'].condition_used}"
        )
    print(f"\ntarget: {target_label}")


if __name__ == "__main__":
    main()
