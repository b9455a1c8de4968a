#!/usr/bin/env python3
"""How arbitrary windows become laminar ones.

Builds the binary interval tree over a horizon, then maps a handful of
windows to their largest contained tree interval.  The mapped interval
never shrinks below a quarter of the original — the size loss a general
instance pays before the laminar machinery takes over.

    python3 demos/window_mapping.py
"""

from fractions import Fraction

from slotsched.laminar import build_tree, map_window, transform_instance
from slotsched.model import Instance, Job, TimeWindow


def show_tree(horizon: int) -> None:
    tree = build_tree(horizon)
    by_size: dict[int, list[TimeWindow]] = {}
    for w in tree.windows():
        by_size.setdefault(w.size, []).append(w)
    print(f"interval tree over [1, {horizon}]:")
    for size in sorted(by_size, reverse=True):
        row = " ".join(f"[{w.start},{w.end}]" for w in sorted(by_size[size], key=lambda w: w.start))
        print(f"  size {size:>2}: {row}")


def main() -> None:
    horizon = 16
    show_tree(horizon)

    print("\nwindow -> largest contained tree interval (rightmost on ties):")
    tree = build_tree(horizon)
    for start, end in [(1, 16), (2, 15), (3, 9), (6, 12), (5, 6), (7, 7), (2, 5)]:
        w = TimeWindow(start, end)
        mapped = map_window(tree, w)
        ratio = Fraction(w.size, mapped.size)
        print(
            f"  [{w.start:>2},{w.end:>2}] size {w.size:>2} -> "
            f"[{mapped.start:>2},{mapped.end:>2}] size {mapped.size:>2}"
            f"   (shrink factor {ratio} <= 4)"
        )
        assert w.size <= 4 * mapped.size

    print("\ntransforming a whole instance:")
    jobs = [
        Job(id=1, release=2, due=15, length=3, demand=(Fraction(1, 2),), weight=Fraction(5)),
        Job(id=2, release=6, due=12, length=1, demand=(Fraction(1, 4),), weight=Fraction(2)),
        Job(id=3, release=5, due=6, length=2, demand=(Fraction(1, 3),), weight=Fraction(1)),
    ]
    instance = Instance(hosts=2, dim=1, jobs=jobs)
    transformed, mapping = transform_instance(instance)
    for job in transformed.jobs:
        orig, mapped = mapping.by_job[job.id]
        print(
            f"  job {job.id}: [{orig.start},{orig.end}] -> [{mapped.start},{mapped.end}]"
            f"  (length {job.length} still fits)"
        )
    if mapping.untransformable:
        print(f"  dropped (length exceeds mapped interval): {list(mapping.untransformable)}")
    else:
        print("  nothing dropped")
    print("\nany schedule for the transformed instance is feasible for the original:")
    print("mapped windows are subsets of the originals; ids, lengths, demands unchanged.")


if __name__ == "__main__":
    main()
