#!/usr/bin/env python3
"""Walk the throughput pipeline one stage at a time.

A seeded laminar instance goes through its three stages separately —
fractional relaxation, tree rounding, pairing packer — so you can watch
what each stage contributes before `solve_maxt_laminar` glues them
together.  Run it:

    python3 demos/throughput_pipeline.py
"""

from fractions import Fraction

from slotsched.generator import GenSpec, generate
from slotsched.maxt import (
    omega_single,
    round_selection,
    schedule_selected,
    solve_maxt_laminar,
    solve_relaxation,
)
from slotsched.model import format_rational, slackness, validate


def frac(q) -> str:
    return str(format_rational(Fraction(q)))


def main() -> None:
    spec = GenSpec(jobs=8, hosts=2, horizon=16, slack=Fraction(1, 3), seed="demo")
    instance = generate(spec)
    lam = slackness(instance)
    omega = omega_single(instance.hosts, lam)

    print("== instance ==")
    print(f"hosts={instance.hosts}  horizon={instance.horizon}  jobs={len(instance.jobs)}")
    for job in instance.jobs:
        print(
            f"  job {job.id}: window [{job.release},{job.due}]"
            f"  length {job.length}  height {frac(job.height)}"
            f"  weight {frac(job.weight)}"
        )
    print(f"slackness lambda = {frac(lam)}  ->  LP area budget omega = {frac(omega)}")

    print("\n== stage 1: fractional relaxation ==")
    relax = solve_relaxation(instance, omega)
    for jid in sorted(relax.values):
        print(f"  x[{jid}] = {frac(relax.values[jid])}")
    print(f"LP objective: {frac(relax.objective)}")

    print("\n== stage 2: tree rounding ==")
    rounded = round_selection(instance, relax)
    print(f"  selected whole: {sorted(rounded.selected)}")
    moved = {j: x for j, x in rounded.adjusted.items() if x != relax.values[j]}
    for jid in sorted(moved):
        print(f"  x[{jid}]: {frac(relax.values[jid])} -> {frac(moved[jid])}")

    print("\n== stage 3: pairing packer ==")
    schedule, bins = schedule_selected(instance, rounded.selected, mode="pairing")
    for jid in sorted(schedule.placements):
        spots = sorted(schedule.placements[jid], key=lambda hs: hs[1])
        cells = " ".join(f"h{h}t{t}" for h, t in spots)
        print(f"  job {jid}: {cells}")

    report = validate(instance, schedule)
    selected_weight = sum(
        (j.weight for j in instance.jobs if j.id in rounded.selected), Fraction(0)
    )
    print("\n== result ==")
    print(f"schedule feasible: {report.feasible}")
    print(f"rounded profit {frac(selected_weight)} >= LP bound {frac(relax.objective)}:"
          f" {selected_weight >= relax.objective}")

    one_call = solve_maxt_laminar(instance)
    assert one_call.profit == selected_weight
    print(f"solve_maxt_laminar reproduces the pipeline: profit {frac(one_call.profit)}")


if __name__ == "__main__":
    main()
