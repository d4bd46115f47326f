#!/usr/bin/env python3
"""The jump of the target-indexed weight value at the hub of a star.

With the source at a leaf and the probe vertex at the hub, the value seen at
the hub is the time parameter itself while every other leaf sees exactly 1,
whatever leaf it is.  The gap between the two values is what blocks
continuity at the hub once the star is infinite; the witness prefix printed
at the end steps across one spoke at a time and watches the deficiency flip.
"""

import argparse

from cubex import build_family, parse_family
from cubex.continuity import TargetFunction, discontinuity_witness, level_sets


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--leaves", type=int, default=8)
    parser.add_argument("--max-n", type=int, default=16)
    parser.add_argument("--witness", type=int, default=5)
    args = parser.parse_args()

    star = build_family(parse_family(f"star:{args.leaves}"))
    print(f"star with {args.leaves} leaves, source l1, probe vertex center")
    print(f"  {'n':>4}  {'value at center':>16}  {'value at leaf':>14}  {'gap':>6}")
    for n in range(2, args.max_n + 1):
        q = TargetFunction(star, "l1", "center", n)
        hub, leaf = q.value("center"), q.value("l2")
        spread = {q.value(f"l{j}") for j in range(2, args.leaves + 1)}
        assert spread == {leaf}, "leaf values must not depend on the leaf"
        print(f"  {n:>4}  {hub:>16}  {leaf:>14}  {hub - leaf:>6}")

    q = TargetFunction(star, "l1", "center", 4)
    part = level_sets(q)
    print("\nlevel sets at n=4:")
    for value in sorted(part.cells):
        print(f"  value {value}: {sorted(part.cells[value])}")
    witness = discontinuity_witness(q, "center", args.witness)
    print("\nwitness prefix at the center:")
    for step in witness.steps:
        print(
            f"  across {step.hyperplane}: {step.point} -> {step.perturbed}, "
            f"deficiency {step.deficiency_before} -> {step.deficiency_after}"
        )


if __name__ == "__main__":
    main()
