"""Why Cp -> ECp is true on every finite Kripke frame yet not derivable.

Part one walks every common-knowledge bi-frame up to three worlds and checks
that Cp -> ECp holds on each.  Part two evaluates the same formula in the
ordinal algebra, where C is the meet of the iterated E and the witness x
breaks it at omega.

    python demos/incompleteness.py [--max-worlds 3]
"""

import argparse
import time

from omegamodal.frames import all_relations, common_knowledge_frame
from omegamodal.ordinal import WITNESS, op_C, op_E, sample_ordinals, demo_incompleteness
from omegamodal.semantics import frame_validates
from omegamodal.syntax import parse


def finite_frames(max_worlds):
    f = parse("[C]p -> [E][C]p")
    total = 0
    for n in range(1, max_worlds + 1):
        for rel in all_relations(n):
            total += 1
            if not frame_validates(common_knowledge_frame(n, rel), f, 1).valid:
                return total, False
    return total, True


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-worlds", type=int, default=3)
    args = ap.parse_args()

    t0 = time.perf_counter()
    total, ok = finite_frames(args.max_worlds)
    print(f"finite frames checked: {total}, Cp -> ECp valid on all: {ok} ({time.perf_counter() - t0:.1f}s)")
    print()

    # The ordinal side, point by point around omega.
    cx = op_C(WITNESS)
    ecx = op_E(cx)
    print("alpha   x  Cx  ECx")
    for a in sample_ordinals(3):
        print(f"{str(a):6} {WITNESS(a):2} {cx(a):3} {ecx(a):4}")
    print()
    print(demo_incompleteness())


if __name__ == "__main__":
    main()
