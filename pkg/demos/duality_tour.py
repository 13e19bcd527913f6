"""Frames, their complex algebras, and back again.

Takes a small non-normal neighborhood frame, compares frame validity with
validity in its complex algebra over a few formulas, then goes the other
way: a random algebra, its Q-filter frame, and the embedding check.

    python demos/duality_tour.py [--seed 0]
"""

import argparse
import random

from omegamodal.algebra import (
    complex_algebra,
    embedding,
    is_modal_monomorphism,
    preservation_report,
    qfilter_frame,
    random_algebra,
)
from omegamodal.frames import NeighborhoodFrame, check_cf, check_mt, check_tp, members
from omegamodal.semantics import check_duality
from omegamodal.syntax import parse

FORMULAS = [
    "[]T",
    "[](p & q) -> []p & []q",
    "[]p & []q -> [](p & q)",
    "forall x. []P(x) -> [](forall x. P(x))",
    "[]p -> p",
]


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    # Monotone but not closed under intersections: {0} and {1} without {}.
    up = [0b01, 0b10, 0b11]
    fr = NeighborhoodFrame(2, {"box": (frozenset(up), frozenset({0b11}))})
    print(f"frame: MT={check_mt(fr)} TP={check_tp(fr)} CF={check_cf(fr)}")
    rep = check_duality(fr, [parse(f) for f in FORMULAS], max_domain=2)
    for row in rep.rows:
        print(f"  frame={row.frame_valid!s:5} algebra={row.algebra_valid!s:5}  {row.formula}")
    print(f"  disagreements: {len(rep.disagreements)}")

    alg = random_algebra(random.Random(args.seed), 3, "monotone")
    print(f"\nalgebra with 3 atoms, box table {list(alg.boxes['box'])}")
    qf = qfilter_frame(alg)
    for w, F in enumerate(qf.filters):
        fam = sorted(members(X) for X in qf.frame.family("box", w))
        print(f"  world {w} = up-set of atom {min(F).bit_length() - 1}: N = {fam}")
    mono = is_modal_monomorphism(alg, complex_algebra(qf.frame), embedding(alg))
    print(f"  embedding: {', '.join(k for k, v in mono.items() if v)}")
    print(f"  preservation: {preservation_report(alg)['box']}")


if __name__ == "__main__":
    main()
