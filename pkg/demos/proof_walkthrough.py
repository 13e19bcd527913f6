"""Build and check the omega-rule derivation of C(p -> Ep) -> (p -> Cp).

Prints the three-step main proof, then one generated premise in full, then
the checker's verdict at growing bounds.  Pass --save to write the proof
as JSON.

    python demos/proof_walkthrough.py [--premise 2] [--save proof.json]
"""

import argparse
import time

from omegamodal.proofs import (
    PS_QCKL_MINUS,
    PS_QGL,
    check_proof,
    dump_proof,
    generate_mhformula_proof,
    mhformula_premise,
)
from omegamodal.syntax import to_text


def show(proof):
    for i, s in enumerate(proof.steps):
        note = f"   # {s.note}" if s.note else ""
        print(f"  {i:3}. {to_text(s.formula)}{note}")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--premise", type=int, default=2)
    ap.add_argument("--save")
    args = ap.parse_args()

    proof = generate_mhformula_proof()
    print("main proof:")
    show(proof)

    sub = mhformula_premise(args.premise)
    print(f"\npremise {args.premise} ({len(sub)} steps):")
    show(sub)

    print()
    for bound in (1, 4, 8, 16):
        t0 = time.perf_counter()
        rep = check_proof(PS_QCKL_MINUS, proof, bound)
        print(f"bound {bound:2}: {rep.status}  ({time.perf_counter() - t0:.2f}s)")
    print(f"as a GL proof: {check_proof(PS_QGL, proof).status}")

    if args.save:
        dump_proof(proof, args.save)
        print(f"wrote {args.save}")


if __name__ == "__main__":
    main()
