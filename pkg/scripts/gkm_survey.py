#!/usr/bin/env python3
"""Count elements whose Bruhat moment graph is GKM over F_p, for small p.

    python scripts/gkm_survey.py --type A2 --affine --max-length 4 --primes 2,3,5,7
"""

import argparse
import sys

from mgsheaf.arith.field import Field
from mgsheaf.momentgraph import build_moment_graph, gkm_check
from mgsheaf.rootsys import build_root_system
from mgsheaf.weyl import WeylGroup


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--type", required=True)
    p.add_argument("--affine", action="store_true")
    p.add_argument("--max-length", type=int, required=True)
    p.add_argument("--primes", default="2,3,5,7")
    a = p.parse_args(argv)
    W = WeylGroup(build_root_system(a.type), affine=a.affine)
    elems = W.elements_up_to(a.max_length)
    print(f"{W.label}, {len(elems)} elements of length <= {a.max_length}, h = {W.rs.coxeter_number}")
    print("p\tGKM\tzero labels\tparallel only\tfirst failure")
    for q in (int(s) for s in a.primes.split(",")):
        F = Field(q)
        ok = zero = par = 0
        first = ""
        for w in elems:
            rep = gkm_check(build_moment_graph(W, w, F, strict=False))
            if rep.ok:
                ok += 1
                continue
            if rep.zero_labels:
                zero += 1
            else:
                par += 1
            first = first or W.word(w)
        print(f"{q}\t{ok}\t{zero}\t{par}\t{first or '-'}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
