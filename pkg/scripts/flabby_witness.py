#!/usr/bin/env python3
"""Look for open sets on which the structure sheaf fails to be flabby.

Principal opens always extend on the graphs tried so far; the failures
show up on unions of them. Prints the smallest failing open sets.

    python scripts/flabby_witness.py --type A3 --w "s2 s1 s3 s2"
"""

import argparse
import sys

from mgsheaf.arith.field import Field
from mgsheaf.momentgraph import build_moment_graph
from mgsheaf.rootsys import build_root_system
from mgsheaf.sheafcore import check_flabby, structure_sheaf
from mgsheaf.weyl import WeylGroup


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--type", required=True)
    p.add_argument("--w", required=True)
    p.add_argument("--affine", action="store_true")
    p.add_argument("--field", default="Q")
    p.add_argument("--max-degree", type=int, default=2)
    p.add_argument("--show", type=int, default=5)
    a = p.parse_args(argv)
    W = WeylGroup(build_root_system(a.type), affine=a.affine)
    G = build_moment_graph(W, W.element(a.w), Field.parse(a.field))
    M = structure_sheaf(G, a.max_degree)
    principal = check_flabby(M)
    print(f"{len(G.vertices)} vertices; principal opens: {principal.checked} checked, "
          f"{len(principal.failures)} failures")
    full = check_flabby(M, exhaustive=True, max_vertices=len(G.vertices))
    print(f"all opens: {full.checked} checked, {len(full.failures)} failures")
    for omega, d, dim_loc, dim_img in sorted(full.failures, key=lambda f: (len(f[0]), f[1]))[:a.show]:
        print(f"  degree {d}: dim Gamma(Omega) = {dim_loc}, image = {dim_img}, Omega = {{{', '.join(omega)}}}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
