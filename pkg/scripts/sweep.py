#!/usr/bin/env python3
"""Run the full check battery over every element of a family and tabulate.

    python scripts/sweep.py --type A3 --max-length 6
    python scripts/sweep.py --type A2 --affine --max-length 4 --field Fp:5 --out a2_f5.jsonl
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass

from mgsheaf.arith.field import Field
from mgsheaf.klpoly import KazhdanLusztig
from mgsheaf.momentgraph import build_moment_graph, gkm_check
from mgsheaf.pipeline import run_checks
from mgsheaf.rootsys import build_root_system
from mgsheaf.weyl import WeylGroup


@dataclass
class SweepConfig:
    cartan_type: str
    max_length: int
    affine: bool = False
    field: str = "Q"
    method: str = "incremental"
    out: str | None = None


def sweep(cfg: SweepConfig, stream=sys.stdout):
    W = WeylGroup(build_root_system(cfg.cartan_type), affine=cfg.affine)
    F = Field.parse(cfg.field)
    kl = KazhdanLusztig(W)
    sink = open(cfg.out, "w") if cfg.out else None
    totals = {"elements": 0, "non_gkm": 0, "failed": 0, "uncertified": 0, "singular_pairs": 0}
    stream.write(f"{'w':<28}{'|V|':>5}{'sing':>6}{'sec':>8}  verdict\n")
    for w in W.elements_up_to(cfg.max_length):
        totals["elements"] += 1
        G = build_moment_graph(W, w, F, strict=False)
        if not gkm_check(G).ok:
            totals["non_gkm"] += 1
            stream.write(f"{W.word(w):<28}{len(G.vertices):>5}{'':>6}{'':>8}  not GKM\n")
            continue
        t = time.time()
        res = run_checks(G, checks=("conjMC", "mainT", "flabby", "strucZ", "smB", "deodhar", "conB", "multB"),
                         method=cfg.method, kl=kl)
        sing = sum(1 for v in res.vertices if v["rank_poly"] != [1])
        totals["singular_pairs"] += sing
        if not res.passed:
            totals["failed"] += 1
        if not res.certified:
            totals["uncertified"] += 1
        verdict = "ok" if res.passed and res.certified else ",".join(k for k, v in res.checks.items() if v != "pass")
        stream.write(f"{res.w:<28}{len(res.vertices):>5}{sing:>6}{time.time() - t:>8.2f}  {verdict}\n")
        if sink:
            sink.write(json.dumps(res.to_dict()) + "\n")
    if sink:
        sink.close()
    stream.write(json.dumps(totals) + "\n")
    return totals


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--type", required=True)
    p.add_argument("--max-length", type=int, required=True)
    p.add_argument("--affine", action="store_true")
    p.add_argument("--field", default="Q")
    p.add_argument("--method", choices=("incremental", "direct"), default="incremental")
    p.add_argument("--out")
    a = p.parse_args(argv)
    totals = sweep(SweepConfig(a.type, a.max_length, a.affine, a.field, a.method, a.out))
    return 1 if totals["failed"] else 0


if __name__ == "__main__":
    sys.exit(main())
