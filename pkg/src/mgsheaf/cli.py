"""``mg``: build moment graphs, KL tables and Braden-MacPherson sheaves from the shell.

Exit codes: 0 pass, 1 a check failed, 2 bad input, 3 truncation not certified.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import dataclass

from .arith.field import Field
from .bmp import braden_macpherson, graded_rank
from .klpoly import KazhdanLusztig
from .momentgraph import GKMError, build_moment_graph, gkm_check
from .pipeline import ALL_CHECKS, run_checks
from .rootsys import build_root_system
from .weyl import WeylGroup, WordError

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_UNCERTIFIED = 0, 1, 2, 3


class InputError(ValueError):
    pass


@dataclass
class RunConfig:
    cartan_type: str
    w: str
    affine: bool = False
    field: str = "Q"
    max_degree: int | None = None
    output: str = "table"  # table | json | tsv
    dot: str | None = None
    hilbert: bool = False
    checks: tuple = ALL_CHECKS
    method: str = "incremental"

    def __post_init__(self):
        if self.output not in ("table", "json", "tsv"):
            raise InputError(f"unknown output format {self.output!r}")
        if self.max_degree is not None and self.max_degree < 1:
            raise InputError("--max-degree must be at least 1")
        bad = set(self.checks) - set(ALL_CHECKS)
        if bad:
            raise InputError(f"unknown checks {', '.join(sorted(bad))}; choose from {','.join(ALL_CHECKS)}")

    def resolve(self):
        """Parse type, field and word; raises :class:`InputError` on any problem."""
        try:
            F = Field.parse(self.field)
        except ValueError as exc:
            raise InputError(str(exc)) from None
        try:
            rs = build_root_system(self.cartan_type)
        except ValueError as exc:
            raise InputError(str(exc)) from None
        W = WeylGroup(rs, affine=self.affine)
        try:
            w = W.element(self.w)
        except WordError as exc:
            raise InputError(str(exc)) from None
        return W, w, F


def _config(args) -> RunConfig:
    output = "json" if args.json else "tsv" if getattr(args, "tsv", False) else "table"
    checks = tuple(c for c in args.checks.split(",") if c) if getattr(args, "checks", None) else ALL_CHECKS
    return RunConfig(args.type, args.w, args.affine, args.field, args.max_degree, output,
                     getattr(args, "dot", None), getattr(args, "hilbert", False), checks,
                     getattr(args, "method", "incremental"))


def cmd_build(cfg: RunConfig, out) -> int:
    W, w, F = cfg.resolve()
    G = build_moment_graph(W, w, F, strict=False)
    rep = gkm_check(G)
    if cfg.dot:
        with open(cfg.dot, "w") as fh:
            fh.write(G.to_dot())
    if cfg.output == "json":
        d = G.to_dict()
        d["gkm"] = {"ok": rep.ok, "zero_labels": [G.describe(e) for e in rep.zero_labels],
                    "violations": [[x, G.describe(a), G.describe(b)] for x, a, b in rep.violations]}
        out.write(json.dumps(d, indent=2) + "\n")
    else:
        out.write(f"{W.label} w = {W.word(w)} over {F.label}: l(w) = {G.l}\n")
        out.write(f"|V| = {len(G.vertices)}, |E| = {len(G.edges)}\n")
        out.write(rep.summary(limit=8) + "\n")
        out.write("x\tl(x)\tn(x)\n")
        for x in G.vertices:
            out.write(f"{G.word(x)}\t{G.lengths[x]}\t{len(G.edges_at[x])}\n")
    return EXIT_OK if rep.ok else EXIT_FAIL


def cmd_kl(cfg: RunConfig, out) -> int:
    W, w, _ = cfg.resolve()
    table = KazhdanLusztig(W).table(w)
    if cfg.output == "json":
        rows = [{"x": W.word(x), "w": W.word(w), "coeffs": list(p.coeffs), "P": str(p)} for x, p in table.rows()]
        out.write(json.dumps(rows, indent=2) + "\n")
    else:
        out.write(table.to_tsv())
    return EXIT_OK


def _graph_or_fail(cfg: RunConfig, out):
    W, w, F = cfg.resolve()
    G = build_moment_graph(W, w, F, strict=False)
    rep = gkm_check(G)
    if not rep.ok:
        out.write(rep.summary(limit=8) + "\n")
        return None
    return G


def cmd_bmp(cfg: RunConfig, out) -> int:
    G = _graph_or_fail(cfg, out)
    if G is None:
        return EXIT_FAIL
    B = braden_macpherson(G, cfg.max_degree, method=cfg.method)
    rows = [{"word": G.word(x), "rank_poly": list(graded_rank(B, x).coeffs), "n_edges": len(G.edges_at[x])}
            for x in G.vertices]
    if cfg.output == "json":
        d = {"type": G.W.label, "w": G.word(G.top), "field": G.field.label, "D": B.D,
             "certified": B.certified, "vertices": rows}
        if cfg.hilbert:
            d["hilbert"] = json.loads(B.global_sections().hilbert_json())
        out.write(json.dumps(d, indent=2) + "\n")
    else:
        out.write("x\trank\tn(x)\n")
        for x, r in zip(G.vertices, rows):
            out.write(f"{r['word']}\t{graded_rank(B, x)}\t{r['n_edges']}\n")
        if cfg.hilbert:
            out.write(B.global_sections().hilbert_json() + "\n")
        if not B.certified:
            out.write(f"warning: generators reach degree {B.D}; rerun with a larger --max-degree\n")
    return EXIT_OK if B.certified else EXIT_UNCERTIFIED


def cmd_verify(cfg: RunConfig, out) -> int:
    G = _graph_or_fail(cfg, out)
    if G is None:
        return EXIT_FAIL
    res = run_checks(G, cfg.max_degree, cfg.checks, cfg.method)
    if cfg.output == "json":
        out.write(res.to_json() + "\n")
    else:
        out.write(f"{res.type} w = {res.w} over {res.field}, D = {res.D}\n")
        out.write("x\trank\tP\tn(x)\tsmooth(rank)\tsmooth(edges)\n")
        for v in res.vertices:
            out.write(f"{v['word']}\t{v['rank_poly']}\t{v['kl_poly']}\t{v['n_edges']}\t"
                      f"{v['smooth_rank']}\t{v['smooth_comb']}\n")
        for k, v in res.checks.items():
            out.write(f"{k}: {v}\n")
        for k, v in res.details.items():
            out.write(f"  {k}: {v}\n")
    return res.exit_code


COMMANDS = {"build": cmd_build, "kl": cmd_kl, "bmp": cmd_bmp, "verify": cmd_verify}


def make_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="mg", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        s = sub.add_parser(name)
        s.add_argument("--type", required=True, help="Cartan type, e.g. A2, B2, G2")
        s.add_argument("--affine", action="store_true", help="use the affine Weyl group")
        s.add_argument("--w", required=True, help='reduced word, e.g. "s1 s0 s1"')
        s.add_argument("--field", default="Q", help='"Q" or "Fp:<prime>"')
        s.add_argument("--max-degree", type=int, default=None, help="truncation degree (default l(w))")
        s.add_argument("--json", action="store_true")
        if name == "build":
            s.add_argument("--dot", metavar="PATH")
        if name == "kl":
            s.add_argument("--tsv", action="store_true")
        if name in ("bmp", "verify"):
            s.add_argument("--method", choices=("incremental", "direct"), default="incremental")
        if name == "bmp":
            s.add_argument("--hilbert", action="store_true", help="dump dimensions of global sections")
        if name == "verify":
            s.add_argument("--checks", default=",".join(ALL_CHECKS))
    return p


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING)
    try:
        cfg = _config(args)
        return COMMANDS[args.command](cfg, out)
    except InputError as exc:
        sys.stderr.write(f"mg: {exc}\n")
        return EXIT_INPUT
    except GKMError as exc:
        sys.stderr.write(f"mg: {exc}\n")
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
