"""Bruhat moment graphs of lower intervals ``{<= w}``.

Vertices are the elements of the interval; ``x`` and ``y`` are joined when
``y x^-1`` is a reflection ``s_{alpha,n}``, and the edge carries the affine
coroot ``alpha^vee - n delta^vee`` reduced into the coefficient field.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import combinations

from .arith.field import Field, QQ, to_python
from .arith.linalg import rank
from .rootsys import affine_coroot
from .weyl import AffineWeylElement, WeylGroup


class MomentGraphError(ValueError):
    pass


class ZeroLabelError(MomentGraphError):
    """An edge label vanishes in the coefficient field."""

    def __init__(self, edges, describe):
        self.edges = edges
        names = "; ".join(describe(e) for e in edges)
        super().__init__(f"zero label on {len(edges)} edge(s): {names}")


class GKMError(MomentGraphError):
    def __init__(self, report):
        self.report = report
        super().__init__(report.summary())


@dataclass(frozen=True)
class Edge:
    index: int
    lower: AffineWeylElement
    upper: AffineWeylElement
    alpha: tuple[int, ...]
    n: int
    # coordinates in fundamental coweights + delta^vee, reduced into the field
    label: tuple

    def other(self, x):
        return self.upper if x == self.lower else self.lower

    def __contains__(self, x):
        return x == self.lower or x == self.upper


@dataclass
class MomentGraph:
    W: WeylGroup
    top: AffineWeylElement
    field: Field
    vertices: list
    edges: list
    lengths: dict
    edges_at: dict = field(repr=False)
    _up: dict = field(repr=False)

    @property
    def n(self) -> dict:
        """``n(y)``: number of edges containing ``y``."""
        return {x: len(self.edges_at[x]) for x in self.vertices}

    @property
    def l(self) -> int:
        return self.lengths[self.top]

    @property
    def dim(self) -> int:
        return self.W.rs.rank + 1

    def word(self, x) -> str:
        return self.W.word(x)

    def describe(self, e: Edge) -> str:
        return (f"{self.word(e.lower)} -> {self.word(e.upper)} "
                f"[alpha={e.alpha}, n={e.n}, label={tuple(to_python(c) for c in e.label)}]")

    def leq(self, x, y) -> bool:
        return y in self._up[x]

    def at_least(self, x) -> set:
        """``{>= x}``."""
        return set(self._up[x])

    def above(self, x) -> set:
        """``{> x}``."""
        return self._up[x] - {x}

    def upper_edges(self, x) -> list:
        """Edges ``x -> y`` with ``y > x``."""
        return [e for e in self.edges_at[x] if e.lower == x]

    def is_connected(self) -> bool:
        seen = {self.top}
        stack = [self.top]
        while stack:
            x = stack.pop()
            for e in self.edges_at[x]:
                y = e.other(x)
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        return len(seen) == len(self.vertices)

    def active_coordinates(self) -> list[int]:
        """Coordinates of ``W_k`` on which some label is nonzero."""
        return [i for i in range(self.dim) if any(e.label[i] != 0 for e in self.edges)]

    # ---- export ------------------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "type": self.W.label,
            "w": self.word(self.top),
            "field": self.field.label,
            "vertices": [self.word(x) for x in self.vertices],
            "edges": [
                {"from": self.word(e.lower), "to": self.word(e.upper), "alpha": list(e.alpha), "n": e.n,
                 "label": [to_python(c) for c in e.label]}
                for e in self.edges
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def to_dot(self) -> str:
        ids = {x: i for i, x in enumerate(self.vertices)}
        lines = ["digraph moment_graph {", "  rankdir=BT;"]
        for x in self.vertices:
            lines.append(f'  v{ids[x]} [label="{self.word(x)}\\nn={len(self.edges_at[x])}"];')
        for e in self.edges:
            lab = ",".join(str(to_python(c)) for c in e.label)
            lines.append(f'  v{ids[e.lower]} -> v{ids[e.upper]} [label="({lab})"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def build_moment_graph(W: WeylGroup, w: AffineWeylElement, field: Field = QQ, strict: bool = True) -> MomentGraph:
    """Moment graph of ``{<= w}`` over ``field``.

    With ``strict`` a label vanishing in the field raises :class:`ZeroLabelError`;
    otherwise the degenerate graph is returned so :func:`gkm_check` can
    report on it.
    """
    iv = W.lower_interval(w)
    verts = list(iv.elements)
    edges = []
    for i, y in enumerate(verts):
        yinv = y.inverse()
        for x in verts[:i]:
            t = W.is_reflection(x * yinv)
            if t is None:
                continue
            alpha, n = t
            lo, hi = (x, y) if iv.lengths[x] < iv.lengths[y] else (y, x)
            coords = affine_coroot(W.rs, alpha, n).coords
            label = tuple(field(c) for c in coords)
            edges.append(Edge(len(edges), lo, hi, alpha, n, label))
    edges.sort(key=lambda e: (W.sort_key(e.lower), W.sort_key(e.upper)))
    edges = [Edge(k, e.lower, e.upper, e.alpha, e.n, e.label) for k, e in enumerate(edges)]
    edges_at = {x: [] for x in verts}
    for e in edges:
        edges_at[e.lower].append(e)
        edges_at[e.upper].append(e)
    up = {x: frozenset(y for y in verts if W.bruhat_leq(x, y)) for x in verts}
    G = MomentGraph(W, w, field, verts, edges, dict(iv.lengths), edges_at, up)
    zero = [e for e in edges if all(c == 0 for c in e.label)]
    if zero and strict:
        raise ZeroLabelError(zero, G.describe)
    return G


@dataclass
class GKMReport:
    zero_labels: list
    violations: list  # (vertex, edge, edge)
    describe: object = field(repr=False, default=None)

    @property
    def ok(self) -> bool:
        return not self.zero_labels and not self.violations

    def summary(self, limit: int | None = None) -> str:
        """Human-readable verdict; ``limit`` caps the listed zero labels and pairs each."""
        if self.ok:
            return "GKM pass"
        lines = [f"GKM fail: {len(self.zero_labels)} zero label(s), {len(self.violations)} dependent pair(s)"]
        d = self.describe or str
        # pairs with two nonzero labels are the informative ones, list them first
        nz = [v for v in self.violations if v[1] not in self.zero_labels and v[2] not in self.zero_labels]
        rest = [v for v in self.violations if v not in nz]
        for e in self.zero_labels[:limit]:
            lines.append(f"  zero label: {d(e)}")
        pairs = (nz + rest)[:limit]
        for x, e1, e2 in pairs:
            lines.append(f"  at {x}: {d(e1)}  ||  {d(e2)}")
        hidden = len(self.zero_labels[limit:] if limit is not None else []) + len(self.violations) - len(pairs)
        if hidden:
            lines.append(f"  ... {hidden} more")
        return "\n".join(lines)

    def parallel_pairs(self) -> list:
        """Dependent pairs at a vertex whose labels are both nonzero."""
        z = self.zero_labels
        return [v for v in self.violations if v[1] not in z and v[2] not in z]


def gkm_check(G: MomentGraph) -> GKMReport:
    """Pairwise linear independence of the labels at every vertex."""
    zero = [e for e in G.edges if all(c == 0 for c in e.label)]
    bad = []
    for x in G.vertices:
        for e1, e2 in combinations(G.edges_at[x], 2):
            if rank([list(e1.label), list(e2.label)], G.dim, G.field) < 2:
                bad.append((G.word(x), e1, e2))
    return GKMReport(zero, bad, G.describe)


def smooth_locus_combinatorial(G: MomentGraph) -> set:
    """``{x : n(y) = l(w) for all y >= x}``."""
    n, l = G.n, G.l
    return {x for x in G.vertices if all(n[y] == l for y in G.at_least(x))}


def is_open(G: MomentGraph, subset) -> bool:
    """Upward closed in the Bruhat order."""
    S = set(subset)
    return all(G.at_least(x) <= S for x in S)


def open_sets(G: MomentGraph, principal_only: bool = True):
    """Principal opens ``{>= x}``; with ``principal_only=False`` every open set."""
    if principal_only:
        for x in G.vertices:
            yield frozenset(G.at_least(x))
        return
    order = sorted(G.vertices, key=lambda x: -G.lengths[x])

    def rec(i, chosen):
        if i == len(order):
            yield frozenset(chosen)
            return
        x = order[i]
        yield from rec(i + 1, chosen)
        if G.above(x) <= chosen:
            chosen.add(x)
            yield from rec(i + 1, chosen)
            chosen.discard(x)

    yield from rec(0, set())
