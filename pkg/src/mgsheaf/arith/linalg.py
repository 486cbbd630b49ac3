"""Exact dense linear algebra over a :class:`Field`.

Vectors are python lists of field scalars; a matrix is a list of rows.
Linear maps use the row convention throughout the package: the matrix of
``f: U -> W`` has one row per basis vector of ``U`` holding its image, so a
row vector ``v`` maps to ``v @ M``.

Bulk elimination is delegated to python-flint (``fmpq_mat`` / ``nmod_mat``);
:class:`EchelonBasis` is a small incremental eliminator used where vectors
arrive one at a time.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dfield

from flint import fmpq_mat, nmod_mat

from .field import Field, FieldElem


def _flint(rows, ncols: int, F: Field):
    nrows = len(rows)
    flat = [x for row in rows for x in row]
    if F.p == 0:
        return fmpq_mat(nrows, ncols, flat)
    return nmod_mat(nrows, ncols, [int(x) for x in flat], F.p)


def _unflint(M, F: Field):
    n, m = M.nrows(), M.ncols()
    flat = M.entries()
    if F.p:
        flat = [F(int(x)) for x in flat]
    return [flat[i * m:(i + 1) * m] for i in range(n)]


def rref(rows, ncols: int, F: Field):
    """Reduced row echelon form. Returns ``(nonzero_rows, pivot_columns)``."""
    if not rows or ncols == 0:
        return [], []
    R, rk = _flint(rows, ncols, F).rref()
    R = _unflint(R, F)[:rk]
    pivots = []
    for row in R:
        j = next(j for j, x in enumerate(row) if x != 0)
        pivots.append(j)
    return R, pivots


def rank(rows, ncols: int, F: Field) -> int:
    if not rows or ncols == 0:
        return 0
    return _flint(rows, ncols, F).rank()


def nullspace(rows, ncols: int, F: Field):
    """Basis of ``{v : A v = 0}`` (column convention: ``rows`` are equations)."""
    R, pivots = rref(rows, ncols, F)
    pivset = set(pivots)
    basis = []
    zero, one = F.zero, F.one
    for f in range(ncols):
        if f in pivset:
            continue
        v = [zero] * ncols
        v[f] = one
        for row, pc in zip(R, pivots):
            if row[f] != 0:
                v[pc] = -row[f]
        basis.append(v)
    return basis


def left_kernel(M, nrows: int, ncols: int, F: Field):
    """Basis of ``{u : u @ M = 0}`` for an ``nrows x ncols`` matrix."""
    return nullspace(transpose(M, nrows, ncols), nrows, F)


def transpose(M, nrows: int, ncols: int):
    if nrows == 0:
        return [[] for _ in range(ncols)]
    return [list(col) for col in zip(*M)]


def matmul(A, B, n: int, k: int, m: int, F: Field):
    """``A`` is ``n x k``, ``B`` is ``k x m``."""
    if n == 0:
        return []
    if k == 0 or m == 0:
        return [[F.zero] * m for _ in range(n)]
    return _unflint(_flint(A, k, F) * _flint(B, m, F), F)


def row_basis(rows, ncols: int, F: Field):
    """An echelon basis of the row space."""
    return rref(rows, ncols, F)[0]


def is_zero_vector(v) -> bool:
    return all(x == 0 for x in v)


class EchelonBasis:
    """Incrementally maintained echelon basis of a subspace of ``F^n``.

    Rows are kept reduced with respect to each other's pivots, so
    membership tests are a single reduction pass.
    """

    def __init__(self, n: int, F: Field):
        self.n = n
        self.F = F
        self.rows: list[list] = []
        self.pivots: list[int] = []

    def __len__(self):
        return len(self.rows)

    def reduce(self, v):
        v = list(v)
        for row, pc in zip(self.rows, self.pivots):
            c = v[pc]
            if c != 0:
                for j in range(pc, self.n):
                    if row[j] != 0:
                        v[j] = v[j] - c * row[j]
        return v

    def add(self, v) -> bool:
        """Add ``v``; return False when it was already in the span."""
        r = self.reduce(v)
        try:
            pc = next(j for j, x in enumerate(r) if x != 0)
        except StopIteration:
            return False
        inv = self.F.one / r[pc]
        r = [x * inv for x in r]
        for i, row in enumerate(self.rows):
            c = row[pc]
            if c != 0:
                self.rows[i] = [a - c * b for a, b in zip(row, r)]
        self.rows.append(r)
        self.pivots.append(pc)
        return True

    def contains(self, v) -> bool:
        return is_zero_vector(self.reduce(v))


def select_complement(span_rows, candidates, n: int, F: Field):
    """Indices of ``candidates`` that extend a basis of ``span(span_rows)``.

    Greedy in the given order, so the choice is deterministic.
    """
    eb = EchelonBasis(n, F)
    for r in row_basis(span_rows, n, F):
        eb.add(r)
    return [i for i, c in enumerate(candidates) if eb.add(c)]


@dataclass
class SolutionSet:
    """Solutions of ``A x = b``: ``particular + span(kernel)``, or inconsistent."""

    consistent: bool
    particular: list | None = None
    kernel: list = dfield(default_factory=list)

    @property
    def kernel_dim(self) -> int:
        return len(self.kernel)


def _field_of(entries, F: Field | None) -> Field:
    fields = {e.field for e in entries if isinstance(e, FieldElem)}
    if F is not None:
        fields.add(F)
    if len(fields) > 1:
        raise TypeError("mixed-field inputs: " + ", ".join(sorted(f.label for f in fields)))
    return fields.pop() if fields else Field(0)


def _raw(x, F: Field):
    return x.value if isinstance(x, FieldElem) else F(x)


def solve_linear(A, b, F: Field | None = None, ncols: int | None = None) -> SolutionSet:
    """Solve ``A x = b`` exactly.

    ``A`` is a list of rows and ``b`` a list with one entry per row. Entries
    may be :class:`FieldElem` (all from one field) or plain numbers coerced
    into ``F`` (default Q). ``ncols`` is only needed when ``A`` has no rows.
    """
    entries = [x for row in A for x in row] + list(b)
    F = _field_of(entries, F)
    if len(A) != len(b):
        raise ValueError("rhs length does not match the number of equations")
    m = ncols if ncols is not None else (len(A[0]) if A else 0)
    if any(len(row) != m for row in A):
        raise ValueError("ragged matrix")
    rows = [[_raw(x, F) for x in row] for row in A]
    rhs = [_raw(x, F) for x in b]
    aug = [row + [c] for row, c in zip(rows, rhs)]
    R, pivots = rref(aug, m + 1, F)
    if m in pivots:
        return SolutionSet(consistent=False)
    x = [F.zero] * m
    for row, pc in zip(R, pivots):
        x[pc] = row[m]
    kernel = nullspace(rows, m, F) if rows else [
        [F.one if i == j else F.zero for i in range(m)] for j in range(m)
    ]
    return SolutionSet(consistent=True, particular=x, kernel=kernel)


def express_in_basis(basis_rows, vectors, n: int, F: Field):
    """Coordinates of each vector w.r.t. independent ``basis_rows``.

    Raises ``ValueError`` if a vector is outside the span.
    """
    k = len(basis_rows)
    if not vectors:
        return []
    if k == 0:
        if all(is_zero_vector(v) for v in vectors):
            return [[] for _ in vectors]
        raise ValueError("vector not in the span of the (empty) basis")
    cols = [[basis_rows[j][i] for j in range(k)] + [v[i] for v in vectors] for i in range(n)]
    R, pivots = rref(cols, k + len(vectors), F)
    if pivots[:k] != list(range(k)):
        raise ValueError("basis rows are linearly dependent")
    if len(pivots) > k:
        raise ValueError("vector not in the span of the basis")
    return [[R[i][k + j] for i in range(k)] for j in range(len(vectors))]
