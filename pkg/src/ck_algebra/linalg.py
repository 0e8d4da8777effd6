"""Sparse exact linear algebra over Q(i, sqrt 2).

Vectors are dicts mapping comparable keys (ints or tuples) to nonzero
CyclotomicScalar values.  The central object is :class:`Echelon`, an
incrementally maintained reduced row echelon basis: every stored row has
coefficient 1 at its pivot, the pivot is the row's smallest key, and no
pivot key occurs in any other row.  Those three rules make the basis the
unique reduced echelon form of its span, so spans compare by equality.
"""

from __future__ import annotations

from typing import Dict, Hashable, Iterable, List, Optional, Sequence

from .exact_scalars import ONE, ZERO, CyclotomicScalar, scalar

SparseVec = Dict[Hashable, CyclotomicScalar]


def axpy(y: SparseVec, alpha: CyclotomicScalar, x: SparseVec) -> None:
    """In place ``y += alpha * x``, dropping entries that cancel."""
    for k, v in x.items():
        t = alpha * v
        old = y.get(k)
        if old is None:
            y[k] = t
        else:
            s = old + t
            if s:
                y[k] = s
            else:
                del y[k]


def scale(x: SparseVec, alpha: CyclotomicScalar) -> SparseVec:
    if not alpha:
        return {}
    return {k: alpha * v for k, v in x.items()}


def clean(x: SparseVec) -> SparseVec:
    return {k: v for k, v in x.items() if v}


class Echelon:
    """Reduced row echelon basis of a growing subspace."""

    __slots__ = ("rows",)

    def __init__(self, vectors: Iterable[SparseVec] = ()):
        self.rows: Dict[Hashable, SparseVec] = {}
        for v in vectors:
            self.add(v)

    def __len__(self) -> int:
        return len(self.rows)

    @property
    def rank(self) -> int:
        return len(self.rows)

    def copy(self) -> "Echelon":
        e = Echelon()
        e.rows = {p: dict(r) for p, r in self.rows.items()}
        return e

    def reduce(self, vec: SparseVec) -> SparseVec:
        """Return the residual of ``vec`` after elimination against the basis."""
        r = dict(vec)
        for p in [k for k in r if k in self.rows]:
            c = r.get(p)
            if c:
                axpy(r, -c, self.rows[p])
        return r

    def contains(self, vec: SparseVec) -> bool:
        return not vec or not self.reduce(vec)

    def add(self, vec: SparseVec) -> bool:
        """Insert ``vec``; return True when it enlarged the span."""
        r = self.reduce(vec)
        if not r:
            return False
        p = min(r)
        inv = r[p].inv()
        if not inv.is_one():
            r = {k: v * inv for k, v in r.items()}
        r[p] = ONE
        for row in self.rows.values():
            c = row.get(p)
            if c:
                axpy(row, -c, r)
        self.rows[p] = r
        return True

    def pivots(self) -> List[Hashable]:
        return sorted(self.rows)

    def basis(self) -> List[SparseVec]:
        """Rows sorted by pivot, i.e. the canonical reduced echelon form."""
        return [self.rows[p] for p in sorted(self.rows)]

    def coordinates(self, vec: SparseVec) -> Optional[Dict[Hashable, CyclotomicScalar]]:
        """Coefficients of ``vec`` on the basis rows (keyed by pivot), or None."""
        coeffs = {p: vec[p] for p in self.rows if p in vec}
        rest = dict(vec)
        for p, c in coeffs.items():
            axpy(rest, -c, self.rows[p])
        return None if rest else coeffs


def rank(vectors: Iterable[SparseVec]) -> int:
    return Echelon(vectors).rank


def rref(vectors: Iterable[SparseVec]) -> List[SparseVec]:
    return Echelon(vectors).basis()


def nullspace(equations: Iterable[SparseVec], unknowns: Sequence[Hashable],
              stop_rank: Optional[int] = None) -> List[SparseVec]:
    """Basis of ``{x : sum_k eq[k] x[k] = 0 for every equation}``.

    ``unknowns`` fixes the coordinate set (keys absent from every equation
    are free).  If ``stop_rank`` is given, elimination stops as soon as the
    equation rank reaches it; the caller is then responsible for checking
    the remaining equations against the returned candidate solutions.
    """
    ech = Echelon()
    for eq in equations:
        ech.add(eq)
        if stop_rank is not None and ech.rank >= stop_rank:
            break
    return _kernel_from_echelon(ech, unknowns)


def _kernel_from_echelon(ech: Echelon, unknowns: Sequence[Hashable]) -> List[SparseVec]:
    free = [u for u in unknowns if u not in ech.rows]
    basis = []
    for f in free:
        vec: SparseVec = {f: ONE}
        for p, row in ech.rows.items():
            c = row.get(f)
            if c:
                vec[p] = -c
        basis.append(vec)
    return basis


def dot(x: SparseVec, y: SparseVec) -> CyclotomicScalar:
    if len(x) > len(y):
        x, y = y, x
    acc = ZERO
    for k, v in x.items():
        w = y.get(k)
        if w is not None:
            acc = acc + v * w
    return acc


# -- dense helpers ------------------------------------------------------------

def dense_to_sparse(row: Sequence) -> SparseVec:
    out = {}
    for j, v in enumerate(row):
        s = scalar(v)
        if s:
            out[j] = s
    return out


def sparse_to_dense(vec: SparseVec, n: int) -> List[CyclotomicScalar]:
    return [vec.get(j, ZERO) for j in range(n)]


def dense_rank(matrix: Sequence[Sequence]) -> int:
    return rank(dense_to_sparse(r) for r in matrix)


def dense_nullspace(matrix: Sequence[Sequence], ncols: int) -> List[List[CyclotomicScalar]]:
    ker = nullspace((dense_to_sparse(r) for r in matrix), list(range(ncols)))
    return [sparse_to_dense(v, ncols) for v in ker]


def dense_inverse(matrix: Sequence[Sequence]) -> List[List[CyclotomicScalar]]:
    """Gauss-Jordan inverse of a square dense matrix."""
    n = len(matrix)
    aug = []
    for i, row in enumerate(matrix):
        if len(row) != n:
            raise ValueError("matrix is not square")
        aug.append([scalar(x) for x in row] + [ONE if j == i else ZERO for j in range(n)])
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col]), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = aug[col][col].inv()
        aug[col] = [x * inv for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                c = aug[r][col]
                aug[r] = [x - c * y for x, y in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]
