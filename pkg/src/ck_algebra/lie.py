"""Matrix Lie algebras as exact structure-constant tables.

A basis of PMatrix elements is flattened to scalar vectors (one coordinate
per matrix entry and iota-monomial).  Brackets are computed by matrix
multiplication and expressed back in the basis, so every subsequent check
(ideals, central series, Killing form) is plain linear algebra over the
structure constants.
"""

from __future__ import annotations

from typing import Dict, List, Optional, Sequence, Tuple

from .ck_groups import PMatrix
from .linalg import Echelon, SparseVec, axpy
from .exact_scalars import ONE, ZERO, CyclotomicScalar

Coords = Dict[int, CyclotomicScalar]


def flatten(m: PMatrix) -> SparseVec:
    """Coefficient vector keyed by ((row * cols + col) << arity) | monomial mask.

    Ordering the keys this way lists coefficients by entry first and
    iota-monomial second.  The map is linear and injective.
    """
    out: SparseVec = {}
    shift = m.arity
    for (i, j), elem in m.entries.items():
        base = (i * m.cols + j) << shift
        for mask, c in elem.terms.items():
            out[base | mask] = c
    return out


class NotInSpan(ValueError):
    pass


class LieAlgebra:
    """Span of linearly independent matrices closed under the commutator."""

    def __init__(self, labels: Sequence, matrices: Sequence[PMatrix]):
        if len(labels) != len(matrices):
            raise ValueError("labels and matrices differ in length")
        self.labels = list(labels)
        self.matrices = list(matrices)
        self.index = {lab: i for i, lab in enumerate(self.labels)}
        self._ech = Echelon()
        for i, m in enumerate(self.matrices):
            vec = {(0, k): c for k, c in flatten(m).items()}
            vec[(1, i)] = ONE
            if not any(key[0] == 0 for key in self._ech.reduce(vec)):
                raise ValueError(f"basis element {self.labels[i]} is linearly dependent")
            self._ech.add(vec)
        self._table: Dict[Tuple[int, int], Coords] = {}
        self.closed = True
        self.escapes: List[Tuple[int, int]] = []
        d = len(self.matrices)
        for i in range(d):
            for j in range(i + 1, d):
                c = self.coordinates(self.matrices[i].commutator(self.matrices[j]))
                if c is None:
                    self.closed = False
                    self.escapes.append((i, j))
                    c = {}
                if c:
                    self._table[(i, j)] = c

    @property
    def dim(self) -> int:
        return len(self.matrices)

    def coordinates(self, m: PMatrix) -> Optional[Coords]:
        vec = {(0, k): c for k, c in flatten(m).items()}
        r = self._ech.reduce(vec)
        if any(key[0] == 0 for key in r):
            return None
        return {key[1]: -c for key, c in r.items()}

    def bracket_basis(self, i: int, j: int) -> Coords:
        if i == j:
            return {}
        if i < j:
            return self._table.get((i, j), {})
        return {k: -c for k, c in self._table.get((j, i), {}).items()}

    def bracket(self, x: Coords, y: Coords) -> Coords:
        out: Coords = {}
        for i, a in x.items():
            for j, b in y.items():
                c = self.bracket_basis(i, j)
                if c:
                    axpy(out, a * b, c)
        return out

    # -- subspaces of coordinate space --------------------------------------------
    @staticmethod
    def unit(i: int) -> Coords:
        return {i: ONE}

    def span(self, vectors) -> Echelon:
        return Echelon(vectors)

    def bracket_span(self, A: Sequence[Coords], B: Sequence[Coords]) -> Echelon:
        ech = Echelon()
        for x in A:
            for y in B:
                z = self.bracket(x, y)
                if z:
                    ech.add(z)
        return ech

    def lower_central_series(self, T: Sequence[Coords], max_steps: Optional[int] = None) -> List[int]:
        """Dimensions of T_(0)=T, T_(k+1)=[T_(k), T] until zero or stationary."""
        cur = Echelon(T).basis()
        dims = [len(cur)]
        steps = max_steps if max_steps is not None else len(cur) + 1
        for _ in range(steps):
            if not cur:
                break
            nxt = self.bracket_span(cur, T).basis()
            dims.append(len(nxt))
            if len(nxt) == len(cur):
                break
            cur = nxt
        return dims

    def derived_series(self, T: Sequence[Coords]) -> List[int]:
        cur = Echelon(T).basis()
        dims = [len(cur)]
        while cur:
            nxt = self.bracket_span(cur, cur).basis()
            dims.append(len(nxt))
            if len(nxt) == len(cur):
                break
            cur = nxt
        return dims

    def ad_matrix(self, x: Coords, support: Sequence[int]) -> List[List[CyclotomicScalar]]:
        """Matrix of ad x on span(support); requires that span to be ad x-stable."""
        pos = {k: r for r, k in enumerate(support)}
        cols = []
        for k in support:
            z = self.bracket(x, {k: ONE})
            col = [ZERO] * len(support)
            for key, c in z.items():
                if key not in pos:
                    raise NotInSpan(f"ad maps outside the given support at {self.labels[key]}")
                col[pos[key]] = c
            cols.append(col)
        return [[cols[c][r] for c in range(len(support))] for r in range(len(support))]

    def killing_form(self, vectors: Sequence[Coords], support: Sequence[int]) -> List[List[CyclotomicScalar]]:
        """Gram matrix of tr(ad x ad y) on ``vectors``, with ad taken on span(support)."""
        ads = []
        for x in vectors:
            A = self.ad_matrix(x, support)
            ads.append({(r, k): a for r, row in enumerate(A) for k, a in enumerate(row) if a})
        n = len(ads)
        gram = [[ZERO] * n for _ in range(n)]
        for i in range(n):
            A = ads[i]
            for j in range(i, n):
                B = ads[j]
                acc = ZERO
                for (r, k), a in A.items():
                    b = B.get((k, r))
                    if b is not None:
                        acc = acc + a * b
                gram[i][j] = gram[j][i] = acc
        return gram


def in_span(ech: Echelon, vecs: Sequence[SparseVec]) -> bool:
    return all(ech.contains(v) for v in vecs)


def supported_in(vec: Coords, allowed) -> bool:
    return all(k in allowed for k in vec)
