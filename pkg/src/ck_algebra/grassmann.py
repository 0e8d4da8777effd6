"""Exterior (Grassmann) algebras and sparse operators on them.

A monomial is a bitmask over the generators ``xi_0 .. xi_{n-1}`` and
stands for the product of its generators in increasing index order.  The
same masks index the standard basis of ``Lambda_n``, so an operator on the
algebra is a sparse ``2^m x 2^n`` matrix.
"""

from __future__ import annotations

import math
from typing import Dict, List, Optional, Sequence, Tuple

from .linalg import SparseVec, axpy
from .exact_scalars import ONE, ZERO, CyclotomicScalar, scalar


def popcount(x: int) -> int:
    return bin(x).count("1")


def merge_sign(a: int, b: int) -> int:
    """Sign of reordering ``xi^a xi^b`` into increasing order; 0 if they overlap."""
    if a & b:
        return 0
    swaps = 0
    while b:
        low = b & -b
        # generators of ``a`` above this generator of ``b`` must cross it
        swaps += popcount(a & ~((low << 1) - 1))
        b ^= low
    return -1 if swaps & 1 else 1


def reversal_sign(mask: int) -> int:
    """Sign ``(-1)^(k(k-1)/2)`` of reversing a degree-``k`` monomial."""
    k = popcount(mask)
    return -1 if (k * (k - 1) // 2) & 1 else 1


class GrassmannElement:
    """An element of the exterior algebra on ``n_vars`` generators."""

    __slots__ = ("n_vars", "terms")

    def __init__(self, n_vars: int, terms: Optional[Dict[int, CyclotomicScalar]] = None):
        self.n_vars = n_vars
        full = (1 << n_vars) - 1
        clean: Dict[int, CyclotomicScalar] = {}
        for m, c in (terms or {}).items():
            if m & ~full:
                raise ValueError(f"monomial {m:b} uses a generator beyond {n_vars}")
            c = scalar(c)
            if c:
                clean[m] = c
        self.terms = clean

    # -- constructors -------------------------------------------------------------
    @classmethod
    def one(cls, n_vars: int) -> "GrassmannElement":
        return cls(n_vars, {0: ONE})

    @classmethod
    def generator(cls, n_vars: int, i: int) -> "GrassmannElement":
        return cls(n_vars, {1 << i: ONE})

    @classmethod
    def linear(cls, coeffs: Sequence, constant=0) -> "GrassmannElement":
        """``constant + sum_i coeffs[i] xi_i``."""
        t = {1 << i: scalar(c) for i, c in enumerate(coeffs)}
        t[0] = scalar(constant)
        return cls(len(coeffs), t)

    # -- arithmetic ---------------------------------------------------------------------
    def _same(self, other: "GrassmannElement") -> None:
        if self.n_vars != other.n_vars:
            raise ValueError("elements live in different Grassmann algebras")

    def __add__(self, other):
        if not isinstance(other, GrassmannElement):
            other = GrassmannElement(self.n_vars, {0: scalar(other)})
        self._same(other)
        out = dict(self.terms)
        axpy(out, ONE, other.terms)
        return GrassmannElement(self.n_vars, out)

    __radd__ = __add__

    def __neg__(self):
        return GrassmannElement(self.n_vars, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, GrassmannElement):
            c = scalar(other)
            return GrassmannElement(self.n_vars, {m: c * v for m, v in self.terms.items()})
        self._same(other)
        out: Dict[int, CyclotomicScalar] = {}
        for a, x in self.terms.items():
            for b, y in other.terms.items():
                s = merge_sign(a, b)
                if s:
                    t = x * y if s > 0 else -(x * y)
                    m = a | b
                    old = out.get(m)
                    out[m] = t if old is None else old + t
        return GrassmannElement(self.n_vars, out)

    def __rmul__(self, other):
        return self * other

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative powers are not defined")
        acc = GrassmannElement.one(self.n_vars)
        for _ in range(k):
            acc = acc * self
        return acc

    def __eq__(self, other) -> bool:
        if not isinstance(other, GrassmannElement):
            return NotImplemented
        return self.n_vars == other.n_vars and self.terms == other.terms

    def __hash__(self):
        return hash((self.n_vars, frozenset(self.terms.items())))

    def __bool__(self) -> bool:
        return bool(self.terms)

    # -- structure --------------------------------------------------------------------
    @property
    def constant(self) -> CyclotomicScalar:
        return self.terms.get(0, ZERO)

    def degree_part(self, k: int) -> "GrassmannElement":
        return GrassmannElement(self.n_vars, {m: c for m, c in self.terms.items() if popcount(m) == k})

    def even_part(self) -> "GrassmannElement":
        return GrassmannElement(self.n_vars, {m: c for m, c in self.terms.items() if not popcount(m) & 1})

    def odd_part(self) -> "GrassmannElement":
        return GrassmannElement(self.n_vars, {m: c for m, c in self.terms.items() if popcount(m) & 1})

    def is_even(self) -> bool:
        return all(not popcount(m) & 1 for m in self.terms)

    def vector(self) -> SparseVec:
        return dict(self.terms)

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for m in sorted(self.terms, key=lambda m: (popcount(m), m)):
            gens = "".join(f"x{i + 1}" for i in range(self.n_vars) if m >> i & 1)
            parts.append(f"({self.terms[m]}){gens}" if gens else f"({self.terms[m]})")
        return " + ".join(parts)


def grassmann_mul(x: GrassmannElement, y: GrassmannElement) -> GrassmannElement:
    return x * y


def grassmann_exp(f: GrassmannElement) -> GrassmannElement:
    """``sum_j f^j / j!``; needs a vanishing constant term so the series stops."""
    if f.constant:
        raise ValueError("exp needs an element with zero constant term")
    acc = GrassmannElement.one(f.n_vars)
    power = GrassmannElement.one(f.n_vars)
    for j in range(1, f.n_vars + 1):
        power = power * f
        if not power:
            break
        acc = acc + power * scalar(f"1/{math.factorial(j)}")
    return acc


# ---------------------------------------------------------------------------
# Sparse operators
# ---------------------------------------------------------------------------

class Operator:
    """A sparse ``rows x cols`` matrix stored by columns."""

    __slots__ = ("rows", "cols", "data")

    def __init__(self, rows: int, cols: int, data: Optional[Dict[int, SparseVec]] = None):
        self.rows = rows
        self.cols = cols
        self.data: Dict[int, SparseVec] = {}
        for c, col in (data or {}).items():
            col = {r: v for r, v in col.items() if v}
            if col:
                self.data[c] = col

    @classmethod
    def zero(cls, rows: int, cols: int) -> "Operator":
        return cls(rows, cols)

    @classmethod
    def identity(cls, n: int) -> "Operator":
        return cls(n, n, {k: {k: ONE} for k in range(n)})

    @classmethod
    def from_dense(cls, M: Sequence[Sequence]) -> "Operator":
        rows = len(M)
        cols = len(M[0]) if rows else 0
        data: Dict[int, SparseVec] = {}
        for r in range(rows):
            for c in range(cols):
                v = scalar(M[r][c])
                if v:
                    data.setdefault(c, {})[r] = v
        return cls(rows, cols, data)

    def dense(self) -> List[List[CyclotomicScalar]]:
        out = [[ZERO] * self.cols for _ in range(self.rows)]
        for c, col in self.data.items():
            for r, v in col.items():
                out[r][c] = v
        return out

    def entry(self, r: int, c: int) -> CyclotomicScalar:
        return self.data.get(c, {}).get(r, ZERO)

    def apply(self, vec: SparseVec) -> SparseVec:
        out: SparseVec = {}
        for c, x in vec.items():
            col = self.data.get(c)
            if col:
                axpy(out, x, col)
        return out

    def __matmul__(self, other: "Operator") -> "Operator":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        return Operator(self.rows, other.cols, {c: self.apply(col) for c, col in other.data.items()})

    def __add__(self, other: "Operator") -> "Operator":
        self._same(other)
        data = {c: dict(col) for c, col in self.data.items()}
        for c, col in other.data.items():
            axpy(data.setdefault(c, {}), ONE, col)
        return Operator(self.rows, self.cols, data)

    def __sub__(self, other: "Operator") -> "Operator":
        return self + other.scale(-ONE)

    def scale(self, s) -> "Operator":
        s = scalar(s)
        return Operator(self.rows, self.cols, {c: {r: s * v for r, v in col.items()} for c, col in self.data.items()})

    def _same(self, other: "Operator") -> None:
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("operator shapes differ")

    def is_zero(self) -> bool:
        return not self.data

    def __eq__(self, other) -> bool:
        if not isinstance(other, Operator):
            return NotImplemented
        return (self.rows, self.cols) == (other.rows, other.cols) and self.data == other.data

    def first_entry(self) -> Optional[Tuple[int, int]]:
        """Position of the first nonzero entry in row-major order."""
        best = None
        for c, col in self.data.items():
            r = min(col)
            if best is None or (r, c) < best:
                best = (r, c)
        return best

    def normalized(self) -> "Operator":
        pos = self.first_entry()
        if pos is None:
            return self
        return self.scale(self.entry(*pos).inv())

    def ratio_to(self, other: "Operator") -> Optional[CyclotomicScalar]:
        """``s`` with ``self = s * other``, or None when not proportional."""
        self._same(other)
        if other.is_zero():
            return ZERO if self.is_zero() else None
        r, c = other.first_entry()
        s = self.entry(r, c) * other.entry(r, c).inv()
        return s if self == other.scale(s) else None

    def transpose(self) -> "Operator":
        data: Dict[int, SparseVec] = {}
        for c, col in self.data.items():
            for r, v in col.items():
                data.setdefault(r, {})[c] = v
        return Operator(self.cols, self.rows, data)

    def restrict(self, rows: Sequence[int], cols: Sequence[int]) -> "Operator":
        rpos = {r: i for i, r in enumerate(rows)}
        data = {}
        for j, c in enumerate(cols):
            col = self.data.get(c, {})
            sub = {rpos[r]: v for r, v in col.items() if r in rpos}
            if sub:
                data[j] = sub
        return Operator(len(rows), len(cols), data)

    def __repr__(self) -> str:
        return f"Operator({self.rows}x{self.cols}, nnz={sum(len(c) for c in self.data.values())})"


def creation(n_vars: int, i: int) -> Operator:
    """Left multiplication by ``xi_i`` on ``Lambda_n``."""
    bit = 1 << i
    lower = bit - 1
    data = {}
    for m in range(1 << n_vars):
        if not m & bit:
            data[m] = {m | bit: -ONE if popcount(m & lower) & 1 else ONE}
    return Operator(1 << n_vars, 1 << n_vars, data)


def contraction(n_vars: int, i: int) -> Operator:
    """Left derivative ``d/dxi_i``."""
    bit = 1 << i
    lower = bit - 1
    data = {}
    for m in range(1 << n_vars):
        if m & bit:
            data[m] = {m ^ bit: -ONE if popcount(m & lower) & 1 else ONE}
    return Operator(1 << n_vars, 1 << n_vars, data)


def multiplication_operator(g: GrassmannElement) -> Operator:
    """Left multiplication by ``g``."""
    n = g.n_vars
    data = {}
    for m in range(1 << n):
        col = GrassmannElement(n, {m: ONE})
        data[m] = (g * col).terms
    return Operator(1 << n, 1 << n, data)


def graded_indices(n_vars: int, k: int) -> List[int]:
    """Masks of degree ``k``, in increasing order."""
    return [m for m in range(1 << n_vars) if popcount(m) == k]
