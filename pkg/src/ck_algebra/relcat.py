"""Linear relations and the Cayley-Klein categories GA, GD, A, B, C, D.

A morphism ``V -> W`` is either the formal element :data:`NULL` or a
subspace of ``V (+) W``.  Subspaces are kept in reduced echelon form, so
equality of relations is equality of their bases and every category law
can be checked syntactically.

Coordinates of ``V (+) W`` are ``0 .. dim V - 1`` for the source followed
by ``dim V .. dim V + dim W - 1`` for the target.

Standard objects use an interleaved hyperbolic layout so that appending a
plane to a rank-``n`` object gives the rank-``n+1`` object:

* GD/D, rank n: basis ``e1+, e1-, ..., en+, en-`` with ``{ek+, ek-} = 1``;
* B, rank n: ``u, e1+, e1-, ...`` with ``{u, u} = 1``;
* C, rank n: ``e1, f1, ..., en, fn`` with ``w(ek, fk) = 1``;
* A/GA, rank n: plain coordinates, no form.
"""

from __future__ import annotations

import enum
import itertools
import random
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

from .linalg import Echelon, SparseVec, axpy, nullspace
from .exact_scalars import ONE, ZERO, CyclotomicScalar, parse_scalar, scalar

Matrix = List[List[CyclotomicScalar]]


# ---------------------------------------------------------------------------
# Subspaces
# ---------------------------------------------------------------------------

class Subspace:
    """A subspace of ``K^ambient_dim`` stored in canonical reduced echelon form."""

    __slots__ = ("ambient_dim", "_rows")

    def __init__(self, ambient_dim: int, vectors: Iterable[SparseVec] = ()):
        if ambient_dim < 0:
            raise ValueError("ambient dimension must be non-negative")
        self.ambient_dim = ambient_dim
        ech = Echelon()
        for v in vectors:
            for k in v:
                if not (isinstance(k, int) and 0 <= k < ambient_dim):
                    raise ValueError(f"coordinate {k!r} outside ambient dimension {ambient_dim}")
            ech.add(v)
        self._rows: Tuple[Tuple[Tuple[int, CyclotomicScalar], ...], ...] = tuple(
            tuple(sorted(r.items())) for r in ech.basis()
        )

    # -- construction --------------------------------------------------------------
    @classmethod
    def zero(cls, ambient_dim: int) -> "Subspace":
        return cls(ambient_dim)

    @classmethod
    def whole(cls, ambient_dim: int) -> "Subspace":
        return cls(ambient_dim, ({k: ONE} for k in range(ambient_dim)))

    @classmethod
    def coordinate(cls, ambient_dim: int, keys: Iterable[int]) -> "Subspace":
        return cls(ambient_dim, ({k: ONE} for k in keys))

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> "Subspace":
        if not rows:
            raise ValueError("from_rows needs at least one row; use Subspace(dim) for zero")
        dim = len(rows[0])
        vecs = []
        for r in rows:
            if len(r) != dim:
                raise ValueError("ragged rows")
            vecs.append({j: scalar(x) for j, x in enumerate(r) if scalar(x)})
        return cls(dim, vecs)

    # -- access ----------------------------------------------------------------------
    @property
    def dim(self) -> int:
        return len(self._rows)

    def basis(self) -> List[SparseVec]:
        return [dict(r) for r in self._rows]

    def dense(self) -> Matrix:
        out = []
        for r in self._rows:
            row = [ZERO] * self.ambient_dim
            for k, c in r:
                row[k] = c
            out.append(row)
        return out

    def echelon(self) -> Echelon:
        return Echelon(self.basis())

    def contains(self, vec: SparseVec) -> bool:
        return self.echelon().contains(vec)

    def contains_subspace(self, other: "Subspace") -> bool:
        self._check(other)
        ech = self.echelon()
        return all(ech.contains(v) for v in other.basis())

    def _check(self, other: "Subspace") -> None:
        if self.ambient_dim != other.ambient_dim:
            raise ValueError(f"ambient dimensions differ: {self.ambient_dim} vs {other.ambient_dim}")

    # -- lattice operations ---------------------------------------------------------
    def __add__(self, other: "Subspace") -> "Subspace":
        self._check(other)
        return Subspace(self.ambient_dim, self.basis() + other.basis())

    def intersect(self, other: "Subspace") -> "Subspace":
        self._check(other)
        A, B = self.basis(), other.basis()
        if not A or not B:
            return Subspace(self.ambient_dim)
        # sum a_i A_i - sum b_j B_j = 0, then read off sum a_i A_i.
        eqs: Dict[int, SparseVec] = {}
        for i, v in enumerate(A):
            for k, c in v.items():
                eqs.setdefault(k, {})[("a", i)] = c
        for j, v in enumerate(B):
            for k, c in v.items():
                eqs.setdefault(k, {})[("b", j)] = -c
        unknowns = [("a", i) for i in range(len(A))] + [("b", j) for j in range(len(B))]
        sols = nullspace(eqs.values(), unknowns)
        out = []
        for s in sols:
            vec: SparseVec = {}
            for (tag, i), c in s.items():
                if tag == "a":
                    axpy(vec, c, A[i])
            out.append(vec)
        return Subspace(self.ambient_dim, out)

    def annihilator(self) -> "Subspace":
        """Annihilator in the dual space, written in the dual basis."""
        return Subspace(self.ambient_dim, nullspace(self.basis(), list(range(self.ambient_dim))))

    def image(self, keys: Sequence[int], offset: int = 0, ambient: Optional[int] = None) -> "Subspace":
        """Project onto coordinates ``keys`` and relabel them to ``k - offset``."""
        allowed = set(keys)
        amb = ambient if ambient is not None else len(keys)
        out = []
        for v in self.basis():
            w = {k - offset: c for k, c in v.items() if k in allowed}
            if w:
                out.append(w)
        return Subspace(amb, out)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.ambient_dim == other.ambient_dim and self._rows == other._rows

    def __hash__(self) -> int:
        return hash((self.ambient_dim, self._rows))

    def __repr__(self) -> str:
        return f"Subspace(ambient={self.ambient_dim}, dim={self.dim})"


# ---------------------------------------------------------------------------
# Bilinear forms and objects
# ---------------------------------------------------------------------------

class Symmetry(enum.Enum):
    SYMMETRIC = "symmetric"
    SKEW = "skew"


@dataclass(frozen=True)
class BilinearForm:
    gram: Tuple[Tuple[CyclotomicScalar, ...], ...]
    symmetry: Symmetry

    def __post_init__(self):
        n = len(self.gram)
        if any(len(r) != n for r in self.gram):
            raise ValueError("gram matrix is not square")
        sign = ONE if self.symmetry is Symmetry.SYMMETRIC else -ONE
        for i in range(n):
            for j in range(n):
                if self.gram[i][j] != sign * self.gram[j][i]:
                    raise ValueError(f"gram matrix is not {self.symmetry.value}")
        if Echelon({j: c for j, c in enumerate(r) if c} for r in self.gram).rank != n:
            raise ValueError("bilinear form is degenerate")

    @classmethod
    def make(cls, gram: Sequence[Sequence], symmetry: Union[Symmetry, str]) -> "BilinearForm":
        return cls(tuple(tuple(scalar(x) for x in r) for r in gram), Symmetry(symmetry))

    @property
    def dim(self) -> int:
        return len(self.gram)

    def __call__(self, x: SparseVec, y: SparseVec) -> CyclotomicScalar:
        acc = ZERO
        for i, a in x.items():
            row = self.gram[i]
            for j, b in y.items():
                g = row[j]
                if g:
                    acc = acc + a * g * b
        return acc

    def scaled(self, c) -> "BilinearForm":
        c = scalar(c)
        return BilinearForm(tuple(tuple(c * x for x in r) for r in self.gram), self.symmetry)

    def direct_sum(self, other: "BilinearForm") -> "BilinearForm":
        if self.symmetry is not other.symmetry:
            raise ValueError("cannot add forms of different symmetry")
        n, m = self.dim, other.dim
        rows = [list(r) + [ZERO] * m for r in self.gram]
        rows += [[ZERO] * n + list(r) for r in other.gram]
        return BilinearForm(tuple(tuple(r) for r in rows), self.symmetry)


def difference_form(V: "CKObject", W: "CKObject") -> BilinearForm:
    """The form ``{(v,w),(v',w')} = {v,v'} - {w,w'}`` on ``V (+) W``."""
    if V.form is None or W.form is None:
        raise ValueError("difference form needs objects carrying a bilinear form")
    if V.form.symmetry is not W.form.symmetry:
        raise ValueError("symmetry tags differ")
    return V.form.direct_sum(W.form.scaled(-1))


class Category(enum.Enum):
    GA = "GA"
    GD = "GD"
    A = "A"
    B = "B"
    C = "C"
    D = "D"

    @property
    def isotropic(self) -> bool:
        return self in (Category.GD, Category.B, Category.C, Category.D)


@dataclass(frozen=True)
class CKObject:
    """An object of one of the categories; ``pairs`` is a hyperbolic basis.

    ``pairs[k] = (p, q)`` are coordinate indices with ``{p, q} = 1``; the
    optional ``odd`` index carries ``{u, u} = 1`` for category B.  For D
    objects ``plus`` is the stored representative of the chosen component.
    """

    category: Category
    dim: int
    form: Optional[BilinearForm] = None
    pairs: Tuple[Tuple[int, int], ...] = ()
    odd: Optional[int] = None
    plus: Optional[Subspace] = None

    def __post_init__(self):
        cat = self.category
        if cat.isotropic and self.form is None:
            raise ValueError(f"category {cat.value} objects need a form")
        if self.form is not None and self.form.dim != self.dim:
            raise ValueError("form size does not match the dimension")
        if cat in (Category.GD, Category.D, Category.C) and self.dim % 2:
            raise ValueError(f"category {cat.value} objects are even-dimensional")
        if cat is Category.B and self.dim % 2 == 0:
            raise ValueError("category B objects are odd-dimensional")
        if cat is Category.C and self.form.symmetry is not Symmetry.SKEW:
            raise ValueError("category C objects carry a skew form")
        if cat in (Category.GD, Category.D, Category.B) and self.form.symmetry is not Symmetry.SYMMETRIC:
            raise ValueError(f"category {cat.value} objects carry a symmetric form")
        if cat is Category.D:
            if self.plus is None or not is_maximal_isotropic(self.plus, self.form):
                raise ValueError("a D object needs a maximal isotropic component representative")

    @property
    def rank(self) -> int:
        return len(self.pairs)

    def plus_space(self) -> Subspace:
        """The isotropic subspace spanned by the first vector of every pair."""
        return Subspace.coordinate(self.dim, (p for p, _ in self.pairs))

    def minus_space(self) -> Subspace:
        return Subspace.coordinate(self.dim, (q for _, q in self.pairs))


def _hyperbolic_gram(n: int, skew: bool, odd: bool) -> Tuple[List[List[CyclotomicScalar]], List[Tuple[int, int]], Optional[int]]:
    off = 1 if odd else 0
    N = 2 * n + off
    g = [[ZERO] * N for _ in range(N)]
    pairs = []
    if odd:
        g[0][0] = ONE
    for k in range(n):
        p, q = off + 2 * k, off + 2 * k + 1
        g[p][q] = ONE
        g[q][p] = -ONE if skew else ONE
        pairs.append((p, q))
    return g, pairs, (0 if odd else None)


def standard_object(category: Union[Category, str], n: int) -> CKObject:
    """The rank-``n`` object used by the ordered categories.

    Dimensions: ``n + 1`` for A, ``2n`` for C, D and GD, ``2n + 1`` for B,
    and ``n`` for GA.
    """
    cat = Category(category)
    if n < 0:
        raise ValueError("rank must be non-negative")
    if cat is Category.A:
        return CKObject(cat, n + 1)
    if cat is Category.GA:
        return CKObject(cat, n)
    skew = cat is Category.C
    odd = cat is Category.B
    g, pairs, u = _hyperbolic_gram(n, skew, odd)
    form = BilinearForm.make(g, Symmetry.SKEW if skew else Symmetry.SYMMETRIC)
    N = len(g)
    plus = Subspace.coordinate(N, (p for p, _ in pairs)) if cat is Category.D else None
    return CKObject(cat, N, form, tuple(pairs), u, plus)


# ---------------------------------------------------------------------------
# Linear relations
# ---------------------------------------------------------------------------

class _Null:
    """The formal null morphism; absorbing under composition."""

    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self) -> str:
        return "null"

    def __bool__(self) -> bool:
        return False


NULL = _Null()


class NullMorphism(ValueError):
    """Raised when an attribute is requested of the null morphism."""


@dataclass(frozen=True)
class LinearRelation:
    source_dim: int
    target_dim: int
    space: Subspace

    def __post_init__(self):
        if self.space.ambient_dim != self.source_dim + self.target_dim:
            raise ValueError("relation subspace has the wrong ambient dimension")

    @property
    def dim(self) -> int:
        return self.space.dim

    def __repr__(self) -> str:
        return f"LinearRelation({self.source_dim}->{self.target_dim}, dim={self.dim})"

    # -- constructors -----------------------------------------------------------------
    @classmethod
    def from_pairs(cls, source_dim: int, target_dim: int,
                   pairs: Iterable[Tuple[SparseVec, SparseVec]]) -> "LinearRelation":
        vecs = []
        for v, w in pairs:
            x = dict(v)
            for k, c in w.items():
                x[source_dim + k] = c
            vecs.append({k: c for k, c in x.items() if c})
        return cls(source_dim, target_dim, Subspace(source_dim + target_dim, vecs))

    @classmethod
    def graph(cls, matrix: Sequence[Sequence]) -> "LinearRelation":
        """Graph ``{(x, Ax)}`` of a ``target x source`` matrix."""
        rows = len(matrix)
        cols = len(matrix[0]) if rows else 0
        pairs = []
        for j in range(cols):
            w = {i: scalar(matrix[i][j]) for i in range(rows) if scalar(matrix[i][j])}
            pairs.append(({j: ONE}, w))
        return cls.from_pairs(cols, rows, pairs)

    @classmethod
    def identity(cls, dim: int) -> "LinearRelation":
        return cls.from_pairs(dim, dim, (({k: ONE}, {k: ONE}) for k in range(dim)))

    @classmethod
    def direct(cls, left: Subspace, right: Subspace) -> "LinearRelation":
        """The product relation ``left (+) right``."""
        a, b = left.ambient_dim, right.ambient_dim
        vecs = list(left.basis())
        vecs += [{a + k: c for k, c in v.items()} for v in right.basis()]
        return cls(a, b, Subspace(a + b, vecs))

    # -- pieces ---------------------------------------------------------------------------
    def pairs(self) -> List[Tuple[SparseVec, SparseVec]]:
        a = self.source_dim
        out = []
        for v in self.space.basis():
            out.append(({k: c for k, c in v.items() if k < a},
                        {k - a: c for k, c in v.items() if k >= a}))
        return out

    def to_json(self) -> dict:
        return {
            "source_dim": self.source_dim,
            "target_dim": self.target_dim,
            "basis": [[str(x) for x in row] for row in self.space.dense()],
        }


Morphism = Union[LinearRelation, _Null]


def relation_from_json(data) -> Morphism:
    if data == "null" or data is None:
        return NULL
    a, b = int(data["source_dim"]), int(data["target_dim"])
    rows = data.get("basis", [])
    vecs = []
    for r in rows:
        if len(r) != a + b:
            raise ValueError("basis row has the wrong length")
        vecs.append({j: s for j, s in ((j, parse_scalar(str(x))) for j, x in enumerate(r)) if s})
    return LinearRelation(a, b, Subspace(a + b, vecs))


def relation_to_json(P: Morphism):
    return "null" if P is NULL else P.to_json()


def _require(P: Morphism) -> LinearRelation:
    if P is NULL:
        raise NullMorphism("operation undefined on the null morphism")
    return P


def rel_kernel(P: Morphism) -> Subspace:
    """``{v : (v, 0) in P}``."""
    P = _require(P)
    a = P.source_dim
    rest = P.space.intersect(Subspace.coordinate(P.space.ambient_dim, range(a)))
    return rest.image(range(a), 0, a)


def rel_indef(P: Morphism) -> Subspace:
    """``{w : (0, w) in P}``."""
    P = _require(P)
    a, b = P.source_dim, P.target_dim
    rest = P.space.intersect(Subspace.coordinate(a + b, range(a, a + b)))
    return rest.image(range(a, a + b), a, b)


def rel_domain(P: Morphism) -> Subspace:
    P = _require(P)
    return P.space.image(range(P.source_dim), 0, P.source_dim)


def rel_image(P: Morphism) -> Subspace:
    P = _require(P)
    a, b = P.source_dim, P.target_dim
    return P.space.image(range(a, a + b), a, b)


def _product(Q: LinearRelation, P: LinearRelation) -> LinearRelation:
    """Set-theoretic product ``{(v, y) : (v, w) in P, (w, y) in Q}``."""
    a, b, c = P.source_dim, P.target_dim, Q.target_dim
    Pb, Qb = P.space.basis(), Q.space.basis()
    eqs: Dict[int, SparseVec] = {}
    for i, v in enumerate(Pb):
        for k, x in v.items():
            if k >= a:
                eqs.setdefault(k - a, {})[(0, i)] = x
    for j, v in enumerate(Qb):
        for k, x in v.items():
            if k < b:
                eqs.setdefault(k, {})[(1, j)] = -x
    unknowns = [(0, i) for i in range(len(Pb))] + [(1, j) for j in range(len(Qb))]
    out = []
    for s in nullspace(eqs.values(), unknowns):
        vec: SparseVec = {}
        for (side, i), x in s.items():
            if side == 0:
                axpy(vec, x, {k: y for k, y in Pb[i].items() if k < a})
            else:
                axpy(vec, x, {a + k - b: y for k, y in Qb[i].items() if k >= b})
        if vec:
            out.append(vec)
    return LinearRelation(a, c, Subspace(a + c, out))


def _check_chain(Q: Morphism, P: Morphism, mid: Optional[int] = None) -> None:
    if P is not NULL and Q is not NULL and P.target_dim != Q.source_dim:
        raise ValueError(f"cannot compose: target dim {P.target_dim} != source dim {Q.source_dim}")


def kernel_condition(Q: LinearRelation, P: LinearRelation) -> bool:
    """``ker Q  /\\  Indef P = 0``."""
    return rel_kernel(Q).intersect(rel_indef(P)).dim == 0


def image_condition(Q: LinearRelation, P: LinearRelation) -> bool:
    """``im P + D(Q) = W``."""
    return (rel_image(P) + rel_domain(Q)).dim == P.target_dim


def compose_GA(Q: Morphism, P: Morphism) -> Morphism:
    """``QP`` in GA: null unless both the kernel and the image conditions hold."""
    _check_chain(Q, P)
    if P is NULL or Q is NULL:
        return NULL
    if not kernel_condition(Q, P) or not image_condition(Q, P):
        return NULL
    return _product(Q, P)


def compose_GD(Q: Morphism, P: Morphism) -> Morphism:
    """``QP`` in GD (and B, C, D): null exactly when the kernel condition fails."""
    _check_chain(Q, P)
    if P is NULL or Q is NULL:
        return NULL
    if not kernel_condition(Q, P):
        return NULL
    return _product(Q, P)


def compose(category: Union[Category, str], Q: Morphism, P: Morphism) -> Morphism:
    cat = Category(category)
    if cat in (Category.GA, Category.A):
        return compose_GA(Q, P)
    return compose_GD(Q, P)


def compose_chain(category, *morphisms: Morphism) -> Morphism:
    """``compose_chain(cat, R, Q, P) = R(QP)``, applied right to left."""
    if not morphisms:
        raise ValueError("empty chain")
    acc = morphisms[-1]
    for M in reversed(morphisms[:-1]):
        acc = compose(category, M, acc)
    return acc


def dual_relation(P: Morphism) -> Morphism:
    """``P' = Ann(P^0)`` with ``P^0 = {(v, -w)}``, in dual coordinates."""
    if P is NULL:
        return NULL
    a = P.source_dim
    P0 = Subspace(P.space.ambient_dim,
                  ({k: (c if k < a else -c) for k, c in v.items()} for v in P.space.basis()))
    return LinearRelation(a, P.target_dim, P0.annihilator())


def adjoint_relation(P: Morphism) -> Morphism:
    """The transposed relation ``{(w, v) : (v, w) in P}``."""
    if P is NULL:
        return NULL
    return LinearRelation.from_pairs(P.target_dim, P.source_dim, ((w, v) for v, w in P.pairs()))


# ---------------------------------------------------------------------------
# Isotropy and Grassmannian components
# ---------------------------------------------------------------------------

def is_isotropic(S: Subspace, F: BilinearForm) -> bool:
    if S.ambient_dim != F.dim:
        raise ValueError("ambient dimension does not match the form")
    B = S.basis()
    return all(not F(x, y) for i, x in enumerate(B) for y in B[i:])


def is_maximal_isotropic(S: Subspace, F: BilinearForm) -> bool:
    return S.dim == F.dim // 2 and is_isotropic(S, F)


class Parity(enum.Enum):
    EVEN = 0
    ODD = 1

    def __add__(self, other: "Parity") -> "Parity":
        return Parity((self.value + other.value) % 2)


class NotIsotropic(ValueError):
    pass


def grassmann_component(H1: Subspace, H2: Subspace, F: BilinearForm) -> Parity:
    """EVEN iff ``H1`` and ``H2`` lie in the same component of the Grassmannian."""
    if F.dim % 2:
        raise ValueError("component parity needs an even-dimensional space")
    for H in (H1, H2):
        if not is_maximal_isotropic(H, F):
            raise NotIsotropic("argument is not maximal isotropic")
    return Parity((H1.dim - H1.intersect(H2).dim) % 2)


def relation_form(category: Category, V: CKObject, W: CKObject) -> BilinearForm:
    return difference_form(V, W)


def is_morphism(category: Union[Category, str], P: Morphism, V: CKObject, W: CKObject) -> bool:
    """Membership of ``P`` in ``Mor(V, W)``; null always belongs."""
    cat = Category(category)
    if P is NULL:
        return True
    if P.source_dim != V.dim or P.target_dim != W.dim:
        return False
    if not cat.isotropic:
        if cat is Category.A:
            # graphs of operators
            return rel_domain(P).dim == V.dim and rel_indef(P).dim == 0
        return True
    F = difference_form(V, W)
    if not is_maximal_isotropic(P.space, F):
        return False
    if cat is Category.D:
        return is_D_morphism(P, V, W)
    return True


def witt_basis(obj: CKObject) -> List[Tuple[SparseVec, SparseVec]]:
    """Hyperbolic pairs ``(p, q)`` with ``{p, q} = 1`` spanning a maximal split part."""
    return [({p: ONE}, {q: ONE}) for p, q in obj.pairs]


def isotropic_complement(obj: CKObject, H: Subspace) -> Subspace:
    """A deterministic maximal isotropic complement of ``H``.

    Coordinate Lagrangians ``span(q_k for k in S, p_k otherwise)`` are tried
    in order of ``|S|`` and then lexicographically; one of them is always
    transversal to a given maximal isotropic subspace.
    """
    if obj.form is None or not is_maximal_isotropic(H, obj.form):
        raise NotIsotropic("complement needs a maximal isotropic subspace")
    if obj.odd is not None:
        raise ValueError("isotropic complements are taken in even-dimensional spaces")
    r = len(obj.pairs)
    for size in range(r + 1):
        for S in itertools.combinations(range(r), size):
            keys = [obj.pairs[k][1] if k in S else obj.pairs[k][0] for k in range(r)]
            L = Subspace.coordinate(obj.dim, keys)
            if H.intersect(L).dim == 0:
                return L
    raise AssertionError("no transversal coordinate Lagrangian; form is not split")


def minus_of(obj: CKObject) -> Subspace:
    if obj.plus is None:
        raise ValueError("object has no component representative")
    return isotropic_complement(obj, obj.plus)


def is_D_morphism(P: Morphism, V: CKObject, W: CKObject) -> bool:
    """Non-null, maximal isotropic and in the component of ``V+ (+) W-``."""
    if P is NULL:
        return False
    F = difference_form(V, W)
    if not is_maximal_isotropic(P.space, F):
        return False
    ref = LinearRelation.direct(V.plus, minus_of(W))
    return grassmann_component(P.space, ref.space, F) is Parity.EVEN


# ---------------------------------------------------------------------------
# Random morphisms
# ---------------------------------------------------------------------------

def random_scalar(rng: random.Random, gaussian: bool = True, bound: int = 3,
                  zero_prob: float = 0.25) -> CyclotomicScalar:
    if rng.random() < zero_prob:
        return ZERO
    re_ = rng.randint(-bound, bound)
    im = rng.randint(-bound, bound) if gaussian and rng.random() < 0.5 else 0
    return CyclotomicScalar(re_, im)


def random_subspace(rng: random.Random, ambient: int, dim: Optional[int] = None,
                    **kw) -> Subspace:
    if dim is None:
        dim = rng.randint(0, ambient)
    while True:
        vecs = []
        for _ in range(dim):
            v = {j: random_scalar(rng, **kw) for j in range(ambient)}
            vecs.append({j: c for j, c in v.items() if c})
        S = Subspace(ambient, vecs)
        if S.dim == dim:
            return S


def random_relation(rng: random.Random, source_dim: int, target_dim: int,
                    dim: Optional[int] = None, **kw) -> LinearRelation:
    return LinearRelation(source_dim, target_dim,
                          random_subspace(rng, source_dim + target_dim, dim, **kw))


def _relation_pairs(V: CKObject, W: CKObject) -> Tuple[List[Tuple[SparseVec, SparseVec]], bool]:
    """Hyperbolic pairs of ``V (+) W`` for the difference form."""
    a = V.dim
    skew = V.form.symmetry is Symmetry.SKEW
    pairs = [({p: ONE}, {q: ONE}) for p, q in V.pairs]
    pairs += [({a + p: ONE}, {a + q: -ONE}) for p, q in W.pairs]
    if V.odd is not None and W.odd is not None:
        u, u2 = V.odd, a + W.odd
        pairs.append(({u: ONE, u2: ONE}, {u: scalar("1/2"), u2: scalar("-1/2")}))
    elif V.odd is not None or W.odd is not None:
        raise ValueError("odd objects combine only with odd objects")
    return pairs, skew


def random_lagrangian(rng: random.Random, V: CKObject, W: CKObject,
                      swap_prob: float = 0.5, **kw) -> LinearRelation:
    """A random maximal isotropic subspace of ``V (+) W``.

    Swapping some hyperbolic pairs reaches every Bruhat cell; the
    remaining freedom is the graph of a skew (symmetric form) or symmetric
    (skew form) matrix from the p-span to the q-span.
    """
    pairs, skew = _relation_pairs(V, W)
    ps, qs = [], []
    for p, q in pairs:
        if rng.random() < swap_prob:
            # (q, p) is hyperbolic for a symmetric form, (q, -p) for a skew one.
            ps.append(q)
            qs.append({k: -c for k, c in p.items()} if skew else p)
        else:
            ps.append(p)
            qs.append(q)
    r = len(ps)
    A = [[ZERO] * r for _ in range(r)]
    for i in range(r):
        for j in range(i, r):
            if i == j and not skew:
                continue
            c = random_scalar(rng, **kw)
            A[i][j] = c
            A[j][i] = c if skew else -c
    vecs = []
    for i in range(r):
        v = dict(ps[i])
        for j in range(r):
            if A[i][j]:
                axpy(v, A[i][j], qs[j])
        vecs.append(v)
    return LinearRelation(V.dim, W.dim, Subspace(V.dim + W.dim, vecs))


def random_D_morphism(rng: random.Random, V: CKObject, W: CKObject, **kw) -> LinearRelation:
    while True:
        P = random_lagrangian(rng, V, W, **kw)
        if is_D_morphism(P, V, W):
            return P


# ---------------------------------------------------------------------------
# Ordered categories
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class OrderedStep:
    """``lam: V_n -> V_{n+1}`` and ``mu: V_{n+1} -> V_n``."""

    category: Category
    n: int
    lam: LinearRelation
    mu: LinearRelation


def _embedding_graph(small: CKObject, big: CKObject) -> List[Tuple[SparseVec, SparseVec]]:
    return [({k: ONE}, {k: ONE}) for k in range(small.dim)]


def ordered_data(category: Union[Category, str], n: int) -> OrderedStep:
    """The pair ``(lambda_{n,n+1}, mu_{n+1,n})`` for the chosen family.

    A: coordinate inclusion and projection.  B, C, D: ``S (+) l`` and the
    transpose of ``S (+) l'`` where ``S`` is the graph of the natural
    embedding and ``l, l'`` are the two coordinate lines of the appended
    plane.  For D the two are assigned to whichever hom-set component each
    lies in.
    """
    cat = Category(category)
    if n < 0:
        raise ValueError("rank must be non-negative")
    if cat in (Category.GA, Category.GD):
        raise ValueError("GA and GD carry no ordered structure here")
    V, Vn = standard_object(cat, n), standard_object(cat, n + 1)
    a, b = V.dim, Vn.dim
    if cat is Category.A:
        lam = LinearRelation.from_pairs(a, b, _embedding_graph(V, Vn))
        mu = LinearRelation.from_pairs(b, a, (({k: ONE}, {k: ONE} if k < a else {}) for k in range(b)))
        return OrderedStep(cat, n, lam, mu)
    S = _embedding_graph(V, Vn)
    p, q = b - 2, b - 1  # the appended hyperbolic pair
    H = LinearRelation.from_pairs(a, b, S + [({}, {q: ONE})])
    H2 = LinearRelation.from_pairs(a, b, S + [({}, {p: ONE})])
    if cat is Category.D:
        if not is_D_morphism(H, V, Vn):
            H, H2 = H2, H
        mu = adjoint_relation(H2)
        if not is_D_morphism(H, V, Vn) or not is_D_morphism(mu, Vn, V):
            raise AssertionError("H and H' do not split across the two hom-set components")
        return OrderedStep(cat, n, H, mu)
    return OrderedStep(cat, n, H, adjoint_relation(H2))


def rank_object(category: Union[Category, str], n: int) -> CKObject:
    return standard_object(category, n)


def lam(category, sigma: int, tau: int) -> LinearRelation:
    """``lambda_{sigma,tau} = lambda_{tau-1,tau} ... lambda_{sigma,sigma+1}``."""
    if not sigma < tau:
        raise ValueError("need sigma < tau")
    cat = Category(category)
    acc: Morphism = ordered_data(cat, sigma).lam
    for k in range(sigma + 1, tau):
        acc = compose(cat, ordered_data(cat, k).lam, acc)
    return acc


def mu(category, tau: int, sigma: int) -> LinearRelation:
    """``mu_{tau,sigma} = mu_{sigma+1,sigma} ... mu_{tau,tau-1}``."""
    if not sigma < tau:
        raise ValueError("need sigma < tau")
    cat = Category(category)
    acc: Morphism = ordered_data(cat, tau - 1).mu
    for k in range(tau - 2, sigma - 1, -1):
        acc = compose(cat, ordered_data(cat, k).mu, acc)
    return acc


def theta(category, tau: int, sigma: int) -> Morphism:
    """The idempotent ``lambda_{sigma,tau} mu_{tau,sigma}`` in ``End(V_tau)``."""
    if not sigma < tau:
        raise ValueError("theta needs sigma < tau")
    cat = Category(category)
    return compose(cat, lam(cat, sigma, tau), mu(cat, tau, sigma))


def end_embedding(category, P: Morphism, alpha: int, beta: int) -> Morphism:
    """``U_alpha^beta(P) = lambda_{alpha,beta} P mu_{beta,alpha}``."""
    if not alpha < beta:
        raise ValueError("end_embedding needs alpha < beta")
    cat = Category(category)
    d = standard_object(cat, alpha).dim
    if P is not NULL and (P.source_dim != d or P.target_dim != d):
        raise ValueError(f"P is not an endomorphism of the rank-{alpha} object")
    return compose_chain(cat, lam(cat, alpha, beta), P, mu(cat, beta, alpha))


def random_endomorphism(rng: random.Random, category, n: int, **kw) -> LinearRelation:
    """A random non-null endomorphism of the rank-``n`` standard object."""
    cat = Category(category)
    V = standard_object(cat, n)
    if cat is Category.A:
        while True:
            M = [[random_scalar(rng, **kw) for _ in range(V.dim)] for _ in range(V.dim)]
            if any(x for r in M for x in r):
                return LinearRelation.graph(M)
    if cat is Category.GA:
        return random_relation(rng, V.dim, V.dim, **kw)
    if cat is Category.D:
        return random_D_morphism(rng, V, V, **kw)
    return random_lagrangian(rng, V, V, **kw)
