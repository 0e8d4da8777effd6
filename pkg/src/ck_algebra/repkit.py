"""Spin and Berezin operators and representations of the relation categories.

Conventions
-----------
* For an object with hyperbolic pairs ``(e_k+, e_k-)`` the Clifford action
  on ``Lambda(V+)`` is creation by the ``e+`` part plus contraction by the
  ``e-`` part, so that ``a(v)a(w) + a(w)a(v) = {v, w}``.
* A kernel ``K(xi, etabar)`` for an operator ``Lambda_n -> Lambda_m`` lives
  in the Grassmann algebra on ``m + n`` generators, ``xi`` first.  The
  kernel monomial ``xi^A etabar^B`` sends the basis monomial ``eta^B`` to
  ``kernel_sign(A, B) xi^A`` and kills every other basis monomial.  With
  this pairing ``exp(sum xi_k etabar_k)`` is the identity kernel.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass, field
from math import comb
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

from .grassmann import (
    GrassmannElement, Operator, contraction, creation, graded_indices,
    grassmann_exp, popcount, reversal_sign,
)
from .linalg import Echelon, SparseVec, nullspace
from .relcat import (
    NULL, BilinearForm, Category, CKObject, LinearRelation, Morphism, Parity, Subspace,
    Symmetry, compose, difference_form, dual_relation, grassmann_component, rel_domain, rel_indef, standard_object, theta, end_embedding,
)
from .exact_scalars import ONE, SQRT2, ZERO, CyclotomicScalar, scalar

DEFAULT_MAX_DIM = 1 << 10


def max_operator_dim() -> int:
    """Cap on the side of any Grassmann operator, from ``CK_ALGEBRA_MAX_DIM``."""
    raw = os.environ.get("CK_ALGEBRA_MAX_DIM")
    if raw is None:
        return DEFAULT_MAX_DIM
    try:
        val = int(raw)
    except ValueError:
        raise ValueError(f"CK_ALGEBRA_MAX_DIM must be an integer, got {raw!r}") from None
    if val <= 0:
        raise ValueError("CK_ALGEBRA_MAX_DIM must be positive")
    return val


class TooLarge(ValueError):
    pass


def _check_size(*sides: int) -> None:
    cap = max_operator_dim()
    for s in sides:
        if s > cap:
            raise TooLarge(f"operator side {s} exceeds the configured cap {cap}")


# ---------------------------------------------------------------------------
# Clifford action
# ---------------------------------------------------------------------------

def _split_coords(obj: CKObject, v: SparseVec) -> Tuple[List[CyclotomicScalar], List[CyclotomicScalar], CyclotomicScalar]:
    plus = [v.get(p, ZERO) for p, _ in obj.pairs]
    minus = [v.get(q, ZERO) for _, q in obj.pairs]
    odd = v.get(obj.odd, ZERO) if obj.odd is not None else ZERO
    covered = {k for pq in obj.pairs for k in pq}
    if obj.odd is not None:
        covered.add(obj.odd)
    if any(k not in covered for k in v):
        raise ValueError("vector has coordinates outside the hyperbolic basis")
    return plus, minus, odd


def parity_operator(n: int) -> Operator:
    """``(-1)^degree`` on ``Lambda_n``."""
    return Operator(1 << n, 1 << n, {m: {m: -ONE if popcount(m) & 1 else ONE} for m in range(1 << n)})


def clifford_action(obj: CKObject, v: SparseVec) -> Operator:
    """``a(v)`` on ``Lambda(V+)``.

    On a B object the odd coordinate ``s`` acts as ``s / sqrt 2`` times the
    parity operator, which keeps ``a(v)^2 = {v, v}/2`` for every vector.
    """
    n = obj.rank
    _check_size(1 << n)
    plus, minus, s = _split_coords(obj, v)
    if s:
        op = parity_operator(n).scale(s * SQRT2.inv())
    else:
        op = Operator.zero(1 << n, 1 << n)
    for k in range(n):
        if plus[k]:
            op = op + creation(n, k).scale(plus[k])
        if minus[k]:
            op = op + contraction(n, k).scale(minus[k])
    return op


# ---------------------------------------------------------------------------
# Intertwiner solving
# ---------------------------------------------------------------------------

class SpinSolveError(ValueError):
    """The intertwining system does not have a one-dimensional solution space."""


@dataclass(frozen=True)
class SpinOperator:
    """Normalized intertwiner (first nonzero entry in row-major order is 1)."""

    matrix: Operator
    solution_dim: int

    @property
    def shape(self) -> Tuple[int, int]:
        return self.matrix.rows, self.matrix.cols

    def to_json(self) -> dict:
        return {
            "rows": self.matrix.rows,
            "cols": self.matrix.cols,
            "matrix": [[str(x) for x in r] for r in self.matrix.dense()],
        }


def intertwiner_solutions(pairs: Sequence[Tuple[Operator, Operator]], rows: int, cols: int,
                          expect: Optional[int] = None) -> List[Operator]:
    """Basis of ``{X : B X = X A for every (A, B) in pairs}``, ``X`` of size rows x cols.

    When ``expect`` is given, elimination stops once the rank allows at most
    ``expect`` solutions; every equation is then re-checked on the result.
    """
    N = rows * cols
    stop = N - expect if expect is not None else None

    def equations():
        for A, B in pairs:
            # (B X - X A)[r, c] = sum_k B[r, k] X[k, c] - sum_k X[r, k] A[k, c]
            At = {}
            for c, col in A.data.items():
                for k, v in col.items():
                    At.setdefault(c, []).append((k, v))
            Bt = {}
            for k, col in B.data.items():
                for r, v in col.items():
                    Bt.setdefault(r, []).append((k, v))
            for r in range(rows):
                brow = Bt.get(r, ())
                for c in range(cols):
                    eq: SparseVec = {}
                    for k, v in brow:
                        key = k * cols + c
                        eq[key] = eq.get(key, ZERO) + v
                    for k, v in At.get(c, ()):
                        key = r * cols + k
                        eq[key] = eq.get(key, ZERO) - v
                    eq = {k: v for k, v in eq.items() if v}
                    if eq:
                        yield eq

    sols = nullspace(equations(), list(range(N)), stop_rank=stop)
    ops = []
    for s in sols:
        data: Dict[int, SparseVec] = {}
        for key, v in s.items():
            r, c = divmod(key, cols)
            data.setdefault(c, {})[r] = v
        ops.append(Operator(rows, cols, data))
    if stop is not None:
        ops = [X for X in ops if all(B @ X == X @ A for A, B in pairs)]
        if len(ops) > 1:
            # candidates were a superset of solutions; recover the true span
            ops = _true_solution_span(ops, pairs)
    return ops


def _true_solution_span(cands: List[Operator], pairs) -> List[Operator]:
    # X = sum t_i C_i must satisfy the equations; solve for t.
    eqs: Dict[Tuple[int, int, int], SparseVec] = {}
    for i, C in enumerate(cands):
        for j, (A, B) in enumerate(pairs):
            D = (B @ C) - (C @ A)
            for c, col in D.data.items():
                for r, v in col.items():
                    eqs.setdefault((j, r, c), {})[i] = v
    coeffs = nullspace(eqs.values(), list(range(len(cands))))
    out = []
    for t in coeffs:
        X = Operator.zero(cands[0].rows, cands[0].cols)
        for i, v in t.items():
            X = X + cands[i].scale(v)
        out.append(X)
    return out


def _unique_solution(pairs, rows: int, cols: int) -> SpinOperator:
    _check_size(rows, cols)
    sols = intertwiner_solutions(pairs, rows, cols, expect=1)
    if len(sols) != 1:
        raise SpinSolveError(f"intertwining space has dimension {len(sols)}, expected 1")
    return SpinOperator(sols[0].normalized(), 1)


def spin_operator(P: Morphism, V: CKObject, W: CKObject) -> Optional[SpinOperator]:
    """``Spin(P): Lambda(V+) -> Lambda(W+)`` with ``a(w) Spin(P) = Spin(P) a(v)`` on P.

    Returns None for the null morphism, whose image is the zero operator.
    """
    if P is NULL:
        return None
    if P.source_dim != V.dim or P.target_dim != W.dim:
        raise ValueError("morphism does not match the objects")
    pairs = [(clifford_action(V, v), clifford_action(W, w)) for v, w in P.pairs()]
    return _unique_solution(pairs, 1 << W.rank, 1 << V.rank)


def b_reference(V: CKObject, W: CKObject) -> LinearRelation:
    """``V+ (+) W- (+) span(u, u')``: the B morphism marking the untwisted component."""
    pairs = [({p: ONE}, {}) for p, _ in V.pairs]
    pairs += [({}, {q: ONE}) for _, q in W.pairs]
    pairs.append(({V.odd: ONE}, {W.odd: ONE}))
    return LinearRelation.from_pairs(V.dim, W.dim, pairs)


def b_twist(P: LinearRelation, V: CKObject, W: CKObject) -> int:
    """+1 if ``P`` lies in the component of :func:`b_reference`, else -1."""
    par = grassmann_component(P.space, b_reference(V, W).space, difference_form(V, W))
    return 1 if par is Parity.EVEN else -1


def spin_B(P: Morphism, V: CKObject, W: CKObject) -> Optional[SpinOperator]:
    """The odd analogue: ``spin_B(P) a(v~) = t a(w~) spin_B(P)`` on ``P``.

    ``t = b_twist(P)``.  Morphisms outside the reference component are
    treated as ``-1_W`` composed with a reference-component morphism, which
    is what keeps ``P -> spin_B(P)`` projectively multiplicative.
    """
    if V.category is not Category.B or W.category is not Category.B:
        raise ValueError("spin_B needs category B objects")
    if P is NULL:
        return None
    if P.source_dim != V.dim or P.target_dim != W.dim:
        raise ValueError("morphism does not match the objects")
    t = b_twist(P, V, W)
    pairs = [(clifford_action(V, v), clifford_action(W, w).scale(t)) for v, w in P.pairs()]
    return _unique_solution(pairs, 1 << W.rank, 1 << V.rank)


def spin_B_matrix(P: Morphism, V: CKObject, W: CKObject) -> Operator:
    S = spin_B(P, V, W)
    return Operator.zero(1 << W.rank, 1 << V.rank) if S is None else S.matrix


def spin_matrix(P: Morphism, V: CKObject, W: CKObject) -> Operator:
    S = spin_operator(P, V, W)
    return Operator.zero(1 << W.rank, 1 << V.rank) if S is None else S.matrix


@dataclass(frozen=True)
class FunctorialityCheck:
    product_null: bool
    ratio: Optional[CyclotomicScalar]

    @property
    def ok(self) -> bool:
        if self.product_null:
            return self.ratio is not None and not self.ratio
        return self.ratio is not None and bool(self.ratio)


def check_projective(category, Q: Morphism, P: Morphism, V: CKObject, W: CKObject, Y: CKObject,
                     functor=spin_matrix) -> FunctorialityCheck:
    """Compare ``F(Q) F(P)`` with ``F(QP)``: a nonzero multiple, or exactly 0 for null."""
    QP = compose(category, Q, P)
    lhs = functor(Q, W, Y) @ functor(P, V, W)
    if QP is NULL:
        return FunctorialityCheck(True, ZERO if lhs.is_zero() else None)
    return FunctorialityCheck(False, lhs.ratio_to(functor(QP, V, Y)))


def parity_split(op: Operator) -> Tuple[bool, bool]:
    """(preserves parity, reverses parity) for an operator between Grassmann algebras."""
    same = all(popcount(r) % 2 == popcount(c) % 2 for c, col in op.data.items() for r in col)
    flip = all(popcount(r) % 2 != popcount(c) % 2 for c, col in op.data.items() for r in col)
    return same, flip


def parity_blocks(op: Operator) -> Tuple[Operator, Operator]:
    """Restrictions to even and odd subspaces (the two half-spin pieces)."""
    ev_r = [x for x in range(op.rows) if not popcount(x) & 1]
    od_r = [x for x in range(op.rows) if popcount(x) & 1]
    ev_c = [x for x in range(op.cols) if not popcount(x) & 1]
    od_c = [x for x in range(op.cols) if popcount(x) & 1]
    return op.restrict(ev_r, ev_c), op.restrict(od_r, od_c)


# ---------------------------------------------------------------------------
# Berezin kernels
# ---------------------------------------------------------------------------

def kernel_sign(A: int, B: int) -> int:
    """Sign relating ``X[A, B]`` to the coefficient of ``xi^A etabar^B``.

    ``(-1)^(|B|(|B|-1)/2) (-1)^(|B|(|A|+1))``: the reversal pairing with
    ``etabar`` moved in front of ``xi`` and negated.  The identity has kernel
    ``exp(sum xi_k etabar_k)``, and every spin operator (B included) has a
    kernel of generalized Berezin form.
    """
    s = reversal_sign(B)
    return -s if popcount(B) * (popcount(A) + 1) & 1 else s


def kernel_to_operator(K: GrassmannElement, n: int, m: int) -> Operator:
    """Operator ``Lambda_n -> Lambda_m`` of a kernel on ``m + n`` generators."""
    if K.n_vars != m + n:
        raise ValueError("kernel has the wrong number of generators")
    _check_size(1 << m, 1 << n)
    lowmask = (1 << m) - 1
    data: Dict[int, SparseVec] = {}
    for mono, c in K.terms.items():
        A, B = mono & lowmask, mono >> m
        s = c if kernel_sign(A, B) > 0 else -c
        col = data.setdefault(B, {})
        col[A] = col.get(A, ZERO) + s
    return Operator(1 << m, 1 << n, data)


def operator_to_kernel(op: Operator) -> GrassmannElement:
    m, n = op.rows.bit_length() - 1, op.cols.bit_length() - 1
    terms = {}
    for B, col in op.data.items():
        for A, v in col.items():
            terms[A | (B << m)] = v if kernel_sign(A, B) > 0 else -v
    return GrassmannElement(m + n, terms)


@dataclass
class BerezinKernel:
    """``lam * prod(factors) * exp(1/2 (xi etabar 1) Z (xi etabar 1)^t)``.

    ``Z = [[K, L, p^t], [-L^t, M, q^t], [p, q, 0]]``.  Only the skew part of
    the Grassmann block contributes, so ``K`` and ``M`` are required skew.
    """

    m: int
    n: int
    lam: CyclotomicScalar = ONE
    factors: List[GrassmannElement] = field(default_factory=list)
    K: Optional[List[List]] = None
    L: Optional[List[List]] = None
    M: Optional[List[List]] = None
    p: Optional[List] = None
    q: Optional[List] = None

    def __post_init__(self):
        m, n = self.m, self.n
        z = lambda r, c: [[ZERO] * c for _ in range(r)]
        self.K = [[scalar(x) for x in r] for r in self.K] if self.K is not None else z(m, m)
        self.L = [[scalar(x) for x in r] for r in self.L] if self.L is not None else z(m, n)
        self.M = [[scalar(x) for x in r] for r in self.M] if self.M is not None else z(n, n)
        self.p = [scalar(x) for x in self.p] if self.p is not None else [ZERO] * m
        self.q = [scalar(x) for x in self.q] if self.q is not None else [ZERO] * n
        self.lam = scalar(self.lam)
        shapes = [(self.K, m, m), (self.L, m, n), (self.M, n, n)]
        for mat, r, c in shapes:
            if len(mat) != r or any(len(row) != c for row in mat):
                raise ValueError("Berezin block has the wrong shape")
        if len(self.p) != m or len(self.q) != n:
            raise ValueError("Berezin row vector has the wrong length")
        for mat, d in ((self.K, m), (self.M, n)):
            for i in range(d):
                for j in range(d):
                    if mat[i][j] != -mat[j][i]:
                        raise ValueError("Grassmann blocks K and M must be skew")
        for f in self.factors:
            if f.n_vars != m + n or any(popcount(t) > 1 for t in f.terms):
                raise ValueError("factors must be affine-linear in the m + n kernel variables")

    def exponent(self) -> GrassmannElement:
        N = self.m + self.n
        gen = [GrassmannElement.generator(N, i) for i in range(N)]
        acc = GrassmannElement(N)
        half = scalar("1/2")
        m = self.m
        for i in range(m):
            for j in range(m):
                if self.K[i][j]:
                    acc = acc + gen[i] * gen[j] * (half * self.K[i][j])
            for j in range(self.n):
                if self.L[i][j]:
                    acc = acc + gen[i] * gen[m + j] * self.L[i][j]
            if self.p[i]:
                acc = acc + gen[i] * self.p[i]
        for i in range(self.n):
            for j in range(self.n):
                if self.M[i][j]:
                    acc = acc + gen[m + i] * gen[m + j] * (half * self.M[i][j])
            if self.q[i]:
                acc = acc + gen[m + i] * self.q[i]
        return acc

    def kernel(self) -> GrassmannElement:
        acc = GrassmannElement.one(self.m + self.n) * self.lam
        for f in self.factors:
            acc = acc * f
        return acc * grassmann_exp(self.exponent())


def berezin_operator(k: BerezinKernel) -> Operator:
    return kernel_to_operator(k.kernel(), k.n, k.m)


def affine_product(factors: Sequence[GrassmannElement]) -> GrassmannElement:
    if not factors:
        raise ValueError("need at least one factor")
    acc = GrassmannElement.one(factors[0].n_vars)
    for f in factors:
        acc = acc * f
    return acc


def kernel_from_product(factors: Sequence[GrassmannElement], m: int, n: int) -> BerezinKernel:
    """Exponential presentation of ``prod (1 + nu_i)`` via the pairwise identity.

    ``prod (1 + nu_i) = exp(sum_{i<j} nu_i nu_j) exp(sum nu_i)``.
    """
    N = m + n
    for f in factors:
        if f.n_vars != N or f.constant != ONE or any(popcount(t) > 1 for t in f.terms):
            raise ValueError("factors must have the form 1 + linear")
    c = [[f.terms.get(1 << a, ZERO) for a in range(N)] for f in factors]
    Z = [[ZERO] * N for _ in range(N)]
    for i, j in itertools.combinations(range(len(factors)), 2):
        for a in range(N):
            for b in range(N):
                Z[a][b] = Z[a][b] + c[i][a] * c[j][b] - c[i][b] * c[j][a]
    lin = [sum((c[i][a] for i in range(len(factors))), ZERO) for a in range(N)]
    K = [row[:m] for row in Z[:m]]
    L = [row[m:] for row in Z[:m]]
    M = [row[m:] for row in Z[m:]]
    return BerezinKernel(m, n, ONE, [], K, L, M, lin[:m], lin[m:])


def even_lift(g: GrassmannElement) -> GrassmannElement:
    """``g_even + g_odd * xi_N``, an even element with one extra generator."""
    N = g.n_vars
    top = 1 << N
    return GrassmannElement(N + 1, {(m | top) if popcount(m) & 1 else m: c for m, c in g.terms.items()})


def annihilator_dim(g: GrassmannElement) -> int:
    """Dimension of ``{(x, y) : (sum x_i xi_i + sum y_i d_i) g = 0}``."""
    N = g.n_vars
    gv = g.vector()
    cols = [creation(N, i).apply(gv) for i in range(N)]
    cols += [contraction(N, i).apply(gv) for i in range(N)]
    eqs: Dict[int, SparseVec] = {}
    for j, col in enumerate(cols):
        for key, v in col.items():
            eqs.setdefault(key, {})[j] = v
    return len(nullspace(eqs.values(), list(range(2 * N))))


def is_pure(g: GrassmannElement) -> bool:
    """Nonzero with a maximal (``n_vars``-dimensional) annihilator: a Gaussian
    times linear factors."""
    return bool(g) and annihilator_dim(g) == g.n_vars


def is_generalized_berezin(g: GrassmannElement) -> bool:
    """Product of affine-linear factors times a Gaussian with linear terms.

    Setting an extra generator to 1 turns even pure elements on ``N + 1``
    generators into exactly these, so the test runs on the even lift.
    """
    return is_pure(even_lift(g))


# ---------------------------------------------------------------------------
# The fundamental representation of GA
# ---------------------------------------------------------------------------

def M_functor(dim: int) -> CKObject:
    """``V (+) V'`` with ``{(v1, f1), (v2, f2)} = f1(v2) + f2(v1)``; ``V+ = V``."""
    N = 2 * dim
    g = [[ZERO] * N for _ in range(N)]
    for k in range(dim):
        g[k][dim + k] = ONE
        g[dim + k][k] = ONE
    form = BilinearForm.make(g, Symmetry.SYMMETRIC)
    pairs = tuple((k, dim + k) for k in range(dim))
    return CKObject(Category.GD, N, form, pairs, None, Subspace.coordinate(N, range(dim)))


def M_morphism(P: Morphism) -> Morphism:
    """``P (+) P'`` inside ``(V (+) V') (+) (W (+) W')``."""
    if P is NULL:
        return NULL
    a, b = P.source_dim, P.target_dim
    Pd = dual_relation(P)
    pairs = []
    for v, w in P.pairs():
        pairs.append((dict(v), dict(w)))
    for f, g in Pd.pairs():
        pairs.append(({a + k: c for k, c in f.items()}, {b + k: c for k, c in g.items()}))
    return LinearRelation.from_pairs(2 * a, 2 * b, pairs)


def fundamental_GA(P: Morphism) -> Optional[Operator]:
    """``Lambda(P) = Spin(P (+) P')`` up to scalar; None for null."""
    if P is NULL:
        return None
    S = spin_operator(M_morphism(P), M_functor(P.source_dim), M_functor(P.target_dim))
    return S.matrix


def grading_shift(P: LinearRelation) -> int:
    """``Lambda(P)`` maps ``Lambda^k V`` into ``Lambda^(k + shift) W``."""
    return P.dim - P.source_dim


def exterior_power_matrix(A: Sequence[Sequence], k: int) -> Operator:
    """Classical ``Lambda^k(A)`` in the graded-mask basis (minors of A)."""
    rows = len(A)
    cols = len(A[0]) if rows else 0
    R = graded_indices(rows, k)
    C = graded_indices(cols, k)
    out = [[ZERO] * len(C) for _ in range(len(R))]
    for j, cm in enumerate(C):
        cidx = [i for i in range(cols) if cm >> i & 1]
        for i, rm in enumerate(R):
            ridx = [t for t in range(rows) if rm >> t & 1]
            out[i][j] = _det([[scalar(A[r][c]) for c in cidx] for r in ridx])
    return Operator.from_dense(out) if R and C else Operator.zero(len(R), len(C))


def _det(M: List[List[CyclotomicScalar]]) -> CyclotomicScalar:
    n = len(M)
    if n == 0:
        return ONE
    M = [list(r) for r in M]
    det = ONE
    for c in range(n):
        piv = next((r for r in range(c, n) if M[r][c]), None)
        if piv is None:
            return ZERO
        if piv != c:
            M[c], M[piv] = M[piv], M[c]
            det = -det
        det = det * M[c][c]
        inv = M[c][c].inv()
        for r in range(c + 1, n):
            if M[r][c]:
                f = M[r][c] * inv
                M[r] = [x - f * y for x, y in zip(M[r], M[c])]
    return det


def graph_matrix(P: LinearRelation) -> List[List[CyclotomicScalar]]:
    """Matrix of a relation that is the graph of an operator."""
    if rel_domain(P).dim != P.source_dim or rel_indef(P).dim != 0:
        raise ValueError("relation is not the graph of an operator")
    a, b = P.source_dim, P.target_dim
    out = [[ZERO] * a for _ in range(b)]
    # Reduced echelon form of a graph has rows e_j + (A e_j).
    for v, w in P.pairs():
        (j, c), = v.items()
        if c != ONE:
            raise AssertionError("unexpected echelon form for a graph")
        for i, x in w.items():
            out[i][j] = x
    return out


# ---------------------------------------------------------------------------
# Representations of categories and of endomorphism semigroups
# ---------------------------------------------------------------------------

Action = Callable[[Morphism, int, int], Operator]


@dataclass
class CategoryRep:
    """A (projective) representation: ``dim(rank)`` and ``act(P, source, target)``."""

    category: Category
    name: str
    dim_fn: Callable[[int], int]
    act_fn: Action

    def dim(self, rank: int) -> int:
        return self.dim_fn(rank)

    def act(self, P: Morphism, source: int, target: int) -> Operator:
        if P is NULL:
            return Operator.zero(self.dim(target), self.dim(source))
        op = self.act_fn(P, source, target)
        if (op.rows, op.cols) != (self.dim(target), self.dim(source)):
            raise AssertionError(f"{self.name}: operator shape does not match dims")
        return op


def self_rep_A() -> CategoryRep:
    """The defining representation of A: ``V_n = C^(n+1)``, ``P -> matrix of P``."""
    return CategoryRep(Category.A, "A.self", lambda n: n + 1,
                       lambda P, s, t: Operator.from_dense(graph_matrix(P)))


def exterior_power_rep(rep: CategoryRep, k: int) -> CategoryRep:
    """``Lambda^k`` of a representation, computed from its operator matrices."""
    def dim(n):
        return comb(rep.dim(n), k)

    def act(P, s, t):
        return exterior_power_matrix(rep.act(P, s, t).dense(), k)

    return CategoryRep(rep.category, f"L{k}({rep.name})", dim, act)


def tensor_rep(r1: CategoryRep, r2: CategoryRep) -> CategoryRep:
    if r1.category is not r2.category:
        raise ValueError("representations of different categories")

    def act(P, s, t):
        A, B = r1.act(P, s, t), r2.act(P, s, t)
        data: Dict[int, SparseVec] = {}
        for c1, col1 in A.data.items():
            for c2, col2 in B.data.items():
                col = data.setdefault(c1 * B.cols + c2, {})
                for i1, x in col1.items():
                    for i2, y in col2.items():
                        col[i1 * B.rows + i2] = x * y
        return Operator(A.rows * B.rows, A.cols * B.cols, data)

    return CategoryRep(r1.category, f"({r1.name}x{r2.name})",
                       lambda n: r1.dim(n) * r2.dim(n), act)


def direct_sum_rep(*reps: CategoryRep) -> CategoryRep:
    if not reps:
        raise ValueError("need at least one summand")

    def act(P, s, t):
        data: Dict[int, SparseVec] = {}
        ro = co = 0
        for r in reps:
            A = r.act(P, s, t)
            for c, col in A.data.items():
                data[co + c] = {ro + i: v for i, v in col.items()}
            ro += A.rows
            co += A.cols
        return Operator(ro, co, data)

    return CategoryRep(reps[0].category, "+".join(r.name for r in reps),
                       lambda n: sum(r.dim(n) for r in reps), act)


def quotient_operator(op: Operator, sub_src: Subspace, sub_tgt: Subspace) -> Operator:
    """Operator induced on ``source/sub_src -> target/sub_tgt``.

    The quotient bases are the standard vectors at non-pivot coordinates of
    the reduced echelon forms.  Raises if ``op`` does not map ``sub_src``
    into ``sub_tgt``.
    """
    ech_t = sub_tgt.echelon()
    for v in sub_src.basis():
        if not ech_t.contains(op.apply(v)):
            raise ValueError("subspace is not invariant")
    src_free = [k for k in range(op.cols) if k not in sub_src.echelon().rows]
    tgt_free = [k for k in range(op.rows) if k not in ech_t.rows]
    tpos = {k: i for i, k in enumerate(tgt_free)}
    data = {}
    for j, k in enumerate(src_free):
        r = ech_t.reduce(op.apply({k: ONE}))
        data[j] = {tpos[key]: v for key, v in r.items()}
    return Operator(len(tgt_free), len(src_free), data)


def quotient_rep(rep: CategoryRep, sub: Callable[[int], Subspace], name: str = "") -> CategoryRep:
    def act(P, s, t):
        return quotient_operator(rep.act(P, s, t), sub(s), sub(t))

    return CategoryRep(rep.category, name or f"{rep.name}/sub",
                       lambda n: rep.dim(n) - sub(n).dim, act)


# -- category C: Lambda-power pieces and the symplectic quotient ------------------------

def fundamental_rep(category) -> CategoryRep:
    """``(Lambda, lambda)`` restricted to the category, acting on ``Lambda(V)``."""
    cat = Category(category)

    def act(P, s, t):
        return fundamental_GA(P)

    return CategoryRep(cat, f"Lambda[{cat.value}]", lambda n: 1 << standard_object(cat, n).dim, act)


def L_rep(category, j: int) -> CategoryRep:
    """``L_j(V) = Lambda^(floor(dim V / 2) - j + 1)(V)`` inside ``(Lambda, lambda)``."""
    cat = Category(category)

    def degree(n):
        return standard_object(cat, n).dim // 2 - j + 1

    def dim(n):
        d, k = standard_object(cat, n).dim, degree(n)
        return comb(d, k) if 0 <= k <= d else 0

    def act(P, s, t):
        full = fundamental_GA(P)
        dv, dw = standard_object(cat, s).dim, standard_object(cat, t).dim
        cols = graded_indices(dv, degree(s)) if 0 <= degree(s) <= dv else []
        rows = graded_indices(dw, degree(t)) if 0 <= degree(t) <= dw else []
        return full.restrict(rows, cols)

    return CategoryRep(cat, f"L{j}[{cat.value}]", dim, act)


def symplectic_invariant(n: int) -> GrassmannElement:
    """``q = sum e_k ^ f_k`` for the rank-``n`` C object (layout ``e1, f1, ...``)."""
    N = 2 * n
    acc = GrassmannElement(N)
    for k in range(n):
        acc = acc + GrassmannElement.generator(N, 2 * k) * GrassmannElement.generator(N, 2 * k + 1)
    return acc


def q_image(n: int, j: int) -> Subspace:
    """``q * L_{j+2}(V_n)`` as a subspace of ``L_j(V_n)`` in graded-mask coordinates."""
    N = 2 * n
    k = n - j + 1
    rows = graded_indices(N, k)
    pos = {m: i for i, m in enumerate(rows)}
    q = symplectic_invariant(n)
    vecs = []
    if 0 <= k - 2 <= N:
        for m in graded_indices(N, k - 2):
            prod = q * GrassmannElement(N, {m: ONE})
            vecs.append({pos[t]: c for t, c in prod.terms.items()})
    return Subspace(len(rows) if 0 <= k <= N else 0, vecs)


def pi_C(j: int) -> CategoryRep:
    """The quotient ``L_j / q L_{j+2}`` for category C."""
    return quotient_rep(L_rep(Category.C, j), lambda n: q_image(n, j), f"Pi{j}[C]")


# -- endomorphism-semigroup representations -------------------------------------------------

@dataclass
class SemigroupRep:
    """A representation of ``End(V_rank)`` on ``span(basis)`` inside ``C^ambient``.

    ``act(P)`` returns the ambient operator; ``basis`` spans the invariant
    subspace carrying the representation.
    """

    category: Category
    rank: int
    ambient: int
    basis: Subspace
    act: Callable[[Morphism], Operator]

    @property
    def dim(self) -> int:
        return self.basis.dim

    def restricted(self, P: Morphism) -> Operator:
        """Matrix of ``act(P)`` on ``basis`` (coordinates on the echelon rows)."""
        B = self.basis.basis()
        ech = self.basis.echelon()
        op = self.act(P)
        piv = sorted(ech.rows)
        data = {}
        for j, v in enumerate(B):
            coords = ech.coordinates(op.apply(v))
            if coords is None:
                raise ValueError("subspace is not invariant under the operator")
            data[j] = {piv.index(p): c for p, c in coords.items()}
        return Operator(len(B), len(B), data)


def subordinate(rep: CategoryRep, rank: int) -> SemigroupRep:
    d = rep.dim(rank)
    return SemigroupRep(rep.category, rank, d, Subspace.whole(d),
                        lambda P: rep.act(P, rank, rank))


def lowering_functor(rep: Union[CategoryRep, SemigroupRep], beta: int, alpha: int) -> SemigroupRep:
    """``F_alpha^beta``: ``P -> tau(U_alpha^beta(P))`` on ``im tau(theta_beta^alpha)``."""
    if not alpha < beta:
        raise ValueError("lowering needs alpha < beta")
    base = subordinate(rep, beta) if isinstance(rep, CategoryRep) else rep
    if base.rank != beta:
        raise ValueError(f"representation lives at rank {base.rank}, not {beta}")
    cat = base.category
    th = base.act(theta(cat, beta, alpha))
    image = Subspace(base.ambient, (th.apply(v) for v in base.basis.basis()))
    return SemigroupRep(cat, alpha, base.ambient, image,
                        lambda P: base.act(end_embedding(cat, P, alpha, beta)))


def extension_type(rep: SemigroupRep) -> str:
    """``"zero"`` if ``theta_n^(n-1)`` acts as 0 on the representation, else ``"maximal"``."""
    if rep.rank < 1:
        raise ValueError("rank 0 has no theta")
    if rep.dim == 0:
        return "empty"
    op = rep.restricted(theta(rep.category, rep.rank, rep.rank - 1))
    return "zero" if op.is_zero() else "maximal"


def same_semigroup_rep(r1: SemigroupRep, r2: SemigroupRep, probes: Sequence[Morphism]) -> bool:
    """Same ambient subspace and identical ambient operators on it for every probe."""
    if r1.basis != r2.basis or r1.rank != r2.rank:
        return False
    for P in probes:
        A, B = r1.act(P), r2.act(P)
        for v in r1.basis.basis():
            if A.apply(v) != B.apply(v):
                return False
    return True


# -- cyclic spans and intertwiners ------------------------------------------------------------

def cyclic_span(operators: Sequence[Operator], seeds: Sequence[SparseVec], ambient: int) -> Subspace:
    """Smallest subspace containing ``seeds`` and stable under ``operators``."""
    ech = Echelon()
    todo = []
    for s in seeds:
        if ech.add(s):
            todo.append(s)
    while todo:
        v = todo.pop()
        for op in operators:
            w = op.apply(v)
            if w and ech.add(w):
                todo.append(w)
    return Subspace(ambient, ech.basis())


def aut_generators_A(n: int) -> List[LinearRelation]:
    """Generators of ``GL(n+1)``: transvections ``1 + E_ij`` and ``diag(.., 2, ..)``."""
    d = n + 1
    gens = []
    for i in range(d):
        for j in range(d):
            M = [[ONE if r == c else ZERO for c in range(d)] for r in range(d)]
            if i == j:
                M[i][i] = scalar(2)
            else:
                M[i][j] = ONE
            gens.append(LinearRelation.graph(M))
    return gens


def end_generators_A(n: int) -> List[LinearRelation]:
    """``Aut(V_n)`` generators plus ``theta_n^(n-1)``."""
    gens = aut_generators_A(n)
    if n >= 1:
        gens.append(theta(Category.A, n, n - 1))
    return gens


def intertwiner_space(rep1: SemigroupRep, rep2: SemigroupRep, generators: Sequence[Morphism]) -> int:
    """``dim {A : A tau1(P) = tau2(P) A for all generators}`` on the carrier spaces."""
    pairs = [(rep1.restricted(P), rep2.restricted(P)) for P in generators]
    return len(intertwiner_solutions(pairs, rep2.dim, rep1.dim))


def highest_weight_A(n: int, k: int) -> SparseVec:
    """``e_1 ^ ... ^ e_k`` in ``Lambda^k C^(n+1)`` (graded-mask coordinates)."""
    masks = graded_indices(n + 1, k)
    return {masks.index((1 << k) - 1): ONE}
