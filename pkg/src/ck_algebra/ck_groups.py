"""Matrices over the Pimenov algebra and the Cayley-Klein matrix families.

Conventions (all indices are as printed in the defining formulas):

* orthogonal family so(n+1; j): rows/cols 0..n, generators X_{mu nu} with
  (X)_{nu mu} = 1 and (X)_{mu nu} = -prod_{m=mu+1}^{nu} j_m^2;
* unitary family u(n+1; j): rows/cols 0..n, X_{nu mu} = e_{nu mu} and
  X_{mu nu} = prod_{l=mu+1}^{nu} j_l^2 e_{mu nu} for mu < nu;
* symplectic Chevalley basis: rows/cols 1..2n with k' = 2n + 1 - k.

Matrices are stored sparsely (only nonzero entries); ``to_rows`` gives the
dense view.  Row and column indices in the storage are 0-based.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Dict, List, Sequence, Tuple

from .pimenov import (JMonomial, JValuation, PimenovElement, interval_product,
                      jmono_eval, parse_pimenov)
from .exact_scalars import HALF, I, ONE, SQRT2, CyclotomicScalar, scalar

Entry = Tuple[int, int]


class PMatrix:
    """A rows x cols matrix with PimenovElement entries of a common arity."""

    __slots__ = ("rows", "cols", "arity", "entries")

    def __init__(self, rows: int, cols: int, arity: int, entries: Dict[Entry, PimenovElement] = None):
        self.rows = rows
        self.cols = cols
        self.arity = arity
        self.entries: Dict[Entry, PimenovElement] = {}
        for (i, j), val in (entries or {}).items():
            if not (0 <= i < rows and 0 <= j < cols):
                raise IndexError(f"entry ({i},{j}) outside {rows}x{cols}")
            e = val if isinstance(val, PimenovElement) else PimenovElement.const(val, arity)
            if e.arity != arity:
                raise ValueError(f"entry arity {e.arity} differs from matrix arity {arity}")
            if e:
                self.entries[(i, j)] = e

    @classmethod
    def _raw(cls, rows, cols, arity, entries) -> "PMatrix":
        obj = object.__new__(cls)
        obj.rows, obj.cols, obj.arity, obj.entries = rows, cols, arity, entries
        return obj

    # -- constructors -----------------------------------------------------
    @classmethod
    def zeros(cls, rows: int, cols: int, arity: int) -> "PMatrix":
        return cls._raw(rows, cols, arity, {})

    @classmethod
    def identity(cls, n: int, arity: int) -> "PMatrix":
        one = PimenovElement.one(arity)
        return cls._raw(n, n, arity, {(i, i): one for i in range(n)})

    @classmethod
    def unit(cls, n: int, i: int, j: int, arity: int, coef=ONE) -> "PMatrix":
        """``coef * e_{ij}`` (0-based) as an n x n matrix."""
        val = coef if isinstance(coef, PimenovElement) else PimenovElement.const(coef, arity)
        return cls(n, n, arity, {(i, j): val})

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], arity: int) -> "PMatrix":
        nr = len(rows)
        nc = len(rows[0]) if nr else 0
        ent = {}
        for i, row in enumerate(rows):
            if len(row) != nc:
                raise ValueError("ragged rows")
            for j, x in enumerate(row):
                if isinstance(x, str):
                    x = parse_pimenov(x, arity)
                ent[(i, j)] = x
        return cls(nr, nc, arity, ent)

    # -- access -----------------------------------------------------------
    @property
    def shape(self) -> Tuple[int, int]:
        return (self.rows, self.cols)

    def __getitem__(self, ij: Entry) -> PimenovElement:
        i, j = ij
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError(f"({i},{j}) outside {self.rows}x{self.cols}")
        e = self.entries.get((i, j))
        return e if e is not None else PimenovElement.zero(self.arity)

    def to_rows(self) -> List[List[PimenovElement]]:
        return [[self[i, j] for j in range(self.cols)] for i in range(self.rows)]

    def is_zero(self) -> bool:
        return not self.entries

    def __bool__(self) -> bool:
        return bool(self.entries)

    # -- arithmetic -------------------------------------------------------
    def _check_same(self, other: "PMatrix") -> None:
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")
        if self.arity != other.arity:
            raise ValueError(f"arity mismatch {self.arity} vs {other.arity}")

    def __add__(self, other: "PMatrix") -> "PMatrix":
        self._check_same(other)
        out = dict(self.entries)
        for k, v in other.entries.items():
            prev = out.get(k)
            if prev is None:
                out[k] = v
            else:
                s = prev + v
                if s:
                    out[k] = s
                else:
                    del out[k]
        return PMatrix._raw(self.rows, self.cols, self.arity, out)

    def __neg__(self) -> "PMatrix":
        return PMatrix._raw(self.rows, self.cols, self.arity, {k: -v for k, v in self.entries.items()})

    def __sub__(self, other: "PMatrix") -> "PMatrix":
        return self + (-other)

    def scale(self, c) -> "PMatrix":
        """Multiply every entry by a scalar or PimenovElement."""
        if isinstance(c, PimenovElement):
            if c.arity != self.arity:
                raise ValueError("arity mismatch")
            out = {}
            for k, v in self.entries.items():
                p = v * c
                if p:
                    out[k] = p
            return PMatrix._raw(self.rows, self.cols, self.arity, out)
        s = scalar(c)
        if not s:
            return PMatrix.zeros(self.rows, self.cols, self.arity)
        return PMatrix._raw(self.rows, self.cols, self.arity, {k: v * s for k, v in self.entries.items()})

    def __rmul__(self, c):
        return self.scale(c)

    def __mul__(self, other):
        if isinstance(other, PMatrix):
            return self.matmul(other)
        return self.scale(other)

    def __matmul__(self, other: "PMatrix") -> "PMatrix":
        return self.matmul(other)

    def matmul(self, other: "PMatrix") -> "PMatrix":
        if self.cols != other.rows:
            raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
        if self.arity != other.arity:
            raise ValueError(f"arity mismatch {self.arity} vs {other.arity}")
        by_row: Dict[int, List[Tuple[int, PimenovElement]]] = {}
        for (k, j), b in other.entries.items():
            by_row.setdefault(k, []).append((j, b))
        out: Dict[Entry, PimenovElement] = {}
        for (i, k), a in self.entries.items():
            for j, b in by_row.get(k, ()):
                p = a * b
                if not p:
                    continue
                prev = out.get((i, j))
                if prev is None:
                    out[(i, j)] = p
                else:
                    s = prev + p
                    if s:
                        out[(i, j)] = s
                    else:
                        del out[(i, j)]
        return PMatrix._raw(self.rows, other.cols, self.arity, out)

    def transpose(self) -> "PMatrix":
        return PMatrix._raw(self.cols, self.rows, self.arity,
                            {(j, i): v for (i, j), v in self.entries.items()})

    @property
    def T(self) -> "PMatrix":
        return self.transpose()

    def conj_transpose(self) -> "PMatrix":
        return PMatrix._raw(self.cols, self.rows, self.arity,
                            {(j, i): v.conj() for (i, j), v in self.entries.items()})

    def commutator(self, other: "PMatrix") -> "PMatrix":
        return self.matmul(other) - other.matmul(self)

    def trace(self) -> PimenovElement:
        acc = PimenovElement.zero(self.arity)
        for (i, j), v in self.entries.items():
            if i == j:
                acc = acc + v
        return acc

    # -- comparison and rendering -----------------------------------------
    def __eq__(self, other):
        if not isinstance(other, PMatrix):
            return NotImplemented
        return self.shape == other.shape and self.entries == other.entries

    def __hash__(self):
        return hash((self.shape, frozenset(self.entries.items())))

    def to_json(self) -> dict:
        return {
            "rows": self.rows,
            "cols": self.cols,
            "arity": self.arity,
            "entries": [[str(self[i, j]) for j in range(self.cols)] for i in range(self.rows)],
        }

    @classmethod
    def from_json(cls, data: dict, arity: int = None) -> "PMatrix":
        ar = data.get("arity", arity)
        if ar is None:
            raise ValueError("matrix JSON needs an arity")
        return cls.from_rows(data["entries"], ar)

    def __str__(self) -> str:
        cells = [[str(self[i, j]) for j in range(self.cols)] for i in range(self.rows)]
        width = max((len(c) for row in cells for c in row), default=1)
        return "\n".join("[ " + "  ".join(c.rjust(width) for c in row) + " ]" for row in cells)

    def __repr__(self) -> str:
        return f"PMatrix({self.rows}x{self.cols}, arity={self.arity}, nnz={len(self.entries)})"


def mat_mul(a: PMatrix, b: PMatrix) -> PMatrix:
    return a.matmul(b)


def mat_add(a: PMatrix, b: PMatrix) -> PMatrix:
    return a + b


def mat_transpose(a: PMatrix) -> PMatrix:
    return a.transpose()


def mat_conj_transpose(a: PMatrix) -> PMatrix:
    return a.conj_transpose()


def mat_commutator(a: PMatrix, b: PMatrix) -> PMatrix:
    return a.commutator(b)


# -- families -------------------------------------------------------------------

class GroupKind(enum.Enum):
    A_sl = "A"
    B_soOdd = "B"
    C_sp = "C"
    D_soEven = "D"
    U_unitary = "U"
    SU_special = "SU"

    def object_dim(self, n: int) -> int:
        """Dimension of the rank-n object V_n of the matching category."""
        if self in (GroupKind.A_sl, GroupKind.U_unitary, GroupKind.SU_special):
            return n + 1
        if self is GroupKind.B_soOdd:
            return 2 * n + 1
        return 2 * n


@dataclass
class GeneratorSet:
    kind: GroupKind
    n: int
    valuation: JValuation
    generators: List[Tuple[str, PMatrix]] = field(default_factory=list)

    def labels(self) -> List[str]:
        return [lab for lab, _ in self.generators]

    def __getitem__(self, label: str) -> PMatrix:
        for lab, m in self.generators:
            if lab == label:
                return m
        raise KeyError(label)

    def __len__(self) -> int:
        return len(self.generators)

    def to_json(self) -> dict:
        return {
            "kind": self.kind.name,
            "n": self.n,
            "valuation": str(self.valuation),
            "generators": [{"label": lab, "matrix": m.to_json()} for lab, m in self.generators],
        }


def _sq(v: JValuation, lo: int, hi: int) -> PimenovElement:
    return jmono_eval(JMonomial.squares(lo, hi), v)


def weighted_diagonal_form(n: int, v: JValuation) -> PMatrix:
    """diag(prod_{m<=k} j_m^2), k = 0..n: the form of the orthogonal and unitary families."""
    if len(v) != n:
        raise ValueError(f"valuation length {len(v)} != {n}")
    return PMatrix(n + 1, n + 1, n, {(k, k): _sq(v, 1, k) for k in range(n + 1)})


def so_generator(mu: int, nu: int, n: int, v: JValuation) -> PMatrix:
    """X_{mu nu} of so(n+1; j): (X)_{nu mu} = 1, (X)_{mu nu} = -prod_{m=mu+1}^{nu} j_m^2."""
    if not (0 <= mu < nu <= n):
        raise ValueError(f"need 0 <= mu < nu <= n, got ({mu},{nu}) with n={n}")
    if len(v) != n:
        raise ValueError(f"valuation length {len(v)} != {n}")
    return PMatrix(n + 1, n + 1, n, {
        (nu, mu): PimenovElement.one(n),
        (mu, nu): -_sq(v, mu + 1, nu),
    })


def so_generators(n: int, v: JValuation) -> GeneratorSet:
    kind = GroupKind.B_soOdd if n % 2 == 0 else GroupKind.D_soEven
    gens = [(f"X{mu},{nu}", so_generator(mu, nu, n, v))
            for mu in range(n + 1) for nu in range(mu + 1, n + 1)]
    return GeneratorSet(kind, n, v, gens)


def unitary_X(k: int, m: int, n: int, v: JValuation) -> PMatrix:
    """The elementary generator X_{km} of u(n+1; j)."""
    if not (0 <= k <= n and 0 <= m <= n):
        raise ValueError(f"index out of range 0..{n}")
    if len(v) != n:
        raise ValueError(f"valuation length {len(v)} != {n}")
    if k < m:
        coef = _sq(v, k + 1, m)
    else:
        coef = PimenovElement.one(n)
    return PMatrix(n + 1, n + 1, n, {(k, m): coef})


def unitary_Q(mu: int, nu: int, n: int, v: JValuation) -> PMatrix:
    """Q_{mu nu}(j) = (i/2)(X_{nu mu} + X_{mu nu})."""
    return (unitary_X(nu, mu, n, v) + unitary_X(mu, nu, n, v)).scale(I * HALF)


def unitary_L(mu: int, nu: int, n: int, v: JValuation) -> PMatrix:
    """L_{mu nu}(j) = (1/2)(X_{nu mu} - X_{mu nu})."""
    return (unitary_X(nu, mu, n, v) - unitary_X(mu, nu, n, v)).scale(HALF)


def unitary_P(k: int, n: int, v: JValuation) -> PMatrix:
    """P_k = (i/2)(X_{k-1,k-1} - X_{kk}), k = 1..n."""
    if not 1 <= k <= n:
        raise ValueError(f"P_k needs 1 <= k <= {n}")
    return (unitary_X(k - 1, k - 1, n, v) - unitary_X(k, k, n, v)).scale(I * HALF)


def u_generators(n: int, v: JValuation, special: bool = False) -> GeneratorSet:
    """Hermitian-type generators of u(n+1; j) or su(n+1; j).

    The unitary family gets Q_{mu nu}, L_{mu nu} and D_k = i X_{kk}
    ((n+1)^2 elements); the special family replaces the D_k by the n
    traceless P_k.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    gens = []
    for mu in range(n + 1):
        for nu in range(mu + 1, n + 1):
            gens.append((f"Q{mu},{nu}", unitary_Q(mu, nu, n, v)))
            gens.append((f"L{mu},{nu}", unitary_L(mu, nu, n, v)))
    if special:
        gens += [(f"P{k}", unitary_P(k, n, v)) for k in range(1, n + 1)]
        kind = GroupKind.SU_special
    else:
        gens += [(f"D{k}", unitary_X(k, k, n, v).scale(I)) for k in range(n + 1)]
        kind = GroupKind.U_unitary
    return GeneratorSet(kind, n, v, gens)


def unitary_elementary(n: int, v: JValuation) -> GeneratorSet:
    """All X_{km}, k, m = 0..n, with labels ``Xk,m``."""
    gens = [(f"X{k},{m}", unitary_X(k, m, n, v)) for k in range(n + 1) for m in range(n + 1)]
    return GeneratorSet(GroupKind.U_unitary, n, v, gens)


# -- symplectic -------------------------------------------------------------------

def symplectic_form(n: int, arity: int = None) -> PMatrix:
    """C0 with (C0)_{k k'} = +1 for k <= n and -1 for k > n, k' = 2n + 1 - k."""
    ar = n if arity is None else arity
    N = 2 * n
    one = PimenovElement.one(ar)
    ent = {}
    for k in range(1, N + 1):
        kp = N + 1 - k
        ent[(k - 1, kp - 1)] = one if k <= n else -one
    return PMatrix(N, N, ar, ent)


def _e(N: int, i: int, j: int, arity: int, coef=None) -> PMatrix:
    """1-based unit matrix e_{ij}, optionally scaled."""
    c = PimenovElement.one(arity) if coef is None else coef
    return PMatrix(N, N, arity, {(i - 1, j - 1): c})


def sp_chevalley_basis(n: int, v: JValuation) -> GeneratorSet:
    """The 3n Chevalley generators H_i, X_i^+, X_i^- of sp(n; j)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if len(v) != n:
        raise ValueError(f"valuation length {len(v)} != {n}")
    N = 2 * n
    p = lambda k: N + 1 - k  # noqa: E731  (k')
    gens = []
    for i in range(1, n):
        gens.append((f"H{i}", _e(N, i, i, n) - _e(N, p(i), p(i), n)
                     - _e(N, i + 1, i + 1, n) + _e(N, p(i + 1), p(i + 1), n)))
    gens.append((f"H{n}", _e(N, n, n, n) - _e(N, p(n), p(n), n)))
    for i in range(1, n):
        ji = v.j(i)
        gens.append((f"X{i}+", (_e(N, i, i + 1, n) - _e(N, p(i + 1), p(i), n)).scale(ji)))
        gens.append((f"X{i}-", (_e(N, i + 1, i, n) - _e(N, p(i), p(i + 1), n)).scale(ji)))
    jn = v.j(n)
    gens.append((f"X{n}+", _e(N, n, n + 1, n).scale(jn)))
    gens.append((f"X{n}-", _e(N, n + 1, n, n).scale(jn)))
    return GeneratorSet(GroupKind.C_sp, n, v, gens)


def sp_generators(n: int, v: JValuation) -> GeneratorSet:
    """A full basis (n(2n+1) elements) of sp(n; j) in the Chevalley convention.

    Every classical basis element supported on folded indices a, b gets the
    weight prod_{l=min}^{max-1} j_l, so the Chevalley generators appear as
    the elements attached to adjacent indices.
    """
    if len(v) != n:
        raise ValueError(f"valuation length {len(v)} != {n}")
    N = 2 * n
    p = lambda k: N + 1 - k  # noqa: E731
    gens = []
    for a in range(1, n + 1):
        gens.append((f"h{a}", _e(N, a, a, n) - _e(N, p(a), p(a), n)))
    for a in range(1, n + 1):
        gens.append((f"u{a},{a}", _e(N, a, p(a), n)))
        gens.append((f"l{a},{a}", _e(N, p(a), a, n)))
    for a in range(1, n + 1):
        for b in range(a + 1, n + 1):
            w = interval_product(a, b, v)
            gens.append((f"e{a},{b}", (_e(N, a, b, n) - _e(N, p(b), p(a), n)).scale(w)))
            gens.append((f"e{b},{a}", (_e(N, b, a, n) - _e(N, p(a), p(b), n)).scale(w)))
            gens.append((f"u{a},{b}", (_e(N, a, p(b), n) + _e(N, b, p(a), n)).scale(w)))
            gens.append((f"l{a},{b}", (_e(N, p(b), a, n) + _e(N, p(a), b, n)).scale(w)))
    return GeneratorSet(GroupKind.C_sp, n, v, gens)


def family_form(kind: GroupKind, n: int, v: JValuation) -> PMatrix:
    """The invariant form F of a family: weighted diagonal or the C0 block form."""
    if kind is GroupKind.C_sp:
        return symplectic_form(n)
    return weighted_diagonal_form(n, v)


def form_compatible(G: PMatrix, F: PMatrix, hermitian: bool = False) -> bool:
    """G^t F + F G = 0 (conjugate transpose when ``hermitian``)."""
    Gt = G.conj_transpose() if hermitian else G.transpose()
    return (Gt.matmul(F) + F.matmul(G)).is_zero()


def check_j_orthogonality(A: PMatrix, v: JValuation = None) -> bool:
    """A A^t = A^t A = I exactly."""
    if A.rows != A.cols:
        return False
    Id = PMatrix.identity(A.rows, A.arity)
    At = A.transpose()
    return A.matmul(At) == Id and At.matmul(A) == Id


def check_symplectic(T: PMatrix, v: JValuation = None) -> bool:
    """T^t C0 T = C0 for the standard anti-block C0."""
    if T.rows != T.cols or T.rows % 2:
        return False
    C0 = symplectic_form(T.rows // 2, T.arity)
    return T.transpose().matmul(C0).matmul(T) == C0


# -- symplectic basis for orthogonal groups -------------------------------------

def antidiagonal(N: int, arity: int) -> PMatrix:
    """C0 with (C0)_{ik} = delta_{i k'}, k' = N + 1 - k."""
    one = PimenovElement.one(arity)
    return PMatrix(N, N, arity, {(i, N - 1 - i): one for i in range(N)})


def _check_perm(sigma: Sequence[int], N: int) -> Tuple[int, ...]:
    s = tuple(sigma)
    if sorted(s) != list(range(1, N + 1)):
        raise ValueError(f"{s} is not a permutation of 1..{N}")
    return s


def symplectic_D_matrix(N: int, sigma: Sequence[int], arity: int = None) -> PMatrix:
    """D_sigma = D V_sigma with (V_sigma)_{ik} = delta_{sigma_i, k}."""
    if N < 2:
        raise ValueError("N must be >= 2")
    s = _check_perm(sigma, N)
    ar = N - 1 if arity is None else arity
    n = N // 2
    r = SQRT2.inv()
    ent: Dict[Entry, CyclotomicScalar] = {}
    off = N - n  # first row of the lower block (0-based)
    for k in range(n):
        ent[(k, k)] = r                             # I / sqrt2
        ent[(k, N - 1 - k)] = -I * r                # -i C0~ / sqrt2
        ent[(off + k, n - 1 - k)] = r               # C0~ / sqrt2
        ent[(off + k, off + k)] = I * r             # i I / sqrt2
    if N % 2:
        ent[(n, n)] = ONE
    D = PMatrix(N, N, ar, {k: PimenovElement.const(c, ar) for k, c in ent.items()})
    V = PMatrix(N, N, ar, {(i, s[i] - 1): PimenovElement.one(ar) for i in range(N)})
    return D.matmul(V)


def symplectic_basis_conjugate(A: PMatrix, sigma: Sequence[int], v: JValuation = None) -> PMatrix:
    """B_sigma = D_sigma A D_sigma^{-1}, using D_sigma^{-1} = D_sigma^t C0."""
    if not check_j_orthogonality(A, v):
        raise ValueError("input matrix is not j-orthogonal")
    N = A.rows
    Ds = symplectic_D_matrix(N, sigma, A.arity)
    Dinv = Ds.transpose().matmul(antidiagonal(N, A.arity))
    return Ds.matmul(A).matmul(Dinv)


# -- unitary general element ------------------------------------------------------

def lambda_index(mu: int, nu: int, n: int) -> int:
    """Flattened index nu + mu(n-1) - mu(mu-1)/2 of the pair mu < nu."""
    if not 0 <= mu < nu <= n:
        raise ValueError(f"need 0 <= mu < nu <= n, got ({mu},{nu})")
    return nu + mu * (n - 1) - mu * (mu - 1) // 2


def general_element(r: Sequence, s: Sequence, w: Sequence, v: JValuation) -> PMatrix:
    """Z(r, s, w; j) = sum r_lambda Q_lambda + s_lambda L_lambda + sum w_k P_k."""
    n = len(w)
    m = n * (n + 1) // 2
    if len(r) != m or len(s) != m:
        raise ValueError(f"r and s need length {m}, got {len(r)} and {len(s)}")
    if len(v) != n:
        raise ValueError(f"valuation length {len(v)} != {n}")
    Z = PMatrix.zeros(n + 1, n + 1, n)
    for mu in range(n + 1):
        for nu in range(mu + 1, n + 1):
            lam = lambda_index(mu, nu, n) - 1
            if scalar(r[lam]):
                Z = Z + unitary_Q(mu, nu, n, v).scale(r[lam])
            if scalar(s[lam]):
                Z = Z + unitary_L(mu, nu, n, v).scale(s[lam])
    for k in range(1, n + 1):
        if scalar(w[k - 1]):
            Z = Z + unitary_P(k, n, v).scale(w[k - 1])
    return Z


def exp_nilpotent(M: PMatrix) -> PMatrix:
    """exp(M) as a terminating series; rejects matrices that are not nilpotent."""
    if M.rows != M.cols:
        raise ValueError("exp of a non-square matrix")
    limit = M.rows * (M.arity + 1) + 1
    result = PMatrix.identity(M.rows, M.arity)
    term = PMatrix.identity(M.rows, M.arity)
    for k in range(1, limit + 1):
        term = term.matmul(M).scale(scalar(1) / k)
        if term.is_zero():
            return result
        result = result + term
    raise ValueError("matrix is not nilpotent; the exponential series does not terminate")


# -- quadratic forms and fibering -------------------------------------------------

def ck_quadratic_form(z: Sequence[PimenovElement], v: JValuation) -> PimenovElement:
    """|z_0|^2 + sum_k |z_k|^2 prod_{m<=k} j_m^2 with |x|^2 = x conj(x)."""
    n = len(v)
    if len(z) != n + 1:
        raise ValueError(f"vector length {len(z)} != {n + 1}")
    zz = [x if isinstance(x, PimenovElement) else PimenovElement.const(x, n) for x in z]
    acc = PimenovElement.zero(n)
    for k, x in enumerate(zz):
        acc = acc + x * x.conj() * _sq(v, 1, k)
    return acc


def fiber_structure(v: JValuation) -> List[int]:
    return list(v.iota_indices())


def invariant_subforms(z: Sequence[PimenovElement], v: JValuation) -> List[PimenovElement]:
    """The p+1 forms sum_{k_s <= a < k_{s+1}} |z_a|^2 prod_{l=k_s+1}^{a} j_l^2."""
    n = len(v)
    ks = [0] + fiber_structure(v) + [n + 1]
    zz = [x if isinstance(x, PimenovElement) else PimenovElement.const(x, n) for x in z]
    out = []
    for s in range(len(ks) - 1):
        acc = PimenovElement.zero(n)
        for a in range(ks[s], ks[s + 1]):
            acc = acc + zz[a] * zz[a].conj() * _sq(v, ks[s] + 1, a)
        out.append(acc)
    return out
