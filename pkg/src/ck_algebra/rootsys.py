"""Cartan subalgebras, root systems, root vectors and Cartan-Weyl brackets.

Family keywords and the meaning of ``n``:

=======  ===========================  =====================  ==============
kind     algebra                      matrix size            j-parameters
=======  ===========================  =====================  ==============
``so``   so(n+1; j)                   n + 1                  j_1..j_n
``u``    u(n+1; j)                    n + 1                  j_1..j_n
``su``   su(n+1; j)                   n + 1                  j_1..j_n
``sl``   sl(n+1; j) (complexified su) n + 1                  j_1..j_n
``sp``   sp(n; j)                     2n                     j_1..j_n
=======  ===========================  =====================  ==============

For ``sp`` the root vectors follow the A_{k,k+n} block convention, in
which j_1 never occurs.  ``predicted_terms`` encodes the closed-form
Cartan-Weyl brackets as formal sums ``coef * JMonomial * basis element``;
``verify_cartan_weyl`` compares them with brute-force matrix commutators.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .ck_groups import GroupKind, PMatrix, so_generator, unitary_X
from .pimenov import JMonomial, JValuation, PimenovElement, jmono_eval
from .exact_scalars import I, ONE

KINDS = ("so", "u", "su", "sl", "sp")


def normalize_kind(kind) -> str:
    if isinstance(kind, GroupKind):
        return {GroupKind.A_sl: "sl", GroupKind.B_soOdd: "so", GroupKind.D_soEven: "so",
                GroupKind.C_sp: "sp", GroupKind.U_unitary: "u", GroupKind.SU_special: "su"}[kind]
    k = str(kind).lower()
    if k not in KINDS:
        raise ValueError(f"unknown kind {kind!r}; expected one of {', '.join(KINDS)}")
    return k


def group_kind(kind, n: int) -> GroupKind:
    k = normalize_kind(kind)
    if k == "so":
        return GroupKind.B_soOdd if n % 2 == 0 else GroupKind.D_soEven
    return {"u": GroupKind.U_unitary, "su": GroupKind.SU_special,
            "sl": GroupKind.A_sl, "sp": GroupKind.C_sp}[k]


def rank_of(kind, n: int) -> int:
    """Number of Cartan basis elements."""
    k = normalize_kind(kind)
    if k == "so":
        return (n + 1) // 2
    if k == "u":
        return n + 1
    return n


def algebra_dim(kind, n: int) -> int:
    k = normalize_kind(kind)
    if k == "so":
        return n * (n + 1) // 2
    if k == "u":
        return (n + 1) ** 2
    if k in ("su", "sl"):
        return (n + 1) ** 2 - 1
    return n * (2 * n + 1)


# -- labels -----------------------------------------------------------------------

@dataclass(frozen=True, order=True)
class CartanLabel:
    """H_k (or the traceless H~_k of the special unitary family)."""

    index: int
    tilde: bool = False

    def __str__(self) -> str:
        return f"Ht{self.index}" if self.tilde else f"H{self.index}"


@dataclass(frozen=True)
class Root:
    """A root as an integer coefficient vector on e_offset, e_offset+1, ..."""

    coeffs: Tuple[int, ...]
    offset: int = 1

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(self.coeffs))

    def support(self) -> Tuple[int, ...]:
        return tuple(i + self.offset for i, c in enumerate(self.coeffs) if c)

    def coeff(self, k: int) -> int:
        i = k - self.offset
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def __add__(self, other: "Root") -> "Root":
        return Root(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)), self.offset)

    def __neg__(self) -> "Root":
        return Root(tuple(-a for a in self.coeffs), self.offset)

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def sort_key(self):
        sup = self.support()
        return (len(sup), tuple(abs(self.coeff(k)) for k in sup), sup,
                tuple(-self.coeff(k) for k in sup))

    def __lt__(self, other: "Root") -> bool:
        return self.sort_key() < other.sort_key()

    def __str__(self) -> str:
        parts = []
        for k in self.support():
            c = self.coeff(k)
            mag = "" if abs(c) == 1 else str(abs(c))
            term = f"{mag}e{k}"
            if not parts:
                parts.append(("-" if c < 0 else "") + term)
            else:
                parts.append(("-" if c < 0 else "+") + term)
        return "".join(parts) if parts else "0"


Label = Union[CartanLabel, Root]


def label_sort_key(lab: Label):
    if isinstance(lab, CartanLabel):
        return (0, lab.index)
    return (1,) + lab.sort_key()


def _root_offset(kind: str) -> int:
    return 0 if kind in ("u", "su", "sl") else 1


def _root_len(kind: str, n: int) -> int:
    if kind == "so":
        return (n + 1) // 2
    if kind in ("u", "su", "sl"):
        return n + 1
    return n


def make_root(kind, n: int, terms: Dict[int, int]) -> Root:
    k = normalize_kind(kind)
    off, ln = _root_offset(k), _root_len(k, n)
    vec = [0] * ln
    for idx, c in terms.items():
        if not off <= idx < off + ln:
            raise ValueError(f"index e{idx} outside the root lattice of {k}, n={n}")
        vec[idx - off] += c
    return Root(tuple(vec), off)


_LABEL_RE = re.compile(r"([+-]?)(\d*)e(\d+)")


def parse_label(kind, n: int, text: str) -> Label:
    """Parse ``H2``, ``Ht1``, ``e1-e2``, ``-e1``, ``2e3`` for the given family."""
    t = text.replace(" ", "")
    k = normalize_kind(kind)
    m = re.fullmatch(r"H(t?)(\d+)", t)
    if m:
        lab = CartanLabel(int(m.group(2)), bool(m.group(1)))
        if lab not in cartan_labels(k, n):
            raise ValueError(f"{text!r} is not a Cartan label of {k}, n={n}")
        return lab
    pos, terms = 0, {}
    for mm in _LABEL_RE.finditer(t):
        if mm.start() != pos:
            raise ValueError(f"malformed root label {text!r}")
        pos = mm.end()
        c = int(mm.group(2) or 1) * (-1 if mm.group(1) == "-" else 1)
        terms[int(mm.group(3))] = terms.get(int(mm.group(3)), 0) + c
    if pos != len(t) or not terms:
        raise ValueError(f"malformed root label {text!r}")
    r = make_root(k, n, terms)
    if r not in set(root_system(k, n)):
        raise ValueError(f"{text!r} is not a root of {k}, n={n}")
    return r


# -- root systems --------------------------------------------------------------------

def cartan_labels(kind, n: int) -> List[CartanLabel]:
    k = normalize_kind(kind)
    if k == "so":
        return [CartanLabel(i) for i in range(1, (n + 1) // 2 + 1)]
    if k == "u":
        return [CartanLabel(i) for i in range(0, n + 1)]
    if k in ("su", "sl"):
        return [CartanLabel(i, True) for i in range(1, n + 1)]
    return [CartanLabel(i) for i in range(1, n + 1)]


def root_system(kind, n: int) -> List[Root]:
    """All roots, canonically sorted; count = dim(algebra) - rank."""
    k = normalize_kind(kind)
    if n < 1:
        raise ValueError("n must be >= 1")
    roots = []
    if k == "so":
        m = (n + 1) // 2
        for r in range(1, m + 1):
            for s in range(r + 1, m + 1):
                for a in (1, -1):
                    for b in (1, -1):
                        roots.append(make_root(k, n, {r: a, s: b}))
        if n % 2 == 0:
            for r in range(1, m + 1):
                for a in (1, -1):
                    roots.append(make_root(k, n, {r: a}))
    elif k in ("u", "su", "sl"):
        for a in range(0, n + 1):
            for b in range(0, n + 1):
                if a != b:
                    roots.append(make_root(k, n, {a: 1, b: -1}))
    else:
        for r in range(1, n + 1):
            for s in range(r + 1, n + 1):
                for a in (1, -1):
                    for b in (1, -1):
                        roots.append(make_root(k, n, {r: a, s: b}))
            for a in (2, -2):
                roots.append(make_root(k, n, {r: a}))
    return sorted(roots)


def basis_labels(kind, n: int) -> List[Label]:
    return list(cartan_labels(kind, n)) + root_system(kind, n)


# -- matrices --------------------------------------------------------------------------

def _jm(**kw) -> JMonomial:
    return JMonomial(kw)


def _J(*pairs) -> JMonomial:
    """JMonomial from (index, exponent) pairs, skipping non-positive indices."""
    return JMonomial([(k, e) for k, e in pairs])


def _sq(lo: int, hi: int) -> JMonomial:
    return JMonomial.squares(lo, hi)


def _ev(m: JMonomial, v: JValuation) -> PimenovElement:
    return jmono_eval(m, v)


def _check_val(kind: str, n: int, v: JValuation) -> None:
    if len(v) != n:
        raise ValueError(f"valuation length {len(v)} != {n} for {kind}, n={n}")


def _cartan_matrix_element(kind: str, lab: CartanLabel, n: int, v: JValuation) -> PMatrix:
    if kind == "so":
        k = lab.index
        return so_generator(2 * k - 2, 2 * k - 1, n, v).scale(-I)
    if kind == "u":
        return PMatrix.unit(n + 1, lab.index, lab.index, n)
    if kind in ("su", "sl"):
        k = lab.index
        return PMatrix.unit(n + 1, k - 1, k - 1, n) - PMatrix.unit(n + 1, k, k, n)
    k = lab.index
    return PMatrix.unit(2 * n, k - 1, k - 1, n) - PMatrix.unit(2 * n, k + n - 1, k + n - 1, n)


def _A(N: int, i: int, j: int, arity: int, coef: PimenovElement = None) -> PMatrix:
    """A_{ij} with 1-based indices (the sp convention)."""
    return PMatrix.unit(N, i - 1, j - 1, arity, coef if coef is not None else ONE)


def _root_matrix(kind: str, root: Root, n: int, v: JValuation, balanced: bool = False) -> PMatrix:
    sup = root.support()
    if kind == "so":
        X = lambda a, b: so_generator(a, b, n, v)  # noqa: E731
        j = lambda k: _ev(JMonomial({k: 1}), v)  # noqa: E731
        if len(sup) == 1:
            k = sup[0]
            eps = root.coeff(k)
            return -X(2 * k - 2, n) + X(2 * k - 1, n).scale(j(2 * k - 1) * (I * eps))
        r, s = sup
        a, b = root.coeff(r), root.coeff(s)
        jr, js = j(2 * r - 1), j(2 * s - 1)
        t1 = -X(2 * r - 2, 2 * s - 2).scale(js)
        t2 = X(2 * r - 2, 2 * s - 1).scale(I * b)
        t3 = X(2 * r - 1, 2 * s - 1).scale(jr * (a * b))
        t4 = X(2 * r - 1, 2 * s - 2).scale(jr * js * (I * a))
        return t1 + t2 + t3 + t4
    if kind in ("u", "su", "sl"):
        a = next(k for k in sup if root.coeff(k) == 1)
        b = next(k for k in sup if root.coeff(k) == -1)
        if balanced:
            J = _ev(JMonomial.interval(min(a, b) + 1, max(a, b)), v)
            return PMatrix.unit(n + 1, a, b, n, J)
        return unitary_X(a, b, n, v)
    N = 2 * n
    if len(sup) == 1:
        k = sup[0]
        return _A(N, k, k + n, n) if root.coeff(k) > 0 else _A(N, k + n, k, n)
    k, m = sup
    P = _ev(_sq(k + 1, m), v)
    ck, cm = root.coeff(k), root.coeff(m)
    if (ck, cm) == (1, -1):
        return _A(N, k, m, n, P) - _A(N, m + n, k + n, n)
    if (ck, cm) == (-1, 1):
        return _A(N, m, k, n) - _A(N, k + n, m + n, n, P)
    if (ck, cm) == (1, 1):
        return _A(N, k, m + n, n, P) + _A(N, m, k + n, n)
    return _A(N, k + n, m, n, P) + _A(N, m + n, k, n)


@dataclass
class RootVector:
    label: Root
    matrix: PMatrix


@dataclass
class CartanBasis:
    kind: GroupKind
    elements: List[Tuple[CartanLabel, PMatrix]]


def cartan_basis(kind, n: int, v: JValuation) -> CartanBasis:
    k = normalize_kind(kind)
    _check_val(k, n, v)
    elems = [(lab, _cartan_matrix_element(k, lab, n, v)) for lab in cartan_labels(k, n)]
    return CartanBasis(group_kind(k, n), elems)


def root_vector(kind, label, n: int, v: JValuation) -> RootVector:
    k = normalize_kind(kind)
    _check_val(k, n, v)
    if isinstance(label, str):
        label = parse_label(k, n, label)
    if not isinstance(label, Root) or label not in set(root_system(k, n)):
        raise ValueError(f"{label} is not a root of {k}, n={n}")
    return RootVector(label, _root_matrix(k, label, n, v))


def basis_matrix(kind, label: Label, n: int, v: JValuation, balanced: bool = False) -> PMatrix:
    """Matrix of a basis element.

    ``balanced`` only affects the unitary families: E_{e_a-e_b} becomes
    J e_ab with J the unsquared product of j_l over min(a,b) < l <= max(a,b).
    The brackets are the same closed forms, but the root vectors no longer
    vanish when a nilpotent parameter sits inside the interval.
    """
    k = normalize_kind(kind)
    if isinstance(label, CartanLabel):
        return _cartan_matrix_element(k, label, n, v)
    return _root_matrix(k, label, n, v, balanced)


def algebra_basis(kind, n: int, v: JValuation, balanced: bool = False) -> List[Tuple[Label, PMatrix]]:
    """Cartan elements followed by root vectors."""
    k = normalize_kind(kind)
    _check_val(k, n, v)
    return [(lab, basis_matrix(k, lab, n, v, balanced)) for lab in basis_labels(k, n)]


# -- closed-form brackets --------------------------------------------------------------

Term = Tuple[int, JMonomial, Label]


def _neg(terms: List[Term]) -> List[Term]:
    return [(-c, m, lab) for c, m, lab in terms]


def _so_terms(x: Label, y: Label, n: int) -> List[Term]:
    if isinstance(x, CartanLabel) and isinstance(y, CartanLabel):
        return []
    if isinstance(y, CartanLabel):
        return _neg(_so_terms(y, x, n))
    if isinstance(x, CartanLabel):
        k = x.index
        c = y.coeff(k)
        return [(c, JMonomial({2 * k - 1: 1}), y)] if c else []
    a, b = x, y
    g = a + b
    sa, sb = a.support(), b.support()
    if g.is_zero():
        if len(sa) == 1:
            k = sa[0]
            e = a.coeff(k)
            return [(-2 * e, _J((2 * k - 1, 1)) * _sq(2 * k, n), CartanLabel(k))]
        r, s = sa
        er, es = a.coeff(r), a.coeff(s)
        base = _sq(2 * r, 2 * s - 2)
        return [(-4 * er, _J((2 * r - 1, 1), (2 * s - 1, 2)) * base, CartanLabel(r)),
                (-4 * es, _J((2 * r - 1, 2), (2 * s - 1, 1)) * base, CartanLabel(s))]
    roots = set(root_system("so", n))
    if g not in roots:
        return []
    if len(sa) == 1 and len(sb) == 1:
        p, q = sa[0], sb[0]
        if p < q:
            return [(-1, _J((2 * q - 1, 1)) * _sq(2 * q, n), g)]
        return [(1, _J((2 * p - 1, 1)) * _sq(2 * p, n), g)]
    if len(sa) == 2 and len(sb) == 1:
        lo, hi = sa
        c = sb[0]
        if c == hi:
            return [(2, _J((2 * hi - 1, 1)), g)]
        return [(-2, _J((2 * hi - 1, 1)) * _sq(2 * lo - 1, 2 * hi - 2), g)]
    if len(sa) == 1 and len(sb) == 2:
        return _neg(_so_terms(y, x, n))
    s = next(k for k in sa if k in sb)
    r = next(k for k in sa if k != s)
    m = next(k for k in sb if k != s)

    def c(r_, s_, m_):
        if r_ < s_ < m_:
            return (2, _J((2 * s_ - 1, 1)))
        if r_ < m_ < s_:
            return (-2, _J((2 * m_ - 1, 1)) * _sq(2 * m_, 2 * s_ - 1))
        return (-2, _J((2 * r_ - 1, 1)) * _sq(2 * s_ - 1, 2 * r_ - 2))

    if r < m:
        coef, mono = c(r, s, m)
    else:
        coef, mono = c(m, s, r)
        coef = -coef
    return [(coef, mono, g)]


def _u_pair(root: Root) -> Tuple[int, int]:
    sup = root.support()
    a = next(k for k in sup if root.coeff(k) == 1)
    b = next(k for k in sup if root.coeff(k) == -1)
    return a, b


def _u_coef(k: int, m: int, q: int) -> JMonomial:
    if k < m < q or q < m < k:
        return JMonomial()
    if m > k and m > q:
        return _sq(1 + max(k, q), m)
    return _sq(m + 1, min(k, q))


def _u_terms(x: Label, y: Label, n: int, special: bool) -> List[Term]:
    if isinstance(x, CartanLabel) and isinstance(y, CartanLabel):
        return []
    if isinstance(y, CartanLabel):
        return _neg(_u_terms(y, x, n, special))
    if isinstance(x, CartanLabel):
        k = x.index
        c = (y.coeff(k - 1) - y.coeff(k)) if special else y.coeff(k)
        return [(c, JMonomial(), y)] if c else []
    a, b = _u_pair(x)
    c, d = _u_pair(y)
    if b == c and a == d:
        P = _sq(min(a, b) + 1, max(a, b))
        if not special:
            return [(1, P, CartanLabel(a)), (-1, P, CartanLabel(b))]
        if a < b:
            return [(1, P, CartanLabel(r, True)) for r in range(a + 1, b + 1)]
        return [(-1, P, CartanLabel(r, True)) for r in range(b + 1, a + 1)]
    if b == c:
        return [(1, _u_coef(a, b, d), x + y)]
    if a == d:
        return [(-1, _u_coef(c, a, b), x + y)]
    return []


def _sp_terms(x: Label, y: Label, n: int) -> List[Term]:
    if isinstance(x, CartanLabel) and isinstance(y, CartanLabel):
        return []
    if isinstance(y, CartanLabel):
        return _neg(_sp_terms(y, x, n))
    if isinstance(x, CartanLabel):
        c = y.coeff(x.index)
        return [(c, JMonomial(), y)] if c else []
    a, b = x, y
    g = a + b
    sa, sb = a.support(), b.support()
    if g.is_zero():
        if len(sa) == 1:
            k = sa[0]
            return [(a.coeff(k) // 2, JMonomial(), CartanLabel(k))]
        k, m = sa
        P = _sq(k + 1, m)
        return [(a.coeff(k), P, CartanLabel(k)), (a.coeff(m), P, CartanLabel(m))]
    if g not in set(root_system("sp", n)):
        return []
    if len(sa) == 2 and len(sb) == 1:
        k = sb[0]
        other = next(i for i in sa if i != k)
        return [(a.coeff(other), JMonomial(), g)]
    if len(sa) == 1 and len(sb) == 2:
        return _neg(_sp_terms(y, x, n))
    k = next(i for i in sa if i in sb and a.coeff(i) == -b.coeff(i))
    if a.coeff(k) < 0:
        return _neg(_sp_terms(y, x, n))
    m = next(i for i in sa if i != k)
    p = next(i for i in sb if i != k)
    sm, sp_ = a.coeff(m), b.coeff(p)
    if m == p:
        return [(-2, _sq(1 + min(k, m), max(k, m)), g)]
    if k < m and k < p:
        mono = _sq(k + 1, min(m, p))
    elif k > m and k > p:
        mono = _sq(1 + max(m, p), k)
    else:
        mono = JMonomial()
    sign = 1 if (sm, sp_) == (1, -1) else -1
    return [(sign, mono, g)]


def predicted_terms(kind, x: Label, y: Label, n: int) -> List[Term]:
    """Formal right-hand side of [x, y] as (integer, j-monomial, label) terms."""
    k = normalize_kind(kind)
    if k == "so":
        return _so_terms(x, y, n)
    if k in ("u", "su", "sl"):
        return _u_terms(x, y, n, special=(k != "u"))
    return _sp_terms(x, y, n)


def render_terms(terms: Sequence[Term]) -> str:
    if not terms:
        return "0"
    out = []
    for c, m, lab in terms:
        mono = "" if m.is_one() else f"{m}*"
        mag = abs(c)
        body = f"{'' if mag == 1 else str(mag) + '*'}{mono}E[{lab}]" if isinstance(lab, Root) \
            else f"{'' if mag == 1 else str(mag) + '*'}{mono}{lab}"
        if not out:
            out.append(("-" if c < 0 else "") + body)
        else:
            out.append((" - " if c < 0 else " + ") + body)
    return "".join(out)


def predicted_commutator(kind, x: Label, y: Label, n: int, v: JValuation,
                         _cache: Optional[Dict[Label, PMatrix]] = None) -> PMatrix:
    """Matrix value of the closed-form bracket under the valuation ``v``."""
    k = normalize_kind(kind)
    _check_val(k, n, v)
    size = 2 * n if k == "sp" else n + 1
    out = PMatrix.zeros(size, size, n)
    for c, mono, lab in predicted_terms(k, x, y, n):
        coef = _ev(mono, v)
        if not coef:
            continue
        mat = _cache[lab] if _cache is not None else basis_matrix(k, lab, n, v)
        out = out + mat.scale(coef * c)
    return out


@dataclass
class Mismatch:
    x: str
    y: str
    computed: PMatrix
    predicted: PMatrix
    formula: str

    def to_json(self) -> dict:
        return {"x": self.x, "y": self.y, "formula": self.formula,
                "computed": self.computed.to_json()["entries"],
                "predicted": self.predicted.to_json()["entries"]}


@dataclass
class CWReport:
    kind: str
    n: int
    valuation: str
    pairs_checked: int = 0
    mismatches: List[Mismatch] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.mismatches

    def to_json(self) -> dict:
        return {"kind": self.kind, "n": self.n, "valuation": self.valuation,
                "pairs_checked": self.pairs_checked, "passed": self.passed,
                "mismatches": [m.to_json() for m in self.mismatches]}


def verify_cartan_weyl(kind, n: int, v: JValuation, predictor=None, balanced: bool = False) -> CWReport:
    """Compare every bracket of basis elements with its closed form.

    ``predictor`` (defaults to :func:`predicted_terms`) may be replaced to
    check that a corrupted table is detected.
    """
    k = normalize_kind(kind)
    _check_val(k, n, v)
    pred = predictor or predicted_terms
    basis = algebra_basis(k, n, v, balanced)
    cache = dict(basis)
    size = 2 * n if k == "sp" else n + 1
    rep = CWReport(k, n, str(v))
    for i, (lx, mx) in enumerate(basis):
        for ly, my in basis[i + 1:]:
            computed = mx.commutator(my)
            predicted = PMatrix.zeros(size, size, n)
            terms = pred(k, lx, ly, n)
            for c, mono, lab in terms:
                coef = _ev(mono, v)
                if coef:
                    predicted = predicted + cache[lab].scale(coef * c)
            rep.pairs_checked += 1
            if computed != predicted:
                rep.mismatches.append(Mismatch(str(lx), str(ly), computed, predicted,
                                               render_terms(terms)))
    return rep


# -- Cartan matrices and Dynkin diagrams -------------------------------------------

_SERIES = {"sl": "A", "u": "A", "su": "A", "A": "A", "B": "B", "C": "C", "D": "D", "sp": "C"}


def simple_roots(series: str, n: int) -> List[Tuple[Fraction, ...]]:
    """Simple roots in the orthonormal e-basis (e_0..e_n for A, e_1..e_n otherwise)."""
    s = _SERIES.get(series, series)
    if s == "A":
        dim = n + 1
        return [tuple(Fraction(int(i == k - 1) - int(i == k)) for i in range(dim)) for k in range(1, n + 1)]
    dim = n
    base = [tuple(Fraction(int(i == k - 1) - int(i == k)) for i in range(dim)) for k in range(1, n)]
    if s == "B":
        last = tuple(Fraction(int(i == n - 1)) for i in range(dim))
    elif s == "C":
        last = tuple(Fraction(2 * int(i == n - 1)) for i in range(dim))
    elif s == "D":
        if n < 2:
            raise ValueError("the D series needs n >= 2")
        last = tuple(Fraction(int(i in (n - 2, n - 1))) for i in range(dim))
    else:
        raise ValueError(f"unknown series {series!r}")
    return base + [last]


def cartan_matrix(series: str, n: int) -> List[List[int]]:
    """A_km = 2 <a_k, a_m> / <a_k, a_k> for the simple roots of the series."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if series == "so":
        raise ValueError("use series 'B' or 'D' for orthogonal algebras")
    roots = simple_roots(series, n)
    ip = lambda x, y: sum(a * b for a, b in zip(x, y))  # noqa: E731
    out = []
    for a in roots:
        row = []
        for b in roots:
            val = 2 * ip(a, b) / ip(a, a)
            assert val.denominator == 1
            row.append(int(val))
        out.append(row)
    return out


def int_det(M: Sequence[Sequence[int]]) -> int:
    """Exact determinant by fraction Gaussian elimination."""
    A = [[Fraction(x) for x in row] for row in M]
    n = len(A)
    det = Fraction(1)
    for c in range(n):
        p = next((r for r in range(c, n) if A[r][c]), None)
        if p is None:
            return 0
        if p != c:
            A[c], A[p] = A[p], A[c]
            det = -det
        det *= A[c][c]
        for r in range(c + 1, n):
            f = A[r][c] / A[c][c]
            A[r] = [x - f * y for x, y in zip(A[r], A[c])]
    assert det.denominator == 1
    return int(det)


def cartan_matrix_properties(A: Sequence[Sequence[int]]) -> Dict[str, bool]:
    n = len(A)
    rng = range(n)
    return {
        "diagonal_two": all(A[k][k] == 2 for k in rng),
        "off_diagonal_range": all(A[k][m] in (0, -1, -2, -3, -4) for k in rng for m in rng if k != m),
        "product_below_four": all(A[k][m] * A[m][k] < 4 for k in rng for m in rng if k != m),
        "symmetric_zeros": all((A[k][m] == 0) == (A[m][k] == 0) for k in rng for m in rng),
        "positive_determinant": int_det(A) > 0,
    }


@dataclass
class DynkinDiagram:
    series: str
    n: int
    weights: List[int]
    edges: List[Tuple[int, int, int]]

    def to_json(self) -> dict:
        return {"series": self.series, "n": self.n, "weights": self.weights,
                "edges": [list(e) for e in self.edges]}

    def ascii(self) -> str:
        """Nodes o1..on with edge multiplicities; weights printed under nodes."""
        lines = []
        for a, b, mult in self.edges:
            bond = {1: "---", 2: "===", 3: "≡≡≡"}.get(mult, f"-{mult}-")
            lines.append(f"o{a} {bond} o{b}")
        head = "  ".join(f"o{k}({w})" for k, w in enumerate(self.weights, 1))
        return "\n".join([f"{self.series}{self.n}: {head}"] + lines)


def dynkin_diagram(series: str, n: int) -> DynkinDiagram:
    s = _SERIES.get(series, series)
    roots = simple_roots(s, n)
    ip = lambda x, y: sum(a * b for a, b in zip(x, y))  # noqa: E731
    norms = [ip(r, r) for r in roots]
    smallest = min(norms)
    weights = [int(x / smallest) for x in norms]
    A = cartan_matrix(s, n)
    edges = [(k + 1, m + 1, A[k][m] * A[m][k]) for k in range(n) for m in range(k + 1, n) if A[k][m]]
    return DynkinDiagram(s, n, weights, edges)
