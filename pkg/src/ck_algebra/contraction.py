"""Gamma-tables and Levi-Maltsev decompositions of contracted algebras.

Predictions come from the block rules of the structure theorems; every
prediction is then checked against the algebra itself (``LieAlgebra``
structure constants obtained from exact matrix commutators).

Notation in rendered output: ``A ∔ B`` is a semidirect sum with ``A`` the
ideal, ``A ⊕ B`` a direct sum of commuting ideals.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from .ck_groups import PMatrix
from .lie import LieAlgebra, flatten
from .linalg import Echelon, dense_rank
from .pimenov import JMonomial, JValuation, JValue, PimenovElement, jmono_eval
from .rootsys import (CartanLabel, Label, Root, algebra_basis, make_root, normalize_kind,
                      root_system)

__all__ = [
    "flatten", "ContractionSpec", "GammaCell", "GammaTable", "Block", "LeviMaltsev",
    "CheckResult", "DecompositionReport", "RadicalBlocks", "gamma_table",
    "predicted_decomposition", "verify_decomposition", "radical_block_structure",
    "admissible_indices", "all_specs",
]


class InadmissibleSpec(ValueError):
    pass


def admissible_indices(kind, n: int) -> Tuple[int, ...]:
    """Parameter indices that the structure theorems allow to be nilpotent."""
    k = normalize_kind(kind)
    if k == "so":
        hi = n if n % 2 == 0 else n - 1
        return tuple(range(2, hi + 1, 2))
    if k == "sp":
        return tuple(range(2, n + 1))
    return tuple(range(1, n + 1))


@dataclass(frozen=True)
class ContractionSpec:
    """Nilpotent parameter indices plus the values (1 or i) of the others."""

    kind: str
    n: int
    iota: Tuple[int, ...]
    base: Optional[JValuation] = None

    @classmethod
    def make(cls, kind, n: int, iota: Sequence[int] = (), base: Optional[JValuation] = None) -> "ContractionSpec":
        k = normalize_kind(kind)
        idx = tuple(sorted(set(int(i) for i in iota)))
        allowed = admissible_indices(k, n)
        for i in idx:
            if i not in allowed:
                if k == "so" and i % 2:
                    raise InadmissibleSpec(
                        f"j{i} has an odd index; the orthogonal structure theorems only cover "
                        f"nilpotent even-indexed parameters (allowed: {list(allowed)})")
                raise InadmissibleSpec(f"j{i} is not admissible for {k}, n={n} (allowed: {list(allowed)})")
        if base is not None:
            if len(base) != n:
                raise InadmissibleSpec(f"residual valuation has length {len(base)}, expected {n}")
            for i in range(1, n + 1):
                if i not in idx and base[i] is JValue.IOTA:
                    raise InadmissibleSpec(f"residual parameter j{i} must be 1 or i, not iota")
        return cls(k, n, idx, base)

    @property
    def valuation(self) -> JValuation:
        return JValuation.with_iota(self.n, self.iota, self.base)

    def cuts(self) -> Tuple[int, ...]:
        """The k_p of the theorems (iota indices halved for so)."""
        if self.kind == "so":
            return tuple(i // 2 for i in self.iota)
        return self.iota

    def __str__(self) -> str:
        return f"{self.kind}(n={self.n}; {self.valuation})"


def all_specs(kind, n: int, residual_choices: Sequence[JValue] = (JValue.ONE,)) -> List[ContractionSpec]:
    """Every admissible spec: nonempty iota subsets times residual valuations."""
    from itertools import combinations, product

    k = normalize_kind(kind)
    allowed = admissible_indices(k, n)
    out = []
    for r in range(1, len(allowed) + 1):
        for sub in combinations(allowed, r):
            free = [i for i in range(1, n + 1) if i not in sub]
            for vals in product(residual_choices, repeat=len(free)):
                assign = dict(zip(free, vals))
                base = JValuation(tuple(assign.get(i, JValue.ONE) for i in range(1, n + 1)))
                out.append(ContractionSpec.make(k, n, sub, base))
    return out


# -- Gamma tables -----------------------------------------------------------------------

@dataclass
class GammaCell:
    row: int
    col: int
    labels: List[Label]
    monomial: Optional[JMonomial]
    value: Optional[PimenovElement]

    @property
    def diagonal(self) -> bool:
        return self.monomial is None

    @property
    def zero(self) -> bool:
        return self.value is not None and not self.value

    def text(self) -> str:
        if self.diagonal:
            if len(self.labels) == 3:
                return f"M{self.labels[0].index}"
            return str(self.labels[0])
        if self.zero:
            return "0"
        return str(self.monomial)

    def to_json(self) -> dict:
        return {"row": self.row, "col": self.col, "labels": [str(x) for x in self.labels],
                "monomial": None if self.monomial is None else str(self.monomial),
                "value": None if self.value is None else str(self.value), "zero": self.zero}


@dataclass
class GammaTable:
    kind: str
    n: int
    valuation: JValuation
    rows: List[int]
    cols: List[int]
    cells: Dict[Tuple[int, int], GammaCell]

    def cell(self, r: int, c: int) -> GammaCell:
        return self.cells[(r, c)]

    def zero_labels(self) -> List[Label]:
        return [lab for cell in self.cells.values() if cell.zero for lab in cell.labels]

    def render(self) -> str:
        texts = {key: cell.text() for key, cell in self.cells.items()}
        width = max(len(t) for t in texts.values())
        lines = [f"Gamma[{self.kind}, n={self.n}]({self.valuation})",
                 "    " + " ".join(f"{c:^{width + 2}}" for c in self.cols)]
        for r in self.rows:
            parts = []
            for c in self.cols:
                t = texts.get((r, c))
                parts.append(" " * (width + 2) if t is None else f"|{t:^{width}}|")
            lines.append(f"{r:>3} " + " ".join(parts).rstrip())
        return "\n".join(lines)

    def to_json(self) -> dict:
        return {"kind": self.kind, "n": self.n, "valuation": str(self.valuation),
                "rows": self.rows, "cols": self.cols,
                "cells": [self.cells[k].to_json() for k in sorted(self.cells)]}


def _pm(kind: str, n: int, r: int, s: int) -> List[Root]:
    return [make_root(kind, n, {r: a, s: b}) for a in (1, -1) for b in (1, -1)]


def gamma_table(kind, n: int, v: JValuation) -> GammaTable:
    k = normalize_kind(kind)
    if len(v) != n:
        raise ValueError(f"valuation length {len(v)} != {n}")
    cells: Dict[Tuple[int, int], GammaCell] = {}

    def put(r, c, labels, mono):
        cells[(r, c)] = GammaCell(r, c, labels, mono, None if mono is None else jmono_eval(mono, v))

    if k == "so":
        m = (n + 1) // 2
        rows = list(range(1, m + 1))
        cols = list(range(1, m + 2 if n % 2 == 0 else m + 1))
        for r in rows:
            put(r, r, [CartanLabel(r)], None)
            for s in range(r + 1, m + 1):
                put(r, s, _pm(k, n, r, s), JMonomial.squares(2 * r, 2 * s - 2))
            if n % 2 == 0:
                put(r, m + 1, [make_root(k, n, {r: 1}), make_root(k, n, {r: -1})],
                    JMonomial.squares(2 * r, n))
    elif k == "u":
        rows = cols = list(range(0, n + 1))
        for a in rows:
            put(a, a, [CartanLabel(a)], None)
            for b in range(a + 1, n + 1):
                put(a, b, [make_root(k, n, {a: 1, b: -1}), make_root(k, n, {b: 1, a: -1})],
                    JMonomial.squares(a + 1, b))
    elif k in ("su", "sl"):
        rows = list(range(0, n))
        cols = list(range(0, n + 1))
        for a in rows:
            put(a, a, [CartanLabel(a + 1, True)], None)
            for b in range(a + 1, n + 1):
                put(a, b, [make_root(k, n, {a: 1, b: -1}), make_root(k, n, {b: 1, a: -1})],
                    JMonomial.squares(a + 1, b))
    else:
        rows = cols = list(range(1, n + 1))
        for a in rows:
            put(a, a, [CartanLabel(a), make_root(k, n, {a: 2}), make_root(k, n, {a: -2})], None)
            for b in range(a + 1, n + 1):
                put(a, b, _pm(k, n, a, b), JMonomial.squares(a + 1, b))
    return GammaTable(k, n, v, rows, cols, cells)


# -- predicted decompositions ----------------------------------------------------------

@dataclass
class Block:
    """One summand of M: a smaller algebra of the same family in an index window.

    ``size`` is the matrix size for so, the matrix size for u/su blocks and
    the rank for sp.  ``window`` lists the Cartan indices (so, sp) or the
    coordinate indices e_k (u, su) covered by the block.
    """

    family: str
    size: int
    window: Tuple[int, ...]
    params: Tuple[int, ...]
    labels: List[Label] = field(default_factory=list)

    @property
    def dim(self) -> int:
        return len(self.labels)

    def expected_dim(self) -> int:
        s = self.size
        return {"so": s * (s - 1) // 2, "u": s * s, "su": s * s - 1, "sp": s * (2 * s + 1)}[self.family]

    @property
    def name(self) -> str:
        if self.family == "so" and self.size == 2:
            return f"H{self.window[0]}"
        if self.family == "u" and self.size == 1:
            lab = self.labels[0]
            return str(lab)
        if self.family == "sp" and self.size == 1:
            return f"M{self.window[0]}"
        ps = ",".join(f"j{p}" for p in self.params)
        return f"{self.family}({self.size};{ps})" if ps else f"{self.family}({self.size})"

    def to_json(self) -> dict:
        return {"name": self.name, "family": self.family, "size": self.size,
                "window": list(self.window), "params": list(self.params), "dim": self.dim,
                "labels": [str(x) for x in self.labels]}


@dataclass
class LeviMaltsev:
    kind: str
    n: int
    spec: ContractionSpec
    radical: List[Label]
    blocks: List[Block]

    @property
    def semisimple_labels(self) -> List[Label]:
        return [lab for b in self.blocks for lab in b.labels]

    def formula(self) -> str:
        m = " ⊕ ".join(b.name for b in self.blocks)
        if len(self.blocks) > 1 and self.radical:
            m = f"({m})"
        if not self.radical:
            return m
        return f"T{len(self.radical)} ∔ {m}"

    def flattened_basis(self, balanced: bool = True) -> List[Dict[int, object]]:
        v = self.spec.valuation
        basis = dict(algebra_basis(self.kind, self.n, v, balanced))
        return [flatten(basis[lab]) for lab in self.radical + self.semisimple_labels]

    def to_json(self) -> dict:
        return {"kind": self.kind, "n": self.n, "valuation": str(self.spec.valuation),
                "formula": self.formula(), "radical": [str(x) for x in self.radical],
                "radical_dim": len(self.radical), "blocks": [b.to_json() for b in self.blocks]}


def _windows(cuts: Sequence[int], lo: int, hi: int) -> List[Tuple[int, ...]]:
    """Split lo..hi at the cut points (each cut starts a new window)."""
    edges = [lo] + list(cuts) + [hi + 1]
    return [tuple(range(a, b)) for a, b in zip(edges, edges[1:]) if b > a]


def predicted_decomposition(kind, n: int, spec: ContractionSpec) -> LeviMaltsev:
    k = normalize_kind(kind)
    if spec.kind != k or spec.n != n:
        raise InadmissibleSpec("spec does not match kind/n")
    cuts = spec.cuts()
    roots = root_system(k, n)
    blocks: List[Block] = []
    if k == "so":
        m = (n + 1) // 2
        odd = n % 2 == 0
        # Cartan windows (k_s, k_{s+1}]; only the final one carries short roots
        edges = [0] + list(cuts) + [m]
        for i, (a, b) in enumerate(zip(edges, edges[1:])):
            w = tuple(range(a + 1, b + 1))
            if not w:
                continue
            final = odd and i == len(edges) - 2
            size = 2 * len(w) + (1 if final else 0)
            params = tuple(range(2 * w[0] - 1, 2 * w[0] - 1 + size - 1))
            blocks.append(Block("so", size, w, params, [CartanLabel(x) for x in w]))
    elif k == "u":
        for w in _windows(cuts, 0, n):
            params = tuple(range(w[0] + 1, w[-1] + 1))
            blocks.append(Block("u", len(w), w, params, [CartanLabel(x) for x in w]))
    elif k in ("su", "sl"):
        wins = _windows(cuts, 0, n)
        for i, w in enumerate(wins):
            params = tuple(range(w[0] + 1, w[-1] + 1))
            if i < len(wins) - 1:
                cart = [CartanLabel(x, True) for x in range(w[0] + 1, w[-1] + 2)]
                blocks.append(Block("u", len(w), w, params, cart))
            elif len(w) > 1 or not cuts:
                cart = [CartanLabel(x, True) for x in range(w[0] + 1, w[-1] + 1)]
                blocks.append(Block("su", len(w), w, params, cart))
    else:
        for w in _windows(cuts, 1, n):
            params = tuple(range(w[0] + 1, w[-1] + 1))
            blocks.append(Block("sp", len(w), w, params, [CartanLabel(x) for x in w]))

    radical: List[Label] = []
    for r in roots:
        sup = r.support()
        home = None
        for b in blocks:
            if all(x in b.window for x in sup):
                if k == "so" and len(sup) == 1 and b.size % 2 == 0:
                    continue
                home = b
                break
        if home is None:
            radical.append(r)
        else:
            home.labels.append(r)
    return LeviMaltsev(k, n, spec, radical, blocks)


# -- verification --------------------------------------------------------------------

@dataclass
class CheckResult:
    name: str
    passed: Optional[bool]
    detail: str = ""

    def to_json(self) -> dict:
        return {"name": self.name, "passed": self.passed, "detail": self.detail}


@dataclass
class DecompositionReport:
    kind: str
    n: int
    valuation: str
    formula: str
    checks: List[CheckResult]
    radical_abelian: Optional[bool] = None
    radical_lower_central: List[int] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed is not False for c in self.checks)

    def check(self, name: str) -> CheckResult:
        return next(c for c in self.checks if c.name == name)

    def to_json(self) -> dict:
        return {"kind": self.kind, "n": self.n, "valuation": self.valuation, "formula": self.formula,
                "passed": self.passed, "radical_abelian": self.radical_abelian,
                "radical_lower_central": self.radical_lower_central,
                "checks": [c.to_json() for c in self.checks]}


def _embed(small: PMatrix, size: int, arity: int, rowmap) -> PMatrix:
    entries = {}
    for (i, j), e in small.entries.items():
        if not e.is_scalar():
            raise ValueError("block generator carries a nilpotent entry")
        entries[(rowmap(i), rowmap(j))] = PimenovElement.const(e.unit_part(), arity)
    return PMatrix._raw(size, size, arity, entries)


def _fresh_block(kind: str, n: int, v: JValuation, block: Block) -> List[PMatrix]:
    """Generators of a newly built algebra of the block's type, embedded in its window."""
    vals = lambda idx: JValuation(tuple(v[i] for i in idx))  # noqa: E731
    if block.family == "so":
        off = 2 * (block.window[0] - 1)
        sn = block.size - 1
        small = algebra_basis("so", sn, vals(range(off + 1, off + sn + 1)))
        return [_embed(M, n + 1, n, lambda r: r + off) for _, M in small]
    if block.family in ("u", "su"):
        off = block.window[0]
        sn = block.size - 1
        fam = "su" if kind in ("su", "sl") else "u"
        if sn == 0:
            if fam == "su":
                return []
            return [PMatrix.unit(n + 1, off, off, n)]
        small = algebra_basis(fam, sn, vals(range(off + 1, off + sn + 1)), balanced=True)
        return [_embed(M, n + 1, n, lambda r: r + off) for _, M in small]
    b = block.size
    kp = block.window[0]
    sv = JValuation((JValue.ONE,) + tuple(v[i] for i in range(kp + 1, kp + b)))
    small = algebra_basis("sp", b, sv)
    rowmap = lambda r: (kp - 1 + r) if r < b else (kp - 1 + (r - b) + n)  # noqa: E731
    return [_embed(M, 2 * n, n, rowmap) for _, M in small]


def build_algebra(kind, n: int, v: JValuation) -> LieAlgebra:
    """Contracted algebra realized by matrices that stay independent under iota."""
    basis = algebra_basis(kind, n, v, balanced=True)
    return LieAlgebra([lab for lab, _ in basis], [m for _, m in basis])


def _scalar_gram(mats: Sequence[PMatrix]) -> Optional[List[List[object]]]:
    gram = []
    for A in mats:
        row = []
        for B in mats:
            t = A.matmul(B).trace()
            if not t.is_scalar():
                return None
            row.append(t.unit_part())
        gram.append(row)
    return gram


def verify_decomposition(kind, n: int, spec: ContractionSpec,
                         predicted: Optional[LeviMaltsev] = None) -> DecompositionReport:
    """Exact checks (i)-(vii) of a predicted Levi-Maltsev decomposition.

    (i) [T,T] in T; (ii) [M,T] in T; (iii) [M,M] in M; (iv) T and M are
    complementary; (v) the lower central series of T reaches 0;
    (vi) M is reductive with semisimple derived algebra: the trace form of
    the defining representation is nondegenerate on M and the Killing form
    of M is nondegenerate on [M,M]; (vii) each block spans the same space as
    a freshly built algebra of the predicted type in its index window.
    """
    k = normalize_kind(kind)
    lm = predicted or predicted_decomposition(k, n, spec)
    v = spec.valuation
    L = build_algebra(k, n, v)
    checks: List[CheckResult] = []
    checks.append(CheckResult("closure", L.closed,
                              "" if L.closed else f"{len(L.escapes)} brackets leave the span"))
    Tidx = [L.index[x] for x in lm.radical]
    Midx = [L.index[x] for x in lm.semisimple_labels]
    Tset, Mset = set(Tidx), set(Midx)

    def inside(pairs, allowed):
        for i, j in pairs:
            c = L.bracket_basis(i, j)
            if any(key not in allowed for key in c):
                return f"[{L.labels[i]}, {L.labels[j]}] leaves the subspace"
        return ""

    TT = [(i, j) for a, i in enumerate(Tidx) for j in Tidx[a + 1:]]
    MT = [(i, j) for i in Midx for j in Tidx]
    MM = [(i, j) for a, i in enumerate(Midx) for j in Midx[a + 1:]]
    for name, pairs, allowed in (("i_TT_in_T", TT, Tset), ("ii_MT_in_T", MT, Tset), ("iii_MM_in_M", MM, Mset)):
        bad = inside(pairs, allowed)
        checks.append(CheckResult(name, not bad, bad))

    allv = [flatten(L.matrices[i]) for i in Tidx + Midx]
    r_all = Echelon(allv).rank
    r_T = Echelon(allv[:len(Tidx)]).rank
    r_M = Echelon(allv[len(Tidx):]).rank
    ok = r_T == len(Tidx) and r_M == len(Midx) and r_all == r_T + r_M == L.dim
    checks.append(CheckResult("iv_complement", ok, f"dim T={r_T}, dim M={r_M}, dim L={L.dim}"))

    T_vecs = [L.unit(i) for i in Tidx]
    lcs = L.lower_central_series(T_vecs, max_steps=len(Tidx) + 1)
    checks.append(CheckResult("v_T_nilpotent", lcs[-1] == 0, "lower central dims " + ",".join(map(str, lcs))))
    abelian = all(not L.bracket_basis(i, j) for i, j in TT)

    gram = _scalar_gram([L.matrices[i] for i in Midx])
    if gram is None:
        checks.append(CheckResult("vi_M_reductive", None, "M carries nilpotent entries; not applicable"))
    else:
        trace_ok = dense_rank(gram) == len(Midx)
        D = L.bracket_span([L.unit(i) for i in Midx], [L.unit(i) for i in Midx]).basis()
        kill = L.killing_form(D, Midx) if D else []
        kill_ok = dense_rank(kill) == len(D) if D else True
        checks.append(CheckResult("vi_M_reductive", trace_ok and kill_ok,
                                  f"trace form rank {dense_rank(gram)}/{len(Midx)}, "
                                  f"Killing rank on [M,M] {dense_rank(kill) if D else 0}/{len(D)}"))

    problems = []
    for b in lm.blocks:
        if b.dim != b.expected_dim():
            problems.append(f"{b.name}: dim {b.dim} != {b.expected_dim()}")
            continue
        fresh = _fresh_block(k, n, v, b)
        e_block = Echelon(flatten(L.matrices[L.index[x]]) for x in b.labels)
        e_fresh = Echelon(flatten(m) for m in fresh)
        if b.family == "u" and k in ("su", "sl"):
            good = all(e_block.contains(flatten(m)) for m in fresh)
        else:
            good = e_block.basis() == e_fresh.basis()
        if not good:
            problems.append(f"{b.name}: span differs from a fresh {b.family}({b.size})")
    checks.append(CheckResult("vii_blocks", not problems, "; ".join(problems)))
    return DecompositionReport(k, n, str(v), lm.formula(), checks, abelian, lcs)


# -- ordered contractions ------------------------------------------------------------

@dataclass
class RadicalBlock:
    index: int
    labels: List[Label]
    abelian: bool
    subalgebra: bool
    ideal_in_T: bool
    ideal_in_L: bool

    def to_json(self) -> dict:
        return {"contracted": self.index, "dim": len(self.labels), "labels": [str(x) for x in self.labels],
                "abelian": self.abelian, "subalgebra": self.subalgebra,
                "ideal_in_T": self.ideal_in_T, "ideal_in_L": self.ideal_in_L}


@dataclass
class RadicalBlocks:
    kind: str
    n: int
    order: Tuple[int, ...]
    blocks: List[RadicalBlock]
    commute: Dict[Tuple[int, int], bool]
    relation: str

    def to_json(self) -> dict:
        return {"kind": self.kind, "n": self.n, "order": list(self.order), "relation": self.relation,
                "blocks": [b.to_json() for b in self.blocks],
                "commute": [[a, b, c] for (a, b), c in sorted(self.commute.items())]}


def radical_block_structure(kind, n: int, order: Sequence[int],
                            base: Optional[JValuation] = None) -> RadicalBlocks:
    """Split the final radical into the pieces added by each successive contraction.

    Block t holds the root vectors that join the radical at step t.  The
    relation string nests left to right: ``A ⊕ B`` when both pieces are
    ideals of their sum and commute, ``A ∔ B`` when only the accumulated
    part is an ideal, ``A + B`` otherwise (vector-space sum only).
    """
    k = normalize_kind(kind)
    order = tuple(int(x) for x in order)
    if len(set(order)) != len(order) or not order:
        raise ValueError("order must list distinct parameter indices")
    full = ContractionSpec.make(k, n, order, base)
    L = build_algebra(k, n, full.valuation)
    prev: set = set()
    pieces: List[Tuple[int, List[Label]]] = []
    for t in range(1, len(order) + 1):
        spec = ContractionSpec.make(k, n, order[:t], base)
        cur = set(predicted_decomposition(k, n, spec).radical)
        new = sorted(cur - prev, key=lambda r: r.sort_key())
        pieces.append((order[t - 1], new))
        prev = cur
    Tidx = {L.index[x] for x in prev}
    blocks = []
    for idx, labs in pieces:
        ids = [L.index[x] for x in labs]
        S = set(ids)
        pairs = [(i, j) for a, i in enumerate(ids) for j in ids[a + 1:]]
        abelian = all(not L.bracket_basis(i, j) for i, j in pairs)
        sub = all(set(L.bracket_basis(i, j)) <= S for i, j in pairs)
        ideal_T = all(set(L.bracket_basis(i, j)) <= S for i in ids for j in Tidx)
        ideal_L = all(set(L.bracket_basis(i, j)) <= S for i in ids for j in range(L.dim))
        blocks.append(RadicalBlock(idx, labs, abelian, sub, ideal_T, ideal_L))
    commute = {}
    for a in range(len(blocks)):
        for b in range(a + 1, len(blocks)):
            ia = [L.index[x] for x in blocks[a].labels]
            ib = [L.index[x] for x in blocks[b].labels]
            commute[(a, b)] = all(not L.bracket_basis(i, j) for i in ia for j in ib)
    names: List[str] = []
    for b in blocks:
        nm = f"T{len(b.labels)}"
        while nm in names:
            nm += "~"
        names.append(nm)
    acc_ids = {L.index[x] for x in blocks[0].labels}
    rel = names[0]
    for t in range(1, len(blocks)):
        new_ids = {L.index[x] for x in blocks[t].labels}
        both = acc_ids | new_ids
        acc_ideal = all(set(L.bracket_basis(i, j)) <= acc_ids for i in acc_ids for j in both)
        new_ideal = all(set(L.bracket_basis(i, j)) <= new_ids for i in new_ids for j in both)
        commuting = all(not L.bracket_basis(i, j) for i in acc_ids for j in new_ids)
        op = "⊕" if acc_ideal and new_ideal and commuting else ("∔" if acc_ideal else "+")
        rel = f"{rel} {op} {names[t]}" if t == 1 else f"({rel}) {op} {names[t]}"
        acc_ids = both
    rel = f"T{len(prev)} = {rel}"
    return RadicalBlocks(k, n, order, blocks, commute, rel)
