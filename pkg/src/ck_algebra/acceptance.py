"""Acceptance checks shared by the test suite and ``ck-algebra selftest``.

Each ``criterion_N`` function runs one numbered check family and returns a
:class:`CriterionResult`.  ``quick=True`` shrinks every sample so the whole
suite runs in a few seconds; the default scope is the full one.

Grids of independent verifications (Cartan-Weyl brackets, contraction
specs) fan out over a process pool when more than one CPU is available.
Results are collected in submission order, so reports stay deterministic.
"""

from __future__ import annotations

import itertools
import os
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

from .ck_groups import (PMatrix, antidiagonal, check_j_orthogonality, symplectic_basis_conjugate,
                        symplectic_D_matrix)
from .contraction import (ContractionSpec, all_specs, predicted_decomposition, radical_block_structure,
                          verify_decomposition)
from .exact_scalars import I, ONE, CyclotomicScalar
from .grassmann import GrassmannElement, grassmann_exp
from .pimenov import JValuation, JValue, PimenovElement
from .relcat import (NULL, LinearRelation, Parity, adjoint_relation, compose, compose_chain,
                     difference_form, dual_relation, end_embedding, grassmann_component, image_condition,
                     is_D_morphism, is_maximal_isotropic, is_morphism, lam, mu, random_D_morphism,
                     random_endomorphism, random_lagrangian, random_relation, random_scalar, rel_domain,
                     rel_image, rel_indef, rel_kernel, standard_object, theta)
from .repkit import (affine_product, check_projective, clifford_action,
                     end_generators_A, exterior_power_rep, extension_type, intertwiner_solutions,
                     intertwiner_space, is_generalized_berezin, kernel_from_product, lowering_functor,
                     operator_to_kernel, parity_split, same_semigroup_rep, self_rep_A,
                     spin_B, spin_B_matrix, spin_matrix, subordinate)
from .rootsys import predicted_terms, verify_cartan_weyl

MAX_LISTED_FAILURES = 10


@dataclass
class CriterionResult:
    number: int
    title: str
    checked: int = 0
    failures: List[str] = field(default_factory=list)
    notes: List[str] = field(default_factory=list)
    elapsed: float = 0.0
    budget: Optional[float] = None

    @property
    def within_budget(self) -> bool:
        return self.budget is None or self.elapsed <= self.budget

    @property
    def passed(self) -> bool:
        return not self.failures and self.checked > 0 and self.within_budget

    def fail(self, message: str) -> None:
        self.failures.append(message)

    def expect(self, ok: bool, message: str) -> bool:
        self.checked += 1
        if not ok:
            self.failures.append(message)
        return ok

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        budget = f" / {self.budget:.0f} s" if self.budget else ""
        text = f"criterion {self.number:2d} {status}  {self.title}  ({self.checked} checks, {self.elapsed:.1f} s{budget})"
        if not self.within_budget:
            text += "  over time budget"
        return text

    def to_json(self) -> dict:
        # timings are left out so identical runs give identical bytes
        return {
            "number": self.number,
            "title": self.title,
            "status": "pass" if self.passed else "fail",
            "checked": self.checked,
            "within_budget": self.within_budget,
            "failures": self.failures[:MAX_LISTED_FAILURES],
            "failure_count": len(self.failures),
            "notes": self.notes,
        }


def _timed(number: int, title: str, budget: Optional[float]):
    """Decorator: build the result object, time the body, catch crashes as failures."""
    def wrap(fn):
        def run(*args, **kw) -> CriterionResult:
            res = CriterionResult(number, title, budget=budget)
            t0 = time.perf_counter()
            try:
                fn(res, *args, **kw)
            except Exception as exc:  # a crash is a failed criterion, not a crashed suite
                res.fail(f"raised {type(exc).__name__}: {exc}")
            res.elapsed = time.perf_counter() - t0
            return res
        run.__name__ = fn.__name__
        run.__doc__ = fn.__doc__
        run.number = number
        run.title = title
        return run
    return wrap


def _map(fn: Callable, tasks: Sequence, workers: Optional[int]) -> List:
    n = workers if workers is not None else (os.cpu_count() or 1)
    if n <= 1 or len(tasks) < 2:
        return [fn(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, tasks, chunksize=max(1, len(tasks) // (4 * n))))


# ---------------------------------------------------------------------------
# 1-2: Cartan-Weyl closure
# ---------------------------------------------------------------------------

THREE = (JValue.ONE, JValue.IOTA, JValue.IMAG)
TWO = (JValue.ONE, JValue.IOTA)


class SignFlipPredictor:
    """Closed forms with the sign of one nonzero bracket flipped (mutation sanity)."""

    def __init__(self, x: str = "", y: str = ""):
        self.x, self.y = x, y

    def __call__(self, kind, x, y, n):
        terms = predicted_terms(kind, x, y, n)
        if terms and str(x) == self.x and str(y) == self.y:
            return [(-c, m, lab) for c, m, lab in terms]
        return terms


def first_nonzero_pair(kind: str, n: int) -> Tuple[str, str]:
    from .rootsys import basis_labels
    labels = basis_labels(kind, n)
    for i, x in enumerate(labels):
        for y in labels[i + 1:]:
            if predicted_terms(kind, x, y, n):
                return str(x), str(y)
    raise ValueError("abelian algebra has no nonzero bracket")


def valuation_grid(n: int, choices, sample: Optional[int], rng: random.Random) -> List[JValuation]:
    vals = list(JValuation.all(n, choices))
    if sample is None or sample >= len(vals):
        return vals
    pinned = [JValuation(tuple(c for _ in range(n))) for c in choices]
    rest = [v for v in vals if v not in pinned]
    return pinned + rng.sample(rest, sample - len(pinned))


def _cw_task(task) -> Tuple[int, List[str]]:
    kind, n, vtext, fault = task
    rep = verify_cartan_weyl(kind, n, JValuation.parse(vtext), predictor=fault)
    return rep.pairs_checked, [f"{kind} n={n} j=({vtext}): [{m.x}, {m.y}] computed "
                               f"{m.computed.to_json()['entries']} expected {m.formula}"
                               for m in rep.mismatches]


def _cw_grid(res: CriterionResult, plan, workers, fault_pair: Optional[Tuple[str, str]] = None) -> None:
    tasks = []
    for kind, n, vals in plan:
        fault = None
        if fault_pair is not None:
            fault = SignFlipPredictor(*fault_pair) if fault_pair else SignFlipPredictor(*first_nonzero_pair(kind, n))
        tasks += [(kind, n, str(v), fault) for v in vals]
    for pairs, bad in _map(_cw_task, tasks, workers):
        res.checked += pairs
        res.failures.extend(bad)
    res.notes.append(f"{len(tasks)} valuations")


@_timed(1, "Cartan-Weyl closure, orthogonal family", 60.0)
def criterion_1(res: CriterionResult, quick: bool = False, workers: Optional[int] = None,
                inject_fault: bool = False, seed: int = 1) -> None:
    """so(n+1; j), n = 2..7: exhaustive over {1, iota, i}^n up to n = 5, 60 samples above."""
    rng = random.Random(seed)
    plan = []
    for n in range(2, 8):
        if quick:
            sample = 6 if n >= 4 else None
        else:
            sample = None if n <= 5 else 60
        plan.append(("so", n, valuation_grid(n, THREE, sample, rng)))
    _cw_grid(res, plan, workers, () if inject_fault else None)


@_timed(2, "Cartan-Weyl closure, unitary/special-unitary/symplectic", 60.0)
def criterion_2(res: CriterionResult, quick: bool = False, workers: Optional[int] = None,
                inject_fault: bool = False, seed: int = 2) -> None:
    """u/su over {1, iota, i}^n (n <= 4 exhaustive, 100 samples at n = 5); sp n <= 4 over {1, iota}^n."""
    rng = random.Random(seed)
    plan = []
    for kind in ("u", "su"):
        for n in range(1, 6):
            if quick:
                sample = 5 if n >= 3 else None
            else:
                sample = None if n <= 4 else 100
            plan.append((kind, n, valuation_grid(n, THREE, sample, rng)))
    for n in range(1, 5):
        plan.append(("sp", n, valuation_grid(n, TWO, 4 if quick and n >= 3 else None, rng)))
    _cw_grid(res, plan, workers, () if inject_fault else None)


# ---------------------------------------------------------------------------
# 3-4: contractions
# ---------------------------------------------------------------------------

# (kind, n, iota, formula, radical labels or None, radical abelian)
PAPER_DECOMPOSITIONS = [
    ("so", 4, (2,), "T6 ∔ (H1 ⊕ so(3;j3,j4))", {"e1", "-e1", "e1+e2", "e1-e2", "-e1+e2", "-e1-e2"}, True),
    ("so", 4, (4,), "T4 ∔ so(4;j1,j2,j3)", {"e1", "-e1", "e2", "-e2"}, True),
    ("so", 4, (2, 4), "T8 ∔ (H1 ⊕ H2)", None, False),
    ("so", 3, (2,), "T4 ∔ (H1 ⊕ H2)", {"e1+e2", "e1-e2", "-e1+e2", "-e1-e2"}, True),
    ("so", 5, (2,), "T8 ∔ (H1 ⊕ so(4;j3,j4,j5))",
     {"e1+e2", "e1-e2", "-e1+e2", "-e1-e2", "e1+e3", "e1-e3", "-e1+e3", "-e1-e3"}, True),
    ("so", 5, (4,), "T8 ∔ (so(4;j1,j2,j3) ⊕ H3)",
     {"e1+e3", "e1-e3", "-e1+e3", "-e1-e3", "e2+e3", "e2-e3", "-e2+e3", "-e2-e3"}, True),
    ("so", 5, (2, 4), "T12 ∔ (H1 ⊕ H2 ⊕ H3)", None, False),
    ("u", 2, (1,), "T4 ∔ (H0 ⊕ u(2;j2))", {"e0-e1", "-e0+e1", "e0-e2", "-e0+e2"}, True),
    ("u", 2, (2,), "T4 ∔ (u(2;j1) ⊕ H2)", {"e0-e2", "-e0+e2", "e1-e2", "-e1+e2"}, True),
    ("u", 2, (1, 2), "T6 ∔ (H0 ⊕ H1 ⊕ H2)",
     {"e0-e1", "-e0+e1", "e0-e2", "-e0+e2", "e1-e2", "-e1+e2"}, False),
    ("su", 2, (1,), "T4 ∔ (Ht1 ⊕ su(2;j2))", {"e0-e1", "-e0+e1", "e0-e2", "-e0+e2"}, True),
    ("su", 2, (2,), "T4 ∔ u(2;j1)", {"e0-e2", "-e0+e2", "e1-e2", "-e1+e2"}, True),
    ("su", 2, (1, 2), "T6 ∔ (Ht1 ⊕ Ht2)",
     {"e0-e1", "-e0+e1", "e0-e2", "-e0+e2", "e1-e2", "-e1+e2"}, False),
]


def contraction_grid(quick: bool = False) -> List[Tuple[str, int]]:
    if quick:
        return [("so", n) for n in range(1, 5)] + [(k, n) for k in ("u", "su", "sp") for n in range(1, 3)]
    return ([("so", n) for n in range(1, 8)]
            + [(k, n) for k in ("u", "su") for n in range(1, 6)]
            + [("sp", n) for n in range(1, 6)])


def _contract_task(task) -> Tuple[int, List[str], Optional[int]]:
    kind, n, iota, vtext = task
    spec = ContractionSpec.make(kind, n, iota, JValuation.parse(vtext))
    rep = verify_decomposition(kind, n, spec)
    bad = [f"{kind} n={n} j=({vtext}) {c.name}: {c.detail}" for c in rep.checks if c.passed is False]
    single = len(predicted_decomposition(kind, n, spec).radical) if kind == "u" and len(iota) == 1 else None
    return len(rep.checks), bad, single


@_timed(3, "Contraction decompositions", 120.0)
def criterion_3(res: CriterionResult, quick: bool = False, workers: Optional[int] = None) -> None:
    """Every admissible spec passes checks (i)-(vii); the worked examples match exactly."""
    residual = (JValue.ONE,) if quick else (JValue.ONE, JValue.IMAG)
    tasks = []
    for kind, n in contraction_grid(quick):
        for spec in all_specs(kind, n, residual):
            tasks.append((kind, n, tuple(spec.iota), str(spec.valuation)))
    for (kind, n, iota, _), (count, bad, single) in zip(tasks, _map(_contract_task, tasks, workers)):
        res.checked += count
        res.failures.extend(bad)
        if single is not None:
            k1 = iota[0]
            res.expect(single == 2 * k1 * (n - k1 + 1),
                       f"u n={n} iota={k1}: dim T = {single}, expected {2 * k1 * (n - k1 + 1)}")
    res.notes.append(f"{len(tasks)} contraction specs")

    for kind, n, iota, formula, radical, abelian in PAPER_DECOMPOSITIONS:
        spec = ContractionSpec.make(kind, n, iota)
        lm = predicted_decomposition(kind, n, spec)
        rep = verify_decomposition(kind, n, spec, lm)
        tag = f"{kind} n={n} iota={iota}"
        res.expect(lm.formula() == formula, f"{tag}: formula {lm.formula()!r}, expected {formula!r}")
        if radical is not None:
            got = {str(x) for x in lm.radical}
            res.expect(got == radical, f"{tag}: radical {sorted(got)}")
        res.expect(rep.passed, f"{tag}: verification failed")
        res.expect(rep.radical_abelian is abelian, f"{tag}: radical abelian = {rep.radical_abelian}")
        if not abelian:
            res.expect(rep.check("v_T_nilpotent").passed is True, f"{tag}: radical not nilpotent")

    # so(6): the three contractions; the middle radical is T~8
    expected6 = {
        (2,): {"e1+e2", "e1-e2", "-e1+e2", "-e1-e2", "e1+e3", "e1-e3", "-e1+e3", "-e1-e3"},
        (4,): {"e1+e3", "e1-e3", "-e1+e3", "-e1-e3", "e2+e3", "e2-e3", "-e2+e3", "-e2-e3"},
    }
    for iota, rad in expected6.items():
        lm = predicted_decomposition("so", 5, ContractionSpec.make("so", 5, iota))
        res.expect({str(x) for x in lm.radical} == rad, f"so(6) iota={iota}: radical mismatch")
    lm = predicted_decomposition("so", 5, ContractionSpec.make("so", 5, (2, 4)))
    res.expect(len(lm.radical) == 12, "so(6) iota=(2,4): radical is not 12-dimensional")


@_timed(4, "Ordered-contraction block structures of so(5)", None)
def criterion_4(res: CriterionResult, quick: bool = False, workers: Optional[int] = None) -> None:
    a = radical_block_structure("so", 4, (2, 4))
    b = radical_block_structure("so", 4, (4, 2))
    res.expect(a.relation == "T8 = T6 ∔ T2", f"order (2,4): {a.relation}")
    res.expect(b.relation == "T8 = T4 ∔ T4~", f"order (4,2): {b.relation}")
    first, second = a.blocks
    res.expect({str(x) for x in first.labels} == {"e1", "-e1", "e1+e2", "e1-e2", "-e1+e2", "-e1-e2"},
               "order (2,4): T6 labels")
    res.expect({str(x) for x in second.labels} == {"e2", "-e2"}, "order (2,4): T2 labels")
    res.expect(first.ideal_in_T and not second.ideal_in_T, "order (2,4): ideal flags")
    first, second = b.blocks
    res.expect({str(x) for x in first.labels} == {"e1", "-e1", "e2", "-e2"}, "order (4,2): T4 labels")
    res.expect({str(x) for x in second.labels} == {"e1+e2", "e1-e2", "-e1+e2", "-e1-e2"},
               "order (4,2): T4~ labels")
    res.expect(first.abelian and second.abelian, "order (4,2): blocks abelian")
    res.expect(first.ideal_in_T and not second.ideal_in_T, "order (4,2): ideal flags")


# ---------------------------------------------------------------------------
# 5-6: relation categories
# ---------------------------------------------------------------------------

def _eq(a, b) -> bool:
    if a is NULL or b is NULL:
        return a is b
    return a == b


@_timed(5, "Category axioms of GA", 30.0)
def criterion_5(res: CriterionResult, quick: bool = False, workers: Optional[int] = None,
                seed: int = 5) -> None:
    rng = random.Random(seed)
    triples = 100 if quick else 1000
    duals = 50 if quick else 500
    nonnull = 0
    for _ in range(triples):
        d = [rng.randint(0, 6) for _ in range(4)]
        P = random_relation(rng, d[0], d[1])
        Q = random_relation(rng, d[1], d[2])
        R = random_relation(rng, d[2], d[3])
        QP = compose("GA", Q, P)
        res.expect(_eq(compose("GA", R, QP), compose("GA", compose("GA", R, Q), P)),
                   f"associativity fails at dims {d}")
        if QP is not NULL:
            nonnull += 1
            res.expect(QP.dim == P.dim + Q.dim - d[1], f"dimension formula fails at dims {d}")
        res.expect(_eq(adjoint_relation(QP), compose("GA", adjoint_relation(P), adjoint_relation(Q))),
                   f"(QP)* != P*Q* at dims {d}")
    for _ in range(duals):
        d = [rng.randint(0, 6) for _ in range(3)]
        P = random_relation(rng, d[0], d[1])
        Q = random_relation(rng, d[1], d[2])
        Pd, Qd = dual_relation(P), dual_relation(Q)
        res.expect(dual_relation(Pd) == P, "P'' != P")
        res.expect(Pd.dim + P.dim == d[0] + d[1], "dim P' + dim P != dim V + dim W")
        res.expect(rel_kernel(Pd) == rel_domain(P).annihilator(), "ker P' != Ann D(P)")
        res.expect(rel_domain(Pd) == rel_kernel(P).annihilator(), "D(P') != Ann ker P")
        res.expect(rel_indef(Pd) == rel_image(P).annihilator(), "Indef P' != Ann im P")
        res.expect(rel_image(Pd) == rel_indef(P).annihilator(), "im P' != Ann Indef P")
        QP, QdPd = compose("GA", Q, P), compose("GA", Qd, Pd)
        res.expect((QP is NULL) == (QdPd is NULL), "null is not preserved by duality")
        res.expect(_eq(QdPd, dual_relation(QP)), "(QP)' != Q'P'")
        res.expect(adjoint_relation(adjoint_relation(P)) == P, "P** != P")
    res.notes.append(f"{nonnull} non-null products")


ISOTROPIC_MAX_AMBIENT = 10


def _ranks(rng: random.Random, cat: str, max_ambient: int) -> List[int]:
    while True:
        ns = [rng.randint(0, 4) for _ in range(3)]
        dims = [standard_object(cat, k).dim for k in ns]
        if all(a + b <= max_ambient for a, b in itertools.combinations(dims, 2)):
            return ns


def _iso_pair(rng, cat, ns, zero_prob):
    O = [standard_object(cat, k) for k in ns]
    f = random_D_morphism if cat == "D" else random_lagrangian
    return O, f(rng, O[0], O[1], zero_prob=zero_prob), f(rng, O[1], O[2], zero_prob=zero_prob)


@_timed(6, "Isotropic categories GD/B/C/D", None)
def criterion_6(res: CriterionResult, quick: bool = False, workers: Optional[int] = None,
                seed: int = 6) -> None:
    rng = random.Random(seed)
    per_cat = 20 if quick else 200
    nulls = 0
    for cat in ("GD", "B", "C"):
        for it in range(per_cat):
            ns = _ranks(rng, cat, ISOTROPIC_MAX_AMBIENT)
            # sparse coefficients make null products common enough to test
            O, P, Q = _iso_pair(rng, cat, ns, 0.85 if it % 2 else 0.25)
            res.expect(is_morphism(cat, P, O[0], O[1]) and is_morphism(cat, Q, O[1], O[2]),
                       f"{cat}: random generator left the hom-set")
            QP = compose(cat, Q, P)
            overlap = rel_kernel(Q).intersect(rel_indef(P)).dim
            res.expect((QP is NULL) == (overlap > 0), f"{cat} ranks {ns}: null rule disagrees with ker/Indef")
            if QP is NULL:
                nulls += 1
                continue
            res.expect(is_maximal_isotropic(QP.space, difference_form(O[0], O[2])),
                       f"{cat} ranks {ns}: product is not maximal isotropic")
            res.expect(image_condition(Q, P), f"{cat} ranks {ns}: image condition fails")
    res.expect(nulls >= (4 if quick else 40), f"only {nulls} null products sampled")
    res.notes.append(f"{nulls} null products among {3 * per_cat}")

    dnon = 0
    for _ in range(per_cat // 2):
        ns = _ranks(rng, "D", 8)
        O, P, Q = _iso_pair(rng, "D", ns, 0.5)
        QP = compose("D", Q, P)
        if QP is NULL:
            continue
        dnon += 1
        res.expect(is_D_morphism(QP, O[0], O[2]), f"D ranks {ns}: product left the D hom-set")
    res.expect(dnon > 0, "no non-null D products")

    for it in range(per_cat):
        cat = ("GD", "B", "D")[it % 3]
        a, b = _ranks(rng, cat, ISOTROPIC_MAX_AMBIENT)[:2]
        V, W = standard_object(cat, a), standard_object(cat, b)
        F = difference_form(V, W)
        H = [random_lagrangian(rng, V, W, zero_prob=0.5).space for _ in range(3)]
        p12 = grassmann_component(H[0], H[1], F).value
        p23 = grassmann_component(H[1], H[2], F).value
        p13 = grassmann_component(H[0], H[2], F).value
        res.expect((p12 + p23) % 2 == p13, f"{cat}: component parity is not additive")
        res.expect(grassmann_component(H[0], H[0], F) is Parity.EVEN, f"{cat}: parity of H with itself")


# ---------------------------------------------------------------------------
# 7-8: spinors and Berezin kernels
# ---------------------------------------------------------------------------

def spin_parity(S) -> Optional[int]:
    """0 if ``S`` maps even to even (the Pi+ / Pi- split), 1 if it swaps them, None if mixed."""
    keep, flip = parity_split(S)
    return 0 if keep and not flip else 1 if flip and not keep else None


@_timed(7, "Spin functor", 60.0)
def criterion_7(res: CriterionResult, quick: bool = False, workers: Optional[int] = None,
                seed: int = 7) -> None:
    rng = random.Random(seed)
    count = 20 if quick else 200
    nulls = 0
    for it in range(count):
        ns = [rng.randint(0, 4) for _ in range(3)]
        O = [standard_object("GD", k) for k in ns]
        zp = 0.85 if it % 3 == 0 else 0.25
        P = random_lagrangian(rng, O[0], O[1], zero_prob=zp)
        Q = random_lagrangian(rng, O[1], O[2], zero_prob=zp)
        pairs = [(clifford_action(O[0], v), clifford_action(O[1], w)) for v, w in P.pairs()]
        full = intertwiner_solutions(pairs, 1 << O[1].rank, 1 << O[0].rank)
        res.expect(len(full) == 1, f"GD ranks {ns}: intertwiner space has dimension {len(full)}")
        chk = check_projective("GD", Q, P, *O)
        res.expect(chk.ok, f"GD ranks {ns}: Spin(Q)Spin(P) is not a multiple of Spin(QP)")
        nulls += chk.product_null
        par = [spin_parity(spin_matrix(X, a, b)) for X, a, b in ((P, O[0], O[1]), (Q, O[1], O[2]))]
        res.expect(None not in par, f"GD ranks {ns}: a spin operator mixes parities")
        if not chk.product_null and None not in par:
            QP = compose("GD", Q, P)
            res.expect(spin_parity(spin_matrix(QP, O[0], O[2])) == (par[0] + par[1]) % 2,
                       f"GD ranks {ns}: parity is not additive under composition")
    res.expect(nulls >= (2 if quick else 20), f"only {nulls} null composites sampled")
    res.notes.append(f"{nulls} null composites among {count}")

    for it in range(count // 4):
        ns = [rng.randint(1, 2) for _ in range(3)]  # odd dims 3 and 5
        O = [standard_object("B", k) for k in ns]
        P = random_lagrangian(rng, O[0], O[1], zero_prob=0.4)
        Q = random_lagrangian(rng, O[1], O[2], zero_prob=0.4)
        chk = check_projective("B", Q, P, *O, functor=spin_B_matrix)
        res.expect(chk.ok, f"B ranks {ns}: spin_B is not projectively multiplicative")
        S = spin_B(P, O[0], O[1])
        res.expect(S is not None and S.solution_dim == 1, f"B ranks {ns}: no unique intertwiner")
        res.expect(is_generalized_berezin(operator_to_kernel(S.matrix)),
                   f"B ranks {ns}: kernel is not of generalized Berezin form")


def _random_linear(rng: random.Random, n: int) -> GrassmannElement:
    while True:
        coeffs = [random_scalar(rng, zero_prob=0.2) for _ in range(n)]
        if any(coeffs):
            return GrassmannElement.linear(coeffs)


@_timed(8, "Berezin identities", None)
def criterion_8(res: CriterionResult, quick: bool = False, workers: Optional[int] = None,
                seed: int = 8) -> None:
    rng = random.Random(seed)
    count = 30 if quick else 240
    for it in range(count):
        n = rng.randint(1, 6)
        one = GrassmannElement.one(n)
        k = 2 + it % 4  # 2..5 factors
        nus = [_random_linear(rng, n) for _ in range(k)]
        n1, n2 = nus[0], nus[1]
        lhs = (one + n1) * (one + n2)
        res.expect(lhs == grassmann_exp(n1 + n2 + n1 * n2), "two-factor product != exp(n1 + n2 + n1 n2)")
        res.expect(lhs == grassmann_exp(n1 * n2) * grassmann_exp(n1 + n2),
                   "two-factor product != exp(n1 n2) exp(n1 + n2)")
        res.expect(grassmann_exp(n1 * n2) == lhs * (one - n1 - n2), "exp(n1 n2) != (1+n1)(1+n2)(1-n1-n2)")
        prod = affine_product([one + x for x in nus])
        pair_sum = GrassmannElement(n)
        for a, b in itertools.combinations(nus, 2):
            pair_sum = pair_sum + a * b
        total = GrassmannElement(n)
        for x in nus:
            total = total + x
        res.expect(prod == grassmann_exp(pair_sum) * grassmann_exp(total), f"{k}-factor product identity fails")
        if n >= 2:
            m = rng.randint(1, n - 1)
            bk = kernel_from_product([one + x for x in nus], m, n - m)
            res.expect(bk.kernel() == prod, "exponential presentation differs from the product")


# ---------------------------------------------------------------------------
# 9: ordered categories and lowering functors
# ---------------------------------------------------------------------------

MAX_ORDER_RANK = 4


@_timed(9, "Ordered-category data and lowering functors", None)
def criterion_9(res: CriterionResult, quick: bool = False, workers: Optional[int] = None,
                seed: int = 9) -> None:
    rng = random.Random(seed)
    top = 3 if quick else MAX_ORDER_RANK
    for cat in ("A", "B", "C", "D"):
        for t in range(1, top + 1):
            Vt = standard_object(cat, t)
            ident = LinearRelation.identity(Vt.dim)
            for s in range(t):
                Vs = standard_object(cat, s)
                L, M = lam(cat, s, t), mu(cat, t, s)
                tag = f"{cat} {s}<{t}"
                res.expect(is_morphism(cat, L, Vs, Vt) and is_morphism(cat, M, Vt, Vs), f"{tag}: not morphisms")
                res.expect(_eq(compose(cat, M, L), LinearRelation.identity(Vs.dim)), f"{tag}: mu lam != 1")
                th = theta(cat, t, s)
                res.expect(_eq(th, compose(cat, L, M)), f"{tag}: theta != lam mu")
                res.expect(_eq(compose(cat, th, th), th), f"{tag}: theta not idempotent")
                res.expect(_eq(compose(cat, M, th), M), f"{tag}: mu theta != mu")
                res.expect(_eq(compose(cat, th, L), L), f"{tag}: theta lam != lam")
                res.expect(not _eq(th, ident), f"{tag}: theta is the identity")
                for m in range(s + 1, t):
                    res.expect(_eq(compose(cat, lam(cat, m, t), lam(cat, s, m)), L), f"{cat} {s}<{m}<{t}: lam chain")
                    res.expect(_eq(compose(cat, mu(cat, m, s), mu(cat, t, m)), M), f"{cat} {s}<{m}<{t}: mu chain")
                for s2 in range(s):
                    th2 = theta(cat, t, s2)
                    res.expect(_eq(compose(cat, th, th2), th2) and _eq(compose(cat, th2, th), th2),
                               f"{cat} {s2}<{s}<{t}: theta products")
    # U_alpha^beta: multiplicative, with left inverse P -> mu U(P) lam (hence injective)
    for cat in ("A", "B", "C", "D"):
        for _ in range(3 if quick else 8):
            beta = rng.randint(1, top)
            alpha = rng.randint(0, beta - 1)
            P = random_endomorphism(rng, cat, alpha, zero_prob=0.4)
            Q = random_endomorphism(rng, cat, alpha, zero_prob=0.4)
            U = lambda X: end_embedding(cat, X, alpha, beta)  # noqa: E731
            tag = f"{cat} U_{alpha}^{beta}"
            res.expect(_eq(compose(cat, U(Q), U(P)), U(compose(cat, Q, P))), f"{tag}: not multiplicative")
            res.expect(_eq(compose_chain(cat, mu(cat, beta, alpha), U(P), lam(cat, alpha, beta)), P),
                       f"{tag}: no left inverse")
            res.expect(_eq(U(P), U(Q)) == _eq(P, Q), f"{tag}: not injective")

    # lowering functors on Lambda^j of the defining representation of A
    A = self_rep_A()
    for n in range(2, top + 1):
        for j in range(1, n + 2):
            R = exterior_power_rep(A, j)
            F = lowering_functor(R, n, n - 1)
            tag = f"Lambda^{j} at rank {n}"
            if j == n + 1:
                res.expect(F.dim == 0, f"{tag}: lowering should vanish")
                continue
            res.expect(F.dim == R.dim(n - 1), f"{tag}: lowered dim {F.dim}")
            want = "zero" if j == n else "maximal"
            res.expect(extension_type(F) == want, f"{tag}: extension {extension_type(F)}, expected {want}")
            gens = end_generators_A(n - 1)
            res.expect(intertwiner_space(F, subordinate(R, n - 1), gens) == 1,
                       f"{tag}: lowered rep not equivalent to the subordinate one")
    for g in range(2, top + 1):
        for b in range(1, g):
            for a in range(b):
                for j in range(1, g + 2):
                    R = exterior_power_rep(A, j)
                    twice = lowering_functor(lowering_functor(R, g, b), b, a)
                    once = lowering_functor(R, g, a)
                    probes = [random_endomorphism(rng, "A", a) for _ in range(2)] + end_generators_A(a)
                    res.expect(same_semigroup_rep(twice, once, probes), f"F F != F for {g}>{b}>{a}, j={j}")


# ---------------------------------------------------------------------------
# 10: worked symplectic-basis matrices of SO(3; j)
# ---------------------------------------------------------------------------

# entry -> [(iota indices, coefficient, symbol)]; symbol "1" is the literal one
Pattern = Dict[Tuple[int, int], List[Tuple[Tuple[int, ...], str, str]]]


def so3_pattern(diag: Tuple[int, ...], b: Tuple[int, ...], bt: Tuple[int, ...]) -> Pattern:
    """Generic SO(3; j) layout: which j-monomial sits on each real/imaginary part."""
    return {
        (0, 0): [((), "1", "b11"), (diag, "i", "bt11")],
        (0, 1): [(b, "1", "b12"), (bt, "-i", "bt12")],
        (0, 2): [((), "1", "b31"), (diag, "-i", "bt31")],
        (1, 0): [(b, "1", "b21"), (bt, "i", "bt21")],
        (1, 1): [((), "1", "b22")],
        (1, 2): [(b, "1", "b21"), (bt, "-i", "bt21")],
        (2, 0): [((), "1", "b31"), (diag, "i", "bt31")],
        (2, 1): [(b, "1", "b12"), (bt, "i", "bt12")],
        (2, 2): [((), "1", "b11"), (diag, "-i", "bt11")],
    }


SO3_PATTERNS = {
    (1, 2, 3): so3_pattern((1, 2), (1,), (2,)),
    (2, 1, 3): so3_pattern((2,), (1,), (1, 2)),
    (1, 3, 2): so3_pattern((1,), (1, 2), (2,)),
}
# the remaining permutations reuse a layout (monomial positions only)
SO3_SAME_LAYOUT = {(3, 2, 1): (1, 2, 3), (3, 1, 2): (2, 1, 3), (2, 3, 1): (1, 3, 2)}

GALILEI_PATTERNS: Dict[Tuple[int, ...], Tuple[Pattern, Callable[[Dict[str, CyclotomicScalar]], bool], str]] = {
    (1, 2, 3): ({
        (0, 0): [((), "1", "1"), ((1, 2), "i", "bt11")],
        (0, 1): [((1,), "1", "b12"), ((2,), "-i", "bt12")],
        (0, 2): [((1, 2), "-i", "bt31")],
        (1, 0): [((1,), "-1", "b12"), ((2,), "-i", "bt12")],
        (1, 1): [((), "1", "1")],
        (1, 2): [((1,), "-1", "b12"), ((2,), "i", "bt12")],
        (2, 0): [((1, 2), "i", "bt31")],
        (2, 1): [((1,), "1", "b12"), ((2,), "i", "bt12")],
        (2, 2): [((), "1", "1"), ((1, 2), "-i", "bt11")],
    }, lambda s: s["bt31"] == -s["b12"] * s["bt12"], "bt31 = -b12 bt12"),
    (2, 1, 3): ({
        (0, 0): [((), "1", "1"), ((2,), "i", "bt11")],
        (0, 1): [((1,), "1", "b12"), ((1, 2), "-i", "bt12")],
        (0, 2): [],
        (1, 0): [((1,), "-1", "b12"), ((1, 2), "i", "bt21")],
        (1, 1): [((), "1", "1")],
        (1, 2): [((1,), "-1", "b12"), ((1, 2), "-i", "bt21")],
        (2, 0): [],
        (2, 1): [((1,), "1", "b12"), ((1, 2), "i", "bt12")],
        (2, 2): [((), "1", "1"), ((2,), "-i", "bt11")],
    }, lambda s: s["bt21"] == -s["bt12"] - s["b12"] * s["bt11"], "bt21 = -bt12 - b12 bt11"),
    (1, 3, 2): ({
        (0, 0): [((), "1", "1"), ((1,), "i", "bt11")],
        (0, 1): [((1, 2), "1", "b12"), ((2,), "-i", "bt12")],
        (0, 2): [],
        (1, 0): [((1, 2), "1", "b21"), ((2,), "-i", "bt12")],
        (1, 1): [((), "1", "1")],
        (1, 2): [((1, 2), "1", "b21"), ((2,), "i", "bt12")],
        (2, 0): [],
        (2, 1): [((1, 2), "1", "b12"), ((2,), "i", "bt12")],
        (2, 2): [((), "1", "1"), ((1,), "-i", "bt11")],
    }, lambda s: s["b21"] == -s["b12"] + s["bt11"] * s["bt12"], "b21 = -b12 + bt11 bt12"),
}

_COEF = {"1": ONE, "-1": -ONE, "i": I, "-i": -I}


def match_pattern(B: PMatrix, pattern: Pattern) -> Tuple[Optional[Dict[str, CyclotomicScalar]], str]:
    """Read symbol values off ``B``; ``(None, reason)`` if ``B`` does not fit the layout."""
    symbols: Dict[str, CyclotomicScalar] = {"1": ONE}
    for (r, c), terms in sorted(pattern.items()):
        entry = B[r, c]
        allowed = {tuple(m) for m, _, _ in terms}
        extra = [m for m in entry.monomials() if tuple(m) not in allowed]
        if extra:
            return None, f"entry ({r + 1},{c + 1}) has unexpected monomials {extra}"
        for mono, coef, sym in terms:
            value = entry.coefficient(mono) / _COEF[coef]
            if sym in symbols and symbols[sym] != value:
                return None, f"entry ({r + 1},{c + 1}): {sym} = {value}, earlier {symbols[sym]}"
            symbols[sym] = value
    return symbols, ""


def layout(B: PMatrix) -> Dict[Tuple[int, int], frozenset]:
    return {(r, c): frozenset(tuple(m) for m in B[r, c].monomials()) for r in range(3) for c in range(3)}


def _rand_q_i(rng: random.Random) -> CyclotomicScalar:
    while True:
        x = random_scalar(rng, zero_prob=0.0, bound=5)
        if x:
            return x


def galilei_matrix(a12, a13, a23, a31=None) -> PMatrix:
    """Galilei ``A(iota)`` with ``a31 = -a13 + a12 a23`` unless given."""
    if a31 is None:
        a31 = -a13 + a12 * a23
    i1, i2 = PimenovElement.iota(1, 2), PimenovElement.iota(2, 2)
    one = PimenovElement.one(2)
    return PMatrix(3, 3, 2, {
        (0, 0): one, (0, 1): i1 * a12, (0, 2): i1 * i2 * a13,
        (1, 0): -(i1 * a12), (1, 1): one, (1, 2): i2 * a23,
        (2, 0): i1 * i2 * a31, (2, 1): -(i2 * a23), (2, 2): one,
    })


def marker_matrix(rng: random.Random) -> PMatrix:
    """Generic Cartesian matrix with the interval product (mu, nu) as an iota monomial."""
    i1, i2 = PimenovElement.iota(1, 2), PimenovElement.iota(2, 2)
    marks = {(0, 1): i1, (1, 2): i2, (0, 2): i1 * i2}
    ent = {}
    for r in range(3):
        for c in range(3):
            m = PimenovElement.one(2) if r == c else marks[(min(r, c), max(r, c))]
            ent[(r, c)] = m * _rand_q_i(rng)
    return PMatrix(3, 3, 2, ent)


def conjugate_any(A: PMatrix, sigma) -> PMatrix:
    """``D_sigma A D_sigma^{-1}`` without the orthogonality precondition (it is linear in A)."""
    D = symplectic_D_matrix(3, sigma, A.arity)
    return D.matmul(A).matmul(D.transpose().matmul(antidiagonal(3, A.arity)))


@_timed(10, "Worked symplectic-basis matrices of SO(3; j)", None)
def criterion_10(res: CriterionResult, quick: bool = False, workers: Optional[int] = None,
                 seed: int = 10) -> None:
    rng = random.Random(seed)
    v = JValuation.parse("iota,iota")
    for _ in range(5 if quick else 25):
        A = marker_matrix(rng)
        for sigma, pattern in SO3_PATTERNS.items():
            _, why = match_pattern(conjugate_any(A, sigma), pattern)
            res.expect(not why, f"SO(3;j) sigma={sigma}: {why}")
        for sigma, ref in SO3_SAME_LAYOUT.items():
            res.expect(layout(conjugate_any(A, sigma)) == layout(conjugate_any(A, ref)),
                       f"SO(3;j) sigma={sigma}: layout differs from sigma={ref}")

        a12, a13, a23 = (_rand_q_i(rng) for _ in range(3))
        G = galilei_matrix(a12, a13, a23)
        res.expect(check_j_orthogonality(G, v), "Galilei matrix with a31 = -a13 + a12 a23 is not j-orthogonal")
        res.expect(not check_j_orthogonality(galilei_matrix(a12, a13, a23, -a13 + a12 * a23 + ONE), v),
                   "a perturbed a31 still passes j-orthogonality")
        for sigma, (pattern, constraint, text) in GALILEI_PATTERNS.items():
            sym, why = match_pattern(symplectic_basis_conjugate(G, sigma, v), pattern)
            if res.expect(sym is not None, f"Galilei sigma={sigma}: {why}"):
                res.expect(constraint(sym), f"Galilei sigma={sigma}: constraint {text} fails")


# ---------------------------------------------------------------------------
# 11: CLI goldens and schema
# ---------------------------------------------------------------------------

@_timed(11, "CLI golden files and selftest schema", None)
def criterion_11(res: CriterionResult, quick: bool = False, workers: Optional[int] = None) -> None:
    from . import cli
    for case in cli.golden_cases():
        golden = cli.read_golden(case.name)
        got = cli.render_golden(case)
        res.expect(got == golden, f"golden {case.name} differs from the committed file")
    # a small suite report stands in for the full one (which would recurse)
    report = cli.selftest_report(run_suite(only=[4, 10], quick=True))
    errors = cli.schema_errors(report, "selftest")
    res.expect(not errors, "selftest JSON violates the schema: " + "; ".join(errors[:3]))


# ---------------------------------------------------------------------------
# suite
# ---------------------------------------------------------------------------

CRITERIA = {f.number: f for f in (criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
                                  criterion_6, criterion_7, criterion_8, criterion_9, criterion_10,
                                  criterion_11)}


@dataclass
class SuiteReport:
    results: List[CriterionResult]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)


def run_suite(only: Optional[Iterable[int]] = None, quick: bool = False, workers: Optional[int] = None,
              inject_fault: bool = False, echo: Optional[Callable[[str], None]] = None) -> SuiteReport:
    """Run the selected criteria in order; ``inject_fault`` corrupts one closed-form bracket."""
    numbers = sorted(set(only)) if only else sorted(CRITERIA)
    unknown = [k for k in numbers if k not in CRITERIA]
    if unknown:
        raise ValueError(f"unknown criteria {unknown}")
    results = []
    for k in numbers:
        kw = {"quick": quick, "workers": workers}
        if inject_fault and k in (1, 2):
            kw["inject_fault"] = True
        r = CRITERIA[k](**kw)
        results.append(r)
        if echo is not None:
            echo(r.line())
    return SuiteReport(results)
