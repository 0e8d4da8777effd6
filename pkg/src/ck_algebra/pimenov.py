"""The Pimenov algebra: commuting nilpotent generators iota_k with iota_k^2 = 0.

Monomials iota_{k1}...iota_{kp} are stored internally as bitmasks (bit k-1 for
iota_k); the public API exposes them as sorted index tuples.  The module also
hosts the j-parameter machinery: valuations assigning each j_k one of
``1``, ``i`` or ``iota_k``, formal j-monomials, and interval products.
"""

from __future__ import annotations

import enum
import itertools
import re
from dataclasses import dataclass
from typing import Dict, Iterable, Iterator, Mapping, Sequence, Tuple, Union

from .exact_scalars import I, ONE, ZERO, CyclotomicScalar, parse_scalar, scalar

Monomial = Tuple[int, ...]


def mask_of(indices: Iterable[int]) -> int:
    m = 0
    for k in indices:
        if k < 1:
            raise ValueError(f"iota index must be >= 1, got {k}")
        bit = 1 << (k - 1)
        if m & bit:
            raise ValueError(f"repeated iota index {k}")
        m |= bit
    return m


def indices_of(mask: int) -> Monomial:
    out = []
    k = 1
    while mask:
        if mask & 1:
            out.append(k)
        mask >>= 1
        k += 1
    return tuple(out)


def _mono_sort_key(mask: int):
    idx = indices_of(mask)
    return (len(idx), idx)


class PimenovElement:
    """An element sum_m d_m * iota^m of the Pimenov algebra of given arity."""

    __slots__ = ("terms", "arity")

    def __init__(self, terms: Mapping = None, arity: int = 0):
        """
        :param terms: map from monomials (index tuples or bitmasks) to scalars
        :param arity: number of available nilpotent generators
        """
        object.__setattr__(self, "arity", arity)
        clean: Dict[int, CyclotomicScalar] = {}
        for mono, coef in (terms or {}).items():
            m = mono if isinstance(mono, int) else mask_of(mono)
            if m >> arity:
                raise ValueError(f"monomial {indices_of(m)} exceeds arity {arity}")
            c = scalar(coef)
            if c:
                prev = clean.get(m)
                c = c if prev is None else prev + c
                if c:
                    clean[m] = c
                else:
                    del clean[m]
        object.__setattr__(self, "terms", clean)

    @classmethod
    def _raw(cls, terms: Dict[int, CyclotomicScalar], arity: int) -> "PimenovElement":
        obj = object.__new__(cls)
        object.__setattr__(obj, "terms", terms)
        object.__setattr__(obj, "arity", arity)
        return obj

    def __setattr__(self, name, value):
        raise AttributeError("PimenovElement is immutable")

    @classmethod
    def const(cls, value, arity: int) -> "PimenovElement":
        c = scalar(value)
        return cls._raw({0: c} if c else {}, arity)

    @classmethod
    def zero(cls, arity: int) -> "PimenovElement":
        return cls._raw({}, arity)

    @classmethod
    def one(cls, arity: int) -> "PimenovElement":
        return cls._raw({0: ONE}, arity)

    @classmethod
    def iota(cls, k: int, arity: int) -> "PimenovElement":
        if not 1 <= k <= arity:
            raise ValueError(f"iota_{k} outside arity {arity}")
        return cls._raw({1 << (k - 1): ONE}, arity)

    # -- inspection -------------------------------------------------------
    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def unit_part(self) -> CyclotomicScalar:
        return self.terms.get(0, ZERO)

    def coefficient(self, indices: Iterable[int]) -> CyclotomicScalar:
        return self.terms.get(mask_of(indices), ZERO)

    def monomials(self) -> list:
        return [indices_of(m) for m in sorted(self.terms, key=_mono_sort_key)]

    def items(self):
        """(index tuple, coefficient) pairs in canonical order."""
        return [(indices_of(m), self.terms[m]) for m in sorted(self.terms, key=_mono_sort_key)]

    def is_scalar(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and 0 in self.terms)

    # -- arithmetic -------------------------------------------------------
    def _coerce(self, other) -> "PimenovElement":
        if isinstance(other, PimenovElement):
            if other.arity != self.arity:
                raise ValueError(f"arity mismatch: {self.arity} vs {other.arity}")
            return other
        return PimenovElement.const(other, self.arity)

    def __add__(self, other):
        other = self._coerce(other)
        if not other.terms:
            return self
        if not self.terms:
            return other
        out = dict(self.terms)
        for m, c in other.terms.items():
            prev = out.get(m)
            if prev is None:
                out[m] = c
            else:
                s = prev + c
                if s:
                    out[m] = s
                else:
                    del out[m]
        return PimenovElement._raw(out, self.arity)

    __radd__ = __add__

    def __neg__(self):
        return PimenovElement._raw({m: -c for m, c in self.terms.items()}, self.arity)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, PimenovElement):
            try:
                c = scalar(other)
            except TypeError:
                return NotImplemented
            if not c:
                return PimenovElement._raw({}, self.arity)
            return PimenovElement._raw({m: v * c for m, v in self.terms.items()}, self.arity)
        if other.arity != self.arity:
            raise ValueError(f"arity mismatch: {self.arity} vs {other.arity}")
        out: Dict[int, CyclotomicScalar] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                if m1 & m2:
                    continue
                m = m1 | m2
                t = c1 * c2
                prev = out.get(m)
                if prev is None:
                    out[m] = t
                else:
                    s = prev + t
                    if s:
                        out[m] = s
                    else:
                        del out[m]
        return PimenovElement._raw(out, self.arity)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            return NotImplemented
        result = PimenovElement.one(self.arity)
        for _ in range(k):
            result = result * self
        return result

    def conj(self) -> "PimenovElement":
        """Conjugate every coefficient; the iota generators are fixed."""
        return PimenovElement._raw({m: c.conj() for m, c in self.terms.items()}, self.arity)

    def inv(self) -> "PimenovElement":
        """Inverse via the terminating Neumann series of the nilpotent part."""
        d0 = self.unit_part()
        if not d0:
            raise ZeroDivisionError("element with zero unit part is not invertible")
        d0i = d0.inv()
        # self = d0 (1 + N) with N nilpotent, N^(arity+1) = 0
        nil = PimenovElement._raw({m: c * d0i for m, c in self.terms.items() if m}, self.arity)
        acc = PimenovElement.one(self.arity)
        power = PimenovElement.one(self.arity)
        for k in range(1, self.arity + 1):
            power = power * nil
            if not power:
                break
            acc = acc - power if k % 2 else acc + power
        return acc * d0i

    def __truediv__(self, other):
        if isinstance(other, PimenovElement):
            return self * other.inv()
        return self * scalar(other).inv()

    # -- comparison -------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, PimenovElement):
            return self.terms == other.terms
        try:
            c = scalar(other)
        except TypeError:
            return NotImplemented
        if not c:
            return not self.terms
        return len(self.terms) == 1 and self.terms.get(0) == c

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    # -- rendering --------------------------------------------------------
    def __str__(self) -> str:
        if not self.terms:
            return "0"
        out = []
        for m in sorted(self.terms, key=_mono_sort_key):
            c = self.terms[m]
            mono = "".join(f"I{k}" for k in indices_of(m))
            cs = str(c)
            if not mono:
                term = cs if c.n_terms() == 1 else f"({cs})"
            elif c.is_one():
                term = mono
            elif (-c).is_one():
                term = "-" + mono
            elif c.n_terms() == 1:
                term = f"{cs}*{mono}"
            else:
                term = f"({cs})*{mono}"
            if not out:
                out.append(term)
            elif term.startswith("-"):
                out.append(" - " + term[1:])
            else:
                out.append(" + " + term)
        return "".join(out)

    def __repr__(self) -> str:
        return f"PimenovElement({str(self)!r}, arity={self.arity})"


_MONO_RE = re.compile(r"^(?:(?P<coef>.*?)\*)?(?P<mono>(?:I\d+)+)$")


def _split_top_level(text: str) -> list:
    """Split into signed terms at + or - outside parentheses."""
    terms, depth, cur, sign = [], 0, "", "+"
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if depth == 0 and ch in "+-":
            if cur:
                terms.append((sign, cur))
                cur = ""
                sign = ch
            else:
                sign = "-" if (sign == "-") != (ch == "-") else "+"
            continue
        cur += ch
    if depth != 0:
        raise ValueError(f"unbalanced parentheses in {text!r}")
    if cur:
        terms.append((sign, cur))
    return terms


def parse_pimenov(text: str, arity: int = None) -> PimenovElement:
    """Parse ``"d0 + d1*I1 + (1 + i)*I1I2"`` style text."""
    src = text.replace(" ", "")
    if not src:
        raise ValueError("empty element")
    parsed = []
    for sign, body in _split_top_level(src):
        m = _MONO_RE.match(body)
        if m:
            mono = tuple(int(x) for x in re.findall(r"I(\d+)", m.group("mono")))
            coef_txt = m.group("coef")
        else:
            mono, coef_txt = (), body
        if coef_txt is None or coef_txt == "":
            coef = ONE
        else:
            if coef_txt.startswith("(") and coef_txt.endswith(")"):
                coef_txt = coef_txt[1:-1]
            coef = parse_scalar(coef_txt)
        if sign == "-":
            coef = -coef
        parsed.append((mono, coef))
    need = max((max(mn) for mn, _ in parsed if mn), default=0)
    if arity is None:
        arity = need
    elif need > arity:
        raise ValueError(f"element {text!r} needs arity {need}, got {arity}")
    out: Dict[int, CyclotomicScalar] = {}
    for mono, coef in parsed:
        k = mask_of(mono)
        out[k] = out.get(k, ZERO) + coef
    return PimenovElement(out, arity)


def pim_add(x: PimenovElement, y: PimenovElement) -> PimenovElement:
    return x + y


def pim_mul(x: PimenovElement, y: PimenovElement) -> PimenovElement:
    return x * y


def pim_inv(x: PimenovElement) -> PimenovElement:
    return x.inv()


def pim_conj(x: PimenovElement) -> PimenovElement:
    return x.conj()


# -- j-parameters ---------------------------------------------------------------

class JValue(enum.Enum):
    ONE = "1"
    IMAG = "i"
    IOTA = "iota"

    def __str__(self) -> str:
        return self.value


_JVALUE_ALIASES = {"1": JValue.ONE, "i": JValue.IMAG, "iota": JValue.IOTA, "ι": JValue.IOTA}


@dataclass(frozen=True)
class JValuation:
    """Assignment of j_1..j_n to 1, i or iota_k (positional)."""

    values: Tuple[JValue, ...]

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(self.values))
        for v in self.values:
            if not isinstance(v, JValue):
                raise TypeError(f"valuation entries must be JValue, got {v!r}")

    @classmethod
    def parse(cls, text: str) -> "JValuation":
        text = text.strip()
        if not text:
            return cls(())
        vals = []
        for tok in text.split(","):
            tok = tok.strip().lower()
            if tok not in _JVALUE_ALIASES:
                raise ValueError(f"unknown j value {tok!r}; use 1, i or iota")
            vals.append(_JVALUE_ALIASES[tok])
        return cls(tuple(vals))

    @classmethod
    def ones(cls, n: int) -> "JValuation":
        return cls((JValue.ONE,) * n)

    @classmethod
    def with_iota(cls, n: int, iota: Iterable[int], base: "JValuation" = None) -> "JValuation":
        vals = list(base.values) if base is not None else [JValue.ONE] * n
        if len(vals) != n:
            raise ValueError("base valuation has the wrong length")
        for k in iota:
            if not 1 <= k <= n:
                raise ValueError(f"iota index {k} outside 1..{n}")
            vals[k - 1] = JValue.IOTA
        return cls(tuple(vals))

    @staticmethod
    def all(n: int, choices: Sequence[JValue] = (JValue.ONE, JValue.IOTA)) -> Iterator["JValuation"]:
        for combo in itertools.product(choices, repeat=n):
            yield JValuation(combo)

    def __len__(self) -> int:
        return len(self.values)

    @property
    def arity(self) -> int:
        return len(self.values)

    def __getitem__(self, k: int) -> JValue:
        """1-based access: ``v[k]`` is the value assigned to j_k."""
        if not 1 <= k <= len(self.values):
            raise IndexError(f"j_{k} outside 1..{len(self.values)}")
        return self.values[k - 1]

    def __str__(self) -> str:
        return ",".join(str(v) for v in self.values)

    def iota_indices(self) -> Tuple[int, ...]:
        return tuple(k for k, v in enumerate(self.values, 1) if v is JValue.IOTA)

    def has_iota(self) -> bool:
        return JValue.IOTA in self.values

    def j(self, k: int) -> PimenovElement:
        return jmono_eval(JMonomial({k: 1}), self)


class JMonomial:
    """A formal product prod_k j_k^{e_k} with non-negative exponents."""

    __slots__ = ("exps",)

    def __init__(self, exponents: Union[Mapping[int, int], Iterable[Tuple[int, int]]] = ()):
        items = exponents.items() if isinstance(exponents, Mapping) else exponents
        acc: Dict[int, int] = {}
        for k, e in items:
            if e < 0:
                raise ValueError("negative exponents are not representable")
            if k < 1:
                raise ValueError(f"j index must be >= 1, got {k}")
            if e:
                acc[k] = acc.get(k, 0) + e
        object.__setattr__(self, "exps", tuple(sorted(acc.items())))

    def __setattr__(self, name, value):
        raise AttributeError("JMonomial is immutable")

    @classmethod
    def squares(cls, lo: int, hi: int) -> "JMonomial":
        """prod_{l=lo}^{hi} j_l^2 (empty product when lo > hi)."""
        return cls({l: 2 for l in range(lo, hi + 1)})

    @classmethod
    def interval(cls, lo: int, hi: int) -> "JMonomial":
        """prod_{l=lo}^{hi} j_l (empty product when lo > hi)."""
        return cls({l: 1 for l in range(lo, hi + 1)})

    def __mul__(self, other: "JMonomial") -> "JMonomial":
        return JMonomial(list(self.exps) + list(other.exps))

    def __eq__(self, other):
        return isinstance(other, JMonomial) and self.exps == other.exps

    def __hash__(self):
        return hash(self.exps)

    def is_one(self) -> bool:
        return not self.exps

    def as_dict(self) -> Dict[int, int]:
        return dict(self.exps)

    def __str__(self) -> str:
        if not self.exps:
            return "1"
        return "*".join(f"j{k}" if e == 1 else f"j{k}^{e}" for k, e in self.exps)

    def __repr__(self) -> str:
        return f"JMonomial({str(self)!r})"

    def evaluate(self, v: JValuation) -> PimenovElement:
        return jmono_eval(self, v)


_I_POWERS = (ONE, I, -ONE, -I)


def jmono_eval(m: JMonomial, v: JValuation) -> PimenovElement:
    """Substitute j_k in {1, i, iota_k}; iota_k^2 and higher powers give 0."""
    arity = len(v)
    coef = ONE
    mask = 0
    for k, e in m.exps:
        val = v[k]
        if val is JValue.IMAG:
            coef = coef * _I_POWERS[e % 4]
        elif val is JValue.IOTA:
            if e >= 2:
                return PimenovElement._raw({}, arity)
            mask |= 1 << (k - 1)
    return PimenovElement._raw({mask: coef}, arity)


def interval_product(mu: int, nu: int, v: JValuation) -> PimenovElement:
    """(mu, nu) = prod_{l=min}^{max-1} j_l, with (mu, mu) = 1."""
    lo, hi = min(mu, nu), max(mu, nu)
    if lo < 1 or hi > len(v) + 1:
        raise ValueError(f"indices ({mu},{nu}) outside 1..{len(v) + 1}")
    return jmono_eval(JMonomial.interval(lo, hi - 1), v)
