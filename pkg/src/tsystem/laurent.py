"""Sparse multivariate Laurent polynomials with integer coefficients.

Variables are small tuples ``(kind, i, j)`` ordered first by kind and then by
site.  Besides the initial values ``t[i,j]`` and coefficients ``c[i,j]`` there
is a column-tail generator ``tau[i,a]`` standing for the formal infinite
product ``c[i,a] * c[i,a+1] * ...``; ratios of tails inside one column reduce
to finite products of ``c`` variables.  Further kinds (``A``, ``lam``, ``p``,
...) carry the variables of the specialisation schemes.

Polynomials are immutable.  A polynomial is stored as a mapping from an
exponent key (a tuple of ``(var, exponent)`` pairs sorted by variable) to a
nonzero integer coefficient.
"""

from __future__ import annotations

import heapq
import re
import sys
from array import array
from functools import lru_cache
from dataclasses import dataclass
from enum import IntEnum
from fractions import Fraction
from typing import Callable, Iterable, Mapping, NamedTuple, Union

from .errors import MissingScheme, NegativeCoefficient, NotDivisible, NotTFree, ResidualTail


class Kind(IntEnum):
    T = 0
    C = 1
    TAIL = 2
    A = 3
    B = 4
    SC = 5  # the Speyer "C" family; lower-case c is the coefficient kind
    D = 6
    LAM = 7
    MU = 8
    P = 9
    Q = 10


_NAMES = {
    Kind.T: "t",
    Kind.C: "c",
    Kind.TAIL: "tau",
    Kind.A: "A",
    Kind.B: "B",
    Kind.SC: "C",
    Kind.D: "D",
    Kind.LAM: "lam",
    Kind.MU: "mu",
    Kind.P: "p",
    Kind.Q: "q",
}
_BY_NAME = {name: kind for kind, name in _NAMES.items()}
_SINGLE_INDEX = {Kind.LAM, Kind.MU, Kind.P, Kind.Q}


class Var(NamedTuple):
    """A variable; single-index kinds keep ``j = 0``."""

    kind: Kind
    i: int
    j: int = 0

    def __str__(self) -> str:
        name = _NAMES[self.kind]
        if self.kind in _SINGLE_INDEX:
            return f"{name}[{self.i}]"
        return f"{name}[{self.i},{self.j}]"


Key = tuple  # tuple[tuple[Var, int], ...]


@dataclass(frozen=True)
class Monomial:
    """A single term: nonzero integer coefficient times a power product."""

    coeff: int
    exponents: Key = ()

    def as_poly(self) -> "LaurentPoly":
        return LaurentPoly({self.exponents: self.coeff})

    def exponent(self, var: Var) -> int:
        for v, e in self.exponents:
            if v == var:
                return e
        return 0

    def __str__(self) -> str:
        return _render_term(self.exponents, self.coeff)


def _merge_keys(a: Key, b: Key) -> Key:
    """Multiply two power products given as sorted ``(var, exp)`` tuples."""
    if not a:
        return b
    if not b:
        return a
    acc = dict(a)
    for v, e in b:
        acc[v] = acc.get(v, 0) + e
    return _key_from_dict(acc)


def _key_from_dict(exps: Mapping[Var, int]) -> Key:
    return tuple(sorted((v, e) for v, e in exps.items() if e))


def _scale_key(key: Key, n: int) -> Key:
    return tuple((v, e * n) for v, e in key) if n else ()


# -- packed exponent vectors ------------------------------------------------
#
# Internally a power product is one Python integer: the exponent of the
# variable in slot ``s`` contributes ``e << (_W * s)``.  This is an injective
# group homomorphism from exponent vectors (with |e| < 2**(_W-1)) into the
# integers, so multiplying monomials is integer addition and the integer
# order is a term order compatible with multiplication.

_W = 16
_FULL = 1 << _W
_HALF = 1 << (_W - 1)
_SLOT: dict[Var, int] = {}
_VARS: list[Var] = []
# Adding ``_bias`` lifts every field to an unsigned value ``e + _HALF`` with
# no borrows between fields; ``_tail_mask`` selects the fields of tail
# generators and ``_tail_half`` is their value when all tail exponents vanish.
_bias = 0
_tail_mask = 0
_tail_half = 0
_TAIL_SLOTS: list[tuple[int, int, int]] = []  # (slot, column, base)


def _slot(v: Var) -> int:
    global _bias, _tail_mask, _tail_half
    s = _SLOT.get(v)
    if s is None:
        s = _SLOT[v] = len(_VARS)
        _VARS.append(v)
        _bias += _HALF << (_W * s)
        if v.kind == Kind.TAIL:
            _tail_mask += (_FULL - 1) << (_W * s)
            _tail_half += _HALF << (_W * s)
            _TAIL_SLOTS.append((s, v.i, v.j))
    return s


def _encode(key: Key) -> int:
    out = 0
    for v, e in key:
        if not -_HALF < e < _HALF:
            raise OverflowError(f"exponent {e} of {v} out of range")
        out += e << (_W * _slot(v))
    return out


@lru_cache(maxsize=1 << 18)
def _decode(packed: int) -> Key:
    if not packed:
        return ()
    n = len(_VARS)
    fields = array("H", (packed + _bias).to_bytes(2 * n, "little"))
    if sys.byteorder != "little":
        fields.byteswap()
    out = [(_VARS[s], f - _HALF) for s, f in enumerate(fields) if f != _HALF]
    out.sort()
    return tuple(out)


def _tail_part(packed: int) -> int:
    """The biased tail fields of a term; equals ``_tail_half`` when tail-free."""
    return (packed + _bias) & _tail_mask


def _packed_has_tail(d) -> bool:
    if not _tail_mask:
        return False
    return any((k + _bias) & _tail_mask != _tail_half for k in d)


def _tails_of(part: int) -> list[tuple[int, int, int]]:
    """Decode a biased tail part into ``(column, base, exponent)`` triples."""
    out = []
    for s, i, a in _TAIL_SLOTS:
        e = ((part >> (_W * s)) & (_FULL - 1)) - _HALF
        if e:
            out.append((i, a, e))
    return out


@lru_cache(maxsize=None)
def _tail_shift(i: int, a: int, b: int) -> int:
    """Code of ``tau[i,b] / tau[i,a] * c[i,a] ... c[i,b-1]`` (which equals 1)."""
    change = (1 << (_W * _slot(Var(Kind.TAIL, i, b)))) - (1 << (_W * _slot(Var(Kind.TAIL, i, a))))
    for x in range(a, b):
        change += 1 << (_W * _slot(Var(Kind.C, i, x)))
    return change


def _normalize_packed(d: dict) -> dict:
    """Rewrite every tail of a column onto the largest base present in ``d``.

    Uses ``tau[i,a] = c[i,a] ... c[i,b-1] * tau[i,b]``.  Terms are grouped by
    their tail pattern so the rewrite is computed once per pattern.
    """
    # read every tail part before new slots (which move the masks) appear
    bias, mask, half = _bias, _tail_mask, _tail_half
    keyed = [(k, cf, (k + bias) & mask) for k, cf in d.items()]
    parts: dict[int, list[tuple[int, int, int]]] = {}
    for _, _, part in keyed:
        if part != half and part not in parts:
            parts[part] = _tails_of(part)
    if not parts:
        return d
    top: dict[int, int] = {}
    for tails in parts.values():
        for i, a, _ in tails:
            if top.get(i, a) <= a:
                top[i] = a
    delta: dict[int, int] = {}
    for part, tails in parts.items():
        change = 0
        for i, a, e in tails:
            b = top[i]
            if a < b:
                change += e * _tail_shift(i, a, b)
        delta[part] = change
    out: dict[int, int] = {}
    get = out.get
    for k, cf, part in keyed:
        nk = k + delta.get(part, 0)
        out[nk] = get(nk, 0) + cf
    return {k: cf for k, cf in out.items() if cf}


class LaurentPoly:
    """Immutable Laurent polynomial over the integers."""

    __slots__ = ("_d", "_tail", "_hash")

    def __init__(self, data: Mapping[Key, int] | None = None):
        d: dict[int, int] = {}
        for k, cf in (data or {}).items():
            if cf:
                pk = _encode(k)
                d[pk] = d.get(pk, 0) + cf
        self._set(d, True)

    def _set(self, d: dict, maybe_tail: bool) -> None:
        if 0 in d.values():
            d = {k: cf for k, cf in d.items() if cf}
        tail = maybe_tail and _packed_has_tail(d)
        if tail:
            d = _normalize_packed(d)
            tail = _packed_has_tail(d)
        self._d = d
        self._tail = tail
        self._hash = None

    @classmethod
    def _raw(cls, d: dict, maybe_tail: bool) -> "LaurentPoly":
        obj = cls.__new__(cls)
        obj._set(d, maybe_tail)
        return obj

    # -- constructors -------------------------------------------------
    @classmethod
    def const(cls, n: int) -> "LaurentPoly":
        return cls._raw({0: n}, False)

    @classmethod
    def var(cls, v: Var, exp: int = 1) -> "LaurentPoly":
        return cls({((v, exp),) if exp else (): 1})

    @classmethod
    def monomial(cls, exps: Mapping[Var, int], coeff: int = 1) -> "LaurentPoly":
        return cls({_key_from_dict(exps): coeff})

    # -- basic queries ------------------------------------------------
    def items(self):
        """``(sparse exponent key, coefficient)`` pairs in arbitrary order."""
        return [(_decode(k), cf) for k, cf in self._d.items()]

    def is_zero(self) -> bool:
        return not self._d

    def is_monomial(self) -> bool:
        return len(self._d) == 1

    def __len__(self) -> int:
        return len(self._d)

    def variables(self) -> list[Var]:
        return sorted({v for k in self._d for v, _ in _decode(k)})

    @property
    def terms(self) -> list[Monomial]:
        """Terms in strictly increasing graded-lex order."""
        order = _grlex_sorter(self.variables())
        keys = sorted((_decode(k) for k in self._d), key=order)
        return [Monomial(self._d[_encode(k)], k) for k in keys]

    def leading_monomial(self) -> Monomial:
        (mono,) = self.terms[-1:]
        return mono

    # -- arithmetic ---------------------------------------------------
    def __add__(self, other):
        if isinstance(other, Ratio):
            return NotImplemented
        other = _coerce(other)
        d = dict(self._d)
        for k, cf in other._d.items():
            d[k] = d.get(k, 0) + cf
        return LaurentPoly._raw(d, self._tail or other._tail)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly._raw({k: -cf for k, cf in self._d.items()}, self._tail)

    def __sub__(self, other):
        if isinstance(other, Ratio):
            return NotImplemented
        return self + (-_coerce(other))

    def __rsub__(self, other):
        return _coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, Ratio):
            return NotImplemented
        other = _coerce(other)
        if len(self._d) < len(other._d):
            small, big = self._d, other._d
        else:
            small, big = other._d, self._d
        d: dict = {}
        get = d.get
        for ka, ca in small.items():
            for kb, cb in big.items():
                k = ka + kb
                d[k] = get(k, 0) + ca * cb
        return LaurentPoly._raw(d, self._tail or other._tail)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = ONE
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def inverse(self) -> "LaurentPoly":
        """Inverse of a unit, i.e. of a monomial with coefficient +-1."""
        if len(self._d) != 1:
            raise NotDivisible("only monomials are invertible")
        ((k, cf),) = self._d.items()
        if cf not in (1, -1):
            raise NotDivisible(f"coefficient {cf} is not a unit")
        return LaurentPoly._raw({-k: cf}, self._tail)

    def __truediv__(self, other):
        if isinstance(other, Ratio):
            return NotImplemented
        return exact_div(self, _coerce(other))

    # -- comparison ---------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, int):
            other = LaurentPoly.const(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        if self._tail or other._tail:
            # tails are normalised per polynomial; compare the difference
            return (self - other).is_zero()
        return self._d == other._d

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._d.items()))
        return self._hash

    def __str__(self) -> str:
        return render(self)

    def __repr__(self) -> str:
        return f"LaurentPoly({render(self)!r})"


def _coerce(x) -> LaurentPoly:
    if isinstance(x, LaurentPoly):
        return x
    if isinstance(x, Monomial):
        return x.as_poly()
    if isinstance(x, int):
        return LaurentPoly.const(x)
    raise TypeError(f"cannot use {type(x).__name__} as a Laurent polynomial")


def _monomial_gcd(p: LaurentPoly) -> LaurentPoly:
    """The monomial with, per variable, the least exponent over the terms of ``p``."""
    keys = [k for k, _ in p.items()]
    variables = {v for k in keys for v, _ in k}
    return LaurentPoly.monomial({v: min(dict(k).get(v, 0) for k in keys) for v in variables})


class Ratio:
    """A quotient ``num / den`` of Laurent polynomials, kept unreduced.

    Used where genuinely rational expressions occur (values of the
    pentagram map, the post-mutation value in the flatness identity).
    Equality is decided by cross-multiplication.  When the denominator
    divides the numerator exactly, :meth:`to_poly` returns the quotient.
    """

    __slots__ = ("num", "den")

    def __init__(self, num, den=1):
        num, den = _coerce(num), _coerce(den)
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if den.is_monomial():
            num, den = num * den.inverse(), ONE
        else:
            # divide out the largest monomial factor of the denominator
            common = _monomial_gcd(den)
            if common != ONE:
                inv = common.inverse()
                num, den = num * inv, den * inv
        self.num, self.den = num, den

    @staticmethod
    def _lift(x) -> "Ratio":
        return x if isinstance(x, Ratio) else Ratio(x)

    def __add__(self, other):
        o = Ratio._lift(other)
        if self.den == o.den:
            return Ratio(self.num + o.num, self.den)
        return Ratio(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return Ratio(-self.num, self.den)

    def __sub__(self, other):
        return self + (-Ratio._lift(other))

    def __rsub__(self, other):
        return Ratio._lift(other) - self

    def __mul__(self, other):
        o = Ratio._lift(other)
        return Ratio(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = Ratio._lift(other)
        if o.num.is_zero():
            raise ZeroDivisionError("division by zero")
        return Ratio(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        return Ratio._lift(other) / self

    def __pow__(self, n: int):
        if n < 0:
            return Ratio(ONE) / (self ** (-n))
        out = Ratio(ONE)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, (int, LaurentPoly, Monomial)):
            other = Ratio(other)
        if not isinstance(other, Ratio):
            return NotImplemented
        return self.num * other.den == other.num * self.den

    def __hash__(self):
        raise TypeError("Ratio is not hashable")

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def to_poly(self) -> LaurentPoly:
        return exact_div(self.num, self.den)

    def __str__(self) -> str:
        if self.den == ONE:
            return render(self.num)
        return f"({render(self.num)}) / ({render(self.den)})"

    __repr__ = __str__


ZERO = LaurentPoly()
ONE = LaurentPoly.const(1)


def t(i: int, j: int, exp: int = 1) -> LaurentPoly:
    return LaurentPoly.var(Var(Kind.T, i, j), exp)


def c(i: int, j: int, exp: int = 1) -> LaurentPoly:
    return LaurentPoly.var(Var(Kind.C, i, j), exp)


def tau(i: int, a: int, exp: int = 1) -> LaurentPoly:
    return LaurentPoly.var(Var(Kind.TAIL, i, a), exp)


def sym(kind: Kind, i: int, j: int = 0, exp: int = 1) -> LaurentPoly:
    return LaurentPoly.var(Var(kind, i, j), exp)


def c_product(i: int, lo: int, hi: int) -> LaurentPoly:
    """``c[i,lo] * c[i,lo+1] * ... * c[i,hi]``; empty products give 1."""
    return LaurentPoly.monomial({Var(Kind.C, i, a): 1 for a in range(lo, hi + 1)})


def product(factors: Iterable[LaurentPoly]) -> LaurentPoly:
    out = ONE
    for f in factors:
        out = out * f
    return out


def monomial_code(p: LaurentPoly) -> int:
    """Opaque integer code of a monic monomial.

    Codes add under multiplication, which lets callers multiply many
    monomials cheaply and build the sum once with :func:`sum_of_codes`.
    """
    if len(p._d) != 1:
        raise ValueError("not a monomial")
    ((k, cf),) = p._d.items()
    if cf != 1:
        raise ValueError("monomial is not monic")
    return k


def sum_of_codes(codes: Iterable[int]) -> LaurentPoly:
    """Sum of the monic monomials with the given codes (with multiplicity)."""
    d: dict[int, int] = {}
    get = d.get
    for k in codes:
        d[k] = get(k, 0) + 1
    return LaurentPoly._raw(d, True)


# -- ordering ---------------------------------------------------------------

def _dense(key: Key, index: Mapping[Var, int], n: int) -> list[int]:
    vec = [0] * n
    for v, e in key:
        vec[index[v]] = e
    return vec


def _grlex_sorter(variables: list[Var]) -> Callable[[Key], tuple]:
    """Sort key for graded-lex order; the first variable is most significant."""
    index = {v: n for n, v in enumerate(variables)}
    n = len(variables)

    def key(k: Key) -> tuple:
        vec = _dense(k, index, n)
        return (sum(vec), *vec)

    return key


# -- tails ------------------------------------------------------------------

def normalize_tails(p: LaurentPoly) -> LaurentPoly:
    """Rewrite every tail of a column onto the largest base index present.

    Construction already keeps polynomials in this form, so the function is
    the identity on any ``LaurentPoly``; it is exposed for symmetry with the
    raw dictionary interface.
    """
    return LaurentPoly._raw(dict(p._d), True)


def has_tail(p: LaurentPoly) -> bool:
    return p._tail


def assert_tail_free(p: LaurentPoly) -> LaurentPoly:
    if not p._tail:
        return p
    for k, _ in p.items():
        for v, e in k:
            if v.kind == Kind.TAIL and e:
                raise ResidualTail(f"tail {v} survives in {render(p)}")
    return p


# -- arithmetic entry points ------------------------------------------------

def add(a: LaurentPoly, b: LaurentPoly) -> LaurentPoly:
    return a + b


def mul(a: LaurentPoly, b: LaurentPoly) -> LaurentPoly:
    return a * b


def exact_div(num: LaurentPoly, den: LaurentPoly) -> LaurentPoly:
    """Exact quotient ``num / den``; raises ``NotDivisible`` otherwise.

    Long division with leading-term matching.  The term order is the order
    of packed exponent integers, which is compatible with multiplication, so
    leading terms strictly decrease.  In an exact division the smallest term
    of ``num`` is the product of the smallest terms of quotient and divisor;
    a candidate quotient term below that bound proves non-divisibility and
    also bounds the loop.
    """
    if den.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    if num.is_zero():
        return ZERO
    tail = num._tail or den._tail
    if den.is_monomial():
        ((dk, dc),) = den._d.items()
        out = {}
        for k, coeff in num._d.items():
            q, r = divmod(coeff, dc)
            if r:
                raise NotDivisible(f"coefficient {coeff} not divisible by {dc}")
            out[k - dk] = q
        return LaurentPoly._raw(out, tail)

    rem = dict(num._d)
    lead = max(den._d)
    lead_c = den._d[lead]
    floor = min(rem) - min(den._d)
    others = [(dk - lead, dc) for dk, dc in den._d.items() if dk != lead]
    # terms of ``num`` in descending order; keys created during the division
    # go on a heap, and the larger of the two heads is processed next
    pending = sorted(rem)
    heap: list[int] = []
    heappush, heappop = heapq.heappush, heapq.heappop
    quotient: dict = {}
    while rem:
        if heap and (not pending or -heap[0] > pending[-1]):
            top = -heappop(heap)
        else:
            top = pending.pop()
        coeff = rem.pop(top, 0)
        if not coeff:
            continue
        qc, r = divmod(coeff, lead_c)
        qe = top - lead
        if r or qe < floor:
            raise NotDivisible(f"{render(den)} does not divide {render(num)}")
        quotient[qe] = qc
        for shift, dc in others:
            e = top + shift
            old = rem.get(e)
            if old is None:
                rem[e] = -qc * dc
                heappush(heap, -e)
            else:
                val = old - qc * dc
                if val:
                    rem[e] = val
                else:
                    del rem[e]
    return LaurentPoly._raw(quotient, tail)


# -- substitution and evaluation -------------------------------------------

Scheme = Union[Mapping[tuple, object], Callable[[int, int], object]]


def substitute(p: LaurentPoly, rule: Callable[[Var], LaurentPoly | None]) -> LaurentPoly:
    """Replace variables by monomials; ``rule`` returns ``None`` to keep one."""
    out: dict = {}
    cache: dict = {}
    for k, coeff in p.items():
        key: Key = ()
        scale = coeff
        for v, e in k:
            if v not in cache:
                cache[v] = rule(v)
            img = cache[v]
            if img is None:
                key = _merge_keys(key, ((v, e),))
                continue
            if not img.is_monomial():
                raise ValueError(f"substitution for {v} must be a monomial")
            ((ik, ic),) = img.items()
            if e < 0 and ic not in (1, -1):
                raise NotDivisible(f"cannot invert coefficient {ic}")
            scale *= ic ** abs(e)
            key = _merge_keys(key, _scale_key(ik, e))
        out[key] = out.get(key, 0) + scale
    return LaurentPoly(out)


def _lookup(scheme: Scheme, site: tuple[int, int]) -> LaurentPoly:
    try:
        img = scheme(*site) if callable(scheme) else scheme[site]
    except KeyError:
        img = None
    if img is None:
        raise MissingScheme(site)
    return _coerce(img)


def substitute_c(p: LaurentPoly, scheme: Scheme) -> LaurentPoly:
    """Replace each ``c[i,j]`` by ``scheme(i, j)`` (a monomial)."""
    assert_tail_free(p)
    return substitute(p, lambda v: _lookup(scheme, (v.i, v.j)) if v.kind == Kind.C else None)


def eval_t_one(p: LaurentPoly) -> LaurentPoly:
    return substitute(p, lambda v: ONE if v.kind == Kind.T else None)


def eval_c_one(p: LaurentPoly) -> LaurentPoly:
    """Set every coefficient variable, tails included, to 1."""
    return substitute(p, lambda v: ONE if v.kind in (Kind.C, Kind.TAIL) else None)


def tropical_min_eval(p: LaurentPoly) -> Monomial:
    """Tropical (min-plus) sum of the terms of a subtraction-free polynomial."""
    if p.is_zero():
        raise ValueError("tropical evaluation of the zero polynomial")
    mins: dict[Var, int] = {}
    keys = [k for k, _ in p.items()]
    for k, coeff in p.items():
        if coeff <= 0:
            raise NegativeCoefficient(f"term with coefficient {coeff} in {render(p)}")
        for v, _ in k:
            if v.kind == Kind.T:
                raise NotTFree(f"{v} occurs in {render(p)}")
    variables = {v for k in keys for v, _ in k}
    for v in variables:
        mins[v] = min(dict(k).get(v, 0) for k in keys)
    return Monomial(1, _key_from_dict(mins))


def relabel_sites(p: LaurentPoly, f: Callable[[int, int], tuple[int, int]]) -> LaurentPoly:
    """Move every ``t`` and ``c`` variable from site ``(i, j)`` to ``f(i, j)``."""

    def rule(v: Var):
        if v.kind in (Kind.T, Kind.C):
            return LaurentPoly.var(Var(v.kind, *f(v.i, v.j)))
        return None

    return substitute(p, rule)


# -- canonical text -----------------------------------------------------------

def _render_term(key: Key, coeff: int) -> str:
    factors = [str(v) if e == 1 else f"{v}^{e}" for v, e in key]
    if not factors:
        return str(coeff)
    if coeff == 1:
        return "*".join(factors)
    if coeff == -1:
        return "-" + "*".join(factors)
    return "*".join([str(coeff), *factors])


def render(p: LaurentPoly) -> str:
    if p.is_zero():
        return "0"
    return " + ".join(_render_term(m.exponents, m.coeff) for m in p.terms)


_FACTOR = re.compile(r"([A-Za-z]+)\[(-?\d+)(?:,(-?\d+))?\](?:\^(-?\d+))?$")


def parse(text: str) -> LaurentPoly:
    """Inverse of :func:`render`."""
    text = text.strip()
    if text == "0":
        return ZERO
    total: dict = {}
    for term in text.split(" + "):
        coeff = 1
        if term.startswith("-") and not term[1:2].isdigit():
            coeff, term = -1, term[1:]
        exps: dict[Var, int] = {}
        for n, factor in enumerate(term.split("*")):
            if n == 0 and re.fullmatch(r"-?\d+", factor):
                coeff *= int(factor)
                continue
            m = _FACTOR.match(factor)
            if not m:
                raise ValueError(f"cannot parse factor {factor!r}")
            name, i, j, e = m.groups()
            if name not in _BY_NAME:
                raise ValueError(f"unknown variable family {name!r}")
            v = Var(_BY_NAME[name], int(i), int(j or 0))
            exps[v] = exps.get(v, 0) + int(e or 1)
        key = _key_from_dict(exps)
        total[key] = total.get(key, 0) + coeff
    return LaurentPoly(total)


def to_json_terms(p: LaurentPoly) -> list[dict]:
    return [
        {"coeff": m.coeff, "exponents": [[str(v), e] for v, e in m.exponents]}
        for m in p.terms
    ]


def evaluate(p: LaurentPoly, value: Callable[[Var], object]):
    """Numeric value of ``p`` with each variable replaced by ``value(var)``.

    Use exact numbers (``int``/``Fraction``) for exact results.
    """
    total = Fraction(0)
    cache: dict = {}
    for k, coeff in p.items():
        term = Fraction(coeff)
        for v, e in k:
            if v not in cache:
                cache[v] = Fraction(value(v))
            term *= cache[v] ** e
        total += term
    return total
