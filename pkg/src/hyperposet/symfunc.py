"""Symmetric functions in the power-sum basis with Laurent-polynomial
coefficients in a formal weight t.

Plethysm follows the weighted rule ``p_k o t = t^k``: inner coefficients are
raised, outer coefficients are left alone.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import factorial, prod
from typing import Iterable, Mapping

from sympy.functions.combinatorial.numbers import mobius, totient
from sympy.ntheory import divisors
from sympy.utilities.iterables import partitions as _sympy_partitions

from .algebra import MultiPoly, TruncatedSeries, solve_fixpoint
from .report import Check

Partition = tuple  # weakly decreasing positive ints
TermKey = tuple  # (partition, t-exponent)


@lru_cache(maxsize=None)
def partitions(n: int) -> tuple[Partition, ...]:
    """All partitions of n as decreasing tuples, in lexicographic order."""
    if n == 0:
        return ((),)
    out = []
    for mult in _sympy_partitions(n):
        out.append(tuple(sorted((k for k, m in mult.items() for _ in range(m)), reverse=True)))
    return tuple(sorted(out))


def multiplicity(part: Partition, k: int) -> int:
    """Number of parts equal to k."""
    return part.count(k)


@lru_cache(maxsize=None)
def z_lambda(part: Partition) -> int:
    """Centraliser order prod_k k^(m_k) m_k!."""
    return prod(k ** part.count(k) * factorial(part.count(k)) for k in set(part))


@lru_cache(maxsize=None)
def _merge(a: Partition, b: Partition) -> Partition:
    return tuple(sorted(a + b, reverse=True))


@lru_cache(maxsize=None)
def _scale_parts(part: Partition, k: int) -> Partition:
    return tuple(p * k for p in part)


def _add_into(acc: dict, key, value) -> None:
    v = acc.get(key)
    if v is None:
        acc[key] = value
    else:
        v += value
        if v:
            acc[key] = v
        else:
            del acc[key]


class SymFunc:
    """Truncated symmetric function ``sum c * t^e * p_lambda``.

    Terms live in a dict keyed by ``(partition, e)``; degrees above ``order``
    are dropped by every operation.  The empty partition holds the scalar term.
    """

    __slots__ = ("_terms", "order")

    def __init__(self, terms: Mapping[TermKey, object] | None = None, order: int = 8):
        clean: dict[TermKey, Fraction] = {}
        for (part, e), c in (terms or {}).items():
            part = tuple(sorted(part, reverse=True))
            if sum(part) > order:
                continue
            c = Fraction(c)
            if c:
                _add_into(clean, (part, int(e)), c)
        self._terms = clean
        self.order = order

    @classmethod
    def _raw(cls, terms: dict, order: int) -> SymFunc:
        obj = cls.__new__(cls)
        obj._terms = terms
        obj.order = order
        return obj

    # constructors

    @classmethod
    def zero(cls, order: int) -> SymFunc:
        return cls._raw({}, order)

    @classmethod
    def const(cls, c, order: int) -> SymFunc:
        c = Fraction(c)
        return cls._raw({((), 0): c} if c else {}, order)

    @classmethod
    def one(cls, order: int) -> SymFunc:
        return cls.const(1, order)

    @classmethod
    def p(cls, part, order: int, coef=1, t: int = 0) -> SymFunc:
        """``coef * t^t * p_part``; an int ``part`` means the single power sum p_k."""
        if isinstance(part, int):
            part = (part,)
        return cls({(tuple(part), t): coef}, order)

    @classmethod
    def t(cls, order: int, power: int = 1) -> SymFunc:
        return cls._raw({((), power): Fraction(1)}, order)

    @classmethod
    def from_coefficients(cls, coeffs: Mapping[Partition, MultiPoly], order: int) -> SymFunc:
        terms = {}
        for part, poly in coeffs.items():
            for e, c in poly.t_coeffs().items():
                terms[(tuple(part), e)] = c
        return cls(terms, order)

    # protocol

    def items(self):
        return self._terms.items()

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = SymFunc.const(other, self.order)
        if not isinstance(other, SymFunc):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def degrees(self) -> list[int]:
        return sorted({sum(p) for p, _ in self._terms})

    def min_degree(self) -> int | None:
        return min((sum(p) for p, _ in self._terms), default=None)

    def constant_term(self) -> MultiPoly:
        return MultiPoly.from_t_coeffs({e: c for (p, e), c in self._terms.items() if not p})

    def coefficient(self, part: Partition) -> MultiPoly:
        part = tuple(part)
        return MultiPoly.from_t_coeffs({e: c for (p, e), c in self._terms.items() if p == part})

    def coefficients(self, degree: int | None = None) -> dict[Partition, MultiPoly]:
        parts = sorted({p for p, _ in self._terms if degree is None or sum(p) == degree})
        return {p: self.coefficient(p) for p in parts}

    def homogeneous(self, n: int) -> SymFunc:
        return SymFunc._raw({k: c for k, c in self._terms.items() if sum(k[0]) == n}, self.order)

    def truncate(self, order: int) -> SymFunc:
        return SymFunc._raw({k: c for k, c in self._terms.items() if sum(k[0]) <= order}, order)

    def first_difference(self, other: SymFunc) -> int | None:
        diff = self - other
        return diff.min_degree()

    # arithmetic

    def _coerce(self, other) -> SymFunc:
        if isinstance(other, SymFunc):
            return other
        if isinstance(other, (int, Fraction)):
            return SymFunc.const(other, self.order)
        if isinstance(other, MultiPoly):
            return SymFunc({((), e): c for e, c in other.t_coeffs().items()}, self.order)
        return NotImplemented

    def __add__(self, other) -> SymFunc:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        order = min(self.order, other.order)
        out = {k: c for k, c in self._terms.items() if sum(k[0]) <= order}
        for k, c in other._terms.items():
            if sum(k[0]) <= order:
                _add_into(out, k, c)
        return SymFunc._raw(out, order)

    __radd__ = __add__

    def __neg__(self) -> SymFunc:
        return SymFunc._raw({k: -c for k, c in self._terms.items()}, self.order)

    def __sub__(self, other) -> SymFunc:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other) -> SymFunc:
        return (-self) + other

    def __mul__(self, other) -> SymFunc:
        if isinstance(other, (int, Fraction)):
            if not other:
                return SymFunc.zero(self.order)
            return SymFunc._raw({k: c * other for k, c in self._terms.items()}, self.order)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        order = min(self.order, other.order)
        a = sorted(((sum(p), p, e, c) for (p, e), c in self._terms.items()), key=lambda r: r[0])
        b = sorted(((sum(p), p, e, c) for (p, e), c in other._terms.items()), key=lambda r: r[0])
        out: dict = {}
        for da, pa, ea, ca in a:
            if da > order:
                break
            room = order - da
            for db, pb, eb, cb in b:
                if db > room:
                    break
                _add_into(out, (_merge(pa, pb), ea + eb), ca * cb)
        return SymFunc._raw(out, order)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> SymFunc:
        result = SymFunc.one(self.order)
        for _ in range(k):
            result = result * self
        return result

    def shift_t(self, power: int) -> SymFunc:
        """Multiply by t^power."""
        return SymFunc._raw({(p, e + power): c for (p, e), c in self._terms.items()}, self.order)

    def with_order(self, order: int) -> SymFunc:
        """Same terms (those of degree <= order) under a new truncation order."""
        return SymFunc._raw({k: c for k, c in self._terms.items() if sum(k[0]) <= order}, order)

    def evaluate_t(self, value) -> SymFunc:
        """Specialise t to a rational (t = 0 or t = 1 in practice)."""
        value = Fraction(value)
        out: dict = {}
        for (p, e), c in self._terms.items():
            if e < 0 and value == 0:
                raise ZeroDivisionError("negative power of t at t = 0")
            _add_into(out, (p, 0), c * value ** e)
        return SymFunc._raw(out, self.order)

    def adams(self, k: int) -> SymFunc:
        """p_k o f: p_i -> p_{ik}, t -> t^k."""
        out: dict = {}
        for (p, e), c in self._terms.items():
            if sum(p) * k <= self.order:
                _add_into(out, (_scale_parts(p, k), e * k), c)
        return SymFunc._raw(out, self.order)

    # output

    def __repr__(self) -> str:
        return f"SymFunc({self})"

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        chunks = []
        for part, poly in self.coefficients().items():
            mono = "*".join(f"p{k}" if m == 1 else f"p{k}^{m}"
                            for k, m in sorted(((k, part.count(k)) for k in set(part))))
            coef = str(poly)
            if not mono:
                chunks.append(f"({coef})")
            elif poly == 1:
                chunks.append(mono)
            else:
                chunks.append(f"({coef})*{mono}")
        return " + ".join(chunks)

    def to_json(self) -> list[dict]:
        """One object per degree: ``{"degree", "terms": [{"partition", "coef"}]}``."""
        out = []
        for n in self.degrees():
            terms = []
            for part, poly in self.coefficients(n).items():
                coef = {f"t^{e}": f"{c.numerator}/{c.denominator}" for e, c in poly.t_coeffs().items()}
                terms.append({"partition": list(part), "coef": coef})
            out.append({"degree": n, "terms": terms})
        return out

    @classmethod
    def from_json(cls, data: Iterable[Mapping], order: int) -> SymFunc:
        terms = {}
        for block in data:
            for term in block["terms"]:
                for texp, c in term["coef"].items():
                    terms[(tuple(term["partition"]), int(texp[2:]))] = Fraction(c)
        return cls(terms, order)


def plethysm(f: SymFunc, g: SymFunc) -> SymFunc:
    """f o g, linear in f; p_lambda o g = prod_k (p_k o g) with t -> t^k inside g."""
    if any(not part for (part, _), _c in g.items()):
        raise ValueError("plethysm needs an inner function without constant term")
    order = min(f.order, g.order)
    g = g.with_order(order)
    dmin = g.min_degree()
    adams_cache: dict[int, SymFunc] = {}
    prod_cache: dict[Partition, SymFunc] = {(): SymFunc.one(order)}

    def p_of(part: Partition) -> SymFunc:
        got = prod_cache.get(part)
        if got is None:
            head = part[0]
            if head not in adams_cache:
                adams_cache[head] = g.adams(head)
            got = p_of(part[1:]) * adams_cache[head]
            prod_cache[part] = got
        return got

    out: dict = {}
    for (part, e), c in f.items():
        if part and (dmin is None or sum(part) * dmin > order):
            continue
        for (q, eq), cq in p_of(part).items():
            _add_into(out, (q, eq + e), c * cq)
    return SymFunc._raw(out, order)


def suspension(f: SymFunc) -> SymFunc:
    """-(1/t) f(-t p_1, -t^2 p_2, ...), with formal t."""
    out = {}
    for (p, e), c in f.items():
        sign = -1 if len(p) % 2 == 0 else 1
        out[(p, e + sum(p) - 1)] = sign * c
    return SymFunc._raw(out, f.order)


def suspension_at_one(f: SymFunc) -> SymFunc:
    """The suspension specialised at t = 1 (the involution written Sigma)."""
    return suspension(f).evaluate_t(1)


def rank_shift(f: SymFunc) -> SymFunc:
    """(1/t) f(t p_1, t^2 p_2, ...): every element of weight t, one t removed.

    Unsigned counterpart of :func:`suspension`; it is the weight operator of
    the permutation characters of hypertrees and cyclic hypertrees.
    """
    return SymFunc._raw({(p, e + sum(p) - 1): c for (p, e), c in f.items()}, f.order)


def d_p1(f: SymFunc) -> SymFunc:
    """Partial derivative with respect to p_1; exact to one degree less than f."""
    out: dict = {}
    for (p, e), c in f.items():
        m = p.count(1)
        if m:
            q = list(p)
            q.remove(1)
            _add_into(out, (tuple(q), e), c * m)
    return SymFunc._raw(out, f.order - 1)


def mul_p1(f: SymFunc) -> SymFunc:
    """p_1 * f, which is exact to one degree more than f."""
    return SymFunc.p(1, f.order + 1) * f.with_order(f.order + 1)


def invert_unit(f: SymFunc) -> SymFunc:
    """1/f for f with scalar term exactly 1, by the truncated geometric series."""
    if f.constant_term() != 1:
        raise ValueError("invert_unit needs constant term 1")
    g = f - 1
    result = SymFunc.one(f.order)
    for _ in range(f.order):
        result = 1 - g * result
    return result


def exp_specialize(f: SymFunc) -> TruncatedSeries:
    """p_1 -> x, p_k -> 0 (k >= 2): the EGF of dimensions, as polynomials in t."""
    coeffs = [MultiPoly() for _ in range(f.order + 1)]
    for (p, e), c in f.items():
        if all(k == 1 for k in p):
            n = len(p)
            coeffs[n] = coeffs[n] + MultiPoly.monomial(c * factorial(n), t=e)
    return TruncatedSeries(coeffs, f.order)


# operad characters

def _comm(order: int) -> SymFunc:
    return SymFunc({(part, 0): Fraction(1, z_lambda(part))
                    for n in range(1, order + 1) for part in partitions(n)}, order)


def _assoc(order: int) -> SymFunc:
    return SymFunc({((1,) * n, 0): 1 for n in range(1, order + 1)}, order)


def _necklace(order: int, weight) -> SymFunc:
    terms: dict = {}
    for n in range(1, order + 1):
        for d in divisors(n):
            w = int(weight(d))
            if w:
                _add_into(terms, ((d,) * (n // d), 0), Fraction(w, n))
    return SymFunc(terms, order)


def _prelie(order: int) -> SymFunc:
    p1 = SymFunc.p(1, order)
    comm = operad("Comm", order)
    return solve_fixpoint(lambda tree: p1 * (1 + plethysm(comm, tree)), order, SymFunc.zero(order))


@lru_cache(maxsize=None)
def operad(name: str, order: int = 8) -> SymFunc:
    """Characters of Comm, Assoc, Lie, Cyc, Perm and PreLie up to degree ``order``."""
    if order < 1:
        raise ValueError("order must be at least 1")
    if name == "Comm":
        return _comm(order)
    if name == "Assoc":
        return _assoc(order)
    if name == "Lie":
        return _necklace(order, mobius)
    if name == "Cyc":
        return _necklace(order, totient)
    if name == "Perm":
        return SymFunc.p(1, order) * (1 + _comm(order))
    if name == "PreLie":
        return _prelie(order)
    raise ValueError(f"unknown operad {name!r}")


def _identity(name: str, lhs: SymFunc, rhs: SymFunc) -> Check:
    diff = lhs - rhs
    degree = diff.min_degree()
    detail = "" if degree is None else f"difference {diff.homogeneous(degree)}"
    return Check(name, degree is None, degree, detail)


def verify_identities(order: int = 8) -> list[Check]:
    """Koszul, Poisson, vertebrate and related identities between the operads."""
    if order < 3:
        raise ValueError("order must be at least 3")
    p1 = SymFunc.p(1, order)
    comm = operad("Comm", order)
    lie = operad("Lie", order)
    assoc = operad("Assoc", order)
    perm = operad("Perm", order)
    prelie = operad("PreLie", order)
    s_prelie = suspension_at_one(prelie)
    comm_s_prelie = plethysm(comm, s_prelie)
    return [
        _identity("koszul_comm", plethysm(suspension_at_one(lie), comm), p1),
        _identity("poisson", plethysm(comm, lie), assoc),
        _identity("koszul_perm_left", plethysm(s_prelie, perm), p1),
        _identity("koszul_perm_right", plethysm(perm, s_prelie), p1),
        _identity("vertebres", mul_p1(d_p1(prelie)), plethysm(assoc, prelie)),
        _identity("def_pl", s_prelie * comm_s_prelie, p1 - s_prelie),
        _identity("somme1", mul_p1(d_p1(s_prelie)) + d_p1(comm_s_prelie), SymFunc.one(order)),
    ]
