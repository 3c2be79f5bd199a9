"""Exact arithmetic kernel.

``MultiPoly`` is a sparse polynomial over the rationals in the variables
``t`` (Laurent), ``s`` and the edge-size markers ``u_2, u_3, ...``.
``TruncatedSeries`` is an exponential generating series in ``x``, stored as
the coefficients ``c_n`` of ``x^n / n!`` up to a fixed order.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb, factorial
from typing import Callable, Iterable, Mapping, Sequence, TypeVar, Union

Rational = Fraction

Scalar = Union[int, Fraction]
Key = tuple  # (t, s, u_2, u_3, ...) with trailing zero u-exponents stripped


class SeriesError(ValueError):
    """Raised when a series operation is applied outside its domain."""


class FixpointError(RuntimeError):
    """Raised when a fixed-point iteration is not contractive."""

    def __init__(self, degree: int):
        super().__init__(f"fixed-point iteration did not stabilise at degree {degree}")
        self.degree = degree


def as_rational(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    raise TypeError(f"cannot convert {value!r} to an exact rational")


def _strip(key: tuple) -> Key:
    end = len(key)
    while end > 2 and key[end - 1] == 0:
        end -= 1
    return key[:end] if end != len(key) else key


def _key_add(a: Key, b: Key) -> Key:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, e in enumerate(b):
        out[i] += e
    return _strip(tuple(out))


def _key_padded(key: Key, width: int) -> tuple:
    return key + (0,) * (width - len(key))


class MultiPoly:
    """Sparse polynomial in t (Laurent), s and u_2..u_K over Q.

    Instances are immutable.  Terms are kept in a dict keyed by exponent
    tuples ``(t, s, u_2, ..., u_K)``; zero coefficients are never stored.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Key, Scalar] | None = None):
        clean: dict[Key, Fraction] = {}
        if terms:
            for key, coef in terms.items():
                key = _strip(tuple(key))
                if any(e < 0 for e in key[1:]):
                    raise ValueError("only t may carry a negative exponent")
                c = as_rational(coef)
                if c:
                    clean[key] = clean.get(key, Fraction(0)) + c
                    if not clean[key]:
                        del clean[key]
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict[Key, Fraction]) -> MultiPoly:
        obj = cls.__new__(cls)
        obj._terms = terms
        obj._hash = None
        return obj

    # constructors

    @classmethod
    def const(cls, c: Scalar) -> MultiPoly:
        c = as_rational(c)
        return cls._raw({(0, 0): c} if c else {})

    @classmethod
    def monomial(cls, coef: Scalar = 1, t: int = 0, s: int = 0,
                 u: Mapping[int, int] | None = None) -> MultiPoly:
        key = [t, s]
        if u:
            width = max(u) - 1
            key.extend([0] * width)
            for i, e in u.items():
                if i < 2:
                    raise ValueError("edge markers start at u_2")
                key[i] = e
        return cls({tuple(key): coef})

    @classmethod
    def t(cls, power: int = 1) -> MultiPoly:
        return cls.monomial(t=power)

    @classmethod
    def s(cls, power: int = 1) -> MultiPoly:
        return cls.monomial(s=power)

    @classmethod
    def u(cls, i: int, power: int = 1) -> MultiPoly:
        return cls.monomial(u={i: power})

    @classmethod
    def from_t_coeffs(cls, coeffs: Mapping[int, Scalar]) -> MultiPoly:
        return cls({(e, 0): c for e, c in coeffs.items()})

    @classmethod
    def from_s_coeffs(cls, coeffs: Sequence[Scalar]) -> MultiPoly:
        """Univariate polynomial in s; ``coeffs[k]`` multiplies ``s^k``."""
        return cls({(0, k): c for k, c in enumerate(coeffs)})

    # basic protocol

    @property
    def terms(self) -> dict[Key, Fraction]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def constant(self) -> Fraction:
        return self._terms.get((0, 0), Fraction(0))

    def is_constant(self) -> bool:
        return all(k == (0, 0) for k in self._terms)

    def u_width(self) -> int:
        """Largest K such that some term involves u_K (1 when no u appears)."""
        return max((len(k) - 1 for k in self._terms), default=1)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = MultiPoly.const(other)
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    # arithmetic

    @staticmethod
    def _coerce(other) -> MultiPoly:
        if isinstance(other, MultiPoly):
            return other
        if isinstance(other, (int, Fraction)):
            return MultiPoly.const(other)
        return NotImplemented

    def __add__(self, other) -> MultiPoly:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self._terms)
        for k, c in other._terms.items():
            v = out.get(k)
            if v is None:
                out[k] = c
            else:
                v += c
                if v:
                    out[k] = v
                else:
                    del out[k]
        return MultiPoly._raw(out)

    __radd__ = __add__

    def __neg__(self) -> MultiPoly:
        return MultiPoly._raw({k: -c for k, c in self._terms.items()})

    def __sub__(self, other) -> MultiPoly:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other) -> MultiPoly:
        return (-self) + other

    def __mul__(self, other) -> MultiPoly:
        if isinstance(other, (int, Fraction)):
            if not other:
                return MultiPoly()
            return MultiPoly._raw({k: c * other for k, c in self._terms.items()})
        if not isinstance(other, MultiPoly):
            return NotImplemented
        out: dict[Key, Fraction] = {}
        for ka, ca in self._terms.items():
            for kb, cb in other._terms.items():
                k = _key_add(ka, kb)
                v = out.get(k)
                out[k] = ca * cb if v is None else v + ca * cb
        return MultiPoly._raw({k: c for k, c in out.items() if c})

    __rmul__ = __mul__

    def __truediv__(self, other) -> MultiPoly:
        if isinstance(other, (int, Fraction)):
            return self * (Fraction(1) / as_rational(other))
        return NotImplemented

    def __pow__(self, exponent: int) -> MultiPoly:
        if exponent < 0:
            if len(self._terms) != 1:
                raise ValueError("negative powers are only defined for monomials")
            (key, coef), = self._terms.items()
            if any(key[1:]):
                raise ValueError("negative powers are only defined for monomials in t")
            return MultiPoly({(key[0] * exponent, 0): coef ** exponent})
        result = MultiPoly.const(1)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            exponent >>= 1
            if exponent:
                base = base * base
        return result

    def shift_t(self, power: int) -> MultiPoly:
        """Multiply by ``t**power`` (power may be negative)."""
        return MultiPoly._raw({(k[0] + power,) + k[1:]: c for k, c in self._terms.items()})

    # substitution and evaluation

    def substitute(self, t=None, s=None, u: Mapping[int, object] | Callable | None = None) -> MultiPoly:
        """Substitute values (rationals or MultiPolys) for some variables.

        ``u`` is either a mapping ``i -> value`` or a callable ``i -> value``.
        Variables left as ``None`` are kept.
        """
        def lift(v):
            return v if isinstance(v, MultiPoly) else MultiPoly.const(v)

        powers: dict[tuple, MultiPoly] = {}

        def power(name, value, e):
            key = (name, e)
            if key not in powers:
                powers[key] = lift(value) ** e
            return powers[key]

        result = MultiPoly()
        for key, coef in self._terms.items():
            kept = [0] * len(key)
            term = MultiPoly.const(coef)
            if t is None:
                kept[0] = key[0]
            elif key[0]:
                term = term * power("t", t, key[0])
            if s is None:
                kept[1] = key[1]
            elif key[1]:
                term = term * power("s", s, key[1])
            for pos in range(2, len(key)):
                e = key[pos]
                if not e:
                    continue
                i = pos
                value = None
                if u is not None:
                    value = u(i) if callable(u) else u.get(i)
                if value is None:
                    kept[pos] = e
                else:
                    term = term * power(("u", i), value, e)
            result = result + term * MultiPoly._raw({_strip(tuple(kept)): Fraction(1)})
        return result

    def evaluate(self, t=None, s=None, u=None) -> Fraction:
        """Full evaluation to a rational; every occurring variable must be given."""
        value = self.substitute(t=t, s=s, u=u)
        if not value.is_constant():
            raise ValueError("evaluation left free variables")
        return value.constant()

    # univariate views

    def t_coeffs(self) -> dict[int, Fraction]:
        if any(len(k) > 2 or k[1] for k in self._terms):
            raise ValueError("polynomial involves variables other than t")
        return {k[0]: c for k, c in sorted(self._terms.items())}

    def s_coeffs(self) -> list[Fraction]:
        """Dense coefficient list in s (index = power); requires an s-only polynomial."""
        if any(k[0] or len(k) > 2 for k in self._terms):
            raise ValueError("polynomial involves variables other than s")
        if not self._terms:
            return []
        deg = max(k[1] for k in self._terms)
        return [self._terms.get((0, d), Fraction(0)) for d in range(deg + 1)]

    def degree(self, var: str) -> int:
        idx = {"t": 0, "s": 1}[var]
        return max((k[idx] for k in self._terms), default=0)

    # ordering, printing, serialization

    def sorted_terms(self) -> list[tuple[Key, Fraction]]:
        width = max((len(k) for k in self._terms), default=2)
        return sorted(self._terms.items(), key=lambda kc: _key_padded(kc[0], width))

    def __repr__(self) -> str:
        return f"MultiPoly({self})"

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        width = max(len(k) for k in self._terms)
        items = sorted(self._terms.items(), key=lambda kc: _key_padded(kc[0], width), reverse=True)
        out = []
        for key, coef in items:
            factors = []
            for name, e in zip(["t", "s"] + [f"u{i}" for i in range(2, len(key))], key):
                if e == 1:
                    factors.append(name)
                elif e:
                    factors.append(f"{name}^{e}")
            mono = "*".join(factors)
            mag = abs(coef)
            if not mono:
                body = str(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{mag}*{mono}"
            if not out:
                out.append(body if coef > 0 else f"-{body}")
            else:
                out.append(f"+ {body}" if coef > 0 else f"- {body}")
        return " ".join(out)

    def to_json(self, width: int | None = None) -> list[dict]:
        """Canonical JSON form: ``[{"exp": {"t", "s", "u"}, "coef": "p/q"}, ...]``.

        ``u`` lists the exponents of u_2..u_K; K defaults to the largest index used.
        """
        k = max(width if width is not None else 1, self.u_width())
        out = []
        for key, coef in self.sorted_terms():
            full = _key_padded(key, k + 1)
            out.append({"exp": {"t": full[0], "s": full[1], "u": list(full[2:])},
                        "coef": f"{coef.numerator}/{coef.denominator}"})
        return out

    @classmethod
    def from_json(cls, data: Iterable[Mapping]) -> MultiPoly:
        terms = {}
        for item in data:
            exp = item["exp"]
            key = (int(exp["t"]), int(exp["s"])) + tuple(int(e) for e in exp.get("u", []))
            terms[key] = Fraction(item["coef"])
        return cls(terms)


ZERO = MultiPoly()
ONE = MultiPoly.const(1)


def _lift(c) -> MultiPoly:
    return c if isinstance(c, MultiPoly) else MultiPoly.const(c)


class TruncatedSeries:
    """Exponential generating series ``sum c_n x^n / n!`` truncated at order N."""

    __slots__ = ("order", "coeffs")

    def __init__(self, coeffs: Sequence, order: int | None = None):
        if order is None:
            order = len(coeffs) - 1
        if order < 0:
            raise SeriesError("order must be non-negative")
        cs = [_lift(c) for c in list(coeffs)[: order + 1]]
        cs.extend([ZERO] * (order + 1 - len(cs)))
        self.order = order
        self.coeffs = tuple(cs)

    @classmethod
    def zero(cls, order: int) -> TruncatedSeries:
        return cls([], order)

    @classmethod
    def one(cls, order: int) -> TruncatedSeries:
        return cls([ONE], order)

    @classmethod
    def x(cls, order: int) -> TruncatedSeries:
        return cls([ZERO, ONE], order)

    @classmethod
    def constant(cls, c, order: int) -> TruncatedSeries:
        return cls([c], order)

    @classmethod
    def from_ordinary(cls, coeffs: Sequence, order: int) -> TruncatedSeries:
        """Build from ordinary coefficients ``a_n`` of ``x^n`` (c_n = n! a_n)."""
        return cls([_lift(a) * factorial(n) for n, a in enumerate(coeffs)], order)

    def __getitem__(self, n: int) -> MultiPoly:
        return self.coeffs[n]

    def ordinary(self, n: int) -> MultiPoly:
        """Coefficient of ``x^n`` itself."""
        return self.coeffs[n] * Fraction(1, factorial(n))

    def __eq__(self, other) -> bool:
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return self.order == other.order and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash((self.order, self.coeffs))

    def __repr__(self) -> str:
        return f"TruncatedSeries(order={self.order}, coeffs=[{', '.join(map(str, self.coeffs))}])"

    def _check(self, other: TruncatedSeries) -> None:
        if not isinstance(other, TruncatedSeries):
            raise TypeError("expected a TruncatedSeries")
        if other.order != self.order:
            raise SeriesError(f"order mismatch: {self.order} vs {other.order}")

    def __add__(self, other: TruncatedSeries) -> TruncatedSeries:
        self._check(other)
        return TruncatedSeries([a + b for a, b in zip(self.coeffs, other.coeffs)], self.order)

    def __sub__(self, other: TruncatedSeries) -> TruncatedSeries:
        self._check(other)
        return TruncatedSeries([a - b for a, b in zip(self.coeffs, other.coeffs)], self.order)

    def __neg__(self) -> TruncatedSeries:
        return TruncatedSeries([-a for a in self.coeffs], self.order)

    def __mul__(self, other) -> TruncatedSeries:
        if isinstance(other, (int, Fraction, MultiPoly)):
            return self.scale(other)
        self._check(other)
        n_max = self.order
        a, b = self.coeffs, other.coeffs
        nz_a = [k for k in range(n_max + 1) if a[k]]
        nz_b = [k for k in range(n_max + 1) if b[k]]
        out = [ZERO] * (n_max + 1)
        for i in nz_a:
            for j in nz_b:
                n = i + j
                if n > n_max:
                    break
                out[n] = out[n] + a[i] * b[j] * comb(n, i)
        return TruncatedSeries(out, n_max)

    def __rmul__(self, other) -> TruncatedSeries:
        return self.scale(other)

    def scale(self, c) -> TruncatedSeries:
        return TruncatedSeries([a * c for a in self.coeffs], self.order)

    def __pow__(self, k: int) -> TruncatedSeries:
        result = TruncatedSeries.one(self.order)
        for _ in range(k):
            result = result * self
        return result

    def map_coeffs(self, fn: Callable[[MultiPoly], MultiPoly]) -> TruncatedSeries:
        return TruncatedSeries([fn(c) for c in self.coeffs], self.order)

    def substitute(self, **kwargs) -> TruncatedSeries:
        return self.map_coeffs(lambda c: c.substitute(**kwargs))

    def truncate(self, order: int) -> TruncatedSeries:
        return TruncatedSeries(self.coeffs, order)

    def mul_x(self) -> TruncatedSeries:
        """Multiply by x: ``c_n -> n c_{n-1}``."""
        return TruncatedSeries([ZERO] + [self.coeffs[n - 1] * n for n in range(1, self.order + 1)], self.order)

    def div_x(self) -> TruncatedSeries:
        """Divide by x; the result has order N - 1."""
        if self.coeffs[0]:
            raise SeriesError("division by x needs a zero constant term")
        return TruncatedSeries([self.coeffs[n + 1] * Fraction(1, n + 1) for n in range(self.order)],
                               self.order - 1)

    def derivative(self) -> TruncatedSeries:
        """d/dx; the result has order N - 1."""
        return TruncatedSeries(self.coeffs[1:], self.order - 1)

    def pointing(self) -> TruncatedSeries:
        """x d/dx: ``c_n -> n c_n``."""
        return TruncatedSeries([c * n for n, c in enumerate(self.coeffs)], self.order)

    def first_difference(self, other: TruncatedSeries) -> int | None:
        """Lowest degree where the two series differ, or None."""
        self._check(other)
        for n, (a, b) in enumerate(zip(self.coeffs, other.coeffs)):
            if a != b:
                return n
        return None

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def to_json(self) -> dict:
        width = max(c.u_width() for c in self.coeffs)
        return {"order": self.order, "coeffs": [c.to_json(width) for c in self.coeffs]}

    @classmethod
    def from_json(cls, data: Mapping) -> TruncatedSeries:
        return cls([MultiPoly.from_json(c) for c in data["coeffs"]], int(data["order"]))


def series_arith(a: TruncatedSeries, b: TruncatedSeries, kind: str) -> TruncatedSeries:
    if kind == "add":
        return a + b
    if kind == "sub":
        return a - b
    if kind == "mul":
        return a * b
    raise ValueError(f"unknown operation {kind!r}")


def series_exp(f: TruncatedSeries) -> TruncatedSeries:
    """exp(f) for f with zero constant term, via g' = f' g."""
    if f.coeffs[0]:
        raise SeriesError("exp needs a zero constant term")
    n_max = f.order
    fc = f.coeffs
    g = [ONE] + [ZERO] * n_max
    for n in range(n_max):
        acc = ZERO
        for k in range(n + 1):
            if fc[k + 1] and g[n - k]:
                acc = acc + fc[k + 1] * g[n - k] * comb(n, k)
        g[n + 1] = acc
    return TruncatedSeries(g, n_max)


def series_log(g: TruncatedSeries) -> TruncatedSeries:
    """log(g) for g with constant term 1, via f' = g'/g."""
    if g.coeffs[0] != ONE:
        raise SeriesError("log needs constant term 1")
    n_max = g.order
    gc = g.coeffs
    f = [ZERO] * (n_max + 1)
    for n in range(n_max):
        acc = gc[n + 1]
        for k in range(n):
            if f[k + 1] and gc[n - k]:
                acc = acc - f[k + 1] * gc[n - k] * comb(n, k)
        f[n + 1] = acc
    return TruncatedSeries(f, n_max)


def series_geometric(f: TruncatedSeries) -> TruncatedSeries:
    """1 / (1 - f) for f with zero constant term."""
    if f.coeffs[0]:
        raise SeriesError("geometric series needs a zero constant term")
    result = TruncatedSeries.one(f.order)
    power = TruncatedSeries.one(f.order)
    for _ in range(f.order):
        power = power * f
        result = result + power
    return result


def divided_powers(z: TruncatedSeries) -> list[TruncatedSeries]:
    """[z^0/0!, z^1/1!, ..., z^N/N!] for z with zero constant term."""
    if z.coeffs[0]:
        raise SeriesError("divided powers need a zero constant term")
    out = [TruncatedSeries.one(z.order)]
    for m in range(1, z.order + 1):
        out.append((out[-1] * z).scale(Fraction(1, m)))
    return out


def edge_sum_apply(z: TruncatedSeries, shift: int = 0) -> TruncatedSeries:
    """Sum over edge sizes: ``sum_{n>=1} u_{n+1} z^{n+shift} / (n+shift)!``.

    ``shift`` is 0 (one vertex of the edge is taken) or 1 (all vertices free).
    Powers beyond the truncation order vanish, so u-indices never exceed N + 1.
    """
    if shift not in (0, 1):
        raise ValueError("shift must be 0 or 1")
    if z.coeffs[0]:
        raise SeriesError("edge sum needs a zero constant term")
    powers = divided_powers(z)
    result = TruncatedSeries.zero(z.order)
    for n in range(1, z.order + 1 - shift):
        term = powers[n + shift]
        if term.is_zero():
            break
        result = result + term.scale(MultiPoly.u(n + 1))
    return result


T = TypeVar("T")


def solve_fixpoint(update: Callable[[T], T], order: int, start: T | None = None) -> T:
    """Fixed point of an x-adically contractive map by degree-wise iteration.

    After ``order + 1`` rounds every degree up to ``order`` is settled; one more
    application must reproduce the value, otherwise :class:`FixpointError`
    reports the lowest degree that moved.  ``start`` defaults to the zero series
    of the given order; values must provide ``first_difference``.
    """
    value = TruncatedSeries.zero(order) if start is None else start
    for _ in range(order + 1):
        value = update(value)
    check = update(value)
    degree = value.first_difference(check)
    if degree is not None:
        raise FixpointError(degree)
    return value
