"""Generating series of hypertrees and cyclic hypertrees, and the
characteristic polynomials of hypertree posets derived from them.

Weights: a hypertree with edges ``a`` has weight ``t^(#edges - 1) * prod u_|a|``.
All series are exponential in ``x``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .algebra import (
    ONE,
    MultiPoly,
    TruncatedSeries,
    divided_powers,
    edge_sum_apply,
    series_exp,
    series_geometric,
    series_log,
    solve_fixpoint,
)
from .report import Check

DEFAULT_ORDER = 8

T = MultiPoly.t()
S = MultiPoly.s()


class ConsistencyError(AssertionError):
    """Two independent computations of the same quantity disagree."""


@dataclass(frozen=True)
class HypertreeSeriesBundle:
    ha: TruncatedSeries
    ha_p: TruncatedSeries
    ha_a: TruncatedSeries
    ha_pa: TruncatedSeries
    y: TruncatedSeries

    def dissymmetry_residual(self) -> TruncatedSeries:
        return self.ha_pa + self.ha - self.ha_p - self.ha_a

    def pointing_residual(self) -> TruncatedSeries:
        return self.ha_p - self.ha.pointing()


@dataclass(frozen=True)
class CyclicSeriesBundle:
    hac: TruncatedSeries
    hac_p: TruncatedSeries
    hac_a: TruncatedSeries
    hac_pa: TruncatedSeries
    yc: TruncatedSeries
    weighted: bool

    def dissymmetry_residual(self) -> TruncatedSeries:
        return self.hac_pa + self.hac - self.hac_p - self.hac_a

    def pointing_residual(self) -> TruncatedSeries:
        return self.hac_p - self.hac.pointing()


@dataclass(frozen=True)
class CharPoly:
    """Characteristic polynomial; ``coeffs[k]`` multiplies ``s^(n-2-k)``."""

    n: int
    coeffs: tuple[Fraction, ...]

    def as_poly(self) -> MultiPoly:
        d = self.n - 2
        return MultiPoly({(0, d - k): c for k, c in enumerate(self.coeffs)})

    def __call__(self, s) -> Fraction:
        d = self.n - 2
        return sum((c * Fraction(s) ** (d - k) for k, c in enumerate(self.coeffs)), Fraction(0))

    def __str__(self) -> str:
        return str(self.as_poly())

    def tsv(self) -> str:
        return f"{self.n}\t" + ",".join(_fmt(c) for c in self.coeffs)


def _fmt(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _check_n(n: int, lo: int, order: int) -> None:
    if not lo <= n <= order:
        raise ValueError(f"n = {n} outside the supported range {lo}..{order}")


def _exp_minus_one_over_t(w: TruncatedSeries) -> TruncatedSeries:
    """(exp(t w) - 1) / t, expanded so that no negative power of t appears."""
    powers = divided_powers(w)
    out = TruncatedSeries.zero(w.order)
    for m in range(1, w.order + 1):
        out = out + powers[m].scale(MultiPoly.t(m - 1))
    return out


def _neg_log_one_minus_over_t(w: TruncatedSeries) -> TruncatedSeries:
    """-ln(1 - t w) / t = sum_{m>=1} t^(m-1) w^m / m."""
    out = TruncatedSeries.zero(w.order)
    power = TruncatedSeries.one(w.order)
    for m in range(1, w.order + 1):
        power = power * w
        out = out + power.scale(MultiPoly.t(m - 1) * Fraction(1, m))
    return out


@lru_cache(maxsize=None)
def solve_hypertree_system(order: int = DEFAULT_ORDER) -> HypertreeSeriesBundle:
    """Vertex-, edge- and flag-pointed hypertree series with full u-weights."""
    if order < 2:
        raise ValueError("order must be at least 2")
    x = TruncatedSeries.x(order)

    def update(hp: TruncatedSeries) -> TruncatedSeries:
        y = edge_sum_apply(x + hp.scale(T))
        return _exp_minus_one_over_t(y) * x

    ha_p = solve_fixpoint(update, order)
    z = x + ha_p.scale(T)
    y = edge_sum_apply(z)
    ha_a = edge_sum_apply(z, shift=1)
    ha_pa = x * y * series_exp(y.scale(T))
    ha = ha_p + ha_a - ha_pa
    return HypertreeSeriesBundle(ha=ha, ha_p=ha_p, ha_a=ha_a, ha_pa=ha_pa, y=y)


@lru_cache(maxsize=None)
def solve_cyclic_system(order: int = DEFAULT_ORDER, weighted: bool = False) -> CyclicSeriesBundle:
    """Cyclic hypertree series.

    ``weighted=True`` keeps the u-markers; otherwise all ``u_i = 1`` and the
    closed exponential equations are used directly.
    """
    if order < 2:
        raise ValueError("order must be at least 2")
    x = TruncatedSeries.x(order)
    one = TruncatedSeries.one(order)

    if weighted:
        def edges(z):
            return edge_sum_apply(z)

        def edges_free(z):
            return edge_sum_apply(z, shift=1)
    else:
        def edges(z):
            return series_exp(z) - one

        def edges_free(z):
            return series_exp(z) - one - z

    def update(hpa: TruncatedSeries) -> TruncatedSeries:
        yc = edges(x + hpa.scale(T))
        return x * yc * series_geometric(yc.scale(T))

    hac_pa = solve_fixpoint(update, order)
    z = x + hac_pa.scale(T)
    yc = edges(z)
    hac_p = x * _neg_log_one_minus_over_t(yc)
    hac_a = edges_free(z)
    hac = hac_p + hac_a - hac_pa
    return CyclicSeriesBundle(hac=hac, hac_p=hac_p, hac_a=hac_a, hac_pa=hac_pa, yc=yc,
                              weighted=weighted)


def tau(n: int, order: int = DEFAULT_ORDER) -> MultiPoly:
    """Rank-graded count of cyclic hypertrees on n vertices, as a polynomial in t."""
    _check_n(n, 2, order)
    return solve_cyclic_system(order).hac[n]


def _chi_via_tau(n: int, order: int) -> tuple[Fraction, ...]:
    coeffs = tau(n, order).t_coeffs()
    # chi_n(s) = s^(n-2) tau_n(-1/s)
    return tuple((-1) ** k * coeffs.get(k, Fraction(0)) for k in range(n - 1))


@lru_cache(maxsize=None)
def _chi_triangular_all(order: int) -> dict[int, MultiPoly]:
    """chi_n for n <= order from sum_T prod_a chi_|a| = s^(n-2).

    A monomial ``t^(e-1) prod u_i^(m_i)`` of the hypertree count maps to
    ``prod chi_i^(m_i)``; the single-edge term is ``u_n`` alone, so each
    degree determines chi_n from the smaller ones.
    """
    ha = solve_hypertree_system(order).ha
    chis: dict[int, MultiPoly] = {}
    for n in range(2, order + 1):
        rest = MultiPoly()
        lead = None
        for key, coef in ha[n].items():
            u_exps = key[2:]
            if key[0] == 0 and sum(u_exps) == 1 and len(key) == n + 1:
                lead = coef
                continue
            term = MultiPoly.const(coef)
            for i, e in enumerate(u_exps, start=2):
                if e:
                    term = term * chis[i] ** e
            rest = rest + term
        if lead != 1:
            raise ConsistencyError(f"single-edge coefficient at n={n} is {lead}, expected 1")
        chis[n] = S ** (n - 2) - rest
    return chis


def chi(n: int, method: str = "via_tau", order: int = DEFAULT_ORDER) -> CharPoly:
    """Characteristic polynomial of the hypertree poset on n vertices.

    ``via_tau`` reads it off the cyclic hypertree series; ``triangular`` solves
    the relation between chi_T and chi_n degree by degree.  Both are computed
    and compared; a mismatch raises :class:`ConsistencyError`.
    """
    _check_n(n, 2, order)
    a = _chi_via_tau(n, order)
    s_coeffs = _chi_triangular_all(order)[n].s_coeffs()
    b = tuple(s_coeffs[n - 2 - k] if n - 2 - k < len(s_coeffs) else Fraction(0) for k in range(n - 1))
    if a != b:
        raise ConsistencyError(f"chi_{n}: via_tau gives {a}, triangular gives {b}")
    if method not in ("via_tau", "triangular"):
        raise ValueError(f"unknown method {method!r}")
    return CharPoly(n, a if method == "via_tau" else b)


def mobius_hat(n: int, order: int = DEFAULT_ORDER) -> Fraction:
    """Mobius number of the hypertree poset with an added top: -chi_n(1)."""
    _check_n(n, 3, order)
    return -chi(n, order=order)(1)


def lambert_w(order: int) -> TruncatedSeries:
    """W(B) = -sum n^(n-1) (-B)^n / n!, as an EGF (c_n = (-1)^(n-1) n^(n-1))."""
    return TruncatedSeries([0] + [(-1) ** (n - 1) * n ** (n - 1) for n in range(1, order + 1)], order)


def verify_closed_form(order: int = DEFAULT_ORDER) -> list[Check]:
    """Substitute A = d/dB HAC(B), z = B + t HAC^pa(B) into
    A = -(1/t) ln(B/z), B = z - t z (exp(z) - 1), and specialise t = -1."""
    big = solve_cyclic_system(order + 1)
    a = big.hac.derivative()
    bundle = solve_cyclic_system(order)
    b = TruncatedSeries.x(order)
    one = TruncatedSeries.one(order)
    hpa = bundle.hac_pa
    z = b + hpa.scale(T)
    # B/z = 1 / (1 + t HAC^pa / B); HAC^pa / B loses one order, recovered from the larger bundle.
    ratio = big.hac_pa.div_x().truncate(order).scale(T)
    log_b_over_z = -series_log(one + ratio)
    res_a = a + log_b_over_z.scale(MultiPoly.t(-1))
    res_b = b - z + (z * (series_exp(z) - one)).scale(T)
    checks = [
        Check("closed_form_A", res_a.is_zero(), res_a.first_difference(TruncatedSeries.zero(order))),
        Check("closed_form_B", res_b.is_zero(), res_b.first_difference(TruncatedSeries.zero(order))),
    ]
    w = lambert_w(order)
    a_m1 = a.substitute(t=-1)
    z_m1 = z.substitute(t=-1)
    checks.append(Check("lambert_A", a_m1 == w, a_m1.first_difference(w)))
    checks.append(Check("lambert_z", z_m1 == w, z_m1.first_difference(w)))
    return checks


def hypertree_counts(order: int = DEFAULT_ORDER) -> list[int]:
    """n![x^n] HA at u_i = 1, t = 1 for n = 0..order."""
    ha = solve_hypertree_system(order).ha
    return [int(c.evaluate(t=1, u=lambda i: 1)) for c in ha.coeffs]


def chi_alternates(cp: CharPoly) -> bool:
    return all(c != 0 and (c > 0) == (k % 2 == 0) for k, c in enumerate(cp.coeffs))
