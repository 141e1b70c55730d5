"""Characters of affine, Heisenberg and W-algebra modules, and the rational
quantities (levels, central charges, lowest conformal weights) attached to them.

Levels are exact ``Fraction`` values.  Every character constructor returns a
series whose offset is the lowest conformal weight of the module under an
explicitly chosen conformal vector.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from . import liealg as la
from .errors import (
    CriticalLevel,
    InvalidParams,
    NotAdmissible,
    NotDominant,
    NotLevelDominant,
    PoleLevel,
    ZeroNorm,
)
from .gseries import GradedCharacter, QSeries, euler_inverse, geometric, mul
from .liealg import RootSystem, Weight

__all__ = [
    "as_level",
    "MinimalSeriesParams",
    "ell_of",
    "minimal_series_params",
    "sugawara_cc",
    "coset_cc",
    "w_cc",
    "minimal_cc",
    "growth",
    "langlands_dual_level",
    "sugawara_h",
    "w_h",
    "Heisenberg",
    "Sugawara",
    "WShifted",
    "loop_factor",
    "integrable_character",
    "frenkel_kac_level1_character",
    "fock_character",
    "weyl_module_character",
    "verma_w_character",
]


def as_level(k) -> Fraction:
    if isinstance(k, float):
        raise TypeError("levels must be exact (int, Fraction or 'p/q')")
    return Fraction(k)


def _shifted(rs: RootSystem, k) -> Fraction:
    a = as_level(k) + rs.h_check
    if a == 0:
        raise CriticalLevel(f"k = {k} is the critical level of {rs.name}")
    return a


@dataclass(frozen=True)
class MinimalSeriesParams:
    p: int
    q: int

    def validate(self, rs: RootSystem, nondegenerate: bool = True) -> MinimalSeriesParams:
        if self.p < 1 or self.q < 1 or math.gcd(self.p, self.q) != 1:
            raise InvalidParams(f"({self.p}, {self.q}) is not a coprime pair of positive integers")
        if self.p < rs.h_check or (nondegenerate and self.q < rs.h_check):
            raise InvalidParams(f"({self.p}, {self.q}) violates p, q >= h^vee = {rs.h_check}")
        return self


def ell_of(rs: RootSystem, k) -> Fraction:
    """The level l with l + h^vee = (k + h^vee) / (k + h^vee + 1)."""
    a = as_level(k) + rs.h_check
    if a == 0 or a == -1:
        raise PoleLevel(f"k = {k} is a pole of the level map")
    return a / (a + 1) - rs.h_check


def minimal_series_params(rs: RootSystem, k) -> MinimalSeriesParams:
    """For admissible k + h^vee = p/q, the label (p, p + q) of the coset W-algebra."""
    a = as_level(k) + rs.h_check
    p, q = a.numerator, a.denominator
    if a <= 0 or p < rs.h_check:
        raise NotAdmissible(f"k = {k} is not admissible for {rs.name}")
    return MinimalSeriesParams(p, p + q)


def sugawara_cc(rs: RootSystem, k) -> Fraction:
    return as_level(k) * rs.dim / _shifted(rs, k)


def coset_cc(rs: RootSystem, k) -> Fraction:
    k = as_level(k)
    a = k + rs.h_check
    if a == 0 or a == -1:
        raise PoleLevel(f"k = {k} is a pole of the coset central charge")
    return k * (k + 2 * rs.h_check + 1) * rs.rank / (a * (a + 1))


def w_cc(rs: RootSystem, k) -> Fraction:
    """Central charge of the principal W-algebra (r^vee = 1, Langlands-dual h^vee = h^vee)."""
    a = _shifted(rs, k)
    h, hv = rs.h, rs.h_check
    return -((h + 1) * a - hv) * (hv * a - (h + 1)) * rs.rank / a


def minimal_cc(rs: RootSystem, p: int, q: int) -> Fraction:
    MinimalSeriesParams(p, q).validate(rs)
    hv, r = rs.h_check, rs.rank
    return Fraction(-r * ((hv + 1) * p - hv * q) * (hv * p - (hv + 1) * q), p * q)


def growth(rs: RootSystem, p: int, q: int) -> Fraction:
    MinimalSeriesParams(p, q).validate(rs)
    return rs.rank - Fraction(rs.h_check * rs.dim, p * q)


def langlands_dual_level(rs: RootSystem, k) -> Fraction:
    """k' with (k + h^vee)(k' + h^vee) = 1."""
    return 1 / _shifted(rs, k) - rs.h_check


def sugawara_h(rs: RootSystem, k, lam: Weight) -> Fraction:
    """(lam + 2 rho | lam) / (2 (k + h^vee))."""
    a = _shifted(rs, k)
    lam = la.weight(lam)
    return Fraction(la.inner(rs, la.add(lam, la.scale(2, rs.rho)), lam)) / (2 * a)


def w_h(rs: RootSystem, ell, lam: Weight) -> Fraction:
    """(|lam + rho|^2 - |rho|^2) / (2 (ell + h^vee)) - (lam | rho^vee)."""
    a = _shifted(rs, ell)
    lam = la.weight(lam)
    top = Fraction(la.norm2(rs, la.add(lam, rs.rho))) - la.norm2(rs, rs.rho)
    return top / (2 * a) - la.inner(rs, lam, rs.rho_check)


# -- conformal-weight conventions for Fock modules ------------------------------


@dataclass(frozen=True)
class Heisenberg:
    """Free-boson grading: lowest weight |lam|^2 / (2 kappa)."""


@dataclass(frozen=True)
class Sugawara:
    """Affine Sugawara grading at level k."""

    k: Fraction


@dataclass(frozen=True)
class WShifted:
    """W-algebra grading with the rho^vee-shifted conformal vector at level ell."""

    ell: Fraction


# -- the loop-algebra factor ----------------------------------------------------


@lru_cache(maxsize=64)
def loop_factor(rs: RootSystem, order: int) -> tuple:
    """Per-grade full weight maps of prod_{n>=1} (1-q^n)^{-r} prod_{alpha} (1-q^n e^alpha)^{-1}.

    Only dominant weights are computed, from the logarithmic-derivative recursion
    ``G F_G = sum_{s<=G} sum_{j|s} (s/j) (r + sum_alpha e^{j alpha}) F_{G-s}``;
    W-invariance fills in the rest.  A weight at grade G is a sum of at most G
    roots, hence has squared length at most 2 G^2.
    """
    r = rs.rank
    roots = rs.roots
    full: list[dict] = [{rs.zero: 1}]
    divs = [[j for j in range(1, s + 1) if s % j == 0] for s in range(order + 1)]
    for G in range(1, order + 1):
        dom = {}
        for kap in la.dominant_weights_in_ball(rs, 2 * G * G, coset=rs.zero):
            tot = 0
            for s in range(1, G + 1):
                prev = full[G - s]
                for j in divs[s]:
                    n = s // j
                    acc = r * prev.get(kap, 0)
                    for a in roots:
                        acc += prev.get(tuple([x - j * y for x, y in zip(kap, a)]), 0)
                    tot += n * acc
            if tot:
                assert tot % G == 0
                dom[kap] = tot // G
        cur = {}
        for kap, c in dom.items():
            for w in la.orbit(rs, kap):
                cur[w] = c
        full.append(cur)
    return tuple(full)


def _loop_character(rs: RootSystem, order: int) -> GradedCharacter:
    F = loop_factor(rs, order)
    return GradedCharacter._raw(rs.rank, 0, order, {g: dict(sl) for g, sl in enumerate(F)})


# -- integrable characters (Weyl-Kac) ------------------------------------------------


def _wk_numerator(rs: RootSystem, m: int, lam: Weight, order: int) -> dict:
    """Signed finite highest weights of the Weyl-Kac numerator, keyed by (grade, mu).

    Translation t_gamma (gamma in Q) contributes grade
    g = K |gamma|^2 / 2 + (lam + rho | gamma) with K = m + h^vee.  Since
    g >= K |gamma|^2 / 2 - |lam + rho| |gamma|, every gamma with g <= N has
    |gamma| <= (|lam + rho| + sqrt(|lam + rho|^2 + 2 K N)) / K, and the ball
    enumeration below covers that radius with integer-rounded upper bounds.
    """
    K = m + rs.h_check
    lr = la.add(lam, rs.rho)
    lr2 = Fraction(la.norm2(rs, lr))
    s = la._isqrt_ceil(lr2)
    t = la._isqrt_ceil(s * s + 2 * K * order)
    radius2 = Fraction(s + t, K) ** 2
    num: dict = {}
    for gamma in la.root_lattice_ball(rs, radius2):
        g2 = la.norm2(rs, gamma)
        g = Fraction(K * g2, 2) + la.inner(rs, lr, gamma)
        if g > order:
            continue
        assert g2 <= radius2 and g >= 0 and Fraction(g).denominator == 1
        v = tuple(x + K * y for x, y in zip(lr, gamma))
        d, sign = la.to_dominant(rs, v)
        if any(x == 0 for x in d):
            continue
        key = (int(g), tuple(x - 1 for x in d))
        num[key] = num.get(key, 0) + sign
    return {key: c for key, c in num.items() if c}


@lru_cache(maxsize=256)
def _integrable_components(rs: RootSystem, m: int, lam: Weight, order: int) -> tuple:
    """Finite-irreducible decomposition of each grade of L_m(lam).

    Multiplying the character by the finite Weyl denominator turns grade G into
    sum_kappa d_{G,kappa} A_{kappa+rho}; reading the coefficient of e^{kappa+rho}
    gives d_{G,kappa} = sum c_{g,mu} sum_w det(w) F_{G-g}(kappa + rho - w(mu + rho)).
    Components satisfy |kappa|^2 <= |lam|^2 + 2 m G because every weight of an
    integrable module is no longer than the highest weight.
    """
    F = loop_factor(rs, order)
    num = _wk_numerator(rs, m, lam, order)
    orbits = {mu: la.signed_orbit(rs, tuple(x + 1 for x in mu)) for (_, mu) in num}
    lam2 = la.norm2(rs, lam)
    comps = []
    for G in range(order + 1):
        cands = la.dominant_weights_in_ball(rs, lam2 + 2 * m * G, coset=lam)
        row = {}
        terms = [(g, mu, c) for (g, mu), c in num.items() if g <= G]
        for kap in cands:
            kr = tuple(x + 1 for x in kap)
            d = 0
            for g, mu, c in terms:
                Fg = F[G - g]
                acc = 0
                for u, eps in orbits[mu]:
                    val = Fg.get(tuple([x - y for x, y in zip(kr, u)]))
                    if val:
                        acc += eps * val
                d += c * acc
            if d:
                if d < 0:
                    raise ArithmeticError(f"negative component {d} at grade {G}, weight {kap}")
                row[kap] = d
        comps.append(row)
    return tuple(tuple(sorted(r.items())) for r in comps)


def _check_level_weight(rs: RootSystem, m: int, lam: Weight) -> Weight:
    lam = la.weight(lam)
    if len(lam) != rs.rank:
        raise la.RankMismatch(f"weight {lam} does not have rank {rs.rank}")
    if m < 0 or not la.in_level(rs, lam, m):
        raise NotLevelDominant(f"{lam} is not in P^{m}_+ for {rs.name}")
    return lam


@lru_cache(maxsize=256)
def _integrable(rs: RootSystem, m: int, lam: Weight, order: int) -> GradedCharacter:
    comps = _integrable_components(rs, m, lam, order)
    data = {}
    for G, row in enumerate(comps):
        dom: dict = {}
        for kap, d in row:
            for nu, c in la.dominant_character(rs, kap).items():
                dom[nu] = dom.get(nu, 0) + d * c
        sl = {}
        for nu, c in dom.items():
            for w in la.orbit(rs, nu):
                sl[w] = c
        data[G] = sl
    return GradedCharacter._raw(rs.rank, sugawara_h(rs, m, lam), order, data)


def integrable_character(rs: RootSystem, m: int, lam: Weight, order: int) -> GradedCharacter:
    """Character of the level-m integrable module L_m(lam), truncated at ``order``."""
    lam = _check_level_weight(rs, m, lam)
    return _integrable(rs, int(m), lam, int(order))


def integrable_components(rs: RootSystem, m: int, lam: Weight, order: int) -> list[dict]:
    """Per-grade multiplicities of finite irreducibles E_kappa in L_m(lam)."""
    lam = _check_level_weight(rs, m, lam)
    return [dict(row) for row in _integrable_components(rs, int(m), lam, int(order))]


# -- lattice construction at level one -------------------------------------------


@lru_cache(maxsize=128)
def _frenkel_kac(rs: RootSystem, nu: Weight, order: int) -> GradedCharacter:
    nu2 = Fraction(la.norm2(rs, nu))
    bound = nu2 + 2 * order
    # |beta| <= |nu| + |nu + beta|, so |beta|^2 <= 2 |nu|^2 + 2 bound
    pts = {}
    for beta in la.root_lattice_ball(rs, 2 * nu2 + 2 * bound):
        v = tuple(x + y for x, y in zip(nu, beta))
        n2 = la.norm2(rs, v)
        if n2 <= bound:
            pts[v] = Fraction(n2) / 2
    low = min(pts.values())
    data: dict = {}
    for v, e in pts.items():
        g = e - low
        assert g.denominator == 1
        data.setdefault(int(g), {})[v] = 1
    x = GradedCharacter._raw(rs.rank, low, order, data)
    for _ in range(rs.rank):
        for n in range(1, order + 1):
            x = geometric(x, n)
    return x


def frenkel_kac_level1_character(rs: RootSystem, nu: Weight, order: int) -> GradedCharacter:
    """sum_{beta in Q} q^{|nu+beta|^2/2} z^{nu+beta} / phi(q)^r, re-offset to its minimum."""
    nu = _check_level_weight(rs, 1, nu)
    return _frenkel_kac(rs, nu, int(order))


# -- Fock, Weyl and Verma modules ------------------------------------------------------


def _gram(space) -> list[list[Fraction]]:
    if isinstance(space, RootSystem):
        return [list(r) for r in space.qform]
    return [[Fraction(x) for x in row] for row in space]


def fock_character(space, kappa, lam: Weight, order: int, rule=Heisenberg()) -> GradedCharacter:
    """Character of the Fock module pi_{kappa, lam}: a single weight column times 1/phi^rank.

    ``space`` is a RootSystem or a Gram matrix for the weight coordinates.
    """
    kappa = as_level(kappa)
    if kappa == 0:
        raise ZeroNorm("Fock modules need a non-zero norm kappa")
    lam = la.weight(lam)
    gram = _gram(space)
    rank = len(gram)
    if len(lam) != rank:
        raise la.RankMismatch(f"weight {lam} does not have rank {rank}")
    if isinstance(rule, Heisenberg):
        n2 = sum(gram[i][j] * lam[i] * lam[j] for i in range(rank) for j in range(rank))
        offset = Fraction(n2) / (2 * kappa)
    elif isinstance(rule, Sugawara):
        offset = sugawara_h(space, rule.k, lam)
    elif isinstance(rule, WShifted):
        offset = w_h(space, rule.ell, lam)
    else:
        raise TypeError(f"unknown offset rule {rule!r}")
    parts = euler_inverse(order, rank)
    return GradedCharacter._raw(rank, offset, order, {g: {lam: c} for g, c in parts.coeffs.items()})


def weyl_module_character(rs: RootSystem, k, lam: Weight, order: int) -> GradedCharacter:
    """ch E_lam times the loop factor; offset is the Sugawara weight at level k."""
    lam = la.weight(lam)
    if not la.is_dominant(lam):
        raise NotDominant(f"{lam} is not dominant integral")
    offset = sugawara_h(rs, k, lam)
    base = GradedCharacter.from_weights(rs.rank, la.finite_character(rs, lam), order)
    return mul(base, _loop_character(rs, order)).qshift(offset)


def verma_w_character(rs: RootSystem, ell, lam: Weight, order: int) -> QSeries:
    """q^{h_lam} / prod_j (1 - q^j)^rank for the W-algebra Verma module."""
    return euler_inverse(order, rs.rank, offset=w_h(rs, ell, lam))
