"""Simply-laced root systems, weights in Dynkin-label coordinates, finite characters.

Weights are plain tuples of Dynkin labels ``<lambda, alpha_i^vee>``.  Entries are
``int`` when integral and ``Fraction`` otherwise; since ``Fraction(2) == 2`` and
both hash alike, such tuples can be used as dictionary keys interchangeably.
The invariant form is normalized so that every root has squared length 2, which
makes the Gram matrix of the fundamental weights the inverse Cartan matrix.
"""

from __future__ import annotations

import math
from collections.abc import Iterable, Iterator, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .errors import (
    InvalidFamilyRank,
    NonIntegralWeight,
    NotDominant,
    RankMismatch,
)

Weight = tuple

__all__ = [
    "RootSystem",
    "Weight",
    "build_root_system",
    "root_system",
    "weight",
    "inner",
    "norm2",
    "add",
    "sub",
    "scale",
    "reflect",
    "to_dominant",
    "orbit",
    "signed_orbit",
    "is_integral",
    "is_dominant",
    "level_of",
    "in_level",
    "dominant_weights_of_level",
    "in_root_lattice",
    "root_coords",
    "from_root_coords",
    "dominant_weights_in_ball",
    "root_lattice_ball",
    "dominant_character",
    "finite_character",
    "weyl_dimension",
]


def _norm(x):
    if isinstance(x, Fraction) and x.denominator == 1:
        return int(x.numerator)
    return x


def weight(coords: Iterable) -> Weight:
    """Normalize an iterable of numbers (ints, Fractions, "p/q" strings) to a weight tuple."""
    out = []
    for c in coords:
        if isinstance(c, str):
            c = Fraction(c)
        elif isinstance(c, float):
            raise TypeError("floating-point weight coordinates are not accepted")
        out.append(_norm(Fraction(c)) if isinstance(c, Fraction) else int(c))
    return tuple(out)


def add(a: Weight, b: Weight) -> Weight:
    return tuple(_norm(x + y) for x, y in zip(a, b))


def sub(a: Weight, b: Weight) -> Weight:
    return tuple(_norm(x - y) for x, y in zip(a, b))


def scale(c, a: Weight) -> Weight:
    return tuple(_norm(c * x) for x in a)


def _cartan(family: str, rank: int) -> list[list[int]]:
    C = [[2 if i == j else 0 for j in range(rank)] for i in range(rank)]

    def link(i, j):
        C[i][j] = C[j][i] = -1

    if family == "A":
        for i in range(rank - 1):
            link(i, i + 1)
    elif family == "D":
        for i in range(rank - 2):
            link(i, i + 1)
        link(rank - 3, rank - 1)
    elif family == "E":
        # Bourbaki numbering: 1-3-4-5-6-7-8 with 2 attached to 4
        for i, j in [(0, 2), (2, 3), (3, 4), (1, 3)] + [(k, k + 1) for k in range(4, rank - 1)]:
            link(i, j)
    return C


def _inverse(M: list[list[int]]) -> list[list[Fraction]]:
    n = len(M)
    A = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(M)]
    for col in range(n):
        piv = next(r for r in range(col, n) if A[r][col] != 0)
        A[col], A[piv] = A[piv], A[col]
        p = A[col][col]
        A[col] = [x / p for x in A[col]]
        for r in range(n):
            if r != col and A[r][col] != 0:
                f = A[r][col]
                A[r] = [x - f * y for x, y in zip(A[r], A[col])]
    return [row[n:] for row in A]


def _positive_roots(C: list[list[int]]) -> list[tuple[int, ...]]:
    """Positive roots in simple-root coordinates, ordered by height."""
    r = len(C)
    simple = [tuple(int(i == j) for j in range(r)) for i in range(r)]
    roots = set(simple)
    layer = list(simple)
    ordered = list(simple)
    while layer:
        nxt = []
        for beta in layer:
            for i in range(r):
                # <beta, alpha_i^vee> in simple-root coordinates
                pairing = sum(C[i][j] * beta[j] for j in range(r))
                p = 0
                down = list(beta)
                while True:
                    down[i] -= 1
                    if tuple(down) in roots:
                        p += 1
                    else:
                        break
                if p - pairing > 0:
                    up = tuple(b + (j == i) for j, b in enumerate(beta))
                    if up not in roots:
                        roots.add(up)
                        nxt.append(up)
                        ordered.append(up)
        layer = nxt
    return ordered


@dataclass(frozen=True)
class RootSystem:
    """Immutable data for a simply-laced root system of type A, D or E.

    Equality and hashing use ``(family, rank)`` only; every other field is
    derived and fully materialized at construction.
    """

    family: str
    rank: int
    cartan: tuple = field(compare=False, repr=False)
    qform: tuple = field(compare=False, repr=False)
    positive_roots: tuple = field(compare=False, repr=False)
    positive_roots_simple: tuple = field(compare=False, repr=False)
    theta: Weight = field(compare=False, repr=False)
    rho: Weight = field(compare=False, repr=False)
    rho_check: Weight = field(compare=False, repr=False)
    h: int = field(compare=False, repr=False)
    h_check: int = field(compare=False, repr=False)
    dim: int = field(compare=False, repr=False)
    # integer numerators of qform over a common denominator, for fast inner products
    _qnum: tuple = field(compare=False, repr=False)
    _qden: int = field(compare=False, repr=False)

    @property
    def name(self) -> str:
        return f"{self.family}{self.rank}"

    @property
    def roots(self) -> tuple:
        return self.positive_roots + tuple(scale(-1, a) for a in self.positive_roots)

    @property
    def zero(self) -> Weight:
        return (0,) * self.rank

    def simple_root(self, i: int) -> Weight:
        return tuple(self.cartan[i])

    def fundamental(self, i: int) -> Weight:
        return tuple(int(i == j) for j in range(self.rank))

    def __str__(self) -> str:
        return self.name


@lru_cache(maxsize=None)
def build_root_system(family: str, rank: int) -> RootSystem:
    """Construct the root system of type ``family``/``rank`` (A_r r>=1, D_r r>=4, E_6..8)."""
    family = str(family).upper()
    ok = (
        (family == "A" and rank >= 1)
        or (family == "D" and rank >= 4)
        or (family == "E" and rank in (6, 7, 8))
    )
    if not ok or not isinstance(rank, int):
        raise InvalidFamilyRank(f"no simply-laced root system {family}{rank}")
    C = _cartan(family, rank)
    Q = _inverse(C)
    den = 1
    for row in Q:
        for x in row:
            den = den * x.denominator // math.gcd(den, x.denominator)
    qnum = tuple(tuple(int(x * den) for x in row) for row in Q)
    pos_simple = _positive_roots(C)
    pos = tuple(tuple(sum(C[i][j] * c[j] for j in range(rank)) for i in range(rank)) for c in pos_simple)
    theta_simple = max(pos_simple, key=sum)
    theta = pos[pos_simple.index(theta_simple)]
    h = sum(theta_simple) + 1
    # comarks equal marks in the simply-laced case
    h_check = sum(theta_simple) + 1
    return RootSystem(
        family=family,
        rank=rank,
        cartan=tuple(tuple(r) for r in C),
        qform=tuple(tuple(r) for r in Q),
        positive_roots=pos,
        positive_roots_simple=tuple(pos_simple),
        theta=theta,
        rho=(1,) * rank,
        rho_check=(1,) * rank,
        h=h,
        h_check=h_check,
        dim=rank + 2 * len(pos),
        _qnum=qnum,
        _qden=den,
    )


def root_system(name: str) -> RootSystem:
    """Parse names such as ``"A1"``, ``"d4"`` or ``"E8"``."""
    name = name.strip()
    if len(name) < 2 or not name[1:].isdigit():
        raise InvalidFamilyRank(f"cannot parse algebra name {name!r}")
    return build_root_system(name[0].upper(), int(name[1:]))


def _check(rs: RootSystem, *ws: Weight) -> None:
    for w in ws:
        if len(w) != rs.rank:
            raise RankMismatch(f"weight {w} has length {len(w)}, expected {rs.rank}")


def inner(rs: RootSystem, a: Weight, b: Weight) -> Fraction | int:
    """Invariant form (a|b) with (alpha|alpha) = 2."""
    _check(rs, a, b)
    q = rs._qnum
    s = 0
    for i, x in enumerate(a):
        if x:
            row = q[i]
            s += x * sum(row[j] * y for j, y in enumerate(b) if y)
    return _norm(Fraction(s, rs._qden) if not isinstance(s, Fraction) else s / rs._qden)


def norm2(rs: RootSystem, a: Weight) -> Fraction | int:
    return inner(rs, a, a)


def reflect(rs: RootSystem, lam: Weight, i: int) -> Weight:
    c = lam[i]
    if not c:
        return lam
    row = rs.cartan[i]
    return tuple(_norm(x - c * a) for x, a in zip(lam, row))


def to_dominant(rs: RootSystem, lam: Weight) -> tuple[Weight, int]:
    """Return ``(w lam, det w)`` with ``w lam`` dominant, using simple reflections."""
    lam = tuple(lam)
    sign = 1
    while True:
        for i, x in enumerate(lam):
            if x < 0:
                lam = reflect(rs, lam, i)
                sign = -sign
                break
        else:
            return lam, sign


def orbit(rs: RootSystem, lam: Weight) -> Iterator[Weight]:
    """Iterate the Weyl orbit of ``lam`` without materializing the group."""
    start, _ = to_dominant(rs, lam)
    seen = {start}
    layer = [start]
    while layer:
        yield from layer
        nxt = []
        for w in layer:
            for i, x in enumerate(w):
                if x > 0:
                    v = reflect(rs, w, i)
                    if v not in seen:
                        seen.add(v)
                        nxt.append(v)
        layer = nxt


def signed_orbit(rs: RootSystem, v: Weight) -> list[tuple[Weight, int]]:
    """Orbit of a regular dominant weight paired with ``det w``.

    For regular ``v`` the breadth-first layer index is the length of ``w``.
    """
    if any(x <= 0 for x in v):
        raise NotDominant(f"{v} is not regular dominant")
    out = []
    seen = {v}
    layer = [v]
    sign = 1
    while layer:
        out.extend((w, sign) for w in layer)
        nxt = []
        for w in layer:
            for i, x in enumerate(w):
                if x > 0:
                    u = reflect(rs, w, i)
                    if u not in seen:
                        seen.add(u)
                        nxt.append(u)
        layer = nxt
        sign = -sign
    return out


def is_integral(lam: Weight) -> bool:
    return all(not isinstance(x, Fraction) or x.denominator == 1 for x in lam)


def is_dominant(lam: Weight) -> bool:
    return is_integral(lam) and all(x >= 0 for x in lam)


def level_of(rs: RootSystem, lam: Weight):
    """(lam|theta), the level at which ``lam`` first becomes integrable."""
    return inner(rs, lam, rs.theta)


def in_level(rs: RootSystem, lam: Weight, m: int) -> bool:
    """Membership in P^m_+."""
    _check(rs, lam)
    return is_dominant(lam) and level_of(rs, lam) <= m


def dominant_weights_of_level(rs: RootSystem, m: int) -> list[Weight]:
    """All lam in P_+ with (lam|theta) <= m, sorted."""
    if m < 0:
        return []
    marks = rs.positive_roots_simple[rs.positive_roots.index(rs.theta)]
    out = []

    def rec(i, left, acc):
        if i == rs.rank:
            out.append(tuple(acc))
            return
        for a in range(left // marks[i] + 1):
            rec(i + 1, left - a * marks[i], acc + [a])

    rec(0, m, [])
    return sorted(out)


def root_coords(rs: RootSystem, lam: Weight) -> tuple:
    """Coordinates of ``lam`` in the basis of simple roots."""
    _check(rs, lam)
    return tuple(_norm(sum(Fraction(q) * x for q, x in zip(row, lam))) for row in rs.qform)


def from_root_coords(rs: RootSystem, c: Sequence) -> Weight:
    return tuple(_norm(sum(a * x for a, x in zip(row, c))) for row in rs.cartan)


def in_root_lattice(rs: RootSystem, lam: Weight) -> bool:
    if not is_integral(lam):
        raise NonIntegralWeight(f"{lam} is not in P")
    return is_integral(root_coords(rs, lam))


def dominant_weights_in_ball(rs: RootSystem, bound, coset: Weight | None = None) -> list[Weight]:
    """Integral dominant weights with |lam|^2 <= bound, optionally restricted to ``coset`` + Q.

    All entries of the inverse Cartan matrix of an ADE system are positive, so a
    partial assignment of labels gives a lower bound for the full norm.
    """
    Q = rs.qform
    r = rs.rank
    out = []

    def rec(i, acc, partial):
        if i == r:
            out.append(tuple(acc))
            return
        a = 0
        while True:
            # norm of acc + [a] + zeros
            val = partial + 2 * a * sum(Q[i][j] * acc[j] for j in range(i)) + Q[i][i] * a * a
            if val > bound:
                break
            rec(i + 1, acc + [a], val)
            a += 1

    rec(0, [], Fraction(0))
    if coset is not None:
        out = [w for w in out if in_root_lattice(rs, sub(w, coset))]
    return out


def _isqrt_ceil(x) -> int:
    x = Fraction(x)
    if x <= 0:
        return 0
    n = math.ceil(x)
    s = math.isqrt(n)
    return s if s * s >= n else s + 1


def root_lattice_ball(rs: RootSystem, bound) -> Iterator[Weight]:
    """Yield gamma in Q (as Dynkin labels) for every gamma with |gamma|^2 <= bound.

    The simple-root coordinate c_i equals (gamma|omega_i), so |c_i| <= |gamma||omega_i|
    gives a box that provably contains the ball; each box point is then filtered exactly.
    """
    r = rs.rank
    box = [_isqrt_ceil(Fraction(bound) * rs.qform[i][i]) for i in range(r)]
    C = rs.cartan

    def rec(i, c):
        if i == r:
            g = tuple(sum(C[a][b] * c[b] for b in range(r)) for a in range(r))
            # |gamma|^2 = c^T C c
            if sum(c[a] * g[a] for a in range(r)) <= bound:
                yield g
            return
        for x in range(-box[i], box[i] + 1):
            yield from rec(i + 1, c + [x])

    yield from rec(0, [])


@lru_cache(maxsize=4096)
def dominant_character(rs: RootSystem, lam: Weight) -> dict:
    """Dominant weight multiplicities of E_lam by Freudenthal's recursion."""
    lam = weight(lam)
    _check(rs, lam)
    if not is_dominant(lam):
        raise NotDominant(f"{lam} is not dominant integral")
    pos = rs.positive_roots
    # dominant weights below lam, reached by subtracting positive roots
    found = {lam}
    layer = [lam]
    while layer:
        nxt = []
        for mu in layer:
            for a in pos:
                nu = tuple(x - y for x, y in zip(mu, a))
                if nu not in found and all(x >= 0 for x in nu):
                    found.add(nu)
                    nxt.append(nu)
        layer = nxt
    rho = rs.rho
    lr = norm2(rs, add(lam, rho))
    order = sorted(found, key=lambda mu: -sum(root_coords(rs, mu)))
    mult: dict = {}

    def m(nu):
        d, _ = to_dominant(rs, nu)
        return mult.get(d, 0)

    for mu in order:
        if mu == lam:
            mult[mu] = 1
            continue
        denom = lr - norm2(rs, add(mu, rho))
        s = 0
        for a in pos:
            j = 1
            while True:
                nu = tuple(x + j * y for x, y in zip(mu, a))
                c = m(nu)
                if not c:
                    break
                s += c * inner(rs, nu, a)
                j += 1
        val = Fraction(2 * s) / denom
        assert val.denominator == 1, "Freudenthal recursion produced a non-integer"
        if val:
            mult[mu] = int(val)
    return mult


@lru_cache(maxsize=1024)
def _finite_character(rs: RootSystem, lam: Weight) -> tuple:
    out = []
    for mu, c in dominant_character(rs, lam).items():
        out.extend((w, c) for w in orbit(rs, mu))
    return tuple(out)


def finite_character(rs: RootSystem, lam: Weight) -> dict:
    """Full weight-multiplicity map of the irreducible module E_lam."""
    return dict(_finite_character(rs, weight(lam)))


def weyl_dimension(rs: RootSystem, lam: Weight) -> int:
    lam = weight(lam)
    _check(rs, lam)
    if not is_dominant(lam):
        raise NotDominant(f"{lam} is not dominant integral")
    lr = add(lam, rs.rho)
    num = Fraction(1)
    for a in rs.positive_roots:
        num *= Fraction(inner(rs, lr, a)) / inner(rs, rs.rho, a)
    assert num.denominator == 1
    return int(num)
