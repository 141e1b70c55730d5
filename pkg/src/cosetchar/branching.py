"""Peeling known module characters out of a graded character.

``decompose`` walks the occupied grades of a series in ascending order; at each
grade it repeatedly reads off an extremal term, identifies the module it
belongs to, records the coefficient as a multiplicity and subtracts that many
copies of the module's character.  The concrete decompositions built on it
are the affine coset branching, Heisenberg string functions, and the type-A
restriction used for level-rank duality.
"""

from __future__ import annotations

import json
from collections.abc import Callable
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from . import liealg as la
from .affchar import (
    as_level,
    ell_of,
    fock_character,
    integrable_character,
    verma_w_character,
    w_h,
    weyl_module_character,
)
from .errors import (
    DimensionMismatch,
    NegativeMultiplicity,
    UnboundedDenominator,
    UnrecognizedExtremal,
)
from .gseries import GradedCharacter, QSeries, add, compare, frac_str, map_weights, mul
from .liealg import RootSystem, Weight

__all__ = [
    "ModuleFamily",
    "BranchingTable",
    "decompose",
    "reconstruct",
    "integrable_family",
    "fock_family",
    "gl_product_family",
    "gko_branching",
    "heisenberg_coset_decompose",
    "restrict_typeA",
    "typeA_restriction_matrix",
    "GenericCheck",
    "generic_w_character",
    "generic_decomposition_check",
]


@dataclass(frozen=True)
class ModuleFamily:
    """A set of modules that can be recognized from the bottom of a residual series.

    ``extremal`` picks one weight from a non-empty grade slice whose coefficient
    is the multiplicity of a single family member; ``label_of`` maps that weight
    to the member's label (or ``None``); ``character(label, order)`` returns the
    member's character.
    """

    name: str
    rank: int
    extremal: Callable[[dict], Weight | None]
    label_of: Callable[[Weight], Any]
    character: Callable[[Any, int], GradedCharacter]


@dataclass(frozen=True)
class BranchingTable:
    family: str
    order: int
    entries: dict
    inputs: dict = field(default_factory=dict)

    def __getitem__(self, label) -> QSeries:
        return self.entries[label]

    def __contains__(self, label) -> bool:
        return label in self.entries

    def labels(self) -> list:
        return sorted(self.entries)

    def to_dict(self) -> dict:
        return {
            "inputs": self.inputs,
            "family": self.family,
            "order": self.order,
            "entries": [
                {
                    "label": [_jcoord(x) for x in lab],
                    "offset": frac_str(self.entries[lab].offset),
                    "coeffs": [str(c) for c in self.entries[lab].coefficients()],
                }
                for lab in self.labels()
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), separators=(",", ":"))


def _jcoord(x):
    if isinstance(x, Fraction) and x.denominator != 1:
        return frac_str(x)
    return int(x)


def decompose(total: GradedCharacter, family: ModuleFamily, order: int | None = None, inputs=None) -> BranchingTable:
    """Write ``total`` as sum over labels of ch(label) * b_label through ``order``."""
    N = total.order if order is None else min(order, total.order)
    if total.rank != family.rank:
        raise DimensionMismatch(f"series rank {total.rank} does not match family rank {family.rank}")
    residual = {g: dict(sl) for g, sl in total._data.items() if g <= N}
    chars: dict = {}
    found: dict = {}
    for g in range(N + 1):
        while residual.get(g):
            sl = residual[g]
            w = family.extremal(sl)
            if w is None:
                raise UnrecognizedExtremal(f"no extremal weight recognized at grade {g}")
            c = sl[w]
            label = family.label_of(w)
            if label is None:
                raise UnrecognizedExtremal(f"weight {w} at grade {g} matches no module of {family.name}")
            if c < 0:
                raise NegativeMultiplicity(f"coefficient {c} for {label} at grade {g}")
            ch = chars.get(label)
            if ch is None:
                ch = chars[label] = family.character(label, N)
            expo = total.offset + g - ch.offset
            if label not in found:
                found[label] = [expo, g, {0: c}]
            else:
                # same label, same character: exponents differ by whole grades
                d = int(expo - found[label][0])
                cs = found[label][2]
                cs[d] = cs.get(d, 0) + c
            for G, csl in ch._data.items():
                t = g + G
                if t > N:
                    continue
                dst = residual.setdefault(t, {})
                for v, x in csl.items():
                    y = dst.get(v, 0) - c * x
                    if y:
                        dst[v] = y
                    else:
                        dst.pop(v, None)
    entries = {lab: QSeries(off, N - g0, cs) for lab, (off, g0, cs) in found.items()}
    return BranchingTable(family.name, N, entries, dict(inputs or {}))


def reconstruct(table: BranchingTable, family: ModuleFamily, like: GradedCharacter) -> GradedCharacter:
    """sum_label ch(label) * b_label, aligned to the offset and order of ``like``."""
    acc = GradedCharacter.zero(like.rank, like.order, like.offset)
    for lab in table.labels():
        b = table[lab]
        ch = family.character(lab, table.order)
        acc = add(acc, mul(ch, b))
    return acc.truncate(min(acc.order, like.order))


# -- families -----------------------------------------------------------------------


def _max_dominant(rs: RootSystem, weights, key=None) -> Weight | None:
    best = None
    best_key = None
    for w in weights:
        u = w if key is None else key(w)
        if not la.is_dominant(u):
            continue
        k = (la.inner(rs, u, rs.rho), w)
        if best is None or k > best_key:
            best, best_key = w, k
    return best


def integrable_family(rs: RootSystem, level: int) -> ModuleFamily:
    """All level-``level`` integrable modules L(lam), lam in P^level_+."""

    def label_of(w):
        return w if la.in_level(rs, w, level) else None

    return ModuleFamily(
        name=f"integrable:{rs.name}:{level}",
        rank=rs.rank,
        extremal=lambda sl: _max_dominant(rs, sl),
        label_of=label_of,
        character=lambda lab, n: integrable_character(rs, level, lab, n),
    )


def fock_family(kappa, gram=((1,),)) -> ModuleFamily:
    """Fock modules over a charge lattice with Gram matrix ``gram`` at norm ``kappa``.

    Each Fock character occupies a single weight column, so every term of a
    slice is extremal.
    """
    kappa = as_level(kappa)
    gram = tuple(tuple(Fraction(x) for x in row) for row in gram)
    return ModuleFamily(
        name=f"fock:{frac_str(kappa)}",
        rank=len(gram),
        extremal=lambda sl: min(sl) if sl else None,
        label_of=lambda w: w,
        character=lambda lab, n: fock_character(gram, kappa, lab, n),
    )


def typeA_restriction_matrix(m: int) -> list[list[int]]:
    """Weight map from sl_{m+1} Dynkin labels to (sl_m labels, u(1) charge).

    The charge is the eigenvalue of diag(1, ..., 1, -m) = sum_i i h_i, i.e.
    (m+1) times the traceless generator commuting with the upper-left sl_m,
    so all charges are integers.
    """
    rows = [[int(i == j) for j in range(m)] for i in range(m - 1)]
    rows.append([j + 1 for j in range(m)])
    return rows


def charge_gram(m: int) -> list[list[Fraction]]:
    """Gram entry for the u(1) charge of gl_m inside sl_{m+1}: 1 / (m (m+1))."""
    return [[Fraction(1, m * (m + 1))]]


def gl_product_family(m: int, level: int) -> ModuleFamily:
    """Modules L_level(sl_m, mu) tensored with Fock(charge) for the gl_m inside sl_{m+1}."""
    if m < 2:
        raise DimensionMismatch("use fock_family when m = 1")
    rs = la.build_root_system("A", m - 1)
    gram = charge_gram(m)

    def label_of(w):
        return w if la.in_level(rs, w[:-1], level) else None

    def character(lab, n):
        mu, c = lab[:-1], lab[-1]
        aff = integrable_character(rs, level, mu, n)
        fock = fock_character(gram, level, (c,), n)
        data = {}
        for g, sl in aff._data.items():
            data[g] = {w + (c,): x for w, x in sl.items()}
        emb = GradedCharacter._raw(m, aff.offset, n, data)
        q = QSeries(fock.offset, n, {g: sum(s.values()) for g, s in fock._data.items()})
        return mul(emb, q)

    return ModuleFamily(
        name=f"gl:{m}:{level}",
        rank=m,
        extremal=lambda sl: _max_dominant(rs, sl, key=lambda w: w[:-1]),
        label_of=label_of,
        character=character,
    )


# -- concrete decompositions --------------------------------------------------------


def gko_branching(rs: RootSystem, k: int, mu: Weight, nu: Weight, order: int) -> BranchingTable:
    """Decompose L_k(mu) (x) L_1(nu) into level-(k+1) integrables times multiplicity series.

    Every multiplicity series must start on the grid w_h(l, mu - (l + h^vee) lam) + Z>=0.
    """
    mu, nu = la.weight(mu), la.weight(nu)
    total = mul(integrable_character(rs, k, mu, order), integrable_character(rs, 1, nu, order))
    fam = integrable_family(rs, k + 1)
    table = decompose(
        total,
        fam,
        order,
        inputs={"algebra": rs.name, "k": k, "mu": list(mu), "nu": list(nu)},
    )
    ell = ell_of(rs, k)
    for lam, b in table.entries.items():
        d = b.offset - w_h(rs, ell, coset_weight(rs, ell, mu, lam))
        if d.denominator != 1 or d < 0:
            raise UnboundedDenominator(f"b^{lam} starts at {b.offset}, off the expected grid")
    return table


def coset_weight(rs: RootSystem, ell, mu: Weight, lam: Weight) -> Weight:
    """mu - (ell + h^vee) lam, the W-algebra highest weight paired with lam."""
    return la.sub(mu, la.scale(as_level(ell) + rs.h_check, lam))


def heisenberg_coset_decompose(series: GradedCharacter, kappa, order: int | None = None, gram=((1,),)) -> BranchingTable:
    """Per-charge multiplicity series of Fock modules in a charge-graded series."""
    return decompose(series, fock_family(kappa, gram), order, inputs={"kappa": frac_str(as_level(kappa))})


def restrict_typeA(x: GradedCharacter, m: int) -> GradedCharacter:
    """Restrict an sl_{m+1} character to gl_m = sl_m + u(1) (integer charge convention)."""
    if m < 1 or x.rank != m:
        raise DimensionMismatch(f"series of rank {x.rank} is not an sl_{m + 1} character")
    return map_weights(x, typeA_restriction_matrix(m), m)


# -- generic level ------------------------------------------------------------------------


@dataclass(frozen=True)
class GenericCheck:
    holds: bool
    order: int
    first_bad_grade: int | None
    labels: tuple

    def __bool__(self) -> bool:
        return self.holds


def generic_w_character(rs: RootSystem, ell, mu: Weight, lam: Weight, order: int) -> QSeries:
    """Alternating Weyl-group sum of W Verma characters attached to (mu, lam).

    sum_w det(w) ch M(chi_{mu - (l + h^vee)(w(lam + rho) - rho)}), truncated
    ``order`` grades above the w = 1 term.
    """
    base = w_h(rs, ell, coset_weight(rs, ell, mu, lam))
    acc = QSeries(base, order)
    for u, eps in la.signed_orbit(rs, la.add(lam, rs.rho)):
        wl = la.sub(u, rs.rho)
        v = verma_w_character(rs, ell, coset_weight(rs, ell, mu, wl), order)
        if v.offset > base + order:
            continue
        acc = acc + v.scale(eps)
    return acc


def _generic_labels(rs: RootSystem, mu: Weight, nu: Weight, order: int) -> list[Weight]:
    # offset of lam's term above the total: (|lam - mu|^2 - |nu|^2) / 2
    nu2 = la.norm2(rs, nu)
    mu2 = la.norm2(rs, mu)
    out = []
    for lam in la.dominant_weights_in_ball(rs, 2 * mu2 + 2 * (nu2 + 2 * order), coset=la.add(mu, nu)):
        if Fraction(la.norm2(rs, la.sub(lam, mu)) - nu2, 2) <= order:
            out.append(lam)
    return out


def generic_decomposition_check(
    rs: RootSystem, k, mu: Weight, nu: Weight, order: int, multiplicity: str = "verma"
) -> GenericCheck:
    """Compare ch V_k(mu) ch L_1(nu) with sum_lam ch V_{k+1}(lam) * (multiplicity series).

    ``multiplicity="verma"`` uses W Verma characters; ``"alternating"`` uses
    :func:`generic_w_character`.
    """
    k = as_level(k)
    mu, nu = la.weight(mu), la.weight(nu)
    ell = ell_of(rs, k)
    lhs = mul(weyl_module_character(rs, k, mu, order), integrable_character(rs, 1, nu, order))
    labels = _generic_labels(rs, mu, nu, order)
    rhs = GradedCharacter.zero(rs.rank, order, lhs.offset)
    for lam in labels:
        if multiplicity == "verma":
            b = verma_w_character(rs, ell, coset_weight(rs, ell, mu, lam), order)
        elif multiplicity == "alternating":
            b = generic_w_character(rs, ell, mu, lam, order)
        else:
            raise ValueError(f"unknown multiplicity model {multiplicity!r}")
        rhs = add(rhs, mul(weyl_module_character(rs, k + 1, lam, order), b))
    ok, n, bad = compare(lhs, rhs)
    return GenericCheck(ok, n, bad, tuple(labels))
