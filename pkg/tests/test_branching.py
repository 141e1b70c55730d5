from __future__ import annotations

import json
from fractions import Fraction

import pytest

from cosetchar import liealg as la
from cosetchar.affchar import ell_of, fock_character, integrable_character, verma_w_character, w_h
from cosetchar.branching import (
    charge_gram,
    coset_weight,
    decompose,
    fock_family,
    generic_decomposition_check,
    generic_w_character,
    gko_branching,
    gl_product_family,
    heisenberg_coset_decompose,
    integrable_family,
    reconstruct,
    restrict_typeA,
)
from cosetchar.errors import DimensionMismatch, NegativeMultiplicity, UnrecognizedExtremal
from cosetchar.gseries import GradedCharacter, add, compare, mul

A1 = la.build_root_system("A", 1)
A2 = la.build_root_system("A", 2)
F = Fraction


def _half_products(order2: int):
    """Coefficients of prod_{n>=1} (1 + q^{n-1/2}) and (1 - q^{n-1/2}) in powers of q^{1/2}."""
    plus = [1] + [0] * order2
    minus = [1] + [0] * order2
    for n in range(1, order2 + 1, 2):
        for g in range(order2, n - 1, -1):
            plus[g] += plus[g - n]
            minus[g] -= minus[g - n]
    return plus, minus


def ising(order: int):
    """Ising characters from product formulas: (vacuum, epsilon shifted by 1/2, sigma shifted by 1/16)."""
    plus, minus = _half_products(2 * order + 1)
    vac = [(plus[2 * g] + minus[2 * g]) // 2 for g in range(order + 1)]
    eps = [(plus[2 * g + 1] - minus[2 * g + 1]) // 2 for g in range(order + 1)]
    sig = [1] + [0] * order
    for n in range(1, order + 1):
        for g in range(order, n - 1, -1):
            sig[g] += sig[g - n]
    return vac, eps, sig


def test_ising_oracle_sanity():
    vac, eps, sig = ising(6)
    assert vac == [1, 0, 1, 1, 2, 2, 3]
    assert eps[:4] == [1, 1, 1, 1]
    assert sig[:5] == [1, 1, 1, 2, 2]


def test_self_decomposition():
    for lam in la.dominant_weights_of_level(A2, 2):
        t = decompose(integrable_character(A2, 2, lam, 4), integrable_family(A2, 2))
        assert list(t.entries) == [lam]
        assert t[lam].offset == 0 and t[lam].coefficients() == [1, 0, 0, 0, 0]


def test_ising_branching_table():
    vac, eps, sig = ising(10)
    want = {
        ((0,), (0,)): {(0,): (F(0), vac), (2,): (F(1, 2), eps[:10])},
        ((0,), (1,)): {(1,): (F(1, 16), sig)},
        ((1,), (0,)): {(1,): (F(1, 16), sig)},
        ((1,), (1,)): {(0,): (F(1, 2), eps), (2,): (F(0), vac)},
    }
    ell = ell_of(A1, 1)
    for (mu, nu), entries in want.items():
        t = gko_branching(A1, 1, mu, nu, 10)
        assert set(t.entries) == set(entries)
        for lam, (off, coeffs) in entries.items():
            b = t[lam]
            assert b.offset == off == w_h(A1, ell, coset_weight(A1, ell, mu, lam))
            assert b.coefficients() == coeffs[: b.order + 1]


def test_reconstruction_and_selection_rule_a2():
    for mu in la.dominant_weights_of_level(A2, 1):
        for nu in la.dominant_weights_of_level(A2, 1):
            total = mul(integrable_character(A2, 1, mu, 5), integrable_character(A2, 1, nu, 5))
            t = gko_branching(A2, 1, mu, nu, 5)
            for lam in t.entries:
                assert la.in_root_lattice(A2, la.sub(la.sub(lam, mu), nu))
                assert t[lam].is_nonnegative()
            assert compare(reconstruct(t, integrable_family(A2, 2), total), total) == (True, 5, None)


def test_verma_bound_a1_level2():
    ell = ell_of(A1, 2)
    for mu in la.dominant_weights_of_level(A1, 2):
        for nu in la.dominant_weights_of_level(A1, 1):
            t = gko_branching(A1, 2, mu, nu, 6)
            for lam, b in t.entries.items():
                v = verma_w_character(A1, ell, coset_weight(A1, ell, mu, lam), 6)
                assert b.offset == v.offset
                assert all(b[g] <= v[g] for g in range(b.order + 1))


def test_negative_multiplicity_detected():
    bad = integrable_character(A1, 2, (0,), 4).scale(-1)
    with pytest.raises(NegativeMultiplicity):
        decompose(bad, integrable_family(A1, 2))
    total = mul(integrable_character(A1, 1, (0,), 4), integrable_character(A1, 1, (0,), 4))
    corrupt = add(total, GradedCharacter(1, total.offset, 4, {(2, (2,)): -7}))
    with pytest.raises(NegativeMultiplicity):
        decompose(corrupt, integrable_family(A1, 2))


def test_unrecognized_extremal():
    with pytest.raises(UnrecognizedExtremal):
        decompose(GradedCharacter(1, 0, 2, {(0, (-1,)): 1}), integrable_family(A1, 2))
    with pytest.raises(UnrecognizedExtremal):
        decompose(GradedCharacter(1, 0, 2, {(0, (5,)): 1}), integrable_family(A1, 2))


def test_restrict_typeA_examples():
    adj = GradedCharacter.from_weights(1, la.finite_character(A1, (2,)), 0)
    assert restrict_typeA(adj, 1).slice(0) == {(2,): 1, (0,): 1, (-2,): 1}
    adj3 = GradedCharacter.from_weights(2, la.finite_character(A2, (1, 1)), 0)
    r = restrict_typeA(adj3, 2).slice(0)
    # 3 (x) 3bar - 1 = adjoint_0 + singlet_0 + doublet_{+3} + doublet_{-3}
    assert r == {(2, 0): 1, (0, 0): 2, (-2, 0): 1, (1, 3): 1, (-1, 3): 1, (1, -3): 1, (-1, -3): 1}
    triv = GradedCharacter.unit(2, 0)
    assert restrict_typeA(triv, 2).slice(0) == {(0, 0): 1}
    with pytest.raises(DimensionMismatch):
        restrict_typeA(triv, 1)


def test_heisenberg_single_fock_and_shift():
    x = fock_character([[1]], 3, (2,), 6)
    t = heisenberg_coset_decompose(x, 3, 6)
    assert list(t.entries) == [(2,)] and t[(2,)].coefficients() == [1] + [0] * 6
    shifted = GradedCharacter._raw(1, x.offset, 6, {g: {(w[0] + 1,): c for w, c in sl.items()} for g, sl in x._data.items()})
    t2 = heisenberg_coset_decompose(shifted, 3, 6)
    assert list(t2.entries) == [(3,)]
    assert t2[(3,)].offset == F(4 - 9, 6)


def test_string_functions_of_level2_sl2():
    vac, eps, _ = ising(10)
    x = restrict_typeA(integrable_character(A1, 2, (0,), 10), 1)
    t = heisenberg_coset_decompose(x, 2, 10, gram=charge_gram(1))
    assert t[(0,)].offset == 0 and t[(0,)].coefficients() == vac
    assert t[(2,)].offset == F(1, 2) and t[(2,)].coefficients() == eps[: t[(2,)].order + 1]
    assert all(c % 2 == 0 for (c,) in t.entries)


def test_gl_product_family_levelrank_vacuum():
    x = restrict_typeA(integrable_character(A2, 2, (0, 0), 6), 2)
    t = decompose(x, gl_product_family(2, 2), 6)
    tri = gko_branching(A1, 2, (0,), (0,), 6)[(0,)]
    assert t[(0, 0)] == tri


def test_table_json_schema():
    t = gko_branching(A1, 1, (1,), (1,), 4)
    d = json.loads(t.to_json())
    assert set(d) == {"inputs", "family", "order", "entries"}
    assert d["order"] == 4
    assert [e["label"] for e in d["entries"]] == [[0], [2]]
    assert d["entries"][0]["offset"] == "1/2"
    assert all(isinstance(c, str) for e in d["entries"] for c in e["coeffs"])


@pytest.mark.parametrize("mu,nu", [((0,), (0,)), ((0,), (1,)), ((1,), (1,))])
def test_generic_decomposition_models(mu, nu):
    k = F(1, 101) - 2
    alt = generic_decomposition_check(A1, k, mu, nu, 6, "alternating")
    assert alt.holds and alt.order == 6
    ver = generic_decomposition_check(A1, k, mu, nu, 6, "verma")
    assert not ver.holds and ver.first_bad_grade is not None
    assert all(la.in_root_lattice(A1, la.sub(la.sub(lam, mu), nu)) for lam in alt.labels)


def test_generic_vacuum_mismatch_is_at_grade_one():
    # weight-0 coefficient at grade 1: 2 on the left, 3 from single Verma multiplicities
    ver = generic_decomposition_check(A1, F(1, 7), (0,), (0,), 4, "verma")
    assert ver.first_bad_grade == 1


def test_generic_w_character_leading_term():
    ell = ell_of(A1, F(1, 101) - 2)
    b = generic_w_character(A1, ell, (0,), (0,), 6)
    v = verma_w_character(A1, ell, (0,), 6)
    assert b.offset == v.offset
    # the reflected term enters one grade higher with sign -1
    assert b[0] == 1 and b[1] == v[1] - 1


def test_fock_family_labels():
    fam = fock_family(2)
    assert fam.label_of((3,)) == (3,)
