from __future__ import annotations

import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cosetchar import liealg as la
from cosetchar.errors import InvalidFamilyRank, NonIntegralWeight, NotDominant, RankMismatch

ALL = [("A", 1), ("A", 2), ("A", 3), ("A", 4), ("D", 4), ("D", 5), ("E", 6), ("E", 7), ("E", 8)]

# (h_check, dim) for simply-laced algebras, standard tables
TABLE = {
    ("A", 1): (2, 3),
    ("A", 2): (3, 8),
    ("A", 3): (4, 15),
    ("A", 4): (5, 24),
    ("D", 4): (6, 28),
    ("D", 5): (8, 45),
    ("E", 6): (12, 78),
    ("E", 7): (18, 133),
    ("E", 8): (30, 248),
}

WEYL_ORDER = {"A1": 2, "A2": 6, "A3": 24, "D4": 192}


@pytest.mark.parametrize("fam,r", ALL)
def test_root_system_tables(fam, r):
    rs = la.build_root_system(fam, r)
    hv, dim = TABLE[fam, r]
    assert rs.h_check == hv == rs.h
    assert rs.dim == dim == r * (hv + 1)
    assert len(rs.positive_roots) == (dim - r) // 2
    assert len(rs.roots) == dim - r


@pytest.mark.parametrize("fam,r", ALL)
def test_roots_have_norm_two_and_theta_is_highest(fam, r):
    rs = la.build_root_system(fam, r)
    assert all(la.norm2(rs, a) == 2 for a in rs.roots)
    assert rs.theta in rs.positive_roots
    assert la.is_dominant(rs.theta)
    assert la.inner(rs, rs.theta, rs.rho) == rs.h_check - 1
    for i in range(r):
        assert la.inner(rs, rs.simple_root(i), rs.rho) == 1
        for j in range(r):
            assert la.inner(rs, rs.simple_root(i), rs.fundamental(j)) == (1 if i == j else 0)
            assert rs.cartan[i][j] == la.inner(rs, rs.simple_root(i), rs.simple_root(j))


def test_a1_basics():
    rs = la.build_root_system("A", 1)
    assert rs.theta == (2,)
    assert rs.rho == rs.rho_check == (1,)
    assert la.inner(rs, (1,), (1,)) == Fraction(1, 2)
    assert la.inner(la.build_root_system("A", 2), (1, 0), (0, 1)) == Fraction(1, 3)


@pytest.mark.parametrize("fam,r", [("D", 3), ("E", 9), ("E", 5), ("A", 0), ("B", 2), ("D", 2)])
def test_invalid_family_rank(fam, r):
    with pytest.raises(InvalidFamilyRank):
        la.build_root_system(fam, r)


def test_name_parsing():
    assert la.root_system("e8") is la.build_root_system("E", 8)
    with pytest.raises(InvalidFamilyRank):
        la.root_system("Q")


def test_rank_mismatch_and_float_rejection():
    rs = la.build_root_system("A", 2)
    with pytest.raises(RankMismatch):
        la.inner(rs, (1,), (1, 0))
    with pytest.raises(TypeError):
        la.weight([0.5, 1])


def test_membership_predicates():
    rs = la.build_root_system("A", 2)
    assert la.is_integral((1, -2)) and not la.is_integral((Fraction(1, 2), 0))
    assert la.is_dominant((0, 3)) and not la.is_dominant((-1, 3))
    assert la.in_level(rs, (1, 1), 2) and not la.in_level(rs, (1, 1), 1)
    assert la.in_root_lattice(rs, (1, 1)) and not la.in_root_lattice(rs, (1, 0))
    assert la.in_root_lattice(rs, (3, 0))
    with pytest.raises(NonIntegralWeight):
        la.in_root_lattice(rs, (Fraction(1, 2), 0))


@pytest.mark.parametrize("name,expected", [("A1", [1, 2, 3, 4]), ("A2", [1, 3, 6, 10]), ("D4", [1, 4, 11])])
def test_level_weight_counts(name, expected):
    # A1: k+1; A2: (k+1)(k+2)/2; D4: solutions of a1 + 2 a2 + a3 + a4 <= k
    rs = la.root_system(name)
    assert [len(la.dominant_weights_of_level(rs, k)) for k in range(len(expected))] == expected


@pytest.mark.parametrize("name", list(WEYL_ORDER))
def test_regular_orbit_is_weyl_group(name):
    rs = la.root_system(name)
    orb = la.signed_orbit(rs, rs.rho)
    assert len(orb) == WEYL_ORDER[name]
    assert sum(s for _, s in orb) == 0
    assert len(set(la.orbit(rs, rs.rho))) == WEYL_ORDER[name]


def test_to_dominant_sign():
    rs = la.build_root_system("A", 2)
    for v, s in la.signed_orbit(rs, la.add(rs.rho, (1, 0))):
        dom, sign = la.to_dominant(rs, v)
        assert dom == la.add(rs.rho, (1, 0))
        assert sign == s


def _brute_ball(rs, bound, box):
    out = set()
    for c in itertools.product(range(-box, box + 1), repeat=rs.rank):
        w = la.from_root_coords(rs, c)
        if la.norm2(rs, w) <= bound:
            out.add(w)
    return out


@pytest.mark.parametrize("name,bound", [("A1", 12), ("A2", 8), ("A3", 6)])
def test_root_lattice_ball_against_brute_force(name, bound):
    rs = la.root_system(name)
    assert set(la.root_lattice_ball(rs, bound)) == _brute_ball(rs, bound, 6)


def test_dominant_ball_with_coset():
    rs = la.build_root_system("A", 2)
    got = la.dominant_weights_in_ball(rs, 6, coset=(1, 0))
    brute = {
        (a, b)
        for a in range(8)
        for b in range(8)
        if la.norm2(rs, (a, b)) <= 6 and la.in_root_lattice(rs, (a - 1, b))
    }
    assert set(got) == brute


def test_a1_finite_character_oracle():
    rs = la.build_root_system("A", 1)
    for n in range(7):
        assert la.finite_character(rs, (n,)) == {(m,): 1 for m in range(-n, n + 1, 2)}


def test_a2_adjoint():
    rs = la.build_root_system("A", 2)
    ch = la.finite_character(rs, (1, 1))
    assert sum(ch.values()) == 8
    assert ch[(0, 0)] == 2


def test_exceptional_adjoint_and_minuscule():
    e8 = la.build_root_system("E", 8)
    ch = la.finite_character(e8, e8.theta)
    assert sum(ch.values()) == 248 and ch[e8.zero] == 8
    d4 = la.build_root_system("D", 4)
    assert sum(la.finite_character(d4, d4.fundamental(0)).values()) == 8
    e6 = la.build_root_system("E", 6)
    assert la.weyl_dimension(e6, e6.fundamental(0)) == 27


def test_finite_character_requires_dominant():
    with pytest.raises(NotDominant):
        la.finite_character(la.build_root_system("A", 1), (-1,))


small_dominant = st.tuples(st.integers(0, 3), st.integers(0, 3))


@settings(max_examples=25, deadline=None)
@given(small_dominant)
def test_freudenthal_matches_weyl_dimension_a2(lam):
    rs = la.build_root_system("A", 2)
    ch = la.finite_character(rs, lam)
    assert sum(ch.values()) == la.weyl_dimension(rs, lam)


@settings(max_examples=15, deadline=None)
@given(st.tuples(st.integers(0, 2), st.integers(0, 1), st.integers(0, 1), st.integers(0, 1)))
def test_freudenthal_is_weyl_invariant_d4(lam):
    rs = la.build_root_system("D", 4)
    ch = la.finite_character(rs, lam)
    assert sum(ch.values()) == la.weyl_dimension(rs, lam)
    for w, c in ch.items():
        for i in range(rs.rank):
            assert ch[la.reflect(rs, w, i)] == c


@settings(max_examples=40, deadline=None)
@given(
    st.tuples(*[st.fractions(min_value=-5, max_value=5, max_denominator=6)] * 3),
    st.tuples(*[st.fractions(min_value=-5, max_value=5, max_denominator=6)] * 3),
)
def test_form_is_symmetric_and_weyl_invariant(x, y):
    rs = la.build_root_system("A", 3)
    assert la.inner(rs, x, y) == la.inner(rs, y, x)
    for i in range(3):
        assert la.inner(rs, la.reflect(rs, x, i), la.reflect(rs, y, i)) == la.inner(rs, x, y)
