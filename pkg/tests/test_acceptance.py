"""Acceptance criteria, one test per criterion.

Each criterion returns ``(ok, detail)``; the pytest wrapper records a
``criterion N: PASS/FAIL`` line (shown in the terminal summary) and asserts
both the verdict and the time limit.  Run this file directly to print the
lines without pytest.
"""

from __future__ import annotations

import time
from fractions import Fraction

import pytest

from cosetchar import liealg as la
from cosetchar.affchar import coset_cc, ell_of, verma_w_character, w_cc
from cosetchar.branching import gko_branching
from cosetchar.gseries import compare
from cosetchar.verify import (
    verify_coset_cc_identity,
    verify_ffduality_cc,
    verify_frenkel_kac,
    verify_generic,
    verify_gko,
    verify_heisenberg_identity,
    verify_ks_cc,
    verify_levelrank_A,
    verify_levelrank_D_cc,
    verify_unitarity,
    levelrank_vacuum,
)

A1 = la.build_root_system("A", 1)
A2 = la.build_root_system("A", 2)

ADE_UP_TO_8 = [("A", r) for r in range(1, 9)] + [("D", r) for r in range(4, 9)] + [("E", 6), ("E", 7), ("E", 8)]


def _fails(*reports) -> str:
    bad = [f"{r.suite}: {c.desc}" for r in reports for c in r.failures()]
    return f"failures: {bad}" if bad else ""


def crit_ising():
    r = verify_gko(A1, 1, 10)
    triples = set()
    offsets = set()
    for mu in la.dominant_weights_of_level(A1, 1):
        for nu in la.dominant_weights_of_level(A1, 1):
            t = gko_branching(A1, 1, mu, nu, 10)
            for lam, b in t.entries.items():
                triples.add((mu, nu, lam))
                offsets.add(b.offset)
    cc_ok = coset_cc(A1, 1) == w_cc(A1, Fraction(-5, 4)) == Fraction(1, 2)
    ok = r.passed and len(triples) == 6 and offsets == {0, Fraction(1, 2), Fraction(1, 16)} and cc_ok
    return ok, f"{len(triples)} triples, offsets {sorted(map(str, offsets))}, c=1/2: {cc_ok} {_fails(r)}"


def crit_cross_pipeline():
    gko = gko_branching(A1, 1, (0,), (0,), 10)[(0,)]
    lr = levelrank_vacuum(2, 1, 10)
    ok, n, bad = compare(gko, lr)
    env = verma_w_character(A1, ell_of(A1, 1), (0,), 10)
    dominated = all(gko[g] <= env[g] for g in range(11))
    return ok and n == 10 and dominated, f"equal to order {n}, first difference {bad}, Verma envelope dominates: {dominated}"


def crit_frenkel_kac():
    reps = [verify_frenkel_kac(la.root_system(n), 8) for n in ("A1", "A2", "A3", "D4")]
    return all(r.passed for r in reps), f"{sum(len(r.checks) for r in reps)} checks {_fails(*reps)}"


def crit_cc_identities():
    reps = []
    for i, (fam, r) in enumerate(ADE_UP_TO_8):
        rs = la.build_root_system(fam, r)
        reps.append(verify_coset_cc_identity(rs, 20, seed=100 + i, pq_max=12))
        reps.append(verify_ffduality_cc(rs, 20, seed=200 + i))
    return all(r.passed for r in reps), f"{len(ADE_UP_TO_8)} algebras {_fails(*reps)}"


def crit_unitarity():
    reps = []
    for fam, r in ADE_UP_TO_8:
        rs = la.build_root_system(fam, r)
        reps.append(verify_unitarity(rs, max(30, rs.h_check + 1)))
    return all(r.passed for r in reps), f"{len(reps)} algebras {_fails(*reps)}"


def crit_heisenberg():
    reps = [
        verify_heisenberg_identity(la.build_root_system(f, r), 1000, seed=300 + i)
        for i, (f, r) in enumerate([("A", 1), ("A", 2), ("A", 3), ("A", 4), ("D", 4)])
    ]
    return all(r.passed for r in reps), f"5 algebras x 1000 samples {_fails(*reps)}"


def crit_selection_and_verma():
    reps = [verify_gko(A1, k, 6) for k in (0, 1, 2)] + [verify_gko(A2, 1, 6)]
    relevant = [c for r in reps for c in r.checks if c.anchor in ("selection rule", "Verma bound")]
    ok = all(r.passed for r in reps) and relevant and all(c.passed for c in relevant)
    return ok, f"{len(relevant)} selection/Verma checks {_fails(*reps)}"


def crit_generic():
    r = verify_generic(A1, 6, seed=2024, samples=3)
    alt = [c for c in r.checks if "alternating" in c.desc]
    ver = [c for c in r.checks if "single Verma" in c.desc]
    holds = sum(c.actual == "holds" for c in ver)
    detail = f"alternating sum holds {sum(c.passed for c in alt)}/{len(alt)}; single Verma holds {holds}/{len(ver)}"
    if holds < len(ver):
        grades = sorted({c.actual for c in ver if c.actual != "holds"})
        detail += f", discrepancy reported: {grades}"
    return r.passed, detail


def crit_levelrank_ks():
    reps = [verify_levelrank_A(2, 2, 6)]
    seven_tenths = reps[0].checks[0].actual == Fraction(7, 10)
    reps += [verify_levelrank_D_cc(n, m) for n, m in ((8, 8), (8, 4), (8, 5), (10, 6), (12, 9))]
    reps += [verify_ks_cc(n, m) for n in range(1, 6) for m in range(2, 6)]
    return all(r.passed for r in reps) and seven_tenths, f"{len(reps)} reports, level-rank c = 7/10: {seven_tenths} {_fails(*reps)}"


CRITERIA = [
    (1, "GKO branching for sl2 at level 1 (Ising)", crit_ising, 5),
    (2, "coset vacuum equals level-rank string function", crit_cross_pipeline, 10),
    (3, "lattice construction equals Weyl-Kac at level 1", crit_frenkel_kac, 60),
    (4, "central-charge identities at random levels", crit_cc_identities, 5),
    (5, "unitarity classification", crit_unitarity, 5),
    (6, "Heisenberg dual-pair quadratic identity", crit_heisenberg, 5),
    (7, "selection rule and Verma bound", crit_selection_and_verma, 60),
    (8, "generic-level decomposition", crit_generic, 60),
    (9, "level-rank and supercoset central charges", crit_levelrank_ks, 5),
]


def _run(num, title, fn, limit):
    t0 = time.perf_counter()
    ok, detail = fn()
    dt = time.perf_counter() - t0
    fast = dt < limit
    verdict = "PASS" if ok and fast else "FAIL"
    return ok, fast, f"criterion {num}: {verdict}  {title}  ({dt:.2f}s, limit {limit}s)  {detail}"


@pytest.mark.parametrize("num,title,fn,limit", CRITERIA, ids=[f"criterion{c[0]}" for c in CRITERIA])
def test_acceptance(num, title, fn, limit, acceptance_log):
    ok, fast, line = _run(num, title, fn, limit)
    print(line)
    acceptance_log(line)
    assert ok, line
    assert fast, line


if __name__ == "__main__":
    for crit in CRITERIA:
        print(_run(*crit)[2])
