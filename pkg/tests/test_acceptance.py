"""Acceptance criteria 1-7, each at its stated scale and tolerance.

Every test records one PASS/FAIL line; the lines are printed in the pytest
terminal summary, or directly when this file is run as a script.
"""

import itertools
import time
from fractions import Fraction

from asramify.asympt import asymptotic_slope, closed_form_range, generic_jump
from asramify.cover import CurveJet, jump, pivot_index, sufficient_jet_order
from asramify.errors import VerificationError
from asramify.ffield import ff_make
from asramify.formats import corpus_paths, parse_cover
from asramify.local import as_jump
from asramify.series import LaurentSeries
from asramify.strata import MultiPoly, strata_system, stratum_contains, verify_semicontinuity
from asramify.verify import ScanCache, admissible_r

RESULTS: dict[int, str] = {}

CORPUS = {p.rsplit("/", 1)[-1][:-len(".cover")]: parse_cover(p) for p in corpus_paths()}
CACHE = ScanCache()


def record(n: int, title: str, ok: bool, detail: str) -> None:
    RESULTS[n] = f"criterion {n} [{'PASS' if ok else 'FAIL'}] {title}: {detail}"
    assert ok, RESULTS[n]


def test_criterion_1_oracle_equivalence():
    start = time.time()
    jets = mismatches = 0
    for c in CORPUS.values():
        assert c.field.q == 4 and c.m + c.n <= 3
        for r in admissible_r(c, 6):
            system = strata_system(c, r)
            kind, _ = c.family(r)
            for coeffs, h in CACHE.table(c, r).items():
                jet = CurveJet(c.field, kind, r, coeffs)
                top = system.top_level(jet)
                # stratum thresholds: jet in {h <= s} exactly for s >= h
                thresh = stratum_contains(system, h, jet) and (
                    h == 0 or not stratum_contains(system, h - 1, jet))
                jets += 1
                if top != h or not thresh:
                    mismatches += 1
    elapsed = time.time() - start
    record(1, "oracle equivalence", mismatches == 0 and elapsed < 300,
           f"{len(CORPUS)} covers, {jets} jets, {mismatches} mismatches, {elapsed:.1f}s")


def test_criterion_2_sufficient_order():
    violations, runs = [], 0
    for name, c in CORPUS.items():
        for r in admissible_r(c, 6):
            runs += 1
            try:
                sufficient_jet_order(c, r, "exhaustive", table=CACHE.table(c, r))
            except VerificationError as exc:
                violations.append((name, r, str(exc)))
    record(2, "sufficient jet order within bound", not violations,
           f"{runs} (cover, r) scans, {len(violations)} violations")


def test_criterion_3_semicontinuity():
    failures, runs = [], 0
    for name, c in CORPUS.items():
        for r in admissible_r(c, 6):
            rep = verify_semicontinuity(c, r)
            runs += 1
            if not rep.ok:
                failures.append((name, rep.summary()))
    record(3, "closed strata", not failures,
           f"{runs} (cover, r) systems, every s, {len(failures)} violations")


def test_criterion_4_jump_bound():
    violations, runs = [], 0
    for name, c in CORPUS.items():
        for r in admissible_r(c, 8):
            top = max(CACHE.table(c, r).values())
            runs += 1
            bound = c.jump_bound(r)
            if top > bound:
                violations.append((name, r, top, bound))
    record(4, "h <= rm+n (and <= m on transversal curves)", not violations,
           f"{runs} exhaustive scans, {len(violations)} violations")


def test_criterion_5_generic_and_slope():
    problems, runs = [], 0
    for name, c in CORPUS.items():
        j = pivot_index(c)
        for r in admissible_r(c, 8, closed_form_range(c, j) + 1):
            rep = generic_jump(c, r)
            top = max(CACHE.table(c, r).values())
            runs += 1
            if rep.h_r != top or jump(c, rep.witness) != rep.h_r:
                problems.append((name, r, rep.h_r, top))
            if abs(rep.slope - c.m) > Fraction(c.n + j + 1, r):
                problems.append((name, r, "envelope"))
        if asymptotic_slope(c, 12, small_r="skip").limit != c.m:
            problems.append((name, "limit"))
    basic = CORPUS["t1"]
    table = asymptotic_slope(basic, 12, small_r="exhaustive")
    worked = all(row.h_r == (row.r if row.r % 2 else row.r - 1) for row in table.rows)
    if not worked:
        problems.append(("t1", "worked example"))
    record(5, "generic jump closed form and slope", not problems,
           f"{runs} (cover, r) pairs up to rm+n=8, worked example h_r = r or r-1 "
           f"for r=1..12 {'reproduced' if worked else 'NOT reproduced'}, {len(problems)} problems")


def test_criterion_6_local_engine():
    cases = failures = 0
    for F in (ff_make(2, 1), ff_make(2, 2, [1, 1, 1])):
        elems = F.elements()
        shifts = []
        for cs in itertools.product(elems, repeat=3):
            d = LaurentSeries.from_dict(F, {-(s + 1): c for s, c in enumerate(cs)}, 1)
            shifts.append(d ** F.p - d)
        integral = [LaurentSeries.from_dict(F, {k: c for k, c in enumerate(cs)}, 1)
                    for cs in itertools.product(elems, repeat=2)]
        for cs in itertools.product(elems, repeat=6):
            a = LaurentSeries.from_dict(F, {-(l + 1): c for l, c in enumerate(cs)}, 1)
            h = as_jump(a)
            for w in shifts:
                cases += 1
                failures += as_jump(a + w) != h
            for z in integral:
                cases += 1
                failures += as_jump(a + z) != h
    frob_cases = 0
    for p in (2, 3, 5, 7):
        for e in range(1, 7):
            if p ** e > 64:
                continue
            F = ff_make(p, e, seed=0)
            for x in F.elements():
                frob_cases += 1
                failures += F.pth_root(F.frob(x, 1)) != x or F.frob(F.pth_root(x), 1) != x
    record(6, "local engine invariances", failures == 0 and cases >= 10 ** 5,
           f"{cases} shift/perturbation cases, {frob_cases} Frobenius round trips, "
           f"{failures} failures")


def test_criterion_7_known_values():
    checked, mismatches = [], []
    for name, c in CORPUS.items():
        F = c.field
        j = min(k for k in range(64) if c.theta0(k))
        r = max(2, j + 2)
        system = strata_system(c, r)
        if j + 1 >= system.L:
            continue
        V = system.F[0].nvars
        f0 = MultiPoly.constant(F, V, system.theta[0, 0])
        X1 = MultiPoly.var(F, V, 1)
        fj = MultiPoly.constant(F, V, c.theta0(j + 1)) - X1.scale(F.mul(c.m % F.p, c.theta0(j)))
        if system.F[0] != f0 or system.F[j + 1] != fj:
            mismatches.append((name, r))
        checked.append(name)
    record(7, "F_0 = theta_00 and F_{j+1} = theta_{0,j+1} - m theta_{0j} X_1",
           len(checked) >= 5 and not mismatches,
           f"{len(checked)} covers with r > j+1, {len(mismatches)} mismatches")


if __name__ == "__main__":
    for n, test in enumerate([test_criterion_1_oracle_equivalence, test_criterion_2_sufficient_order,
                              test_criterion_3_semicontinuity, test_criterion_4_jump_bound,
                              test_criterion_5_generic_and_slope, test_criterion_6_local_engine,
                              test_criterion_7_known_values], start=1):
        try:
            test()
        except AssertionError:
            pass
        print(RESULTS.get(n, f"criterion {n} [FAIL] raised before recording"))
