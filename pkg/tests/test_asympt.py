import json
import random
from fractions import Fraction

import pytest

from asramify.asympt import (CASE_DIVIDES, CASE_PM, CASE_PRIME, asymptotic_slope, closed_form,
                             envelope_ok, generic_jump, generic_jump_sampled)
from asramify.cover import cover_normalize, jump, pivot_index
from asramify.errors import DomainError, UnramifiedError
from asramify.ffield import ff_make
from asramify.series import BivariateLaurent


def cov(F, terms, d, prec=(40, 40)):
    return cover_normalize(BivariateLaurent(F, terms, prec), d)


def test_basic_example_closed_form(F4):
    c = cov(F4, [(-1, 0, 1)], 1)
    assert generic_jump(c, 3).h_r == 3
    rep = generic_jump(c, 4)
    assert rep.h_r == 3 and rep.case == CASE_DIVIDES
    assert generic_jump_sampled(c, 4, exhaustive=True) == 3
    assert jump(c, rep.witness) == 3


def test_witness_criterion_is_not_sufficient(F4):
    """For a = T^-1, r = 2 the linear condition holds at beta_3 = 1 but h drops to 0."""
    c = cov(F4, [(-1, 0, 1)], 1)
    rep = generic_jump(c, 2)
    assert rep.h_r == 1 and jump(c, rep.witness) == 1
    assert rep.criterion_holds is False


def test_small_r_needs_fallback(F4):
    c = cov(F4, [(-1, 0, 1)], 1)
    with pytest.raises(DomainError):
        generic_jump(c, 1)
    rep = generic_jump(c, 1, fallback="exhaustive")
    assert rep.h_r == 1 and not rep.closed_form
    assert generic_jump(c, 1, fallback="sampled", trials=5).h_r == 1


def test_sampled_examples(F4):
    c = cov(F4, [(-1, 0, 1)], 1)
    for seed in range(3):
        assert generic_jump_sampled(c, 1, trials=3, seed=seed) == 1
    c2 = cov(F4, [(-2, -1, 1)], 2)
    for r in (1, 2, 3):
        assert generic_jump_sampled(c2, r, trials=50, seed=r) <= r * c2.m + c2.n


def test_sampled_is_seeded(F4):
    c = cov(F4, [(-1, 0, 1), (-1, 1, 1)], 1)
    assert generic_jump_sampled(c, 4, trials=7, seed=9) == generic_jump_sampled(c, 4, trials=7, seed=9)


def test_witnesses_attain_h(corpus):
    for c in corpus.values():
        j = pivot_index(c)
        for r in range(max(1, j) + 1, max(1, j) + 4):
            rep = generic_jump(c, r)
            assert jump(c, rep.witness) == rep.h_r


def _random_cover(F, rng, d):
    """Random cover with m + n <= 3 that survives normalization, or None."""
    m = rng.randint(1, 3 - (d == 2))
    n = rng.randint(1, 3 - m) if d == 2 else 0
    terms = [(-m, -n, rng.randrange(1, F.q))]
    for _ in range(rng.randint(0, 2)):
        terms.append((rng.randint(-m, 1), rng.randint(-n, 2), rng.randrange(1, F.q)))
    try:
        return cov(F, terms, d)
    except UnramifiedError:
        return None


@pytest.mark.parametrize("p,e", [(2, 2), (3, 1)])
def test_closed_form_matches_exhaustive_random_covers(p, e):
    F = ff_make(p, e, seed=0)
    rng = random.Random(100 + p)
    done = 0
    while done < 10:
        c = _random_cover(F, rng, rng.choice((1, 2)))
        if c is None:
            continue
        j = pivot_index(c)
        r = max(1, j) + 1
        if r * c.m + c.n > 7 - (p == 3):
            continue
        assert generic_jump(c, r).h_r == generic_jump_sampled(c, r, exhaustive=True)
        done += 1


def test_case_labels(F4):
    assert closed_form(cov(F4, [(-1, 0, 1)], 1), 3)[1] == CASE_PRIME
    assert closed_form(cov(F4, [(-2, 1, 1)], 1), 3) == (5, CASE_PM)


def test_slope_table_basic_example(F4):
    c = cov(F4, [(-1, 0, 1)], 1)
    tab = asymptotic_slope(c, 10)
    assert tab.limit == 1
    for row in tab.rows:
        expect = row.r if row.r % 2 else row.r - 1
        assert row.h_r == expect
        assert row.slope == 1 - (Fraction(1, row.r) if row.r % 2 == 0 else 0)
    tsv = tab.to_tsv().splitlines()
    assert tsv[0] == "r\th_r\tnum\tden" and tsv[4] == "4\t3\t3\t4"
    data = json.loads(tab.to_json())
    assert data["limit"] == 1 and data["rows"][1]["num"] == 1 and data["rows"][1]["den"] == 2


def test_envelope_on_corpus(corpus):
    for c in corpus.values():
        j = pivot_index(c)
        tab = asymptotic_slope(c, 12, small_r="skip")
        assert tab.limit == c.m
        for row in tab.rows:
            assert row.closed_form and envelope_ok(c, row.r, row.h_r, j)
            assert abs(row.slope - c.m) <= Fraction(c.n + j + 1, row.r)


def test_small_r_measured_or_sampled(F4):
    c = cov(F4, [(-1, 2, 1)], 1)
    assert pivot_index(c) == 2
    tab = asymptotic_slope(c, 3, small_r="sampled", trials=40, seed=1)
    assert [row.closed_form for row in tab.rows] == [False, False, True]
    tab2 = asymptotic_slope(c, 3, cap=5)  # exhaustive falls back to sampling above the cap
    assert len(tab2.rows) == 3
