import random

import pytest

from asramify.cover import TANGENT, CurveJet, ThetaMatrix, cover_normalize, iter_jets, jump
from asramify.errors import DomainError, PrecisionError
from asramify.ffield import ff_make
from asramify.series import BivariateLaurent
from asramify.strata import (MultiPoly, clear_strata_polys, compute_F, eval_G, mp_arith,
                             strata_system, stratum_contains, verify_semicontinuity)


def cov(F, terms, d, prec=(30, 30)):
    return cover_normalize(BivariateLaurent(F, terms, prec), d)


def X(F, V, k):
    return MultiPoly.var(F, V, k)


def test_mp_examples(F2, F4):
    s = mp_arith(X(F2, 2, 0) + X(F2, 2, 1), 2, "pow_k")
    assert s == mp_arith(X(F2, 2, 0), X(F2, 2, 0), "mul") + X(F2, 2, 1) * X(F2, 2, 1)
    assert (X(F4, 2, 0) * MultiPoly(F4, 2)).is_zero()
    g = F4.gen.value
    f = mp_arith(X(F4, 2, 1).scale(g), 1, "frobenius_k")
    assert f.terms == {(0, 2): F4.mul(g, g)}


def test_mp_frobenius_equals_power(F9):
    f = X(F9, 3, 0).scale(4) + X(F9, 3, 2) * X(F9, 3, 1) + MultiPoly.constant(F9, 3, 7)
    assert f.frobenius(1) == f ** 3
    assert f.frobenius(2) == f ** 9


def test_mp_mixed_fields(F4, F8):
    with pytest.raises(DomainError):
        X(F4, 1, 0) + X(F8, 1, 0)


def test_F0_is_theta00(corpus):
    for c in corpus.values():
        for r in (1, 2, 3):
            sys_ = strata_system(c, r)
            F0 = sys_.F[0]
            assert F0 == MultiPoly.constant(c.field, F0.nvars, sys_.theta[0, 0])


def test_all_theta_zero_gives_zero(F4):
    c = cov(F4, [(-1, 0, 1)], 1)
    for r in (1, 3):
        rows, cols = c.m + c.n, r * c.m + c.n
        theta = ThetaMatrix(F4, r, c.m, c.n, tuple((0,) * cols for _ in range(rows)))
        assert all(f.is_zero() for f in compute_F(theta, c, r))


def test_F_j_plus_one(corpus):
    """F_{j+1} = theta_{0,j+1} - m theta_{0j} X_1 once r > j+1."""
    checked = 0
    for c in corpus.values():
        F = c.field
        j = min(jj for jj in range(40) if c.theta0(jj))
        for r in range(max(2, j + 2), j + 4):
            sys_ = strata_system(c, r)
            if j + 1 >= sys_.L:
                continue
            V = sys_.F[0].nvars
            expect = MultiPoly.constant(F, V, c.theta0(j + 1)) - X(F, V, 1).scale(
                F.mul(c.m % F.p, c.theta0(j)))
            assert sys_.F[j + 1] == expect
            checked += 1
    assert checked >= 5


def test_eval_G_examples(F4):
    c = cov(F4, [(-1, 0, 1)], 1)
    sys_ = strata_system(c, 1)
    for jet in iter_jets(F4, "transversal", 1, 1):
        assert eval_G(sys_, jet) == {1: 1}
        assert not stratum_contains(sys_, 0, jet)
        assert stratum_contains(sys_, 1, jet)
    sys4 = strata_system(c, 4)
    assert set(sys4.levels()) == {1, 3}
    assert stratum_contains(sys4, sys4.L, CurveJet.tangent(F4, 4, [1, 0, 0, 0]))


def test_eval_G_rejects_bad_jets(F4):
    sys_ = strata_system(cov(F4, [(-1, 0, 1)], 1), 3)
    with pytest.raises(PrecisionError):
        eval_G(sys_, CurveJet.tangent(F4, 3, [1]))
    with pytest.raises(DomainError):
        eval_G(sys_, CurveJet.tangent(F4, 2, [1, 0, 0]))


def test_eval_G_top_matches_jump_sampled(F4):
    c = cov(F4, [(-1, 0, 1), (-1, 1, 1)], 1)
    sys_ = strata_system(c, 2)
    rng = random.Random(0)
    for _ in range(200):
        jet = CurveJet.tangent(F4, 2, [rng.randrange(1, 4), rng.randrange(4)])
        assert sys_.top_level(jet) == jump(c, jet)


@pytest.mark.parametrize("p,e,terms,d,r", [
    (3, 2, [(-2, 0, 1), (-1, 1, 2)], 1, 2),
    (3, 2, [(-1, -1, 1), (0, -1, 3)], 2, 2),
    (2, 3, [(-2, 1, 1), (-1, 0, 3)], 1, 2),
    (5, 1, [(-2, -1, 1), (-1, 0, 2)], 2, 2),
])
def test_oracle_equivalence_sampled_larger_fields(p, e, terms, d, r):
    F = ff_make(p, e, seed=2)
    c = cov(F, terms, d)
    sys_ = strata_system(c, r)
    rng = random.Random(p + e + r)
    _, length = c.family(r)
    for _ in range(2500):
        coeffs = [rng.randrange(1, F.q)] + [rng.randrange(F.q) for _ in range(length - 1)]
        jet = CurveJet(F, TANGENT, r, tuple(coeffs))
        h = jump(c, jet)
        assert sys_.top_level(jet) == h
        pt = sys_.point(jet)
        for cl in clear_strata_polys(sys_, 0):
            assert (cl.poly.evaluate(pt) == 0) == (sys_.eval_G(jet)[cl.l] == 0)


def test_transversal_clearing_is_verbatim(F4):
    c = cov(F4, [(-3, 0, 1), (-1, 1, F4.gen.value)], 1)
    sys_ = strata_system(c, 1)
    for cl in clear_strata_polys(sys_, 0):
        assert cl.N == 0
        expect = MultiPoly(F4, sys_.nvars)
        for nu, i in enumerate(sys_.indices(cl.l)):
            expect = expect + sys_.F[i].frobenius(cl.N_l - nu)
        assert cl.poly == expect


def test_cleared_polys_are_polynomials(corpus):
    for c in corpus.values():
        for r in (1, 2):
            sys_ = strata_system(c, r)
            for cl in clear_strata_polys(sys_, 0):
                assert cl.poly.is_polynomial()
                if cl.N:
                    # N is minimal: one less leaves a negative power of X_0
                    assert cl.poly.min_exponent(0) == 0


def test_cleared_example_needs_the_beta_factor(F4):
    """a = T^-1, r = 2: S_1 vanishes exactly where the jump drops to 0."""
    c = cov(F4, [(-1, 0, 1)], 1)
    sys_ = strata_system(c, 2)
    (cl,) = [x for x in clear_strata_polys(sys_, 0) if x.l == 1]
    for jet in iter_jets(F4, TANGENT, 2, 2):
        assert (cl.poly.evaluate(sys_.point(jet)) == 0) == (jump(c, jet) == 0)


def test_semicontinuity_examples(F4):
    c = cov(F4, [(-1, 0, 1)], 1)
    rep = verify_semicontinuity(c, 1)
    assert rep.ok and rep.stratum_sizes == {0: 0, 1: 4}
    c2 = cov(F4, [(-2, 1, 1), (-1, 0, 1)], 1)
    rep2 = verify_semicontinuity(c2, 2)
    assert rep2.ok and rep2.jets == 3 * 4 ** 3
    assert sum(rep2.jump_counts.values()) == rep2.jets
    sizes = [rep2.stratum_sizes[s] for s in range(rep2.L + 1)]
    assert sizes == sorted(sizes) and sizes[-1] == rep2.jets


def test_semicontinuity_single_s(F4):
    c = cov(F4, [(-1, -1, 1)], 2)
    rep = verify_semicontinuity(c, 3, s=1)
    assert rep.ok and set(rep.stratum_sizes) == {1}


def test_clear_domain(F4):
    sys_ = strata_system(cov(F4, [(-1, 0, 1)], 1), 2)
    with pytest.raises(DomainError):
        clear_strata_polys(sys_, 7)
    with pytest.raises(DomainError):
        sys_.cleared(2)
