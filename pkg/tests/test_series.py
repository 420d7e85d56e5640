"""Basic hypergeometric series evaluators."""

import random
from fractions import Fraction as F

import mpmath
import pytest
from hypothesis import given, settings, strategies as st
from mpmath import mp

from qident.errors import DivergenceError, DomainError, PoleError
from qident.qkernel import ApproxScalar, ExactScalar, QBase, qpoch_finite, qpoch_infinite
from qident.series import (
    BalanceClass,
    SeriesSpec,
    derive_balance,
    eval_phi_nonterminating,
    eval_phi_terminating,
    eval_qappell_phi1,
    eval_rfs,
    jackson_22_to_21_check,
    qbinomial_checks,
)

E = ExactScalar

qs = st.fractions(min_value=F(1, 8), max_value=F(7, 8), max_denominator=8)
small = st.fractions(min_value=F(-2), max_value=F(2), max_denominator=6).filter(
    lambda f: f != 0
)


def terminating_phi(upper, lower, q, z, n):
    return SeriesSpec.make(
        [E.coerce(u) for u in upper],
        [E.coerce(b) for b in lower],
        E.coerce(q),
        E.coerce(z),
        terminates_at=n,
    )


class TestTerminating:
    def test_n_zero_is_one(self):
        q = F(1, 2)
        spec = terminating_phi([1, F(1, 3)], [F(1, 5)], q, q, 0)
        assert eval_phi_terminating(spec) == E(1)

    def test_upper_one_collapses(self):
        # (1;q)_k = 0 for k >= 1: only the k = 0 term survives
        q = F(1, 2)
        spec = terminating_phi([E(q) ** -4, 1, F(1, 3), F(1, 7)], [F(1, 5), F(2, 7), F(3, 5)], q, q, 4)
        assert eval_phi_terminating(spec) == E(1)

    @given(qs, small, st.integers(0, 6))
    @settings(max_examples=40)
    def test_terminating_qbinomial_closed_form(self, q, z, n):
        # 1phi0(q^-n; -; q, z) = (z q^-n; q)_n
        qe, ze = E(q), E(z)
        spec = terminating_phi([qe**-n], [], qe, ze, n)
        assert eval_phi_terminating(spec) == qpoch_finite(ze * qe**-n, qe, n)

    def test_pole_error_names_index(self):
        q = E(F(1, 2))
        # lower parameter q^-2 produces a zero factor at index 3
        spec = terminating_phi([q**-5, F(1, 3), F(1, 7), F(2, 3)], [q**-2, F(1, 5), F(3, 7)], q, q, 5)
        with pytest.raises(PoleError) as err:
            eval_phi_terminating(spec)
        assert err.value.index == 3

    def test_termination_validation(self):
        q = E(F(1, 2))
        with pytest.raises(DomainError):
            eval_phi_terminating(terminating_phi([F(1, 3)], [F(1, 5)], q, q, 2))

    @given(qs, st.integers(0, 5), st.randoms(use_true_random=False))
    @settings(max_examples=30)
    def test_parameter_permutation_invariance(self, q, n, rng):
        qe = E(q)
        upper = [qe**-n, E(F(1, 3)), E(F(2, 5)), E(F(3, 7))]
        lower = [E(F(1, 7)), E(F(2, 9)), E(F(5, 3))]
        ref = eval_phi_terminating(terminating_phi(upper, lower, qe, qe, n))
        up2, lo2 = list(upper), list(lower)
        rng.shuffle(up2)
        rng.shuffle(lo2)
        assert eval_phi_terminating(terminating_phi(up2, lo2, qe, qe, n)) == ref


class TestNonterminating:
    def test_z_zero(self):
        spec = SeriesSpec.make([E(F(1, 3))], [E(F(1, 5))], E(F(1, 2)), E(0))
        v, cert = eval_phi_nonterminating(spec, 1e-30, 256)
        assert v.value == 1 and cert.terms_used == 1

    def test_2phi1_against_direct_summation_oracle(self):
        # 500-term direct summation at 512 bits
        a, b, c, q, z = F(1, 3), F(1, 5), F(1, 7), F(1, 2), F(1, 4)
        spec = SeriesSpec.make([E(a), E(b)], [E(c)], E(q), E(z))
        v, cert = eval_phi_nonterminating(spec, 1e-40, 256)
        with mp.workprec(512):
            tot = mpmath.mpf(0)
            for k in range(500):
                term = (
                    _qp_direct(a, q, k) * _qp_direct(b, q, k)
                    / (_qp_direct(q, q, k) * _qp_direct(c, q, k))
                    * mpmath.mpf(z.numerator) ** k / mpmath.mpf(z.denominator) ** k
                )
                tot += term
            assert abs(v.value - tot) < 1e-40
        assert cert.ok

    def test_against_mpmath_qhyper_oracle(self):
        with mp.workprec(280):
            ref = mpmath.qhyper(
                [mpmath.mpf(1) / 3, mpmath.mpf(1) / 5],
                [mpmath.mpf(1) / 7],
                mpmath.mpf(1) / 2,
                mpmath.mpf(1) / 4,
            )
            spec = SeriesSpec.make(
                [E(F(1, 3)), E(F(1, 5))], [E(F(1, 7))], E(F(1, 2)), E(F(1, 4))
            )
            v, _ = eval_phi_nonterminating(spec, 1e-40, 256)
            assert abs(v.value - ref) < 1e-38

    def test_divergence_guard(self):
        spec = SeriesSpec.make([E(F(1, 3)), E(F(1, 5))], [E(F(1, 7))], E(F(1, 2)), E(F(3, 2)))
        with pytest.raises(DivergenceError):
            eval_phi_nonterminating(spec, 1e-20, 128)

    @given(qs, st.integers(0, 6))
    @settings(max_examples=25, deadline=None)
    def test_terminating_matches_nonterminating(self, q, n):
        qe = E(q)
        upper = [qe**-n, E(F(1, 3)), E(F(2, 5))]
        lower = [E(F(1, 7)), E(F(2, 9))]
        spec = terminating_phi(upper, lower, qe, qe, n)
        exact = eval_phi_terminating(spec)
        approx, _ = eval_phi_nonterminating(spec, 1e-35, 256)
        with mp.workprec(300):
            assert abs(approx.value - exact.to_approx(300).value) < 1e-33

    def test_tail_bounds_hold_on_random_sample(self):
        # randomized spot check of the certification contract
        rng = random.Random(20240817)
        for _ in range(300):
            q = F(rng.randint(1, 6), rng.randint(7, 12))
            a = F(rng.randint(1, 8), rng.randint(9, 16))
            b = F(rng.randint(1, 8), rng.randint(9, 16))
            c = F(rng.randint(1, 8), rng.randint(9, 16))
            z = F(rng.randint(1, 8), 16)
            spec = SeriesSpec.make([E(a), E(b)], [E(c)], E(q), E(z))
            v, cert = eval_phi_nonterminating(spec, 1e-30, 192)
            assert cert.tail_bound <= cert.target_eps
            with mp.workprec(480):
                ref, _ = eval_phi_nonterminating(spec, 1e-60, 448)
                assert abs(v.value - ref.value) <= 1e-29 * max(1.0, float(abs(ref.value)))


class TestJackson:
    def test_generic_point(self):
        rep = jackson_22_to_21_check(
            E(F(1, 3)), E(F(1, 4)), E(F(1, 5)), E(F(1, 6)), E(F(1, 2)), 1e-35, 256
        )
        assert rep.passed

    def test_b_zero_degenerate_pair(self):
        rep = jackson_22_to_21_check(
            E(F(1, 3)), E(0), E(F(1, 5)), E(F(1, 6)), E(F(1, 2)), 1e-35, 256
        )
        assert rep.passed

    def test_z_zero(self):
        rep = jackson_22_to_21_check(
            E(F(1, 3)), E(F(1, 4)), E(F(1, 5)), E(0), E(F(1, 2)), 1e-35, 256
        )
        assert rep.passed


class TestQBinomial:
    def test_terminating_k0(self):
        rep = qbinomial_checks("terminating", {"u": F(1, 2), "t": F(1, 3), "q": F(1, 5), "k": 0})
        assert rep.passed

    def test_terminating_example(self):
        rep = qbinomial_checks("terminating", {"u": F(1, 2), "t": F(1, 3), "q": F(1, 5), "k": 4})
        assert rep.passed and rep.mode == "exact"

    @given(small, small, qs, st.integers(0, 12))
    @settings(max_examples=30)
    def test_terminating_random(self, u, t, q, k):
        rep = qbinomial_checks("terminating", {"u": u, "t": t, "q": q, "k": k})
        assert rep.passed

    def test_nonterminating_against_product(self):
        rep = qbinomial_checks(
            "nonterminating",
            {"a": E(F(1, 2)), "z": E(F(1, 3)), "q": E(F(1, 2))},
            eps=1e-35,
            precision_bits=256,
        )
        assert rep.passed

    def test_nonterminating_a_equals_q(self):
        q = E(F(1, 2))
        rep = qbinomial_checks(
            "nonterminating", {"a": q, "z": E(F(1, 3)), "q": q}, eps=1e-35, precision_bits=256
        )
        assert rep.passed


class TestClassicalRFS:
    def test_z_zero(self):
        assert eval_rfs([F(1, 2)], [F(1, 3)], 0).value == 1

    def test_upper_zero(self):
        assert eval_rfs([0, F(1, 2)], [F(1, 3)], F(1, 2)).value == 1

    def test_2f1_log_oracle(self):
        # 2F1(1,1;2;1/2) = -log(1-z)/z at z = 1/2, i.e. 2 log 2
        v = eval_rfs([1, 1], [2], F(1, 2), eps=1e-14, precision_bits=128)
        with mp.workprec(160):
            assert abs(v.value - 2 * mpmath.log(2)) < 1e-12

    def test_against_mpmath_hyper(self):
        with mp.workprec(160):
            ref = mpmath.hyper([mpmath.mpf(1) / 3, mpmath.mpf(1) / 5], [mpmath.mpf(3) / 7], mpmath.mpf(1) / 4)
            v = eval_rfs([F(1, 3), F(1, 5)], [F(3, 7)], F(1, 4), eps=1e-20, precision_bits=128)
            assert abs(v.value - ref) < 1e-18

    def test_pole_rejected(self):
        with pytest.raises(PoleError):
            eval_rfs([F(1, 2)], [-2], F(1, 3))


class TestQAppell:
    def test_origin(self):
        v = eval_qappell_phi1(F(1, 3), F(1, 5), F(1, 7), F(2, 5), 0, 0, F(1, 2))
        assert v.value == 1

    def test_y_zero_row_collapse(self):
        # y = 0 collapses the double sum to 2phi1(a, b; c; q, x)
        a, b, b2, c, x, q = F(1, 3), F(1, 5), F(2, 7), F(2, 5), F(1, 4), F(1, 2)
        v = eval_qappell_phi1(a, b, b2, c, x, 0, q, eps=1e-32, precision_bits=256)
        spec = SeriesSpec.make([E(a), E(b)], [E(c)], E(q), E(x))
        ref, _ = eval_phi_nonterminating(spec, 1e-32, 256)
        with mp.workprec(280):
            assert abs(v.value - ref.value) < 1e-30

    def test_b2_zero_against_explicit_double_sum(self):
        a, b, c, x, y, q = F(1, 3), F(1, 5), F(2, 5), F(1, 4), F(1, 5), F(1, 2)
        v = eval_qappell_phi1(a, b, 0, c, x, y, q, eps=1e-30, precision_bits=256)
        with mp.workprec(400):
            tot = mpmath.mpf(0)
            for m in range(120):
                for n in range(120):
                    tot += (
                        _qp_direct(a, q, m + n) * _qp_direct(b, q, m)
                        / (_qp_direct(q, q, m) * _qp_direct(q, q, n) * _qp_direct(c, q, m + n))
                        * mpmath.mpf(x.numerator) ** m / mpmath.mpf(x.denominator) ** m
                        * mpmath.mpf(y.numerator) ** n / mpmath.mpf(y.denominator) ** n
                    )
            assert abs(v.value - tot) < 1e-28


class TestBalance:
    def test_balanced_one(self):
        q = E(F(1, 2))
        n = 3
        a, b = E(F(1, 3)), E(F(1, 5))
        # Bailey-type balanced series
        spec = terminating_phi(
            [q**-n, -(q ** (1 - n)) / (a * b), a, b],
            [-(a * b), q ** (1 - n) / a, q ** (1 - n) / b],
            q,
            q,
            n,
        )
        assert derive_balance(spec) == BalanceClass("balanced", 1)

    def test_invariance_under_permutation(self):
        q = E(F(1, 2))
        n = 2
        a, c = E(F(1, 9)), E(F(1, 4))
        sa, sc = E(F(1, 3)), E(F(1, 2))
        spec = terminating_phi([q**-n, q**n * a, sc, -sc], [sa * q, -sa * q, c], q, q, n)
        b1 = derive_balance(spec)
        spec2 = terminating_phi([sc, q**-n, -sc, q**n * a], [c, sa * q, -sa * q], q, q, n)
        assert derive_balance(spec2) == b1

    def test_very_well_poised_detection(self):
        q = E(F(1, 2))
        a = E(F(1, 9))
        sa = E(F(1, 3))  # sqrt(a)
        b, c = E(F(1, 5)), E(F(1, 7))
        spec = SeriesSpec.make(
            [a, q * sa, -q * sa, b, c],
            [sa, -sa, q * a / b, q * a / c],
            q,
            q * a / (b * c),
        )
        assert derive_balance(spec).kind == "very_well_poised"


def _qp_direct(x, q, k):
    prod = mpmath.mpf(1)
    xv = mpmath.mpf(x.numerator) / x.denominator
    qv = mpmath.mpf(q.numerator) / q.denominator
    for j in range(k):
        prod *= 1 - xv * qv**j
    return prod
