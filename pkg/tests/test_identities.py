"""Terminating-summation registry: lookup, verify, sweep, elementary identities."""

from fractions import Fraction as F

import pytest

from qident.errors import DomainError, SamplerExhausted, UnknownIdentity
from qident.identities import (
    APPROX_ONLY_IDS,
    EXACT_IDS,
    constraints,
    elementary_identity_check,
    list_ids,
    lookup,
    sweep,
    verify,
)
from qident.qkernel import ExactScalar, I
from qident.series import BalanceClass, derive_balance, eval_phi_terminating

E = ExactScalar


class TestLookup:
    def test_listing_is_stable_and_sorted(self):
        ids = list_ids()
        assert ids == sorted(ids)
        assert len(ids) == 22
        assert len(EXACT_IDS) == 20 and len(APPROX_ONLY_IDS) == 2

    def test_balance_metadata(self):
        assert lookup("T_BAILEY41").balance == BalanceClass("balanced", 1)
        assert lookup("T_NEW_N3").balance == BalanceClass("balanced", 2)
        assert lookup("T_NEW_N7").balance == BalanceClass("balanced", 3)

    def test_unknown_identity(self):
        with pytest.raises(UnknownIdentity):
            lookup("nope")

    def test_declared_balance_matches_derivation(self):
        # re-derive each record's balance class from its own series spec
        cases = {
            "T_ANDREWS_WATSON": ({"q": F(1, 2), "sqa": F(1, 3), "sc": F(1, 5)}, 4),
            "T_GASPER_RAHMAN_WATSON": ({"q": F(1, 2), "b": F(1, 3), "c": F(1, 5)}, 4),
            "T_BAILEY41": ({"q": F(1, 2), "a": F(1, 3), "b": F(1, 5)}, 4),
            "T_ANDREWS_WHIPPLE_E": ({"q": F(1, 2), "c": F(1, 3), "e": F(1, 5)}, 4),
            "T_ANDREWS_WHIPPLE_C": ({"q": F(1, 2), "a": F(1, 3), "b": F(1, 5)}, 4),
            "T_QBAILEY_1": ({"q": F(1, 2), "a": F(1, 3), "b": F(1, 5)}, 4),
            "T_QBAILEY_2": ({"q": F(1, 2), "a": F(1, 3), "b": F(1, 5)}, 4),
            "T_QPFAFF_SAALSCHUTZ": (
                {"q": F(1, 2), "a": F(1, 3), "b": F(1, 5), "c": F(2, 3), "d": F(1, 7)},
                4,
            ),
            "T_GR_EX214": ({"q": F(1, 2), "a": F(1, 3), "b": F(1, 5)}, 4),
            "T_GR_3109": ({"q": F(1, 2), "a": F(1, 3), "b": F(1, 5)}, 4),
            "T_GR_31010": ({"q": F(1, 2), "a": F(1, 3), "b": F(1, 5)}, 4),
            "T_BW_SUM": ({"q": F(1, 2), "a": F(1, 3), "b": F(1, 5)}, 4),
            "T_BW_TRANSFORM": ({"q": F(1, 2), "a": F(1, 3), "b": F(1, 5), "c": F(2, 7)}, 4),
            "T_NEW_N2": ({"q": F(1, 2), "sa": F(1, 3), "sc": F(2, 5)}, 4),
            "T_NEW_N1": ({"q": F(1, 2), "sa": F(1, 3), "sc": F(2, 5)}, 4),
            "T_NEW_N5": ({"q": F(1, 2), "sa": F(1, 3), "sc": F(2, 5)}, 4),
            "T_NEW_N3": ({"q": F(1, 2), "sqa": F(1, 3), "sc": F(2, 5)}, 4),
            "T_NEW_N4": ({"q": F(1, 2), "sa": F(1, 3), "sc": F(2, 5)}, 4),
            "T_NEW_N8": ({"q": F(1, 2), "sa": F(1, 3), "sc": F(2, 5)}, 4),
            "T_NEW_N7": ({"q": F(1, 2), "sa": F(1, 3), "sc": F(2, 5)}, 4),
            "T_NEW_N6": ({"p": F(2, 3), "sc": F(2, 5)}, 4),
            "X_SEARS": (
                {"q": F(1, 2), "a": F(1, 3), "b": F(1, 5), "c": F(2, 3), "d": F(1, 7), "e": F(3, 5)},
                4,
            ),
        }
        assert set(cases) == set(list_ids())
        for ident, (ps, n) in cases.items():
            rec = lookup(ident)
            derived = derive_balance(rec.lhs_spec(ps, n))
            assert derived == rec.balance, ident


class TestVerify:
    def test_all_records_n0_is_one(self):
        import random

        from qident.identities import draw_params

        for ident in list_ids():
            rec = lookup(ident)
            ps = draw_params(rec, random.Random(11), [0])
            mode = "approx" if rec.approx_only else "exact"
            rep = verify(ident, ps, 0, mode=mode)
            assert rep.passed, ident
            assert rep.lhs == "1", ident

    def test_parity_vanishing_is_exact_zero(self):
        ps = {"q": F(1, 2), "sqa": F(1, 3), "sc": F(1, 5)}
        rep = verify("T_ANDREWS_WATSON", ps, 3)
        assert rep.passed and rep.degenerate
        assert rep.lhs == "0" and rep.rhs == "0"

    def test_new_n2_example_point(self):
        rep = verify("T_NEW_N2", {"q": F(1, 2), "sa": F(1, 7), "sc": F(1, 3)}, 4)
        assert rep.passed and rep.mode == "exact" and rep.abs_err == 0.0

    def test_bailey41_cli_example_point(self):
        rep = verify("T_BAILEY41", {"q": F(1, 2), "a": F(1, 3), "b": F(1, 5)}, 4)
        assert rep.passed

    def test_exact_mode_forbidden_for_approx_only(self):
        with pytest.raises(DomainError):
            verify("T_GASPER_RAHMAN_WATSON", {"q": F(1, 2), "b": F(1, 3), "c": F(1, 5)}, 2)

    def test_approx_only_records_pass(self):
        rep = verify(
            "T_GASPER_RAHMAN_WATSON",
            {"q": F(1, 2), "b": F(1, 3), "c": F(1, 5)},
            4,
            mode="approx",
        )
        assert rep.passed and rep.rel_err < 1e-38
        rep = verify(
            "T_ANDREWS_WHIPPLE_E", {"q": F(1, 2), "c": F(1, 3), "e": F(1, 5)}, 5, mode="approx"
        )
        assert rep.passed and rep.rel_err < 1e-38

    def test_grw_odd_n_exact_zero_in_approx_mode(self):
        rep = verify(
            "T_GASPER_RAHMAN_WATSON",
            {"q": F(1, 2), "b": F(1, 3), "c": F(1, 5)},
            3,
            mode="approx",
        )
        assert rep.passed and rep.degenerate and rep.lhs == "0"

    def test_constraints_name_predicate(self):
        # a = 1 makes (1 - q^0 a) vanish inside the Bailey sum's RHS
        name = constraints("T_BAILEY41", {"q": F(1, 2), "a": 1, "b": F(1, 5)}, 2)
        assert name is not None


class TestEquivalences:
    def test_grw_reduces_to_bailey41_exactly(self):
        # substitute (b, c) -> (-q^(1-n)/b, a) in the base-q^2 quadratic sum,
        # then read q^2 as the new base: term-for-term it is the Bailey-41 LHS
        from qident.identities import _bailey41_lhs

        a, b = E(F(1, 5)), E(F(2, 3))
        qr = E(F(1, 2))  # square root of the target base, Q = 1/4
        Q = qr * qr
        for n in range(0, 7):
            grw = eval_phi_terminating(_spec_subst_grw(qr, a, b, n))
            bail41 = eval_phi_terminating(_bailey41_lhs({"q": Q.re, "a": a.re, "b": b.re}, n))
            assert grw == bail41

    def test_sears_connects_n1_to_n2(self):
        # the 3-parameter substitution turning the q-shifted-root sum into the
        # plain-root sum: lhs(N1) = prefactor * lhs(N2)
        from qident.identities import _n1_lhs, _n2_lhs
        from qident.qkernel import qpoch_list

        q, sa, sc = E(F(1, 2)), E(F(1, 3)), E(F(2, 5))
        a = sa * sa
        for n in range(0, 7):
            n1 = eval_phi_terminating(_n1_lhs({"q": q.re, "sa": sa.re, "sc": sc.re}, n))
            n2 = eval_phi_terminating(_n2_lhs({"q": q.re, "sa": sa.re, "sc": sc.re}, n))
            pref = (
                qpoch_list([q ** (1 - n) / sa, -(q ** (1 - n)) / sa], q, n)
                / qpoch_list([q * sa, -q * sa], q, n)
                * (q**n * a) ** n
            )
            assert n1 == pref * n2

    def test_sears_record_on_connecting_substitution(self):
        # the substitution that carries the q-shifted-root sum onto the
        # plain-root sum: (a,b,c,d,e) = (q^n sa^2, q sc, -q sc, q sc^2, q sa)
        q, sa, sc = F(1, 2), F(1, 3), F(2, 5)
        for n in range(0, 6):
            rep = verify(
                "X_SEARS",
                {
                    "q": q,
                    "a": sa**2 * q**n,
                    "b": q * sc,
                    "c": -(q * sc),
                    "d": q * sc**2,
                    "e": q * sa,
                },
                n,
            )
            assert rep.passed

    def test_andrews_whipple_e_and_c_rhs_agree(self):
        from qident.identities import _aw_c_rhs, _aw_e_rhs
        from qident.reporting import compare_approx

        ps = {"q": F(1, 2), "a": F(1, 3), "b": F(1, 5)}
        for n in range(0, 9):
            rhs_c = _aw_c_rhs(ps, n)
            rhs_e = _aw_e_rhs({"q": ps["q"], "c": ps["a"], "e": ps["b"]}, n)
            passed, _, _ = compare_approx(rhs_c.to_approx(256), rhs_e, 1e-38)
            assert passed, n

    def test_n6_specializes_n7(self):
        # a -> -q^(1-2n) in the 3-balanced sum, i.e. sa = i p^(1-2n), q = p^2
        from qident.identities import _n6_lhs, _n6_rhs

        p, sc = E(F(2, 3)), E(F(2, 5))
        q = p * p
        for n in range(0, 7):
            sa = I * p ** (1 - 2 * n)
            lhs7 = eval_phi_terminating(_spec_n7_gaussian(q, sa, sc, n))
            lhs6 = eval_phi_terminating(_n6_lhs({"p": p.re, "sc": sc.re}, n))
            assert lhs7 == lhs6
            assert lhs6 == _n6_rhs({"p": p.re, "sc": sc.re}, n)


class TestSweep:
    def test_qbailey1_sweep_all_pass(self):
        reports = sweep("T_QBAILEY_1", trials=25, seed=7, n_range=range(0, 9))
        assert len(reports) == 225
        assert all(r.passed for r in reports)
        nondegenerate = [r for r in reports if not r.degenerate]
        assert all(r.abs_err == 0.0 for r in nondegenerate)

    def test_determinism(self):
        r1 = sweep("T_NEW_N2", trials=3, seed=42, n_range=range(0, 5))
        r2 = sweep("T_NEW_N2", trials=3, seed=42, n_range=range(0, 5))
        assert [vars(a) for a in r1] == [vars(b) for b in r2]

    def test_new_n7_sweep_odd_branch(self):
        reports = sweep("T_NEW_N7", trials=5, seed=3, n_range=range(0, 9))
        assert all(r.passed for r in reports)
        assert any(r.n % 2 == 1 and not r.degenerate for r in reports)

    def test_trials_must_be_positive(self):
        with pytest.raises(DomainError):
            sweep("T_BAILEY41", trials=0, seed=1, n_range=[1])


class TestElementary:
    def test_elid_example(self):
        rep = elementary_identity_check("ELID", {"q": F(1, 2), "a": F(1, 3), "n": 2, "k": 1})
        assert rep.passed and rep.mode == "exact"

    def test_elid2_c_zero(self):
        rep = elementary_identity_check("ELID2", {"c": 0, "q": F(1, 2), "k": 3})
        assert rep.passed and rep.lhs == "1"

    def test_elid2_example(self):
        rep = elementary_identity_check("ELID2", {"c": F(1, 4), "q": F(1, 2), "k": 3})
        assert rep.passed

    def test_elid_random(self):
        import random

        rng = random.Random(9)
        for _ in range(20):
            q = F(rng.randint(1, 5), rng.randint(6, 9))
            a = F(rng.randint(1, 5), rng.randint(6, 9))
            n, k = rng.randint(0, 6), rng.randint(0, 6)
            rep = elementary_identity_check("ELID", {"q": q, "a": a, "n": n, "k": k})
            assert rep.passed


# -- helpers ----------------------------------------------------------------

def _spec_subst_grw(qr, a, b, n):
    """The base-q^2 quadratic sum after (b,c) -> (-q^(1-n)/b, a), written in
    the square root qr of the target base."""
    from qident.series import SeriesSpec

    q = qr
    Q = q * q
    return SeriesSpec.make(
        [q ** (-2 * n), a, b, -(q ** (2 - 2 * n)) / (a * b)],
        [q ** (2 - 2 * n) / a, q ** (2 - 2 * n) / b, -(a * b)],
        Q,
        Q,
        terminates_at=n,
    )


def _spec_n7_gaussian(q, sa, sc, n):
    """The 3-balanced sum's series spec with a Gaussian-rational root sa."""
    from qident.series import SeriesSpec

    a, c = sa * sa, sc * sc
    return SeriesSpec.make(
        [q**-n, q ** (n - 1) * a, sc, -sc],
        [q * sa, -q * sa, c],
        q,
        q,
        terminates_at=n,
    )
