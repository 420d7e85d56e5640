"""Askey-Wilson evaluation: representations, degenerations, special values."""

import random
from fractions import Fraction as F

import pytest

from qident.askey_wilson import (
    AWParams,
    aw_hermite_degenerate,
    aw_w_equals_d_value,
    eval_aw,
    eval_special_value,
    newquad_product_form,
)
from qident.errors import DomainError, PoleError
from qident.qkernel import ExactScalar, I

E = ExactScalar


def params(a, b, c, d, q, w, n):
    return AWParams.make(E.coerce(a), E.coerce(b), E.coerce(c), E.coerce(d), E.coerce(q), E.coerce(w), n)


def rand_fracs(rng, count, den_max=7):
    out = []
    while len(out) < count:
        f = F(rng.randint(1, 5) * rng.choice([1, -1]), rng.randint(2, den_max))
        if f != 0 and abs(f) < 2:
            out.append(f)
    return out


class TestRepresentations:
    def test_degree_zero(self):
        p = params(F(1, 3), F(1, 5), F(2, 3), F(1, 7), F(1, 2), F(3, 4), 0)
        for rep in ("R1", "R2", "R3", "CONV"):
            assert eval_aw(p, rep) == E(1)

    def test_cross_representation_fixed_point(self):
        p = params(F(1, 3), F(1, 5), F(2, 3), F(1, 7), F(1, 2), F(3, 4), 4)
        vals = [eval_aw(p, rep) for rep in ("R1", "R2", "R3", "CONV")]
        assert vals[0] == vals[1] == vals[2] == vals[3]

    def test_cross_representation_random(self):
        rng = random.Random(77)
        for _ in range(25):
            a, b, c, d, w = rand_fracs(rng, 5)
            q = F(rng.randint(1, 5), rng.randint(6, 9))
            n = rng.randint(0, 6)
            try:
                p = params(a, b, c, d, q, w, n)
                vals = [eval_aw(p, rep) for rep in ("R1", "R2", "R3", "CONV")]
            except (DomainError, PoleError):
                continue
            assert vals[0] == vals[1] == vals[2] == vals[3]

    def test_w_inversion_symmetry(self):
        base = (F(1, 3), F(1, 5), F(2, 3), F(1, 7), F(1, 2))
        for n in range(6):
            p1 = params(*base, F(3, 4), n)
            p2 = params(*base, F(4, 3), n)
            assert eval_aw(p1, "CONV") == eval_aw(p2, "CONV")

    def test_abcd_permutation_symmetry(self):
        import itertools

        rng = random.Random(123)
        for _ in range(4):
            a, b, c, d, w = rand_fracs(rng, 5)
            q = F(1, 2)
            n = rng.randint(1, 5)
            try:
                ref = eval_aw(params(a, b, c, d, q, w, n), "R1")
            except DomainError:
                continue
            for perm in itertools.permutations((a, b, c, d)):
                assert eval_aw(params(*perm, q, w, n), "R1") == ref

    def test_zero_parameter_rejected_in_phi_reps(self):
        p = params(0, F(1, 5), F(2, 3), F(1, 7), F(1, 2), F(3, 4), 3)
        for rep in ("R1", "R2", "R3"):
            with pytest.raises(DomainError):
                eval_aw(p, rep)
        eval_aw(p, "CONV")  # allowed

    def test_w_equals_d_special_value(self):
        a, b, c, d, q = E(F(1, 3)), E(F(1, 5)), E(F(2, 3)), E(F(1, 7)), E(F(1, 2))
        for n in range(7):
            p = AWParams.make(a, b, c, d, q, d, n)
            assert eval_aw(p, "CONV") == aw_w_equals_d_value(a, b, c, d, q, n)

    def test_polynomiality_in_x(self):
        # values at n+2 points of x = (w + 1/w)/2 fit a polynomial of degree
        # exactly n (leading coefficient nonzero, degree-(n+1) coefficient zero)
        a, b, c, d, q = E(F(1, 3)), E(F(1, 5)), E(F(2, 3)), E(F(1, 7)), E(F(1, 2))
        for n in range(1, 6):
            ws = [E(F(k + 2, 2 * k + 5)) for k in range(n + 2)]
            xs = [(w + 1 / w) / 2 for w in ws]
            ys = [eval_aw(AWParams.make(a, b, c, d, q, w, n), "CONV") for w in ws]
            coeffs = _exact_polyfit(xs, ys)
            assert coeffs[n + 1] == E(0)
            assert coeffs[n] != E(0)


class TestHermiteDegeneration:
    def test_n0_n1(self):
        w, q = E(F(3, 4)), E(F(1, 2))
        assert aw_hermite_degenerate(w, q, 0) == E(1)
        assert aw_hermite_degenerate(w, q, 1) == w + 1 / w

    def test_matches_conv_at_zero_params(self):
        w, q = E(F(3, 5)), E(F(2, 5))
        for n in range(7):
            p = AWParams.make(E(0), E(0), E(0), E(0), q, w, n)
            assert eval_aw(p, "CONV") == aw_hermite_degenerate(w, q, n)

    def test_w_inversion(self):
        q = E(F(1, 2))
        for n in range(9):
            assert aw_hermite_degenerate(E(F(3, 4)), q, n) == aw_hermite_degenerate(
                E(F(4, 3)), q, n
            )


class TestSpecialValues:
    def test_all_ids_at_n0(self):
        base = {"q": F(1, 2), "a": F(1, 3), "b": F(2, 5)}
        aw32 = {"q": F(1, 2), "a": F(1, 3), "b": F(1, 5), "c": F(2, 3), "d": F(1, 7)}
        for sv_id in ("AW32", "BAILEY0", "ANDREWS_WHIPPLE0", "NEWQUAD", "ESOTERIC"):
            lhs, rhs = eval_special_value(sv_id, aw32 if sv_id == "AW32" else base, 0)
            assert lhs == rhs == E(1)

    @pytest.mark.parametrize("n", range(11))
    def test_bailey_matches(self, n):
        lhs, rhs = eval_special_value("BAILEY0", {"q": F(1, 2), "a": F(1, 3), "b": F(2, 5)}, n)
        assert lhs == rhs
        if n % 2 == 1:
            assert lhs == E(0)

    @pytest.mark.parametrize("n", range(11))
    def test_andrews_whipple_matches(self, n):
        lhs, rhs = eval_special_value(
            "ANDREWS_WHIPPLE0", {"q": F(1, 2), "a": F(1, 3), "b": F(2, 5)}, n
        )
        assert lhs == rhs

    @pytest.mark.parametrize("n", range(11))
    def test_newquad_matches_both_forms(self, n):
        ps = {"q": F(1, 2), "a": F(1, 3), "b": F(1, 5)}
        lhs, rhs = eval_special_value("NEWQUAD", ps, n)
        assert lhs == rhs
        assert newquad_product_form(ps["a"], ps["b"], ps["q"], n) == rhs

    @pytest.mark.parametrize("n", range(11))
    def test_esoteric_matches(self, n):
        lhs, rhs = eval_special_value("ESOTERIC", {"q": F(1, 2), "a": F(1, 3), "b": F(1, 5)}, n)
        assert lhs == rhs

    def test_newquad_example_point(self):
        lhs, rhs = eval_special_value("NEWQUAD", {"q": F(1, 2), "a": F(1, 3), "b": F(1, 5)}, 4)
        assert lhs == rhs
        assert newquad_product_form(F(1, 3), F(1, 5), F(1, 2), 4) == lhs

    def test_random_points(self):
        rng = random.Random(5)
        for _ in range(6):
            a, b = rand_fracs(rng, 2, den_max=6)
            q = F(rng.randint(1, 4), rng.randint(5, 8))
            for sv_id in ("BAILEY0", "ANDREWS_WHIPPLE0", "NEWQUAD", "ESOTERIC"):
                for n in range(9):
                    try:
                        lhs, rhs = eval_special_value(sv_id, {"q": q, "a": a, "b": b}, n)
                    except (ZeroDivisionError, PoleError):
                        continue  # degenerate collision, resample territory
                    assert lhs == rhs, (sv_id, q, a, b, n)
                    if sv_id == "NEWQUAD":
                        # both displayed forms agree at every random point
                        assert newquad_product_form(a, b, q, n) == rhs

    def test_special_value_n_max_guard(self):
        with pytest.raises(DomainError):
            eval_special_value("BAILEY0", {"q": F(1, 2), "a": F(1, 3), "b": F(2, 5)}, 11)
        lhs, rhs = eval_special_value(
            "BAILEY0", {"q": F(1, 2), "a": F(1, 3), "b": F(2, 5)}, 12, n_max=12
        )
        assert lhs == rhs


def _exact_polyfit(xs, ys):
    """Solve the Vandermonde system exactly (small sizes only)."""
    m = len(xs)
    rows = [[x**j for j in range(m)] + [y] for x, y in zip(xs, ys)]
    # Gaussian elimination over ExactScalar
    for col in range(m):
        piv = next(r for r in range(col, m) if not rows[r][col].is_zero())
        rows[col], rows[piv] = rows[piv], rows[col]
        inv = 1 / rows[col][col]
        rows[col] = [v * inv for v in rows[col]]
        for r in range(m):
            if r != col and not rows[r][col].is_zero():
                f = rows[r][col]
                rows[r] = [v - f * w for v, w in zip(rows[r], rows[col])]
    return [rows[r][m] for r in range(m)]
