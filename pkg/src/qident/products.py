"""Generating-function identities and nonterminating product transformations.

Value checks pair certified series evaluations of both sides; coefficient
checks compare exact truncated power series (which localize failures to a
degree).  Identities whose displays contain q^(1/2) take the square root p as
the parameter, with q = p^2, so every exponent stays integral.
"""

from __future__ import annotations

from fractions import Fraction
import mpmath
from mpmath import mp

from .askey_wilson import AWParams, aw_hermite_degenerate, eval_aw
from .errors import DivergenceError, DomainError, UnknownIdentity
from .powerseries import PowerSeriesTrunc, phi_series_coeffs
from .qkernel import (
    ApproxScalar,
    EXACT_ONE,
    ExactScalar,
    QBase,
    qpoch_finite,
    qpoch_infinite,
    qpoch_list,
)
from .reporting import VerificationReport, compare_approx, value_str
from .series import SeriesSpec, certified_sum, eval_phi_nonterminating, eval_qappell_phi1, eval_rfs

E = ExactScalar.coerce

PRODUCT_IDS = (
    "AWGF",
    "TRIPLE_32PF",
    "QUAD_COR13",
    "WD_APPELL",
    "SCHLOSSER_T4",
    "SRIV_JAIN",
    "JACKSON_CLAUSEN",
    "NASSRALLAH_1",
    "NASSRALLAH_2",
    "THM21",
    "TRIVIAL_21_32",
    "SRIVASTAVA_313",
    "T515",
    "T516",
    "T517",
    "T518",
    "CAYLEY_ORR_A",
    "CAYLEY_ORR_B",
)

CLASSICAL_IDS = ("CLAUSEN", "ORR_A", "ORR_B", "BAILEY_211", "COR_3F2")

DEFAULT_SAFETY_RADIUS = 0.25
DEFAULT_PRECISION_BITS = 256


def _report(identity_id, params, lhs, rhs, eps, n=None, terms=None, note="", mode="approx"):
    passed, abs_err, rel_err = compare_approx(lhs, rhs, eps)
    return VerificationReport(
        identity_id=identity_id,
        params={k: value_str(E(v)) if isinstance(v, (int, Fraction)) else str(v) for k, v in sorted(params.items())},
        n=n,
        mode=mode,
        lhs=str(lhs),
        rhs=str(rhs),
        abs_err=abs_err,
        rel_err=rel_err,
        passed=passed,
        degenerate=False,
        truncation_terms=terms,
        note=note,
    )


def _exact_report(identity_id, params, ok, lhs_desc, rhs_desc, n=None, note=""):
    return VerificationReport(
        identity_id=identity_id,
        params={k: value_str(E(v)) for k, v in sorted(params.items())},
        n=n,
        mode="exact",
        lhs=lhs_desc,
        rhs=rhs_desc,
        abs_err=0.0 if ok else None,
        rel_err=0.0 if ok else None,
        passed=ok,
        degenerate=False,
        note=note,
    )


# --------------------------------------------------------------------------
# generating function (coefficient level, exact)
# --------------------------------------------------------------------------

def awgf_coefficient_check(a, b, c, d, w, q, n_max: int) -> VerificationReport:
    """t^n coefficients of 2phi1(aw,bw;ab;q,t/w) 2phi1(c/w,d/w;cd;q,tw)
    against p_n(x;a,b,c,d|q)/(q,ab,cd;q)_n, exactly, through n_max."""
    a, b, c, d, w, q = (E(v) for v in (a, b, c, d, w, q))
    left = phi_series_coeffs([a * w, b * w], [a * b], q, 1 / w, n_max)
    right = phi_series_coeffs([c / w, d / w], [c * d], q, w, n_max)
    product = left * right
    qb = QBase.of(q)
    ok = True
    bad = None
    for n in range(n_max + 1):
        pn = eval_aw(AWParams.make(a, b, c, d, qb, w, n), "CONV")
        expected = pn / qpoch_list([q, a * b, c * d], q, n)
        if product.coeffs[n] != expected:
            ok = False
            bad = n
            break
    return _exact_report(
        "AWGF",
        {"a": a.re, "b": b.re, "c": c.re, "d": d.re, "w": w.re, "q": q.re},
        ok,
        f"t^0..t^{n_max} product coefficients",
        "p_n/(q,ab,cd;q)_n",
        n=n_max,
        note="" if ok else f"first mismatch at n={bad}",
    )


def awgf_hermite_degeneration_check(w, q, n_max: int) -> VerificationReport:
    """a=b=c=d=0 coefficients reproduce continuous q-Hermite values."""
    w, q = E(w), E(q)
    # with all parameters zero the two 2phi1 series become sum_k (t/w)^k / (q;q)_k
    # and sum_k (tw)^k / (q;q)_k
    qk = [qpoch_finite(q, q, k) for k in range(n_max + 1)]
    lcoef = PowerSeriesTrunc.make([(1 / w) ** k / qk[k] for k in range(n_max + 1)])
    rcoef = PowerSeriesTrunc.make([w**k / qk[k] for k in range(n_max + 1)])
    product = lcoef * rcoef
    ok = True
    for n in range(n_max + 1):
        expected = aw_hermite_degenerate(w, q, n) / qk[n]
        if product.coeffs[n] != expected:
            ok = False
            break
    return _exact_report(
        "AWGF",
        {"w": w.re, "q": q.re},
        ok,
        "zero-parameter generating function coefficients",
        "continuous q-Hermite values",
        n=n_max,
        note="a=b=c=d=0 degeneration",
    )


# --------------------------------------------------------------------------
# triple and quadruple sums (table-based, certified per index)
# --------------------------------------------------------------------------

class _PochTable:
    """(x;q)_m values grown on demand, in raw mpmath arithmetic."""

    def __init__(self, x, q):
        self.x = x
        self.q = q
        self.vals = [mpmath.mpc(1)]

    def __getitem__(self, m: int):
        while len(self.vals) <= m:
            k = len(self.vals) - 1
            self.vals.append(self.vals[-1] * (1 - self.x * self.q**k))
        return self.vals[m]


def _triple_sum_engine(u, t, w, a, b, c, d, q, eps, precision_bits, coupled: bool):
    """sum over n,k,l of the shifted-parameter Askey-Wilson triple sum.

    coupled=False: weight t^n u^(k+l) (the generating-function extension).
    coupled=True:  weight t^(n+k+l)  (the closed-form quadruple sum; u ignored).

    The convolution form of p_n(x; q^k a, b, q^l c, d | q) makes the k- and
    l-sums depend only on the split index j, so after exact Pochhammer index
    splitting the triple sum is
        sum_n t^n sum_j w^(n-2j) (bw;q)_j/(q;q)_j KA(j)
                                  (d/w;q)_(n-j)/(q;q)_(n-j) KC(n-j)
    with the one-dimensional certified sums
        KA(j) = sum_k (u/a)^k (a/w;q)_k (aw;q)_(k+j) / ((q;q)_k (ab;q)_(k+j))
        KC(m) = sum_l (u/c)^l (cw;q)_l (c/w;q)_(l+m) / ((q;q)_l (cd;q)_(l+m)).
    This is a finite/absolutely-convergent reordering of the displayed sum,
    not a different identity.
    """
    with mp.workprec(precision_bits + 20):
        pq = _PochTable(q, q)
        pab = _PochTable(a * b, q)
        pcd = _PochTable(c * d, q)
        paw = _PochTable(a * w, q)
        painv = _PochTable(a / w, q)
        pbw = _PochTable(b * w, q)
        pcw = _PochTable(c * w, q)
        pcinv = _PochTable(c / w, q)
        pdinv = _PochTable(d / w, q)

        u_k = t if coupled else u
        u_l = t if coupled else u
        cap_k = (1.0 + float(abs(u_k / a))) / 2.0
        cap_l = (1.0 + float(abs(u_l / c))) / 2.0
        wmax = max(float(abs(w)), float(abs(1 / w)))
        cap_n = (1.0 + float(abs(t)) * wmax) / 2.0
        if not (cap_k < 1 and cap_l < 1 and cap_n < 1):
            raise DivergenceError("outside the stated convergence region")
        inner_eps = eps / 1e6

        ka_cache: dict[int, mpmath.mpc] = {}
        kc_cache: dict[int, mpmath.mpc] = {}
        tails = 0.0

        def KA(j):
            nonlocal tails
            if j not in ka_cache:
                ratio_k = u_k / a

                def term(kk):
                    return ratio_k**kk * painv[kk] * paw[kk + j] / (pq[kk] * pab[kk + j])

                val, cert = certified_sum(term, inner_eps, cap_k, precision_bits, absolute=True)
                tails += cert.tail_bound
                ka_cache[j] = val
            return ka_cache[j]

        def KC(m):
            nonlocal tails
            if m not in kc_cache:
                ratio_l = u_l / c

                def term(ll):
                    return ratio_l**ll * pcw[ll] * pcinv[ll + m] / (pq[ll] * pcd[ll + m])

                val, cert = certified_sum(term, inner_eps, cap_l, precision_bits, absolute=True)
                tails += cert.tail_bound
                kc_cache[m] = val
            return kc_cache[m]

        def term_n(n):
            acc = mpmath.mpc(0)
            for j in range(n + 1):
                acc += (
                    w ** (n - 2 * j)
                    * pbw[j]
                    / pq[j]
                    * KA(j)
                    * pdinv[n - j]
                    / pq[n - j]
                    * KC(n - j)
                )
            return t**n * acc

        total, cert = certified_sum(term_n, eps / 2, cap_n, precision_bits)
        return mpmath.mpc(total), tails + cert.tail_bound, cert.terms_used


def triple_sum_32pf(
    u, w, t, a, b, c, d, q, eps: float = 1e-30, precision_bits: int = DEFAULT_PRECISION_BITS
) -> VerificationReport:
    """Product of the two extra-parameter 3phi2 series against the
    prefactored triple sum over shifted-parameter Askey-Wilson values."""
    params = {k: v for k, v in zip("uwtabcdq", (u, w, t, a, b, c, d, q))}
    ue, we, te, ae, be, ce, de, qe = (E(v) for v in (u, w, t, a, b, c, d, q))
    if not (
        ue.abs_upper() < min(ae.abs_upper(), ce.abs_upper())
        and te.abs_upper() < min(we.abs_upper(), (1 / we).abs_upper())
    ):
        raise DivergenceError("hypotheses |u| < min(|a|,|c|), |t| < min(|w|,1/|w|) fail")
    qb = QBase.of(qe)
    lhs1, c1 = eval_phi_nonterminating(
        SeriesSpec.make([ue / te, ae * we, be * we], [ae * be, ue * we], qb, te / we),
        eps / 8,
        precision_bits,
    )
    lhs2, c2 = eval_phi_nonterminating(
        SeriesSpec.make([ue / te, ce / we, de / we], [ce * de, ue / we], qb, te * we),
        eps / 8,
        precision_bits,
    )
    lhs = lhs1 * lhs2

    pb = precision_bits
    with mp.workprec(pb + 20):
        uv, wv, tv, av, bv, cv, dv, qv = (
            x.to_approx(pb + 20).value for x in (ue, we, te, ae, be, ce, de, qe)
        )
        triple, tail, terms = _triple_sum_engine(uv, tv, wv, av, bv, cv, dv, qv, eps / 8, pb, False)
        pref_num1, _ = qpoch_infinite(ue / ae, qb, eps / 32, pb)
        pref_num2, _ = qpoch_infinite(ue / ce, qb, eps / 32, pb)
        pref_den1, _ = qpoch_infinite(ue * we, qb, eps / 32, pb)
        pref_den2, _ = qpoch_infinite(ue / we, qb, eps / 32, pb)
        rhs_v = (
            pref_num1.value
            * pref_num2.value
            / (pref_den1.value * pref_den2.value)
            * triple
        )
        rhs = ApproxScalar(rhs_v, pb)
    return _report(
        "TRIPLE_32PF",
        params,
        lhs,
        rhs,
        eps,
        terms=c1.terms_used + c2.terms_used + terms,
        note="extra-parameter generating function",
    )


def quad_cor13(
    t, w, a, b, c, d, q, eps: float = 1e-30, precision_bits: int = DEFAULT_PRECISION_BITS
) -> VerificationReport:
    """Quadruple sum (convolution-expanded triple sum at u = t) against
    (t w^+-; q)_inf / (t/a, t/c; q)_inf."""
    params = {k: v for k, v in zip("twabcdq", (t, w, a, b, c, d, q))}
    te, we, ae, be, ce, de, qe = (E(v) for v in (t, w, a, b, c, d, q))
    mods = [ae.abs_upper(), ce.abs_upper(), we.abs_upper(), (1 / we).abs_upper()]
    if not te.abs_upper() < min(mods):
        raise DivergenceError("hypothesis |t| < min(|a|,|c|,|w|,1/|w|) fails")
    qb = QBase.of(qe)
    pb = precision_bits
    with mp.workprec(pb + 20):
        wv, tv, av, bv, cv, dv, qv = (
            x.to_approx(pb + 20).value for x in (we, te, ae, be, ce, de, qe)
        )
        quad, tail, terms = _triple_sum_engine(tv, tv, wv, av, bv, cv, dv, qv, eps / 8, pb, True)
        lhs = ApproxScalar(quad, pb)
        n1, _ = qpoch_infinite(te * we, qb, eps / 32, pb)
        n2, _ = qpoch_infinite(te / we, qb, eps / 32, pb)
        d1, _ = qpoch_infinite(te / ae, qb, eps / 32, pb)
        d2, _ = qpoch_infinite(te / ce, qb, eps / 32, pb)
        rhs = n1 * n2 / (d1 * d2)
    return _report(
        "QUAD_COR13",
        params,
        lhs,
        rhs,
        eps,
        terms=terms,
        note="closed-form quadruple summation",
    )


# --------------------------------------------------------------------------
# product transformations: value-level definitions
# --------------------------------------------------------------------------

def _phi(upper, lower, q, z, eps, pb):
    spec = SeriesSpec.make(list(upper), list(lower), q, z)
    v, cert = eval_phi_nonterminating(spec, eps, pb)
    return v, cert.terms_used


def _pair_lhs_product(spec_a, spec_b, eps, pb):
    va, ta = _phi(*spec_a, eps, pb)
    vb, tb = _phi(*spec_b, eps, pb)
    return va * vb, ta + tb


def _value_defs(params, eps, pb):
    """id -> (lhs_value, rhs_value, terms) builders over exact params."""

    def need(*names):
        return [E(params[k]) for k in names]

    defs = {}

    def schlosser_t4():
        q, a, b, z = need("q", "a", "b", "z")
        Q = q * q
        lhs, t1 = _pair_lhs_product(
            ([a, q / a], [-q], q, z), ([b, q / b], [-q], q, -z), eps / 8, pb
        )
        r1, t2 = _phi(
            [a * b, Q / (a * b), q * a / b, q * b / a], [-Q, q, -q], Q, z * z, eps / 8, pb
        )
        r2, t3 = _phi(
            [q * a * b, q * Q / (a * b), Q * a / b, Q * b / a],
            [-Q, q**3, -(q**3)],
            Q,
            z * z,
            eps / 8,
            pb,
        )
        pref = ((b - a) * (1 - q / (a * b)) * z / (1 - Q)).to_approx(pb)
        rhs = r1 + pref * r2
        return lhs, rhs, t1 + t2 + t3

    defs["SCHLOSSER_T4"] = schlosser_t4

    def sriv_jain():
        q, a, b, z = need("q", "a", "b", "z")
        Q = q * q
        lhs, t1 = _pair_lhs_product(
            ([a, -a], [a * a], q, z), ([b, -b], [b * b], q, -z), eps / 8, pb
        )
        rhs, t2 = _phi(
            [a * b, -a * b, q * a * b, -q * a * b],
            [q * a * a, q * b * b, a * a * b * b],
            Q,
            z * z,
            eps / 8,
            pb,
        )
        return lhs, rhs, t1 + t2

    defs["SRIV_JAIN"] = sriv_jain

    def jackson_clausen():
        p, a, b, z = need("p", "a", "b", "z")
        q = p * p
        Q = q * q
        lhs, t1 = _pair_lhs_product(
            ([a * a, b * b], [q * a * a * b * b], Q, z),
            ([a * a, b * b], [q * a * a * b * b], Q, q * z),
            eps / 8,
            pb,
        )
        rhs, t2 = _phi(
            [a * a, b * b, a * b, -a * b],
            [a * a * b * b, p * a * b, -p * a * b],
            q,
            z,
            eps / 8,
            pb,
        )
        return lhs, rhs, t1 + t2

    defs["JACKSON_CLAUSEN"] = jackson_clausen

    def nassrallah_1():
        p, a, b, z = need("p", "a", "b", "z")
        q = p * p
        Q = q * q
        lhs, t1 = _pair_lhs_product(
            ([a * a, b * b], [a * a * b * b / q], Q, z),
            ([a * a, b * b], [q * a * a * b * b], Q, q * z),
            eps / 8,
            pb,
        )
        rhs, t2 = _phi(
            [a * a, b * b, a * b, -a * b],
            [a * a * b * b / q, p * a * b, -p * a * b],
            q,
            z,
            eps / 8,
            pb,
        )
        return lhs, rhs, t1 + t2

    defs["NASSRALLAH_1"] = nassrallah_1

    def nassrallah_2():
        p, a, b, z = need("p", "a", "b", "z")
        q = p * p
        Q = q * q
        lhs, t1 = _pair_lhs_product(
            ([q * a * a, q * b * b], [q * a * a * b * b], Q, z),
            ([a * a / q, q * b * b], [q * a * a * b * b], Q, q * z),
            eps / 8,
            pb,
        )
        rhs, t2 = _phi(
            [a * a, q * b * b, a * b, -a * b],
            [a * a * b * b, p * a * b, -p * a * b],
            q,
            z,
            eps / 8,
            pb,
        )
        return lhs, rhs, t1 + t2

    defs["NASSRALLAH_2"] = nassrallah_2

    def thm21():
        p, a, b, z = need("p", "a", "b", "z")
        q = p * p
        Q = q * q
        lhs, t1 = _pair_lhs_product(
            ([q * a * a, q * b * b], [q * a * a * b * b], Q, z),
            ([a * a / q, b * b / q], [a * a * b * b / q], Q, q * z),
            eps / 8,
            pb,
        )
        rhs, t2 = _phi(
            [a * a, b * b, a * b, -a * b],
            [a * a * b * b / q, p * a * b, -p * a * b],
            q,
            z,
            eps / 8,
            pb,
        )
        return lhs, rhs, t1 + t2

    defs["THM21"] = thm21

    def trivial_21_32():
        p, a, z = need("p", "a", "z")
        q = p * p
        Q = q * q
        lhs, t1 = _phi([Q, a * a], [q * a * a], Q, z, eps / 8, pb)
        rhs, t2 = _phi([q, a, -a], [p * a, -p * a], q, z, eps / 8, pb)
        return lhs, rhs, t1 + t2

    defs["TRIVIAL_21_32"] = trivial_21_32

    def srivastava_313():
        q, a, b, t = need("q", "a", "b", "t")
        Q = q * q
        lhs, t1 = _pair_lhs_product(
            ([a, b], [-a * b], q, t), ([a, b], [-a * b], q, -t), eps / 8, pb
        )
        rhs, t2 = _phi(
            [a * b, q * a * b, a * a, b * b],
            [-a * b, -q * a * b, a * a * b * b],
            Q,
            t * t,
            eps / 8,
            pb,
        )
        return lhs, rhs, t1 + t2

    defs["SRIVASTAVA_313"] = srivastava_313

    def t515():
        q, a, c, t = need("q", "a", "c", "t")
        Q = q * q
        lhs, t1 = _pair_lhs_product(
            ([-c, q * c], [q * c * c], q, t), ([a, -a], [a * a], q, -t), eps / 8, pb
        )
        r1, t2 = _phi(
            [a * c, -a * c, q * a * c, -q * a * c],
            [q * a * a, q * c * c, a * a * c * c],
            Q,
            t * t,
            eps / 8,
            pb,
        )
        r2, t3 = _phi(
            [q * a * c, -q * a * c, Q * a * c, -Q * a * c],
            [q * a * a, q**3 * c * c, Q * a * a * c * c],
            Q,
            t * t,
            eps / 8,
            pb,
        )
        rhs = r1 + (c * t / (1 - q * c * c)).to_approx(pb) * r2
        return lhs, rhs, t1 + t2 + t3

    defs["T515"] = t515

    def t516():
        q, a, c, t = need("q", "a", "c", "t")
        Q = q * q
        lhs, t1 = _pair_lhs_product(
            ([-a, -c], [-a * c], q, t), ([-a, -q * c], [-q * a * c], q, -t), eps / 8, pb
        )
        r1, t2 = _phi(
            [a * a, Q * c * c, a * c, q * a * c],
            [-q * a * c, -Q * a * c, a * a * c * c],
            Q,
            t * t,
            eps / 8,
            pb,
        )
        r2, t3 = _phi(
            [Q * a * a, Q * c * c, q * a * c, Q * a * c],
            [-Q * a * c, -(q**3) * a * c, Q * a * a * c * c],
            Q,
            t * t,
            eps / 8,
            pb,
        )
        rhs = r1 + (c * t * (1 - a * a) / ((1 + a * c) * (1 + q * a * c))).to_approx(pb) * r2
        return lhs, rhs, t1 + t2 + t3

    defs["T516"] = t516

    def t517():
        q, a, c, t = need("q", "a", "c", "t")
        Q = q * q
        lhs, t1 = _pair_lhs_product(
            ([-c, Q * c], [Q * c * c], q, t), ([a, -a], [a * a], q, -t), eps / 8, pb
        )
        r1, t2 = _phi(
            [q * a * c, -q * a * c, Q * a * c, -Q * a * c],
            [q * a * a, q**3 * c * c, Q * a * a * c * c],
            Q,
            t * t,
            eps / 8,
            pb,
        )
        r2, t3 = _phi(
            [q**3 * a * a * c * c, a * c, -a * c, q * a * c, -q * a * c],
            [q * a * a, q * c * c, q * a * a * c * c, Q * a * a * c * c],
            Q,
            t * t,
            eps / 8,
            pb,
        )
        r3, t4 = _phi(
            [q**3, a * c, -a * c, q * a * c, -q * a * c],
            [q, a * a / q, q**3 * c * c, Q * a * a * c * c],
            Q,
            t * t,
            eps / 8,
            pb,
        )
        f1 = (c * t * (1 + q) / (1 - Q * c * c)).to_approx(pb)
        f2 = (
            (1 - q * c * c)
            * (1 - q * a * a * c * c)
            / ((1 - Q * c * c) * (1 - a * a * c * c))
        ).to_approx(pb)
        f3 = (
            q
            * c
            * c
            * (1 - q)
            * (1 - a * a / q)
            / ((1 - Q * c * c) * (1 - a * a * c * c))
        ).to_approx(pb)
        rhs = f1 * r1 + f2 * r2 + f3 * r3
        return lhs, rhs, t1 + t2 + t3 + t4

    defs["T517"] = t517

    def t518():
        q, a, c, t = need("q", "a", "c", "t")
        Q = q * q
        lhs, t1 = _pair_lhs_product(
            ([-a, -c], [-a * c], q, t), ([-a, -Q * c], [-Q * a * c], q, -t), eps / 8, pb
        )
        r1, t2 = _phi(
            [Q * a * a, q**4 * c * c, q * a * c, Q * a * c],
            [-(q**3) * a * c, -(q**4) * a * c, Q * a * a * c * c],
            Q,
            t * t,
            eps / 8,
            pb,
        )
        r2, t3 = _phi(
            [a * a, Q * c * c, q**3 * c * c, a * c, q * a * c, q**3 * a * a * c * c],
            [q * c * c, -Q * a * c, -(q**3) * a * c, q * a * a * c * c, Q * a * a * c * c],
            Q,
            t * t,
            eps / 8,
            pb,
        )
        r3, t4 = _phi(
            [q**3, a * a, q * a * a, Q * c * c, a * c, q * a * c],
            [q, a * a / q, -Q * a * c, -(q**3) * a * c, Q * a * a * c * c],
            Q,
            t * t,
            eps / 8,
            pb,
        )
        f1 = (
            c * t * (1 + q) * (1 - a * a) / ((1 + a * c) * (1 + Q * a * c))
        ).to_approx(pb)
        f2 = (
            (1 - q * c * c)
            * (1 - q * a * a * c * c)
            / ((1 - Q * c * c) * (1 - a * a * c * c))
        ).to_approx(pb)
        f3 = (
            q
            * c
            * c
            * (1 - q)
            * (1 - a * a / q)
            / ((1 - Q * c * c) * (1 - a * a * c * c))
        ).to_approx(pb)
        rhs = f1 * r1 + f2 * r2 + f3 * r3
        return lhs, rhs, t1 + t2 + t3 + t4

    defs["T518"] = t518

    def wd_appell():
        q, u, t, a, b, d = need("q", "u", "t", "a", "b", "d")
        qb = QBase.of(q)
        lhs, t1 = _phi(
            [u / t, a * d, b * d], [a * b, d * u], q, t / d, eps / 8, pb
        )
        pref_n, _ = qpoch_infinite(u / a, qb, eps / 32, pb)
        pref_d, _ = qpoch_infinite(d * u, qb, eps / 32, pb)
        appell = eval_qappell_phi1(
            a * d, b * d, a / d, a * b, t / d, u / a, q, eps / 8, pb
        )
        rhs = pref_n / pref_d * appell
        return lhs, rhs, t1

    defs["WD_APPELL"] = wd_appell

    def awgf_value():
        q, a, b, c, d, w, t = need("q", "a", "b", "c", "d", "w", "t")
        qb = QBase.of(q)
        rhs, t1 = _pair_lhs_product(
            ([a * w, b * w], [a * b], q, t / w),
            ([c / w, d / w], [c * d], q, t * w),
            eps / 8,
            pb,
        )
        with mp.workprec(pb + 20):
            av, bv, cv, dv, wv, qv, tv = (
                x.to_approx(pb + 20).value for x in (a, b, c, d, w, q, t)
            )
            pq = _PochTable(qv, qv)
            pab = _PochTable(av * bv, qv)
            pcd = _PochTable(cv * dv, qv)
            paw = _PochTable(av * wv, qv)
            pbw = _PochTable(bv * wv, qv)
            pcinv = _PochTable(cv / wv, qv)
            pdinv = _PochTable(dv / wv, qv)

            def p_over(n):
                acc = mpmath.mpc(0)
                for j in range(n + 1):
                    acc += (
                        paw[j]
                        * pbw[j]
                        / (pq[j] * pab[j])
                        * pcinv[n - j]
                        * pdinv[n - j]
                        / (pq[n - j] * pcd[n - j])
                        * wv ** (n - 2 * j)
                    )
                return acc  # = p_n / ((q,ab,cd;q)_n)

            def term_n(n):
                return tv**n * p_over(n)

            wmax = max(float(abs(wv)), float(abs(1 / wv)))
            cap_n = (1.0 + float(abs(tv)) * wmax) / 2.0
            if cap_n >= 1:
                raise DivergenceError("need |t| < min(|w|, 1/|w|)")
            total, cert = certified_sum(term_n, eps / 8, cap_n, pb)
            lhs = ApproxScalar(mpmath.mpc(total), pb)
        return lhs, rhs, t1 + cert.terms_used

    defs["AWGF"] = awgf_value

    return defs


def verify_product(
    identity_id: str,
    params: dict,
    eps: float = 1e-30,
    precision_bits: int = DEFAULT_PRECISION_BITS,
    safety_radius: float = DEFAULT_SAFETY_RADIUS,
) -> VerificationReport:
    """Value check of one product identity at one exact parameter point."""
    if identity_id not in PRODUCT_IDS:
        raise UnknownIdentity(f"no product identity registered under {identity_id!r}")
    if identity_id == "TRIPLE_32PF":
        return triple_sum_32pf(
            params["u"], params["w"], params["t"],
            params["a"], params["b"], params["c"], params["d"], params["q"],
            eps, precision_bits,
        )
    if identity_id == "QUAD_COR13":
        return quad_cor13(
            params["t"], params["w"], params["a"], params["b"], params["c"],
            params["d"], params["q"], eps, precision_bits,
        )
    if identity_id in ("CAYLEY_ORR_A", "CAYLEY_ORR_B"):
        return cayley_orr_value_check(
            identity_id, params, eps=eps, precision_bits=precision_bits,
            safety_radius=safety_radius,
        )

    zname = "z" if "z" in params else "t"
    zval = E(params[zname])
    if zval.abs_upper() > safety_radius:
        raise DomainError(
            f"|{zname}| = {zval.abs_upper():.4g} exceeds the safety radius {safety_radius}"
        )
    defs = _value_defs(params, eps, precision_bits)
    if identity_id not in defs:
        raise UnknownIdentity(f"{identity_id} has no value-check definition")
    lhs, rhs, terms = defs[identity_id]()
    return _report(identity_id, params, lhs, rhs, eps, terms=terms)


# --------------------------------------------------------------------------
# exact coefficient checks in z (or t)
# --------------------------------------------------------------------------

def _coeff_defs(params, order):
    """id -> (lhs_series, rhs_series) exact builders, series in z through
    degree `order`."""

    def need(*names):
        return [E(params[k]) for k in names]

    defs = {}

    def schlosser_t4():
        q, a, b = need("q", "a", "b")
        Q = q * q
        lhs = phi_series_coeffs([a, q / a], [-q], q, EXACT_ONE, order) * phi_series_coeffs(
            [b, q / b], [-q], q, -EXACT_ONE, order
        )
        r1 = phi_series_coeffs(
            [a * b, Q / (a * b), q * a / b, q * b / a], [-Q, q, -q], Q, EXACT_ONE, order
        ).dilate_square()
        r2 = phi_series_coeffs(
            [q * a * b, q * Q / (a * b), Q * a / b, Q * b / a],
            [-Q, q**3, -(q**3)],
            Q,
            EXACT_ONE,
            order,
        ).dilate_square()
        pref = (b - a) * (1 - q / (a * b)) / (1 - Q)
        rhs = r1 + (pref * r2).shift(1)
        return lhs, rhs

    defs["SCHLOSSER_T4"] = schlosser_t4

    def sriv_jain():
        q, a, b = need("q", "a", "b")
        Q = q * q
        lhs = phi_series_coeffs([a, -a], [a * a], q, EXACT_ONE, order) * phi_series_coeffs(
            [b, -b], [b * b], q, -EXACT_ONE, order
        )
        rhs = phi_series_coeffs(
            [a * b, -a * b, q * a * b, -q * a * b],
            [q * a * a, q * b * b, a * a * b * b],
            Q,
            EXACT_ONE,
            order,
        ).dilate_square()
        return lhs, rhs

    defs["SRIV_JAIN"] = sriv_jain

    def jackson_clausen():
        p, a, b = need("p", "a", "b")
        q = p * p
        Q = q * q
        lhs = phi_series_coeffs(
            [a * a, b * b], [q * a * a * b * b], Q, EXACT_ONE, order
        ) * phi_series_coeffs([a * a, b * b], [q * a * a * b * b], Q, q, order)
        rhs = phi_series_coeffs(
            [a * a, b * b, a * b, -a * b],
            [a * a * b * b, p * a * b, -p * a * b],
            q,
            EXACT_ONE,
            order,
        )
        return lhs, rhs

    defs["JACKSON_CLAUSEN"] = jackson_clausen

    def nassrallah_1():
        p, a, b = need("p", "a", "b")
        q = p * p
        Q = q * q
        lhs = phi_series_coeffs(
            [a * a, b * b], [a * a * b * b / q], Q, EXACT_ONE, order
        ) * phi_series_coeffs([a * a, b * b], [q * a * a * b * b], Q, q, order)
        rhs = phi_series_coeffs(
            [a * a, b * b, a * b, -a * b],
            [a * a * b * b / q, p * a * b, -p * a * b],
            q,
            EXACT_ONE,
            order,
        )
        return lhs, rhs

    defs["NASSRALLAH_1"] = nassrallah_1

    def nassrallah_2():
        p, a, b = need("p", "a", "b")
        q = p * p
        Q = q * q
        lhs = phi_series_coeffs(
            [q * a * a, q * b * b], [q * a * a * b * b], Q, EXACT_ONE, order
        ) * phi_series_coeffs([a * a / q, q * b * b], [q * a * a * b * b], Q, q, order)
        rhs = phi_series_coeffs(
            [a * a, q * b * b, a * b, -a * b],
            [a * a * b * b, p * a * b, -p * a * b],
            q,
            EXACT_ONE,
            order,
        )
        return lhs, rhs

    defs["NASSRALLAH_2"] = nassrallah_2

    def thm21():
        p, a, b = need("p", "a", "b")
        q = p * p
        Q = q * q
        lhs = phi_series_coeffs(
            [q * a * a, q * b * b], [q * a * a * b * b], Q, EXACT_ONE, order
        ) * phi_series_coeffs([a * a / q, b * b / q], [a * a * b * b / q], Q, q, order)
        rhs = phi_series_coeffs(
            [a * a, b * b, a * b, -a * b],
            [a * a * b * b / q, p * a * b, -p * a * b],
            q,
            EXACT_ONE,
            order,
        )
        return lhs, rhs

    defs["THM21"] = thm21

    def trivial_21_32():
        p, a = need("p", "a")
        q = p * p
        Q = q * q
        lhs = phi_series_coeffs([Q, a * a], [q * a * a], Q, EXACT_ONE, order)
        rhs = phi_series_coeffs([q, a, -a], [p * a, -p * a], q, EXACT_ONE, order)
        return lhs, rhs

    defs["TRIVIAL_21_32"] = trivial_21_32

    def srivastava_313():
        q, a, b = need("q", "a", "b")
        Q = q * q
        lhs = phi_series_coeffs([a, b], [-a * b], q, EXACT_ONE, order) * phi_series_coeffs(
            [a, b], [-a * b], q, -EXACT_ONE, order
        )
        rhs = phi_series_coeffs(
            [a * b, q * a * b, a * a, b * b],
            [-a * b, -q * a * b, a * a * b * b],
            Q,
            EXACT_ONE,
            order,
        ).dilate_square()
        return lhs, rhs

    defs["SRIVASTAVA_313"] = srivastava_313

    def t515():
        q, a, c = need("q", "a", "c")
        Q = q * q
        lhs = phi_series_coeffs([-c, q * c], [q * c * c], q, EXACT_ONE, order) * phi_series_coeffs(
            [a, -a], [a * a], q, -EXACT_ONE, order
        )
        r1 = phi_series_coeffs(
            [a * c, -a * c, q * a * c, -q * a * c],
            [q * a * a, q * c * c, a * a * c * c],
            Q,
            EXACT_ONE,
            order,
        ).dilate_square()
        r2 = phi_series_coeffs(
            [q * a * c, -q * a * c, Q * a * c, -Q * a * c],
            [q * a * a, q**3 * c * c, Q * a * a * c * c],
            Q,
            EXACT_ONE,
            order,
        ).dilate_square()
        rhs = r1 + (c / (1 - q * c * c) * r2).shift(1)
        return lhs, rhs

    defs["T515"] = t515

    def t516():
        q, a, c = need("q", "a", "c")
        Q = q * q
        lhs = phi_series_coeffs([-a, -c], [-a * c], q, EXACT_ONE, order) * phi_series_coeffs(
            [-a, -q * c], [-q * a * c], q, -EXACT_ONE, order
        )
        r1 = phi_series_coeffs(
            [a * a, Q * c * c, a * c, q * a * c],
            [-q * a * c, -Q * a * c, a * a * c * c],
            Q,
            EXACT_ONE,
            order,
        ).dilate_square()
        r2 = phi_series_coeffs(
            [Q * a * a, Q * c * c, q * a * c, Q * a * c],
            [-Q * a * c, -(q**3) * a * c, Q * a * a * c * c],
            Q,
            EXACT_ONE,
            order,
        ).dilate_square()
        rhs = r1 + (c * (1 - a * a) / ((1 + a * c) * (1 + q * a * c)) * r2).shift(1)
        return lhs, rhs

    defs["T516"] = t516

    def t517():
        q, a, c = need("q", "a", "c")
        Q = q * q
        lhs = phi_series_coeffs([-c, Q * c], [Q * c * c], q, EXACT_ONE, order) * phi_series_coeffs(
            [a, -a], [a * a], q, -EXACT_ONE, order
        )
        r1 = phi_series_coeffs(
            [q * a * c, -q * a * c, Q * a * c, -Q * a * c],
            [q * a * a, q**3 * c * c, Q * a * a * c * c],
            Q,
            EXACT_ONE,
            order,
        ).dilate_square()
        r2 = phi_series_coeffs(
            [q**3 * a * a * c * c, a * c, -a * c, q * a * c, -q * a * c],
            [q * a * a, q * c * c, q * a * a * c * c, Q * a * a * c * c],
            Q,
            EXACT_ONE,
            order,
        ).dilate_square()
        r3 = phi_series_coeffs(
            [q**3, a * c, -a * c, q * a * c, -q * a * c],
            [q, a * a / q, q**3 * c * c, Q * a * a * c * c],
            Q,
            EXACT_ONE,
            order,
        ).dilate_square()
        rhs = (
            (c * (1 + q) / (1 - Q * c * c) * r1).shift(1)
            + (1 - q * c * c) * (1 - q * a * a * c * c) / ((1 - Q * c * c) * (1 - a * a * c * c)) * r2
            + q * c * c * (1 - q) * (1 - a * a / q) / ((1 - Q * c * c) * (1 - a * a * c * c)) * r3
        )
        return lhs, rhs

    defs["T517"] = t517

    def t518():
        q, a, c = need("q", "a", "c")
        Q = q * q
        lhs = phi_series_coeffs([-a, -c], [-a * c], q, EXACT_ONE, order) * phi_series_coeffs(
            [-a, -Q * c], [-Q * a * c], q, -EXACT_ONE, order
        )
        r1 = phi_series_coeffs(
            [Q * a * a, q**4 * c * c, q * a * c, Q * a * c],
            [-(q**3) * a * c, -(q**4) * a * c, Q * a * a * c * c],
            Q,
            EXACT_ONE,
            order,
        ).dilate_square()
        r2 = phi_series_coeffs(
            [a * a, Q * c * c, q**3 * c * c, a * c, q * a * c, q**3 * a * a * c * c],
            [q * c * c, -Q * a * c, -(q**3) * a * c, q * a * a * c * c, Q * a * a * c * c],
            Q,
            EXACT_ONE,
            order,
        ).dilate_square()
        r3 = phi_series_coeffs(
            [q**3, a * a, q * a * a, Q * c * c, a * c, q * a * c],
            [q, a * a / q, -Q * a * c, -(q**3) * a * c, Q * a * a * c * c],
            Q,
            EXACT_ONE,
            order,
        ).dilate_square()
        rhs = (
            (c * (1 + q) * (1 - a * a) / ((1 + a * c) * (1 + Q * a * c)) * r1).shift(1)
            + (1 - q * c * c) * (1 - q * a * a * c * c) / ((1 - Q * c * c) * (1 - a * a * c * c)) * r2
            + q * c * c * (1 - q) * (1 - a * a / q) / ((1 - Q * c * c) * (1 - a * a * c * c)) * r3
        )
        return lhs, rhs

    defs["T518"] = t518

    return defs


COEFF_CHECK_IDS = (
    "SCHLOSSER_T4",
    "SRIV_JAIN",
    "JACKSON_CLAUSEN",
    "NASSRALLAH_1",
    "NASSRALLAH_2",
    "THM21",
    "TRIVIAL_21_32",
    "SRIVASTAVA_313",
    "T515",
    "T516",
    "T517",
    "T518",
)


def product_coefficient_check(
    identity_id: str, params: dict, order: int = 9
) -> VerificationReport:
    """Exact power-series comparison of both sides through z^order."""
    defs = _coeff_defs(params, order)
    if identity_id not in defs:
        raise UnknownIdentity(f"{identity_id} has no exact coefficient check")
    lhs, rhs = defs[identity_id]()
    bad = next(
        (n for n in range(order + 1) if lhs.coeffs[n] != rhs.coeffs[n]), None
    )
    ok = bad is None
    return _exact_report(
        identity_id,
        params,
        ok,
        f"series coefficients z^0..z^{order}",
        "identity right-hand side coefficients",
        n=order,
        note="" if ok else f"first mismatch at degree {bad}",
    )


def schlosser_t4_parity_check(params: dict, order: int = 9) -> VerificationReport:
    """Even part of the product matches the first 4phi3; odd part matches the
    z-prefactored second, term by term."""
    q, a, b = (E(params[k]) for k in ("q", "a", "b"))
    Q = q * q
    lhs = phi_series_coeffs([a, q / a], [-q], q, EXACT_ONE, order) * phi_series_coeffs(
        [b, q / b], [-q], q, -EXACT_ONE, order
    )
    r1 = phi_series_coeffs(
        [a * b, Q / (a * b), q * a / b, q * b / a], [-Q, q, -q], Q, EXACT_ONE, order
    ).dilate_square()
    r2 = (
        (b - a) * (1 - q / (a * b)) / (1 - Q)
        * phi_series_coeffs(
            [q * a * b, q * Q / (a * b), Q * a / b, Q * b / a],
            [-Q, q**3, -(q**3)],
            Q,
            EXACT_ONE,
            order,
        ).dilate_square()
    ).shift(1)
    ok = True
    for n in range(order + 1):
        expected = r1.coeffs[n] if n % 2 == 0 else r2.coeffs[n]
        if lhs.coeffs[n] != expected:
            ok = False
            break
    return _exact_report(
        "SCHLOSSER_T4",
        params,
        ok,
        "even/odd parts of the product",
        "first / z-prefactored second series",
        n=order,
        note="parity structure",
    )


# --------------------------------------------------------------------------
# classical (q -> 1 target) limits
# --------------------------------------------------------------------------

def classical_limit_check(which: str, params: dict, eps: float = 1e-10) -> VerificationReport:
    """The classical hypergeometric product formulas the q-identities extend."""
    a, b, z = Fraction(params["a"]), Fraction(params["b"]), Fraction(params["z"])
    if which not in CLASSICAL_IDS:
        raise UnknownIdentity(f"no classical limit registered under {which!r}")
    if which in ("CLAUSEN", "COR_3F2") and 2 * a + 2 * b <= 0 and (2 * a + 2 * b).denominator == 1:
        raise DomainError("2a + 2b must avoid nonpositive integers")
    half = Fraction(1, 2)
    inner_eps = eps * 1e-3
    if which == "CLAUSEN":
        f = eval_rfs([a, b], [a + b + half], z, inner_eps)
        lhs = f * f
        rhs = eval_rfs([2 * a, 2 * b, a + b], [a + b + half, 2 * a + 2 * b], z, inner_eps)
    elif which == "ORR_A":
        lhs = eval_rfs([a, b], [a + b - half], z, inner_eps) * eval_rfs(
            [a, b], [a + b + half], z, inner_eps
        )
        rhs = eval_rfs([2 * a, 2 * b, a + b], [2 * a + 2 * b - 1, a + b + half], z, inner_eps)
    elif which == "ORR_B":
        lhs = eval_rfs([a, b], [a + b - half], z, inner_eps) * eval_rfs(
            [a, b - 1], [a + b - half], z, inner_eps
        )
        rhs = eval_rfs(
            [2 * a, 2 * b - 1, a + b - 1], [2 * a + 2 * b - 2, a + b - half], z, inner_eps
        )
    elif which == "BAILEY_211":
        lhs = eval_rfs([a], [2 * a], z, inner_eps) * eval_rfs([b], [2 * b], -z, inner_eps)
        rhs = eval_rfs(
            [(a + b) / 2, (a + b + 1) / 2],
            [a + half, b + half, a + b],
            z * z / 4,
            inner_eps,
        )
    else:  # COR_3F2
        lhs = eval_rfs([a, b], [a + b + half], z, inner_eps) * eval_rfs(
            [a + 1, b + 1], [a + b + Fraction(3, 2)], z, inner_eps
        )
        rhs = eval_rfs(
            [2 * a + 1, 2 * b + 1, a + b + 1],
            [2 * a + 2 * b + 1, a + b + Fraction(3, 2)],
            z,
            inner_eps,
        )
    return _report(which, params, lhs, rhs, eps, note="classical limit target")


# --------------------------------------------------------------------------
# Cayley-Orr coefficient lemmas
# --------------------------------------------------------------------------

def cayley_orr_an(which: str, a, b, c, q, order: int) -> list:
    """The auxiliary coefficients a_n of the defining product expansion.

    A: (q^3 c z/(ab); q^2)_inf / (z; q^2)_inf * 2phi1(a/q, b/q; c; q, q^2 c z/(ab))
    B: (q c z/(ab); q^2)_inf / (z; q^2)_inf * 2phi1(a/q, b; c/q; q, c z/(ab))
    expanded exactly in z through z^order (the prefactor ratio expands by the
    nonterminating q-binomial theorem, so everything stays rational).
    """
    a, b, c, q = (E(v) for v in (a, b, c, q))
    Q = q * q
    if which == "A":
        alpha = q**3 * c / (a * b)
        phi = phi_series_coeffs([a / q, b / q], [c], q, Q * c / (a * b), order)
    elif which == "B":
        alpha = q * c / (a * b)
        phi = phi_series_coeffs([a / q, b], [c / q], q, c / (a * b), order)
    else:
        raise UnknownIdentity(f"Cayley-Orr lemma {which!r} is not defined")
    binom = phi_series_coeffs([alpha], [], Q, EXACT_ONE, order)
    return list((binom * phi).coeffs)


def cayley_orr_check(which: str, a, b, c, q, n_max: int = 10) -> VerificationReport:
    """Coefficient-by-coefficient verification of the lemma's product display."""
    ae, be, ce, qe = (E(v) for v in (a, b, c, q))
    Q = qe * qe
    an = cayley_orr_an(which, ae, be, ce, qe, n_max)
    if which == "A":
        lhs = phi_series_coeffs(
            [Q * ce / ae, Q * ce / be], [Q * ce], Q, EXACT_ONE, n_max
        ) * phi_series_coeffs([ae / qe, be / qe], [ce], Q, Q * ce / (ae * be), n_max)
        weights = [
            qpoch_finite(qe * ce, Q, n) / qpoch_finite(Q * ce, Q, n) for n in range(n_max + 1)
        ]
    else:
        lhs = phi_series_coeffs(
            [qe * ce / ae, ce / (qe * be)], [ce], Q, EXACT_ONE, n_max
        ) * phi_series_coeffs([ae, be], [ce], Q, ce / (ae * be), n_max)
        weights = [
            qpoch_finite(ce / qe, Q, n) / qpoch_finite(ce, Q, n) for n in range(n_max + 1)
        ]
    bad = next(
        (n for n in range(n_max + 1) if lhs.coeffs[n] != weights[n] * an[n]), None
    )
    ok = bad is None
    return _exact_report(
        f"CAYLEY_ORR_{which}",
        {"a": ae.re, "b": be.re, "c": ce.re, "q": qe.re},
        ok,
        f"product-of-2phi1 coefficients z^0..z^{n_max}",
        "weighted auxiliary coefficients",
        n=n_max,
        note="" if ok else f"first mismatch at degree {bad}",
    )


def cayley_orr_value_check(
    identity_id: str,
    params: dict,
    eps: float = 1e-30,
    precision_bits: int = DEFAULT_PRECISION_BITS,
    safety_radius: float = DEFAULT_SAFETY_RADIUS,
) -> VerificationReport:
    """The lemma evaluated at a z value: both sides as certified numbers."""
    which = identity_id[-1]
    a, b, c, q, z = (E(params[k]) for k in ("a", "b", "c", "q", "z"))
    if z.abs_upper() > safety_radius:
        raise DomainError(f"|z| exceeds the safety radius {safety_radius}")
    if (q * q * c * z).abs2() >= (a * b).abs2():
        raise DomainError("the lemma needs |q^2 c z| < |ab|")
    Q = q * q
    pb = precision_bits
    if which == "A":
        lhs, terms = _pair_lhs_product(
            ([Q * c / a, Q * c / b], [Q * c], Q, z),
            ([a / q, b / q], [c], Q, Q * c * z / (a * b)),
            eps / 8,
            pb,
        )
        second_arg = Q * c * z / (a * b)
    else:
        lhs, terms = _pair_lhs_product(
            ([q * c / a, c / (q * b)], [c], Q, z),
            ([a, b], [c], Q, c * z / (a * b)),
            eps / 8,
            pb,
        )
        second_arg = c * z / (a * b)
    # a_n z^n decays like max(|z|, |second series argument|)^n
    import math

    r_eff = max(z.abs_upper(), second_arg.abs_upper())
    if r_eff >= 1:
        raise DomainError("the weighted coefficient series does not converge here")
    depth = max(16, int(math.ceil(math.log(eps / 8) / math.log(r_eff + 1e-12))) + 8)
    with mp.workprec(pb + 20):
        an = _cayley_orr_an_numeric(which, a, b, c, q, depth, pb)
        qv, cv, zv = (x.to_approx(pb + 20).value for x in (q, c, z))
        Qv = qv * qv
        if which == "A":
            wnum, wden = _PochTable(qv * cv, Qv), _PochTable(Qv * cv, Qv)
        else:
            wnum, wden = _PochTable(cv / qv, Qv), _PochTable(cv, Qv)
        acc = mpmath.mpc(0)
        zn = mpmath.mpc(1)
        for n in range(depth + 1):
            acc += wnum[n] / wden[n] * an[n] * zn
            zn *= zv
        rhs = ApproxScalar(acc, pb)
    return _report(identity_id, params, lhs, rhs, eps, terms=terms, note="lemma value check")


def _cayley_orr_an_numeric(which, a, b, c, q, order: int, pb: int) -> list:
    """The auxiliary coefficients in floating arithmetic (value checks only;
    the exact route is cayley_orr_an)."""
    av, bv, cv, qv = (x.to_approx(pb + 20).value for x in (E(a), E(b), E(c), E(q)))
    Qv = qv * qv
    if which == "A":
        alpha = qv**3 * cv / (av * bv)
        up = [av / qv, bv / qv]
        low = [cv]
        zfac = Qv * cv / (av * bv)
    else:
        alpha = qv * cv / (av * bv)
        up = [av / qv, bv]
        low = [cv / qv]
        zfac = cv / (av * bv)
    binom = [mpmath.mpc(1)]
    phi = [mpmath.mpc(1)]
    for n in range(order):
        binom.append(binom[-1] * (1 - alpha * Qv**n) / (1 - Qv ** (n + 1)))
        num = (1 - up[0] * qv**n) * (1 - up[1] * qv**n)
        den = (1 - qv ** (n + 1)) * (1 - low[0] * qv**n)
        phi.append(phi[-1] * num / den * zfac)
    return [
        mpmath.fsum(binom[i] * phi[n - i] for i in range(n + 1))
        for n in range(order + 1)
    ]


def cayley_orr_a_closed_form_check(a, b, q, n_max: int = 8) -> VerificationReport:
    """At c = ab/q the auxiliary coefficients collapse to
    (a, b; q)_n / ((q, ab/q; q)_n)."""
    ae, be, qe = E(a), E(b), E(q)
    ce = ae * be / qe
    an = cayley_orr_an("A", ae, be, ce, qe, n_max)
    ok = all(
        an[n]
        == qpoch_list([ae, be], qe, n) / qpoch_list([qe, ae * be / qe], qe, n)
        for n in range(n_max + 1)
    )
    return _exact_report(
        "CAYLEY_ORR_A",
        {"a": ae.re, "b": be.re, "q": qe.re},
        ok,
        "a_n at c = ab/q",
        "(a,b;q)_n / ((q, ab/q;q)_n)",
        n=n_max,
        note="q-Pfaff-Saalschutz collapse",
    )


def thm21_cayley_consistency(p, a, b, n_max: int = 10) -> VerificationReport:
    """THM21's 4phi3 coefficients against the weighted A-lemma coefficients
    at c = ab/q (identifying the lemma's (a, b) with (a^2, b^2))."""
    pe, ae, be = E(p), E(a), E(b)
    q = pe * pe
    A, B = ae * ae, be * be
    Q = q * q
    c = A * B / q
    an = cayley_orr_an("A", A, B, c, q, n_max)
    weighted = [
        qpoch_finite(q * c, Q, n) / qpoch_finite(Q * c, Q, n) * an[n]
        for n in range(n_max + 1)
    ]
    rhs = phi_series_coeffs(
        [A, B, ae * be, -(ae * be)],
        [A * B / q, pe * ae * be, -(pe * ae * be)],
        q,
        EXACT_ONE,
        n_max,
    )
    ok = all(weighted[n] == rhs.coeffs[n] for n in range(n_max + 1))
    return _exact_report(
        "THM21",
        {"p": pe.re, "a": ae.re, "b": be.re},
        ok,
        "weighted Cayley-Orr A coefficients (c = ab/q)",
        "4phi3 coefficients",
        n=n_max,
        note="consistency of the product formula with the coefficient lemma",
    )


def nassrallah2_cayley_consistency(p, a, b, n_max: int = 10) -> VerificationReport:
    """NASSRALLAH_2's 4phi3 coefficients against the weighted B-lemma
    coefficients under (a, b, c) -> (q b^2, a^2/q, q a^2 b^2)."""
    pe, ae, be = E(p), E(a), E(b)
    q = pe * pe
    A, B = ae * ae, be * be
    Q = q * q
    la, lb, lc = q * B, A / q, q * A * B
    an = cayley_orr_an("B", la, lb, lc, q, n_max)
    weighted = [
        qpoch_finite(lc / q, Q, n) / qpoch_finite(lc, Q, n) * an[n]
        for n in range(n_max + 1)
    ]
    rhs = phi_series_coeffs(
        [A, q * B, ae * be, -(ae * be)],
        [A * B, pe * ae * be, -(pe * ae * be)],
        q,
        EXACT_ONE,
        n_max,
    )
    ok = all(weighted[n] == rhs.coeffs[n] for n in range(n_max + 1))
    return _exact_report(
        "NASSRALLAH_2",
        {"p": pe.re, "a": ae.re, "b": be.re},
        ok,
        "weighted Cayley-Orr B coefficients (c = qab)",
        "4phi3 coefficients",
        n=n_max,
        note="consistency of the corrected product formula with the coefficient lemma",
    )
