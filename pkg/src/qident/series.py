"""Evaluation of basic hypergeometric series.

Terminating series are summed exactly over Gaussian rationals.  Nonterminating
series are summed in approximate mode with an empirical geometric tail
certificate: once the term-ratio stays below a cap for 8 consecutive terms,
the remaining tail is bounded by the geometric series at that cap.  The cap is
(1+|z|)/2 for r = s+1 and 1/2 for r <= s (where the q^binom(k,2) factor makes
the ratio eventually collapse to zero).

Also here: the classical rFs series, the q-Appell Phi1 double series, the two
q-binomial theorems, and the 2phi2 -> 2phi1 transformation check used as a
cross-evaluator oracle.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Sequence

import mpmath
from mpmath import mp

from .errors import DivergenceError, DomainError, ModeMismatch, NoConvergence, PoleError
from .qkernel import (
    ApproxScalar,
    EXACT_ONE,
    ExactScalar,
    QBase,
    Scalar,
    TruncationCert,
    min_precision,
    qpoch_infinite,
    scalar_mode,
)
from .reporting import VerificationReport, compare_approx


@dataclass(frozen=True)
class BalanceClass:
    kind: str  # "balanced" | "well_poised" | "very_well_poised" | "none"
    k: Optional[int] = None

    def __str__(self):
        if self.kind == "balanced":
            return f"balanced({self.k})"
        return self.kind


@dataclass(frozen=True)
class SeriesSpec:
    """An r-phi-s description; termination = n means an upper parameter is q^-n."""

    upper: tuple
    lower: tuple
    base: QBase
    arg: Scalar
    termination: Optional[int] = None

    @staticmethod
    def make(upper: Sequence, lower: Sequence, q, z, terminates_at: Optional[int] = None):
        return SeriesSpec(tuple(upper), tuple(lower), QBase.of(q), z, terminates_at)

    @property
    def r(self) -> int:
        return len(self.upper)

    @property
    def s(self) -> int:
        return len(self.lower)

    def scalars(self):
        return list(self.upper) + list(self.lower) + [self.base.value, self.arg]


def _exact_is_qpow(x, q: ExactScalar, kmax: int) -> Optional[int]:
    """Least k in [0, kmax] with x * q^k = 1, else None (exact)."""
    if not isinstance(x, ExactScalar):
        return None
    v = ExactScalar.coerce(x)
    for k in range(kmax + 1):
        if v == EXACT_ONE:
            return k
        v = v * q
    return None


def validate_termination(spec: SeriesSpec) -> None:
    """Exact specs must really have an upper parameter equal to q^-n."""
    n = spec.termination
    if n is None:
        return
    if n < 0:
        raise DomainError("termination index must be nonnegative")
    q = spec.base.value
    if not isinstance(q, ExactScalar):
        return  # approx mode: caller-declared termination is trusted
    for a in spec.upper:
        if isinstance(a, ExactScalar) and _exact_is_qpow(a, q, n) == n:
            return
    raise DomainError(f"no upper parameter equals q^-{n}; spec does not terminate there")


def derive_balance(spec: SeriesSpec) -> BalanceClass:
    """Re-derive the balance class from the parameters (exact mode)."""
    if spec.r != spec.s + 1:
        return BalanceClass("none")
    q = spec.base.value
    up = EXACT_ONE
    for a in spec.upper:
        up = up * ExactScalar.coerce(a)
    low = EXACT_ONE
    for b in spec.lower:
        low = low * ExactScalar.coerce(b)
    if not up.is_zero():
        ratio = low / up
        probe = ExactScalar.coerce(q)
        for k in range(1, 64):
            if ratio == probe:
                return BalanceClass("balanced", k)
            probe = probe * q
    # well-poised: q a1 = a2 b1 = ... = ar b_{r-1} under some pairing
    qa1 = ExactScalar.coerce(q) * ExactScalar.coerce(spec.upper[0])
    rest = [ExactScalar.coerce(a) for a in spec.upper[1:]]
    lows = [ExactScalar.coerce(b) for b in spec.lower]
    for perm in itertools.permutations(range(len(lows))):
        if all((rest[i] * lows[perm[i]]) == qa1 for i in range(len(rest))):
            a1 = ExactScalar.coerce(spec.upper[0])
            sq = [x for x in rest if (x * x) == (ExactScalar.coerce(q) ** 2) * a1]
            if any((x in rest and (-x) in rest) for x in sq):
                return BalanceClass("very_well_poised")
            return BalanceClass("well_poised")
    return BalanceClass("none")


def eval_phi_terminating(spec: SeriesSpec) -> ExactScalar:
    """Exact finite sum of the n+1 terms of a terminating series."""
    if spec.termination is None:
        raise DomainError("spec does not terminate")
    if scalar_mode(spec.scalars()) != "exact":
        raise ModeMismatch("terminating exact evaluation requires exact scalars")
    validate_termination(spec)
    n = spec.termination
    q = ExactScalar.coerce(spec.base.value)
    z = ExactScalar.coerce(spec.arg)
    upper = [ExactScalar.coerce(a) for a in spec.upper]
    lower = [ExactScalar.coerce(b) for b in spec.lower]
    e = 1 + spec.s - spec.r

    total = EXACT_ONE
    term = EXACT_ONE
    qk = EXACT_ONE  # q^k
    qk1 = q  # q^{k+1}
    for k in range(n):
        # pole detection comes first: a vanishing lower factor at or before
        # the termination index is an error even when an upper factor
        # vanishes at the same index (simultaneous 0/0 is excluded)
        den = EXACT_ONE - qk1
        for b in lower:
            f = EXACT_ONE - b * qk
            if f.is_zero():
                raise PoleError(
                    f"lower parameter {b} produces a zero factor at index {k + 1}",
                    index=k + 1,
                )
            den = den * f
        num = EXACT_ONE
        for a in upper:
            num = num * (EXACT_ONE - a * qk)
        if num.is_zero():
            break  # an upper factor vanished strictly first: series terminated
        term = term * num / den * z
        if e:
            term = term * ((-qk) ** e)
        total = total + term
        qk = qk1
        qk1 = qk1 * q
    return total


def _ratio_cap(spec_r: int, spec_s: int, abs_z: float) -> float:
    if spec_r == spec_s + 1:
        return (1.0 + abs_z) / 2.0
    return 0.5


def certified_sum(
    term_fn: Callable[[int], mpmath.mpc],
    eps: float,
    ratio_cap: float,
    precision_bits: int,
    max_terms: int = 100_000,
    absolute: bool = False,
    window: int = 8,
) -> tuple[mpmath.mpc, TruncationCert]:
    """Sum term_fn(0) + term_fn(1) + ... with a geometric tail certificate.

    Certification: `window` consecutive term ratios at or below `ratio_cap`
    (< 1), after which the tail is bounded by cap/(1-cap) times the largest
    recent |term|.  Stops once that bound is below eps (times max(1,|sum|)
    unless `absolute`).
    """
    if not (0 < ratio_cap < 1):
        raise DivergenceError(f"certification ratio cap {ratio_cap} is not in (0,1)")
    with mp.workprec(precision_bits + 10):
        total = mpmath.mpc(0)
        prev_abs = None
        good = 0
        recent_max = 0.0
        k = 0
        while k < max_terms:
            t = term_fn(k)
            total += t
            ta = float(abs(t))
            if prev_abs is None:
                good = 0
                recent_max = ta
            else:
                ok = (ta <= ratio_cap * prev_abs) or (ta == 0.0 and prev_abs == 0.0)
                if ok:
                    good += 1
                    recent_max = max(recent_max * ratio_cap, ta)
                else:
                    good = 0
                    recent_max = ta
            prev_abs = ta
            if good >= window:
                tail = ratio_cap / (1.0 - ratio_cap) * recent_max
                target = eps if absolute else eps * max(1.0, float(abs(total)))
                if tail <= target:
                    return mpmath.mpc(total), TruncationCert(k + 1, tail, target)
            k += 1
    raise NoConvergence(f"series tail not certified within {max_terms} terms")


def eval_phi_nonterminating(
    spec: SeriesSpec,
    eps: float,
    precision_bits: Optional[int] = None,
) -> tuple[ApproxScalar, TruncationCert]:
    """Certified approximate value of an r-phi-s series."""
    if precision_bits is None:
        precision_bits = min_precision(spec.scalars(), default=256)
    q = ApproxScalar.coerce(spec.base.value, precision_bits).value
    z = ApproxScalar.coerce(spec.arg, precision_bits).value
    upper = [ApproxScalar.coerce(a, precision_bits).value for a in spec.upper]
    lower = [ApproxScalar.coerce(b, precision_bits).value for b in spec.lower]
    e = 1 + spec.s - spec.r
    abs_z = float(abs(z))

    if z == 0:
        return ApproxScalar.coerce(1, precision_bits), TruncationCert(1, 0.0, eps)

    if spec.termination is not None:
        n = spec.termination
        with mp.workprec(precision_bits + 10):
            total = mpmath.mpc(1)
            term = mpmath.mpc(1)
            for k in range(n):
                den = mpmath.mpc(1 - q ** (k + 1))
                for b in lower:
                    f = 1 - b * q**k
                    if f == 0:
                        raise PoleError(
                            f"lower parameter {b} produces a zero factor at index {k + 1}",
                            index=k + 1,
                        )
                    den *= f
                num = mpmath.mpc(1)
                for a in upper:
                    num *= 1 - a * q**k
                if num == 0:
                    break
                term = term * num / den * z * ((-(q**k)) ** e if e else 1)
                total += term
            return ApproxScalar(total, precision_bits), TruncationCert(n + 1, 0.0, eps)

    if spec.r > spec.s + 1:
        raise DivergenceError("r > s+1 does not converge without termination")
    if spec.r == spec.s + 1 and abs_z >= 1:
        raise DivergenceError(f"|z| = {abs_z} >= 1 for an r = s+1 series")

    state = {"term": None, "qk": None}

    def term_fn(k: int) -> mpmath.mpc:
        if k == 0:
            state["term"] = mpmath.mpc(1)
            state["qk"] = mpmath.mpc(1)
            return state["term"]
        qk = state["qk"]
        num = mpmath.mpc(1)
        for a in upper:
            num *= 1 - a * qk
        den = mpmath.mpc(1 - qk * q)
        for b in lower:
            f = 1 - b * qk
            if f == 0:
                raise PoleError(f"lower parameter {b} produces a zero factor", index=k)
            den *= f
        t = state["term"] * num / den * z
        if e:
            t *= (-qk) ** e
        state["term"] = t
        state["qk"] = qk * q
        return t

    cap = _ratio_cap(spec.r, spec.s, abs_z)
    total, cert = certified_sum(term_fn, eps, cap, precision_bits)
    return ApproxScalar(total, precision_bits), cert


def eval_phi(spec: SeriesSpec, eps: float = 0.0, precision_bits: Optional[int] = None):
    """Dispatch: exact when the series spec terminates with exact scalars, else certified."""
    if spec.termination is not None and scalar_mode(spec.scalars()) == "exact":
        return eval_phi_terminating(spec)
    value, _ = eval_phi_nonterminating(spec, eps or 1e-30, precision_bits)
    return value


def jackson_22_to_21_check(
    a, b, c, z, q, eps: float, precision_bits: int = 256
) -> VerificationReport:
    """2phi2(a, c/b; c, az; q, bz) vs (z;q)inf/(az;q)inf * 2phi1(a,b;c;q,z)."""
    qb = QBase.of(q)
    b_zero = isinstance(b, ExactScalar) and b.is_zero() or b == 0
    if b_zero:
        lhs_spec = SeriesSpec.make([a], [c, a * z], qb, c * z)
    else:
        lhs_spec = SeriesSpec.make([a, c / b], [c, a * z], qb, b * z)
    lhs, cert_l = eval_phi_nonterminating(lhs_spec, eps / 4, precision_bits)

    num, _ = qpoch_infinite(z, qb, eps / 8, precision_bits)
    den, _ = qpoch_infinite(a * z, qb, eps / 8, precision_bits)
    phi21 = SeriesSpec.make([a, b], [c], qb, z)
    rhs_phi, cert_r = eval_phi_nonterminating(phi21, eps / 4, precision_bits)
    rhs = num / den * rhs_phi

    passed, abs_err, rel_err = compare_approx(lhs, rhs, eps)
    return VerificationReport(
        identity_id="J22_TO_21",
        params={"a": str(a), "b": str(b), "c": str(c), "z": str(z), "q": str(q)},
        n=None,
        mode="approx",
        lhs=str(lhs),
        rhs=str(rhs),
        abs_err=abs_err,
        rel_err=rel_err,
        passed=passed,
        degenerate=False,
        truncation_terms=cert_l.terms_used + cert_r.terms_used,
    )


def qbinomial_checks(kind: str, params: dict, eps: float = 1e-30, precision_bits: int = 256) -> VerificationReport:
    """The terminating and nonterminating q-binomial theorems.

    terminating: (u/t;q)_k t^k equals the alternating double-product sum
    sum_j (-1)^(k-j) q^binom(k-j,2) [k j]_q u^(k-j) t^j, exactly.
    nonterminating: 1phi0(a;-;q,z) = (az;q)inf/(z;q)inf within eps.
    """
    from .qkernel import qpoch_finite  # local import to keep module tops light

    if kind == "terminating":
        u, t, q, k = params["u"], params["t"], params["q"], params["k"]
        u, t, q = ExactScalar.coerce(u), ExactScalar.coerce(t), ExactScalar.coerce(q)
        lhs = qpoch_finite(u / t, q, k) * t**k
        rhs = ExactScalar(0)
        qq = [qpoch_finite(q, q, j) for j in range(k + 1)]
        for j in range(k + 1):
            kj = k - j
            sign = -1 if kj % 2 else 1
            rhs = rhs + sign * (q ** (kj * (kj - 1) // 2)) * qq[k] / (qq[j] * qq[kj]) * u**kj * t**j
        passed = lhs == rhs
        return VerificationReport(
            identity_id="QBINOMIAL_TERMINATING",
            params={k_: str(v) for k_, v in params.items()},
            n=k,
            mode="exact",
            lhs=str(lhs),
            rhs=str(rhs),
            abs_err=0.0 if passed else None,
            rel_err=0.0 if passed else None,
            passed=passed,
            degenerate=lhs.is_zero() and rhs.is_zero(),
        )
    if kind == "nonterminating":
        a, z, q = params["a"], params["z"], params["q"]
        qb = QBase.of(q)
        spec = SeriesSpec.make([a], [], qb, z)
        lhs, cert = eval_phi_nonterminating(spec, eps / 4, precision_bits)
        num, _ = qpoch_infinite(a * z, qb, eps / 8, precision_bits)
        den, _ = qpoch_infinite(z, qb, eps / 8, precision_bits)
        rhs = num / den
        passed, abs_err, rel_err = compare_approx(lhs, rhs, eps)
        return VerificationReport(
            identity_id="QBINOMIAL_NONTERMINATING",
            params={k_: str(v) for k_, v in params.items()},
            n=None,
            mode="approx",
            lhs=str(lhs),
            rhs=str(rhs),
            abs_err=abs_err,
            rel_err=rel_err,
            passed=passed,
            degenerate=False,
            truncation_terms=cert.terms_used,
        )
    raise DomainError(f"unknown q-binomial check kind: {kind}")


def eval_rfs(
    upper: Sequence,
    lower: Sequence,
    z,
    eps: float = 1e-12,
    precision_bits: int = 128,
) -> ApproxScalar:
    """Classical rFs via rising-factorial term recurrence, geometric tail."""

    def to_mpf(x):
        if isinstance(x, Fraction):
            return mpmath.mpf(x.numerator) / x.denominator
        if isinstance(x, ExactScalar):
            if not x.is_real():
                return ApproxScalar.coerce(x, precision_bits).value
            return mpmath.mpf(x.re.numerator) / x.re.denominator
        if isinstance(x, ApproxScalar):
            return x.value
        return mpmath.mpf(x)

    with mp.workprec(precision_bits + 10):
        ups = [to_mpf(a) for a in upper]
        los = [to_mpf(b) for b in lower]
        zz = to_mpf(z)
        for b in los:
            if b == int(b) and b <= 0:
                raise PoleError(f"lower parameter {b} is a nonpositive integer")
        term_n = None
        for a in ups:
            if a == int(a) and a <= 0:
                term_n = min(term_n, int(-a)) if term_n is not None else int(-a)
        abs_z = float(abs(zz))
        if term_n is None and len(ups) == len(los) + 1 and abs_z >= 1:
            raise DivergenceError(f"|z| = {abs_z} >= 1 for an r = s+1 series")

        if zz == 0:
            return ApproxScalar.coerce(1, precision_bits)
        if term_n is not None:
            total = mpmath.mpc(1)
            term = mpmath.mpc(1)
            for k in range(term_n):
                fac = mpmath.mpc(1)
                for a in ups:
                    fac *= a + k
                for b in los:
                    fac /= b + k
                term = term * fac * zz / (k + 1)
                total += term
            return ApproxScalar(total, precision_bits)

        state = {"term": mpmath.mpc(1)}

        def term_fn(k):
            if k == 0:
                state["term"] = mpmath.mpc(1)
                return state["term"]
            fac = mpmath.mpc(1)
            for a in ups:
                fac *= a + (k - 1)
            for b in los:
                fac /= b + (k - 1)
            state["term"] = state["term"] * fac * zz / k
            return state["term"]

        cap = (1.0 + abs_z) / 2.0 if len(ups) == len(los) + 1 else 0.5
        total, _ = certified_sum(term_fn, eps, cap, precision_bits)
        return ApproxScalar(total, precision_bits)


def eval_qappell_phi1(
    a, b, b2, c, x, y, q, eps: float = 1e-30, precision_bits: int = 256
) -> ApproxScalar:
    """q-Appell Phi1 double series, rectangular truncation, certified per index.

    Phi1(a; b, b2; c; q; x, y)
      = sum_{m,n>=0} (a;q)_{m+n} (b;q)_m (b2;q)_n x^m y^n
                     / ((q;q)_m (q;q)_n (c;q)_{m+n}).
    """
    pb = precision_bits
    qv = ApproxScalar.coerce(q, pb).value
    av = ApproxScalar.coerce(a, pb).value
    bv = ApproxScalar.coerce(b, pb).value
    b2v = ApproxScalar.coerce(b2, pb).value
    cv = ApproxScalar.coerce(c, pb).value
    xv = ApproxScalar.coerce(x, pb).value
    yv = ApproxScalar.coerce(y, pb).value
    ax, ay = float(abs(xv)), float(abs(yv))
    if ax >= 1 or ay >= 1:
        raise DivergenceError("q-Appell Phi1 needs |x| < 1 and |y| < 1")
    if xv == 0 and yv == 0:
        return ApproxScalar.coerce(1, pb)

    with mp.workprec(pb + 10):
        # Pochhammer tables grown on demand
        poch_a = [mpmath.mpc(1)]
        poch_c = [mpmath.mpc(1)]
        poch_q = [mpmath.mpc(1)]

        def grow(tab, base, upto):
            while len(tab) <= upto:
                k = len(tab) - 1
                tab.append(tab[-1] * (1 - base * qv**k))

        cap_y = (1.0 + ay) / 2.0

        def row_value(m: int, row_eps: float) -> mpmath.mpc:
            grow(poch_q, qv, m + 4)
            # row prefactor: (b;q)_m x^m / (q;q)_m
            pref = mpmath.mpc(1)
            for j in range(m):
                pref *= 1 - bv * qv**j
            pref *= xv**m / poch_q[m]

            # inner terms share (b2;q)_n: one multiply/divide per index
            st = {"t": None}

            def inner_rec(nn):
                if nn == 0:
                    grow(poch_a, av, m + 1)
                    grow(poch_c, cv, m + 1)
                    st["t"] = poch_a[m] / poch_c[m]
                    return st["t"]
                st["t"] = (
                    st["t"]
                    * (1 - av * qv ** (m + nn - 1))
                    * (1 - b2v * qv ** (nn - 1))
                    / ((1 - qv**nn) * (1 - cv * qv ** (m + nn - 1)))
                    * yv
                )
                return st["t"]

            val, _ = certified_sum(inner_rec, row_eps, cap_y, pb, absolute=True)
            return pref * val

        cap_x = (1.0 + ax) / 2.0

        def row_fn(m):
            return row_value(m, eps / (16.0 * 2.0**min(m, 40)))

        total, _ = certified_sum(row_fn, eps / 2, cap_x, pb)
        return ApproxScalar(mpmath.mpc(total), pb)
