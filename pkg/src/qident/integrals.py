"""Contour-integral representations verified by periodic trapezoidal quadrature.

Each representation writes a product of two 2phi1 series as a prefactor times
an integral over psi in [-pi, pi] of theta-paired infinite products times a
3phi2 kernel, with w = e^(i psi) on the unit circle.  The trapezoid rule on
periodic analytic integrands converges geometrically; nodes double until two
successive estimates agree.

The hypothesis that every denominator q-Pochhammer argument keeps modulus
below one (which also places all kernel poles correctly relative to the
contour) is pre-scanned on 64 coarse nodes before any full quadrature runs.

theta(x; q) here is (x; q)_inf (q/x; q)_inf.  Displays whose f-elements did
not form theta pairs (x, q/x) as printed are implemented with the paired form
(if, -iq/f): the pairing is forced by quasi-periodicity in f, and both the
f-independence and sigma-independence of the results confirm it numerically.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import mpmath
from mpmath import mp

from .errors import (
    DomainError,
    HypothesisViolation,
    NoConvergence,
    PoleOnContour,
    UnknownIdentity,
    ZeroArgument,
)
from .qkernel import ApproxScalar, ExactScalar, QBase, qpoch_infinite
from .reporting import VerificationReport, compare_approx, value_str
from .series import SeriesSpec, eval_phi_nonterminating

E = ExactScalar.coerce

INTEGRAL_IDS = (
    "IR_SCHLOSSER",
    "IR_NASSRALLAH_1",
    "IR_NASSRALLAH_2",
    "IR_SRIV_JAIN",
    "IR_THM21",
)

DEFAULT_EPS = 1e-25
DEFAULT_PRECISION_BITS = 256


@dataclass(frozen=True)
class QuadratureSpec:
    nodes: int = 64
    eps: float = DEFAULT_EPS
    max_doublings: int = 14

    def __post_init__(self):
        if self.nodes < 16 or self.nodes & (self.nodes - 1):
            raise DomainError("node count must be a power of two >= 16")
        if self.eps <= 0:
            raise DomainError("eps must be positive")


def theta(x, q, eps: float = 1e-30, precision_bits: int = DEFAULT_PRECISION_BITS) -> ApproxScalar:
    """Modified theta function (x; q)_inf (q/x; q)_inf."""
    if (isinstance(x, ExactScalar) and x.is_zero()) or x == 0:
        raise ZeroArgument("theta requires a nonzero argument")
    qb = QBase.of(q)
    xe = E(x) if isinstance(x, (int, Fraction, ExactScalar)) else x
    first, _ = qpoch_infinite(xe, qb, eps / 4, precision_bits)
    second, _ = qpoch_infinite(qb.value / xe, qb, eps / 4, precision_bits)
    return first * second


def integrate_periodic(
    integrand: Callable,
    spec: QuadratureSpec,
    precision_bits: int = DEFAULT_PRECISION_BITS,
) -> tuple[ApproxScalar, float, int]:
    """Integral over [-pi, pi] of a 2pi-periodic integrand.

    Returns (value, achieved_eps, nodes).  The trapezoid rule on the uniform
    periodic grid is the plain node average times 2pi; levels double (reusing
    previous nodes) until two successive estimates agree within
    eps * max(1, |I|).
    """
    with mp.workprec(precision_bits + 10):
        two_pi = 2 * mpmath.pi

        def node_value(j, n_nodes):
            psi = -mpmath.pi + two_pi * j / n_nodes
            v = integrand(psi)
            if not mpmath.isfinite(v):
                raise PoleOnContour(f"integrand not finite at node {j}/{n_nodes}")
            return v

        n = spec.nodes
        vals = [node_value(j, n) for j in range(n)]
        estimate = two_pi * mpmath.fsum(vals) / n
        for _ in range(spec.max_doublings):
            new_vals = []
            for j in range(n):
                new_vals.append(vals[j])
                new_vals.append(node_value(2 * j + 1, 2 * n))
            n *= 2
            vals = new_vals
            new_estimate = two_pi * mpmath.fsum(vals) / n
            achieved = float(abs(new_estimate - estimate))
            estimate = new_estimate
            if achieved <= spec.eps * max(1.0, float(abs(estimate))):
                return ApproxScalar(estimate, precision_bits), achieved, n
        raise NoConvergence(
            f"quadrature not converged after {spec.max_doublings} doublings ({n} nodes)"
        )


class _QPEvaluator:
    """Infinite q-Pochhammer products at fixed q, reused across nodes."""

    def __init__(self, q, eps: float):
        self.q = q
        self.abs_q = float(abs(q))
        self.eps = eps

    def count(self, abs_x: float) -> int:
        k = 0
        while abs_x * self.abs_q**k >= 0.5:
            k += 1
        while True:
            head = abs_x * self.abs_q**k
            tail = head / ((1.0 - self.abs_q) * (1.0 - head))
            if tail <= self.eps:
                return k
            k += 1

    def __call__(self, x):
        prod = mpmath.mpc(1)
        xq = x
        for _ in range(self.count(float(abs(x)) + 1e-300)):
            prod *= 1 - xq
            xq *= self.q
        return prod


def _phi32_node(upper, lower, q, z, eps, pb):
    """Nonterminating 3phi2 at raw mpc parameters (node-level kernel).

    Plain term recurrence with a small-term stop; the quadrature-level
    doubling convergence provides the outer certification.
    """
    u1, u2, u3 = upper
    l1, l2 = lower
    tot = mpmath.mpc(1)
    term = mpmath.mpc(1)
    qk = mpmath.mpc(1)
    small = 0
    for k in range(4000):
        term = (
            term
            * (1 - u1 * qk)
            * (1 - u2 * qk)
            * (1 - u3 * qk)
            / ((1 - qk * q) * (1 - l1 * qk) * (1 - l2 * qk))
            * z
        )
        tot += term
        qk *= q
        small = small + 1 if abs(term) < eps else 0
        if small >= 4:
            return tot
    raise NoConvergence("3phi2 kernel did not settle within 4000 terms")


# --------------------------------------------------------------------------
# per-identity descriptors
# --------------------------------------------------------------------------


def _series_side(identity_id: str, params: dict, eps: float, pb: int) -> ApproxScalar:
    """The product of two 2phi1 series that the integral must reproduce."""

    def phi(upper, lower, q, z):
        v, _ = eval_phi_nonterminating(SeriesSpec.make(upper, lower, q, z), eps / 4, pb)
        return v

    if identity_id == "IR_SCHLOSSER":
        q, a, b, z = (E(params[k]) for k in ("q", "a", "b", "z"))
        return phi([a, q / a], [-q], q, z) * phi([b, q / b], [-q], q, -z)
    if identity_id == "IR_SRIV_JAIN":
        q, a, b, z = (E(params[k]) for k in ("q", "a", "b", "z"))
        return phi([a, -a], [a * a], q, z) * phi([b, -b], [b * b], q, -z)
    p, a, b, z = (E(params[k]) for k in ("p", "a", "b", "z"))
    q = p * p
    Q = q * q
    A, B = a * a, b * b
    if identity_id == "IR_NASSRALLAH_1":
        return phi([A, B], [A * B / q], Q, z) * phi([A, B], [q * A * B], Q, q * z)
    if identity_id == "IR_NASSRALLAH_2":
        return phi([q * A, q * B], [q * A * B], Q, z) * phi([A / q, q * B], [q * A * B], Q, q * z)
    if identity_id == "IR_THM21":
        return phi([q * A, q * B], [q * A * B], Q, z) * phi([A / q, B / q], [A * B / q], Q, q * z)
    raise UnknownIdentity(identity_id)


def _descriptor(identity_id: str, params: dict, sigma, f, eps: float, pb: int):
    """(prefactor, integrand, denominator-modulus list) for one identity."""
    sig = E(sigma)
    fe = E(f)
    if fe.is_zero():
        raise ZeroArgument("the theta parameter f must be nonzero")
    sv = float(sig.abs_upper())

    with mp.workprec(pb + 20):
        i = mpmath.mpc(0, 1)

        if identity_id in ("IR_SCHLOSSER", "IR_SRIV_JAIN"):
            q, a, b, z = (E(params[k]) for k in ("q", "a", "b", "z"))
            qb = QBase.of(q)
            qv, av, bv, zv, fv, sgv = (
                x.to_approx(pb + 20).value for x in (q, a, b, z, fe, sig)
            )
            qp = _QPEvaluator(qv, eps * 1e-4)

            def pref_values(args_num, args_den):
                num = ApproxScalar.coerce(1, pb)
                for x in args_num:
                    v, _ = qpoch_infinite(x, qb, eps / 64, pb)
                    num = num * v
                den = ApproxScalar.coerce(1, pb)
                for x in args_den:
                    v, _ = qpoch_infinite(x, qb, eps / 64, pb)
                    if v.is_zero():
                        raise HypothesisViolation(
                            "a prefactor denominator product vanishes", factor=str(x)
                        )
                    den = den * v
                return num / den

            if identity_id == "IR_SCHLOSSER":
                moduli = [
                    ("i sigma/w", sv),
                    ("-i sigma/w", sv),
                    ("-i a w/sigma", a.abs_upper() / sv),
                    ("i b w/sigma", b.abs_upper() / sv),
                    ("i (q/b) w/sigma", (q / b).abs_upper() / sv),
                ]
                pref = pref_values(
                    [q, a, -a, b, -b, q / b, -q / b],
                    [fe, q / fe, -fe, -q / fe, -q, a * b, q * a / b],
                )

                def integrand(psi):
                    w = mpmath.expjpi(psi / mpmath.pi)
                    so, ws = sgv / w, w / sgv
                    num = (
                        qp(i * fv * so)
                        * qp(-i * (qv / fv) * so)
                        * qp(i * fv * ws)
                        * qp(-i * (qv / fv) * ws)
                        * qp(i * qv * av * ws)
                    )
                    den = (
                        qp(i * so)
                        * qp(-i * so)
                        * qp(-i * av * ws)
                        * qp(i * bv * ws)
                        * qp(i * (qv / bv) * ws)
                    )
                    kernel = _phi32_node(
                        [av * bv, qv * av / bv, -(i * qv / av) * so],
                        [-qv, i * qv * av * ws],
                        qv,
                        i * zv * ws,
                        eps * 1e-4,
                        pb,
                    )
                    return num / den * kernel

            else:  # IR_SRIV_JAIN
                moduli = [
                    ("i sigma/w", sv),
                    ("-i sigma/w", sv),
                    ("-i a w/sigma", a.abs_upper() / sv),
                    ("i b w/sigma", b.abs_upper() / sv),
                    ("-i b w/sigma", b.abs_upper() / sv),
                ]
                pref = pref_values(
                    [q, a, -a, b, -b, b, -b],
                    [fe, q / fe, -fe, -q / fe, a * b, -a * b, b * b],
                )

                def integrand(psi):
                    w = mpmath.expjpi(psi / mpmath.pi)
                    so, ws = sgv / w, w / sgv
                    num = (
                        qp(i * fv * so)
                        * qp(-i * (qv / fv) * so)
                        * qp(i * fv * ws)
                        * qp(-i * (qv / fv) * ws)
                        * qp(-i * av * bv * bv * ws)
                    )
                    den = (
                        qp(i * so)
                        * qp(-i * so)
                        * qp(-i * av * ws)
                        * qp(i * bv * ws)
                        * qp(-i * bv * ws)
                    )
                    kernel = _phi32_node(
                        [av * bv, -av * bv, i * av * so],
                        [av * av, -i * av * bv * bv * ws],
                        qv,
                        i * zv * ws,
                        eps * 1e-4,
                        pb,
                    )
                    return num / den * kernel

            return pref, integrand, moduli

        # base-q^2 family: q = p^2, everything runs in base Q = q^2 = p^4
        p, a, b, z = (E(params[k]) for k in ("p", "a", "b", "z"))
        q = p * p
        Q = q * q
        Qb = QBase.of(Q)
        A, B = a * a, b * b
        pv, av, bv, zv, fv, sgv = (
            x.to_approx(pb + 20).value for x in (p, a, b, z, fe, sig)
        )
        qv = pv * pv
        Qv = qv * qv
        Av, Bv = av * av, bv * bv
        qp = _QPEvaluator(Qv, eps * 1e-4)

        def pref_Q(args_num, args_den):
            num = ApproxScalar.coerce(1, pb)
            for x in args_num:
                v, _ = qpoch_infinite(x, Qb, eps / 64, pb)
                num = num * v
            den = ApproxScalar.coerce(1, pb)
            for x in args_den:
                v, _ = qpoch_infinite(x, Qb, eps / 64, pb)
                if v.is_zero():
                    raise HypothesisViolation(
                        "a prefactor denominator product vanishes", factor=str(x)
                    )
                den = den * v
            return num / den

        theta_den = [fe, Q / fe, q * fe, q / fe]

        if identity_id == "IR_NASSRALLAH_1":
            moduli = [
                ("p sigma/w", p.abs_upper() * sv),
                ("sigma/(p w)", sv / float(p.abs_upper())),
                ("p a^2 w/sigma", (p * A).abs_upper() / sv),
                ("a^2/p w/sigma", (A / p).abs_upper() / sv),
                ("p b^2 w/sigma", (p * B).abs_upper() / sv),
            ]
            pref = pref_Q(
                [Q, A, A, q * A, A / q, B, q * B],
                theta_den + [A * A, A * B, q * A * B],
            )

            def integrand(psi):
                w = mpmath.expjpi(psi / mpmath.pi)
                so, ws = sgv / w, w / sgv
                num = (
                    qp(pv * fv * so)
                    * qp(pv**3 / fv * so)
                    * qp(pv * fv * ws)
                    * qp(pv**3 / fv * ws)
                    * qp(pv * Av * Av * Bv * ws)
                )
                den = (
                    qp(pv * so)
                    * qp(so / pv)
                    * qp(pv * Av * ws)
                    * qp(Av / pv * ws)
                    * qp(pv * Bv * ws)
                )
                kernel = _phi32_node(
                    [Av * Av, Av * Bv, (Bv / pv) * so],
                    [Av * Bv / qv, pv * Av * Av * Bv * ws],
                    Qv,
                    pv * zv * ws,
                    eps * 1e-4,
                    pb,
                )
                return num / den * kernel

        elif identity_id == "IR_NASSRALLAH_2":
            moduli = [
                ("p sigma/w", p.abs_upper() * sv),
                ("sigma/(p w)", sv / float(p.abs_upper())),
                ("p a^2 w/sigma", (p * A).abs_upper() / sv),
                ("a^2/p w/sigma", (A / p).abs_upper() / sv),
                ("p^3 b^2 w/sigma", (p**3 * B).abs_upper() / sv),
            ]
            pref = pref_Q(
                [Q, q * A, A, A, A / q, q * B, Q * B],
                theta_den + [A * A, q * A * B, Q * A * B],
            )

            def integrand(psi):
                w = mpmath.expjpi(psi / mpmath.pi)
                so, ws = sgv / w, w / sgv
                num = (
                    qp(pv * fv * so)
                    * qp(pv**3 / fv * so)
                    * qp(pv * fv * ws)
                    * qp(pv**3 / fv * ws)
                    * qp(pv**3 * Av * Av * Bv * ws)
                )
                den = (
                    qp(pv * so)
                    * qp(so / pv)
                    * qp(pv * Av * ws)
                    * qp(Av / pv * ws)
                    * qp(pv**3 * Bv * ws)
                )
                kernel = _phi32_node(
                    [Av * Av, Qv * Av * Bv, pv * Bv * so],
                    [qv * Av * Bv, pv**3 * Av * Av * Bv * ws],
                    Qv,
                    pv * zv * ws,
                    eps * 1e-4,
                    pb,
                )
                return num / den * kernel

        elif identity_id == "IR_THM21":
            moduli = [
                ("p sigma/w", p.abs_upper() * sv),
                ("sigma/(p w)", sv / float(p.abs_upper())),
                ("p a^2 w/sigma", (p * A).abs_upper() / sv),
                ("a^2/p w/sigma", (A / p).abs_upper() / sv),
                ("b^2/p w/sigma", (B / p).abs_upper() / sv),
            ]
            pref = pref_Q(
                [Q, q * A, A, A, A / q, B, B / q],
                theta_den + [A * A, A * B, A * B / q],
            )

            def integrand(psi):
                w = mpmath.expjpi(psi / mpmath.pi)
                so, ws = sgv / w, w / sgv
                num = (
                    qp(pv * fv * so)
                    * qp(pv**3 / fv * so)
                    * qp(pv * fv * ws)
                    * qp(pv**3 / fv * ws)
                    * qp(Av * Av * Bv / pv * ws)
                )
                den = (
                    qp(pv * so)
                    * qp(so / pv)
                    * qp(pv * Av * ws)
                    * qp(Av / pv * ws)
                    * qp(Bv / pv * ws)
                )
                kernel = _phi32_node(
                    [Av * Av, Av * Bv, pv * Bv * so],
                    [qv * Av * Bv, Av * Av * Bv / pv * ws],
                    Qv,
                    pv * zv * ws,
                    eps * 1e-4,
                    pb,
                )
                return num / den * kernel

        else:
            raise UnknownIdentity(identity_id)

        return pref, integrand, moduli


def hypothesis_prescan(moduli, integrand, pb: int) -> None:
    """Check the modulus-below-one hypothesis, then probe 64 coarse nodes."""
    for name, m in moduli:
        if m >= 1.0:
            raise HypothesisViolation(
                f"denominator element {name} has modulus {m:.6g} >= 1", factor=name
            )
    with mp.workprec(pb + 10):
        for j in range(64):
            psi = -mpmath.pi + 2 * mpmath.pi * j / 64
            v = integrand(psi)
            if not mpmath.isfinite(v):
                raise HypothesisViolation(
                    f"integrand blows up during the coarse prescan at node {j}",
                    factor="prescan",
                )


def verify_integral_rep(
    identity_id: str,
    params: dict,
    sigma,
    f,
    eps: float = DEFAULT_EPS,
    precision_bits: int = DEFAULT_PRECISION_BITS,
    quadrature: QuadratureSpec | None = None,
) -> VerificationReport:
    """Prefactor times contour integral against the series-side product."""
    if identity_id not in INTEGRAL_IDS:
        raise UnknownIdentity(f"no integral representation registered under {identity_id!r}")
    sig = E(sigma)
    if sig.is_zero() or not sig.is_real() or sig.re <= 0:
        raise DomainError("sigma must be a positive real")
    series = _series_side(identity_id, params, eps, precision_bits)
    pref, integrand, moduli = _descriptor(identity_id, params, sigma, f, eps, precision_bits)
    hypothesis_prescan(moduli, integrand, precision_bits)
    spec = quadrature or QuadratureSpec(nodes=64, eps=eps / 16, max_doublings=14)
    integral, achieved, nodes = integrate_periodic(integrand, spec, precision_bits)
    with mp.workprec(precision_bits + 10):
        value = pref * integral * ApproxScalar(1 / (2 * mpmath.pi), precision_bits)
    passed, abs_err, rel_err = compare_approx(value, series, eps)
    shown = {k: value_str(E(v)) for k, v in sorted(params.items())}
    shown["sigma"] = value_str(E(sigma))
    shown["f"] = value_str(E(f))
    return VerificationReport(
        identity_id=identity_id,
        params=shown,
        n=None,
        mode="approx",
        lhs=str(value),
        rhs=str(series),
        abs_err=abs_err,
        rel_err=rel_err,
        passed=passed,
        degenerate=False,
        quadrature_nodes=nodes,
        note=f"quadrature achieved_eps={achieved:.3e}",
    )
