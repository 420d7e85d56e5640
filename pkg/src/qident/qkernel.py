"""Scalar arithmetic and the q-Pochhammer symbol.

Two arithmetic modes coexist and never mix silently:

* :class:`ExactScalar` -- a Gaussian rational (real and imaginary parts are
  arbitrary-size ``Fraction``\\ s).  Closed under +, -, *, / (by nonzero) and
  integer powers; equality is exact.
* :class:`ApproxScalar` -- a complex number in binary floating point at a
  recorded precision of P >= 64 bits (mpmath storage).  Binary operations
  round at the minimum of the operand precisions.

On top of these sit the finite q-Pochhammer product, the list/product
convention, and the certified-truncation infinite product ``(a;q)_inf``.
All values are immutable and every operation is a pure function.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

import mpmath
from mpmath import mp

from .errors import DomainError, ModeMismatch

RationalLike = Union[int, Fraction]


def _as_fraction(x: RationalLike) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError(f"cannot interpret {x!r} as an exact rational")


class ExactScalar:
    """Gaussian rational p/q + (r/s)i with exact arithmetic."""

    __slots__ = ("re", "im")

    def __init__(self, re: RationalLike = 0, im: RationalLike = 0):
        object.__setattr__(self, "re", _as_fraction(re))
        object.__setattr__(self, "im", _as_fraction(im))

    def __setattr__(self, *a):  # immutable
        raise AttributeError("ExactScalar is immutable")

    # -- constructors -------------------------------------------------
    @staticmethod
    def coerce(x: "ExactScalar | RationalLike") -> "ExactScalar":
        if isinstance(x, ExactScalar):
            return x
        return ExactScalar(_as_fraction(x))

    # -- predicates ---------------------------------------------------
    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def is_real(self) -> bool:
        return self.im == 0

    def abs2(self) -> Fraction:
        """|self|^2, exact."""
        return self.re * self.re + self.im * self.im

    # -- arithmetic ---------------------------------------------------
    def __add__(self, other):
        other = _coerce_exact(other)
        if other is NotImplemented:
            return NotImplemented
        return ExactScalar(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce_exact(other)
        if other is NotImplemented:
            return NotImplemented
        return ExactScalar(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        other = _coerce_exact(other)
        if other is NotImplemented:
            return NotImplemented
        return ExactScalar(other.re - self.re, other.im - self.im)

    def __mul__(self, other):
        other = _coerce_exact(other)
        if other is NotImplemented:
            return NotImplemented
        return ExactScalar(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _coerce_exact(other)
        if other is NotImplemented:
            return NotImplemented
        d = other.abs2()
        if d == 0:
            raise ZeroDivisionError("division by exact zero")
        return ExactScalar(
            (self.re * other.re + self.im * other.im) / d,
            (self.im * other.re - self.re * other.im) / d,
        )

    def __rtruediv__(self, other):
        other = _coerce_exact(other)
        if other is NotImplemented:
            return NotImplemented
        return other / self

    def __neg__(self):
        return ExactScalar(-self.re, -self.im)

    def __pow__(self, n: int):
        if not isinstance(n, int):
            raise TypeError("exact powers must have integer exponents")
        if n < 0:
            return ExactScalar(1) / (self ** (-n))
        result = ExactScalar(1)
        base = self
        e = n
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def conjugate(self) -> "ExactScalar":
        return ExactScalar(self.re, -self.im)

    # -- comparisons / hashing ----------------------------------------
    def __eq__(self, other):
        other = _coerce_exact(other)
        if other is NotImplemented:
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        return hash((self.re, self.im))

    # -- conversions ----------------------------------------------------
    def to_approx(self, precision_bits: int) -> "ApproxScalar":
        with mp.workprec(precision_bits):
            v = mpmath.mpc(
                mpmath.mpf(self.re.numerator) / self.re.denominator,
                mpmath.mpf(self.im.numerator) / self.im.denominator,
            )
        return ApproxScalar(v, precision_bits)

    def __float__(self) -> float:
        if self.im != 0:
            raise ValueError("non-real exact scalar")
        return float(self.re)

    def __complex__(self) -> complex:
        return complex(float(self.re), float(self.im))

    def abs_upper(self) -> float:
        """A float upper bound on |self|."""
        return math.sqrt(float(self.abs2())) * (1 + 1e-14) + 1e-300

    # -- printing -------------------------------------------------------
    def __repr__(self):
        return f"ExactScalar({format_exact(self)!r})"

    def __str__(self):
        return format_exact(self)


def _coerce_exact(x) -> "ExactScalar":
    if isinstance(x, ExactScalar):
        return x
    if isinstance(x, (int, Fraction)):
        return ExactScalar(x)
    return NotImplemented


I = ExactScalar(0, 1)
EXACT_ZERO = ExactScalar(0)
EXACT_ONE = ExactScalar(1)


def format_exact(x: ExactScalar) -> str:
    """Render as a rational literal: "p/q", "r/s*i" or "p/q+r/s*i"."""

    def frac(f: Fraction) -> str:
        return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"

    if x.im == 0:
        return frac(x.re)
    imag = f"{frac(abs(x.im))}*i"
    if x.re == 0:
        return imag if x.im > 0 else f"-{imag}"
    sign = "+" if x.im > 0 else "-"
    return f"{frac(x.re)}{sign}{imag}"


def parse_exact(text: str) -> ExactScalar:
    """Parse a rational literal: "p/q", "p/q+r/s*i", "-r/s*i", "i"."""
    s = text.strip().replace(" ", "")
    if not s:
        raise ValueError("empty scalar literal")

    def parse_frac(t: str) -> Fraction:
        return Fraction(t)

    # split into real and imaginary chunks at a +/- that is not leading
    chunks = []
    start = 0
    for j in range(1, len(s)):
        if s[j] in "+-" and s[j - 1] not in "+-/*":
            chunks.append(s[start:j])
            start = j
    chunks.append(s[start:])
    re = Fraction(0)
    im = Fraction(0)
    for chunk in chunks:
        if chunk in ("i", "+i"):
            im += 1
        elif chunk == "-i":
            im -= 1
        elif chunk.endswith("*i"):
            im += parse_frac(chunk[:-2])
        elif chunk.endswith("i"):
            im += parse_frac(chunk[:-1])
        else:
            re += parse_frac(chunk)
    return ExactScalar(re, im)


class ApproxScalar:
    """Complex floating-point value carrying its precision in bits."""

    __slots__ = ("value", "precision_bits")

    MIN_BITS = 64

    def __init__(self, value, precision_bits: int):
        if precision_bits < self.MIN_BITS:
            raise DomainError(f"precision must be >= {self.MIN_BITS} bits")
        with mp.workprec(precision_bits):
            object.__setattr__(self, "value", mpmath.mpc(value))
        object.__setattr__(self, "precision_bits", int(precision_bits))

    def __setattr__(self, *a):
        raise AttributeError("ApproxScalar is immutable")

    @staticmethod
    def coerce(x, precision_bits: int) -> "ApproxScalar":
        if isinstance(x, ApproxScalar):
            return x
        if isinstance(x, ExactScalar):
            return x.to_approx(precision_bits)
        if isinstance(x, (int, Fraction)):
            return ExactScalar(x).to_approx(precision_bits)
        return ApproxScalar(x, precision_bits)

    def is_zero(self) -> bool:
        return self.value == 0

    def _binop(self, other, op):
        if isinstance(other, ExactScalar):
            other = other.to_approx(self.precision_bits)
        elif isinstance(other, (int, Fraction)):
            other = ExactScalar(other).to_approx(self.precision_bits)
        elif not isinstance(other, ApproxScalar):
            return NotImplemented
        bits = min(self.precision_bits, other.precision_bits)
        with mp.workprec(bits):
            return ApproxScalar(op(self.value, other.value), bits)

    def __add__(self, other):
        return self._binop(other, lambda x, y: x + y)

    __radd__ = __add__

    def __sub__(self, other):
        return self._binop(other, lambda x, y: x - y)

    def __rsub__(self, other):
        return self._binop(other, lambda x, y: y - x)

    def __mul__(self, other):
        return self._binop(other, lambda x, y: x * y)

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self._binop(other, lambda x, y: x / y)

    def __rtruediv__(self, other):
        return self._binop(other, lambda x, y: y / x)

    def __neg__(self):
        return ApproxScalar(-self.value, self.precision_bits)

    def __pow__(self, n: int):
        if not isinstance(n, int):
            raise TypeError("powers must have integer exponents")
        with mp.workprec(self.precision_bits):
            return ApproxScalar(self.value ** n, self.precision_bits)

    def conjugate(self) -> "ApproxScalar":
        return ApproxScalar(mpmath.conj(self.value), self.precision_bits)

    def __abs__(self):
        with mp.workprec(self.precision_bits):
            return abs(self.value)

    def __eq__(self, other):
        if isinstance(other, ApproxScalar):
            return self.value == other.value
        if isinstance(other, (int, Fraction)):
            return self.value == mpmath.mpf(other.numerator if isinstance(other, Fraction) else other) and (
                not isinstance(other, Fraction) or other.denominator == 1 or self.value * other.denominator == other.numerator
            )
        return NotImplemented

    def __hash__(self):
        return hash(self.value)

    def __repr__(self):
        return f"ApproxScalar({mpmath.nstr(self.value, 20)}, bits={self.precision_bits})"

    def __str__(self):
        digits = max(6, int(self.precision_bits * 0.3010299956639812) - 2)
        return mpmath.nstr(self.value, digits)


Scalar = Union[ExactScalar, ApproxScalar]


def scalar_mode(values: Iterable) -> str:
    """Return "exact" or "approx"; raise ModeMismatch when modes are mixed."""
    mode = None
    for v in values:
        if isinstance(v, ExactScalar):
            m = "exact"
        elif isinstance(v, ApproxScalar):
            m = "approx"
        elif isinstance(v, (int, Fraction)):
            continue
        else:
            raise TypeError(f"not a scalar: {v!r}")
        if mode is None:
            mode = m
        elif mode != m:
            raise ModeMismatch("exact and approximate scalars mixed in one operation")
    return mode or "exact"


def min_precision(values: Iterable, default: int = 256) -> int:
    bits = [v.precision_bits for v in values if isinstance(v, ApproxScalar)]
    return min(bits) if bits else default


def plus_minus(x: Scalar) -> list:
    """List shorthand: "+-x" expands to [x, -x]."""
    return [x, -x]


def w_pm(w: Scalar) -> list:
    """The list shorthand "w^(+-)" -> [w, 1/w]."""
    return [w, 1 / w]


@dataclass(frozen=True)
class QBase:
    """A base q with |q| < 1 strictly, carrying a float bound on |q|."""

    value: Scalar
    modulus_bound: float

    @staticmethod
    def of(q) -> "QBase":
        if isinstance(q, QBase):
            return q
        if isinstance(q, (int, Fraction)):
            q = ExactScalar(q)
        if isinstance(q, ExactScalar):
            bound = q.abs_upper()
        elif isinstance(q, ApproxScalar):
            bound = float(abs(q)) * (1 + 1e-14)
        else:
            raise TypeError(f"not a scalar: {q!r}")
        if bound >= 1:
            raise DomainError(f"|q| must be < 1, got |q| ~ {bound}")
        if (isinstance(q, ExactScalar) and q.is_zero()) or (
            isinstance(q, ApproxScalar) and q.is_zero()
        ):
            raise DomainError("q must be nonzero")
        return QBase(q, bound)


@dataclass(frozen=True)
class TruncationCert:
    """Truncation evidence: terms used, tail bound, and the target it met."""

    terms_used: int
    tail_bound: float
    target_eps: float

    @property
    def ok(self) -> bool:
        return self.tail_bound <= self.target_eps


def qpoch_finite(a: Scalar, q: Scalar, n: int) -> Scalar:
    """(a;q)_n = prod_{k=0}^{n-1} (1 - a q^k); the empty product is 1."""
    if n < 0:
        raise DomainError("negative q-Pochhammer index is not supported")
    mode = scalar_mode([a, q])
    one = EXACT_ONE if mode == "exact" else ApproxScalar.coerce(1, min_precision([a, q]))
    a = ExactScalar.coerce(a) if mode == "exact" else ApproxScalar.coerce(a, min_precision([a, q]))
    q = ExactScalar.coerce(q) if mode == "exact" else ApproxScalar.coerce(q, min_precision([a, q]))
    result = one
    aqk = a
    for _ in range(n):
        result = result * (one - aqk)
        aqk = aqk * q
    return result


def qpoch_list(args: Sequence[Scalar], q: Scalar, n: int) -> Scalar:
    """(a_1,...,a_k;q)_n, the product convention over a nonempty list.

    Use :func:`plus_minus` / :func:`w_pm` to expand the +-a and w^(+-)
    shorthands into explicit list entries before calling.
    """
    if not args:
        raise DomainError("qpoch_list requires a nonempty parameter list")
    scalar_mode(list(args) + [q])
    result = None
    for a in args:
        term = qpoch_finite(a, q, n)
        result = term if result is None else result * term
    return result


def _exact_zero_factor_index(a: ExactScalar, q: ExactScalar) -> int | None:
    """Least k >= 0 with a q^k = 1, if any (requires |q| < 1)."""
    if a.is_zero():
        return None
    x = a
    k = 0
    while float(x.abs2()) >= 1.0 - 1e-12:
        if x == EXACT_ONE:
            return k
        x = x * q
        k += 1
        if k > 100000:  # unreachable for |q| < 1
            break
    return None


def qpoch_infinite(
    a,
    q,
    eps: float,
    precision_bits: int | None = None,
) -> tuple[ApproxScalar, TruncationCert]:
    """(a;q)_inf with a certificate: |V - (a;q)_inf| <= eps * max(1, |V|).

    The tail past the first K factors is controlled through
    |log prod_{k>=K} (1 - a q^k)| <= sum_{k>=K} |a||q|^k / (1 - |a||q|^K),
    applied once |a||q|^K < 1/2.  Exact inputs get an exact vanishing-factor
    prescan; the ZeroFactor condition (some 1 - a q^k = 0) is resolved by
    returning exact zero with a trivial certificate rather than raising.
    """
    if eps <= 0:
        raise DomainError("eps must be positive")
    qb = QBase.of(q)
    qv = qb.value
    if precision_bits is None:
        precision_bits = min_precision([a, qv], default=256)

    # exact prescan: a q^k = 1 makes the whole product exactly zero
    if isinstance(a, (int, Fraction)):
        a = ExactScalar(a)
    if isinstance(a, ExactScalar) and isinstance(qv, ExactScalar):
        if _exact_zero_factor_index(a, qv) is not None:
            zero = ApproxScalar.coerce(0, precision_bits)
            return zero, TruncationCert(0, 0.0, eps)

    av = ApproxScalar.coerce(a, precision_bits)
    qa = ApproxScalar.coerce(qv, precision_bits)
    if av.is_zero():
        return ApproxScalar.coerce(1, precision_bits), TruncationCert(0, 0.0, eps)

    abs_a = float(abs(av))
    abs_q = qb.modulus_bound
    # least K with |a| |q|^K < 1/2 and log-majorant tail <= eps/4
    K = 0
    while abs_a * abs_q**K >= 0.5:
        K += 1
    while True:
        head = abs_a * abs_q**K
        tail_log = head / ((1.0 - abs_q) * (1.0 - head))
        if tail_log <= eps / 4:
            break
        K += 1

    guard = 24 + max(0, K).bit_length()
    with mp.workprec(precision_bits + guard):
        prod = mpmath.mpc(1)
        aqk = av.value
        qq = qa.value
        for k in range(K):
            factor = 1 - aqk
            if factor == 0:
                return (
                    ApproxScalar.coerce(0, precision_bits),
                    TruncationCert(k + 1, 0.0, eps),
                )
            prod *= factor
            aqk *= qq
        value = ApproxScalar(mpmath.mpc(prod), precision_bits)
    tail_bound = float(abs(value)) * (math.expm1(tail_log) if tail_log < 1 else 2 * tail_log)
    target = eps * max(1.0, float(abs(value)))
    return value, TruncationCert(K, tail_bound, target)
