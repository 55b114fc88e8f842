"""Exact rational polynomial algebra and special values.

Polynomials live in Q[t] where t stands for q^(-s).  Nothing is ever
evaluated in floating point: special values at s = 1 (t = 1/q) are elements
of the graded group Q^x * (log q)^k, with log q kept as a formal symbol.
Per-place logarithms collapse through log q_v = d_v * log q, so a single
grading integer suffices.

The vanishing order at t = 1/q is computed by repeated exact division by
(1 - q*t); each division step accounts for one factor (s - 1) * log q of the
leading term, which is why order and log-power advance together for values
extracted from rational functions.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    DivisionByZero,
    InconsistentPowerSums,
    NoConsistentSign,
    NonIntegralCoefficients,
)


class RatPoly:
    """Polynomial over Q, coefficient index = degree in t."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        cs = [Fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = tuple(cs)

    @classmethod
    def const(cls, c) -> "RatPoly":
        return cls([Fraction(c)])

    @classmethod
    def one(cls) -> "RatPoly":
        return cls([1])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, RatPoly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self == RatPoly.const(other)
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __add__(self, other):
        other = self._coerce(other)
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return RatPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return RatPoly([-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if self.is_zero() or other.is_zero():
            return RatPoly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    if b:
                        out[i + j] += a * b
        return RatPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        result = RatPoly.one()
        b = self
        while n:
            if n & 1:
                result = result * b
            b = b * b
            n >>= 1
        return result

    @staticmethod
    def _coerce(x):
        if isinstance(x, RatPoly):
            return x
        return RatPoly.const(x)

    def divmod(self, other: "RatPoly"):
        other = self._coerce(other)
        if other.is_zero():
            raise DivisionByZero("polynomial division by zero")
        rem = list(self.coeffs)
        db = other.degree
        lead = other.coeffs[-1]
        quot = [Fraction(0)] * max(0, len(rem) - db)
        for k in range(len(rem) - 1, db - 1, -1):
            c = rem[k]
            if not c:
                continue
            f = c / lead
            quot[k - db] = f
            for i, b in enumerate(other.coeffs):
                rem[k - db + i] -= f * b
        return RatPoly(quot), RatPoly(rem)

    def __mod__(self, other):
        return self.divmod(other)[1]

    def __floordiv__(self, other):
        return self.divmod(other)[0]

    def eval(self, x) -> Fraction:
        acc = Fraction(0)
        x = Fraction(x)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def coeff(self, i: int) -> Fraction:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else Fraction(0)

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coeffs)

    def monic(self) -> "RatPoly":
        if self.is_zero():
            return self
        lead = self.coeffs[-1]
        return RatPoly([c / lead for c in self.coeffs])

    def power_sums(self, m: int) -> list[Fraction]:
        """First m power sums of the inverse roots, via -t P'/P = sum s_k t^k.

        Requires constant term 1.
        """
        if self.coeff(0) != 1:
            raise ValueError("power sums need constant term 1")
        s: list[Fraction] = []
        for k in range(1, m + 1):
            acc = -k * self.coeff(k)
            for j in range(1, k):
                acc -= self.coeff(j) * s[k - j - 1]
            s.append(acc)
        return s

    def __repr__(self):
        if self.is_zero():
            return "RatPoly(0)"
        return "RatPoly(" + ", ".join(str(c) for c in self.coeffs) + ")"


def poly_gcd(a: RatPoly, b: RatPoly) -> RatPoly:
    while not b.is_zero():
        a, b = b, a % b
    return a.monic() if not a.is_zero() else a


class RatFunc:
    """Quotient of RatPolys, reduced, denominator monic."""

    __slots__ = ("num", "den")

    def __init__(self, num: RatPoly, den: RatPoly = None):
        num = RatPoly._coerce(num)
        den = RatPoly.one() if den is None else RatPoly._coerce(den)
        if den.is_zero():
            raise DivisionByZero("zero denominator")
        g = poly_gcd(num, den)
        if not g.is_zero() and g.degree > 0:
            num, den = num // g, den // g
        lead = den.coeffs[-1]
        if lead != 1:
            num = num * RatPoly.const(1 / lead)
            den = den.monic()
        self.num = num
        self.den = den

    def __mul__(self, other):
        if not isinstance(other, RatFunc):
            other = RatFunc(RatPoly._coerce(other))
        return RatFunc(self.num * other.num, self.den * other.den)

    def __truediv__(self, other):
        if not isinstance(other, RatFunc):
            other = RatFunc(RatPoly._coerce(other))
        return RatFunc(self.num * other.den, self.den * other.num)

    def __eq__(self, other):
        return (
            isinstance(other, RatFunc)
            and self.num == other.num
            and self.den == other.den
        )

    def is_polynomial(self) -> bool:
        return self.den == RatPoly.one()

    def __repr__(self):
        return f"RatFunc({self.num!r} / {self.den!r})"


@dataclass(frozen=True)
class SpecialValue:
    """sign * (num/den) * (log q)^log_power, vanishing to the given order."""

    sign: int
    num: int
    den: int
    log_power: int
    order: int

    @classmethod
    def from_fraction(cls, value: Fraction, log_power: int, order: int) -> "SpecialValue":
        value = Fraction(value)
        if value == 0:
            raise ValueError("special values are nonzero by construction")
        sign = 1 if value > 0 else -1
        mag = abs(value)
        return cls(sign, mag.numerator, mag.denominator, log_power, order)

    @property
    def value(self) -> Fraction:
        return Fraction(self.num, self.den)

    @property
    def signed_value(self) -> Fraction:
        return self.sign * self.value

    def mul(self, other: "SpecialValue") -> "SpecialValue":
        return SpecialValue.from_fraction(
            self.signed_value * other.signed_value,
            self.log_power + other.log_power,
            self.order + other.order,
        )

    def div(self, other: "SpecialValue") -> "SpecialValue":
        return SpecialValue.from_fraction(
            self.signed_value / other.signed_value,
            self.log_power - other.log_power,
            self.order - other.order,
        )

    def eq(self, other: "SpecialValue") -> bool:
        return self == other

    def abs_eq(self, other: "SpecialValue") -> bool:
        """Equality ignoring sign."""
        return (self.num, self.den, self.log_power, self.order) == (
            other.num,
            other.den,
            other.log_power,
            other.order,
        )

    def with_order(self, order: int) -> "SpecialValue":
        return SpecialValue(self.sign, self.num, self.den, self.log_power, order)

    def __repr__(self):
        s = "+" if self.sign > 0 else "-"
        return f"SV({s}{self.num}/{self.den} * log^{self.log_power}, ord {self.order})"


SV_ONE = SpecialValue(1, 1, 1, 0, 0)


def sv_algebra(op: str, a: SpecialValue, b: SpecialValue):
    """Dispatch wrapper: mul/div return values, eq/abs_eq return booleans."""
    if op == "mul":
        return a.mul(b)
    if op == "div":
        return a.div(b)
    if op == "eq":
        return a.eq(b)
    if op == "abs_eq":
        return a.abs_eq(b)
    raise ValueError(f"unknown op {op!r}")


def newton_from_power_sums(
    sums, degree: int, require_integral: bool = False
) -> RatPoly:
    """Reconstruct P(t) = prod (1 - a_i t) from power sums s_k = sum a_i^k.

    ``sums`` may be longer than ``degree``; surplus entries are checked for
    consistency against the reconstructed polynomial.
    """
    sums = [Fraction(s) for s in sums]
    if len(sums) < degree:
        raise InconsistentPowerSums(
            f"need {degree} power sums, got {len(sums)}"
        )
    coeffs = [Fraction(1)]
    for k in range(1, degree + 1):
        acc = sums[k - 1]
        for j in range(1, k):
            acc += coeffs[j] * sums[k - j - 1]
        coeffs.append(-acc / k)
    poly = RatPoly(coeffs)
    # surplus consistency: the recurrence must continue to hold
    for k in range(degree + 1, len(sums) + 1):
        acc = sums[k - 1]
        for j in range(1, min(k, degree + 1)):
            acc += coeffs[j] * sums[k - j - 1]
        if acc != 0:
            raise InconsistentPowerSums(f"power sum s_{k} inconsistent")
    if require_integral and not poly.is_integral():
        raise NonIntegralCoefficients(f"non-integer coefficients: {poly!r}")
    return poly


def functional_equation_complete(
    partial: RatPoly, degree: int, q: int, weight: int, sign: int | None = None
) -> RatPoly:
    """Fill the upper half of a self-dual polynomial.

    Self-duality: P(t) = sign * (q^(weight/2) t)^degree * P(1/(q^weight t)),
    i.e. coefficientwise a_{n-j} = sign * q^(weight*(n-2j)/2) * a_j.  Known
    low coefficients must cover j <= ceil(n/2).  With ``sign`` unset both
    signs are tried and the consistent one returned.
    """
    n = degree
    if n == 0:
        return partial
    if partial.degree > n:
        raise NoConsistentSign("partial polynomial exceeds target degree")
    half = (n + 1) // 2
    given_up_to = max(half, min(partial.degree, n))

    def attempt(eps: int) -> RatPoly | None:
        out: list = [None] * (n + 1)
        for j in range(given_up_to + 1):
            out[j] = partial.coeff(j)
        for j in range(given_up_to + 1):
            e2 = weight * (n - 2 * j)
            if e2 % 2:
                if out[j] != 0:
                    return None
                continue
            val = eps * Fraction(q) ** (e2 // 2) * out[j]
            if out[n - j] is None:
                out[n - j] = val
            elif out[n - j] != val:
                return None
        cand = RatPoly([Fraction(0) if c is None else c for c in out])
        # full self-duality audit
        for j in range(n + 1):
            e2 = weight * (n - 2 * j)
            if e2 % 2:
                if cand.coeff(j) != 0:
                    return None
                continue
            if cand.coeff(n - j) != eps * Fraction(q) ** (e2 // 2) * cand.coeff(j):
                return None
        return cand

    if sign is not None:
        got = attempt(sign)
        if got is None:
            raise NoConsistentSign(f"sign {sign} inconsistent with given coefficients")
        return got
    plus = attempt(1)
    minus = attempt(-1)
    if plus is not None:
        return plus
    if minus is not None:
        return minus
    raise NoConsistentSign("neither functional-equation sign is consistent")


def _one_minus_qt(q: int) -> RatPoly:
    return RatPoly([1, -q])


def poly_order_at(poly: RatPoly, q: int):
    """(order of vanishing at t=1/q, cofactor with cofactor(1/q) != 0)."""
    if poly.is_zero():
        raise DivisionByZero("zero polynomial has no leading term")
    lin = _one_minus_qt(q)
    order = 0
    while True:
        quot, rem = poly.divmod(lin)
        if rem.is_zero():
            order += 1
            poly = quot
        else:
            break
        if poly.degree < 0:
            break
    return order, poly


def leading_term(f, q: int) -> SpecialValue:
    """Leading term of f at t = 1/q as sign * rational * (log q)^k.

    Writes f = (1 - q t)^k * g with g(1/q) != 0; the value is g(1/q), the
    order and log-power are both k (each division corresponds to one factor
    (s-1) log q).  Rational functions with a pole at t = 1/q come back with
    negative order, not an error.
    """
    if isinstance(f, RatPoly):
        f = RatFunc(f)
    ord_n, num = poly_order_at(f.num, q)
    ord_d, den = poly_order_at(f.den, q)
    val = num.eval(Fraction(1, q)) / den.eval(Fraction(1, q))
    k = ord_n - ord_d
    return SpecialValue.from_fraction(val, k, k)
