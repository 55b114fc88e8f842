"""Finite fields, polynomials over them, and places of the projective line.

Fields are represented as context objects: ``PrimeField(p)`` for GF(p) and
``ExtensionField(base, modulus)`` for quotients base[x]/(modulus).  Elements
are lightweight wrappers supporting the usual operator syntax.  Everything is
exact and immutable; contexts can be shared freely.

A place of P^1 over GF(q) is either the point at infinity or a monic
irreducible polynomial in the coordinate t.  Enumeration is by an exhaustive
factorization sieve, which is desk-scale (q^d_max elements) and doubles as
the irreducibility oracle used at field construction.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import CharTooSmall, DivisionByZero, NotIrreducible, NotPrime


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


class FElem:
    """Element of a finite field; arithmetic delegates to the field context."""

    __slots__ = ("field", "val")

    def __init__(self, field, val):
        self.field = field
        self.val = val

    def __add__(self, other):
        return self.field.add(self, self.field.elem(other))

    __radd__ = __add__

    def __sub__(self, other):
        return self.field.add(self, -self.field.elem(other))

    def __rsub__(self, other):
        return self.field.add(self.field.elem(other), -self)

    def __mul__(self, other):
        return self.field.mul(self, self.field.elem(other))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self.field.mul(self, self.field.inv(self.field.elem(other)))

    def __rtruediv__(self, other):
        return self.field.mul(self.field.elem(other), self.field.inv(self))

    def __neg__(self):
        return self.field.neg(self)

    def __pow__(self, n: int):
        return self.field.pow(self, n)

    def __eq__(self, other):
        if isinstance(other, FElem):
            return self.field is other.field and self.val == other.val
        if isinstance(other, int):
            return self == self.field.elem(other)
        return NotImplemented

    def __hash__(self):
        return hash((id(self.field), self.val))

    def __bool__(self):
        return self.val != self.field.zero.val

    def __repr__(self):
        return f"{self.field.short_name}({self.val})"

    def frobenius(self):
        """x -> x^p, the absolute Frobenius."""
        return self.field.pow(self, self.field.p)

    def is_square(self):
        """Quadratic residue test via Euler's criterion (q odd)."""
        if not self:
            return True
        q = self.field.q
        return self.field.pow(self, (q - 1) // 2) == self.field.one


class PrimeField:
    """GF(p).  Element values are ints in [0, p)."""

    def __init__(self, p: int, _allow_small: bool = False):
        if not _is_prime(p):
            raise NotPrime(f"{p} is not prime")
        if p < 5 and not _allow_small:
            raise CharTooSmall(f"characteristic {p} not supported (need p >= 5)")
        self.p = p
        self.q = p
        self.degree = 1
        self.char = p
        self.zero = FElem(self, 0)
        self.one = FElem(self, 1)
        self.short_name = f"F{p}"

    def elem(self, x) -> FElem:
        if isinstance(x, FElem):
            if x.field is self:
                return x
            raise TypeError("element of a different field")
        return FElem(self, x % self.p)

    def add(self, a, b):
        return FElem(self, (a.val + b.val) % self.p)

    def neg(self, a):
        return FElem(self, (-a.val) % self.p)

    def mul(self, a, b):
        return FElem(self, (a.val * b.val) % self.p)

    def inv(self, a):
        if a.val == 0:
            raise DivisionByZero("inverse of zero")
        return FElem(self, pow(a.val, self.p - 2, self.p))

    def pow(self, a, n: int):
        if n < 0:
            return self.pow(self.inv(a), -n)
        return FElem(self, pow(a.val, n, self.p))

    def elements(self):
        return (FElem(self, v) for v in range(self.p))

    def elem_key(self, a) -> tuple:
        return (a.val,)

    def __repr__(self):
        return f"PrimeField({self.p})"


class ExtensionField:
    """base[x]/(modulus) for a monic irreducible modulus over ``base``.

    Element values are tuples of base elements of length deg(modulus),
    low-degree coefficient first.
    """

    def __init__(self, base, modulus_coeffs, check_irreducible: bool = True):
        # modulus_coeffs: sequence over base (or ints), monic, length d+1
        mod = [base.elem(c) for c in modulus_coeffs]
        while mod and not mod[-1]:
            mod.pop()
        d = len(mod) - 1
        if d < 1:
            raise NotIrreducible("modulus must have degree >= 1")
        if mod[-1] != base.one:
            raise NotIrreducible("modulus must be monic")
        self.base = base
        self.modulus = tuple(mod)
        self.degree = d
        self.p = base.p
        self.char = base.char
        self.q = base.q**d
        self.zero = FElem(self, (base.zero,) * d)
        one = [base.one] + [base.zero] * (d - 1)
        self.one = FElem(self, tuple(one))
        self.short_name = f"F{self.q}"
        # negated non-leading coefficients, used by reduction
        self._red = tuple(-c for c in mod[:-1])
        if check_irreducible and not poly_is_irreducible(Poly(base, modulus_coeffs)):
            raise NotIrreducible("modulus is reducible")

    def elem(self, x) -> FElem:
        if isinstance(x, FElem):
            if x.field is self:
                return x
            if x.field is self.base:
                return self._from_base(x)
            raise TypeError("element of a different field")
        if isinstance(x, int):
            return self._from_base(self.base.elem(x))
        # coefficient sequence over the base
        vec = [self.base.elem(c) for c in x]
        if len(vec) > self.degree:
            raise ValueError("coefficient vector longer than extension degree")
        vec += [self.base.zero] * (self.degree - len(vec))
        return FElem(self, tuple(vec))

    def _from_base(self, c):
        return FElem(self, (c,) + (self.base.zero,) * (self.degree - 1))

    def add(self, a, b):
        return FElem(self, tuple(x + y for x, y in zip(a.val, b.val)))

    def neg(self, a):
        return FElem(self, tuple(-x for x in a.val))

    def mul(self, a, b):
        d = self.degree
        base = self.base
        raw = [base.zero] * (2 * d - 1)
        for i, x in enumerate(a.val):
            if not x:
                continue
            for j, y in enumerate(b.val):
                if y:
                    raw[i + j] = raw[i + j] + x * y
        # reduce degrees >= d using x^d = sum(_red[i] x^i)
        for k in range(2 * d - 2, d - 1, -1):
            c = raw[k]
            if not c:
                continue
            raw[k] = base.zero
            for i, r in enumerate(self._red):
                if r:
                    raw[k - d + i] = raw[k - d + i] + c * r
        return FElem(self, tuple(raw[:d]))

    def inv(self, a):
        if not a:
            raise DivisionByZero("inverse of zero")
        # Fermat: a^(q-2); fields here are tiny so this is fine
        return self.pow(a, self.q - 2)

    def pow(self, a, n: int):
        if n < 0:
            return self.pow(self.inv(a), -n)
        result = self.one
        b = a
        while n:
            if n & 1:
                result = self.mul(result, b)
            b = self.mul(b, b)
            n >>= 1
        return result

    def elements(self):
        for vec in itertools.product(list(self.base.elements()), repeat=self.degree):
            yield FElem(self, tuple(vec))

    def elem_key(self, a) -> tuple:
        return tuple(k for c in a.val for k in self.base.elem_key(c))

    def __repr__(self):
        return f"ExtensionField({self.base!r}, deg {self.degree})"


def field_make(p: int, modulus=None):
    """Build GF(p) or GF(p^d) from a monic modulus over GF(p).

    Raises NotPrime / CharTooSmall / NotIrreducible per the obvious guards.
    A degree-1 modulus yields the prime field itself.
    """
    base = PrimeField(p)
    if modulus is None:
        return base
    mod = [base.elem(c) for c in modulus]
    while mod and not mod[-1]:
        mod.pop()
    if len(mod) - 1 == 1:
        return base
    return ExtensionField(base, mod)


def frobenius(a: FElem) -> FElem:
    return a.frobenius()


# ---------------------------------------------------------------------------
# polynomials over a finite field


class Poly:
    """Dense polynomial over a finite field, trailing zeros trimmed."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field, coeffs=()):
        cs = [field.elem(c) for c in coeffs]
        while cs and not cs[-1]:
            cs.pop()
        self.field = field
        self.coeffs = tuple(cs)

    @property
    def degree(self) -> int:
        """Degree, with deg 0 = -1 by convention."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        return (
            isinstance(other, Poly)
            and self.field is other.field
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((id(self.field), self.coeffs))

    def __add__(self, other):
        other = self._coerce(other)
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = out[i] + c
        return Poly(self.field, out)

    def __neg__(self):
        return Poly(self.field, [-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __mul__(self, other):
        other = self._coerce(other)
        if self.is_zero() or other.is_zero():
            return Poly(self.field, ())
        f = self.field
        out = [f.zero] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j, b in enumerate(other.coeffs):
                if b:
                    out[i + j] = out[i + j] + a * b
        return Poly(f, out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        result = Poly(self.field, [self.field.one])
        b = self
        while n:
            if n & 1:
                result = result * b
            b = b * b
            n >>= 1
        return result

    def _coerce(self, other):
        if isinstance(other, Poly):
            return other
        return Poly(self.field, [other])

    def divmod(self, other):
        if other.is_zero():
            raise DivisionByZero("polynomial division by zero")
        f = self.field
        rem = list(self.coeffs)
        db = other.degree
        lead_inv = f.inv(other.coeffs[-1])
        quot = [f.zero] * max(0, len(rem) - db)
        for k in range(len(rem) - 1, db - 1, -1):
            c = rem[k]
            if not c:
                continue
            factor = c * lead_inv
            quot[k - db] = factor
            for i, b in enumerate(other.coeffs):
                rem[k - db + i] = rem[k - db + i] - factor * b
        return Poly(f, quot), Poly(f, rem)

    def __mod__(self, other):
        return self.divmod(other)[1]

    def __floordiv__(self, other):
        return self.divmod(other)[0]

    def monic(self):
        if self.is_zero():
            return self
        inv = self.field.inv(self.coeffs[-1])
        return Poly(self.field, [c * inv for c in self.coeffs])

    def eval(self, x: FElem) -> FElem:
        acc = self.field.elem(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def valuation(self, pi: "Poly") -> int:
        """Multiplicity of the irreducible pi in self; zero poly -> None."""
        if self.is_zero():
            return None
        v = 0
        cur = self
        while True:
            q, r = cur.divmod(pi)
            if r.is_zero():
                v += 1
                cur = q
            else:
                return v

    def reverse(self, n: int) -> "Poly":
        """t^n * self(1/t); requires n >= degree."""
        if n < self.degree:
            raise ValueError("reversal length below degree")
        out = [self.field.zero] * (n + 1)
        for i, c in enumerate(self.coeffs):
            out[n - i] = c
        return Poly(self.field, out)

    def key(self) -> tuple:
        return tuple(self.field.elem_key(c) for c in self.coeffs)

    def __repr__(self):
        if self.is_zero():
            return "Poly(0)"
        parts = []
        for i, c in enumerate(self.coeffs):
            if c:
                parts.append(f"({c.val})*t^{i}")
        return "Poly(" + " + ".join(parts) + ")"


def poly_gcd(a: Poly, b: Poly) -> Poly:
    while not b.is_zero():
        a, b = b, a % b
    return a.monic() if not a.is_zero() else a


def poly_is_irreducible(f: Poly) -> bool:
    """Exhaustive trial division by monic polynomials of degree <= deg/2."""
    d = f.degree
    if d <= 0:
        return False
    if d == 1:
        return True
    field = f.field
    elems = list(field.elements())
    for e in range(1, d // 2 + 1):
        for tail in itertools.product(elems, repeat=e):
            g = Poly(field, list(tail) + [field.one])
            if (f % g).is_zero():
                return False
    return True


# ---------------------------------------------------------------------------
# places of P^1


@dataclass(frozen=True)
class Place:
    """Closed point of P^1 over GF(q): infinity or a monic irreducible pi(t)."""

    kind: str  # "finite" | "infinity"
    poly: Poly | None
    degree: int

    @property
    def is_infinity(self) -> bool:
        return self.kind == "infinity"

    def qv(self, q: int) -> int:
        return q**self.degree

    def sort_key(self) -> tuple:
        if self.is_infinity:
            return (0,)
        return (1, self.degree) + self.poly.key()

    def label(self) -> str:
        if self.is_infinity:
            return "oo"
        field = self.poly.field
        terms = []
        for i, c in enumerate(self.poly.coeffs):
            if not c:
                continue
            key = field.elem_key(c)
            v = key[0] if len(key) == 1 else key
            if i == 0:
                terms.append(f"{v}")
            else:
                power = "t" if i == 1 else f"t^{i}"
                terms.append(power if v == 1 else f"{v}*{power}")
        return "(" + " + ".join(reversed(terms)) + ")"


def place_infinity() -> Place:
    return Place("infinity", None, 1)


def place_finite(pi: Poly) -> Place:
    return Place("finite", pi.monic(), pi.degree)


def monic_polys(field, degree: int):
    """All monic polynomials of the given degree, in deterministic order."""
    elems = sorted(field.elements(), key=field.elem_key)
    for tail in itertools.product(elems, repeat=degree):
        yield Poly(field, list(tail) + [field.one])


def irreducibles_by_degree(field, d_max: int) -> dict[int, list[Poly]]:
    """Sieve of monic irreducibles of degree <= d_max over ``field``.

    Marks every monic polynomial divisible by a lower-degree irreducible;
    the survivors are irreducible.  Exhaustive, hence also the test oracle.
    """
    by_degree = {d: list(monic_polys(field, d)) for d in range(1, d_max + 1)}
    reducible: set[tuple] = set()
    out: dict[int, list[Poly]] = {}
    for d in range(1, d_max + 1):
        found = [f for f in by_degree[d] if f.key() not in reducible]
        out[d] = found
        # mark multiples; cofactors of degree < d carry a smaller irreducible
        # factor and were marked in an earlier pass
        for pi in found:
            for e in range(d, d_max - d + 1):
                for g in by_degree[e]:
                    reducible.add((pi * g).key())
    return out


def places_enumerate(field, d_max: int) -> list[Place]:
    """Infinity followed by all finite places of degree <= d_max, sorted."""
    if d_max < 1:
        raise ValueError("d_max must be >= 1")
    places = [place_infinity()]
    irr = irreducibles_by_degree(field, d_max)
    for d in range(1, d_max + 1):
        places.extend(place_finite(pi) for pi in irr[d])
    places.sort(key=lambda v: v.sort_key())
    return places


def moebius(n: int) -> int:
    result = 1
    d = 2
    while d * d <= n:
        if n % d == 0:
            n //= d
            if n % d == 0:
                return 0
            result = -result
        d += 1
    if n > 1:
        result = -result
    return result


def irreducible_count(q: int, d: int) -> int:
    """Necklace formula: number of monic irreducibles of degree d over GF(q)."""
    divs = [e for e in range(1, d + 1) if d % e == 0]
    return sum(moebius(e) * q ** (d // e) for e in divs) // d


def residue_field(field, place: Place):
    """k(v) as a field context, together with the reduction map on Poly(t)."""
    if place.is_infinity:
        raise ValueError("infinity has no finite-place residue construction here")
    if place.degree == 1:
        # pi = t - c; reduction is evaluation at c
        c = -place.poly.coeffs[0]
        return field, (lambda f: f.eval(c))
    kv = ExtensionField(field, [c for c in place.poly.coeffs], check_irreducible=False)

    def red(f: Poly) -> FElem:
        r = f % place.poly
        return kv.elem([c for c in r.coeffs])

    return kv, red


def find_irreducible(field, degree: int) -> Poly:
    """Smallest (in enumeration order) monic irreducible of given degree."""
    for f in monic_polys(field, degree):
        if poly_is_irreducible(f):
            return f
    raise NotIrreducible(f"no irreducible of degree {degree}?")
