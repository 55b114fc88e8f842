"""Global assembly: surface point counts, the degree-2 Frobenius polynomial
by two independent routes, the L-function of the generic-fiber Jacobian, and
the bad-fiber correction product.

The two routes to P2 are kept permanently and neither is treated as the
oracle: their coefficientwise agreement is the central factorization check.

Route one counts points.  With first and third Betti numbers zero (the
supported class), #X(GF(q^n)) = 1 + q^(2n) + s_n where s_n is the n-th power
sum of the inverse roots of P2; Newton's identities plus the weight-2
functional equation then pin P2.  Counting is exact: a vectorized
quadratic-character sum over the affine chart plus the component counts of
the bad fibers of the minimal regular model.

Route two multiplies (1 - qt)^2 * L(t) * Q(t) where L comes from the local
factors and Q is the product over bad places of the degree-2 local factors
divided by (1 - q_v t^{d_v}).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import (
    ClosedFormMismatch,
    InconsistentCounts,
    NoConsistentSign,
    NonPolynomial,
    NonPolynomialTail,
    PlaceBudgetExceeded,
    TruncationInsufficient,
)
from .exactalg import (
    RatFunc,
    RatPoly,
    SpecialValue,
    functional_equation_complete,
    leading_term,
    newton_from_power_sums,
)
from .ffield import (
    ExtensionField,
    PrimeField,
    Poly,
    find_irreducible,
    place_infinity,
    places_enumerate,
)
from .tatefiber import (
    FiberData,
    SurfaceInvariants,
    WeierstrassModel,
    fiber_point_count,
    tate_local,
)

DEFAULT_BUDGET = 25_000


@dataclass(frozen=True)
class CountVector:
    counts: tuple  # N_n for n = 1..n_max

    def __len__(self):
        return len(self.counts)


# ---------------------------------------------------------------------------
# coded arithmetic tables for GF(p^n), prime p


class _CodedField:
    """GF(p^n) on integer codes 0..p^n-1 (base-p digit encoding) with numpy
    log/exp multiplication tables and a quadratic-character table."""

    def __init__(self, p: int, n: int):
        self.p, self.n = p, n
        self.N = p**n
        base = PrimeField(p, _allow_small=True)
        red = None
        if n > 1:
            mod_poly = find_irreducible(base, n)
            red = [(-c).val for c in mod_poly.coeffs[:-1]]
        self.pvec = np.array([p**i for i in range(n)], dtype=np.int64)
        digits = np.zeros((self.N, n), dtype=np.int16)
        codes = np.arange(self.N)
        for i in range(n):
            digits[:, i] = (codes // p**i) % p
        self.digits = digits

        def mul_elem(a, b):
            # a, b digit tuples -> digit tuple
            raw = [0] * (2 * n - 1)
            for i in range(n):
                if a[i]:
                    for j in range(n):
                        raw[i + j] = (raw[i + j] + a[i] * b[j]) % p
            for k in range(2 * n - 2, n - 1, -1):
                c = raw[k]
                if c:
                    raw[k] = 0
                    for i in range(n):
                        raw[k - n + i] = (raw[k - n + i] + c * red[i]) % p
            return tuple(raw[:n])

        if n == 1:
            mul_elem = lambda a, b: ((a[0] * b[0]) % p,)

        def encode(d):
            return sum(int(d[i]) * p**i for i in range(n))

        # find a generator of the unit group
        order = self.N - 1
        primes = _prime_factors(order)
        gen = None
        for cand in range(2, self.N):
            d = tuple(int(digits[cand, i]) for i in range(n))
            if all(_pow_tuple(d, order // ell, mul_elem, n) != _one(n) for ell in primes):
                gen = d
                break
        assert gen is not None
        exp = np.zeros(order, dtype=np.int64)
        log = np.zeros(self.N, dtype=np.int64)
        cur = _one(n)
        for k in range(order):
            code = encode(cur)
            exp[k] = code
            log[code] = k
            cur = mul_elem(cur, gen)
        # zero gets a sentinel log so that products through the extended
        # exponent table come out zero with no masking
        zsent = 2 * order
        log[0] = zsent
        exp_ext = np.zeros(4 * order + 1, dtype=np.int64)
        ks = np.arange(2 * order)
        exp_ext[ks] = exp[ks % order]
        self.exp, self.log, self.exp_ext = exp, log, exp_ext
        chi = np.zeros(self.N, dtype=np.int8)
        nz = np.arange(1, self.N)
        chi[nz] = np.where(log[nz] % 2 == 0, 1, -1)
        self.chi = chi

    def mul(self, a, b):
        """Elementwise product of broadcastable code arrays."""
        return self.exp_ext[self.log[a] + self.log[b]]

    def add3(self, a, b, c):
        """Sum of three broadcastable code arrays."""
        d = (
            self.digits[a].astype(np.int32)
            + self.digits[b].astype(np.int32)
            + self.digits[c].astype(np.int32)
        ) % self.p
        return d @ self.pvec

    def add(self, a, b):
        d = (self.digits[a].astype(np.int32) + self.digits[b].astype(np.int32)) % self.p
        return d @ self.pvec

    def poly_roots(self, coeffs: list[int]):
        """Codes of the roots of a prime-field polynomial in this field."""
        pts = np.arange(self.N, dtype=np.int64)
        vals = self.eval_poly(coeffs, pts)
        return pts[vals == 0]

    def embed_base(self, value: int) -> int:
        return value % self.p

    def eval_poly(self, coeffs: list[int], points):
        """Evaluate a polynomial with prime-field coefficients (codes) at an
        array of points, by Horner."""
        acc = np.zeros_like(points)
        for c in reversed(coeffs):
            acc = self.mul(acc, points)
            if c:
                acc = self.add(acc, np.full_like(points, c))
        return acc


def _one(n):
    return (1,) + (0,) * (n - 1)


def _pow_tuple(a, k, mul, n):
    result = _one(n)
    b = a
    while k:
        if k & 1:
            result = mul(result, b)
        b = mul(b, b)
        k >>= 1
    return result


def _prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


# ---------------------------------------------------------------------------
# surface point counts


def surface_counts(
    model: WeierstrassModel,
    fibers: list[FiberData],
    n_max: int,
    budget: int = DEFAULT_BUDGET,
) -> CountVector:
    """#X(GF(q^n)) for n = 1..n_max over the minimal regular model.

    Good fibers are counted on the affine Weierstrass chart by a
    quadratic-character sum; each bad place of degree d | n is replaced by
    the component count of its minimal regular fiber over the degree n/d
    extension of its residue field."""
    if n_max < 0:
        raise ValueError("n_max must be >= 0")
    q = model.field.q
    if n_max and q**n_max > budget:
        raise PlaceBudgetExceeded(f"q^n_max = {q**n_max} exceeds budget {budget}")
    inf_fiber = next((f for f in fibers if f.place.is_infinity), None)
    if inf_fiber is None:
        inf_fiber = tate_local(model, place_infinity())
    bad_finite = [f for f in fibers if not f.place.is_infinity and not f.is_good]

    counts = []
    for n in range(1, n_max + 1):
        if model.field.degree == 1:
            good = _good_affine_count_coded(model, n)
        else:
            good = _good_affine_count_generic(model, n)
        total = good
        for f in bad_finite:
            if n % f.d_v == 0:
                total += f.d_v * fiber_point_count(f, n // f.d_v)
        total += fiber_point_count(inf_fiber, n)
        counts.append(total)
    return CountVector(tuple(counts))


_CODED_CACHE: dict = {}


def coded_field(p: int, n: int) -> _CodedField:
    key = (p, n)
    if key not in _CODED_CACHE:
        _CODED_CACHE[key] = _CodedField(p, n)
    return _CODED_CACHE[key]


def _poly_codes(poly: Poly, p: int) -> list[int]:
    return [c.val % p for c in poly.coeffs]


def _good_affine_count_coded(model: WeierstrassModel, n: int, block: int = 128) -> int:
    """Sum of projective fiber counts over affine t with Delta(t) != 0,
    via coded-field tables (prime base field)."""
    p = model.field.p
    cf = coded_field(p, n)
    N = cf.N
    tvals = np.arange(N, dtype=np.int64)
    A = cf.eval_poly(_poly_codes(model.a4_short, p), tvals)
    B = cf.eval_poly(_poly_codes(model.a6_short, p), tvals)
    delta = cf.eval_poly(_poly_codes(model.delta, p), tvals)
    goodmask = delta != 0
    n_good = int(goodmask.sum())
    total = n_good * (N + 1)
    logA = cf.log[A]
    chi_total = 0
    xs = np.arange(N, dtype=np.int64)
    x3 = cf.mul(cf.mul(xs, xs), xs)
    digB = cf.digits[B].astype(np.int16)[None, :, :]
    pvec16 = cf.pvec
    for start in range(0, N, block):
        xb = xs[start : start + block]
        x3b = x3[start : start + block]
        ax = cf.exp_ext[cf.log[xb][:, None] + logA[None, :]]
        d = cf.digits[ax].astype(np.int16)
        d += cf.digits[x3b].astype(np.int16)[:, None, :]
        d += digB
        d %= cf.p
        u = d.astype(np.int64) @ pvec16
        chi = cf.chi[u].astype(np.int64)
        chi *= goodmask[None, :]
        chi_total += int(chi.sum())
    return total + chi_total


def good_trace_coded(model: WeierstrassModel, place) -> int:
    """Frobenius trace at a good place over a prime base field, by a
    vectorized character sum in GF(p^d) (d = place degree).

    The residue field GF(q)[t]/(pi) is identified with the coded field by a
    root of pi found by evaluation."""
    p = model.field.p
    d = place.degree
    cf = coded_field(p, d)
    pi_codes = _poly_codes(place.poly, p)
    roots = cf.poly_roots(pi_codes)
    assert len(roots) == d
    rho = np.array([int(roots[0])], dtype=np.int64)

    def reduce_at(poly: Poly):
        rem = poly % place.poly
        acc = np.zeros(1, dtype=np.int64)
        for c in reversed(_poly_codes(rem, p)):
            acc = cf.mul(acc, rho)
            if c:
                acc = cf.add(acc, np.array([c], dtype=np.int64))
        return int(acc[0])

    a_code = reduce_at(model.a4_short)
    b_code = reduce_at(model.a6_short)
    xs = np.arange(cf.N, dtype=np.int64)
    x3 = cf.mul(cf.mul(xs, xs), xs)
    ax = cf.mul(xs, np.full_like(xs, a_code))
    u = cf.add3(x3, ax, np.full_like(xs, b_code))
    chi_sum = int(cf.chi[u].astype(np.int64).sum())
    return -chi_sum


def _good_affine_count_generic(model: WeierstrassModel, n: int) -> int:
    """Pure-Python fallback for extension base fields."""
    from .tatefiber import count_affine_points

    field = model.field
    if n == 1:
        big = field
        em = lambda c: c
    else:
        mod = find_irreducible(field, n)
        big = ExtensionField(field, [c for c in mod.coeffs], check_irreducible=False)
        em = lambda c: big.elem(c)

    def ev(poly: Poly, t):
        acc = big.elem(0)
        for c in reversed(poly.coeffs):
            acc = acc * t + em(c)
        return acc

    a4s, a6s = model.a4_short, model.a6_short
    total = 0
    sq_keys = {big.elem_key(x * x) for x in big.elements()}
    for t in big.elements():
        if not ev(model.delta, t):
            continue
        a, b = ev(a4s, t), ev(a6s, t)
        cnt = 1  # point at infinity of the fiber
        for x in big.elements():
            rhs = ((x * x) * x) + a * x + b
            if not rhs:
                cnt += 1
            elif big.elem_key(rhs) in sq_keys:
                cnt += 2
        total += cnt
    return total


# ---------------------------------------------------------------------------
# P2 from counts


def p2_from_counts(counts: CountVector, inv: SurfaceInvariants, q: int) -> RatPoly:
    """Reconstruct P2 from point counts via Newton identities and the
    weight-2 functional equation; every supplied count is re-verified."""
    b2 = inv.b2
    half = (b2 + 1) // 2
    if len(counts) < half:
        raise TruncationInsufficient(
            f"need counts to n = {half}, got {len(counts)}"
        )
    sums = [counts.counts[k - 1] - 1 - q ** (2 * k) for k in range(1, len(counts) + 1)]
    partial = newton_from_power_sums(sums[:half], half)
    candidates = []
    for sign in (1, -1):
        try:
            cand = functional_equation_complete(partial, b2, q, 2, sign)
        except NoConsistentSign:
            continue
        if not cand.is_integral():
            continue
        regenerated = cand.power_sums(len(sums))
        if all(Fraction(s) == r for s, r in zip(sums, regenerated)):
            candidates.append(cand)
    uniq = []
    for c in candidates:
        if c not in uniq:
            uniq.append(c)
    if len(uniq) == 1:
        return uniq[0]
    if len(uniq) > 1:
        # happens when the middle coefficient vanishes and no surplus count
        # separates the two self-dual completions
        raise NoConsistentSign(
            "functional-equation sign ambiguous; supply one more point count"
        )
    raise InconsistentCounts("no functional-equation sign reproduces the counts")


def lefschetz_counts(p2: RatPoly, q: int, n_max: int) -> list[int]:
    """Predicted #X(GF(q^n)) from a degree-2 polynomial: 1 + q^(2n) + s_n."""
    sums = p2.power_sums(n_max)
    return [int(1 + q ** (2 * k) + sums[k - 1]) for k in range(1, n_max + 1)]


# ---------------------------------------------------------------------------
# the L-function


def _series_inv(poly: RatPoly, order: int) -> list[Fraction]:
    """Power-series inverse of a polynomial with constant term 1."""
    assert poly.coeff(0) == 1
    out = [Fraction(1)] + [Fraction(0)] * order
    for k in range(1, order + 1):
        acc = Fraction(0)
        for j in range(1, min(k, poly.degree) + 1):
            acc += poly.coeff(j) * out[k - j]
        out[k] = -acc
    return out


def _series_mul(a: list[Fraction], b: list[Fraction], order: int) -> list[Fraction]:
    out = [Fraction(0)] * (order + 1)
    for i, x in enumerate(a[: order + 1]):
        if x:
            for j, y in enumerate(b[: order + 1 - i]):
                if y:
                    out[i + j] += x * y
    return out


def local_factor(model: WeierstrassModel, fibers: list[FiberData], place) -> RatPoly:
    """L_v as a polynomial in the local variable T = q_v^(-s)."""
    for f in fibers:
        if f.place == place:
            return f.l_factor
    # good place; use the vectorized trace when the residue field is large
    if model.field.degree == 1 and model.field.q**place.degree > 400 and not place.is_infinity:
        a_v = good_trace_coded(model, place)
        return RatPoly([1, -a_v, model.field.q**place.degree])
    return tate_local(model, place).l_factor


def l_function(
    model: WeierstrassModel,
    fibers: list[FiberData],
    inv: SurfaceInvariants,
    surplus: int = 2,
    place_order=None,
    use_functional_equation: bool = False,
) -> RatPoly:
    """The L-function of the generic-fiber Jacobian as a polynomial in t.

    Expands prod_v L_v(t^{d_v})^(-1) to degree deg_l + surplus; the surplus
    coefficients must vanish and everything must be an integer.  With
    ``use_functional_equation`` the series is only expanded to half the
    degree and completed by the weight-2 self-duality (the remaining
    ambiguity, if any, is resolved by the caller against point counts)."""
    deg_l = inv.deg_l
    if use_functional_equation:
        order = (deg_l + 1) // 2
        surplus = 0
    else:
        order = deg_l + surplus
    field = model.field
    if order == 0 and deg_l == 0:
        return RatPoly([1])
    places = place_order or places_enumerate(field, max(order, 1))
    series = [Fraction(1)] + [Fraction(0)] * order
    for v in places:
        if v.degree > order:
            continue
        lv = local_factor(model, fibers, v)
        spread = RatPoly(
            [lv.coeff(i // v.degree) if i % v.degree == 0 else 0 for i in range(lv.degree * v.degree + 1)]
        )
        series = _series_mul(series, _series_inv(spread, order), order)
    if use_functional_equation:
        partial = RatPoly(series)
        cand = functional_equation_complete(partial, deg_l, field.q, 2)
        if not cand.is_integral():
            raise NonPolynomialTail("completed L-polynomial is not integral")
        return cand
    for k in range(deg_l + 1, order + 1):
        if series[k] != 0:
            raise NonPolynomialTail(
                f"series coefficient t^{k} = {series[k]} does not vanish"
            )
    out = RatPoly(series[: deg_l + 1])
    if not out.is_integral():
        raise NonPolynomialTail("L-polynomial has non-integer coefficients")
    if out.degree != deg_l:
        raise TruncationInsufficient(
            f"L-polynomial degree {out.degree} below conductor prediction {deg_l}"
        )
    return out


# ---------------------------------------------------------------------------
# the bad-fiber correction product


def fiber_degree2_factor(f: FiberData) -> RatPoly:
    """The degree-2 local factor of a bad fiber in t: for each component
    orbit a factor (1 - q_v^{r} t^{r d_v})."""
    out = RatPoly([1])
    for r, _ in f.components:
        coeffs = [0] * (r * f.d_v + 1)
        coeffs[0] = 1
        coeffs[-1] = -(f.q_v**r)
        out = out * RatPoly(coeffs)
    return out


def bad_correction(fibers: list[FiberData], q: int):
    """(Q as a rational function of t, its leading value at t = 1/q, m).

    The leading value is computed two ways: from the rational function and
    from the closed form prod_v d_v^(m_v - 1) * prod r_i * (log q)^m; any
    mismatch is an internal error."""
    num = RatPoly([1])
    den = RatPoly([1])
    m = 0
    closed = 1
    for f in fibers:
        if f.is_good:
            continue
        num = num * fiber_degree2_factor(f)
        dcoeffs = [0] * (f.d_v + 1)
        dcoeffs[0] = 1
        dcoeffs[-1] = -f.q_v
        den = den * RatPoly(dcoeffs)
        m += f.m_v - 1
        closed *= f.d_v ** (f.m_v - 1) * f.r_product()
    func = RatFunc(num, den)
    lead = leading_term(func, q)
    closed_sv = SpecialValue(1, closed, 1, m, m)
    if lead != closed_sv:
        raise ClosedFormMismatch(
            f"leading term {lead!r} differs from closed form {closed_sv!r}"
        )
    return func, lead, m


def p2_from_product(
    l_poly: RatPoly,
    correction: RatFunc,
    inv: SurfaceInvariants,
    q: int,
    b_factors: tuple[RatPoly, RatPoly] | None = None,
) -> RatPoly:
    """P2 as (1 - qt)^2 * L * Q, which must simplify to an integral
    polynomial of degree b2.

    ``b_factors`` is the extension hook for a nonzero base-identity-component
    contribution (two degree-1-cohomology polynomials); the supported surface
    class forces both to 1 and no catalog model exercises it."""
    b1, b2f = b_factors if b_factors is not None else (RatPoly([1]), RatPoly([1]))
    num = RatPoly([1, -q]) * RatPoly([1, -q]) * b1 * b2f * l_poly * correction.num
    func = RatFunc(num, correction.den)
    if not func.is_polynomial():
        raise NonPolynomial("product fails to clear the denominator")
    poly = func.num
    if poly.degree != inv.b2 or not poly.is_integral():
        raise NonPolynomial(
            f"product has degree {poly.degree}, expected {inv.b2}, integral={poly.is_integral()}"
        )
    return poly
