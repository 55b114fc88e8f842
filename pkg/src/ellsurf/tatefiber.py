"""Tate's algorithm at places of P^1 and the resulting fiber data.

Everything here assumes residue characteristic >= 5, so a Weierstrass model
can be completed to y^2 = x^3 + A2 x^2 + A4 x + A6 and the reduction type is
read off the valuations of (c4, c6, Delta) of a local minimal model, with a
short translation cascade for the starred types.  Splitting questions (split
vs non-split multiplicative fibers, rationality of extra components) are
decided by explicit square and root tests in the exact residue field, never
numerically.

The surface itself is never built as a scheme: its class in every identity
checked downstream is determined by the per-place data assembled here
(Kodaira type, component orbits, Tamagawa number, conductor exponent, local
Euler number, local L-factor).
"""

from __future__ import annotations

import random as _random
from dataclasses import dataclass

from .errors import (
    CharTooSmall,
    GoodFiber,
    EulerNotTwelveDivisible,
    NotMinimalizable,
    UnsupportedModel,
)
from .exactalg import RatPoly
from .ffield import (
    Place,
    Poly,
    place_finite,
    place_infinity,
    poly_gcd,
    residue_field,
)
from .lattice import Mat, PairedGroup, FgGroup, discriminant

INF = 10**9  # valuation of the zero polynomial


# ---------------------------------------------------------------------------
# Weierstrass models


class WeierstrassModel:
    """y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6 with a_i in GF(q)[t]."""

    def __init__(self, field, a1, a2, a3, a4, a6):
        if field.char < 5:
            raise CharTooSmall("models need residue characteristic >= 5")
        self.field = field
        mk = lambda c: c if isinstance(c, Poly) else Poly(field, c)
        self.a1, self.a2, self.a3 = mk(a1), mk(a2), mk(a3)
        self.a4, self.a6 = mk(a4), mk(a6)
        half = field.one / 2
        quarter = half * half
        # completed square: y -> y + (a1 x + a3)/2
        b2 = self.a1 * self.a1 + 4 * self.a2
        b4 = 2 * self.a4 + self.a1 * self.a3
        b6 = self.a3 * self.a3 + 4 * self.a6
        self.A2 = Poly(field, [c * quarter for c in b2.coeffs])
        self.A4 = Poly(field, [c * half for c in b4.coeffs])
        self.A6 = Poly(field, [c * quarter for c in b6.coeffs])
        self.c4 = 16 * self.A2 * self.A2 - 48 * self.A4
        self.c6 = -64 * self.A2 * self.A2 * self.A2 + 288 * self.A2 * self.A4 - 864 * self.A6
        self.delta = (
            -64 * (self.A2 ** 2) * (self.A2 * self.A6)
            + 16 * (self.A2 * self.A4) ** 2
            - 64 * self.A4 ** 3
            - 432 * self.A6 * self.A6
            + 288 * self.A2 * self.A4 * self.A6
        )
        if (self.c4 ** 3 - self.c6 * self.c6) != 1728 * self.delta:
            raise AssertionError("c4^3 - c6^2 != 1728 Delta (internal)")
        if self.delta.is_zero():
            raise UnsupportedModel("discriminant vanishes identically")
        # global short form y^2 = x^3 + a4s x + a6s (x shifted by -A2/3)
        third = field.inv(field.elem(3))
        A2sq = self.A2 * self.A2
        self.a4_short = self.A4 - Poly(field, [c * third for c in A2sq.coeffs])
        self.a6_short = (
            self.A6
            - Poly(field, [c * third for c in (self.A2 * self.A4).coeffs])
            + Poly(
                field,
                [c * (2 * (third * third * third)) for c in (A2sq * self.A2).coeffs],
            )
        )
        short_delta = -16 * (4 * self.a4_short ** 3 + 27 * self.a6_short * self.a6_short)
        if short_delta != self.delta:
            raise AssertionError("short-form discriminant mismatch (internal)")

    def coeff_list(self):
        return [self.a1, self.a2, self.a3, self.a4, self.a6]

    def __repr__(self):
        return f"WeierstrassModel(q={self.field.q})"


def model_at_infinity(model: WeierstrassModel) -> WeierstrassModel:
    """Integral model in the coordinate s = 1/t whose place s = 0 is the
    place at infinity.  Uses the smallest scaling (x,y) -> (u^2 x, u^3 y)
    with u = s^k clearing all denominators; minimality at s = 0 is not
    required (the local analysis minimalizes)."""
    weights = [1, 2, 3, 4, 6]
    k = 0
    for a, w in zip(model.coeff_list(), weights):
        if not a.is_zero():
            need = -(-a.degree // w)  # ceil
            k = max(k, need)
    new = [a.reverse(w * k) if not a.is_zero() else a for a, w in zip(model.coeff_list(), weights)]
    return WeierstrassModel(model.field, *new)


# ---------------------------------------------------------------------------
# Kodaira-type tables


_NAMED = {"II", "III", "IV", "II*", "III*", "IV*"}


def parse_kodaira(kod: str):
    """("named", symbol) | ("In", n) | ("In*", n)."""
    if kod in _NAMED:
        return ("named", kod)
    if kod.startswith("I") and kod.endswith("*") and kod[1:-1].isdigit():
        return ("In*", int(kod[1:-1]))
    if kod.startswith("I") and kod[1:].isdigit():
        return ("In", int(kod[1:]))
    raise ValueError(f"unknown Kodaira symbol {kod!r}")


def kodaira_euler(kod: str) -> int:
    kind, v = parse_kodaira(kod)
    if kind == "In":
        return v
    if kind == "In*":
        return 6 + v
    return {"II": 2, "III": 3, "IV": 4, "IV*": 8, "III*": 9, "II*": 10}[v]


def kodaira_conductor(kod: str) -> int:
    if kod == "I0":
        return 0
    return 1 if is_multiplicative(kod) else 2


def is_multiplicative(kod: str) -> bool:
    kind, v = parse_kodaira(kod)
    return kind == "In" and v >= 1


def component_graph(kod: str, splitting):
    """Geometric special fiber as (multiplicities, weighted edges, frobenius
    permutation); node 0 is the component the zero section meets.

    Edge weights are geometric intersection numbers (2 for the tangency of
    type III and the double contact of I2)."""
    kind, val = parse_kodaira(kod)
    if kod in ("I0", "I1", "II"):
        return [1], [], [0]
    if kind == "In":
        n = val
        mult = [1] * n
        if n == 2:
            edges = [(0, 1, 2)]
        else:
            edges = [(i, (i + 1) % n, 1) for i in range(n)]
        if splitting == "split":
            perm = list(range(n))
        else:
            perm = [(-i) % n for i in range(n)]
        return mult, edges, perm
    if kod == "III":
        return [1, 1], [(0, 1, 2)], [0, 1]
    if kod == "IV":
        edges = [(0, 1, 1), (0, 2, 1), (1, 2, 1)]
        perm = [0, 1, 2] if splitting == "split" else [0, 2, 1]
        return [1, 1, 1], edges, perm
    if kod == "I0*":
        mult = [1, 2, 1, 1, 1]
        edges = [(0, 1, 1), (1, 2, 1), (1, 3, 1), (1, 4, 1)]
        if splitting == 3:
            perm = [0, 1, 2, 3, 4]
        elif splitting == 1:
            perm = [0, 1, 2, 4, 3]
        else:
            perm = [0, 1, 3, 4, 2]
        return mult, edges, perm
    if kind == "In*":
        m = val
        # 0,1 near leaves; 2..2+m the chain of doubles; 3+m, 4+m far leaves
        mult = [1, 1] + [2] * (m + 1) + [1, 1]
        edges = [(0, 2, 1), (1, 2, 1)]
        edges += [(2 + i, 3 + i, 1) for i in range(m)]
        edges += [(2 + m, 3 + m, 1), (2 + m, 4 + m, 1)]
        perm = list(range(m + 5))
        if splitting != "split":
            perm[3 + m], perm[4 + m] = perm[4 + m], perm[3 + m]
        return mult, edges, perm
    if kod == "IV*":
        # 0 leaf - 1 double - 2 center(3); arms (3 double, 5 leaf), (4, 6)
        mult = [1, 2, 3, 2, 2, 1, 1]
        edges = [(0, 1, 1), (1, 2, 1), (2, 3, 1), (2, 4, 1), (3, 5, 1), (4, 6, 1)]
        perm = list(range(7))
        if splitting != "split":
            perm = [0, 1, 2, 4, 3, 6, 5]
        return mult, edges, perm
    if kod == "III*":
        # chain 0(1)-1(2)-2(3)-3(4)-4(3)-5(2)-6(1), branch 7(2) at node 3
        mult = [1, 2, 3, 4, 3, 2, 1, 2]
        edges = [(0, 1, 1), (1, 2, 1), (2, 3, 1), (3, 4, 1), (4, 5, 1), (5, 6, 1), (3, 7, 1)]
        return mult, edges, list(range(8))
    if kod == "II*":
        # chain 0(1)-1(2)-2(3)-3(4)-4(5)-5(6)-6(4)-7(2), branch 8(3) at node 5
        mult = [1, 2, 3, 4, 5, 6, 4, 2, 3]
        edges = [(0, 1, 1), (1, 2, 1), (2, 3, 1), (3, 4, 1), (4, 5, 1), (5, 6, 1), (6, 7, 1), (5, 8, 1)]
        return mult, edges, list(range(9))
    raise ValueError(f"unknown Kodaira symbol {kod!r}")


def _orbits(perm: list[int]) -> list[list[int]]:
    seen = [False] * len(perm)
    orbits = []
    for start in range(len(perm)):
        if seen[start]:
            continue
        orb = []
        i = start
        while not seen[i]:
            seen[i] = True
            orb.append(i)
            i = perm[i]
        orbits.append(sorted(orb))
    return orbits


def component_data(kod: str, splitting):
    """(r_i, multiplicity) per residue-field component, identity first."""
    mult, _, perm = component_graph(kod, splitting)
    out = []
    for orb in _orbits(perm):
        out.append((len(orb), mult[orb[0]]))
    return tuple(out)


def tamagawa_number(kod: str, splitting) -> int:
    kind, val = parse_kodaira(kod)
    if kod == "I0":
        return 1
    if kind == "In":
        n = val
        if n == 1:
            return 1
        if splitting == "split":
            return n
        return 2 if n % 2 == 0 else 1
    if kod in ("II", "II*"):
        return 1
    if kod in ("III", "III*"):
        return 2
    if kod in ("IV", "IV*"):
        return 3 if splitting == "split" else 1
    if kod == "I0*":
        return 1 + splitting  # 0, 1 or 3 rational P(T)-roots
    # I_m*, m >= 1: by rationality of the far leaf pair
    return 4 if splitting == "split" else 2


def geometric_gram(kod: str, splitting):
    """Gram matrix of all geometric components (diag -2, adjacency weights)
    together with multiplicities and the Frobenius permutation."""
    mult, edges, perm = component_graph(kod, splitting)
    g = len(mult)
    M = [[0] * g for _ in range(g)]
    for i in range(g):
        M[i][i] = -2
    for a, b, w in edges:
        M[a][b] += w
        M[b][a] += w
    return M, mult, perm


# ---------------------------------------------------------------------------
# fiber data


@dataclass(frozen=True)
class FiberData:
    place: Place
    kodaira: str
    splitting: object  # see component_graph
    m_v: int
    components: tuple  # ((r_i, multiplicity), ...), identity orbit first
    c_v: int
    f_v: int
    e_v: int
    a_v: int | None
    l_factor: RatPoly  # in the local variable T = q_v^(-s)
    d_v: int
    q_v: int

    @property
    def is_good(self) -> bool:
        return self.kodaira == "I0"

    def geometric_component_count(self) -> int:
        return sum(r for r, _ in self.components)

    def r_product(self) -> int:
        prod = 1
        for r, _ in self.components:
            prod *= r
        return prod


def make_fiber(place: Place, q: int, kod: str, splitting, a_v: int | None = None) -> FiberData:
    """Assemble FiberData from the type tables (used by the local analysis
    and for synthetic fiber sets in identity tests)."""
    q_v = q**place.degree
    comps = component_data(kod, splitting)
    if kod == "I0":
        if a_v is None:
            raise ValueError("good fibers need a Frobenius trace")
        l_factor = RatPoly([1, -a_v, q_v])
    elif is_multiplicative(kod):
        l_factor = RatPoly([1, -1]) if splitting == "split" else RatPoly([1, 1])
    else:
        l_factor = RatPoly([1])
    return FiberData(
        place=place,
        kodaira=kod,
        splitting=splitting,
        m_v=len(comps),
        components=comps,
        c_v=tamagawa_number(kod, splitting),
        f_v=kodaira_conductor(kod),
        e_v=kodaira_euler(kod),
        a_v=a_v,
        l_factor=l_factor,
        d_v=place.degree,
        q_v=q_v,
    )


def synthetic_fiber(q: int, degree: int, kod: str, splitting=None, field=None) -> FiberData:
    """A FiberData at a fabricated place, for identity tests that need a
    specific Kodaira type without a witnessing model."""
    from .ffield import PrimeField, find_irreducible

    field = field or PrimeField(q)
    if degree == 1:
        place = place_finite(Poly(field, [0, 1]))
    else:
        place = place_finite(find_irreducible(field, degree))
    return make_fiber(place, q, kod, splitting)


# ---------------------------------------------------------------------------
# point counting in residue fields


def count_affine_points(kv, a, b) -> int:
    """#{(x,y) in kv^2 : y^2 = x^3 + a x + b} by quadratic-character lookup."""
    sq_keys = {kv.elem_key(x * x) for x in kv.elements()}
    count = 0
    for x in kv.elements():
        rhs = ((x * x) * x) + a * x + b
        if not rhs:
            count += 1
        elif kv.elem_key(rhs) in sq_keys:
            count += 2
    return count


def curve_point_count(kv, a, b) -> int:
    """Projective point count of y^2 = x^3 + a x + b over kv."""
    return count_affine_points(kv, a, b) + 1


# ---------------------------------------------------------------------------
# the local algorithm


def _val(poly: Poly, pi: Poly) -> int:
    v = poly.valuation(pi)
    return INF if v is None else v


def _shift_red(poly: Poly, pi: Poly, k: int, red):
    """Reduce poly / pi^k at pi (zero if the valuation exceeds k)."""
    for _ in range(k):
        q, r = poly.divmod(pi)
        if not r.is_zero():
            raise AssertionError("inexact shift in local analysis")
        poly = q
    return red(poly)


def _translate_x(A2: Poly, A4: Poly, A6: Poly, s: Poly):
    """Coefficients after x -> x + s."""
    A2n = A2 + 3 * s
    A4n = A4 + 2 * A2 * s + 3 * s * s
    A6n = A6 + A4 * s + A2 * s * s + s * s * s
    return A2n, A4n, A6n


def tate_local(model: WeierstrassModel, place: Place) -> FiberData:
    """Kodaira type and local data of the minimal regular model at a place."""
    if place.is_infinity:
        import dataclasses

        local = model_at_infinity(model)
        pi = Poly(local.field, [0, 1])
        fd = _tate_at_prime(local, pi, place_finite(pi))
        return dataclasses.replace(fd, place=place_infinity())
    return _tate_at_prime(model, place.poly, place)


def _tate_at_prime(model: WeierstrassModel, pi: Poly, place: Place) -> FiberData:
    field = model.field
    q = field.q
    kv, red = residue_field(field, place)

    def lift(e) -> Poly:
        if kv is field:
            return Poly(field, [e])
        return Poly(field, list(e.val))

    v4 = _val(model.c4, pi)
    v6 = _val(model.c6, pi)
    vD = _val(model.delta, pi)
    n = min(v4 // 4, v6 // 6, vD // 12)
    if n < 0:
        raise NotMinimalizable("negative scaling exponent")

    inv48 = field.inv(field.elem(48))
    inv864 = field.inv(field.elem(864))
    c4m = _exact_div(model.c4, pi, 4 * n)
    c6m = _exact_div(model.c6, pi, 6 * n)
    a = Poly(field, [-(c * inv48) for c in c4m.coeffs])
    b = Poly(field, [-(c * inv864) for c in c6m.coeffs])
    deltam = _exact_div(model.delta, pi, 12 * n)
    if 1728 * deltam != c4m ** 3 - c6m * c6m:
        raise AssertionError("minimalization broke the discriminant relation")

    vD = _val(deltam, pi)
    va = _val(a, pi)
    vb = _val(b, pi)

    if vD == 0:
        abar, bbar = red(a), red(b)
        count = curve_point_count(kv, abar, bbar)
        a_v = kv.q + 1 - count
        return make_fiber(place, q, "I0", None, a_v=a_v)

    if va == 0:
        # multiplicative: node at x0 with tangent cone y^2 = 3 x0 (x - x0)^2
        abar, bbar = red(a), red(b)
        x0 = -(3 * bbar) / (2 * abar)
        split = (3 * x0).is_square()
        kod = f"I{vD}"
        fd = make_fiber(place, q, kod, "split" if split else "nonsplit")
        assert fd.e_v == vD
        return fd

    # additive: the singular point of y^2 = x^3 + a x + b sits at the origin
    if vb == 1:
        fd = make_fiber(place, q, "II", None)
    elif va == 1:
        fd = make_fiber(place, q, "III", None)
    elif vb == 2:
        split = _shift_red(b, pi, 2, red).is_square()
        fd = make_fiber(place, q, "IV", "split" if split else "nonsplit")
    else:
        # P(T) = T^3 + (a/pi^2) T + (b/pi^3) over the residue field
        alpha = _shift_red(a, pi, 2, red)
        beta = _shift_red(b, pi, 3, red)
        P = [beta, alpha, kv.elem(0), kv.elem(1)]  # cubic, monic
        roots = _cubic_rational_roots(kv, P)
        disc = -4 * alpha * alpha * alpha - 27 * beta * beta
        if disc:
            fd = make_fiber(place, q, "I0*", len(roots))
        elif alpha or beta:
            theta = _double_root(kv, alpha, beta)
            A2l, A4l, A6l = _translate_x(Poly(field, []), a, b, lift(theta) * pi)
            m, far_split = _istar_loop(field, pi, kv, red, lift, A2l, A4l, A6l, vD)
            fd = make_fiber(place, q, f"I{m}*", "split" if far_split else "nonsplit")
        else:
            # triple root at the origin: v(a) >= 3, v(b) >= 4
            if vb == 4:
                split = _shift_red(b, pi, 4, red).is_square()
                fd = make_fiber(place, q, "IV*", "split" if split else "nonsplit")
            elif va == 3:
                fd = make_fiber(place, q, "III*", None)
            elif vb == 5:
                fd = make_fiber(place, q, "II*", None)
            else:
                raise NotMinimalizable("all valuations reducible: model not minimal")
    if fd.e_v != vD:
        raise AssertionError(
            f"Euler number {fd.e_v} of {fd.kodaira} differs from v(Delta) = {vD}"
        )
    return fd


def _exact_div(poly: Poly, pi: Poly, k: int) -> Poly:
    for _ in range(k):
        q, r = poly.divmod(pi)
        if not r.is_zero():
            raise NotMinimalizable("claimed valuation not attained")
        poly = q
    return poly


def _cubic_rational_roots(kv, P) -> list:
    """Distinct roots in kv of a monic cubic given by coefficient list."""
    roots = []
    for x in kv.elements():
        acc = kv.elem(0)
        for c in reversed(P):
            acc = acc * x + c
        if not acc:
            roots.append(x)
    return roots


def _double_root(kv, alpha, beta):
    """The (rational) double root of T^3 + alpha T + beta with distinct-root
    discriminant zero but (alpha, beta) != 0: theta = -3 beta / (2 alpha)."""
    # gcd(P, P') is linear: P' = 3T^2 + alpha; elimination gives theta
    theta = -(3 * beta) / (2 * alpha)
    acc = ((theta * theta) * theta) + alpha * theta + beta
    if acc:
        raise AssertionError("double-root formula failed")
    return theta


def _istar_loop(field, pi, kv, red, lift, A2, A4, A6, vD):
    """Tate's subprocedure for I_m* (m >= 1): returns (m, far pair split?).

    Entering state: v(A2) = 1, v(A4) >= 3, v(A6) >= 4.  Odd stages test a
    quadratic in y, even stages a quadratic in x, translating through double
    roots until the quadratic separates."""
    m = 1
    while True:
        if m % 2 == 1:
            c = _shift_red(A6, pi, m + 3, red)
            if c:
                return m, c.is_square()
        else:
            a2_1 = _shift_red(A2, pi, 1, red)
            a4_c = _shift_red(A4, pi, (m + 4) // 2, red)
            a6_c = _shift_red(A6, pi, m + 3, red)
            disc = a4_c * a4_c - 4 * a2_1 * a6_c
            if disc:
                return m, disc.is_square()
            r = -a4_c / (2 * a2_1)
            A2, A4, A6 = _translate_x(A2, A4, A6, lift(r) * pi ** ((m + 2) // 2))
        m += 1
        if m > vD - 6:
            raise NotMinimalizable("starred-type loop exceeded v(Delta) - 6")


# ---------------------------------------------------------------------------
# global invariants


@dataclass(frozen=True)
class SurfaceInvariants:
    e: int
    chi: int
    b2: int
    deg_cond: int
    deg_l: int
    m: int
    alpha: int
    chi_lie: int
    # forced by the supported class (section exists, base P^1, nonisotrivial)
    b_order: int = 1
    dim_b: int = 0
    dim_a: int = 0
    delta_index: int = 1
    alpha_index: int = 1
    delta_v: int = 1
    delta_v_prime: int = 1


def distinct_irreducible_factors(f: Poly) -> list[Poly]:
    """Monic irreducible factors of f, each once, deterministic order."""
    field = f.field
    out: dict[tuple, Poly] = {}
    stack = [f.monic()]
    while stack:
        g = stack.pop()
        if g.degree <= 0:
            continue
        gp = _derivative(g)
        if gp.is_zero():
            stack.append(_pth_root(g))
            continue
        r = poly_gcd(g, gp)
        v = (g // r).monic()
        if v.degree > 0:
            for h in _factor_squarefree(v):
                out[h.key()] = h
        if r.degree > 0:
            stack.append(r)
    return sorted(out.values(), key=lambda h: (h.degree,) + h.key())


def _derivative(f: Poly) -> Poly:
    field = f.field
    return Poly(field, [i * c for i, c in enumerate(f.coeffs)][1:])


def _pth_root(f: Poly) -> Poly:
    """For f = h(t^p), return h (coefficientwise p-th roots)."""
    field = f.field
    p = field.char
    coeffs = []
    for i, c in enumerate(f.coeffs):
        if i % p == 0:
            coeffs.append(c ** (field.q // p) if field.q > p else c)
        elif c:
            raise AssertionError("not a p-th power polynomial")
    return Poly(field, coeffs)


def _factor_squarefree(f: Poly) -> list[Poly]:
    """Distinct-degree then (seeded) equal-degree splitting of a squarefree
    monic polynomial."""
    field = f.field
    out = []
    d = 1
    rest = f
    t = Poly(field, [0, 1])
    while rest.degree > 0 and d <= rest.degree:
        if 2 * d > rest.degree:
            out.append(rest.monic())
            break
        xq = _pow_mod(t, field.q**d, rest)
        g = poly_gcd(xq - t, rest)
        if g.degree > 0:
            out.extend(_equal_degree_split(g, d))
            rest = (rest // g).monic()
        d += 1
    return out


def _pow_mod(base: Poly, n: int, mod: Poly) -> Poly:
    result = Poly(base.field, [1])
    b = base % mod
    while n:
        if n & 1:
            result = (result * b) % mod
        b = (b * b) % mod
        n >>= 1
    return result


def _equal_degree_split(f: Poly, d: int) -> list[Poly]:
    """Cantor-Zassenhaus with a seed derived from the input (bit-stable)."""
    field = f.field
    if f.degree == d:
        return [f.monic()]
    if d == 1:
        roots = [x for x in field.elements() if not f.eval(x)]
        return sorted(
            (Poly(field, [-x, field.one]) for x in roots),
            key=lambda h: h.key(),
        )
    rng = _random.Random(hash((f.key(), d)) & 0xFFFFFFFF)
    elems = sorted(field.elements(), key=field.elem_key)
    while True:
        u = Poly(field, [elems[rng.randrange(len(elems))] for _ in range(f.degree)])
        if u.degree < 1:
            continue
        g = poly_gcd(u, f)
        if 0 < g.degree < f.degree:
            return sorted(
                _equal_degree_split(g, d) + _equal_degree_split((f // g).monic(), d),
                key=lambda h: (h.degree,) + h.key(),
            )
        w = _pow_mod(u, (field.q**d - 1) // 2, f) - Poly(field, [1])
        g = poly_gcd(w, f)
        if 0 < g.degree < f.degree:
            return sorted(
                _equal_degree_split(g, d) + _equal_degree_split((f // g).monic(), d),
                key=lambda h: (h.degree,) + h.key(),
            )


def bad_fibers(model: WeierstrassModel, threads: int = 0) -> list[FiberData]:
    """Fiber data at every place of bad reduction (finite factors of Delta
    plus infinity), sorted in the canonical place order."""
    places = [place_finite(piq) for piq in distinct_irreducible_factors(model.delta)]
    places.append(place_infinity())
    if threads and threads > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(lambda v: tate_local(model, v), places))
    else:
        results = [tate_local(model, v) for v in places]
    fibers = [fd for fd in results if not fd.is_good]
    fibers.sort(key=lambda fd: fd.place.sort_key())
    return fibers


def global_invariants(model: WeierstrassModel, fibers: list[FiberData] | None = None):
    """(SurfaceInvariants, bad fibers).  Rejects fibrations without bad
    fibers (isotrivial families fall outside the supported class)."""
    if fibers is None:
        fibers = bad_fibers(model)
    if not fibers:
        raise UnsupportedModel("no bad fibers: isotrivial family")
    e = sum(f.e_v * f.d_v for f in fibers)
    if e % 12:
        raise EulerNotTwelveDivisible(f"Euler number {e} not divisible by 12")
    chi = e // 12
    deg_cond = sum(f.f_v * f.d_v for f in fibers)
    deg_l = deg_cond - 4
    if deg_l < 0:
        raise UnsupportedModel(f"conductor degree {deg_cond} below 4")
    m = sum(f.m_v - 1 for f in fibers)
    alpha = chi - 1
    inv = SurfaceInvariants(
        e=e,
        chi=chi,
        b2=e - 2,
        deg_cond=deg_cond,
        deg_l=deg_l,
        m=m,
        alpha=alpha,
        chi_lie=-alpha,
    )
    return inv, fibers


# ---------------------------------------------------------------------------
# component lattices and fiber point counts


def component_lattice(f: FiberData) -> PairedGroup:
    """Non-identity component orbits with the residue-field intersection
    pairing (the fiber-cycle quotient is taken by dropping the identity
    orbit, which the cycle expresses integrally in the others)."""
    if f.is_good:
        raise GoodFiber("good fibers have trivial component lattice")
    M, mult, perm = geometric_gram(f.kodaira, f.splitting)
    orbits = _orbits(perm)
    assert orbits[0] == [0]
    rest = orbits[1:]
    gram = [
        [sum(M[i][j] for i in oa for j in ob) for ob in rest]
        for oa in rest
    ]
    return PairedGroup(FgGroup(len(rest)), Mat(gram, len(rest)), log_grade=0)


def component_lattice_base_gram(f: FiberData) -> Mat:
    """Orbit Gram scaled to base-field intersection numbers (factor d_v)."""
    P = component_lattice(f)
    return Mat([[f.d_v * x for x in row] for row in P.pairing.rows], P.pairing.n)


def arithmetic_component_discriminant(f: FiberData):
    """Discriminant of the height pairing on the component lattice, an
    element of Q * (log q)^(m_v - 1); the place degree enters through
    log q_v = d_v log q."""
    P = component_lattice(f)
    scaled = PairedGroup(P.group, component_lattice_base_gram(f), log_grade=1)
    return discriminant(scaled)


def component_group_fixed_order(f: FiberData) -> int:
    """Order of the Frobenius-fixed subgroup of the geometric component
    group, computed from the dual graph: an independent route to c_v."""
    from .lattice import lattice_index, preimage_kernel

    if f.is_good:
        return 1
    M, mult, perm = geometric_gram(f.kodaira, f.splitting)
    g = len(mult) - 1
    if g == 0:
        return 1
    # geometric non-identity Gram and the induced permutation
    idx = [i for i in range(len(mult)) if i != 0]
    pos = {node: k for k, node in enumerate(idx)}
    gram = Mat([[M[i][j] for j in idx] for i in idx], g)
    pmat = Mat.zero(g, g)
    for node in idx:
        image = perm[node]
        assert image != 0
        pmat.rows[pos[image]][pos[node]] = 1
    shifted = Mat([[pmat.rows[i][j] - (1 if i == j else 0) for j in range(g)] for i in range(g)], g)
    K = preimage_kernel(shifted, gram)
    iK = lattice_index(K)
    iG = lattice_index(gram)
    assert iK is not None and iG is not None and iG % iK == 0
    return iG // iK


def fiber_powsum(f: FiberData, m: int) -> int:
    """m-th power sum of the inverse roots of the local L-factor."""
    cs = f.l_factor.coeffs
    if len(cs) == 1:
        return 0
    if len(cs) == 2:
        return int((-cs[1]) ** m)
    a, qv = int(-cs[1]), int(cs[2])
    s_prev, s_cur = 2, a
    if m == 0:
        return 2
    for _ in range(m - 1):
        s_prev, s_cur = s_cur, a * s_cur - qv * s_prev
    return s_cur


def fiber_point_count(f: FiberData, m: int) -> int:
    """Points of the minimal-regular-model fiber over the degree-m extension
    of the residue field."""
    if m < 1:
        raise ValueError("extension degree must be >= 1")
    total = 1 - fiber_powsum(f, m)
    qm = f.q_v**m
    for r, _ in f.components:
        if m % r == 0:
            total += r * qm
    return total
