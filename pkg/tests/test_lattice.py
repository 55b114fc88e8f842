import random
from fractions import Fraction

import pytest

from ellsurf.errors import DegeneratePairing, NontrivialMW, NotExact, NotIsotropic
from ellsurf.lattice import (
    FgGroup,
    GroupComplex,
    Mat,
    PairedGroup,
    discriminant,
    free_paired,
    kernel_basis,
    mat_det_fraction,
    mat_det_int,
    mat_inverse_unimodular,
    mixed_discriminant,
    ns_lattice_build,
    orthogonal_split_check,
    preimage_kernel,
    snf,
    subgroup_quotient,
    symmetric_signature,
    two_term,
    yun_split,
    z_invariant,
    z_triangle_check,
)

# ---------------------------------------------------------------------------
# oracles


def random_unimodular(rng, n, steps=8):
    U = Mat.identity(n)
    for _ in range(steps):
        i, j = rng.randrange(n), rng.randrange(n)
        if i == j:
            continue
        c = rng.randint(-2, 2)
        for r in range(n):
            U.rows[r][j] += c * U.rows[r][i]
    if rng.random() < 0.5 and n > 1:
        U.rows[0], U.rows[1] = U.rows[1], U.rows[0]
    return U


def cokernel_order_by_enumeration(A):
    """|Z^n / im(A)| for nonsingular A, by enumerating cosets.

    Coset keys are the fractional parts of A^(-1) v, which is SNF-free and
    hence independent of the code under test.
    """
    n = A.m
    det = abs(mat_det_int(A))
    assert det != 0
    ainv_cols = []
    for j in range(n):
        # solve A x = e_j by fraction Gauss
        a = [[Fraction(A.rows[r][c]) for c in range(n)] + [Fraction(int(r == j))] for r in range(n)]
        for k in range(n):
            piv = next(i for i in range(k, n) if a[i][k] != 0)
            a[k], a[piv] = a[piv], a[k]
            inv = 1 / a[k][k]
            a[k] = [x * inv for x in a[k]]
            for i in range(n):
                if i != k and a[i][k]:
                    f = a[i][k]
                    a[i] = [x - f * y for x, y in zip(a[i], a[k])]
        ainv_cols.append([a[r][n] for r in range(n)])
    seen = set()

    def key(v):
        out = []
        for r in range(n):
            x = sum(ainv_cols[c][r] * v[c] for c in range(n))
            out.append(x - (x.numerator // x.denominator))
        return tuple(out)

    rng_box = range(det)
    import itertools

    for v in itertools.product(rng_box, repeat=n):
        seen.add(key(list(v)))
    return len(seen)


def gcd_list(xs):
    from math import gcd

    g = 0
    for x in xs:
        g = gcd(g, abs(x))
    return g


def determinantal_divisors(M):
    """d_1, d_1*d_2, ... as gcds of k x k minors (brute force)."""
    import itertools

    out = []
    for k in range(1, min(M.m, M.n) + 1):
        minors = []
        for rows in itertools.combinations(range(M.m), k):
            for cols in itertools.combinations(range(M.n), k):
                sub = Mat([[M.rows[i][j] for j in cols] for i in rows], k)
                minors.append(mat_det_int(sub))
        out.append(gcd_list(minors))
    return out


# ---------------------------------------------------------------------------
# Smith normal form


def test_snf_examples():
    D, U, V = snf(Mat([[2, 0], [0, 3]]))
    assert [D.rows[0][0], D.rows[1][1]] == [1, 6]
    I3 = Mat.identity(3)
    D, _, _ = snf(I3)
    assert D == I3
    Z = Mat.zero(2, 3)
    D, _, _ = snf(Z)
    assert D.is_zero()


def test_snf_randomized_against_determinantal_divisors():
    rng = random.Random(7)
    for _ in range(200):
        m, n = rng.randint(1, 4), rng.randint(1, 4)
        M = Mat([[rng.randint(-6, 6) for _ in range(n)] for _ in range(m)], n)
        D, U, V = snf(M)
        assert U.mul(M).mul(V) == D
        assert abs(mat_det_int(U)) == 1 and abs(mat_det_int(V)) == 1
        diag = [D.rows[i][i] for i in range(min(m, n))]
        for a, b in zip(diag, diag[1:]):
            if a and b:
                assert b % a == 0
            if a == 0:
                assert b == 0
        # off-diagonal must vanish
        for i in range(D.m):
            for j in range(D.n):
                if i != j:
                    assert D.rows[i][j] == 0
        dd = determinantal_divisors(M)
        prod = 1
        for k, d in enumerate(diag):
            prod *= d
            assert prod == dd[k] or (prod == 0 and dd[k] == 0)


def test_kernel_and_preimage():
    M = Mat([[2, 4]])
    K = kernel_basis(M)
    assert K.n == 1 and M.mul(K).is_zero()
    # {z : 3z in span(6)} = 2Z
    P = preimage_kernel(Mat([[3]]), Mat([[6]]))
    D, _, _ = snf(P)
    assert D.rows[0][0] == 2


def test_cokernel_enumeration_oracle_matches_group_order():
    rng = random.Random(11)
    for _ in range(60):
        n = rng.randint(1, 3)
        while True:
            A = Mat([[rng.randint(-4, 4) for _ in range(n)] for _ in range(n)], n)
            d = mat_det_int(A)
            if d != 0 and abs(d) <= 40:
                break
        grp = FgGroup(n, A)
        assert grp.order() == cokernel_order_by_enumeration(A) == abs(d)


# ---------------------------------------------------------------------------
# discriminants


def test_discriminant_trivial_and_finite():
    triv = PairedGroup(FgGroup(0), Mat([], 0), log_grade=1)
    sv = discriminant(triv)
    assert (sv.signed_value, sv.log_power, sv.order) == (1, 0, 0)
    z2 = PairedGroup(FgGroup(1, Mat([[2]])), Mat([[0]]), log_grade=0)
    sv = discriminant(z2)
    assert sv.signed_value == Fraction(1, 4)


def test_discriminant_i3_gram():
    P = free_paired([[-2, 1], [1, -2]], log_grade=1)
    sv = discriminant(P)
    assert sv.signed_value == 3 and sv.log_power == 2


def test_discriminant_basis_independence_randomized():
    rng = random.Random(23)
    trials = 0
    while trials < 1000:
        n = rng.randint(1, 4)
        G = [[0] * n for _ in range(n)]
        for i in range(n):
            for j in range(i + 1):
                G[i][j] = G[j][i] = rng.randint(-3, 3)
        gram = Mat(G, n)
        if mat_det_fraction(gram) == 0:
            continue
        trials += 1
        P = free_paired(G)
        sv = discriminant(P)
        # change of presentation by a unimodular matrix
        U = random_unimodular(rng, n)
        gram2 = U.transpose().mul(gram).mul(U)
        sv2 = discriminant(free_paired(gram2.rows))
        assert sv2 == sv
        # direct definition on a random finite-index independent set:
        # det(psi(b_i,b_j)) / index^2
        B = Mat([[rng.randint(-3, 3) for _ in range(n)] for _ in range(n)], n)
        idx = mat_det_int(B)
        if idx == 0:
            continue
        Gb = B.transpose().mul(gram).mul(B)
        val = Fraction(mat_det_int(Gb), idx * idx)
        assert val == sv.signed_value


def test_discriminant_degenerate():
    with pytest.raises(DegeneratePairing):
        discriminant(free_paired([[1, 1], [1, 1]]))


# ---------------------------------------------------------------------------
# z-invariants


def test_z_two_term_examples():
    assert z_invariant(two_term(Mat([[3]]))) == Fraction(1, 3)
    assert z_invariant(two_term(Mat.identity(4))) == 1


def test_z_three_term_with_torsion():
    C = GroupComplex(
        [FgGroup(1), FgGroup(1), FgGroup(1, Mat([[4]]))],
        [Mat([[2]]), Mat([[0]])],
    )
    # H^0 = 0, H^1 = Z/2, H^2 = Z/4: z = 1 * (1/2) * 4 = 2
    assert z_invariant(C) == 2
    orders = [C.cohomology(i).order() for i in range(3)]
    assert orders == [1, 2, 4]


def test_z_composition_property():
    rng = random.Random(5)
    for _ in range(200):
        n = rng.randint(1, 3)

        def nonsing():
            while True:
                A = Mat([[rng.randint(-3, 3) for _ in range(n)] for _ in range(n)], n)
                if mat_det_int(A):
                    return A

        f, g = nonsing(), nonsing()
        zf = z_invariant(two_term(f))
        zg = z_invariant(two_term(g))
        zgf = z_invariant(two_term(g.mul(f)))
        assert zf * zg == zgf


def test_z_triangle_fixtures_and_randomized():
    K = two_term(Mat([[2]]))
    M = two_term(Mat([[3]]))
    L = two_term(Mat([[2, 0], [0, 3]]))
    inj = [Mat([[1], [0]]), Mat([[1], [0]])]
    surj = [Mat([[0, 1]]), Mat([[0, 1]])]
    assert z_triangle_check(K, L, M, inj, surj)
    assert z_invariant(K) * z_invariant(M) == Fraction(1, 6)

    # K = 0: z(L) = z(M)
    K0 = GroupComplex([FgGroup(0), FgGroup(0)], [Mat([], 0)])
    M1 = two_term(Mat([[5]]))
    inj0 = [Mat([[]], None) if False else Mat([[] for _ in range(1)], 0) for _ in range(2)]
    surj0 = [Mat.identity(1), Mat.identity(1)]
    assert z_triangle_check(K0, M1, M1, inj0, surj0)

    rng = random.Random(37)
    done = 0
    while done < 1000:
        a, b = rng.randint(1, 2), rng.randint(1, 2)

        def nonsing(k):
            while True:
                A = Mat([[rng.randint(-3, 3) for _ in range(k)] for _ in range(k)], k)
                if mat_det_int(A):
                    return A

        A, B = nonsing(a), nonsing(b)
        g = Mat([[rng.randint(-2, 2) for _ in range(b)] for _ in range(a)], b)
        # twist F = A g - g B keeps the middle a genuine complex extension
        F = A.mul(g)
        gB = g.mul(B)
        F = Mat([[F.rows[i][j] - gB.rows[i][j] for j in range(b)] for i in range(a)], b)
        Lm = Mat(
            [A.rows[i] + F.rows[i] for i in range(a)]
            + [[0] * a + B.rows[i] for i in range(b)],
            a + b,
        )
        K = two_term(A)
        M = two_term(B)
        L = two_term(Lm)
        inj = [Mat([[int(i == j)] for i in range(a + b) for j in []], None) for _ in []]
        inj_m = Mat([[1 if i == j else 0 for j in range(a)] for i in range(a + b)], a)
        surj_m = Mat([[1 if j == a + i else 0 for j in range(a + b)] for i in range(b)], a + b)
        assert z_triangle_check(K, L, M, [inj_m, inj_m], [surj_m, surj_m])
        done += 1


# ---------------------------------------------------------------------------
# Yun's lemma and orthogonal splitting


def _e8_gram():
    # trivalent node c with arms of lengths 1, 2, 4
    edges = [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (2, 7)]
    G = [[-2 if i == j else 0 for j in range(8)] for i in range(8)]
    for a, b in edges:
        G[a][b] = G[b][a] = 1
    return G


def test_e8_is_unimodular():
    sv = discriminant(free_paired(_e8_gram()))
    assert abs(sv.signed_value) == 1


def test_yun_hyperbolic_plane_sign_fixture():
    U = free_paired([[0, 1], [1, 0]])
    gamma = Mat([[1], [0]])
    d, d0, dm, holds_abs, holds_signed = yun_split(U, gamma, gamma)
    assert d.signed_value == -1
    assert d0.signed_value == 1
    assert dm == 1
    assert holds_abs is True
    assert holds_signed is False  # -1 != 1: the sign-convention fixture


def test_yun_u_plus_e8():
    e8 = _e8_gram()
    n = 10
    G = [[0] * n for _ in range(n)]
    G[0][1] = G[1][0] = 1
    for i in range(8):
        for j in range(8):
            G[2 + i][2 + j] = e8[i][j]
    lam = free_paired(G)
    gamma = Mat.from_cols([[1] + [0] * 9], n)
    gp_cols = [[1] + [0] * 9] + [[0, 0] + [int(k == i) for k in range(8)] for i in range(8)]
    gamma_prime = Mat.from_cols(gp_cols, n)
    d, d0, dm, holds_abs, _ = yun_split(lam, gamma, gamma_prime)
    assert abs(d.signed_value) == 1
    assert abs(d0.signed_value) == 1 and dm == 1
    assert holds_abs


def test_yun_guards():
    U = free_paired([[1, 0], [0, 1]])
    with pytest.raises(NotIsotropic):
        yun_split(U, Mat([[1], [0]]), Mat([[1], [0]]))


def test_yun_randomized_1000():
    rng = random.Random(101)
    done = 0
    sign_flips = 0
    while done < 1000:
        extra = rng.randint(0, 2)
        n = 2 + extra
        G = [[0] * n for _ in range(n)]
        G[0][1] = G[1][0] = 1
        G[1][1] = rng.randint(-2, 2)
        for i in range(extra):
            for j in range(i + 1):
                G[2 + i][2 + j] = G[2 + j][2 + i] = rng.randint(-3, 3)
        gram = Mat(G, n)
        if mat_det_fraction(gram) == 0:
            continue
        k = rng.randint(1, 3)
        gamma_cols = [[k] + [0] * (n - 1)]
        # gamma' = gamma + random finite-index sublattice of span(e_3..e_n)
        tail_cols = []
        if extra:
            T = Mat([[rng.randint(-2, 2) for _ in range(extra)] for _ in range(extra)], extra)
            if mat_det_int(T) == 0:
                continue
            for col in T.cols():
                tail_cols.append([0, 0] + col)
        gamma = Mat.from_cols(gamma_cols, n)
        gamma_prime = Mat.from_cols(gamma_cols + tail_cols, n)
        # scramble coordinates
        S = random_unimodular(rng, n)
        Sinv = mat_inverse_unimodular(S)
        lam = free_paired(S.transpose().mul(gram).mul(S).rows)
        gam_s = Sinv.mul(gamma)
        gam_p_s = Sinv.mul(gamma_prime)
        d, d0, dm, holds_abs, holds_signed = yun_split(lam, gam_s, gam_p_s)
        assert holds_abs
        if not holds_signed:
            sign_flips += 1
        done += 1
    assert sign_flips > 0  # indefinite cases do flip sign


def test_orthogonal_split_fixtures():
    N = free_paired([[2, 0], [0, 3]])
    d, ds, dq, holds = orthogonal_split_check(N, Mat([[1], [0]]))
    assert (ds.signed_value, dq.signed_value, d.signed_value) == (2, 3, 6)
    assert holds
    # torsion summand: Z x Z/2 with pairing on the free part only
    P = PairedGroup(FgGroup(2, Mat([[0], [2]])), Mat([[5, 0], [0, 0]]))
    d, ds, dq, holds = orthogonal_split_check(P, Mat([[0], [1]]))
    assert ds.signed_value == Fraction(1, 4)
    assert dq.signed_value == 5
    assert d.signed_value == Fraction(5, 4)
    assert holds


def test_orthogonal_split_randomized():
    rng = random.Random(59)
    done = 0
    while done < 1000:
        a, b = rng.randint(1, 2), rng.randint(1, 2)
        n = a + b

        def sym(k):
            M = [[0] * k for _ in range(k)]
            for i in range(k):
                for j in range(i + 1):
                    M[i][j] = M[j][i] = rng.randint(-3, 3)
            return M

        A, B = sym(a), sym(b)
        G = [[0] * n for _ in range(n)]
        for i in range(a):
            for j in range(a):
                G[i][j] = A[i][j]
        for i in range(b):
            for j in range(b):
                G[a + i][a + j] = B[i][j]
        gram = Mat(G, n)
        if mat_det_fraction(gram) == 0:
            continue
        if mat_det_fraction(Mat(A, a)) == 0:
            continue
        # sublattice of the first block at finite index
        T = Mat([[rng.randint(-2, 2) for _ in range(a)] for _ in range(a)], a)
        if mat_det_int(T) == 0:
            continue
        sub = Mat.from_cols([c + [0] * b for c in T.cols()], n)
        U = random_unimodular(rng, n)
        Uinv = mat_inverse_unimodular(U)
        P = free_paired(U.transpose().mul(gram).mul(U).rows)
        d, ds, dq, holds = orthogonal_split_check(P, Uinv.mul(sub))
        assert holds
        done += 1


def test_mixed_discriminant_scaled_pairing():
    lam = free_paired([[0, 2], [2, 0]])
    gamma = Mat([[1], [0]])
    dm = mixed_discriminant(lam, gamma, gamma)
    assert dm == 2


# ---------------------------------------------------------------------------
# Neron-Severi assembly


def test_ns_lattice_rank10_unimodular():
    e8 = Mat([[-x for x in row] for row in _e8_gram()], 8)
    neg_e8 = Mat([[-abs(v) if i == j else v for j, v in enumerate(row)] for i, row in enumerate(e8.rows)], 8)
    # -E8: negate the Cartan matrix (diag -2, adjacency +1 already IS -E8)
    block = Mat(_e8_gram(), 8)
    ns = ns_lattice_build(1, [block], 0, 1)
    assert ns.group.n_gens == 10
    sv = discriminant(ns)
    assert abs(sv.signed_value) == 1 and sv.log_power == 10
    pos, neg, zero = symmetric_signature(ns.pairing)
    assert (pos, neg, zero) == (1, 9, 0)


def test_ns_lattice_single_i3_block():
    block = Mat([[-2, 1], [1, -2]], 2)
    ns = ns_lattice_build(1, [block], 0, 1)
    assert ns.group.n_gens == 4
    sv = discriminant(ns)
    assert abs(sv.signed_value) == 3
    pos, neg, zero = symmetric_signature(ns.pairing)
    assert (pos, neg, zero) == (1, 3, 0)


def test_ns_lattice_refuses_nontrivial_mw():
    with pytest.raises(NontrivialMW):
        ns_lattice_build(1, [], 0, 4)
    with pytest.raises(NontrivialMW):
        ns_lattice_build(1, [], 1, 1)


def test_yun_torsion_quotient_bookkeeping():
    # U with gamma = 2 e1, gamma' = e1: lambda_0 = Z/2, mixed disc = 2,
    # and |disc U| = 1 = (1/4) * 2^2
    U = free_paired([[0, 1], [1, 0]])
    gamma = Mat([[2], [0]])
    gamma_prime = Mat([[1], [0]])
    d, d0, dm, holds_abs, _ = yun_split(U, gamma, gamma_prime)
    assert d0.signed_value == Fraction(1, 4)
    assert dm == 2
    assert abs(d.signed_value) == 1
    assert holds_abs
    lam0 = subgroup_quotient(U, gamma_prime, gamma)
    rank, tors = lam0.group.invariants()
    assert rank == 0 and tors == [2]
