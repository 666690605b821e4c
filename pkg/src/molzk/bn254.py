"""BN254 (alt-bn128) curve arithmetic.

Implements the base field Fp, its tower extensions Fp2/Fp6/Fp12, the groups
G1 = E(Fp) and G2 = E'(Fp2) (sextic D-twist), Pippenger multi-scalar
multiplication, and the optimal-ate pairing with final exponentiation.

Everything is derived from the single BN parameter z: the field moduli are
recomputed from z at import time and asserted against the well-known
literals, so a typo in any constant fails loudly rather than silently
producing a different curve.

Point conventions:
  G1 affine: (x, y) mpz pair, None for the point at infinity.
  G1 jacobian: (X, Y, Z) with x = X/Z^2, y = Y/Z^3; Z = 0 encodes infinity.
  G2 points use the same shapes with Fp2 coordinates (pairs of mpz).
"""

from __future__ import annotations

from gmpy2 import invert, mpz

# ---------------------------------------------------------------------------
# Curve constants
# ---------------------------------------------------------------------------

BN_Z = 4965661367192848881

P = mpz(36 * BN_Z**4 + 36 * BN_Z**3 + 24 * BN_Z**2 + 6 * BN_Z + 1)
R = mpz(36 * BN_Z**4 + 36 * BN_Z**3 + 18 * BN_Z**2 + 6 * BN_Z + 1)

assert P == 21888242871839275222246405745257275088696311157297823662689037894645226208583
assert R == 21888242871839275222246405745257275088548364400416034343698204186575808495617

ATE_LOOP_COUNT = 6 * BN_Z + 2

B_G1 = mpz(3)

G1_GENERATOR = (mpz(1), mpz(2))

# Standard G2 generator (EIP-197 ordering; c0 + c1*u). Verified on-curve and
# of order R at import.
G2_GENERATOR = (
    (
        mpz(10857046999023057135944570762232829481370756359578518086990519993285655852781),
        mpz(11559732032986387107991004021392285783925812861821192530917403151452391805634),
    ),
    (
        mpz(8495653923123431417604973247489272438418190587263600148770280649306958101930),
        mpz(4082367875863433681332203403145435568316851327593401208105741076214120093531),
    ),
)

# ---------------------------------------------------------------------------
# Fp2 = Fp[u]/(u^2 + 1), elements as (a0, a1) = a0 + a1*u
# ---------------------------------------------------------------------------

FP2_ZERO = (mpz(0), mpz(0))
FP2_ONE = (mpz(1), mpz(0))

# Non-residue xi = 9 + u defining the tower and the twist.
XI = (mpz(9), mpz(1))


def fp2_add(a, b):
    return ((a[0] + b[0]) % P, (a[1] + b[1]) % P)


def fp2_sub(a, b):
    return ((a[0] - b[0]) % P, (a[1] - b[1]) % P)


def fp2_neg(a):
    return ((-a[0]) % P, (-a[1]) % P)


def fp2_mul(a, b):
    a0, a1 = a
    b0, b1 = b
    t0 = a0 * b0
    t1 = a1 * b1
    return ((t0 - t1) % P, ((a0 + a1) * (b0 + b1) - t0 - t1) % P)


def fp2_sqr(a):
    a0, a1 = a
    return ((a0 + a1) * (a0 - a1) % P, 2 * a0 * a1 % P)


def fp2_scalar(a, k):
    return (a[0] * k % P, a[1] * k % P)


def fp2_mul_xi(a):
    a0, a1 = a
    return ((9 * a0 - a1) % P, (9 * a1 + a0) % P)


def fp2_inv(a):
    a0, a1 = a
    norm = (a0 * a0 + a1 * a1) % P
    n_inv = invert(norm, P)
    return (a0 * n_inv % P, (-a1) * n_inv % P)


def fp2_conj(a):
    return (a[0], (-a[1]) % P)


def fp2_pow(a, e):
    result = FP2_ONE
    base = a
    while e:
        if e & 1:
            result = fp2_mul(result, base)
        base = fp2_sqr(base)
        e >>= 1
    return result


# ---------------------------------------------------------------------------
# Fp6 = Fp2[v]/(v^3 - xi), elements as (c0, c1, c2)
# ---------------------------------------------------------------------------

FP6_ZERO = (FP2_ZERO, FP2_ZERO, FP2_ZERO)
FP6_ONE = (FP2_ONE, FP2_ZERO, FP2_ZERO)


def fp6_add(a, b):
    return (fp2_add(a[0], b[0]), fp2_add(a[1], b[1]), fp2_add(a[2], b[2]))


def fp6_sub(a, b):
    return (fp2_sub(a[0], b[0]), fp2_sub(a[1], b[1]), fp2_sub(a[2], b[2]))


def fp6_neg(a):
    return (fp2_neg(a[0]), fp2_neg(a[1]), fp2_neg(a[2]))


def fp6_mul(a, b):
    a0, a1, a2 = a
    b0, b1, b2 = b
    t0 = fp2_mul(a0, b0)
    t1 = fp2_mul(a1, b1)
    t2 = fp2_mul(a2, b2)
    r0 = fp2_add(t0, fp2_mul_xi(fp2_sub(fp2_mul(fp2_add(a1, a2), fp2_add(b1, b2)), fp2_add(t1, t2))))
    r1 = fp2_add(fp2_sub(fp2_mul(fp2_add(a0, a1), fp2_add(b0, b1)), fp2_add(t0, t1)), fp2_mul_xi(t2))
    r2 = fp2_add(fp2_sub(fp2_mul(fp2_add(a0, a2), fp2_add(b0, b2)), fp2_add(t0, t2)), t1)
    return (r0, r1, r2)


def fp6_mul_by_v(a):
    # v * (c0 + c1 v + c2 v^2) = xi*c2 + c0 v + c1 v^2
    return (fp2_mul_xi(a[2]), a[0], a[1])


def fp6_inv(a):
    a0, a1, a2 = a
    v0 = fp2_sub(fp2_sqr(a0), fp2_mul_xi(fp2_mul(a1, a2)))
    v1 = fp2_sub(fp2_mul_xi(fp2_sqr(a2)), fp2_mul(a0, a1))
    v2 = fp2_sub(fp2_sqr(a1), fp2_mul(a0, a2))
    norm = fp2_add(fp2_mul(a0, v0), fp2_mul_xi(fp2_add(fp2_mul(a1, v2), fp2_mul(a2, v1))))
    n_inv = fp2_inv(norm)
    return (fp2_mul(v0, n_inv), fp2_mul(v1, n_inv), fp2_mul(v2, n_inv))


# ---------------------------------------------------------------------------
# Fp12 = Fp6[w]/(w^2 - v), elements as (d0, d1)
# ---------------------------------------------------------------------------

FP12_ONE = (FP6_ONE, FP6_ZERO)


def fp12_mul(a, b):
    a0, a1 = a
    b0, b1 = b
    t0 = fp6_mul(a0, b0)
    t1 = fp6_mul(a1, b1)
    r1 = fp6_sub(fp6_mul(fp6_add(a0, a1), fp6_add(b0, b1)), fp6_add(t0, t1))
    return (fp6_add(t0, fp6_mul_by_v(t1)), r1)


def fp12_sqr(a):
    a0, a1 = a
    t = fp6_mul(a0, a1)
    c0 = fp6_sub(fp6_mul(fp6_add(a0, a1), fp6_add(a0, fp6_mul_by_v(a1))), fp6_add(t, fp6_mul_by_v(t)))
    return (c0, fp6_add(t, t))


def fp12_conj(a):
    return (a[0], fp6_neg(a[1]))


def fp12_inv(a):
    a0, a1 = a
    norm = fp6_sub(fp6_mul(a0, a0), fp6_mul_by_v(fp6_mul(a1, a1)))
    n_inv = fp6_inv(norm)
    return (fp6_mul(a0, n_inv), fp6_neg(fp6_mul(a1, n_inv)))


def fp12_pow(a, e):
    result = FP12_ONE
    base = a
    while e:
        if e & 1:
            result = fp12_mul(result, base)
        base = fp12_sqr(base)
        e >>= 1
    return result


# Frobenius on Fp12 in the w-basis {1, w, w^2, ..., w^5} over Fp2, where
# w^6 = xi. The tower rep ((c0,c1,c2),(c3,c4,c5)) maps to w-coefficients
# [c0, c3, c1, c4, c2, c5].

def _tower_to_w(a):
    (c0, c1, c2), (c3, c4, c5) = a
    return [c0, c3, c1, c4, c2, c5]


def _w_to_tower(ws):
    return ((ws[0], ws[2], ws[4]), (ws[1], ws[3], ws[5]))


def _frobenius_coeffs(power):
    # gamma_i = xi^(i*(p^power - 1)/6)
    e = (int(P) ** power - 1) // 6
    g1 = fp2_pow(XI, e)
    coeffs = [FP2_ONE]
    for _ in range(5):
        coeffs.append(fp2_mul(coeffs[-1], g1))
    return coeffs


_FROB1_COEFFS = _frobenius_coeffs(1)
_FROB2_COEFFS = _frobenius_coeffs(2)


def fp12_frobenius(a, power):
    coeffs = _FROB1_COEFFS if power == 1 else _FROB2_COEFFS
    ws = _tower_to_w(a)
    if power == 1:
        ws = [fp2_mul(fp2_conj(c), coeffs[i]) for i, c in enumerate(ws)]
    else:
        ws = [fp2_mul(c, coeffs[i]) for i, c in enumerate(ws)]
    return _w_to_tower(ws)


# ---------------------------------------------------------------------------
# G1 jacobian arithmetic (a = 0 short Weierstrass)
# ---------------------------------------------------------------------------

G1_INFINITY = (mpz(1), mpz(1), mpz(0))


def g1_is_infinity(pt):
    return pt[2] == 0


def g1_double(pt):
    X1, Y1, Z1 = pt
    if Z1 == 0:
        return pt
    A = X1 * X1 % P
    B = Y1 * Y1 % P
    C = B * B % P
    D = 2 * ((X1 + B) ** 2 - A - C) % P
    E = 3 * A % P
    F = E * E % P
    X3 = (F - 2 * D) % P
    Y3 = (E * (D - X3) - 8 * C) % P
    Z3 = 2 * Y1 * Z1 % P
    return (X3, Y3, Z3)


def g1_add(p1, p2):
    X1, Y1, Z1 = p1
    X2, Y2, Z2 = p2
    if Z1 == 0:
        return p2
    if Z2 == 0:
        return p1
    Z1Z1 = Z1 * Z1 % P
    Z2Z2 = Z2 * Z2 % P
    U1 = X1 * Z2Z2 % P
    U2 = X2 * Z1Z1 % P
    S1 = Y1 * Z2 % P * Z2Z2 % P
    S2 = Y2 * Z1 % P * Z1Z1 % P
    if U1 == U2:
        if S1 == S2:
            return g1_double(p1)
        return G1_INFINITY
    H = (U2 - U1) % P
    I = (2 * H) ** 2 % P
    J = H * I % P
    rr = 2 * (S2 - S1) % P
    V = U1 * I % P
    X3 = (rr * rr - J - 2 * V) % P
    Y3 = (rr * (V - X3) - 2 * S1 * J) % P
    Z3 = ((Z1 + Z2) ** 2 - Z1Z1 - Z2Z2) * H % P
    return (X3, Y3, Z3)


def g1_add_affine(p1, p2_affine):
    # Mixed addition, p2 affine (madd-2007-bl).
    if p2_affine is None:
        return p1
    X1, Y1, Z1 = p1
    X2, Y2 = p2_affine
    if Z1 == 0:
        return (X2, Y2, mpz(1))
    Z1Z1 = Z1 * Z1 % P
    U2 = X2 * Z1Z1 % P
    S2 = Y2 * Z1 % P * Z1Z1 % P
    if U2 == X1:
        if S2 == Y1:
            return g1_double(p1)
        return G1_INFINITY
    H = (U2 - X1) % P
    HH = H * H % P
    I = 4 * HH % P
    J = H * I % P
    rr = 2 * (S2 - Y1) % P
    V = X1 * I % P
    X3 = (rr * rr - J - 2 * V) % P
    Y3 = (rr * (V - X3) - 2 * Y1 * J) % P
    Z3 = ((Z1 + H) ** 2 - Z1Z1 - HH) % P
    return (X3, Y3, Z3)


def g1_neg(pt):
    return (pt[0], (-pt[1]) % P, pt[2])


def g1_to_affine(pt):
    X, Y, Z = pt
    if Z == 0:
        return None
    z_inv = invert(Z, P)
    z2 = z_inv * z_inv % P
    return (X * z2 % P, Y * z2 % P * z_inv % P)


def g1_from_affine(pt):
    if pt is None:
        return G1_INFINITY
    return (pt[0], pt[1], mpz(1))


def g1_scalar_mult(pt_affine, k):
    k %= R
    acc = G1_INFINITY
    if k == 0 or pt_affine is None:
        return acc
    for bit in bin(k)[2:]:
        acc = g1_double(acc)
        if bit == "1":
            acc = g1_add_affine(acc, pt_affine)
    return acc


def g1_is_on_curve(pt_affine):
    if pt_affine is None:
        return True
    x, y = pt_affine
    return (y * y - (x * x % P * x + B_G1)) % P == 0


# ---------------------------------------------------------------------------
# G2 jacobian arithmetic over Fp2 (twist curve y^2 = x^3 + 3/xi)
# ---------------------------------------------------------------------------

B_G2 = fp2_mul((mpz(3), mpz(0)), fp2_inv(XI))

G2_INFINITY = (FP2_ONE, FP2_ONE, FP2_ZERO)


def g2_is_infinity(pt):
    return pt[2] == FP2_ZERO


def g2_double(pt):
    X1, Y1, Z1 = pt
    if Z1 == FP2_ZERO:
        return pt
    A = fp2_sqr(X1)
    B = fp2_sqr(Y1)
    C = fp2_sqr(B)
    D = fp2_sub(fp2_sub(fp2_sqr(fp2_add(X1, B)), A), C)
    D = fp2_add(D, D)
    E = fp2_scalar(A, 3)
    F = fp2_sqr(E)
    X3 = fp2_sub(F, fp2_add(D, D))
    Y3 = fp2_sub(fp2_mul(E, fp2_sub(D, X3)), fp2_scalar(C, 8))
    Z3 = fp2_scalar(fp2_mul(Y1, Z1), 2)
    return (X3, Y3, Z3)


def g2_add(p1, p2):
    X1, Y1, Z1 = p1
    X2, Y2, Z2 = p2
    if Z1 == FP2_ZERO:
        return p2
    if Z2 == FP2_ZERO:
        return p1
    Z1Z1 = fp2_sqr(Z1)
    Z2Z2 = fp2_sqr(Z2)
    U1 = fp2_mul(X1, Z2Z2)
    U2 = fp2_mul(X2, Z1Z1)
    S1 = fp2_mul(fp2_mul(Y1, Z2), Z2Z2)
    S2 = fp2_mul(fp2_mul(Y2, Z1), Z1Z1)
    if U1 == U2:
        if S1 == S2:
            return g2_double(p1)
        return G2_INFINITY
    H = fp2_sub(U2, U1)
    I = fp2_sqr(fp2_add(H, H))
    J = fp2_mul(H, I)
    rr = fp2_scalar(fp2_sub(S2, S1), 2)
    V = fp2_mul(U1, I)
    X3 = fp2_sub(fp2_sub(fp2_sqr(rr), J), fp2_add(V, V))
    Y3 = fp2_sub(fp2_mul(rr, fp2_sub(V, X3)), fp2_scalar(fp2_mul(S1, J), 2))
    Z3 = fp2_mul(fp2_sub(fp2_sub(fp2_sqr(fp2_add(Z1, Z2)), Z1Z1), Z2Z2), H)
    return (X3, Y3, Z3)


def g2_add_affine(p1, p2_affine):
    if p2_affine is None:
        return p1
    X1, Y1, Z1 = p1
    X2, Y2 = p2_affine
    if Z1 == FP2_ZERO:
        return (X2, Y2, FP2_ONE)
    Z1Z1 = fp2_sqr(Z1)
    U2 = fp2_mul(X2, Z1Z1)
    S2 = fp2_mul(fp2_mul(Y2, Z1), Z1Z1)
    if U2 == X1:
        if S2 == Y1:
            return g2_double(p1)
        return G2_INFINITY
    H = fp2_sub(U2, X1)
    HH = fp2_sqr(H)
    I = fp2_scalar(HH, 4)
    J = fp2_mul(H, I)
    rr = fp2_scalar(fp2_sub(S2, Y1), 2)
    V = fp2_mul(X1, I)
    X3 = fp2_sub(fp2_sub(fp2_sqr(rr), J), fp2_add(V, V))
    Y3 = fp2_sub(fp2_mul(rr, fp2_sub(V, X3)), fp2_scalar(fp2_mul(Y1, J), 2))
    Z3 = fp2_sub(fp2_sub(fp2_sqr(fp2_add(Z1, H)), Z1Z1), HH)
    return (X3, Y3, Z3)


def g2_neg(pt):
    return (pt[0], fp2_neg(pt[1]), pt[2])


def g2_to_affine(pt):
    X, Y, Z = pt
    if Z == FP2_ZERO:
        return None
    z_inv = fp2_inv(Z)
    z2 = fp2_sqr(z_inv)
    return (fp2_mul(X, z2), fp2_mul(fp2_mul(Y, z2), z_inv))


def g2_from_affine(pt):
    if pt is None:
        return G2_INFINITY
    return (pt[0], pt[1], FP2_ONE)


def g2_scalar_mult(pt_affine, k):
    k %= R
    acc = G2_INFINITY
    if k == 0 or pt_affine is None:
        return acc
    for bit in bin(k)[2:]:
        acc = g2_double(acc)
        if bit == "1":
            acc = g2_add_affine(acc, pt_affine)
    return acc


def g2_is_on_curve(pt_affine):
    if pt_affine is None:
        return True
    x, y = pt_affine
    return fp2_sub(fp2_sqr(y), fp2_add(fp2_mul(fp2_sqr(x), x), B_G2)) == FP2_ZERO


def g2_is_in_subgroup(pt_affine):
    return g2_is_on_curve(pt_affine) and g2_is_infinity(g2_scalar_mult(pt_affine, int(R)))


# ---------------------------------------------------------------------------
# Multi-scalar multiplication (Pippenger bucket method)
# ---------------------------------------------------------------------------

_MSM_WINDOW = 8
_MSM_WINDOWS = (R.bit_length() + _MSM_WINDOW - 1) // _MSM_WINDOW
_MSM_MASK = (1 << _MSM_WINDOW) - 1


def _msm(bases, scalars, from_affine, add_affine, add, double, infinity, is_inf):
    pairs = [(b, int(s) % R) for b, s in zip(bases, scalars) if s and b is not None]
    if not pairs:
        return infinity
    total = infinity
    for k in range(_MSM_WINDOWS - 1, -1, -1):
        if not is_inf(total):
            for _ in range(_MSM_WINDOW):
                total = double(total)
        shift = k * _MSM_WINDOW
        buckets = [None] * _MSM_MASK
        for base, scalar in pairs:
            d = (scalar >> shift) & _MSM_MASK
            if d:
                cur = buckets[d - 1]
                buckets[d - 1] = from_affine(base) if cur is None else add_affine(cur, base)
        running = infinity
        acc = infinity
        for idx in range(_MSM_MASK - 1, -1, -1):
            b = buckets[idx]
            if b is not None:
                running = add(running, b)
            if not is_inf(running):
                acc = add(acc, running)
        total = add(total, acc)
    return total


def msm_g1(bases_affine, scalars):
    """Sum of scalar[i] * base[i] over G1; returns a jacobian point."""
    return _msm(
        bases_affine, scalars, g1_from_affine, g1_add_affine, g1_add, g1_double,
        G1_INFINITY, lambda pt: pt[2] == 0,
    )


def msm_g2(bases_affine, scalars):
    """Sum of scalar[i] * base[i] over G2; returns a jacobian point."""
    return _msm(
        bases_affine, scalars, g2_from_affine, g2_add_affine, g2_add, g2_double,
        G2_INFINITY, lambda pt: pt[2] == FP2_ZERO,
    )


class FixedBaseTable:
    """Windowed table for repeated scalar multiplication of one fixed base."""

    def __init__(self, base_affine, add_affine, to_affine, double, from_affine, infinity):
        self._add_affine = add_affine
        self._infinity = infinity
        self._tables = []
        current = from_affine(base_affine)
        for _ in range(_MSM_WINDOWS):
            window_base = to_affine(current)
            row = []
            acc = from_affine(window_base)
            row.append(window_base)
            for _ in range(_MSM_MASK - 1):
                acc = add_affine(acc, window_base)
                row.append(to_affine(acc))
            self._tables.append(row)
            for _ in range(_MSM_WINDOW):
                current = double(current)

    def mult(self, k):
        k = int(k) % R
        acc = self._infinity
        window = 0
        while k:
            d = k & _MSM_MASK
            if d:
                acc = self._add_affine(acc, self._tables[window][d - 1])
            k >>= _MSM_WINDOW
            window += 1
        return acc


_G1_TABLE = None
_G2_TABLE = None


def g1_mult_gen(k):
    """k * G1 generator via a cached windowed table."""
    global _G1_TABLE
    if _G1_TABLE is None:
        _G1_TABLE = FixedBaseTable(
            G1_GENERATOR, g1_add_affine, g1_to_affine, g1_double, g1_from_affine, G1_INFINITY
        )
    return _G1_TABLE.mult(k)


def g2_mult_gen(k):
    """k * G2 generator via a cached windowed table."""
    global _G2_TABLE
    if _G2_TABLE is None:
        _G2_TABLE = FixedBaseTable(
            G2_GENERATOR, g2_add_affine, g2_to_affine, g2_double, g2_from_affine, G2_INFINITY
        )
    return _G2_TABLE.mult(k)


# ---------------------------------------------------------------------------
# Optimal-ate pairing
# ---------------------------------------------------------------------------

# Untwist-Frobenius-twist coefficients for the p-power endomorphism on E'.
_TWIST_FROB_X = fp2_pow(XI, (int(P) - 1) // 3)
_TWIST_FROB_Y = fp2_pow(XI, (int(P) - 1) // 2)
_TWIST_FROB2_X = fp2_pow(XI, (int(P) ** 2 - 1) // 3)
_TWIST_FROB2_Y = fp2_pow(XI, (int(P) ** 2 - 1) // 2)


def _g2_frobenius(q_affine):
    x, y = q_affine
    return (fp2_mul(fp2_conj(x), _TWIST_FROB_X), fp2_mul(fp2_conj(y), _TWIST_FROB_Y))


def _g2_frobenius2(q_affine):
    x, y = q_affine
    return (fp2_mul(x, _TWIST_FROB2_X), fp2_mul(y, _TWIST_FROB2_Y))


def _line_fp12(xp, yp, lam, xt, yt):
    # Line through the untwisted point, evaluated at P = (xp, yp):
    #   l = yp - lam*xp*w + (lam*xt - yt)*w^3
    # In the tower, the w coefficient sits at c1[0] and w^3 at c1[1].
    c0 = ((yp, mpz(0)), FP2_ZERO, FP2_ZERO)
    b = fp2_scalar(lam, -xp)
    c = fp2_sub(fp2_mul(lam, xt), yt)
    return (c0, (b, c, FP2_ZERO))


def _miller_dbl_step(f, t_affine, xp, yp):
    xt, yt = t_affine
    lam = fp2_mul(fp2_scalar(fp2_sqr(xt), 3), fp2_inv(fp2_scalar(yt, 2)))
    f = fp12_mul(fp12_sqr(f), _line_fp12(xp, yp, lam, xt, yt))
    x3 = fp2_sub(fp2_sqr(lam), fp2_scalar(xt, 2))
    y3 = fp2_sub(fp2_mul(lam, fp2_sub(xt, x3)), yt)
    return f, (x3, y3)


def _miller_add_step(f, t_affine, q_affine, xp, yp):
    xt, yt = t_affine
    xq, yq = q_affine
    lam = fp2_mul(fp2_sub(yq, yt), fp2_inv(fp2_sub(xq, xt)))
    f = fp12_mul(f, _line_fp12(xp, yp, lam, xt, yt))
    x3 = fp2_sub(fp2_sub(fp2_sqr(lam), xt), xq)
    y3 = fp2_sub(fp2_mul(lam, fp2_sub(xt, x3)), yt)
    return f, (x3, y3)


def miller_loop(p_affine, q_affine):
    """Miller loop of the optimal-ate pairing; result still needs final exp."""
    if p_affine is None or q_affine is None:
        return FP12_ONE
    xp, yp = p_affine
    f = FP12_ONE
    t = q_affine
    for bit in bin(ATE_LOOP_COUNT)[3:]:
        f, t = _miller_dbl_step(f, t, xp, yp)
        if bit == "1":
            f, t = _miller_add_step(f, t, q_affine, xp, yp)
    q1 = _g2_frobenius(q_affine)
    q2 = _g2_frobenius2(q_affine)
    q2 = (q2[0], fp2_neg(q2[1]))
    f, t = _miller_add_step(f, t, q1, xp, yp)
    f, _ = _miller_add_step(f, t, q2, xp, yp)
    return f


_HARD_EXPONENT = (int(P) ** 4 - int(P) ** 2 + 1) // int(R)
assert (int(P) ** 4 - int(P) ** 2 + 1) % int(R) == 0


def final_exponentiation(f):
    """Raise a Miller-loop output to (p^12 - 1) / r."""
    # Easy part: f^((p^6 - 1)(p^2 + 1))
    m = fp12_mul(fp12_conj(f), fp12_inv(f))
    m = fp12_mul(fp12_frobenius(m, 2), m)
    # Hard part: m^((p^4 - p^2 + 1) / r)
    return fp12_pow(m, _HARD_EXPONENT)


def pairing(p_affine, q_affine):
    """Optimal-ate pairing e(P, Q) for P in G1, Q in G2 (affine inputs)."""
    return final_exponentiation(miller_loop(p_affine, q_affine))


def multi_pairing(pairs):
    """Product of pairings over (G1, G2) affine pairs with one shared final exp."""
    f = FP12_ONE
    for p_affine, q_affine in pairs:
        if p_affine is None or q_affine is None:
            continue
        f = fp12_mul(f, miller_loop(p_affine, q_affine))
    return final_exponentiation(f)


def _self_check():
    assert g1_is_on_curve(G1_GENERATOR)
    assert g2_is_on_curve(G2_GENERATOR)
    assert g1_is_infinity(g1_scalar_mult(G1_GENERATOR, int(R)))
    assert g2_is_infinity(g2_scalar_mult(G2_GENERATOR, int(R)))


_self_check()
