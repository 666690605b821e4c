"""Curve and pairing sanity: the constants are self-derived from the BN
parameter z, so these tests mostly pin the group structure and bilinearity.
"""

import random

from molzk import bn254 as curve


def test_moduli_derive_from_z():
    z = curve.BN_Z
    assert curve.P == 36 * z**4 + 36 * z**3 + 24 * z**2 + 6 * z + 1
    assert curve.R == 36 * z**4 + 36 * z**3 + 18 * z**2 + 6 * z + 1


def test_generators_have_order_r():
    assert curve.g1_is_on_curve(curve.G1_GENERATOR)
    assert curve.g2_is_on_curve(curve.G2_GENERATOR)
    assert curve.g1_is_infinity(curve.g1_scalar_mult(curve.G1_GENERATOR, int(curve.R)))
    assert curve.g2_is_infinity(curve.g2_scalar_mult(curve.G2_GENERATOR, int(curve.R)))
    assert not curve.g1_is_infinity(curve.g1_scalar_mult(curve.G1_GENERATOR, 2))


def test_group_laws():
    rng = random.Random(1)
    a, b = rng.randrange(curve.R), rng.randrange(curve.R)
    pa = curve.g1_mult_gen(a)
    pb = curve.g1_mult_gen(b)
    lhs = curve.g1_to_affine(curve.g1_add(pa, pb))
    rhs = curve.g1_to_affine(curve.g1_mult_gen((a + b) % curve.R))
    assert lhs == rhs
    qa = curve.g2_mult_gen(a)
    qb = curve.g2_mult_gen(b)
    assert curve.g2_to_affine(curve.g2_add(qa, qb)) == curve.g2_to_affine(
        curve.g2_mult_gen((a + b) % curve.R)
    )


def test_add_special_cases():
    g = curve.g1_from_affine(curve.G1_GENERATOR)
    assert curve.g1_to_affine(curve.g1_add(g, curve.G1_INFINITY)) == curve.G1_GENERATOR
    doubled = curve.g1_add(g, g)
    assert curve.g1_to_affine(doubled) == curve.g1_to_affine(curve.g1_double(g))
    cancel = curve.g1_add(g, curve.g1_neg(g))
    assert curve.g1_is_infinity(cancel)
    # mixed addition hitting the doubling branch
    assert curve.g1_to_affine(curve.g1_add_affine(g, curve.G1_GENERATOR)) == curve.g1_to_affine(doubled)


def test_msm_matches_naive():
    rng = random.Random(2)
    bases = [curve.g1_to_affine(curve.g1_mult_gen(rng.randrange(curve.R))) for _ in range(40)]
    scalars = [rng.randrange(curve.R) for _ in range(37)] + [0, 1, 2]
    expected = curve.G1_INFINITY
    for base, scalar in zip(bases, scalars):
        expected = curve.g1_add(expected, curve.g1_scalar_mult(base, scalar))
    assert curve.g1_to_affine(curve.msm_g1(bases, scalars)) == curve.g1_to_affine(expected)


def test_msm_g2_matches_naive():
    rng = random.Random(3)
    bases = [curve.g2_to_affine(curve.g2_mult_gen(rng.randrange(curve.R))) for _ in range(8)]
    scalars = [rng.randrange(curve.R) for _ in range(8)]
    expected = curve.G2_INFINITY
    for base, scalar in zip(bases, scalars):
        expected = curve.g2_add(expected, curve.g2_scalar_mult(base, scalar))
    assert curve.g2_to_affine(curve.msm_g2(bases, scalars)) == curve.g2_to_affine(expected)


def test_msm_empty_and_zero():
    assert curve.g1_is_infinity(curve.msm_g1([], []))
    assert curve.g1_is_infinity(curve.msm_g1([curve.G1_GENERATOR], [0]))


def test_pairing_nondegenerate():
    e = curve.pairing(curve.G1_GENERATOR, curve.G2_GENERATOR)
    assert e != curve.FP12_ONE


def test_pairing_bilinear():
    rng = random.Random(4)
    a = rng.randrange(1, curve.R)
    b = rng.randrange(1, curve.R)
    e_base = curve.pairing(curve.G1_GENERATOR, curve.G2_GENERATOR)
    lhs = curve.pairing(
        curve.g1_to_affine(curve.g1_mult_gen(a)),
        curve.g2_to_affine(curve.g2_mult_gen(b)),
    )
    assert lhs == curve.fp12_pow(e_base, a * b % curve.R)
    # moving the scalar across the pairing
    assert lhs == curve.pairing(
        curve.g1_to_affine(curve.g1_mult_gen(a * b % curve.R)), curve.G2_GENERATOR
    )


def test_pairing_product_identity():
    # e(P, Q) * e(-P, Q) = 1
    neg = (curve.G1_GENERATOR[0], (-curve.G1_GENERATOR[1]) % curve.P)
    product = curve.multi_pairing([
        (curve.G1_GENERATOR, curve.G2_GENERATOR),
        (neg, curve.G2_GENERATOR),
    ])
    assert product == curve.FP12_ONE


def test_fp12_frobenius_is_p_power():
    rng = random.Random(5)

    def rand_fp2():
        return (rng.randrange(curve.P), rng.randrange(curve.P))

    x = ((rand_fp2(), rand_fp2(), rand_fp2()), (rand_fp2(), rand_fp2(), rand_fp2()))
    assert curve.fp12_frobenius(x, 1) == curve.fp12_pow(x, int(curve.P))
    assert curve.fp12_frobenius(x, 2) == curve.fp12_pow(x, int(curve.P) ** 2)


def test_g2_subgroup_check_rejects_off_curve():
    x, y = curve.G2_GENERATOR
    bad = ((x[0] + 1, x[1]), y)
    assert not curve.g2_is_on_curve(bad)
    assert not curve.g2_is_in_subgroup(bad)
