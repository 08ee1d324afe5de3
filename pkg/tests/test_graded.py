import itertools
import random

import pytest

from tideal.graded import (
    GradedIdeal, GradedRing, HomElem, from_components, g_add, g_colon,
    g_contains, g_intersect, g_inverse, g_le, g_mul, g_pow, g_scale, ideal_from_gens,
    principal, ring_from_gens, ring_polynomial, ring_pullback, unit_ideal, v_close,
)
from tideal.quadratic import BaseCtx, CoefModule, Q, mod_from_gens, standard_order

Z = standard_order(Q)


def xq(c, d):
    return HomElem(Q.elem(c), d)


@pytest.fixture(scope="module")
def ex22():
    R = ring_from_gens(Q, Z, [xq(3, 1), xq(1, 2), xq(1, 3)])
    I = ideal_from_gens(R, [xq(3, 1), xq(1, 2), xq(1, 3)])
    J = ideal_from_gens(R, [xq(3, 1), xq(3, 2), xq(1, 3), xq(1, 4)])
    return R, I, J


def brute_ring_comp(ctx, coeff, gens, n):
    """A_n as the span of coefficient-ring multiples of all monomials of degree n."""
    terms = []
    bounds = [n // g.deg for g in gens]
    for exps in itertools.product(*(range(b + 1) for b in bounds)):
        if sum(e * g.deg for e, g in zip(exps, gens)) == n:
            c = ctx.one()
            for e, g in zip(exps, gens):
                c = c * g.coef ** e
            terms.extend(b * c for b in coeff.basis)
    return mod_from_gens(ctx, terms)


@pytest.mark.parametrize("ctx, gens", [
    (Q, [xq(3, 1), xq(1, 2), xq(1, 3)]),
    (Q, [xq(2, 1), xq(1, 2), xq(1, 3)]),
    (Q, [xq(1, 1)]),
    (Q, [xq(6, 1), xq(2, 2), xq(1, 3), xq(1, 4)]),
    (BaseCtx(-3), [HomElem(BaseCtx(-3).elem(2), 1), HomElem(BaseCtx(-3).one(), 2),
                   HomElem(BaseCtx(-3).one(), 3)]),
])
def test_ring_components_match_monomial_expansion(ctx, gens):
    coeff = standard_order(ctx)
    R = ring_from_gens(ctx, coeff, gens)
    for n in range(R.tail_start + 6):
        assert R.comp(n) == brute_ring_comp(ctx, coeff, gens, n), n


def test_frozen_ring_descriptions(ex22):
    R, I, J = ex22
    assert R.describe() == "{0: <1>; 1: <3>; 2+: <1>}"
    K = BaseCtx(-3)
    R7 = ring_from_gens(K, standard_order(K), [HomElem(K.elem(2), 1), HomElem(K.one(), 2),
                                               HomElem(K.one(), 3)])
    assert R7.describe() == "{0: <1, sqrt(-3)>; 1: <2, 2*sqrt(-3)>; 2+: <1, sqrt(-3)>}"
    K2 = BaseCtx(2)
    assert ring_pullback(K2, mod_from_gens(K2, [K2.one()])).describe() == "{0: <1>; 1+: K}"


def test_eventually_periodic_ring_is_rejected():
    with pytest.raises(ValueError, match="periodic"):
        ring_from_gens(Q, Z, [xq(2, 1), xq(1, 2)])


def test_ring_invariants_are_checked():
    two = mod_from_gens(Q, [Q.elem(2)])
    with pytest.raises(ValueError):
        GradedRing(Q, [two], Z)           # 1 not in A_0
    with pytest.raises(ValueError):
        GradedRing(Q, [Z, Z], two)        # A_1 * A_1 = Z not in A_2 = 2Z


def test_ideal_construction_and_structural_equality(ex22):
    R, I, J = ex22
    assert I.describe() == "{1: <3>; 2+: <1>}"
    assert J.describe() == "{1: <3>; 2: <3>; 3+: <1>}"
    # x^3 is not in (3x, x^2): both products land in 3Z x^3
    assert ideal_from_gens(R, [xq(3, 1), xq(1, 2)]).describe() == "{1: <3>; 2: <1>; 3: <3>; 4+: <1>}"
    same = ideal_from_gens(R, [xq(1, 3), xq(3, 1), xq(-1, 2), xq(6, 2)])
    assert same == I and hash(same) == hash(I)
    assert g_le(J, I) and not g_le(I, J)


def test_from_components_rejects_non_modules(ex22):
    R, _, _ = ex22
    with pytest.raises(ValueError):
        from_components(R, 0, [Z], mod_from_gens(Q, [Q.elem(3)]))


def test_ex22_colons_and_closures(ex22):
    R, I, J = ex22
    ZX = from_components(R, 0, [], Z)
    assert g_inverse(J) == from_components(R, -1, [], Z)
    assert g_colon(unit_ideal(R), ZX) == ideal_from_gens(R, [xq(3, 0), xq(3, 1), xq(1, 2), xq(1, 3)])
    assert v_close(J) == J
    JI = g_mul(J, I)
    assert g_inverse(JI) == from_components(R, -2, [], Z)
    assert v_close(JI) == g_scale(J, xq(1, 1))
    assert v_close(g_pow(I, 2)) == g_scale(J, xq(1, 1))
    assert g_pow(I, 2) == ideal_from_gens(R, [xq(9, 2), xq(3, 3), xq(1, 4), xq(1, 5)])


def random_gens(rng, R, k):
    out = []
    while len(out) < k:
        d = rng.randint(0, 3)
        c = sum((b * rng.randint(-3, 3) for b in R.comp(d).basis), R.ctx.elem())
        if c:
            out.append(HomElem(c, d))
    return out


RINGS = [
    ring_polynomial(Q, Z),
    ring_from_gens(Q, Z, [xq(3, 1), xq(1, 2), xq(1, 3)]),
    ring_polynomial(BaseCtx(2), standard_order(BaseCtx(2))),
]


@pytest.mark.parametrize("seed", range(12))
def test_arithmetic_against_generator_oracles(seed):
    rng = random.Random(seed)
    R = RINGS[seed % len(RINGS)]
    a, b = random_gens(rng, R, rng.randint(1, 3)), random_gens(rng, R, rng.randint(1, 3))
    A, B = ideal_from_gens(R, a), ideal_from_gens(R, b)
    assert g_mul(A, B) == ideal_from_gens(R, [g * h for g in a for h in b])
    assert g_add(A, B) == ideal_from_gens(R, a + b)
    assert g_pow(A, 2) == ideal_from_gens(R, [g * h for g in a for h in a])
    C = g_intersect(A, B)
    D = g_colon(A, B)
    # membership oracle on random homogeneous elements, including fractional ones
    for s in random_gens(rng, R, 6):
        for t in (s, s * xq(1, -2) if R.ctx == Q else s):
            assert g_contains(C, t) == (g_contains(A, t) and g_contains(B, t))
            assert g_contains(D, t) == all(g_contains(A, t * h) for h in b)


@pytest.mark.parametrize("seed", range(8))
def test_v_closure_laws(seed):
    rng = random.Random(100 + seed)
    R = RINGS[seed % len(RINGS)]
    a = random_gens(rng, R, 3)
    I, J = ideal_from_gens(R, a[:2]), ideal_from_gens(R, a)
    Iv = v_close(I)
    assert g_le(I, Iv) and v_close(Iv) == Iv and g_le(Iv, v_close(J))
    assert g_inverse(Iv) == g_inverse(I)


def test_principal_ideals_are_divisorial():
    K2 = BaseCtx(2)
    R = ring_pullback(K2, mod_from_gens(K2, [K2.one()]))
    I = principal(R, HomElem(1 / K2.sqrt(2), 1))
    assert v_close(I) == I
    assert g_mul(I, g_inverse(I)) == unit_ideal(R)


def test_finite_type_detection():
    K2 = BaseCtx(2)
    R = ring_pullback(K2, mod_from_gens(K2, [K2.one()]))
    xK = from_components(R, 1, [], CoefModule.full(K2))
    assert xK.finite_type == "no"
    I = principal(R, HomElem(K2.one(), 1))
    assert I.finite_type == "yes"
    listed = from_components(R, 1, [mod_from_gens(K2, [K2.one()])], CoefModule.full(K2))
    assert listed.finite_type == "yes" and listed.generators() is not None


def test_colon_by_zero_is_an_error(ex22):
    R, I, _ = ex22
    with pytest.raises(ValueError):
        g_colon(I, GradedIdeal(R, 0, [], CoefModule.zero(Q)))


def test_mixed_rings_are_rejected(ex22):
    R, I, _ = ex22
    other = ideal_from_gens(RINGS[0], [xq(1, 1)])
    with pytest.raises(ValueError):
        g_add(I, other)


def test_hom_elem_printing():
    K = BaseCtx(-3)
    assert str(HomElem(K.elem(1, 1), 2)) == "(1+sqrt(-3))*x^2"
    assert str(xq(1, 1)) == "x"
    assert str(xq(3, 0)) == "3"
