from fractions import Fraction as F
from itertools import combinations
from math import gcd

import pytest
from hypothesis import assume, given, strategies as st

from tideal.quadratic import (
    BaseCtx, CoefModule, Q, decompose, embed_module, hnf, mod_add, mod_colon, mod_contains,
    mod_from_gens, mod_intersect, mod_le, mod_mul, mod_scale, restrict_module, squarefree_part,
    standard_order,
)

CTXS = [Q, BaseCtx(2), BaseCtx(-3), BaseCtx(5), BaseCtx(-1)]

rationals = st.builds(F, st.integers(-8, 8), st.integers(1, 4))


@st.composite
def ctx_and_elems(draw, k_min=1, k_max=3):
    ctx = draw(st.sampled_from(CTXS))
    k = draw(st.integers(k_min, k_max))
    elems = []
    for _ in range(k):
        a = draw(rationals)
        b = draw(rationals) if ctx.d is not None else F(0)
        elems.append(ctx.elem(a, b))
    return ctx, elems


def covolume(ctx, gens):
    """Covolume of the lattice spanned by gens, from the gcd of maximal minors."""
    vecs = [g.coords() for g in gens]
    w = ctx.dim
    rank = _rank(vecs, w)
    if rank < w:
        return None
    den = 1
    for v in vecs:
        for x in v:
            den = den * x.denominator // gcd(den, x.denominator)
    ints = [[int(x * den) for x in v] for v in vecs]
    g = 0
    for rows in combinations(ints, w):
        g = gcd(g, abs(_det(rows)))
    return F(g, den ** w)


def _det(rows):
    if len(rows) == 1:
        return rows[0][0]
    return rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]


def _rank(vecs, w):
    nz = [v for v in vecs if any(v)]
    if not nz:
        return 0
    if w == 1:
        return 1
    return 2 if any(_det([u, v]) for u, v in combinations(nz, 2)) else 1


def basis_covolume(M):
    rows = [b.coords() for b in M.basis]
    return abs(F(_det(rows)))


# --- scalar arithmetic ------------------------------------------------------------

def test_squarefree_part():
    assert squarefree_part(12) == (2, 3)
    assert squarefree_part(-27) == (3, -3)
    assert squarefree_part(7) == (1, 7)


def test_ctx_rejects_non_squarefree():
    with pytest.raises(ValueError):
        BaseCtx(8)
    with pytest.raises(ValueError):
        BaseCtx(1)


def test_sqrt_of_multiples_and_squares():
    K = BaseCtx(2)
    assert K.sqrt(8) == K.elem(0, 2)
    assert K.sqrt(9) == K.elem(3)
    with pytest.raises(ValueError):
        K.sqrt(3)
    with pytest.raises(ValueError):
        Q.sqrt(2)


@given(ctx_and_elems(2, 2))
def test_field_axioms(data):
    ctx, (u, v) = data
    assert u * v == v * u
    assert (u + v) - v == u
    if v:
        assert (u / v) * v == u
        assert v * v.inverse() == ctx.one()
    assert (u * v).norm() == u.norm() * v.norm()


def test_element_printing():
    K = BaseCtx(-3)
    assert str(K.elem(1, 1)) == "1+sqrt(-3)"
    assert str(BaseCtx(2).elem(0, F(1, 2))) == "1/2*sqrt(2)"


# --- Hermite normal form -------------------------------------------------------------

@given(st.lists(st.lists(st.integers(-20, 20), min_size=2, max_size=2), min_size=1, max_size=4))
def test_hnf_shape(rows):
    ech = hnf(rows, 2)
    pivots = [next(i for i, x in enumerate(r) if x) for r in ech]
    assert pivots == sorted(set(pivots))
    for r, p in zip(ech, pivots):
        assert r[p] > 0
    # entries above a pivot are reduced modulo the pivot
    for k, (r, p) in enumerate(zip(ech, pivots)):
        for r2 in ech[:k]:
            assert 0 <= r2[p] < r[p]


# --- modules against independent oracles ------------------------------------------------

@given(ctx_and_elems())
def test_module_spans_its_generators(data):
    ctx, gens = data
    M = mod_from_gens(ctx, gens)
    assert all(mod_contains(M, g) for g in gens)
    cov = covolume(ctx, gens)
    if cov is not None:
        assert M.rank == ctx.dim
        assert basis_covolume(M) == cov


@given(ctx_and_elems(2, 3), st.permutations(range(3)))
def test_canonical_form_ignores_generator_order(data, perm):
    ctx, gens = data
    order = [i for i in perm if i < len(gens)]
    shuffled = [gens[i] for i in order]
    # a unimodular change: add the second generator to the first
    shuffled[0] = shuffled[0] + shuffled[1]
    assert mod_from_gens(ctx, gens) == mod_from_gens(ctx, shuffled)


@given(ctx_and_elems(2, 4))
def test_sum_and_product_match_generator_oracles(data):
    ctx, gens = data
    k = len(gens) // 2
    A, B = mod_from_gens(ctx, gens[:k]), mod_from_gens(ctx, gens[k:])
    assert mod_add(A, B) == mod_from_gens(ctx, gens)
    assert mod_mul(A, B) == mod_from_gens(ctx, [a * b for a in gens[:k] for b in gens[k:]])


@given(ctx_and_elems(3, 5))
def test_intersection_membership_and_covolume(data):
    ctx, gens = data
    c = gens.pop()
    k = len(gens) // 2
    A, B = mod_from_gens(ctx, gens[:k]), mod_from_gens(ctx, gens[k:])
    C = mod_intersect(A, B)
    assert mod_le(C, A) and mod_le(C, B)
    for m in (1, 2, 6, 12):
        assert mod_contains(C, c * m) == (mod_contains(A, c * m) and mod_contains(B, c * m))
    if A.rank == ctx.dim and B.rank == ctx.dim:
        # covol(A cap B) * covol(A + B) = covol(A) * covol(B)
        assert basis_covolume(C) * basis_covolume(mod_add(A, B)) == basis_covolume(A) * basis_covolume(B)


@given(ctx_and_elems(3, 5))
def test_colon_is_the_largest_multiplier(data):
    ctx, gens = data
    probe = gens.pop()
    k = len(gens) // 2
    A, B = mod_from_gens(ctx, gens[:k]), mod_from_gens(ctx, gens[k:])
    assume(not B.is_zero and not A.is_zero)
    C = mod_colon(A, B)
    assert mod_le(mod_mul(C, B), A)
    for m in (1, 2, 3, 12):
        c = probe * m
        assert mod_contains(C, c) == all(mod_contains(A, c * b) for b in B.basis)


@given(ctx_and_elems(2, 4))
def test_scale(data):
    ctx, gens = data
    c = gens.pop()
    assume(c)
    M = mod_from_gens(ctx, gens)
    assert mod_scale(M, c) == mod_from_gens(ctx, [g * c for g in gens])


@given(ctx_and_elems(2, 4))
def test_decompose_finds_certified_coefficients(data):
    ctx, gens = data
    parts = [(ctx.one(), mod_from_gens(ctx, gens[:1])), (gens[-1], mod_from_gens(ctx, gens[1:]))]
    target = gens[0] * 3 + gens[-1] * gens[1] * 2
    coeffs = decompose(target, parts)
    assert coeffs is not None
    assert sum((m * a for (m, _), a in zip(parts, coeffs)), ctx.elem()) == target
    for (_, mod), a in zip(parts, coeffs):
        assert mod_contains(mod, a)


def test_decompose_reports_impossible_targets():
    Z = standard_order(Q)
    two = mod_from_gens(Q, [Q.elem(2)])
    assert decompose(Q.elem(3), [(Q.one(), two)]) is None
    assert decompose(Q.elem(3), [(Q.one(), two), (Q.elem(3), Z)]) is not None


# --- frozen values ---------------------------------------------------------------------

def test_frozen_module_values():
    K3, K2 = BaseCtx(-3), BaseCtx(2)
    r3, r2 = K3.sqrt(-3), K2.sqrt(2)
    assert str(mod_from_gens(K3, [K3.elem(2), 1 + r3])) == "<1+sqrt(-3), 2*sqrt(-3)>"
    assert str(mod_from_gens(K2, [1 / r2, K2.elem(F(1, 2))])) == "<1/2, 1/2*sqrt(2)>"
    M = mod_from_gens(K2, [K2.elem(2), r2])
    assert str(mod_mul(M, M)) == "<2, 2*sqrt(2)>"
    Z2 = standard_order(K2)
    assert mod_intersect(mod_from_gens(K2, [K2.one(), 1 / r2]), Z2) == Z2
    Zq = standard_order(Q)
    assert mod_colon(Zq, mod_from_gens(Q, [Q.elem(F(1, 2))])) == mod_from_gens(Q, [Q.elem(2)])
    assert not mod_contains(mod_scale(standard_order(K3), K3.elem(2)), 1 + r3)


def test_zero_and_full_modules():
    K = BaseCtx(2)
    Z, F_, O = CoefModule.zero(K), CoefModule.full(K), standard_order(K)
    assert mod_add(Z, O) == O and mod_add(F_, O) == F_
    assert mod_mul(Z, F_) == Z and mod_mul(F_, O) == F_
    assert mod_intersect(F_, O) == O
    assert mod_colon(O, F_) == Z
    assert mod_colon(F_, O) == F_
    assert str(Z) == "0" and str(F_) == "K"


def test_embed_and_restrict():
    K = BaseCtx(5)
    M = mod_from_gens(Q, [Q.elem(F(3, 2))])
    E = embed_module(M, K)
    assert E.rank == 1 and restrict_module(E, Q) == M
    with pytest.raises(ValueError):
        restrict_module(standard_order(K), Q)


def test_context_mismatch_is_rejected():
    with pytest.raises(ValueError):
        mod_add(standard_order(Q), standard_order(BaseCtx(2)))
    with pytest.raises(ValueError):
        BaseCtx(2).one() + BaseCtx(3).one()
