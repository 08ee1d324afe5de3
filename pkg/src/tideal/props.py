"""Seeded randomized property suites over a few fixed graded rings.

Each suite draws ``count`` random instances and checks one structural law of
reductions, closures or integral membership.  Implications are checked only
when their hypothesis holds on the instance (e.g. a bounded search found a
witness), so an instance never fails merely because a bound was too small.
Every certificate produced along the way is replayed.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import lru_cache

from . import closure as cl
from . import graded as gr
from . import morphisms as mo
from .quadratic import BaseCtx, Q, standard_order

# small search bound keeps the suites fast; implications use derived bounds
SUITE_N = 4


@dataclass
class SuiteResult:
    name: str
    instances: int = 0
    checked: int = 0        # instances where the hypothesis held and the law was tested
    failures: int = 0
    replayed: int = 0
    notes: list = field(default_factory=list)

    def fail(self, msg: str) -> None:
        self.failures += 1
        if len(self.notes) < 5:
            self.notes.append(msg)


@lru_cache(maxsize=None)
def fixture_rings() -> dict:
    Z = standard_order(Q)
    K2 = BaseCtx(2)
    x = lambda c, d: gr.HomElem(Q.elem(c), d)
    return {
        "Z[x]": gr.ring_polynomial(Q, Z),
        "Z[3x,x^2,x^3]": gr.ring_from_gens(Q, Z, [x(3, 1), x(1, 2), x(1, 3)]),
        "Z[sqrt2][x]": gr.ring_polynomial(K2, standard_order(K2)),
    }


def random_elem(rng: random.Random, R: gr.GradedRing, dmax: int = 2, box: int = 3) -> gr.HomElem:
    """A nonzero homogeneous element of R of degree <= dmax."""
    while True:
        d = rng.randint(0, dmax)
        basis = R.comp(d).basis
        c = sum((b * rng.randint(-box, box) for b in basis), R.ctx.elem())
        if c:
            return gr.HomElem(c, d)


def random_ideal(rng: random.Random, R: gr.GradedRing, k: int = 2) -> gr.GradedIdeal:
    gens = [random_elem(rng, R) for _ in range(rng.randint(1, k))]
    return gr.ideal_from_gens(R, gens)


def random_subideal(rng: random.Random, I: gr.GradedIdeal) -> gr.GradedIdeal:
    """Drop, keep or multiply generators of I; the result always lies in I."""
    gens = list(I.generators())
    R = I.ring
    picked = [g for g in gens if rng.random() < 0.6] or [rng.choice(gens)]
    out = []
    for g in picked:
        roll = rng.random()
        if roll < 0.6:
            out.append(g)
        elif roll < 0.8:
            out.append(g * random_elem(rng, R, dmax=1, box=2))
        else:
            out.append(g * g)
    return gr.ideal_from_gens(R, out)


def _ring(rng: random.Random, names=None) -> gr.GradedRing:
    rings = fixture_rings()
    return rings[rng.choice(names or sorted(rings))]


def _replay(res: SuiteResult, *verdicts) -> None:
    for v in verdicts:
        if v.kind in (cl.YES_K, cl.NO_K):
            res.replayed += 1
            if not v.verify():
                res.fail(f"certificate failed to replay: {v.to_dict()}")
        if v.is_no and v.cert.rule not in cl.EXACT_NO_RULES + ("CompatCounterexample",):
            res.fail(f"exact no without an accepted rule: {v.cert.rule}")


def _t_equal_at(J, I, m) -> bool:
    a = cl.t_close(gr.g_mul(J, gr.g_pow(I, m)))
    b = cl.t_close(gr.g_pow(I, m + 1))
    return a.exact and b.exact and a.ideal == b.ideal


# --- suites ---------------------------------------------------------------------------

def suite_sum_product(rng, res):
    R = _ring(rng)
    I, I2 = random_ideal(rng, R), random_ideal(rng, R)
    J, J2 = random_subideal(rng, I), random_subideal(rng, I2)
    v1, v2 = cl.is_t_reduction(J, I, SUITE_N), cl.is_t_reduction(J2, I2, SUITE_N)
    _replay(res, v1, v2)
    if v1.is_yes and v2.is_yes:
        res.checked += 1
        bound = 2 * (v1.n + v2.n) + 1
        s = cl.is_t_reduction(gr.g_add(J, J2), gr.g_add(I, I2), bound)
        p = cl.is_t_reduction(gr.g_mul(J, J2), gr.g_mul(I, I2), bound)
        _replay(res, s, p)
        if not (s.is_yes and p.is_yes):
            res.fail(f"sum/product transport failed: {J} < {I}, {J2} < {I2}")


def suite_transitivity(rng, res):
    R = _ring(rng)
    I = random_ideal(rng, R, 3)
    J = random_subideal(rng, I)
    K = random_subideal(rng, J)
    v1, v2 = cl.is_t_reduction(K, J, SUITE_N), cl.is_t_reduction(J, I, SUITE_N)
    _replay(res, v1, v2)
    if v1.is_yes and v2.is_yes:
        res.checked += 1
        v = cl.is_t_reduction(K, I, v1.n + v2.n)
        _replay(res, v)
        if not v.is_yes:
            res.fail(f"transitivity failed: {K} < {J} < {I}")


def suite_powers(rng, res):
    R = _ring(rng)
    I = random_ideal(rng, R)
    J = random_subideal(rng, I)
    n = rng.randint(1, 3)
    Jn, In = gr.g_pow(J, n), gr.g_pow(I, n)
    v = cl.is_t_reduction(J, I, SUITE_N)
    w = cl.is_t_reduction(Jn, In, SUITE_N)
    _replay(res, v, w)
    if v.is_yes:
        res.checked += 1
        # J I^m ~ I^(m+1) gives J^n (I^n)^m ~ (I^n)^(m+1)
        if not _t_equal_at(Jn, In, v.n):
            res.fail(f"J t-reduction of I but J^{n} not of I^{n}: {J} < {I}")
    if w.is_yes:
        res.checked += 1
        # J^n I^(nm) ~ I^(n(m+1)) and J^(n-1) in I^(n-1) give J I^(nm+n-1) ~ I^(nm+n)
        if not _t_equal_at(J, I, n * w.n + n - 1):
            res.fail(f"J^{n} t-reduction of I^{n} but J not of I: {J} < {I}")


def suite_power_identity(rng, res):
    R = _ring(rng)
    gens = [random_elem(rng, R) for _ in range(rng.randint(1, 3))]
    k, n = len(gens), rng.randint(1, 3)
    J = gr.ideal_from_gens(R, gens)
    lhs = gr.g_mul(gr.ideal_from_gens(R, [g ** n for g in gens]), gr.g_pow(J, (k - 1) * (n - 1)))
    res.checked += 1
    if not gr.g_eq(lhs, gr.g_pow(J, (n - 1) * k + 1)):
        res.fail(f"power identity failed for k={k}, n={n}: {J}")


def suite_persistence(rng, res):
    R = _ring(rng)
    I = random_ideal(rng, R)
    J = random_subideal(rng, I)
    v = cl.is_t_reduction(J, I, SUITE_N)
    _replay(res, v)
    if v.is_yes:
        res.checked += 1
        for m in range(v.n + 1, v.n + 4):
            if not _t_equal_at(J, I, m):
                res.fail(f"t-reduction at {v.n} but not at {m}: {J} < {I}")
                break


def suite_colon(rng, res):
    R = _ring(rng)
    A, B, C = (random_ideal(rng, R) for _ in range(3))
    AB = gr.g_colon(A, B)
    res.checked += 1
    if gr.g_le(gr.g_mul(C, B), A) != gr.g_le(C, AB):
        res.fail(f"colon adjunction failed: A={A}, B={B}, C={C}")
    if not gr.g_le(gr.g_mul(B, AB), A):
        res.fail(f"B (A:B) not inside A: A={A}, B={B}")


def suite_vclose(rng, res):
    R = _ring(rng)
    J = random_ideal(rng, R)
    I = random_subideal(rng, J)
    Iv, Jv = gr.v_close(I), gr.v_close(J)
    res.checked += 1
    if not gr.g_le(I, Iv):
        res.fail(f"not extensive: {I}")
    if gr.v_close(Iv) != Iv:
        res.fail(f"not idempotent: {I}")
    if not gr.g_le(Iv, Jv):
        res.fail(f"not monotone: {I} < {J}")


def _member_candidate(rng, I):
    """A homogeneous element of R, biased toward I's closures."""
    R = I.ring
    roll = rng.random()
    if roll < 0.4:
        return random_elem(rng, R, dmax=3)
    gens = I.generators()
    g = rng.choice(gens)
    if roll < 0.7:
        return g * random_elem(rng, R, dmax=1, box=2)
    # elements of I_v often fail to lie in I
    cands = gr._candidate_gens(gr.v_close(I))
    return rng.choice(cands) if cands else g


def suite_membership_chain(rng, res):
    R = _ring(rng)
    I = random_ideal(rng, R)
    s = _member_candidate(rng, I)
    m = cl.integral_member(s, I, SUITE_N)
    t = cl.t_integral_member(s, I, SUITE_N)
    r = cl.radical_member(s, I, SUITE_N)
    _replay(res, m, t, r)
    if m.is_yes:
        res.checked += 1
        if not (t.is_yes and t.n <= m.n):
            res.fail(f"integral but not t-integral: {s} over {I}")
    if t.is_yes:
        res.checked += 1
        if not (r.is_yes and r.n <= t.n):
            res.fail(f"t-integral but not in the radical of I_t: {s} over {I}")
    if t.is_no and m.is_yes:
        res.fail(f"t-integral refuted for an integral element: {s} over {I}")


def suite_power_products(rng, res):
    R = _ring(rng)
    I = random_ideal(rng, R)
    s, s2 = _member_candidate(rng, I), _member_candidate(rng, I)
    v, w = cl.t_integral_member(s, I, SUITE_N), cl.t_integral_member(s2, I, SUITE_N)
    _replay(res, v, w)
    if v.is_yes and w.is_yes:
        res.checked += 1
        p = cl.t_integral_member(s * s2, gr.g_pow(I, 2), v.n * w.n)
        _replay(res, p)
        if not p.is_yes:
            res.fail(f"product {s * s2} not t-integral over I^2 = {gr.g_pow(I, 2)}")


def suite_addition(rng, res):
    R = _ring(rng)
    I = random_ideal(rng, R)
    s = _member_candidate(rng, I)
    s2 = _member_candidate(rng, I)
    if s2.deg != s.deg:
        s2 = s * random_elem(rng, R, dmax=0, box=3)
    v, w = cl.t_integral_member(s, I, SUITE_N), cl.t_integral_member(s2, I, SUITE_N)
    _replay(res, v, w)
    total = s.coef + s2.coef
    if v.is_yes and w.is_yes and total:
        res.checked += 1
        a = cl.t_integral_member(gr.HomElem(total, s.deg), I, v.n * w.n)
        _replay(res, a)
        if not a.is_yes:
            res.fail(f"sum of t-integral elements {s} + {s2} not t-integral over {I}")


def suite_integrally_closed(rng, res):
    R = _ring(rng, ["Z[x]", "Z[sqrt2][x]"])
    I = random_ideal(rng, R)
    s = _member_candidate(rng, I)
    v = cl.t_integral_member(s, I, SUITE_N)
    _replay(res, v)
    if v.is_yes:
        res.checked += 1
        closed, exact = cl.t_close(I)
        if not (exact and gr.g_contains(closed, s)):
            res.fail(f"t-integral witness {s} outside I_t for {I}")


def suite_scaling(rng, res):
    R = _ring(rng)
    I = random_ideal(rng, R)
    s = _member_candidate(rng, I)
    u = random_elem(rng, R, dmax=2)
    v = cl.t_integral_member(s, I, SUITE_N)
    _replay(res, v)
    if v.is_yes:
        res.checked += 1
        w = cl.t_integral_member(u * s, gr.g_scale(I, u), v.n)
        _replay(res, w)
        if not w.is_yes:
            res.fail(f"{u} * {s} not t-integral over {u} * I, I = {I}")


def suite_morphisms(rng, res):
    rings = fixture_rings()
    R, T = rings["Z[3x,x^2,x^3]"], rings["Z[x]"]
    incl = mo.GradedInclusion(R, T)
    I = random_ideal(rng, R)
    IT = mo.extend(I, incl)
    back = mo.contract(IT, incl)
    res.checked += 1
    if not gr.g_le(I, back):
        res.fail(f"I not inside the contraction of IT: {I}")
    # membership chain through the inclusion
    s = _member_candidate(rng, I)
    v = cl.t_integral_member(s, I, SUITE_N)
    _replay(res, v)
    if v.is_yes:
        res.checked += 1
        w = cl.t_integral_member(s, back, v.n)
        u = cl.t_integral_member(incl.embed(s), IT, v.n)
        _replay(res, w, u)
        if not (w.is_yes and u.is_yes and s.coef in R.comp(s.deg)):
            res.fail(f"membership chain broke for {s} over {I}")
    # localization transports t-reductions
    J = random_subideal(rng, I)
    r = cl.is_t_reduction(J, I, SUITE_N)
    _replay(res, r)
    if r.is_yes:
        res.checked += 1
        lr = cl.is_t_reduction(mo.localize(J), mo.localize(I), r.n)
        _replay(res, lr)
        if not lr.is_yes:
            res.fail(f"localization lost a t-reduction: {J} < {I}")


SUITES = {
    "sum_product": suite_sum_product,
    "transitivity": suite_transitivity,
    "powers": suite_powers,
    "power_identity": suite_power_identity,
    "persistence": suite_persistence,
    "colon": suite_colon,
    "vclose": suite_vclose,
    "membership_chain": suite_membership_chain,
    "power_products": suite_power_products,
    "addition": suite_addition,
    "integrally_closed": suite_integrally_closed,
    "scaling": suite_scaling,
    "morphisms": suite_morphisms,
}


def run_suite(name: str, count: int = 200, seed: int = 0) -> SuiteResult:
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    rng = random.Random(f"{name}:{seed}")
    res = SuiteResult(name)
    for _ in range(count):
        res.instances += 1
        SUITES[name](rng, res)
    return res


def run_all(count: int = 200, seed: int = 0) -> list[SuiteResult]:
    return [run_suite(name, count, seed) for name in SUITES]
