"""t-closure, (t-)reductions, (t-)integral and radical membership.

Every query returns a :class:`Verdict`.  ``yes`` and ``no`` carry a
certificate whose ``verify()`` recomputes the claim from the graded
primitives; ``no_upto`` means the bounded search found no witness and no
exact refutation rule applied; ``unknown`` means some t-closure involved was
only a lower bound, so even the bounded search is inconclusive.

Exact ``no`` comes from exactly three rules: a principal ideal (PrincipalRule),
a verified periodicity of the power sequence (PeriodicityCert), or a degree
obstruction (StructuralZero).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Any, NamedTuple, Optional, Sequence

from .graded import (
    YES, GradedIdeal, HomElem, g_add, g_contains, g_le, g_mul, g_pow, g_scale,
    ideal_from_gens, principal, unit_ideal, v_close,
)
from .quadratic import QuadElem, decompose, mod_scale

DEFAULT_MAX_N = 8

YES_K, NO_K, NO_UPTO_K, UNKNOWN_K = "yes", "no", "no_upto", "unknown"
# the only certificate kinds allowed to back an exact No
EXACT_NO_RULES = ("PrincipalRule", "PeriodicityCert", "StructuralZero")


class TClosure(NamedTuple):
    ideal: GradedIdeal
    exact: bool


@dataclass(frozen=True)
class Verdict:
    kind: str
    n: Optional[int] = None
    cert: Any = None
    bound: Optional[int] = None

    @property
    def is_yes(self) -> bool:
        return self.kind == YES_K

    @property
    def is_no(self) -> bool:
        return self.kind == NO_K

    def verify(self) -> bool:
        """Replay the certificate; bounded verdicts have nothing to replay."""
        if self.kind in (YES_K, NO_K):
            return self.cert is not None and self.cert.verify()
        return True

    def __str__(self):
        if self.kind == YES_K:
            return f"Yes({self.n})"
        if self.kind == NO_K:
            return f"No[{self.cert.rule}]"
        if self.kind == NO_UPTO_K:
            return f"NoUpTo({self.bound})"
        return f"Unknown({self.bound})"

    def to_dict(self) -> dict:
        out: dict = {"kind": self.kind}
        if self.n is not None:
            out["n"] = self.n
        if self.bound is not None:
            out["bound"] = self.bound
        if self.cert is not None:
            out["certificate"] = self.cert.to_dict()
        return out


# --- t-closure --------------------------------------------------------------------

def _truncated_gens(M: GradedIdeal, k: int) -> list[HomElem]:
    ctx = M.ctx
    units = [ctx.one()] if ctx.is_rational else [ctx.one(), ctx.elem(0, 1)]
    gens = []
    for n in range(M.start, M.tail_start + M.ring.tail_start + k + 1):
        B = M.comp(n)
        if B.is_lattice:
            gens.extend(HomElem(b, n) for b in B.basis)
        elif B.is_full:
            gens.extend(HomElem(u * QuadElem(1, 0, ctx) / (2 ** j), n)
                        for u in units for j in range(k + 1))
    return gens


@lru_cache(maxsize=None)
def t_close(M: GradedIdeal) -> TClosure:
    """M_t.  Exact for finitely generated M (then M_t = M_v).

    Otherwise the union of v-closures of a growing family of finitely
    generated subideals is returned, flagged exact only when it already
    reaches the upper bound M_v.
    """
    upper = v_close(M)
    if M.finite_type == YES:
        return TClosure(upper, True)
    lower, prev = M, None
    for k in range(4):
        J = ideal_from_gens(M.ring, _truncated_gens(M, k))
        lower = g_add(lower, v_close(J))
        if lower == upper:
            return TClosure(upper, True)
        if lower == prev:
            break
        prev = lower
    return TClosure(lower, False)


def closure(M: GradedIdeal, t: bool) -> TClosure:
    return t_close(M) if t else TClosure(M, True)


# --- certificates -----------------------------------------------------------------

def _name(t: bool) -> str:
    return "t" if t else "plain"


@dataclass(frozen=True)
class ReductionYes:
    J: GradedIdeal
    I: GradedIdeal
    n: int
    t: bool
    rule = "witness"

    def verify(self) -> bool:
        a, ea = closure(g_mul(self.J, g_pow(self.I, self.n)), self.t)
        b, eb = closure(g_pow(self.I, self.n + 1), self.t)
        return ea and eb and a == b and g_le(self.J, self.I)

    def to_dict(self):
        return {"rule": self.rule, "mode": _name(self.t), "n": self.n,
                "J*I^n": str(closure(g_mul(self.J, g_pow(self.I, self.n)), self.t).ideal),
                "I^(n+1)": str(closure(g_pow(self.I, self.n + 1), self.t).ideal)}


@dataclass(frozen=True)
class PrincipalRule:
    """I = sR, so J is a (t-)reduction of I for some n iff closure(J) = sR."""
    J: GradedIdeal
    I: GradedIdeal
    s: HomElem
    t: bool
    rule = "PrincipalRule"

    def verify(self) -> bool:
        sR = g_scale(unit_ideal(self.I.ring), self.s)
        cl, exact = closure(self.J, self.t)
        return self.I == sR and exact and cl != sR and g_le(self.J, self.I)

    def to_dict(self):
        return {"rule": self.rule, "mode": _name(self.t), "generator": str(self.s),
                "closure_of_J": str(closure(self.J, self.t).ideal)}


@dataclass(frozen=True)
class PeriodicityCert:
    """I^(n+p) = gamma * I^n for every n >= n0."""
    I: GradedIdeal
    n0: int
    p: int
    gamma: HomElem
    rule = "PeriodicityCert"

    def verify(self) -> bool:
        # n = n0 alone suffices by induction; the whole period is checked anyway
        return all(g_pow(self.I, n + self.p) == g_scale(g_pow(self.I, n), self.gamma)
                   for n in range(self.n0, self.n0 + self.p + 1))

    def to_dict(self):
        return {"rule": self.rule, "n0": self.n0, "p": self.p, "gamma": str(self.gamma)}


@dataclass(frozen=True)
class PeriodicNo:
    """With I^(n+p) = gamma I^n for n >= n0, failure on [0, n0+p) is failure for all n."""
    J: GradedIdeal
    I: GradedIdeal
    period: PeriodicityCert
    t: bool
    rule = "PeriodicityCert"

    def verify(self) -> bool:
        if self.period.I != self.I or not self.period.verify() or not g_le(self.J, self.I):
            return False
        for n in range(self.period.n0 + self.period.p):
            a, ea = closure(g_mul(self.J, g_pow(self.I, n)), self.t)
            b, eb = closure(g_pow(self.I, n + 1), self.t)
            if not (ea and eb) or a == b:
                return False
        return True

    def to_dict(self):
        return {"rule": self.rule, "mode": _name(self.t), **self.period.to_dict()}


@dataclass(frozen=True)
class MembershipYes:
    """s^n = sum_i a_i s^(n-i) with a_i in closure(I^i); ``coeffs[i-1] = a_i``."""
    s: HomElem
    I: GradedIdeal
    n: int
    coeffs: tuple
    t: bool
    rule = "witness"

    def verify(self) -> bool:
        c, d = self.s.coef, self.s.deg
        total = c ** self.n
        for i, a in enumerate(self.coeffs, start=1):
            if a:
                cl, _ = closure(g_pow(self.I, i), self.t)
                if not g_contains(cl, HomElem(a, i * d)):
                    return False
            total = total - a * c ** (self.n - i)
        return not total

    def equation(self) -> str:
        def power(k):
            return "" if k == 0 else "*s" if k == 1 else f"*s^{k}"
        terms = [f"s^{self.n}" if self.n > 1 else "s"]
        for i, a in enumerate(self.coeffs, start=1):
            if a:
                terms.append(f"({-a})*x^{i * self.s.deg}{power(self.n - i)}")
        return " + ".join(terms) + " = 0"

    def to_dict(self):
        return {"rule": self.rule, "mode": _name(self.t), "n": self.n, "equation": self.equation(),
                "coefficients": [str(a) for a in self.coeffs]}


@dataclass(frozen=True)
class RadicalYes:
    s: HomElem
    I: GradedIdeal
    k: int
    rule = "witness"

    def verify(self) -> bool:
        return g_contains(t_close(self.I).ideal, self.s ** self.k)

    def to_dict(self):
        return {"rule": self.rule, "k": self.k, "power": str(self.s ** self.k)}


@dataclass(frozen=True)
class StructuralZero:
    """Every power of s has degree <= 0 while I_t (inside I_v) starts in positive degree."""
    s: HomElem
    I: GradedIdeal
    rule = "StructuralZero"

    def verify(self) -> bool:
        return self.s.deg <= 0 < v_close(self.I).start

    def to_dict(self):
        return {"rule": self.rule, "deg_s": self.s.deg, "min_deg_Iv": v_close(self.I).start}


@dataclass(frozen=True)
class MembershipNo:
    """s is not (t-)integral over I because I is not a (t-)reduction of I + sR.

    route "t-reduction": t-integral implies t-reduction of I + sR.
    route "reduction": integral iff reduction of I + sR; for the t-variant this
    is used only when I = gR is principal, since then every (I^i)_t = I^i.
    """
    s: HomElem
    I: GradedIdeal
    route: str
    inner: Verdict
    t: bool
    generator: Optional[HomElem] = None

    @property
    def rule(self):
        return self.inner.cert.rule

    def verify(self) -> bool:
        L = g_add(self.I, principal(self.I.ring, self.s))
        cert = self.inner.cert
        if not self.inner.is_no or cert.J != self.I or cert.I != L or not cert.verify():
            return False
        if self.route == "t-reduction":
            return self.t and cert.t
        if cert.t:
            return False
        if self.t:
            g = self.generator
            return g is not None and self.I == g_scale(unit_ideal(self.I.ring), g)
        return True

    def to_dict(self):
        out = {"rule": self.rule, "route": self.route, "mode": _name(self.t),
               "inner": self.inner.to_dict()}
        if self.generator is not None:
            out["generator"] = str(self.generator)
        return out


# --- search helpers ---------------------------------------------------------------

def _small_combos(basis: Sequence[QuadElem], box: int = 2):
    """Nonzero integer combinations of basis, smallest coefficients first."""
    ranges = [range(-box, box + 1)] * len(basis)
    combos = sorted(itertools.product(*ranges), key=lambda v: (sum(map(abs, v)), [-x for x in v]))
    for coeffs in combos:
        if any(coeffs):
            yield sum((b * k for b, k in zip(basis, coeffs)), basis[0].ctx.elem())


def _ratio_candidates(X, Y):
    """Elements c with c * X == Y (X, Y coefficient modules)."""
    ctx = X.ctx
    if X.is_full and Y.is_full:
        yield ctx.one()
        return
    if not (X.is_lattice and Y.is_lattice) or X.rank != Y.rank:
        return
    x0 = X.basis[0]
    for y in _small_combos(Y.basis):
        c = y / x0
        if mod_scale(X, c) == Y:
            yield c


def principal_generator(I: GradedIdeal) -> Optional[HomElem]:
    """s with I = sR, if one is found among small candidates."""
    R = I.ring
    if I.is_zero:
        return None
    d = I.start
    unit = unit_ideal(R)
    for c in _ratio_candidates(R.comp(0), I.comp(d)):
        s = HomElem(c, d)
        if g_scale(unit, s) == I:
            return s
    return None


def find_periodicity(I: GradedIdeal, N: int = DEFAULT_MAX_N) -> Optional[PeriodicityCert]:
    """Search n0 + p <= N for a verified I^(n0+p) = gamma * I^n0."""
    for n0 in range(N):
        base = g_pow(I, n0)
        for p in range(1, N - n0 + 1):
            top = g_pow(I, n0 + p)
            deg = top.start - base.start
            for c in _ratio_candidates(base.comp(base.start), top.comp(top.start)):
                gamma = HomElem(c, deg)
                if g_scale(base, gamma) == top:
                    cert = PeriodicityCert(I, n0, p, gamma)
                    if cert.verify():
                        return cert
    return None


# --- reductions -------------------------------------------------------------------

def _reduction(J: GradedIdeal, I: GradedIdeal, N: int, t: bool) -> Verdict:
    if J.is_zero or I.is_zero:
        raise ValueError("ideals must be nonzero")
    if not g_le(J, I):
        raise ValueError("J is not contained in I")
    exact = True
    for n in range(N + 1):
        a, ea = closure(g_mul(J, g_pow(I, n)), t)
        b, eb = closure(g_pow(I, n + 1), t)
        if ea and eb:
            if a == b:
                return Verdict(YES_K, n=n, cert=ReductionYes(J, I, n, t), bound=N)
        else:
            exact = False
    s = principal_generator(I)
    if s is not None:
        cert = PrincipalRule(J, I, s, t)
        if cert.verify():
            return Verdict(NO_K, cert=cert, bound=N)
    period = find_periodicity(I, N)
    if period is not None:
        cert = PeriodicNo(J, I, period, t)
        if cert.verify():
            return Verdict(NO_K, cert=cert, bound=N)
    return Verdict(NO_UPTO_K if exact else UNKNOWN_K, bound=N)


def is_t_reduction(J: GradedIdeal, I: GradedIdeal, N: int = DEFAULT_MAX_N) -> Verdict:
    """Is (J I^n)_t = (I^(n+1))_t for some n >= 0?"""
    return _reduction(J, I, N, True)


def is_reduction(J: GradedIdeal, I: GradedIdeal, N: int = DEFAULT_MAX_N) -> Verdict:
    """Is J I^n = I^(n+1) for some n >= 0?"""
    return _reduction(J, I, N, False)


def is_trivial_t_reduction(J: GradedIdeal, I: GradedIdeal) -> bool:
    return t_close(J).ideal == t_close(I).ideal


# --- membership -------------------------------------------------------------------

def _member(s: HomElem, I: GradedIdeal, N: int, t: bool) -> Verdict:
    if I.is_zero:
        raise ValueError("ideal must be nonzero")
    c, d = s.coef, s.deg
    exact = True
    for n in range(1, N + 1):
        parts = []
        for i in range(1, n + 1):
            cl, e = closure(g_pow(I, i), t)
            exact = exact and e
            parts.append((c ** (n - i), cl.comp(i * d)))
        coeffs = decompose(c ** n, parts)
        if coeffs is not None:
            return Verdict(YES_K, n=n, cert=MembershipYes(s, I, n, tuple(coeffs), t), bound=N)
    if exact:
        L = g_add(I, principal(I.ring, s))
        if t:
            inner = is_t_reduction(I, L, N)
            if inner.is_no:
                return Verdict(NO_K, cert=MembershipNo(s, I, "t-reduction", inner, t), bound=N)
            g = principal_generator(I)
            if g is not None:
                inner = is_reduction(I, L, N)
                if inner.is_no:
                    return Verdict(NO_K, cert=MembershipNo(s, I, "reduction", inner, t, g), bound=N)
        else:
            inner = is_reduction(I, L, N)
            if inner.is_no:
                return Verdict(NO_K, cert=MembershipNo(s, I, "reduction", inner, t), bound=N)
    return Verdict(NO_UPTO_K if exact else UNKNOWN_K, bound=N)


def t_integral_member(s: HomElem, I: GradedIdeal, N: int = DEFAULT_MAX_N) -> Verdict:
    """Is s t-integral over I (monic equation with i-th coefficient in (I^i)_t)?"""
    return _member(s, I, N, True)


def integral_member(s: HomElem, I: GradedIdeal, N: int = DEFAULT_MAX_N) -> Verdict:
    """Is s integral over I (monic equation with i-th coefficient in I^i)?"""
    return _member(s, I, N, False)


def radical_member(s: HomElem, I: GradedIdeal, N: int = DEFAULT_MAX_N) -> Verdict:
    """Is some power s^k, k <= N, in I_t?"""
    cl, exact = t_close(I)
    for k in range(1, N + 1):
        if g_contains(cl, s ** k):
            return Verdict(YES_K, n=k, cert=RadicalYes(s, I, k), bound=N)
    cert = StructuralZero(s, I)
    if cert.verify():
        return Verdict(NO_K, cert=cert, bound=N)
    return Verdict(NO_UPTO_K if exact else UNKNOWN_K, bound=N)


# --- t-Rees algebra -----------------------------------------------------------------

@dataclass(frozen=True)
class TReesTrunc:
    """Levels (I^n)_t, n = 0..N, of the t-Rees algebra of I."""
    ideal: GradedIdeal
    levels: tuple = field(default=())
    exact: bool = True

    def check(self) -> bool:
        """Graded-subring condition: level_i * level_j inside level_(i+j)."""
        N = len(self.levels) - 1
        if self.levels[0] != unit_ideal(self.ideal.ring):
            return False
        return all(g_le(g_mul(self.levels[i], self.levels[j]), self.levels[i + j])
                   for i in range(N + 1) for j in range(i, N + 1 - i))


def t_rees_trunc(I: GradedIdeal, N: int) -> TReesTrunc:
    if N < 1:
        raise ValueError("N must be >= 1")
    levels = [unit_ideal(I.ring)]
    exact = True
    for n in range(1, N + 1):
        cl, e = t_close(g_pow(I, n))
        levels.append(cl)
        exact = exact and e
    return TReesTrunc(I, tuple(levels), exact)


def t_integral_lower_bound(I: GradedIdeal, candidates: Sequence[HomElem],
                           N: int = DEFAULT_MAX_N) -> GradedIdeal:
    """I plus every candidate proven t-integral over I: a subideal of the t-integral closure."""
    out = I
    for s in candidates:
        if t_integral_member(s, I, N).is_yes:
            out = g_add(out, principal(I.ring, s))
    return out
