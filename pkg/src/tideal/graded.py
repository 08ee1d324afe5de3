"""Graded rings R = sum A_n x^n and graded fractional ideals M = sum B_n x^n.

Every object is a finite table of coefficient modules followed by a constant
tail.  Products, sums, intersections and colons are computed exactly: the
degree at which each result becomes constant follows from the tail starts
of its arguments, so no component is ever guessed.
"""

from __future__ import annotations

import itertools
from functools import lru_cache
from typing import Iterable, Optional, Sequence

from .quadratic import (
    BaseCtx, CoefModule, QuadElem, mod_add, mod_colon, mod_contains,
    mod_intersect, mod_le, mod_mul, mod_scale, mod_sum,
)

MIN_DEGREE_LIMIT = -64
MAX_RING_DEGREE = 512
MAX_KEPT_GENS = 24

YES, NO, UNKNOWN = "yes", "no", "unknown"


class InvariantError(AssertionError):
    """An internal consistency check failed."""


class HomElem:
    """A homogeneous element coef * x^deg with coef != 0."""

    __slots__ = ("coef", "deg")

    def __init__(self, coef: QuadElem, deg: int):
        if not coef:
            raise ValueError("homogeneous element must be nonzero")
        self.coef = coef
        self.deg = deg

    @property
    def ctx(self) -> BaseCtx:
        return self.coef.ctx

    def __mul__(self, other: "HomElem") -> "HomElem":
        return HomElem(self.coef * other.coef, self.deg + other.deg)

    def __pow__(self, k: int) -> "HomElem":
        return HomElem(self.coef ** k, self.deg * k)

    def inverse(self) -> "HomElem":
        return HomElem(self.coef.inverse(), -self.deg)

    def __eq__(self, other):
        return isinstance(other, HomElem) and self.coef == other.coef and self.deg == other.deg

    def __hash__(self):
        return hash((self.coef, self.deg))

    def __str__(self):
        c = str(self.coef)
        if self.deg == 0:
            return c
        xs = "x" if self.deg == 1 else f"x^{self.deg}"
        if self.coef == 1:
            return xs
        if "+" in c[1:] or "-" in c[1:]:
            c = f"({c})"
        return f"{c}*{xs}"

    def __repr__(self):
        return f"HomElem({self})"


def _normalize(ctx: BaseCtx, lo: int, comps: Sequence[CoefModule], tail: CoefModule):
    """Canonical (start, comps, tail): no leading zeros, no trailing tail copies."""
    comps = list(comps)
    while comps and comps[-1] == tail:
        comps.pop()
    i = 0
    while i < len(comps) and comps[i].is_zero:
        i += 1
    if i == len(comps) and tail.is_zero:
        return 0, (), tail
    return lo + i, tuple(comps[i:]), tail


class _Graded:
    __slots__ = ("ctx", "start", "comps", "tail", "_hash")

    def comp(self, n: int) -> CoefModule:
        if n < self.start:
            return CoefModule.zero(self.ctx)
        i = n - self.start
        if i < len(self.comps):
            return self.comps[i]
        return self.tail

    @property
    def tail_start(self) -> int:
        return self.start + len(self.comps)

    @property
    def is_zero(self) -> bool:
        return not self.comps and self.tail.is_zero

    def window(self):
        return range(self.start, self.tail_start + 1)

    def describe(self) -> str:
        parts = [f"{n}: {self.comp(n)}" for n in range(self.start, self.tail_start)]
        parts.append(f"{self.tail_start}+: {self.tail}")
        return "{" + "; ".join(parts) + "}"


class GradedRing(_Graded):
    """R = sum_{n>=0} A_n x^n with A_n constant from ``tail_start`` on."""

    __slots__ = ("gens",)

    def __init__(self, ctx: BaseCtx, comps: Sequence[CoefModule], tail: CoefModule,
                 gens: Optional[Sequence[HomElem]] = None, check: bool = True):
        start, comps, tail = _normalize(ctx, 0, comps, tail)
        if start != 0:
            raise ValueError("degree-0 component of a ring must be nonzero")
        self.ctx = ctx
        self.start = 0
        self.comps = comps
        self.tail = tail
        self.gens = tuple(gens) if gens else None
        self._hash = hash(("ring", ctx.d, comps, tail))
        if check:
            self.check()

    def check(self) -> None:
        A0 = self.comp(0)
        if not mod_contains(A0, self.ctx.one()):
            raise ValueError("A_0 must contain 1")
        if self.tail.is_zero:
            raise ValueError("components must stay nonzero (domain with x transcendental)")
        T = self.tail_start
        for i in range(0, 2 * T + 2):
            for j in range(i, 2 * T + 2):
                if not mod_le(mod_mul(self.comp(i), self.comp(j)), self.comp(i + j)):
                    raise ValueError(f"A_{i} * A_{j} is not contained in A_{i + j}")

    def __eq__(self, other):
        return (isinstance(other, GradedRing) and self._hash == other._hash
                and self.ctx == other.ctx and self.comps == other.comps and self.tail == other.tail)

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"GradedRing({self.ctx!r}, {self.describe()})"


class GradedIdeal(_Graded):
    """A graded fractional ideal over ``ring``."""

    __slots__ = ("ring", "gens", "_finite")

    def __init__(self, ring: GradedRing, lo: int, comps: Sequence[CoefModule], tail: CoefModule,
                 gens: Optional[Sequence[HomElem]] = None, finite: Optional[str] = None):
        ctx = ring.ctx
        start, comps, tail = _normalize(ctx, lo, comps, tail)
        if start < MIN_DEGREE_LIMIT:
            raise InvariantError(f"minimal degree {start} below limit {MIN_DEGREE_LIMIT}")
        self.ring = ring
        self.ctx = ctx
        self.start = start
        self.comps = comps
        self.tail = tail
        self.gens = tuple(gens) if gens else None
        self._finite = YES if gens else finite
        self._hash = hash(("ideal", ring._hash, start, comps, tail))

    @property
    def min_deg(self) -> int:
        return self.start

    @property
    def finite_type(self) -> str:
        if self._finite is None:
            self._finite = _detect_finite_type(self)
        return self._finite

    def generators(self) -> Optional[tuple[HomElem, ...]]:
        """An explicit finite generating set, when one is known or found."""
        if self.gens is None and self.finite_type != NO:
            gens = _candidate_gens(self)
            if ideal_from_gens(self.ring, gens) == self:
                self.gens = tuple(gens)
                self._finite = YES
        return self.gens

    def __eq__(self, other):
        return (isinstance(other, GradedIdeal) and self._hash == other._hash
                and self.ring == other.ring and self.start == other.start
                and self.comps == other.comps and self.tail == other.tail)

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"GradedIdeal({self.describe()})"

    def __str__(self):
        return self.describe()

    def __contains__(self, s: HomElem) -> bool:
        return g_contains(self, s)

    def __le__(self, other: "GradedIdeal") -> bool:
        return g_le(self, other)

    def __mul__(self, other):
        return g_mul(self, other)

    def __add__(self, other):
        return g_add(self, other)

    def __pow__(self, n: int):
        return g_pow(self, n)


# --- constructors -------------------------------------------------------------

def ring_from_gens(ctx: BaseCtx, coeff_ring: CoefModule, gens: Sequence[HomElem],
                   window: int = MAX_RING_DEGREE) -> GradedRing:
    """The subring coeff_ring[g_1, ..., g_k] of K[x].

    Components are built degree by degree until they stay constant; if that
    has not happened by degree ``window`` the ring is rejected.
    """
    if not gens:
        raise ValueError("at least one generator is required")
    for g in gens:
        if g.deg <= 0:
            raise ValueError(f"generator {g} must have positive degree")
        if g.ctx != ctx:
            raise ValueError(f"generator {g} lives in {g.ctx!r}, not {ctx!r}")
    if not mod_le(mod_mul(coeff_ring, coeff_ring), coeff_ring) or not mod_contains(coeff_ring, ctx.one()):
        raise ValueError("coefficient module is not a ring")
    top = max(g.deg for g in gens)
    comps = [coeff_ring]
    zero = CoefModule.zero(ctx)
    while True:
        n = len(comps)
        # A_n = sum_g c_g * A_{n - deg g}
        comps.append(mod_sum(ctx, [mod_scale(comps[n - g.deg], g.coef) if n >= g.deg and not comps[n - g.deg].is_zero
                                   else zero for g in gens]))
        # constancy over top+1 consecutive degrees propagates through the recurrence
        if n >= top and all(comps[n - k] == comps[n] for k in range(top + 1)):
            break
        if n > window:
            raise ValueError("ring components do not become constant; eventually "
                             "periodic rings such as Z[2x, x^2] are not supported")
    tail = comps[-1]
    return GradedRing(ctx, comps[:-1], tail, gens=gens)


def ring_pullback(ctx: BaseCtx, d0: CoefModule) -> GradedRing:
    """d0 + x K[x]."""
    if not mod_le(mod_mul(d0, d0), d0) or not mod_contains(d0, ctx.one()):
        raise ValueError("d0 is not a ring")
    return GradedRing(ctx, [d0], CoefModule.full(ctx))


def ring_polynomial(ctx: BaseCtx, coeff_ring: CoefModule) -> GradedRing:
    return ring_from_gens(ctx, coeff_ring, [HomElem(ctx.one(), 1)])


def ideal_from_gens(R: GradedRing, gens: Sequence[HomElem]) -> GradedIdeal:
    if not gens:
        raise ValueError("an ideal needs at least one generator")
    for g in gens:
        if g.ctx != R.ctx:
            raise ValueError(f"generator {g} lives in {g.ctx!r}, not {R.ctx!r}")
    lo = min(g.deg for g in gens)
    hi = max(g.deg for g in gens) + R.tail_start
    comps = []
    for n in range(lo, hi + 1):
        comps.append(mod_sum(R.ctx, [mod_scale(R.comp(n - g.deg), g.coef)
                                     for g in gens if n >= g.deg]))
    return GradedIdeal(R, lo, comps[:-1], comps[-1], gens=gens)


def principal(R: GradedRing, s: HomElem) -> GradedIdeal:
    return ideal_from_gens(R, [s])


def unit_ideal(R: GradedRing) -> GradedIdeal:
    return GradedIdeal(R, 0, R.comps, R.tail, gens=[HomElem(R.ctx.one(), 0)])


def from_components(R: GradedRing, lo: int, comps: Sequence[CoefModule], tail: CoefModule,
                    check: bool = True) -> GradedIdeal:
    """An ideal given by explicit components; verified to be an R-module."""
    M = GradedIdeal(R, lo, comps, tail)
    if check:
        check_module(M)
    return M


def check_module(M: GradedIdeal) -> None:
    """Raise ValueError unless A_i * B_j lies in B_{i+j} for all i, j."""
    R = M.ring
    if M.is_zero:
        return
    TA, TB = R.tail_start, M.tail_start
    for j in range(M.start, TB + 1):
        for i in range(0, max(TA, TB - M.start) + 1):
            if not mod_le(mod_mul(R.comp(i), M.comp(j)), M.comp(i + j)):
                raise ValueError(f"not an R-module: A_{i} * B_{j} not in B_{i + j}")


# --- finite generation ----------------------------------------------------------

def _candidate_gens(M: GradedIdeal) -> list[HomElem]:
    gens = []
    for n in range(M.start, M.tail_start + M.ring.tail_start + 1):
        B = M.comp(n)
        if B.is_lattice:
            gens.extend(HomElem(b, n) for b in B.basis)
        elif B.is_full:
            gens.append(HomElem(M.ctx.one(), n))
    return gens


def _detect_finite_type(M: GradedIdeal) -> str:
    if M.is_zero:
        return NO
    R = M.ring
    first_full = next((n for n in range(R.tail_start + 1) if R.comp(n).is_full), None)
    # a full component that no generator can reach through full ring components
    for n in range(M.start, M.tail_start + 1):
        if M.comp(n).is_full and (first_full is None or n - M.start < first_full):
            return NO
    gens = _candidate_gens(M)
    if ideal_from_gens(R, gens) == M:
        M.gens = tuple(gens)
        return YES
    return UNKNOWN


# --- arithmetic -------------------------------------------------------------------

def _same_ring(M: _Graded, N: _Graded) -> None:
    if isinstance(M, GradedIdeal) and isinstance(N, GradedIdeal) and M.ring != N.ring:
        raise ValueError("operands live over different rings")


def seq_mul(ctx: BaseCtx, M: _Graded, N: _Graded):
    """(lo, comps, tail) of the graded product sequence C_n = sum M_i N_{n-i}."""
    if M.is_zero or N.is_zero:
        return 0, [], CoefModule.zero(ctx)
    sM, sN = M.start, N.start
    TM, TN = M.tail_start, N.tail_start
    lo, hi = sM + sN, TM + TN
    out = []
    for n in range(lo, hi + 1):
        pairs = {(M.comp(min(i, TM)), N.comp(min(n - i, TN))) for i in range(sM, n - sN + 1)}
        out.append(mod_sum(ctx, [mod_mul(a, b) for a, b in pairs]))
    return lo, out[:-1], out[-1]


def _combine(M: GradedIdeal, N: GradedIdeal, op):
    _same_ring(M, N)
    lo = min(M.start, N.start)
    hi = max(M.tail_start, N.tail_start)
    comps = [op(M.comp(n), N.comp(n)) for n in range(lo, hi + 1)]
    return GradedIdeal(M.ring, lo, comps[:-1], comps[-1])


@lru_cache(maxsize=None)
def g_mul(M: GradedIdeal, N: GradedIdeal) -> GradedIdeal:
    _same_ring(M, N)
    lo, comps, tail = seq_mul(M.ctx, M, N)
    finite = YES if M.finite_type == YES and N.finite_type == YES else None
    gens = None
    if M.gens and N.gens and len(M.gens) * len(N.gens) <= MAX_KEPT_GENS:
        gens = [a * b for a, b in itertools.product(M.gens, N.gens)]
    return GradedIdeal(M.ring, lo, comps, tail, gens=gens, finite=finite)


@lru_cache(maxsize=None)
def g_add(M: GradedIdeal, N: GradedIdeal) -> GradedIdeal:
    out = _combine(M, N, mod_add)
    if M.finite_type == YES and N.finite_type == YES:
        out._finite = YES
        if M.gens and N.gens and len(M.gens) + len(N.gens) <= MAX_KEPT_GENS:
            out.gens = M.gens + N.gens
    return out


@lru_cache(maxsize=None)
def g_intersect(M: GradedIdeal, N: GradedIdeal) -> GradedIdeal:
    return _combine(M, N, mod_intersect)


@lru_cache(maxsize=None)
def g_pow(M: GradedIdeal, n: int) -> GradedIdeal:
    if n < 0:
        raise ValueError("negative power")
    if n == 0:
        return unit_ideal(M.ring)
    if n == 1:
        return M
    return g_mul(g_pow(M, n - 1), M)


def g_sum(ideals: Iterable[GradedIdeal]) -> GradedIdeal:
    ideals = list(ideals)
    out = ideals[0]
    for I in ideals[1:]:
        out = g_add(out, I)
    return out


@lru_cache(maxsize=None)
def g_colon(M: GradedIdeal, N: GradedIdeal) -> GradedIdeal:
    """(M : N) = {f : f N subset of M}, graded."""
    _same_ring(M, N)
    if N.is_zero:
        raise ValueError("colon by the zero ideal")
    ctx = M.ctx
    sM, sN = M.start, N.start
    TM, TN = M.tail_start, N.tail_start
    lo, hi = sM - sN, TM - sN
    if M.is_zero:
        return GradedIdeal(M.ring, 0, [], CoefModule.zero(ctx))
    if lo < MIN_DEGREE_LIMIT:
        raise InvariantError(f"colon reaches degree {lo}, below limit {MIN_DEGREE_LIMIT}")
    comps = []
    for n in range(lo, hi + 1):
        # beyond j = max(TN, TM - n) every factor is colon(tail M, tail N)
        C = CoefModule.full(ctx)
        for j in range(sN, max(TN, TM - n) + 1):
            C = mod_intersect(C, mod_colon(M.comp(n + j), N.comp(j)))
            if C.is_zero:
                break
        comps.append(C)
    out = GradedIdeal(M.ring, lo, comps[:-1], comps[-1])
    if out.is_zero:
        return out
    check_module(out)
    return out


def g_inverse(M: GradedIdeal) -> GradedIdeal:
    return g_colon(unit_ideal(M.ring), M)


@lru_cache(maxsize=None)
def v_close(M: GradedIdeal) -> GradedIdeal:
    """(M^-1)^-1."""
    if M.is_zero:
        raise ValueError("v-closure of the zero ideal")
    return g_inverse(g_inverse(M))


def g_contains(M: GradedIdeal, s: HomElem) -> bool:
    return mod_contains(M.comp(s.deg), s.coef)


def g_le(M: GradedIdeal, N: GradedIdeal) -> bool:
    _same_ring(M, N)
    if M.is_zero:
        return True
    lo = M.start
    hi = max(M.tail_start, N.tail_start)
    return all(mod_le(M.comp(n), N.comp(n)) for n in range(lo, hi + 1))


def g_eq(M: GradedIdeal, N: GradedIdeal) -> bool:
    return M == N


@lru_cache(maxsize=None)
def g_scale(M: GradedIdeal, s: HomElem) -> GradedIdeal:
    """s * M."""
    comps = [mod_scale(B, s.coef) for B in M.comps]
    gens = [s * g for g in M.gens] if M.gens else None
    return GradedIdeal(M.ring, M.start + s.deg, comps, mod_scale(M.tail, s.coef), gens=gens,
                       finite=M._finite)


def monic(ctx: BaseCtx, deg: int) -> HomElem:
    return HomElem(ctx.one(), deg)
