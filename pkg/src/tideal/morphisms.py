"""Graded inclusions R -> T, extension and contraction of ideals, localization.

Two shapes of inclusion are supported: a componentwise subring inclusion
(optionally along the base embedding Q -> Q(sqrt(d))), and the localization
R -> S^-1 R at S = all nonzero elements of the base ring of integers, which
turns every nonzero lattice component into the whole field.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

from .closure import (
    DEFAULT_MAX_N, NO_K, UNKNOWN_K, Verdict, t_close, t_integral_member,
)
from .graded import (
    GradedIdeal, GradedRing, HomElem, check_module, g_le, seq_mul, v_close,
)
from .quadratic import (
    CoefModule, embed_elem, embed_module, mod_intersect, mod_le, restrict_module,
)


class GradedInclusion:
    """A graded inclusion source -> target; checked componentwise on construction."""

    def __init__(self, source: GradedRing, target: GradedRing, kind: str = "subring"):
        self.source = source
        self.target = target
        self.kind = kind
        T = max(source.tail_start, target.tail_start)
        for n in range(T + 1):
            if not mod_le(self.embed_module(source.comp(n)), target.comp(n)):
                raise ValueError(f"A_{n} of the source is not inside A_{n} of the target")

    @property
    def base_embed(self) -> str:
        return "identity" if self.source.ctx == self.target.ctx else "Q->" + repr(self.target.ctx)

    def embed_module(self, M: CoefModule) -> CoefModule:
        return embed_module(M, self.target.ctx)

    def embed(self, s: HomElem) -> HomElem:
        return HomElem(embed_elem(s.coef, self.target.ctx), s.deg)

    def __repr__(self):
        return f"GradedInclusion({self.kind}, {self.base_embed})"


def identity_inclusion(R: GradedRing) -> GradedInclusion:
    return GradedInclusion(R, R, "identity")


def extend(I: GradedIdeal, incl: GradedInclusion) -> GradedIdeal:
    """IT: componentwise sum of B_i * A_j over the target."""
    if I.ring != incl.source:
        raise ValueError("ideal does not live over the inclusion's source ring")
    ctx = incl.target.ctx
    pushed = GradedIdeal(incl.target, I.start, [incl.embed_module(B) for B in I.comps],
                         incl.embed_module(I.tail))
    lo, comps, tail = seq_mul(ctx, pushed, incl.target)
    out = GradedIdeal(incl.target, lo, comps, tail)
    if I.finite_type == "yes":
        out._finite = "yes"
    return out


def contract(J: GradedIdeal, incl: GradedInclusion) -> GradedIdeal:
    """J intersected with the source ring, componentwise."""
    if J.ring != incl.target:
        raise ValueError("ideal does not live over the inclusion's target ring")
    src = incl.source
    lo = min(J.start, 0)
    hi = max(J.tail_start, src.tail_start)
    comps = [restrict_module(mod_intersect(J.comp(n), incl.embed_module(src.comp(n))), src.ctx)
             for n in range(lo, hi + 1)]
    out = GradedIdeal(src, lo, comps[:-1], comps[-1])
    check_module(out)
    return out


# --- localization --------------------------------------------------------------------

@dataclass(frozen=True)
class LocalizationSpec:
    """S = every nonzero element of the base ring (D minus 0)."""
    kind: str = "InvertBase"


def _invert_base(M: CoefModule) -> CoefModule:
    if M.is_zero or M.is_full:
        return M
    if M.rank < M.ctx.dim:
        raise ValueError("localizing a rank-1 lattice of a quadratic field gives a Q-line, "
                         "which is not representable")
    return CoefModule.full(M.ctx)


@lru_cache(maxsize=None)
def localize_ring(R: GradedRing, spec: LocalizationSpec = LocalizationSpec()) -> GradedRing:
    return GradedRing(R.ctx, [_invert_base(A) for A in R.comps], _invert_base(R.tail))


def localize(I: GradedIdeal, spec: LocalizationSpec = LocalizationSpec()) -> GradedIdeal:
    """S^-1 I over S^-1 R."""
    if I.is_zero:
        raise ValueError("localizing the zero ideal")
    ring = localize_ring(I.ring, spec)
    out = GradedIdeal(ring, I.start, [_invert_base(B) for B in I.comps], _invert_base(I.tail))
    if I.finite_type == "yes":
        out._finite = "yes"
    return out


def localization_inclusion(R: GradedRing, spec: LocalizationSpec = LocalizationSpec()) -> GradedInclusion:
    return GradedInclusion(R, localize_ring(R, spec), "localization")


# --- probes ------------------------------------------------------------------------------

@dataclass(frozen=True)
class CompatCounterexample:
    """extend(I_v) is not inside (IT)_t for this finitely generated I."""
    I: GradedIdeal
    incl: GradedInclusion
    rule = "CompatCounterexample"

    def verify(self) -> bool:
        cl, exact = t_close(extend(self.I, self.incl))
        return exact and self.I.finite_type == "yes" and not g_le(extend(v_close(self.I), self.incl), cl)

    def to_dict(self):
        return {"rule": self.rule, "ideal": str(self.I)}


@dataclass(frozen=True)
class SupportedUpTo:
    """Every sampled ideal satisfied the compatibility inclusion."""
    count: int
    rule = "SupportedUpTo"

    def verify(self) -> bool:
        return True

    def to_dict(self):
        return {"rule": self.rule, "tested": self.count}


def t_compat_probe(incl: GradedInclusion, test_ideals: Sequence[GradedIdeal],
                   N: int = DEFAULT_MAX_N) -> Verdict:
    """Refute t-compatibility on a sample, or report it supported on that sample.

    A universal yes is never claimed.
    """
    inconclusive = False
    for I in test_ideals:
        if I.finite_type != "yes":
            raise ValueError("t-compatibility probes need finitely generated test ideals")
        lhs = extend(v_close(I), incl)
        cl, exact = t_close(extend(I, incl))
        if not g_le(lhs, cl):
            if exact:
                return Verdict(NO_K, cert=CompatCounterexample(I, incl), bound=N)
            inconclusive = True
    return Verdict(UNKNOWN_K, cert=SupportedUpTo(len(test_ideals)) if not inconclusive else None,
                   bound=N)


def persistence_check(s: HomElem, I: GradedIdeal, incl: GradedInclusion,
                      N: int = DEFAULT_MAX_N) -> Verdict:
    """Given s t-integral over I, test that its image is t-integral over IT."""
    if not t_integral_member(s, I, N).is_yes:
        raise ValueError(f"{s} is not known to be t-integral over I")
    return t_integral_member(incl.embed(s), extend(I, incl), N)
