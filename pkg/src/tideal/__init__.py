"""Exact star-operation computations for graded subrings R = sum A_n x^n of K[x].

K is Q or a quadratic field; each A_n is a Z-lattice, zero, or all of K, and
the sequence is eventually constant.  The package computes colons, v- and
t-closures, (t-)reductions and (t-)integral membership with certificates.
"""

from .quadratic import BaseCtx, CoefModule, QuadElem, Q, mod_from_gens, standard_order
from .graded import (
    GradedIdeal, GradedRing, HomElem, InvariantError, from_components, g_add, g_colon,
    g_contains, g_eq, g_intersect, g_inverse, g_le, g_mul, g_pow, g_scale, ideal_from_gens,
    principal, ring_from_gens, ring_polynomial, ring_pullback, unit_ideal, v_close,
)
from .closure import (
    DEFAULT_MAX_N, Verdict, find_periodicity, integral_member, is_reduction, is_t_reduction,
    is_trivial_t_reduction, radical_member, t_close, t_integral_lower_bound, t_integral_member,
    t_rees_trunc,
)
from .morphisms import (
    GradedInclusion, LocalizationSpec, contract, extend, localization_inclusion, localize,
    persistence_check, t_compat_probe,
)

__version__ = "0.1.0"

__all__ = [
    "BaseCtx",
    "CoefModule",
    "QuadElem",
    "Q",
    "mod_from_gens",
    "standard_order",
    "GradedIdeal",
    "GradedRing",
    "HomElem",
    "InvariantError",
    "from_components",
    "g_add",
    "g_colon",
    "g_contains",
    "g_eq",
    "g_intersect",
    "g_inverse",
    "g_le",
    "g_mul",
    "g_pow",
    "g_scale",
    "ideal_from_gens",
    "principal",
    "ring_from_gens",
    "ring_polynomial",
    "ring_pullback",
    "unit_ideal",
    "v_close",
    "DEFAULT_MAX_N",
    "Verdict",
    "find_periodicity",
    "integral_member",
    "is_reduction",
    "is_t_reduction",
    "is_trivial_t_reduction",
    "radical_member",
    "t_close",
    "t_integral_lower_bound",
    "t_integral_member",
    "t_rees_trunc",
    "GradedInclusion",
    "LocalizationSpec",
    "contract",
    "extend",
    "localization_inclusion",
    "localize",
    "persistence_check",
    "t_compat_probe",
]

