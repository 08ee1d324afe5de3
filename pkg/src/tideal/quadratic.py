"""Exact arithmetic in Q or a quadratic field Q(sqrt(d)), plus Z-submodules.

A ``CoefModule`` is one of: the zero module, the whole field, or a finitely
generated Z-lattice of rank 1 or 2.  Lattices are kept in a canonical form
(minimal common denominator + row Hermite normal form of the integer
coordinate matrix w.r.t. the basis {1, sqrt(d)}), so module equality is a
plain comparison of fields.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd, isqrt
from typing import Iterable, Optional, Sequence

ZERO, FULL, LAT = "zero", "full", "lattice"


def squarefree_part(n: int) -> tuple[int, int]:
    """Return (m, d) with n == m*m*d and d squarefree (sign kept on d)."""
    if n == 0:
        raise ValueError("sqrt argument must be nonzero")
    sign = -1 if n < 0 else 1
    n = abs(n)
    m, d, p = 1, 1, 2
    while p * p <= n:
        while n % (p * p) == 0:
            n //= p * p
            m *= p
        if n % p == 0:
            n //= p
            d *= p
        p += 1
    return m, sign * d * n


class BaseCtx:
    """The coefficient field: Q (``d is None``) or Q(sqrt(d))."""

    __slots__ = ("d",)

    def __init__(self, d: Optional[int] = None):
        if d is not None:
            m, r = squarefree_part(d)
            if m != 1 or d == 1:
                raise ValueError(f"d={d} must be squarefree and different from 0, 1")
        object.__setattr__(self, "d", d)

    def __setattr__(self, key, value):
        raise AttributeError("BaseCtx is immutable")

    @property
    def is_rational(self) -> bool:
        return self.d is None

    @property
    def dim(self) -> int:
        return 1 if self.d is None else 2

    def __eq__(self, other):
        return isinstance(other, BaseCtx) and self.d == other.d

    def __hash__(self):
        return hash(("ctx", self.d))

    def __repr__(self):
        return "Q" if self.d is None else f"Q(sqrt({self.d}))"

    def elem(self, a=0, b=0) -> "QuadElem":
        return QuadElem(a, b, self)

    def one(self) -> "QuadElem":
        return QuadElem(1, 0, self)

    def sqrt(self, n: int) -> "QuadElem":
        """sqrt(n) as an element of this field, if it lives here."""
        if n > 0 and isqrt(n) ** 2 == n:
            return QuadElem(isqrt(n), 0, self)
        m, r = squarefree_part(n)
        if self.d is None or r != self.d:
            raise ValueError(f"sqrt({n}) is not in {self!r}")
        return QuadElem(0, m, self)


Q = BaseCtx()


class QuadElem:
    """a + b*sqrt(d) with rational a, b."""

    __slots__ = ("a", "b", "ctx", "_hash")

    def __init__(self, a, b, ctx: BaseCtx):
        a = a if type(a) is Fraction else Fraction(a)
        b = b if type(b) is Fraction else Fraction(b)
        if ctx.d is None and b:
            raise ValueError("irrational part in a rational context")
        self.a = a
        self.b = b
        self.ctx = ctx
        self._hash = None

    def _coerce(self, other) -> "QuadElem":
        if isinstance(other, QuadElem):
            if other.ctx != self.ctx:
                raise ValueError(f"context mismatch: {self.ctx!r} vs {other.ctx!r}")
            return other
        if isinstance(other, (int, Fraction)):
            return QuadElem(other, 0, self.ctx)
        return NotImplemented

    def coords(self) -> tuple[Fraction, ...]:
        return (self.a,) if self.ctx.d is None else (self.a, self.b)

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return QuadElem(self.a + other.a, self.b + other.b, self.ctx)

    __radd__ = __add__

    def __neg__(self):
        return QuadElem(-self.a, -self.b, self.ctx)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return QuadElem(self.a - other.a, self.b - other.b, self.ctx)

    def __rsub__(self, other):
        return -(self - other)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        d = self.ctx.d or 0
        return QuadElem(self.a * other.a + d * self.b * other.b,
                        self.a * other.b + self.b * other.a, self.ctx)

    __rmul__ = __mul__

    def conjugate(self) -> "QuadElem":
        return QuadElem(self.a, -self.b, self.ctx)

    def norm(self) -> Fraction:
        return self.a * self.a - (self.ctx.d or 0) * self.b * self.b

    def inverse(self) -> "QuadElem":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("inverse of zero")
        return QuadElem(self.a / n, -self.b / n, self.ctx)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result, base = self.ctx.one(), self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __bool__(self):
        return bool(self.a) or bool(self.b)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.b == 0 and self.a == other
        return (isinstance(other, QuadElem) and self.ctx == other.ctx
                and self.a == other.a and self.b == other.b)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.a, self.b, self.ctx.d))
        return self._hash

    def __str__(self):
        if self.ctx.d is None or not self.b:
            return str(self.a)
        root = f"sqrt({self.ctx.d})"
        b = "" if self.b == 1 else "-" if self.b == -1 else f"{self.b}*"
        if not self.a:
            return f"{b}{root}"
        sign = "+" if self.b > 0 else "-"
        babs = abs(self.b)
        bs = "" if babs == 1 else f"{babs}*"
        return f"{self.a}{sign}{bs}{root}"

    def __repr__(self):
        return f"QuadElem({self})"


# --- integer row echelon machinery -------------------------------------------

def hnf(rows: Iterable[Sequence[int]], width: int) -> tuple[tuple[int, ...], ...]:
    """Row Hermite normal form over Z; zero rows are dropped.

    Pivots are positive and entries above a pivot are reduced into
    [0, pivot).
    """
    pending = [list(r) for r in rows if any(r)]
    echelon: list[list[int]] = []
    pivots: list[int] = []
    for col in range(width):
        hits = [r for r in pending if r[col]]
        if not hits:
            continue
        rest = [r for r in pending if not r[col]]
        while len(hits) > 1:
            hits.sort(key=lambda r: abs(r[col]))
            piv = hits[0]
            nxt = [piv]
            for r in hits[1:]:
                q = r[col] // piv[col]
                r = [x - q * y for x, y in zip(r, piv)]
                if r[col]:
                    nxt.append(r)
                elif any(r):
                    rest.append(r)
            hits = nxt
        piv = hits[0]
        if piv[col] < 0:
            piv = [-x for x in piv]
        echelon.append(piv)
        pivots.append(col)
        pending = rest
    for i, c in enumerate(pivots):
        p = echelon[i][c]
        for j in range(i):
            q = echelon[j][c] // p
            if q:
                echelon[j] = [x - q * y for x, y in zip(echelon[j], echelon[i])]
    return tuple(tuple(r) for r in echelon)


def _pivot(row: Sequence[int]) -> int:
    for i, x in enumerate(row):
        if x:
            return i
    raise ValueError("zero row")


def reduce_vector(echelon, vec: Sequence[int], upto: Optional[int] = None) -> Optional[list[int]]:
    """Subtract echelon rows from vec to clear its first ``upto`` columns.

    Returns the residual vector, or None if some column cannot be cleared.
    """
    v = list(vec)
    width = len(v) if upto is None else upto
    for row in echelon:
        c = _pivot(row)
        if c >= width:
            break
        if v[c] % row[c]:
            return None
        q = v[c] // row[c]
        if q:
            v = [x - q * y for x, y in zip(v, row)]
    if any(v[:width]):
        return None
    return v


def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


def _to_integer(vecs: Sequence[Sequence[Fraction]]) -> tuple[int, list[list[int]]]:
    den = 1
    for v in vecs:
        for x in v:
            den = _lcm(den, x.denominator)
    return den, [[int(x * den) for x in v] for v in vecs]


# --- coefficient modules ------------------------------------------------------

class CoefModule:
    """Zero, the full field, or a Z-lattice in canonical form."""

    __slots__ = ("kind", "ctx", "den", "rows", "_hash")

    def __init__(self, kind: str, ctx: BaseCtx, den: int = 1, rows: tuple = ()):
        self.kind = kind
        self.ctx = ctx
        self.den = den
        self.rows = rows
        self._hash = hash((kind, ctx.d, den, rows))

    @classmethod
    def zero(cls, ctx: BaseCtx) -> "CoefModule":
        return cls(ZERO, ctx)

    @classmethod
    def full(cls, ctx: BaseCtx) -> "CoefModule":
        return cls(FULL, ctx)

    @classmethod
    def from_vectors(cls, ctx: BaseCtx, vecs: Sequence[Sequence[Fraction]]) -> "CoefModule":
        if not vecs:
            return cls.zero(ctx)
        den, ints = _to_integer(vecs)
        rows = hnf(ints, ctx.dim)
        if not rows:
            return cls.zero(ctx)
        g = den
        for r in rows:
            for x in r:
                g = gcd(g, x)
        if g > 1:
            den //= g
            rows = tuple(tuple(x // g for x in r) for r in rows)
        return cls(LAT, ctx, den, rows)

    @property
    def is_zero(self) -> bool:
        return self.kind == ZERO

    @property
    def is_full(self) -> bool:
        return self.kind == FULL

    @property
    def is_lattice(self) -> bool:
        return self.kind == LAT

    @property
    def rank(self) -> int:
        if self.kind == FULL:
            return self.ctx.dim
        return len(self.rows)

    def vectors(self) -> list[tuple[Fraction, ...]]:
        return [tuple(Fraction(x, self.den) for x in r) for r in self.rows]

    @property
    def basis(self) -> list[QuadElem]:
        if self.kind != LAT:
            raise ValueError(f"{self.kind} module has no lattice basis")
        return [QuadElem(*v, self.ctx) if self.ctx.dim == 2 else QuadElem(v[0], 0, self.ctx)
                for v in self.vectors()]

    def __eq__(self, other):
        return (isinstance(other, CoefModule) and self._hash == other._hash
                and self.kind == other.kind and self.ctx == other.ctx
                and self.den == other.den and self.rows == other.rows)

    def __hash__(self):
        return self._hash

    def __contains__(self, c: QuadElem) -> bool:
        return mod_contains(self, c)

    def __le__(self, other: "CoefModule") -> bool:
        return mod_le(self, other)

    def __add__(self, other):
        return mod_add(self, other)

    def __mul__(self, other):
        return mod_mul(self, other)

    def __str__(self):
        if self.kind == ZERO:
            return "0"
        if self.kind == FULL:
            return "K"
        return "<" + ", ".join(str(b) for b in self.basis) + ">"

    __repr__ = __str__


def _check_ctx(*mods: CoefModule) -> None:
    ctx = mods[0].ctx
    for m in mods[1:]:
        if m.ctx != ctx:
            raise ValueError(f"context mismatch: {ctx!r} vs {m.ctx!r}")


def mod_from_gens(ctx: BaseCtx, gens: Iterable[QuadElem]) -> CoefModule:
    vecs = []
    for g in gens:
        if g.ctx != ctx:
            raise ValueError(f"context mismatch: {ctx!r} vs {g.ctx!r}")
        vecs.append(g.coords())
    return CoefModule.from_vectors(ctx, vecs)


def standard_order(ctx: BaseCtx) -> CoefModule:
    """Z, or Z[sqrt(d)]."""
    gens = [ctx.one()] if ctx.d is None else [ctx.one(), ctx.elem(0, 1)]
    return mod_from_gens(ctx, gens)


@lru_cache(maxsize=None)
def mod_add(M: CoefModule, N: CoefModule) -> CoefModule:
    _check_ctx(M, N)
    if M.is_full or N.is_full:
        return CoefModule.full(M.ctx)
    if M.is_zero:
        return N
    if N.is_zero:
        return M
    return CoefModule.from_vectors(M.ctx, M.vectors() + N.vectors())


def mod_sum(ctx: BaseCtx, mods: Iterable[CoefModule]) -> CoefModule:
    vecs = []
    for m in mods:
        if m.is_full:
            return CoefModule.full(ctx)
        vecs.extend(m.vectors())
    return CoefModule.from_vectors(ctx, vecs)


def _mul_vec(ctx: BaseCtx, u, v):
    if ctx.d is None:
        return (u[0] * v[0],)
    return (u[0] * v[0] + ctx.d * u[1] * v[1], u[0] * v[1] + u[1] * v[0])


@lru_cache(maxsize=None)
def mod_mul(M: CoefModule, N: CoefModule) -> CoefModule:
    _check_ctx(M, N)
    if M.is_zero or N.is_zero:
        return CoefModule.zero(M.ctx)
    if M.is_full or N.is_full:
        return CoefModule.full(M.ctx)
    return CoefModule.from_vectors(
        M.ctx, [_mul_vec(M.ctx, u, v) for u in M.vectors() for v in N.vectors()])


@lru_cache(maxsize=None)
def mod_scale(M: CoefModule, c: QuadElem) -> CoefModule:
    if not c:
        raise ValueError("scale by zero")
    if c.ctx != M.ctx:
        raise ValueError(f"context mismatch: {M.ctx!r} vs {c.ctx!r}")
    if not M.is_lattice:
        return M
    cv = c.coords()
    return CoefModule.from_vectors(M.ctx, [_mul_vec(M.ctx, u, cv) for u in M.vectors()])


def _common_integer(M: CoefModule, N: CoefModule):
    den = _lcm(M.den, N.den)
    rm = [[x * (den // M.den) for x in r] for r in M.rows]
    rn = [[x * (den // N.den) for x in r] for r in N.rows]
    return den, rm, rn


@lru_cache(maxsize=None)
def mod_intersect(M: CoefModule, N: CoefModule) -> CoefModule:
    _check_ctx(M, N)
    if M.is_zero or N.is_zero:
        return CoefModule.zero(M.ctx)
    if M.is_full:
        return N
    if N.is_full:
        return M
    w = M.ctx.dim
    den, rm, rn = _common_integer(M, N)
    # rows [b, b] for M and [b, 0] for N: echelon rows starting past column w
    # span exactly the vectors lying in both lattices
    stacked = [r + r for r in rm] + [r + [0] * w for r in rn]
    ech = hnf(stacked, 2 * w)
    common = [r[w:] for r in ech if _pivot(r) >= w]
    return CoefModule.from_vectors(M.ctx, [[Fraction(x, den) for x in r] for r in common])


@lru_cache(maxsize=None)
def mod_colon(M: CoefModule, N: CoefModule) -> CoefModule:
    """{f in K : f*N subset of M}."""
    _check_ctx(M, N)
    if N.is_zero:
        return CoefModule.full(M.ctx)
    if M.is_full:
        return M
    if M.is_zero or N.is_full:
        return CoefModule.zero(M.ctx)
    result = CoefModule.full(M.ctx)
    for g in N.basis:
        result = mod_intersect(result, mod_scale(M, g.inverse()))
        if result.is_zero:
            break
    return result


def mod_contains(M: CoefModule, c: QuadElem) -> bool:
    if c.ctx != M.ctx:
        raise ValueError(f"context mismatch: {M.ctx!r} vs {c.ctx!r}")
    if M.is_full or not c:
        return True
    if M.is_zero:
        return False
    vec = []
    for x in c.coords():
        y = x * M.den
        if y.denominator != 1:
            return False
        vec.append(int(y))
    return reduce_vector(M.rows, vec) is not None


def mod_le(M: CoefModule, N: CoefModule) -> bool:
    _check_ctx(M, N)
    if M.is_zero or N.is_full:
        return True
    if M.is_full or N.is_zero:
        return False
    return all(mod_contains(N, b) for b in M.basis)


def mod_eq(M: CoefModule, N: CoefModule) -> bool:
    return M == N


def decompose(target: QuadElem, parts: Sequence[tuple[QuadElem, CoefModule]]) -> Optional[list[QuadElem]]:
    """Write target = sum(m_i * a_i) with a_i in module_i.

    ``parts`` is a list of (m_i, module_i); returns the a_i or None when no
    such decomposition exists.
    """
    ctx = target.ctx
    zero = ctx.elem()
    for i, (m, mod) in enumerate(parts):
        if mod.is_full and m:
            out = [zero] * len(parts)
            out[i] = target / m
            return out
    gens: list[tuple[int, QuadElem]] = []
    for i, (m, mod) in enumerate(parts):
        if mod.is_lattice and m:
            gens.extend((i, b) for b in mod.basis)
    if not target:
        return [zero] * len(parts)
    if not gens:
        return None
    w = ctx.dim
    vecs = [(parts[i][0] * b).coords() for i, b in gens]
    den, ints = _to_integer(vecs + [target.coords()])
    k = len(gens)
    aug = [ints[j] + [1 if jj == j else 0 for jj in range(k)] for j in range(k)]
    ech = hnf(aug, w + k)
    res = reduce_vector(ech, ints[k] + [0] * k, upto=w)
    if res is None:
        return None
    coeffs = [-x for x in res[w:]]
    out = [zero] * len(parts)
    for (i, b), c in zip(gens, coeffs):
        if c:
            out[i] = out[i] + b * c
    return out


def embed_module(M: CoefModule, ctx: BaseCtx) -> CoefModule:
    """Push a module of Q into Q(sqrt(d)) (identity when contexts agree)."""
    if M.ctx == ctx:
        return M
    if not M.ctx.is_rational:
        raise ValueError(f"no base embedding {M.ctx!r} -> {ctx!r}")
    if M.is_zero:
        return CoefModule.zero(ctx)
    if M.is_full:
        raise ValueError("Q is not a Z-lattice or the whole of the target field")
    return mod_from_gens(ctx, [ctx.elem(b.a) for b in M.basis])


def embed_elem(c: QuadElem, ctx: BaseCtx) -> QuadElem:
    if c.ctx == ctx:
        return c
    if not c.ctx.is_rational:
        raise ValueError(f"no base embedding {c.ctx!r} -> {ctx!r}")
    return ctx.elem(c.a)


def restrict_module(M: CoefModule, ctx: BaseCtx) -> CoefModule:
    """Pull a module back along Q -> Q(sqrt(d)); it must lie in Q."""
    if M.ctx == ctx:
        return M
    if M.is_zero:
        return CoefModule.zero(ctx)
    if M.is_full or any(b.b for b in M.basis):
        raise ValueError("module does not lie in the rational line")
    return mod_from_gens(ctx, [ctx.elem(b.a) for b in M.basis])
