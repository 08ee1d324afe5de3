"""A small line-oriented language for describing rings, ideals and queries.

Example::

    ring R = subring(Q; Z; [3*x, x^2, x^3])
    ideal I = (3*x, x^2, x^3) in R
    ideal J = (3*x, 3*x^2, x^3, x^4) in R
    query treduce J I --max-n 8 expect yes 1

One statement per line; ``#`` starts a comment.  ``parse`` never raises on
bad input: problems come back as :class:`Diagnostic` records carrying a code,
the line/column and the offending token.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Optional, Union

# diagnostic codes
E_SYNTAX = "syntax"
E_UNKNOWN_NAME = "unknown-name"
E_CONTEXT = "context-mismatch"
E_EVAL = "evaluation"
E_EXPECT = "expectation"


@dataclass(frozen=True)
class Diagnostic:
    code: str
    message: str
    line: int
    col: int
    token: str = ""

    def __str__(self):
        tok = f" at {self.token!r}" if self.token else ""
        return f"{self.line}:{self.col}: {self.code}: {self.message}{tok}"

    def to_dict(self):
        return {"code": self.code, "message": self.message, "line": self.line,
                "col": self.col, "token": self.token}


class ScriptError(Exception):
    def __init__(self, diag: Diagnostic):
        super().__init__(str(diag))
        self.diag = diag


# --- tokens ------------------------------------------------------------------------

@dataclass(frozen=True)
class Token:
    kind: str   # int, name, flag, op, end
    text: str
    line: int
    col: int


_TOKEN_RE = re.compile(r"""
    (?P<ws>\s+)
  | (?P<int>\d+)
  | (?P<flag>--[A-Za-z][A-Za-z0-9-]*)
  | (?P<name>[A-Za-z_][A-Za-z0-9_.']*)
  | (?P<op>[()\[\]<>,;=+\-*/^])
""", re.VERBOSE)


def tokenize(text: str, line: int) -> list[Token]:
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ScriptError(Diagnostic(E_SYNTAX, "unexpected character", line, pos + 1, text[pos]))
        if m.lastgroup != "ws":
            out.append(Token(m.lastgroup, m.group(), line, pos + 1))
        pos = m.end()
    out.append(Token("end", "", line, len(text) + 1))
    return out


# --- expressions -----------------------------------------------------------------------

@dataclass(frozen=True)
class Num:
    value: int


@dataclass(frozen=True)
class Sqrt:
    arg: int


@dataclass(frozen=True)
class Var:
    pass


@dataclass(frozen=True)
class Ref:
    name: str
    line: int = field(default=0, compare=False)
    col: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Pow:
    base: "Expr"
    exp: int


@dataclass(frozen=True)
class Neg:
    arg: "Expr"


@dataclass(frozen=True)
class Bin:
    op: str
    left: "Expr"
    right: "Expr"


Expr = Union[Num, Sqrt, Var, Ref, Pow, Neg, Bin]


def show_expr(e: Expr) -> str:
    """Fully parenthesized text that parses back to the same tree."""
    if isinstance(e, Num):
        return str(e.value)
    if isinstance(e, Sqrt):
        return f"sqrt({e.arg})"
    if isinstance(e, Var):
        return "x"
    if isinstance(e, Ref):
        return e.name
    if isinstance(e, Pow):
        return f"{show_expr(e.base)}^{e.exp}"
    if isinstance(e, Neg):
        return f"(-{show_expr(e.arg)})"
    return f"({show_expr(e.left)} {e.op} {show_expr(e.right)})"


def expr_refs(e: Expr):
    if isinstance(e, Ref):
        yield e
    elif isinstance(e, Pow):
        yield from expr_refs(e.base)
    elif isinstance(e, Neg):
        yield from expr_refs(e.arg)
    elif isinstance(e, Bin):
        yield from expr_refs(e.left)
        yield from expr_refs(e.right)


def expr_sqrts(e: Expr):
    if isinstance(e, Sqrt):
        yield e.arg
    elif isinstance(e, Pow):
        yield from expr_sqrts(e.base)
    elif isinstance(e, Neg):
        yield from expr_sqrts(e.arg)
    elif isinstance(e, Bin):
        yield from expr_sqrts(e.left)
        yield from expr_sqrts(e.right)


# --- statements -----------------------------------------------------------------------

@dataclass(frozen=True)
class Field:
    """Q (d is None) or Q(sqrt(d)); with ``integral`` set, Z or Z[sqrt(d)] instead."""
    d: Optional[int]
    integral: bool = False

    def __str__(self):
        if self.integral:
            return "Z" if self.d is None else f"Z[sqrt({self.d})]"
        return "Q" if self.d is None else f"Q(sqrt({self.d}))"


@dataclass(frozen=True)
class Subring:
    base: Field
    coeff: Field
    gens: tuple


@dataclass(frozen=True)
class Pullback:
    base: Field
    coeff: Field


@dataclass(frozen=True)
class Localized:
    ring: str


@dataclass(frozen=True)
class Generated:
    gens: tuple
    ring: str


@dataclass(frozen=True)
class ModLit:
    kind: str           # zero, full, lattice
    gens: tuple = ()

    def __str__(self):
        if self.kind == "zero":
            return "0"
        if self.kind == "full":
            return "K"
        return "<" + ", ".join(show_expr(g) for g in self.gens) + ">"


@dataclass(frozen=True)
class GradedLit:
    ring: str
    lo: int
    comps: tuple
    tail: ModLit


@dataclass(frozen=True)
class Op:
    """A derived object: an operation applied to arguments."""
    op: str
    args: tuple


@dataclass(frozen=True)
class RingDef:
    name: str
    body: Union[Subring, Pullback, Localized]
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class IdealDef:
    name: str
    body: Union[Generated, GradedLit, Op]
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class ElemDef:
    name: str
    expr: Expr
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Query:
    cmd: str
    args: tuple
    max_n: Optional[int] = None
    expect: tuple = ()
    line: int = field(default=0, compare=False)


Statement = Union[RingDef, IdealDef, ElemDef, Query]


# Argument signatures: I ideal, R ring, e element, n integer, [e] element list,
# [I] ideal list, w raw word; "to" is a literal keyword.
IDEAL_OPS = {
    "inv": "I", "vclose": "I", "tclose": "I", "pow": "I n", "mul": "I I", "add": "I I",
    "intersect": "I I", "colon": "I I", "scale": "I e", "extend": "I to R",
    "contract": "I to R", "localize": "I", "unit": "R", "lowerbound": "I [e]",
}
QUERIES = {
    **{k: v for k, v in IDEAL_OPS.items() if k not in ("unit",)},
    "show": "I", "eq": "I I", "le": "I I", "contains": "I e", "finite": "I", "period": "I",
    "treduce": "I I", "reduce": "I I", "ttrivial": "I I",
    "tmember": "e I", "member": "e I", "radmember": "e I",
    "tcompat": "R to R [I]", "persist": "e I to R",
    "corpus": "w", "props": "w n",
}
VERDICT_QUERIES = {"treduce", "reduce", "tmember", "member", "radmember", "tcompat", "persist"}
BOOL_QUERIES = {"eq", "le", "contains", "finite", "period", "ttrivial", "corpus", "props"}


def _show_args(sig: str, args: tuple) -> str:
    parts = []
    it = iter(args)
    for kind in sig.split():
        if kind == "to":
            parts.append("to")
            continue
        a = next(it)
        if kind == "e":
            parts.append(show_expr(a))
        elif kind == "[e]":
            parts.append("[" + ", ".join(show_expr(g) for g in a) + "]")
        elif kind == "[I]":
            parts.append("[" + ", ".join(a) + "]")
        else:
            parts.append(str(a))
    return " ".join(parts)


def show_statement(st: Statement) -> str:
    if isinstance(st, RingDef):
        b = st.body
        if isinstance(b, Subring):
            gens = ", ".join(show_expr(g) for g in b.gens)
            return f"ring {st.name} = subring({b.base}; {b.coeff}; [{gens}])"
        if isinstance(b, Pullback):
            return f"ring {st.name} = pullback({b.base}; {b.coeff})"
        return f"ring {st.name} = localized {b.ring}"
    if isinstance(st, IdealDef):
        b = st.body
        if isinstance(b, Generated):
            return f"ideal {st.name} = (" + ", ".join(show_expr(g) for g in b.gens) + f") in {b.ring}"
        if isinstance(b, GradedLit):
            comps = ", ".join(str(c) for c in b.comps)
            return f"ideal {st.name} = graded {b.ring} from {b.lo} [{comps}] tail {b.tail}"
        return f"ideal {st.name} = {b.op} {_show_args(IDEAL_OPS[b.op], b.args)}"
    if isinstance(st, ElemDef):
        return f"elem {st.name} = {show_expr(st.expr)}"
    text = f"query {st.cmd} {_show_args(QUERIES[st.cmd], st.args)}"
    if st.max_n is not None:
        text += f" --max-n {st.max_n}"
    if st.expect:
        text += " expect " + " ".join(st.expect)
    return text


def show_script(statements) -> str:
    return "\n".join(show_statement(s) for s in statements) + "\n"


# --- parser -------------------------------------------------------------------------------

@dataclass
class SessionScript:
    statements: list
    diagnostics: list
    source: str = ""

    @property
    def ok(self) -> bool:
        return not self.diagnostics

    def pretty(self) -> str:
        return show_script(self.statements)


@dataclass
class _Scope:
    """Names defined so far, with the ring (and so base field) each lives over."""
    rings: dict = field(default_factory=dict)     # name -> ring key
    ideals: dict = field(default_factory=dict)    # name -> ring key
    elems: dict = field(default_factory=dict)     # name -> expr
    fields: dict = field(default_factory=dict)    # ring key -> Optional[int]


class _LineParser:
    def __init__(self, tokens: list[Token], text: str, scope: _Scope):
        self.toks = tokens
        self.i = 0
        self.text = text
        self.scope = scope

    # helpers
    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def fail(self, msg: str, tok: Optional[Token] = None, code: str = E_SYNTAX):
        tok = tok or self.tok
        raise ScriptError(Diagnostic(code, msg, tok.line, tok.col, tok.text))

    def take(self) -> Token:
        t = self.tok
        self.i += 1
        return t

    def accept(self, text: str) -> bool:
        if self.tok.text == text and self.tok.kind in ("op", "name"):
            self.i += 1
            return True
        return False

    def expect(self, text: str) -> Token:
        if self.tok.text != text:
            self.fail(f"expected {text!r}")
        return self.take()

    def name(self) -> Token:
        if self.tok.kind != "name":
            self.fail("expected a name")
        return self.take()

    def integer(self) -> int:
        sign = -1 if self.accept("-") else 1
        if self.tok.kind != "int":
            self.fail("expected an integer")
        return sign * int(self.take().text)

    def end(self):
        if self.tok.kind != "end":
            self.fail("unexpected trailing input")

    # expressions
    def expr(self) -> Expr:
        e = self.term()
        while self.tok.text in ("+", "-") and self.tok.kind == "op":
            op = self.take().text
            e = Bin(op, e, self.term())
        return e

    def term(self) -> Expr:
        e = self.unary()
        while self.tok.text in ("*", "/") and self.tok.kind == "op":
            op = self.take().text
            tok = self.tok
            rhs = self.unary()
            if op == "/" and rhs == Num(0):
                self.fail("denominators must be nonzero", tok)
            e = Bin(op, e, rhs)
        return e

    def unary(self) -> Expr:
        if self.accept("-"):
            return Neg(self.unary())
        return self.power()

    def power(self) -> Expr:
        e = self.primary()
        if self.accept("^"):
            e = Pow(e, self.integer())
        return e

    def primary(self) -> Expr:
        t = self.tok
        if t.kind == "int":
            self.i += 1
            return Num(int(t.text))
        if t.kind == "name":
            self.i += 1
            if t.text == "x":
                return Var()
            if t.text == "sqrt":
                self.expect("(")
                n = self.integer()
                self.expect(")")
                return Sqrt(n)
            if t.text not in self.scope.elems:
                self.fail("unknown element", t, E_UNKNOWN_NAME)
            return Ref(t.text, t.line, t.col)
        if self.accept("("):
            e = self.expr()
            self.expect(")")
            return e
        self.fail("expected an expression")

    def expr_list(self, close: str) -> tuple:
        items = []
        if not self.accept(close):
            items.append(self.expr())
            while self.accept(","):
                items.append(self.expr())
            self.expect(close)
        return tuple(items)

    # fields and modules
    def field_spec(self, integral: bool) -> Field:
        t = self.name()
        letter = "Z" if integral else "Q"
        if integral and t.text == "Q":
            return self._field_tail(t, False)
        if t.text != letter:
            self.fail(f"expected {letter}", t)
        return self._field_tail(t, integral)

    def _field_tail(self, t: Token, integral: bool) -> Field:
        opener, closer = ("[", "]") if integral else ("(", ")")
        if not self.accept(opener):
            return Field(None, integral)
        if self.name().text != "sqrt":
            self.fail("expected sqrt", self.toks[self.i - 1])
        self.expect("(")
        d = self.integer()
        self.expect(")")
        self.expect(closer)
        return Field(d, integral)

    def mod_lit(self) -> ModLit:
        if self.tok.kind == "int" and self.tok.text == "0":
            self.i += 1
            return ModLit("zero")
        if self.accept("K"):
            return ModLit("full")
        self.expect("<")
        # inside <...> a bare '>' closes; expressions never contain it
        return ModLit("lattice", self.expr_list(">"))

    # name checks
    def ring_ref(self) -> str:
        t = self.name()
        if t.text not in self.scope.rings:
            self.fail("unknown ring", t, E_UNKNOWN_NAME)
        return t.text

    def ideal_ref(self) -> str:
        t = self.name()
        if t.text not in self.scope.ideals:
            self.fail("unknown ideal", t, E_UNKNOWN_NAME)
        return t.text

    def check_elem_field(self, e: Expr, ring_key: str, tok: Token):
        from .quadratic import BaseCtx
        d = self.scope.fields[ring_key]
        ctx = BaseCtx(d)
        stack = [e]
        while stack:
            cur = stack.pop()
            for n in expr_sqrts(cur):
                try:
                    ctx.sqrt(n)
                except ValueError:
                    self.fail(f"sqrt({n}) does not lie in {ctx!r}", tok, E_CONTEXT)
            stack.extend(self.scope.elems[r.name] for r in expr_refs(cur))

    def args(self, sig: str) -> tuple[tuple, Optional[str]]:
        """Parse arguments per signature; returns (args, ring key of the first ideal/ring)."""
        out = []
        key = None
        pending_elems = []
        for kind in sig.split():
            if kind == "to":
                self.expect("to")
            elif kind == "I":
                tok = self.tok
                name = self.ideal_ref()
                k = self.scope.ideals[name]
                if key is None:
                    key = k
                elif k != key and "to" not in sig:
                    self.fail("ideals live over different rings", tok, E_CONTEXT)
                out.append(name)
            elif kind == "R":
                name = self.ring_ref()
                key = key or self.scope.rings[name]
                out.append(name)
            elif kind == "n":
                out.append(self.integer())
            elif kind == "e":
                pending_elems.append((self.tok, len(out)))
                out.append(self.expr())
            elif kind == "[e]":
                self.expect("[")
                pending_elems.append((self.tok, len(out)))
                out.append(self.expr_list("]"))
            elif kind == "[I]":
                self.expect("[")
                names = []
                if not self.accept("]"):
                    names.append(self.ideal_ref())
                    while self.accept(","):
                        names.append(self.ideal_ref())
                    self.expect("]")
                out.append(tuple(names))
            elif kind == "w":
                # a word is a run of tokens with no space between them, e.g. lemmas-fuzz
                if self.tok.kind == "end":
                    self.fail("expected a name")
                first = self.take()
                stop = first.col - 1 + len(first.text)
                while self.tok.kind != "end" and self.tok.col - 1 == stop:
                    stop += len(self.take().text)
                out.append(self.text[first.col - 1:stop])
        for tok, idx in pending_elems:
            items = out[idx] if isinstance(out[idx], tuple) else (out[idx],)
            for e in items:
                if key is not None:
                    self.check_elem_field(e, key, tok)
        return tuple(out), key

    # statements
    def statement(self) -> Statement:
        kw = self.name()
        line = kw.line
        if kw.text == "ring":
            name = self.name().text
            self.expect("=")
            st = RingDef(name, self.ring_body(), line)
            self.end()
            if isinstance(st.body, Localized):
                key = "localized " + self.scope.rings[st.body.ring]
            else:
                key = name
            self.scope.rings[name] = key
            self.scope.fields[key] = self._ring_field(st.body)
            return st
        if kw.text == "ideal":
            name = self.name().text
            self.expect("=")
            body, key = self.ideal_body()
            self.end()
            self.scope.ideals[name] = key
            return IdealDef(name, body, line)
        if kw.text == "elem":
            name = self.name().text
            if name in ("x", "sqrt"):
                self.fail("reserved name", self.toks[self.i - 1])
            self.expect("=")
            e = self.expr()
            self.end()
            self.scope.elems[name] = e
            return ElemDef(name, e, line)
        if kw.text == "query":
            cmd = self.name()
            if cmd.text not in QUERIES:
                self.fail("unknown query command", cmd)
            args, _ = self.args(QUERIES[cmd.text])
            max_n = None
            expect = []
            while self.tok.kind != "end":
                if self.tok.kind == "flag" and self.tok.text == "--max-n":
                    self.i += 1
                    max_n = self.integer()
                    if max_n < 1:
                        self.fail("--max-n must be positive", self.toks[self.i - 1])
                elif self.accept("expect"):
                    while self.tok.kind != "end":
                        expect.append(self.take().text)
                    if not expect:
                        self.fail("expected an expectation")
                else:
                    self.fail("unexpected trailing input")
            return Query(cmd.text, args, max_n, tuple(expect), line)
        self.fail("expected ring, ideal, elem or query", kw)

    def _ring_field(self, body) -> Optional[int]:
        if isinstance(body, Localized):
            return self.scope.fields[self.scope.rings[body.ring]]
        return body.base.d

    def ring_body(self):
        t = self.name()
        if t.text == "localized":
            return Localized(self.ring_ref())
        if t.text not in ("subring", "pullback"):
            self.fail("expected subring, pullback or localized", t)
        self.expect("(")
        base = self.field_spec(False)
        self.expect(";")
        ctok = self.tok
        coeff = self.field_spec(True)
        if coeff.d is not None and base.d is None:
            self.fail("coefficient ring is not inside the base field", ctok, E_CONTEXT)
        if coeff.d is not None:
            from .quadratic import BaseCtx
            try:
                BaseCtx(base.d).sqrt(coeff.d)
            except ValueError:
                self.fail("coefficient ring is not inside the base field", ctok, E_CONTEXT)
        if t.text == "pullback":
            self.expect(")")
            return Pullback(base, coeff)
        self.expect(";")
        self.expect("[")
        gtok = self.tok
        gens = self.expr_list("]")
        self.expect(")")
        body = Subring(base, coeff, gens)
        tmp = f"\0{id(body)}"
        self.scope.fields[tmp] = base.d
        for g in gens:
            self.check_elem_field(g, tmp, gtok)
        del self.scope.fields[tmp]
        return body

    def ideal_body(self):
        if self.accept("("):
            gtok = self.tok
            gens = self.expr_list(")")
            if not gens:
                self.fail("an ideal needs at least one generator", gtok)
            self.expect("in")
            ring = self.ring_ref()
            key = self.scope.rings[ring]
            for g in gens:
                self.check_elem_field(g, key, gtok)
            return Generated(gens, ring), key
        t = self.name()
        if t.text == "graded":
            ring = self.ring_ref()
            self.expect("from")
            lo = self.integer()
            self.expect("[")
            comps = []
            if not self.accept("]"):
                comps.append(self.mod_lit())
                while self.accept(","):
                    comps.append(self.mod_lit())
                self.expect("]")
            self.expect("tail")
            mtok = self.tok
            tail = self.mod_lit()
            key = self.scope.rings[ring]
            for m in [*comps, tail]:
                for g in m.gens:
                    self.check_elem_field(g, key, mtok)
            return GradedLit(ring, lo, tuple(comps), tail), key
        if t.text not in IDEAL_OPS:
            self.fail("unknown ideal operation", t)
        sig = IDEAL_OPS[t.text]
        args, key = self.args(sig)
        if t.text in ("extend", "contract"):
            key = self.scope.rings[args[-1]]
        elif t.text == "localize":
            key = "localized " + key
            base_ring = self.scope.ideals[args[0]]
            self.scope.fields.setdefault(key, self.scope.fields[base_ring])
        return Op(t.text, args), key


def parse(text: str) -> SessionScript:
    """Parse a whole script; all diagnostics are collected, one per bad line."""
    scope = _Scope()
    statements, diags = [], []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        try:
            toks = tokenize(line, lineno)
            statements.append(_LineParser(toks, line, scope).statement())
        except ScriptError as err:
            diags.append(err.diag)
    return SessionScript(statements, diags, text)
