"""Execute parsed scripts and build reports.

A report is a plain dict::

    {"version": "1",
     "queries": [{"id", "kind", "inputs", "result": {"kind", "n"?, "certificate"?, ...},
                  "ms", "expect"?, "ok"?}],
     "diagnostics": [...], "exit_code": 0 | 1 | 2}

Every certificate attached to a result is replayed before the report is
returned; a replay failure is an internal invariant violation (exit code 2).
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from importlib import resources
from typing import Optional

from . import closure as cl
from . import graded as gr
from . import morphisms as mo
from .lang import (
    E_CONTEXT, E_EVAL, E_EXPECT, QUERIES, VERDICT_QUERIES, Diagnostic, ElemDef, Expr,
    GradedLit, Generated, IdealDef, Localized, ModLit, Neg, Num, Pow, Pullback, Query, Ref,
    RingDef, Sqrt, Var, parse, show_expr,
)
from .quadratic import BaseCtx, CoefModule, QuadElem, mod_from_gens

REPORT_VERSION = "1"
EXIT_OK, EXIT_DIAG, EXIT_INVARIANT = 0, 1, 2


@dataclass
class RunFlags:
    max_n: int = cl.DEFAULT_MAX_N
    window: int = gr.MAX_RING_DEGREE
    seed: int = 0
    timing: bool = True


class _EvalError(Exception):
    def __init__(self, msg: str, code: str = E_EVAL):
        super().__init__(msg)
        self.code = code


# --- expression evaluation --------------------------------------------------------

def _poly_mul(ctx, p, q):
    out: dict = {}
    for i, a in p.items():
        for j, b in q.items():
            out[i + j] = out.get(i + j, ctx.elem()) + a * b
    return {k: v for k, v in out.items() if v}


def eval_expr(e: Expr, ctx: BaseCtx, elems: dict) -> dict:
    """Laurent polynomial {degree: coefficient} denoted by e."""
    if isinstance(e, Num):
        return {0: ctx.elem(e.value)} if e.value else {}
    if isinstance(e, Sqrt):
        try:
            return {0: ctx.sqrt(e.arg)}
        except ValueError as err:
            raise _EvalError(str(err), E_CONTEXT)
    if isinstance(e, Var):
        return {1: ctx.one()}
    if isinstance(e, Ref):
        return eval_expr(elems[e.name], ctx, elems)
    if isinstance(e, Neg):
        return {k: -v for k, v in eval_expr(e.arg, ctx, elems).items()}
    if isinstance(e, Pow):
        base = eval_expr(e.base, ctx, elems)
        if len(base) == 1:
            (d, c), = base.items()
            if e.exp < 0 and not c:
                raise _EvalError("negative power of zero")
            return {d * e.exp: c ** e.exp}
        if e.exp < 0:
            raise _EvalError("negative powers need a single-term base")
        out = {0: ctx.one()}
        for _ in range(e.exp):
            out = _poly_mul(ctx, out, base)
        return out
    a = eval_expr(e.left, ctx, elems)
    b = eval_expr(e.right, ctx, elems)
    if e.op in "+-":
        out = dict(a)
        for k, v in b.items():
            out[k] = out.get(k, ctx.elem()) + (v if e.op == "+" else -v)
        return {k: v for k, v in out.items() if v}
    if e.op == "*":
        return _poly_mul(ctx, a, b)
    if len(b) != 1:
        raise _EvalError("division needs a single nonzero term")
    (d, c), = b.items()
    return _poly_mul(ctx, a, {-d: c.inverse()})


def eval_hom(e: Expr, ctx: BaseCtx, elems: dict) -> gr.HomElem:
    p = eval_expr(e, ctx, elems)
    if not p:
        raise _EvalError(f"{show_expr(e)} is zero")
    if len(p) != 1:
        raise _EvalError(f"{show_expr(e)} is not homogeneous")
    (d, c), = p.items()
    return gr.HomElem(c, d)


def eval_const(e: Expr, ctx: BaseCtx, elems: dict) -> QuadElem:
    p = eval_expr(e, ctx, elems)
    if any(d != 0 for d in p):
        raise _EvalError(f"{show_expr(e)} is not a constant")
    return p.get(0, ctx.elem())


# --- session -----------------------------------------------------------------------------

def _field_ctx(f) -> BaseCtx:
    return BaseCtx(f.d)


def _coeff_module(ctx: BaseCtx, f) -> CoefModule:
    if not f.integral:
        return CoefModule.full(ctx)
    if f.d is None:
        return mod_from_gens(ctx, [ctx.one()])
    return mod_from_gens(ctx, [ctx.one(), ctx.sqrt(f.d)])


@dataclass
class Session:
    flags: RunFlags = field(default_factory=RunFlags)
    rings: dict = field(default_factory=dict)
    ideals: dict = field(default_factory=dict)
    elems: dict = field(default_factory=dict)    # name -> Expr

    def ring_def(self, st: RingDef) -> None:
        b = st.body
        if isinstance(b, Localized):
            self.rings[st.name] = mo.localize_ring(self.rings[b.ring])
            return
        ctx = _field_ctx(b.base)
        coeff = _coeff_module(ctx, b.coeff)
        if isinstance(b, Pullback):
            self.rings[st.name] = gr.ring_pullback(ctx, coeff)
        else:
            gens = [eval_hom(g, ctx, self.elems) for g in b.gens]
            self.rings[st.name] = gr.ring_from_gens(ctx, coeff, gens, window=self.flags.window)

    def module(self, m: ModLit, ctx: BaseCtx) -> CoefModule:
        if m.kind == "zero":
            return CoefModule.zero(ctx)
        if m.kind == "full":
            return CoefModule.full(ctx)
        return mod_from_gens(ctx, [eval_const(g, ctx, self.elems) for g in m.gens])

    def hom(self, e: Expr, I) -> gr.HomElem:
        return eval_hom(e, I.ctx, self.elems)

    def ideal_op(self, op: str, args: tuple):
        """Evaluate an ideal-valued operation; returns (ideal, extra result fields)."""
        I = self.ideals.get(args[0]) if args and isinstance(args[0], str) else None
        N = self.flags.max_n
        if op == "inv":
            return gr.g_inverse(I), {}
        if op == "vclose":
            return gr.v_close(I), {}
        if op == "tclose":
            c, exact = cl.t_close(I)
            return c, {"exact": exact}
        if op == "pow":
            return gr.g_pow(I, args[1]), {}
        if op in ("mul", "add", "intersect", "colon"):
            J = self.ideals[args[1]]
            fn = {"mul": gr.g_mul, "add": gr.g_add, "intersect": gr.g_intersect, "colon": gr.g_colon}[op]
            return fn(I, J), {}
        if op == "scale":
            return gr.g_scale(I, self.hom(args[1], I)), {}
        if op == "extend":
            return mo.extend(I, mo.GradedInclusion(I.ring, self.rings[args[1]])), {}
        if op == "contract":
            R = self.rings[args[1]]
            return mo.contract(I, mo.GradedInclusion(R, I.ring)), {}
        if op == "localize":
            return mo.localize(I), {}
        if op == "unit":
            return gr.unit_ideal(self.rings[args[0]]), {}
        if op == "lowerbound":
            cands = [self.hom(e, I) for e in args[1]]
            return cl.t_integral_lower_bound(I, cands, N), {"subideal_of_t_integral_closure": True}
        raise _EvalError(f"unknown operation {op}")

    def ideal_def(self, st: IdealDef) -> None:
        b = st.body
        if isinstance(b, Generated):
            R = self.rings[b.ring]
            self.ideals[st.name] = gr.ideal_from_gens(R, [eval_hom(g, R.ctx, self.elems) for g in b.gens])
        elif isinstance(b, GradedLit):
            R = self.rings[b.ring]
            comps = [self.module(m, R.ctx) for m in b.comps]
            self.ideals[st.name] = gr.from_components(R, b.lo, comps, self.module(b.tail, R.ctx))
        else:
            self.ideals[st.name] = self.ideal_op(b.op, b.args)[0]

    # queries
    def answer(self, q: Query) -> dict:
        N = q.max_n or self.flags.max_n
        a = q.args
        if q.cmd in ("inv", "vclose", "tclose", "pow", "mul", "add", "intersect", "colon",
                     "scale", "extend", "contract", "localize", "lowerbound", "show"):
            if q.cmd == "show":
                I, extra = self.ideals[a[0]], {}
            else:
                saved = self.flags.max_n
                self.flags.max_n = N
                try:
                    I, extra = self.ideal_op(q.cmd, a)
                finally:
                    self.flags.max_n = saved
            return {"kind": "value", "value": I.describe(), **extra, "_obj": I}
        if q.cmd in VERDICT_QUERIES:
            return self._verdict(q.cmd, a, N)
        if q.cmd == "eq":
            return {"kind": "bool", "value": gr.g_eq(self.ideals[a[0]], self.ideals[a[1]])}
        if q.cmd == "le":
            return {"kind": "bool", "value": gr.g_le(self.ideals[a[0]], self.ideals[a[1]])}
        if q.cmd == "contains":
            I = self.ideals[a[0]]
            return {"kind": "bool", "value": gr.g_contains(I, self.hom(a[1], I))}
        if q.cmd == "finite":
            return {"kind": "bool", "value": self.ideals[a[0]].finite_type == gr.YES,
                    "finite_type": self.ideals[a[0]].finite_type}
        if q.cmd == "ttrivial":
            return {"kind": "bool", "value": cl.is_trivial_t_reduction(self.ideals[a[0]], self.ideals[a[1]])}
        if q.cmd == "period":
            cert = cl.find_periodicity(self.ideals[a[0]], N)
            out = {"kind": "bool", "value": cert is not None}
            if cert is not None:
                out["certificate"] = cert.to_dict()
                out["_cert"] = cert
            return out
        if q.cmd == "corpus":
            sub = run(load_corpus(a[0]), RunFlags(N, self.flags.window, self.flags.seed, False))
            failed = [r["id"] for r in sub["queries"] if r.get("ok") is False]
            return {"kind": "bool", "value": sub["exit_code"] == EXIT_OK and not failed,
                    "queries": len(sub["queries"]), "failed": failed,
                    "diagnostics": sub["diagnostics"]}
        if q.cmd == "props":
            from .props import run_suite
            res = run_suite(a[0], a[1], self.flags.seed)
            return {"kind": "bool", "value": res.failures == 0, "instances": res.instances,
                    "failures": res.failures, "replayed": res.replayed}
        raise _EvalError(f"unknown query {q.cmd}")

    def _verdict(self, cmd: str, a: tuple, N: int) -> dict:
        if cmd in ("treduce", "reduce"):
            J, I = self.ideals[a[0]], self.ideals[a[1]]
            v = (cl.is_t_reduction if cmd == "treduce" else cl.is_reduction)(J, I, N)
        elif cmd in ("tmember", "member", "radmember"):
            I = self.ideals[a[1]]
            fn = {"tmember": cl.t_integral_member, "member": cl.integral_member,
                  "radmember": cl.radical_member}[cmd]
            v = fn(self.hom(a[0], I), I, N)
        elif cmd == "tcompat":
            incl = _inclusion(self.rings[a[0]], self.rings[a[1]])
            v = mo.t_compat_probe(incl, [self.ideals[n] for n in a[2]], N)
        else:
            I = self.ideals[a[1]]
            incl = _inclusion(I.ring, self.rings[a[2]])
            v = mo.persistence_check(self.hom(a[0], I), I, incl, N)
        return {**v.to_dict(), "_verdict": v}


def _inclusion(src, dst) -> mo.GradedInclusion:
    if dst == src:
        return mo.identity_inclusion(src)
    try:
        if dst == mo.localize_ring(src):
            return mo.localization_inclusion(src)
    except ValueError:
        pass
    return mo.GradedInclusion(src, dst)


# --- expectations ------------------------------------------------------------------------

def _check_expect(q: Query, res: dict, session: Session) -> Optional[str]:
    """None when the expectation holds, else a description of the mismatch."""
    exp = q.expect
    head = exp[0]
    if res["kind"] == "value":
        if head != "=" or len(exp) != 2:
            return "value queries take 'expect = NAME'"
        other = session.ideals.get(exp[1])
        if other is None:
            return f"unknown ideal {exp[1]}"
        return None if gr.g_eq(res["_obj"], other) else f"got {res['value']}, expected {other.describe()}"
    if res["kind"] == "bool":
        want = {"true": True, "false": False}.get(head)
        if want is None or len(exp) != 1:
            return "boolean queries take 'expect true' or 'expect false'"
        return None if res["value"] == want else f"got {str(res['value']).lower()}"
    got = res["kind"]
    if head != got:
        return f"got {got}"
    if len(exp) > 1:
        if got == cl.YES_K and str(res.get("n")) != exp[1]:
            return f"got yes with n = {res.get('n')}"
        if got == cl.NO_K and res["certificate"]["rule"] != exp[1]:
            return f"got no via {res['certificate']['rule']}"
        if got == cl.UNKNOWN_K and res.get("certificate", {}).get("rule") != exp[1]:
            return f"got unknown with {res.get('certificate')}"
    return None


# --- driver --------------------------------------------------------------------------------

def _audit(res: dict) -> None:
    """Replay any certificate in the result; raise InvariantError if it fails."""
    v = res.get("_verdict")
    if v is not None and not v.verify():
        raise gr.InvariantError(f"certificate failed to replay: {v.to_dict()}")
    cert = res.get("_cert")
    if cert is not None and not cert.verify():
        raise gr.InvariantError(f"certificate failed to replay: {cert.to_dict()}")
    if v is not None and v.is_no and v.cert.rule not in cl.EXACT_NO_RULES + ("CompatCounterexample",):
        raise gr.InvariantError(f"exact no without an accepted rule: {v.cert.rule}")


def _inputs(q: Query, session: Session) -> dict:
    """Argument text -> description of the object it denotes."""
    sig = [k for k in QUERIES[q.cmd].split() if k != "to"]
    ideal = next((session.ideals[a] for k, a in zip(sig, q.args) if k == "I"), None)
    out = {}
    for kind, arg in zip(sig, q.args):
        if kind == "I":
            out[arg] = session.ideals[arg].describe()
        elif kind == "R":
            out[arg] = session.rings[arg].describe()
        elif kind in ("e", "[e]"):
            for e in (arg if kind == "[e]" else (arg,)):
                out[show_expr(e)] = str(session.hom(e, ideal)) if ideal is not None else show_expr(e)
        elif kind == "[I]":
            for name in arg:
                out[name] = session.ideals[name].describe()
        else:
            out[str(arg)] = arg
    return out


def run(script, flags: Optional[RunFlags] = None) -> dict:
    """Run a script (text or parsed) and return the report dict."""
    flags = flags or RunFlags()
    if isinstance(script, str):
        script = parse(script)
    report = {"version": REPORT_VERSION, "queries": [],
              "diagnostics": [d.to_dict() for d in script.diagnostics], "exit_code": EXIT_OK}
    if script.diagnostics:
        report["exit_code"] = EXIT_DIAG
        return report
    session = Session(flags)
    qid = 0
    for st in script.statements:
        line = st.line
        try:
            if isinstance(st, RingDef):
                session.ring_def(st)
            elif isinstance(st, IdealDef):
                session.ideal_def(st)
            elif isinstance(st, ElemDef):
                session.elems[st.name] = st.expr
            else:
                qid += 1
                t0 = time.perf_counter()
                res = session.answer(st)
                ms = round((time.perf_counter() - t0) * 1000, 3) if flags.timing else 0
                _audit(res)
                rec = {"id": qid, "kind": st.cmd, "inputs": _inputs(st, session),
                       "result": {k: v for k, v in res.items() if not k.startswith("_")}, "ms": ms}
                if st.max_n is not None:
                    rec["max_n"] = st.max_n
                if st.expect:
                    problem = _check_expect(st, res, session)
                    rec["expect"] = " ".join(st.expect)
                    rec["ok"] = problem is None
                    if problem is not None:
                        report["diagnostics"].append(Diagnostic(
                            E_EXPECT, f"query {qid} ({st.cmd}): {problem}", line, 1).to_dict())
                report["queries"].append(rec)
        except gr.InvariantError as err:
            report["diagnostics"].append(Diagnostic("invariant", str(err), line, 1).to_dict())
            report["exit_code"] = EXIT_INVARIANT
            return report
        except _EvalError as err:
            report["diagnostics"].append(Diagnostic(err.code, str(err), line, 1).to_dict())
        except (ValueError, ZeroDivisionError) as err:
            report["diagnostics"].append(Diagnostic(E_EVAL, str(err), line, 1).to_dict())
    if report["diagnostics"]:
        report["exit_code"] = EXIT_DIAG
    return report


# --- corpus and formatting -------------------------------------------------------------

CORPUS = ("ex2.2", "ex3.7", "ex3.8", "rem3.9", "lemmas-fuzz")


def load_corpus(name: str) -> str:
    if name not in CORPUS:
        raise ValueError(f"unknown corpus script {name!r}; choose from {', '.join(CORPUS)}")
    return resources.files("tideal").joinpath("corpus", name + ".tid").read_text(encoding="utf-8")


def to_json(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True)


def _result_text(res: dict) -> str:
    kind = res["kind"]
    if kind == "value":
        return res["value"] + ("" if res.get("exact", True) else "  (lower bound)")
    if kind == "bool":
        return str(res["value"]).lower()
    if kind == cl.YES_K:
        return f"yes (n = {res['n']})"
    if kind == cl.NO_K:
        return f"no [{res['certificate']['rule']}]"
    if kind == cl.NO_UPTO_K:
        return f"no witness up to {res['bound']}"
    cert = res.get("certificate")
    return f"unknown up to {res['bound']}" + (f" [{cert['rule']}]" if cert else "")


def to_text(report: dict) -> str:
    lines = []
    for rec in report["queries"]:
        args = " ".join(rec["inputs"].keys())
        mark = "" if "ok" not in rec else ("  ok" if rec["ok"] else "  FAILED")
        lines.append(f"[{rec['id']}] {rec['kind']} {args}: {_result_text(rec['result'])}{mark}")
    for d in report["diagnostics"]:
        lines.append(f"{d['line']}:{d['col']}: {d['code']}: {d['message']}"
                     + (f" at {d['token']!r}" if d["token"] else ""))
    lines.append(f"exit {report['exit_code']}")
    return "\n".join(lines) + "\n"
