import pytest
from hypothesis import given, strategies as st

from tideal.lang import (
    E_CONTEXT, E_SYNTAX, E_UNKNOWN_NAME, Bin, Neg, Num, Pow, Query, Sqrt, Var, parse, show_expr,
)
from tideal.runner import CORPUS, load_corpus

HEADER = "ring R = subring(Q(sqrt(2)); Z[sqrt(2)]; [x])\nideal I = (x) in R\n"

leaves = st.one_of(
    st.integers(0, 50).map(Num),
    st.sampled_from([Sqrt(2), Sqrt(8)]),
    st.just(Var()),
)
exprs = st.recursive(
    leaves,
    lambda sub: st.one_of(
        st.builds(Bin, st.sampled_from("+-*"), sub, sub),
        st.builds(Bin, st.just("/"), sub, st.integers(1, 9).map(Num)),
        st.builds(Neg, sub),
        st.builds(Pow, st.one_of(st.just(Var()), st.integers(1, 5).map(Num)), st.integers(-3, 4)),
    ),
    max_leaves=8,
)


@given(exprs)
def test_expression_round_trip(e):
    script = parse(HEADER + f"query contains I {show_expr(e)}")
    assert script.ok, script.diagnostics
    q = script.statements[-1]
    assert q.args[1] == e
    again = parse(script.pretty())
    assert again.statements == script.statements


@pytest.mark.parametrize("name", CORPUS)
def test_corpus_scripts_round_trip(name):
    script = parse(load_corpus(name))
    assert script.ok, script.diagnostics
    assert parse(script.pretty()).statements == script.statements


def test_precedence():
    s = parse(HEADER + "query contains I 1 + 2*x^2 - -x")
    e = s.statements[-1].args[1]
    assert e == Bin("-", Bin("+", Num(1), Bin("*", Num(2), Pow(Var(), 2))), Neg(Var()))


def test_ring_statement():
    s = parse("ring R = subring(Q; Z; [3*x, x^2, x^3])")
    assert s.ok
    st_ = s.statements[0]
    assert st_.name == "R" and len(st_.body.gens) == 3
    assert s.pretty() == "ring R = subring(Q; Z; [(3 * x), x^2, x^3])\n"


def test_query_options():
    s = parse(HEADER + "query treduce I I --max-n 5 expect yes 0")
    q = s.statements[-1]
    assert isinstance(q, Query) and q.max_n == 5 and q.expect == ("yes", "0")


def diag(src):
    ds = parse(src).diagnostics
    assert len(ds) == 1, ds
    return ds[0]


def test_zero_denominator_is_a_syntax_error():
    d = diag("ring R = subring(Q; Z; [3*x, x^2, x^3])\nideal I = (x^1/0) in R")
    assert (d.code, d.line, d.token) == (E_SYNTAX, 2, "0")


def test_unknown_name():
    d = diag(HEADER + "query tmember q I")
    assert (d.code, d.line, d.col, d.token) == (E_UNKNOWN_NAME, 3, 15, "q")
    assert diag("query inv I").code == E_UNKNOWN_NAME


def test_context_mismatch():
    assert diag("ring R = subring(Q; Z; [x])\nideal I = (sqrt(2)*x) in R").code == E_CONTEXT
    assert diag("ring R = subring(Q; Z[sqrt(2)]; [x])").code == E_CONTEXT
    src = ("ring R = subring(Q; Z; [x])\nring T = subring(Q; Z; [x, x^2])\n"
           "ideal I = (x) in R\nideal J = (x) in T\nquery mul I J")
    assert diag(src).code == E_CONTEXT


def test_each_bad_line_is_reported():
    src = "ring R = subring(Q; Z; [x]) junk\nelem s = 1 $ 2\nquery frobnicate R"
    codes = [d.code for d in parse(src).diagnostics]
    assert codes == [E_SYNTAX] * 3


def test_comments_and_blank_lines():
    s = parse("# header\n\nring R = subring(Q; Z; [x])  # trailing\n")
    assert s.ok and len(s.statements) == 1


def test_corpus_word_argument():
    s = parse("query corpus lemmas-fuzz expect true")
    assert s.ok and s.statements[0].args == ("lemmas-fuzz",)
