from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from coarsekit.dsl import Bin, DslError, Fact, Neg, Num, Var, evaluate, parse, pretty_print, show

EXAMPLE = """\
space Z grid dim=1 step=1
set A = geom(2)
window w = ball(0, 1048576)
job thin A r=4 in w
"""


def test_example_program():
    P = parse(EXAMPLE)
    assert len(P.declarations) == 3 and len(P.jobs) == 1
    j = P.jobs[0]
    assert j.kind == "thin" and j.args == (("A",),) and j.windows == ("w",)
    assert pretty_print(P) == EXAMPLE


def test_comments_and_blank_lines():
    P = parse("# header\n\nspace Z grid   # trailing\nset A = arith(1, 3)\n")
    assert len(P.statements) == 2


def test_set_before_space():
    with pytest.raises(DslError) as e:
        parse("set A = geom(2)\n")
    assert e.value.line == 1 and "set before space" in str(e.value)


def test_misspelled_job_kind():
    with pytest.raises(DslError) as e:
        parse(EXAMPLE + "job sprase A bands=8 in w\n")
    assert e.value.line == 5 and e.value.col == 5
    assert "sparse" in e.value.suggestions
    assert "thin" in e.value.expected


def test_syntax_error_position():
    with pytest.raises(DslError) as e:
        parse("space Z grid\nset A = geom(2\n")
    assert (e.value.line, e.value.col) == (2, 15)
    assert "')'" in e.value.expected
    with pytest.raises(DslError) as e:
        parse("space Z grid\nset A = geom(2) $\n")
    assert (e.value.line, e.value.col) == (2, 17)


def test_name_errors():
    cases = {
        "space Z grid\nset A = ball(B, 1)\n": "unknown identifier 'B'",
        "space Z grid\nset A = seq(k)\n": "only n may appear",
        "space Z grid\nwindow w = ball(0, 9)\njob thin A r=1 in w\n": "unknown set 'A'",
        "space Z grid\nset A = geom(2)\nset A = geom(3)\n": "already declared",
        "space Z grid\nset A = gemo(2)\n": "unknown set function",
        "space Z grid colour=1\n": "no parameter 'colour'",
        "space Z blob\n": "unknown space kind",
        "space Z grid\nset A = geom(2)\nwindow w = ball(0, 9)\njob thin A rr=1 in w\n": "no parameter 'rr'",
        "space Z grid\nset A = geom(2)\nwindow w = ball(0, 9)\njob thin A r=1 in v\n": "unknown window 'v'",
    }
    for text, needle in cases.items():
        with pytest.raises(DslError) as e:
            parse(text)
        assert needle in e.value.message, (text, e.value)
        assert e.value.line >= 1


def test_suggestion_for_set_name():
    with pytest.raises(DslError) as e:
        parse("space Z grid\nset Powers = geom(2)\nwindow w = ball(0, 9)\njob thin Power r=1 in w\n")
    assert e.value.suggestions == ("Powers",)


def test_rationals_are_exact():
    P = parse("space Q rational step=1/8\nset A = geom(2)\nwindow w = ball(0, 3/2)\n")
    assert P.declarations[2].radius == Bin("/", Num(3), Num(2))
    assert evaluate(P.declarations[2].radius) == Fraction(3, 2)


def test_shipped_programs_parse():
    import pathlib

    root = pathlib.Path(__file__).resolve().parents[1] / "programs"
    for f in sorted(root.glob("*.bl")):
        P = parse(f.read_text())
        assert parse(pretty_print(P)) == P
        assert P.jobs


# -- round trip -------------------------------------------------------------


leaf = st.one_of(st.integers(0, 40).map(Num), st.just(Var("n")))


def extend(sub):
    ops = st.sampled_from(["+", "-", "*", "/", "^"])
    return st.one_of(
        st.builds(Bin, ops, sub, sub),
        st.builds(Neg, sub),
        st.builds(Fact, sub),
    )


exprs = st.recursive(leaf, extend, max_leaves=8)


@given(exprs)
def test_expression_round_trip(e):
    P = parse(f"space Z grid\nset A = seq({show(e)})\n")
    assert P.declarations[1].expr.args[0] == e


names = st.sampled_from(["A", "B", "Pow", "S2"])
small = st.integers(0, 99)


@st.composite
def programs(draw):
    lines = ["space Z grid dim=1"]
    declared = []
    for name in draw(st.lists(names, min_size=1, max_size=4, unique=True)):
        form = draw(st.sampled_from(["geom", "arith", "list", "ball", "union", "interval"]))
        if form == "geom":
            rhs = f"geom({draw(st.integers(2, 5))})"
        elif form == "arith":
            rhs = f"arith({draw(small)}, {draw(st.integers(1, 9))})"
        elif form == "list":
            rhs = "list(" + ", ".join(str(draw(small)) for _ in range(draw(st.integers(0, 4)))) + ")"
        elif form == "interval":
            rhs = f"interval({draw(small)}, inf)"
        elif declared:
            other = draw(st.sampled_from(declared))
            rhs = f"ball({other}, {draw(small)})" if form == "ball" else f"union({other}, geom(2))"
        else:
            rhs = "seq(n^2 + 1)"
        lines.append(f"set {name} = {rhs}")
        declared.append(name)
    lines.append(f"window w = ball({draw(small)}, {draw(st.integers(10, 4096))})")
    lines.append(f"ideal I = closure({', '.join(declared)}; bounded={draw(st.sampled_from(['true', 'false']))}; cap={draw(st.sampled_from(['inf', '0', '8']))})")
    for _ in range(draw(st.integers(0, 4))):
        a = draw(st.sampled_from(declared))
        kind = draw(st.sampled_from(["thin", "large", "sparsity", "member", "linked"]))
        if kind == "thin":
            lines.append(f"job thin {a} r={draw(small)} in w")
        elif kind == "large":
            lines.append(f"job large {a} r={draw(small)}/2 in w")
        elif kind == "sparsity":
            lines.append(f"job sparsity {a} shifts=-{draw(st.integers(1, 8))}..{draw(st.integers(0, 8))} in w")
        elif kind == "member":
            lines.append(f"job member I {a} in w")
        else:
            lines.append(f"job linked {a} {draw(st.sampled_from(declared))} r=1 in w")
    return "\n".join(lines) + "\n"


@given(programs())
def test_program_round_trip(text):
    P = parse(text)
    printed = pretty_print(P)
    assert parse(printed) == P
    assert pretty_print(parse(printed)) == printed
