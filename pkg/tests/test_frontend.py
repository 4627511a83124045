"""Lexer, parser, renderer, and subset-validation tests.

The load-bearing property is that ``render`` is a canonical form:
``parse(render(t))`` must be structurally equal to ``t`` for every tree
the parser can produce, so the refactoring passes can compare programs
as text or as trees interchangeably.
"""

from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from py2spdz.errors import LexError, ParseError, SubsetError
from py2spdz.frontend import (
    Assign, BinOp, BoolOp, Call, Compare, For, FunctionDef, If, Name, Num,
    Return, Span, Subscript, Ternary, UnaryOp, dotted_name, parse,
    parse_expression, render, render_expr, single_function, tokenize,
    validate_subset,
)

from helpers import BREAK_SOURCE, program

# ---------------------------------------------------------------------------
# lexer


def kinds(source):
    return [t.kind for t in tokenize(source)]


def test_tokenize_flat_statement():
    tokens = tokenize("x = a + 1\n")
    assert [t.kind for t in tokens] == [
        "NAME", "OP", "NAME", "OP", "NUMBER", "NEWLINE", "ENDMARKER",
    ]
    assert [t.text for t in tokens[:5]] == ["x", "=", "a", "+", "1"]


def test_tokenize_tracks_indent_levels():
    source = "def f(x):\n    if x:\n        return x\n"
    assert kinds(source).count("INDENT") == 2
    assert kinds(source).count("DEDENT") == 2


def test_tokenize_spans_are_one_based():
    tokens = tokenize("x = 1\n")
    assert tokens[0].span == Span(1, 1)
    assert tokens[2].span == Span(1, 5)


def test_tokenize_multichar_operators_take_priority():
    texts = [t.text for t in tokenize("a ** b // c <= d\n") if t.kind == "OP"]
    assert texts == ["**", "//", "<="]


def test_tokenize_comments_and_blank_lines_vanish():
    source = "# header\n\nx = 1  # trailing\n"
    assert kinds(source) == ["NAME", "OP", "NUMBER", "NEWLINE", "ENDMARKER"]


@pytest.mark.parametrize(
    "source, fragment",
    [
        ("\tx = 1\n", "tab"),
        ("def f():\n   return 1\n", "multiple of 4"),
        ("def f():\n        return 1\n", "jumps"),
        ("x = 1$\n", "unexpected character"),
        ("x = 1e\n", "malformed number"),
    ],
)
def test_tokenize_rejects_bad_input(source, fragment):
    with pytest.raises(LexError) as err:
        tokenize(source)
    assert fragment in str(err.value)


def test_tokenize_number_forms():
    values = [t.text for t in tokenize("0 42 3.5 1e3 2.5e-2 .5\n") if t.kind == "NUMBER"]
    assert values == ["0", "42", "3.5", "1e3", "2.5e-2", ".5"]


# ---------------------------------------------------------------------------
# parser structure


def test_parse_function_shape():
    fn = single_function(parse("def f(a, b):\n    return a + b\n"))
    assert isinstance(fn, FunctionDef)
    assert fn.name == "f"
    assert fn.params == ("a", "b")
    assert isinstance(fn.body[0], Return)


def test_parse_docstring_is_lifted_off_the_body():
    fn = single_function(parse('def f(x):\n    """doc."""\n    return x\n'))
    assert fn.docstring == "doc."
    assert len(fn.body) == 1


def test_parse_precedence_mul_over_add():
    expr = parse_expression("a + b * c")
    assert isinstance(expr, BinOp) and expr.op == "+"
    assert isinstance(expr.right, BinOp) and expr.right.op == "*"


def test_parse_power_is_right_associative():
    expr = parse_expression("a ** b ** c")
    assert expr.op == "**"
    assert isinstance(expr.right, BinOp) and expr.right.op == "**"


def test_parse_unary_minus_binds_tighter_than_multiplication():
    expr = parse_expression("-a * b")
    assert isinstance(expr, BinOp) and expr.op == "*"
    assert isinstance(expr.left, UnaryOp)


def test_parse_comparison_chain_collects_ops():
    expr = parse_expression("a < b <= c")
    assert isinstance(expr, Compare)
    assert expr.ops == ("<", "<=")
    assert len(expr.comparators) == 2


def test_parse_boolop_binds_looser_than_compare():
    expr = parse_expression("a < b and c > d or e == f")
    assert isinstance(expr, BoolOp) and expr.op == "or"
    assert isinstance(expr.values[0], BoolOp) and expr.values[0].op == "and"


def test_parse_ternary():
    expr = parse_expression("x if c > 0 else y")
    assert isinstance(expr, Ternary)
    assert isinstance(expr.test, Compare)


def test_parse_call_and_attribute():
    expr = parse_expression("math.sqrt(x)")
    assert isinstance(expr, Call)
    assert dotted_name(expr.func) == "math.sqrt"


def test_parse_subscript_and_slice():
    plain = parse_expression("a[i + 1]")
    assert isinstance(plain, Subscript)
    sliced = parse_expression("a[1:4:2]")
    assert sliced.index.lower.value == 1
    assert sliced.index.step.value == 2
    open_ended = parse_expression("a[::-1]")
    assert open_ended.index.lower is None
    assert open_ended.index.upper is None


def test_parse_elif_nests_into_orelse():
    module = parse(
        "def f(x):\n"
        "    if x > 2:\n"
        "        return 2\n"
        "    elif x > 1:\n"
        "        return 1\n"
        "    else:\n"
        "        return 0\n"
    )
    branch = single_function(module).body[0]
    assert isinstance(branch, If)
    assert len(branch.orelse) == 1 and isinstance(branch.orelse[0], If)


def test_parse_for_over_range():
    module = parse("def f(a):\n    for i in range(3):\n        a = a + i\n    return a\n")
    loop = single_function(module).body[0]
    assert isinstance(loop, For)
    assert loop.var == "i"


def test_parse_tuple_assignment():
    module = parse("def f(a, b):\n    a, b = b, a\n    return a\n")
    swap = single_function(module).body[0]
    assert isinstance(swap, Assign)
    assert len(swap.target.elements) == 2


def test_parse_spans_point_into_source():
    module = parse("def f(x):\n    return x + 1\n")
    ret = single_function(module).body[0]
    assert ret.span.line == 2


@pytest.mark.parametrize(
    "source",
    [
        "def f(x)\n    return x\n",     # missing colon
        "def f(x):\n    return x +\n",  # dangling operator
        "def f(x):\n    1 +\n",
        "def f(x):\n    if x\n        return x\n",
        "x = (1\n",
    ],
)
def test_parse_errors(source):
    with pytest.raises(ParseError):
        parse(source)


# ---------------------------------------------------------------------------
# renderer


def test_render_round_trips_the_golden_program():
    module = parse(BREAK_SOURCE)
    assert parse(render(module)) == module


def test_render_emits_minimal_parentheses():
    assert render_expr(parse_expression("(a + b) * c")) == "(a + b) * c"
    assert render_expr(parse_expression("a + (b * c)")) == "a + b * c"
    assert render_expr(parse_expression("-(a + b)")) == "-(a + b)"
    assert render_expr(parse_expression("(a ** b) ** c")) == "(a ** b) ** c"


def test_render_collapses_else_if_to_elif():
    source = (
        "def f(x):\n"
        "    if x > 2:\n"
        "        return 2\n"
        "    elif x > 1:\n"
        "        return 1\n"
        "    else:\n"
        "        return 0\n"
    )
    assert render(parse(source)) == source


NAMES = st.sampled_from(["a", "b", "c", "x", "y"])
NUMBERS = st.sampled_from([0, 1, 2, 7, 0.5, 1.25, 2.0, 10.0])
ARITH_OPS = st.sampled_from(["+", "-", "*", "/", "//", "%", "**"])
CMP_OPS = st.sampled_from(["<", "<=", ">", ">=", "==", "!="])


def exprs():
    atoms = st.one_of(
        NAMES.map(lambda n: Name(id=n)),
        NUMBERS.map(lambda v: Num(value=v)),
    )

    def extend(children):
        binops = st.builds(
            lambda l, op, r: BinOp(left=l, op=op, right=r),
            children, ARITH_OPS, children,
        )
        unary = children.map(lambda e: UnaryOp(op="-", operand=e))
        compares = st.builds(
            lambda l, op, r: Compare(left=l, ops=(op,), comparators=(r,)),
            children, CMP_OPS, children,
        )
        boolops = st.builds(
            lambda op, l, r: BoolOp(op=op, values=(l, r)),
            st.sampled_from(["and", "or"]), children, children,
        )
        nots = children.map(lambda e: UnaryOp(op="not", operand=e))
        ternary = st.builds(
            lambda t, a, b: Ternary(test=t, body=a, orelse=b),
            children, children, children,
        )
        calls = children.map(
            lambda e: Call(func=Name(id="abs"), args=(e,))
        )
        return st.one_of(binops, unary, compares, boolops, nots, ternary, calls)

    return st.recursive(atoms, extend, max_leaves=12)


@given(exprs())
def test_render_parse_round_trip_is_identity(tree):
    assert parse_expression(render_expr(tree)) == tree


@given(exprs())
def test_render_is_stable_under_reparse(tree):
    once = render_expr(tree)
    assert render_expr(parse_expression(once)) == once


# ---------------------------------------------------------------------------
# subset validation


def test_validate_accepts_the_golden_program():
    fn = validate_subset(parse(BREAK_SOURCE))
    assert fn.name == "f"


@pytest.mark.parametrize(
    "source, fragment",
    [
        ("import math\ndef f(x):\n    return x\n", "import statements"),
        ("def f(x):\n    return x\ndef g(x):\n    return x\n", "exactly one function"),
        ("def f(x):\n    def g(y):\n        return y\n    return x\n", "nested function"),
        ("def f(x):\n    print(x)\n    return x\n", "'print' is not whitelisted"),
        ("def f(x):\n    return math.gamma(x)\n", "math.gamma is not whitelisted"),
        ("def f(x):\n    return numpy.fft(x)\n", "numpy.fft is not whitelisted"),
        ("def f(a):\n    a.reverse()\n    return a\n", ".reverse() is not whitelisted"),
        ("def f(x):\n    return 'nope'\n", "docstring"),
        ("def f(x):\n    break\n", "break outside a loop"),
        ("def f(x):\n    return\n", "return must carry a value"),
        ("def f(x, x):\n    return x\n", "duplicate parameter"),
        ("def f(__flag_0):\n    return __flag_0\n", "reserved name prefix"),
        ("def f(x):\n    __t_1 = x\n    return __t_1\n", "reserved prefix"),
        ("def f(x):\n    len = x\n    return len\n", "shadows reserved name"),
        ("def f(a):\n    a[0:2] = a\n    return a\n", "slice assignment"),
        ("def f(x):\n    x = time.time()\n    return x\n", "not whitelisted"),
    ],
)
def test_validate_flags_violations(source, fragment):
    with pytest.raises(SubsetError) as err:
        validate_subset(parse(source))
    assert fragment in str(err.value)


def test_validate_collects_multiple_violations():
    source = "def f(x):\n    print(x)\n    return 'two'\n"
    with pytest.raises(SubsetError) as err:
        validate_subset(parse(source))
    assert len(err.value.violations) == 2


def test_docstring_is_allowed():
    program('def f(x):\n    """Absolute value."""\n    return abs(x)\n')


def test_math_constants_are_allowed():
    program("def f(x):\n    return x * math.pi + math.e\n")
