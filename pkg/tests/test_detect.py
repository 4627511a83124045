"""Pattern-detection tests.

Detection decides which refactoring rules fire, so for each rule there
is a program that needs it and a near-miss that must not trigger it.
The report must be exact: extra rules would make passes run (and
potentially rewrite) where nothing applies.
"""

from __future__ import annotations

import pytest

from py2spdz.rules import RuleId, detect_patterns

from helpers import BREAK_SOURCE, SQRT_SOURCE, program


def detected(source, clear_params=()):
    report = detect_patterns(program(source), clear_params=clear_params)
    return {rule for rule in RuleId if report.applicable(rule)}


# ---------------------------------------------------------------------------
# the golden programs


def test_break_program_detects_exactly_break_and_oblivious():
    assert detected(BREAK_SOURCE) == {
        RuleId.ELIMINATE_BREAK,
        RuleId.OBLIVIOUS_FORM,
    }


def test_sqrt_program_detects_only_oblivious_form():
    assert detected(SQRT_SOURCE) == {RuleId.OBLIVIOUS_FORM}


# ---------------------------------------------------------------------------
# one positive and one negative program per rule


def test_linear_nonlinear():
    assert RuleId.LINEAR_NONLINEAR in detected("def f(x):\n    return math.tanh(x)\n")
    # exp/log/sqrt are already in the supported basis
    assert RuleId.LINEAR_NONLINEAR not in detected("def f(x):\n    return math.exp(x)\n")
    assert RuleId.LINEAR_NONLINEAR not in detected("def f(x):\n    return math.sqrt(x)\n")


def test_data_structure():
    assert RuleId.DATA_STRUCTURE in detected(
        "def f(a):\n"
        "    out = []\n"
        "    for i in range(len(a)):\n"
        "        out.append(a[i])\n"
        "    return out\n"
    )
    assert RuleId.DATA_STRUCTURE in detected("def f(x):\n    v = [x, x]\n    return v\n")
    assert RuleId.DATA_STRUCTURE not in detected("def f(a):\n    return a[0]\n")


def test_syntax_sugar():
    assert RuleId.SYNTAX_SUGAR in detected("def f(x):\n    return 1 if x > 0 else 2\n")
    assert RuleId.SYNTAX_SUGAR in detected("def f(a):\n    return [x + 1 for x in a]\n")
    assert RuleId.SYNTAX_SUGAR in detected("def f(a, b):\n    a, b = b, a\n    return a\n")
    assert RuleId.SYNTAX_SUGAR in detected(
        "def f(a):\n    s = 0\n    for x in a:\n        s = s + x\n    return s\n"
    )
    assert RuleId.SYNTAX_SUGAR not in detected(
        "def f(a):\n"
        "    s = 0\n"
        "    for i in range(len(a)):\n"
        "        s = s + a[i]\n"
        "    return s\n"
    )


def test_rewrite_while_loop():
    assert RuleId.REWRITE_WHILE_LOOP in detected(
        "def f(n):\n"
        "    t = 0\n"
        "    while n > 0:\n"
        "        t = t + n\n"
        "        n = n - 1\n"
        "    return t\n",
        clear_params=("n",),
    )
    assert RuleId.REWRITE_WHILE_LOOP not in detected(
        "def f(n):\n"
        "    t = 0\n"
        "    for i in range(n):\n"
        "        t = t + i\n"
        "    return t\n",
        clear_params=("n",),
    )


def test_eliminate_advanced_array_operations():
    assert RuleId.ELIMINATE_ADVANCED_ARRAY_OPERATIONS in detected(
        "def f(a):\n    return sum(a)\n"
    )
    assert RuleId.ELIMINATE_ADVANCED_ARRAY_OPERATIONS in detected(
        "def f(a):\n    return a[1:3]\n"
    )
    assert RuleId.ELIMINATE_ADVANCED_ARRAY_OPERATIONS in detected(
        "def f(a, b):\n    return numpy.dot(a, b)\n"
    )
    assert RuleId.ELIMINATE_ADVANCED_ARRAY_OPERATIONS in detected(
        "def f(a):\n    b = numpy.array(a)\n    return numpy.exp(b)\n"
    )
    # with no array evidence a ufunc argument types as a scalar, and a
    # scalar ufunc application is nonlinear decomposition's business
    assert RuleId.ELIMINATE_ADVANCED_ARRAY_OPERATIONS not in detected(
        "def f(x):\n    return numpy.expm1(x)\n"
    )
    assert RuleId.ELIMINATE_ADVANCED_ARRAY_OPERATIONS not in detected(
        "def f(a):\n    return a[0] + a[1]\n"
    )


def test_eliminate_break_and_continue():
    loop = (
        "def f(a):\n"
        "    s = 0\n"
        "    for i in range(len(a)):\n"
        "        if a[i] < 0:\n"
        "            {stmt}\n"
        "        s = s + a[i]\n"
        "    return s\n"
    )
    assert RuleId.ELIMINATE_BREAK in detected(loop.format(stmt="break"))
    assert RuleId.ELIMINATE_CONTINUE in detected(loop.format(stmt="continue"))
    plain = loop.format(stmt="s = s - 1")
    assert RuleId.ELIMINATE_BREAK not in detected(plain)
    assert RuleId.ELIMINATE_CONTINUE not in detected(plain)


def test_nested_if_multiple_return():
    assert RuleId.NESTED_IF_MULTIPLE_RETURN in detected(
        "def f(x):\n"
        "    if x > 10:\n"
        "        return 2\n"
        "    return 1\n"
    )
    assert RuleId.NESTED_IF_MULTIPLE_RETURN in detected(
        "def f(x, y):\n"
        "    if x > 0:\n"
        "        if y > 0:\n"
        "            z = x + y\n"
        "        else:\n"
        "            z = x\n"
        "    else:\n"
        "        z = y\n"
        "    return z\n"
    )
    assert RuleId.NESTED_IF_MULTIPLE_RETURN not in detected(SQRT_SOURCE)


def test_chained_comparison():
    assert RuleId.CHAINED_COMPARISON in detected("def f(a, b, c):\n    return a < b < c\n")
    assert RuleId.CHAINED_COMPARISON not in detected("def f(a, b):\n    return a < b\n")


def test_oblivious_form_requires_a_secret_condition():
    branchy = (
        "def f(x, n):\n"
        "    y = 0\n"
        "    if {cond} > 0:\n"
        "        y = 1\n"
        "    return y\n"
    )
    assert RuleId.OBLIVIOUS_FORM in detected(branchy.format(cond="x"), clear_params=("n",))
    assert RuleId.OBLIVIOUS_FORM not in detected(branchy.format(cond="n"), clear_params=("n",))


def test_secret_while_marks_both_rules():
    rules = detected(
        "def f(x):\n"
        "    while x > 0:\n"
        "        x = x - 1\n"
        "    return x\n"
    )
    assert RuleId.REWRITE_WHILE_LOOP in rules
    assert RuleId.OBLIVIOUS_FORM in rules


# ---------------------------------------------------------------------------
# report object


def test_report_lists_sites_with_spans():
    report = detect_patterns(program(BREAK_SOURCE))
    spans = report.spans(RuleId.ELIMINATE_BREAK)
    assert len(spans) == 1
    assert spans[0].line == 4


def test_report_to_dict_covers_every_rule():
    payload = detect_patterns(program(BREAK_SOURCE)).to_dict()
    assert set(payload) == {rule.value for rule in RuleId}
    assert payload["EliminateBreak"]["applicable"] is True
    assert payload["ChainedComparison"]["applicable"] is False
    assert payload["EliminateBreak"]["sites"] == [[4, 13]]


def test_rule_names_match_the_published_table():
    assert {rule.value for rule in RuleId} == {
        "LinearNonLinear",
        "DataStructure",
        "SyntaxSugar",
        "RewriteWhileLoop",
        "EliminateAdvancedArrayOperations",
        "EliminateBreak",
        "EliminateContinue",
        "NestedIfMultipleReturn",
        "ChainedComparison",
        "ObliviousForm",
    }


def test_straight_line_clear_program_detects_nothing():
    assert detected("def f(n, m):\n    return n * m + 1\n", clear_params=("n", "m")) == set()
