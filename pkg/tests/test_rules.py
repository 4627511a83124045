"""Refactoring-pass tests: golden forms, per-pass shapes, differential
equivalence, and failure modes.

Three layers of assurance, strongest first:

1. Golden forms — two published input/output pairs must reproduce
   structurally (modulo generated names) and be fixpoints.
2. Differential equivalence — for a battery of programs, the canonical
   form must compute the same outputs as the source on concrete inputs,
   with exact float equality unless nonlinear decomposition fired.
3. Failure modes — programs with no oblivious form must be rejected
   with the documented error messages, never silently mistranslated.
"""

from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from py2spdz.errors import CertificationError, RuleError
from py2spdz.frontend import parse, parse_expression, render_expr
from py2spdz.pyexec import run, values_equal
from py2spdz.rules import (
    PASS_ORDER, RuleId, alpha_equal, certify, decompose_nonlinear,
    desugar_syntax, eliminate_break, eliminate_continue, flatten_branches,
    lower_array_ops, lower_data_structures, make_oblivious, mask_pair,
    refactor_to_cfp, rewrite_while, split_chained_comparisons,
)

from helpers import (
    BREAK_CANONICAL, BREAK_SOURCE, SQRT_CANONICAL, SQRT_SOURCE,
    assert_equivalent, cfp_of, program,
)


def pass_output(fn, source, clear_params=()):
    return fn(program(source), clear_params)


def assert_form(fn, source, expected, clear_params=()):
    got = pass_output(fn, source, clear_params)
    assert alpha_equal(got, parse(expected)), (
        f"pass produced:\n{render_module(got)}\nexpected:\n{expected}"
    )


def render_module(module):
    from py2spdz.frontend import render

    return render(module)


# ---------------------------------------------------------------------------
# golden forms


def test_break_golden_form():
    cfp = cfp_of(BREAK_SOURCE)
    assert alpha_equal(cfp.ast, parse(BREAK_CANONICAL))
    assert set(cfp.fired) == {RuleId.ELIMINATE_BREAK, RuleId.OBLIVIOUS_FORM}


def test_sqrt_golden_form():
    cfp = cfp_of(SQRT_SOURCE)
    assert alpha_equal(cfp.ast, parse(SQRT_CANONICAL))
    assert set(cfp.fired) == {RuleId.OBLIVIOUS_FORM}


def test_break_golden_differential():
    module = program(BREAK_SOURCE)
    cfp = refactor_to_cfp(module)
    for a in ([1, 2, 3], [5, 1, 1], [0, 0], []):
        assert run(cfp.ast, (a,)) == run(module, (a,))


def test_canonical_forms_are_fixpoints():
    for source in (BREAK_SOURCE, SQRT_SOURCE):
        first = refactor_to_cfp(program(source))
        second = refactor_to_cfp(first.ast)
        assert alpha_equal(second.ast, first.ast)
        assert second.fired == ()


def test_certificate_names_all_fourteen_checks():
    cfp = cfp_of(BREAK_SOURCE)
    assert len(cfp.certificate) == 14
    assert "no-break" in cfp.certificate
    assert "no-secret-branch" in cfp.certificate
    assert "nonlinear-basis-only" in cfp.certificate


def test_pass_order_is_fixed():
    assert [rule.value for rule, _ in PASS_ORDER] == [
        "SyntaxSugar",
        "ChainedComparison",
        "DataStructure",
        "RewriteWhileLoop",
        "EliminateAdvancedArrayOperations",
        "LinearNonLinear",
        "EliminateContinue",
        "EliminateBreak",
        "NestedIfMultipleReturn",
        "ObliviousForm",
    ]


# ---------------------------------------------------------------------------
# alpha equality


def test_alpha_equal_renames_fresh_names_consistently():
    a = parse("def f(x):\n    __t_0 = x\n    return __t_0\n")
    b = parse("def f(x):\n    __t_7 = x\n    return __t_7\n")
    assert alpha_equal(a, b)


def test_alpha_equal_requires_a_bijection():
    a = parse("def f(x):\n    __t_0 = x\n    __t_1 = __t_0\n    return __t_1\n")
    b = parse("def f(x):\n    __t_2 = x\n    __t_2 = __t_2\n    return __t_2\n")
    assert not alpha_equal(a, b)


def test_alpha_equal_does_not_rename_user_names():
    a = parse("def f(x):\n    y = x\n    return y\n")
    b = parse("def f(x):\n    z = x\n    return z\n")
    assert not alpha_equal(a, b)


def test_alpha_equal_never_mixes_fresh_and_user_names():
    a = parse("def f(x):\n    __t_0 = x\n    return __t_0\n")
    b = parse("def f(x):\n    y = x\n    return y\n")
    assert not alpha_equal(a, b)


# ---------------------------------------------------------------------------
# per-pass shapes


def test_desugar_ternary_to_mask():
    assert_form(
        desugar_syntax,
        "def f(x):\n    y = 1 if x > 0 else 2\n    return y\n",
        "def f(x):\n    y = (x > 0) * 1 + (x <= 0) * 2\n    return y\n",
    )


def test_desugar_list_comprehension_to_allocation_loop():
    assert_form(
        desugar_syntax,
        "def f(a):\n    b = [x * 2 for x in a]\n    return b\n",
        "def f(a):\n"
        "    b = numpy.zeros(len(a))\n"
        "    for __t_0 in range(len(a)):\n"
        "        x = a[__t_0]\n"
        "        b[__t_0] = x * 2\n"
        "    return b\n",
    )


def test_desugar_tuple_swap_to_temporaries():
    assert_form(
        desugar_syntax,
        "def f(a, b):\n    a, b = b, a\n    return a\n",
        "def f(a, b):\n    __t_0 = a\n    a = b\n    b = __t_0\n    return a\n",
    )


def test_desugar_foreach_to_indexed_loop():
    assert_form(
        desugar_syntax,
        "def f(a):\n    s = 0\n    for x in a:\n        s = s + x\n    return s\n",
        "def f(a):\n"
        "    s = 0\n"
        "    for __t_0 in range(len(a)):\n"
        "        x = a[__t_0]\n"
        "        s = s + x\n"
        "    return s\n",
    )


def test_split_chained_comparison():
    assert_form(
        split_chained_comparisons,
        "def f(a, b, c):\n    return a < b < c\n",
        "def f(a, b, c):\n    return a < b and b < c\n",
    )


def test_rewrite_while_affine_counter_to_for():
    assert_form(
        rewrite_while,
        "def f(n):\n"
        "    t = 0\n"
        "    i = 0\n"
        "    while i < n:\n"
        "        t = t + i\n"
        "        i = i + 1\n"
        "    return t\n",
        "def f(n):\n"
        "    t = 0\n"
        "    for i in range(n):\n"
        "        t = t + i\n"
        "    return t\n",
        clear_params=("n",),
    )


def test_lower_literal_list_to_allocation():
    assert_form(
        lower_data_structures,
        "def f(x):\n    v = [x, 2]\n    return v[0] + v[1]\n",
        "def f(x):\n"
        "    v = numpy.zeros(2)\n"
        "    v[0] = x\n"
        "    v[1] = 2\n"
        "    return v[0] + v[1]\n",
    )


def test_lower_append_build_to_indexed_writes():
    assert_form(
        lower_data_structures,
        "def f(a):\n"
        "    out = []\n"
        "    for i in range(len(a)):\n"
        "        out.append(a[i] * 2)\n"
        "    return out\n",
        "def f(a):\n"
        "    out = numpy.zeros(len(a))\n"
        "    for i in range(len(a)):\n"
        "        out[i] = a[i] * 2\n"
        "    return out\n",
    )


def test_lower_sum_to_accumulator_loop():
    assert_form(
        lower_array_ops,
        "def f(a):\n    return sum(a)\n",
        "def f(a):\n"
        "    __t_1 = 0\n"
        "    for __t_0 in range(len(a)):\n"
        "        __t_1 = __t_1 + a[__t_0]\n"
        "    return __t_1\n",
    )


def test_lower_dot_to_product_loop():
    assert_form(
        lower_array_ops,
        "def f(a, b):\n    return numpy.dot(a, b)\n",
        "def f(a, b):\n"
        "    __t_1 = 0\n"
        "    for __t_0 in range(len(a)):\n"
        "        __t_1 = __t_1 + a[__t_0] * b[__t_0]\n"
        "    return __t_1\n",
    )


def test_lower_slice_to_copy_loop():
    assert_form(
        lower_array_ops,
        "def f(a):\n    return a[1:3]\n",
        "def f(a):\n"
        "    __t_1 = 3 - 1\n"
        "    __t_2 = numpy.zeros(__t_1)\n"
        "    for __t_0 in range(__t_1):\n"
        "        __t_2[__t_0] = a[1 + __t_0]\n"
        "    return __t_2\n",
    )


def test_decompose_tanh_into_exp_basis():
    assert_form(
        decompose_nonlinear,
        "def f(x):\n    return math.tanh(x)\n",
        "def f(x):\n    return (math.exp(2 * x) - 1) / (math.exp(2 * x) + 1)\n",
    )


def test_decompose_keeps_the_namespace_of_the_call_site():
    # a numpy ufunc decomposes into numpy basis calls so the rewrite
    # stays valid elementwise on arrays
    assert_form(
        decompose_nonlinear,
        "def f(a):\n    b = numpy.array(a)\n    return numpy.log2(b)\n",
        "def f(a):\n    b = numpy.array(a)\n    return numpy.log(b) / numpy.log(2)\n",
    )


def test_decompose_leaves_basis_calls_alone():
    source = "def f(x):\n    return math.exp(x) + math.log(x) + math.sqrt(x)\n"
    assert alpha_equal(pass_output(decompose_nonlinear, source), parse(source))


def test_eliminate_continue_inserts_a_guard():
    assert_form(
        eliminate_continue,
        "def f(a):\n"
        "    s = 0\n"
        "    for i in range(len(a)):\n"
        "        if a[i] < 0:\n"
        "            continue\n"
        "        s = s + a[i]\n"
        "    return s\n",
        "def f(a):\n"
        "    s = 0\n"
        "    for i in range(len(a)):\n"
        "        __flag_0 = False\n"
        "        __flag_0 = __flag_0 or a[i] < 0\n"
        "        if not __flag_0:\n"
        "            s = s + a[i]\n"
        "    return s\n",
    )


def test_eliminate_break_latches_a_flag_across_iterations():
    assert_form(
        eliminate_break,
        "def f(a):\n"
        "    s = 0\n"
        "    for i in range(len(a)):\n"
        "        if a[i] > 9:\n"
        "            break\n"
        "        s = s + a[i]\n"
        "    return s\n",
        "def f(a):\n"
        "    s = 0\n"
        "    __flag_0 = False\n"
        "    for i in range(len(a)):\n"
        "        __flag_0 = __flag_0 or a[i] > 9\n"
        "        if not __flag_0:\n"
        "            s = s + a[i]\n"
        "    return s\n",
    )


def test_flatten_multiple_returns_into_one_trailing_return():
    assert_form(
        flatten_branches,
        "def f(x):\n"
        "    if x > 10:\n"
        "        return 3\n"
        "    if x > 5:\n"
        "        return 2\n"
        "    return 1\n",
        "def f(x):\n"
        "    __t_0 = 0\n"
        "    if x > 10:\n"
        "        __t_0 = 3\n"
        "    if x <= 10 and x > 5:\n"
        "        __t_0 = 2\n"
        "    if x <= 10 and x <= 5:\n"
        "        __t_0 = 1\n"
        "    return __t_0\n",
    )


def test_make_oblivious_masks_scalar_assignment():
    assert_form(
        make_oblivious,
        "def f(x):\n    y = 0\n    if x > 0:\n        y = x\n    return y\n",
        "def f(x):\n    y = 0\n    y = (x > 0) * x + (x <= 0) * y\n    return y\n",
    )


def test_make_oblivious_masks_element_writes():
    assert_form(
        make_oblivious,
        "def f(a):\n"
        "    for i in range(len(a)):\n"
        "        if a[i] < 0:\n"
        "            a[i] = 0\n"
        "    return a\n",
        "def f(a):\n"
        "    for i in range(len(a)):\n"
        "        a[i] = (a[i] < 0) * 0 + (a[i] >= 0) * a[i]\n"
        "    return a\n",
    )


def test_make_oblivious_leaves_clear_branches_alone():
    source = (
        "def f(x, n):\n"
        "    y = x\n"
        "    if n > 0:\n"
        "        y = x + 1\n"
        "    return y\n"
    )
    out = pass_output(make_oblivious, source, clear_params=("n",))
    assert alpha_equal(out, parse(source))


# ---------------------------------------------------------------------------
# differential battery: CFP must compute what the source computes

EXACT_PROGRAMS = [
    ("def f(a):\n    return a[1:3]\n", [{"a": [1, 2, 3, 4, 5]}]),
    ("def f(a):\n    return a[::2]\n", [{"a": [1, 2, 3, 4, 5]}, {"a": [1, 2, 3, 4]}, {"a": []}]),
    ("def f(a):\n    return a[::-1]\n", [{"a": [1, 2, 3, 4, 5]}, {"a": []}]),
    ("def f(a):\n    return a[1:4:2]\n", [{"a": [1, 2, 3, 4, 5, 6]}]),
    ("def f(a):\n    return a[2:]\n", [{"a": [1, 2, 3, 4, 5]}]),
    ("def f(a):\n    return a[:3]\n", [{"a": [1, 2, 3, 4, 5]}]),
    ("def f(a):\n    return sum(a) + min(a) + max(a)\n", [{"a": [3, 1, 2]}]),
    ("def f(a, b):\n    return numpy.dot(a, b)\n", [{"a": [0.1, 0.2], "b": [0.3, 0.4]}]),
    ("def f(a):\n    return sorted(a)\n", [{"a": [3, 1, 2]}]),
    (
        "def f(a):\n"
        "    out = []\n"
        "    for i in range(len(a)):\n"
        "        out.append(a[i] * 2)\n"
        "    s = 0\n"
        "    for i in range(len(out)):\n"
        "        s = s + out[i]\n"
        "    return s\n",
        [{"a": [1, 2, 3]}, {"a": []}],
    ),
    (
        "def f(x):\n"
        "    if x > 10:\n"
        "        return 3\n"
        "    if x > 5:\n"
        "        return 2\n"
        "    return 1\n",
        [{"x": 12}, {"x": 7}, {"x": 1}],
    ),
    (
        "def f(x, y):\n"
        "    if x > 0:\n"
        "        if y > 0:\n"
        "            return x + y\n"
        "        return x\n"
        "    return y\n",
        [{"x": 1, "y": 2}, {"x": 1, "y": -2}, {"x": -1, "y": 5}],
    ),
    (
        "def f(a):\n"
        "    s = 0\n"
        "    for i in range(len(a)):\n"
        "        if a[i] > 100:\n"
        "            break\n"
        "        s = s + a[i]\n"
        "    return s\n",
        [{"a": [1, 2, 300, 4]}, {"a": [1, 2, 3]}, {"a": []}],
    ),
    (
        "def f(a):\n"
        "    s = 0\n"
        "    for i in range(len(a)):\n"
        "        if a[i] < 0:\n"
        "            continue\n"
        "        s = s + a[i]\n"
        "    return s\n",
        [{"a": [1, -2, 3]}, {"a": [-1, -2]}, {"a": []}],
    ),
    (
        "def f(a, t):\n"
        "    c = 0\n"
        "    for x in a:\n"
        "        if x > t:\n"
        "            c = c + 1\n"
        "    return c\n",
        [{"a": [1, 5, 3, 8], "t": 4}],
    ),
    (
        "def f(a, b, c):\n    return a < b < c\n",
        [{"a": 1, "b": 2, "c": 3}, {"a": 1, "b": 3, "c": 2}],
    ),
    (
        "def f(x):\n    y = 1 if x > 0 else 2\n    return y\n",
        [{"x": 5}, {"x": -5}],
    ),
    (
        "def f(a):\n    b = [x * 2 for x in a]\n    return b\n",
        [{"a": [1, 2, 3]}],
    ),
]


@pytest.mark.parametrize("source, inputs", EXACT_PROGRAMS, ids=range(len(EXACT_PROGRAMS)))
def test_cfp_matches_source_exactly(source, inputs):
    assert_equivalent(source, inputs)


TOLERANT_PROGRAMS = [
    ("def f(x):\n    return math.tanh(x)\n", [{"x": 0.5}, {"x": -1.25}]),
    ("def f(x):\n    return math.sinh(x)\n", [{"x": 0.5}]),
    ("def f(x):\n    return math.cosh(x)\n", [{"x": 0.5}]),
    ("def f(x):\n    return math.pow(x, 3.0)\n", [{"x": 1.5}]),
    ("def f(x):\n    return 1 / math.sqrt(x)\n", [{"x": 4.0}]),
    ("def f(x, y):\n    return numpy.logaddexp(x, y)\n", [{"x": 1.0, "y": 2.0}]),
    ("def f(x, y):\n    return numpy.logaddexp2(x, y)\n", [{"x": 1.0, "y": 2.0}]),
    ("def f(x):\n    return numpy.log1p(x)\n", [{"x": 0.5}]),
    ("def f(x):\n    return numpy.expm1(x)\n", [{"x": 0.5}]),
    ("def f(x):\n    return math.log10(x)\n", [{"x": 100.0}]),
    ("def f(x, b):\n    return math.log(x, b)\n", [{"x": 8.0, "b": 2.0}]),
    ("def f(x):\n    return numpy.exp2(x)\n", [{"x": 3.0}]),
    ("def f(x):\n    return math.fabs(x)\n", [{"x": -2.5}, {"x": 2.5}]),
    (
        "def f(a):\n    b = numpy.array(a)\n    return numpy.log2(b)\n",
        [{"a": [1.0, 2.0, 8.0]}],
    ),
]


@pytest.mark.parametrize("source, inputs", TOLERANT_PROGRAMS, ids=range(len(TOLERANT_PROGRAMS)))
def test_cfp_matches_source_within_tolerance(source, inputs):
    cfp = assert_equivalent(source, inputs, tol=1e-9)
    assert RuleId.LINEAR_NONLINEAR in cfp.fired


def test_balanced_branch_appends_are_statically_sized():
    assert_equivalent(
        "def f(a):\n"
        "    out = []\n"
        "    for i in range(len(a)):\n"
        "        if a[i] > 0:\n"
        "            out.append(a[i] * 2)\n"
        "        else:\n"
        "            out.append(0 - a[i])\n"
        "    return out\n",
        [{"a": [4.0, -1.0, 9.0]}, {"a": []}],
    )


def test_clear_counter_append_build():
    assert_equivalent(
        "def f(n):\n"
        "    xs = []\n"
        "    for i in range(n):\n"
        "        xs.append(i)\n"
        "    t = 0\n"
        "    for i in range(len(xs)):\n"
        "        t = t + xs[i]\n"
        "    return t\n",
        [{"n": 5}, {"n": 0}],
        clear_params=("n",),
    )


@given(st.lists(st.integers(-5, 9), min_size=0, max_size=8))
def test_break_elimination_is_equivalent_on_random_inputs(a):
    module = program(BREAK_SOURCE)
    cfp = refactor_to_cfp(module)
    assert run(cfp.ast, (a,)) == run(module, (a,))


@given(st.booleans(), st.integers(-100, 100), st.integers(-100, 100))
def test_mask_pair_selects_like_a_conditional(flag, x, y):
    # cond * a + (1 - cond) * b must equal (a if cond else b)
    masked = mask_pair(
        parse_expression("c > 0"), parse_expression("x"), parse_expression("y")
    )
    source = f"def f(c, x, y):\n    return {render_expr(masked)}\n"
    picked = run(parse(source), (1 if flag else 0, x, y))
    assert picked == (x if flag else y)


# ---------------------------------------------------------------------------
# failure modes


@pytest.mark.parametrize(
    "source, clear_params, message",
    [
        (
            "def f(x):\n    while x > 0:\n        x = x - 1\n    return x\n",
            (),
            "secret-conditioned while with no static bound",
        ),
        (
            "def f(a, x):\n"
            "    s = 0\n"
            "    for i in range(x):\n"
            "        if a[0] > 0:\n"
            "            s = s + 1\n"
            "    return s\n",
            (),
            "secret-dependent loop bound",
        ),
        (
            "def f(a):\n"
            "    out = []\n"
            "    for i in range(len(a)):\n"
            "        if a[i] > 0:\n"
            "            out.append(a[i])\n"
            "    return out\n",
            (),
            "dynamic container growth not derivable",
        ),
        (
            "def f(n):\n"
            "    out = []\n"
            "    while n > 0:\n"
            "        out.append(n)\n"
            "        n = n - 1\n"
            "    return out\n",
            ("n",),
            "dynamic container growth not derivable",
        ),
        (
            "def f(a):\n    out = []\n    out.append(len(out))\n    return out\n",
            (),
            "dynamic container growth not derivable",
        ),
        (
            "def f(a, b):\n    c = numpy.array(b)\n    return a[c]\n",
            (),
            "integer-array indexing is not supported",
        ),
        (
            "def f(a):\n    return a[1:3:0]\n",
            (),
            "slice step cannot be zero",
        ),
        (
            "def f(a, k):\n    return a[::k]\n",
            ("k",),
            "slice step must be a literal",
        ),
    ],
)
def test_rejections_carry_documented_messages(source, clear_params, message):
    with pytest.raises(RuleError) as err:
        refactor_to_cfp(program(source), clear_params=clear_params)
    assert message in str(err.value)
    assert err.value.span is not None


def test_secret_range_bound_fails_certification_without_a_branch():
    source = "def f(x):\n    s = 0\n    for i in range(x):\n        s = s + 1\n    return s\n"
    with pytest.raises(CertificationError) as err:
        refactor_to_cfp(program(source))
    assert any(name == "clear-loop-bounds" for name, _ in err.value.failures)


def test_unrewritable_clear_while_is_not_certified():
    source = "def f(n):\n    t = 1\n    while t <= n:\n        t = t * 2\n    return t\n"
    with pytest.raises(CertificationError):
        refactor_to_cfp(program(source), clear_params=("n",))


def test_certify_rejects_each_escaped_construct():
    cases = {
        "no-break": (
            "def f(a):\n"
            "    for i in range(len(a)):\n"
            "        break\n"
            "    return a\n"
        ),
        "no-ternary": "def f(x):\n    return 1 if x > 0 else 2\n",
        "no-chained-comparison": "def f(a, b, c):\n    return a < b < c\n",
        "no-secret-branch": "def f(x):\n    y = 0\n    if x > 0:\n        y = 1\n    return y\n",
        "no-container-method": (
            "def f(a):\n"
            "    out = []\n"
            "    for i in range(len(a)):\n"
            "        out.append(a[i])\n"
            "    return out\n"
        ),
        "no-advanced-array-op": "def f(a):\n    return sum(a)\n",
        "nonlinear-basis-only": "def f(x):\n    return math.tanh(x)\n",
    }
    for name, source in cases.items():
        with pytest.raises(CertificationError) as err:
            certify(program(source))
        assert any(failure == name for failure, _ in err.value.failures), name


def test_certify_passes_canonical_programs():
    assert len(certify(parse(BREAK_CANONICAL))) == 14
    assert len(certify(parse(SQRT_CANONICAL))) == 14


def test_refactor_without_pattern_match_runs_every_pass():
    cfp = refactor_to_cfp(program(BREAK_SOURCE), pattern_match=False)
    assert len(cfp.applied) == len(PASS_ORDER)
    assert alpha_equal(cfp.ast, parse(BREAK_CANONICAL))


def test_cfp_records_skipped_rules():
    cfp = cfp_of(SQRT_SOURCE)
    assert RuleId.ELIMINATE_BREAK in cfp.skipped
    assert RuleId.OBLIVIOUS_FORM not in cfp.skipped
