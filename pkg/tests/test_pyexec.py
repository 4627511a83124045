"""Reference-interpreter tests.

The interpreter is the equivalence oracle for the whole pipeline, so
these tests pin its semantics against stock Python: floored division
and modulo, true division, short-circuit boolean operators, left-fold
reductions, and fault classification for everything that can go wrong.
"""

from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from py2spdz.frontend import parse, render_expr
from py2spdz.pyexec import PyArr, RuntimeFault, check_equivalence, copy_value, run, values_equal
from py2spdz.pyexec import TestCase as Case  # alias keeps pytest from collecting it

from helpers import BREAK_CANONICAL, BREAK_SOURCE, program


def run_src(source, *inputs, **kwargs):
    return run(program(source), inputs, **kwargs)


# ---------------------------------------------------------------------------
# arithmetic and operator semantics


def test_abs_diff():
    source = "def f(a, b):\n    return abs(a - b)\n"
    assert run_src(source, 3, 5) == 2


@pytest.mark.parametrize(
    "expr, inputs, expected",
    [
        ("a // b", (7, 2), 3),
        ("a // b", (-7, 2), -4),          # floored, not truncated
        ("a % b", (-7, 2), 1),            # sign follows the divisor
        ("a % b", (7, -2), -1),
        ("a / b", (1, 2), 0.5),           # true division always
        ("a ** b", (2, 10), 1024),
        ("a ** b", (4, 0.5), 2.0),
        ("-a + b", (3, 10), 7),
    ],
)
def test_operator_semantics(expr, inputs, expected):
    source = f"def f(a, b):\n    return {expr}\n"
    result = run_src(source, *inputs)
    assert result == expected
    assert type(result) is type(expected)


def test_boolean_operators_short_circuit():
    # the right operand would fault; short-circuit means it never runs
    source = "def f(a, b):\n    return a > 0 or 1 / b > 0\n"
    assert run_src(source, 1, 0) is True
    source = "def f(a, b):\n    return a > 0 and 1 / b > 0\n"
    assert run_src(source, -1, 0) is False


def test_chained_comparison():
    source = "def f(a, b, c):\n    return a < b < c\n"
    assert run_src(source, 1, 2, 3) is True
    assert run_src(source, 1, 3, 2) is False


def test_ternary_evaluates_one_arm():
    source = "def f(x):\n    return 1 / x if x != 0 else 0\n"
    assert run_src(source, 0) == 0


def test_while_loop():
    source = (
        "def f(n):\n"
        "    total = 0\n"
        "    while n > 0:\n"
        "        total = total + n\n"
        "        n = n - 1\n"
        "    return total\n"
    )
    assert run_src(source, 5) == 15


def test_break_and_continue():
    source = (
        "def f(a):\n"
        "    total = 0\n"
        "    for x in a:\n"
        "        if x < 0:\n"
        "            continue\n"
        "        if x > 90:\n"
        "            break\n"
        "        total = total + x\n"
        "    return total\n"
    )
    assert run_src(source, [1, -2, 3, 100, 4]) == 4


def test_golden_break_program():
    assert run(parse(BREAK_SOURCE), ([1, 2, 3],)) == [2, 3, 3]


def test_inputs_are_not_mutated_by_the_callee():
    data = [1, 2, 3]
    run(parse(BREAK_SOURCE), (data,))
    assert data == [1, 2, 3]


def test_determinism():
    source = "def f(a):\n    return sum(a) * 0.1\n"
    first = run_src(source, [1.5, 2.5, 3.5])
    second = run_src(source, [1.5, 2.5, 3.5])
    assert first == second


# ---------------------------------------------------------------------------
# fault classification


@pytest.mark.parametrize(
    "source, inputs, kind",
    [
        ("def f(a, b):\n    return a / b\n", (1, 0), "zero-division"),
        ("def f(a, b):\n    return a // b\n", (1, 0), "zero-division"),
        ("def f(a, b):\n    return a % b\n", (1, 0), "zero-division"),
        ("def f(a):\n    return a[5]\n", ([1, 2],), "index-out-of-bounds"),
        ("def f(a):\n    a[2] = 0\n    return a\n", ([1, 2],), "index-out-of-bounds"),
        ("def f(x):\n    return math.sqrt(x)\n", (-1.0,), "domain-error"),
        ("def f(x):\n    return math.log(x)\n", (0.0,), "domain-error"),
        ("def f(a):\n    return a.pop()\n", ([],), "index-out-of-bounds"),
        ("def f(a):\n    return a.index(9)\n", ([1, 2],), "domain-error"),
        ("def f(x):\n    return x + missing\n", (1,), "domain-error"),
    ],
)
def test_fault_kinds(source, inputs, kind):
    with pytest.raises(RuntimeFault) as err:
        run_src(source, *inputs)
    assert err.value.kind == kind
    assert err.value.span is not None


def test_step_limit_bounds_infinite_loops():
    source = "def f(x):\n    while x > 0:\n        x = x + 1\n    return x\n"
    with pytest.raises(RuntimeFault) as err:
        run_src(source, 1, step_limit=5000)
    assert err.value.kind == "step-limit"


def test_arity_mismatch_is_a_fault():
    with pytest.raises(RuntimeFault):
        run(parse("def f(a, b):\n    return a\n"), (1,))


# ---------------------------------------------------------------------------
# arrays and reductions


def test_numpy_array_values_broadcast_arithmetic():
    source = "def f(a):\n    b = numpy.array(a)\n    return b * 2 + 1\n"
    result = run_src(source, [1, 2, 3])
    assert isinstance(result, PyArr)
    assert result == [3, 5, 7]


def test_plain_lists_do_not_broadcast():
    source = "def f(a):\n    return a * 2\n"
    with pytest.raises(RuntimeFault) as err:
        run_src(source, [1, 2, 3])
    assert err.value.kind == "domain-error"


def test_array_array_broadcast_requires_matching_length():
    source = "def f(a, b):\n    return numpy.array(a) + numpy.array(b)\n"
    assert run_src(source, [1, 2], [10, 20]) == [11, 22]
    with pytest.raises(RuntimeFault):
        run_src(source, [1, 2], [10])


def test_zeros_ones_arange():
    source = "def f(n):\n    return numpy.zeros(n)\n"
    assert run_src(source, 3) == [0.0, 0.0, 0.0]
    source = "def f(n):\n    return numpy.ones(n)\n"
    assert run_src(source, 2) == [1.0, 1.0]
    source = "def f(n):\n    return numpy.arange(n)\n"
    assert run_src(source, 4) == [0, 1, 2, 3]


def test_reductions_are_left_folds():
    # an explicit accumulator loop must agree bit-for-bit with sum()
    values = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7]
    folded = run_src("def f(a):\n    return sum(a)\n", values)
    looped = run_src(
        "def f(a):\n"
        "    acc = 0\n"
        "    for i in range(len(a)):\n"
        "        acc = acc + a[i]\n"
        "    return acc\n",
        values,
    )
    assert folded == looped


def test_dot_is_a_left_fold_of_products():
    a = [0.1, 0.2, 0.3]
    b = [0.7, 0.8, 0.9]
    direct = run_src("def f(a, b):\n    return numpy.dot(a, b)\n", a, b)
    looped = run_src(
        "def f(a, b):\n"
        "    acc = 0\n"
        "    for i in range(len(a)):\n"
        "        acc = acc + a[i] * b[i]\n"
        "    return acc\n",
        a, b,
    )
    assert direct == looped


def test_min_max_over_sequence_and_arguments():
    assert run_src("def f(a):\n    return min(a)\n", [3, 1, 2]) == 1
    assert run_src("def f(a):\n    return max(a)\n", [3, 1, 2]) == 3
    assert run_src("def f(a, b):\n    return min(a, b)\n", 4, 2) == 2


def test_sorted_and_numpy_sort():
    assert run_src("def f(a):\n    return sorted(a)\n", [3, 1, 2]) == [1, 2, 3]
    result = run_src("def f(a):\n    return numpy.sort(numpy.array(a))\n", [3, 1, 2])
    assert isinstance(result, PyArr)
    assert result == [1, 2, 3]


def test_where_and_clip():
    source = "def f(a):\n    return numpy.where(numpy.array(a) > 0, 1, 0)\n"
    # comparisons do not broadcast; where takes an explicit mask instead
    with pytest.raises(RuntimeFault):
        run_src(source, [1, -1])
    assert run_src("def f(x):\n    return numpy.clip(x, 0, 10)\n", 42) == 10


def test_list_methods():
    source = (
        "def f(a):\n"
        "    a.append(9)\n"
        "    a.insert(0, 7)\n"
        "    a.extend([1, 1])\n"
        "    return a.count(1) + a.index(9)\n"
    )
    assert run_src(source, [5]) == 2 + 2


def test_slices():
    assert run_src("def f(a):\n    return a[1:3]\n", [1, 2, 3, 4]) == [2, 3]
    assert run_src("def f(a):\n    return a[::-1]\n", [1, 2, 3]) == [3, 2, 1]
    assert run_src("def f(a):\n    return a[::2]\n", [1, 2, 3, 4, 5]) == [1, 3, 5]


def test_list_comprehension():
    source = "def f(a):\n    return [x * x for x in a]\n"
    assert run_src(source, [1, 2, 3]) == [1, 4, 9]


def test_copy_value_is_deep_for_nested_arrays():
    original = PyArr([PyArr([1, 2]), PyArr([3, 4])])
    clone = copy_value(original)
    clone.values[0].values[0] = 99
    assert original.values[0].values[0] == 1


# ---------------------------------------------------------------------------
# differential property: interpreter vs stock Python on safe arithmetic

SAFE_EXPRS = st.recursive(
    st.one_of(
        st.sampled_from(["a", "b"]),
        st.integers(min_value=0, max_value=9).map(str),
    ),
    lambda kids: st.builds(
        lambda l, op, r: f"({l} {op} {r})",
        kids, st.sampled_from(["+", "-", "*"]), kids,
    ),
    max_leaves=10,
)


@given(SAFE_EXPRS, st.integers(-50, 50), st.integers(-50, 50))
def test_agrees_with_python_on_integer_arithmetic(text, a, b):
    source = f"def f(a, b):\n    return {text}\n"
    assert run(parse(source), (a, b)) == eval(text, {"a": a, "b": b})


# ---------------------------------------------------------------------------
# values_equal


def test_values_equal_exact_mode_is_bitwise():
    assert values_equal(0.1 + 0.2, 0.30000000000000004, None)
    assert not values_equal(0.1 + 0.2, 0.3, None)


def test_values_equal_relative_tolerance():
    assert values_equal(1.0000001, 1.0, 1e-6)
    assert not values_equal(1.01, 1.0, 1e-6)
    # the bound is relative to max(1, |reference|)
    assert values_equal(1000.5, 1000.0, 1e-3)


def test_values_equal_distinguishes_bool_from_nonbinary_values():
    assert values_equal(True, 1)
    assert values_equal(False, 0)
    assert not values_equal(True, 2)
    assert not values_equal("x", 1)


def test_values_equal_arrays_and_lists_compare_alike():
    assert values_equal(PyArr([1, 2]), [1, 2])
    assert not values_equal(PyArr([1, 2]), [1, 2, 3])
    assert not values_equal([1], 1)


@given(st.lists(st.floats(allow_nan=False, allow_infinity=False, width=32)))
def test_values_equal_is_reflexive(xs):
    assert values_equal(xs, list(xs), None)


# ---------------------------------------------------------------------------
# check_equivalence


CASES = [
    Case(inputs=([1, 2, 3],), expected=[2, 3, 3]),
    Case(inputs=([5, 1, 1],), expected=[5, 1, 1]),
    Case(inputs=([],), expected=[]),
]


def test_check_equivalence_is_reflexive():
    module = parse(BREAK_SOURCE)
    report = check_equivalence(module, module, CASES)
    assert report.all_passed
    assert report.pass_count == len(CASES)


def test_check_equivalence_accepts_the_golden_pair():
    report = check_equivalence(parse(BREAK_SOURCE), parse(BREAK_CANONICAL), CASES)
    assert report.all_passed


def test_check_equivalence_rejects_inverted_flag_logic():
    broken = BREAK_CANONICAL.replace(
        "__flag_0 * a[i] + (1 - __flag_0) * (a[i] + 1)",
        "__flag_0 * (a[i] + 1) + (1 - __flag_0) * a[i]",
    )
    report = check_equivalence(parse(BREAK_SOURCE), parse(broken), CASES)
    assert not report.all_passed
    first = report.results[0]
    assert first.source_output != first.cfp_output


def test_check_equivalence_surfaces_faults_as_failures():
    source = "def f(x):\n    return 1 / x\n"
    report = check_equivalence(
        parse(source), parse(source), [Case(inputs=(0,), expected=None)]
    )
    assert not report.all_passed
    assert report.results[0].source_fault == "zero-division"
    assert report.results[0].cfp_fault == "zero-division"


def test_check_equivalence_tolerance_override():
    exact = "def f(x):\n    return math.exp(math.log(x))\n"
    identity = "def f(x):\n    return x\n"
    cases = [Case(inputs=(10.0,), expected=10.0)]
    strict = check_equivalence(parse(exact), parse(identity), cases)
    loose = check_equivalence(parse(exact), parse(identity), cases, tolerance=1e-9)
    assert not strict.all_passed
    assert loose.all_passed


def test_check_equivalence_honours_per_case_comparison():
    exact = "def f(x):\n    return math.exp(math.log(x))\n"
    identity = "def f(x):\n    return x\n"
    cases = [Case(inputs=(10.0,), expected=10.0, comparison="rel", tol=1e-9)]
    report = check_equivalence(parse(exact), parse(identity), cases)
    assert report.all_passed
