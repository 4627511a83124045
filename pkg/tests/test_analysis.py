"""Secrecy and shape inference tests.

Everything downstream keys off two questions answered here: is this
expression secret (drives mask insertion), and is this value an array
(drives loop lowering).  Parameters default to secret; clearness is
declared out-of-band per entry, never inferred.
"""

from __future__ import annotations

from py2spdz.analysis import analyze
from py2spdz.frontend import parse, parse_expression, single_function

from helpers import program


def analysis_of(source, clear_params=()):
    return analyze(program(source), clear_params=clear_params)


def expr(text):
    return parse_expression(text)


# ---------------------------------------------------------------------------
# secrecy basics


def test_parameters_are_secret_by_default():
    ana = analysis_of("def f(x, y):\n    return x + y\n")
    assert ana.var_info("x").secret
    assert ana.var_info("y").secret


def test_clear_params_opt_out():
    ana = analysis_of("def f(x, n):\n    return x * n\n", clear_params=("n",))
    assert ana.var_info("x").secret
    assert not ana.var_info("n").secret


def test_literals_are_clear():
    ana = analysis_of("def f(x):\n    return x\n")
    assert not ana.expr_info(expr("1")).secret
    assert not ana.expr_info(expr("2.5")).secret
    assert not ana.expr_info(expr("True")).secret
    assert not ana.expr_info(expr("math.pi")).secret


def test_secrecy_joins_through_arithmetic():
    ana = analysis_of("def f(x):\n    return x\n")
    assert ana.is_secret(expr("x + 1"))
    assert ana.is_secret(expr("2 * x"))
    assert not ana.is_secret(expr("1 + 2"))


def test_comparison_on_secret_operand_yields_secret_bool():
    ana = analysis_of("def f(x):\n    return x\n")
    info = ana.expr_info(expr("x > 0"))
    assert info.secret
    assert info.kind == "bool"
    assert not ana.expr_info(expr("1 > 0")).secret


def test_boolop_and_not_propagate_secrecy():
    ana = analysis_of("def f(x, n):\n    return x * n\n", clear_params=("n",))
    assert ana.is_secret(expr("x > 0 and n > 0"))
    assert ana.is_secret(expr("not x"))
    assert not ana.is_secret(expr("not (n > 0)"))


def test_assignment_propagates_and_latches():
    # a variable assigned a secret anywhere counts as secret everywhere
    ana = analysis_of(
        "def f(x, n):\n"
        "    t = n\n"
        "    t = x\n"
        "    return t\n",
        clear_params=("n",),
    )
    assert ana.var_info("t").secret


def test_range_loop_variable_is_clear_int():
    ana = analysis_of(
        "def f(a):\n"
        "    s = 0\n"
        "    for i in range(len(a)):\n"
        "        s = s + a[i]\n"
        "    return s\n"
    )
    info = ana.var_info("i")
    assert not info.secret
    assert info.kind == "int"


def test_iterating_a_secret_array_gives_secret_elements():
    ana = analysis_of(
        "def f(a):\n"
        "    s = 0\n"
        "    for x in a:\n"
        "        s = s + x\n"
        "    return s\n"
    )
    assert ana.var_info("x").secret
    assert ana.var_info("s").secret


def test_len_is_always_clear():
    ana = analysis_of("def f(a):\n    return len(a)\n")
    assert not ana.is_secret(expr("len(a)"))


def test_math_call_on_secret_is_secret_float():
    ana = analysis_of("def f(x):\n    return math.sqrt(x)\n")
    info = ana.expr_info(expr("math.sqrt(x)"))
    assert info.secret
    assert info.kind == "float"


def test_ternary_with_secret_test_taints_result():
    ana = analysis_of("def f(x, n):\n    return x\n", clear_params=("n",))
    assert ana.is_secret(expr("1 if x > 0 else 2"))
    assert not ana.is_secret(expr("1 if n > 0 else 2"))


# ---------------------------------------------------------------------------
# kinds


def test_true_division_produces_float_kind():
    ana = analysis_of("def f(n, m):\n    return n / m\n", clear_params=("n", "m"))
    assert ana.expr_info(expr("n / m")).kind == "float"


def test_floor_division_of_ints_stays_int():
    ana = analysis_of("def f(n, m):\n    return n // m\n", clear_params=("n", "m"))
    assert ana.expr_info(expr("4 // 2")).kind == "int"


def test_int_float_mix_widens_to_float():
    ana = analysis_of("def f(x):\n    return x\n")
    assert ana.expr_info(expr("1 + 2.5")).kind == "float"


# ---------------------------------------------------------------------------
# shapes


def test_indexed_parameter_is_an_array_of_secrets():
    ana = analysis_of("def f(a):\n    return a[0]\n")
    info = ana.var_info("a")
    assert info.shape == "array"
    assert info.elem is not None and info.elem.secret
    assert ana.is_secret(expr("a[0]"))


def test_double_indexing_marks_a_matrix():
    ana = analysis_of("def f(m):\n    return m[0][1]\n")
    assert ana.var_info("m").shape == "matrix"
    assert ana.is_secret(expr("m[0][1]"))


def test_reduction_argument_is_shaped_as_array():
    ana = analysis_of("def f(a):\n    return sum(a)\n")
    assert ana.var_info("a").shape == "array"
    assert ana.is_secret(expr("sum(a)"))


def test_zeros_allocates_a_clear_float_array():
    ana = analysis_of(
        "def f(a):\n"
        "    out = numpy.zeros(len(a))\n"
        "    out[0] = a[0]\n"
        "    return out\n"
    )
    info = ana.var_info("out")
    assert info.shape == "array"
    # storing a secret element taints the element fact
    assert info.elem.secret


def test_list_literal_shape():
    ana = analysis_of(
        "def f(x):\n    v = [x, 1]\n    return v\n"
    )
    info = ana.var_info("v")
    assert info.shape == "array"
    assert info.elem.secret


def test_clear_param_array_stays_clear():
    ana = analysis_of(
        "def f(a, w):\n    return a[0] * w[0]\n", clear_params=("w",)
    )
    assert not ana.is_secret(expr("w[0]"))
    assert ana.is_secret(expr("a[0] * w[0]"))


def test_range_call_has_range_shape():
    ana = analysis_of("def f(n):\n    return n\n", clear_params=("n",))
    assert ana.expr_info(expr("range(n)")).shape == "range"


def test_module_or_function_inputs_are_accepted():
    module = program("def f(x):\n    return x\n")
    by_module = analyze(module)
    by_function = analyze(single_function(module))
    assert by_module.var_info("x") == by_function.var_info("x")
