"""Shared helpers for the test suite: parsing shortcuts, the two golden
refactoring pairs, and a differential checker that runs a source program
and its canonical form on concrete inputs.
"""

from __future__ import annotations

from py2spdz.frontend import parse, validate_subset
from py2spdz.pyexec import run, values_equal
from py2spdz.rules import refactor_to_cfp


def program(src: str):
    """Parse and subset-validate a source string; return the Module."""
    module = parse(src)
    validate_subset(module)
    return module


def cfp_of(src: str, clear_params=()):
    """Refactor a source string to certified canonical form."""
    return refactor_to_cfp(program(src), clear_params=clear_params)


def assert_equivalent(src: str, inputs, clear_params=(), tol=None):
    """Refactor and check source/CFP agreement on every input binding."""
    module = program(src)
    cfp = refactor_to_cfp(module, clear_params=clear_params)
    for binding in inputs:
        source_out = run(module, binding)
        cfp_out = run(cfp.ast, binding)
        assert values_equal(cfp_out, source_out, tol), (
            f"inputs={binding!r}: source={source_out!r} cfp={cfp_out!r}"
        )
    return cfp


# A loop that stops early: the early exit must become a latched flag so
# every iteration still executes.
BREAK_SOURCE = """\
def f(a):
    for i in range(len(a)):
        if a[i] > 2:
            break
        a[i] = a[i] + 1
    return a
"""

BREAK_CANONICAL = """\
def f(a):
    __flag_0 = False
    for i in range(len(a)):
        __flag_0 = __flag_0 or a[i] > 2
        a[i] = __flag_0 * a[i] + (1 - __flag_0) * (a[i] + 1)
    return a
"""

# A branch on a secret comparison: both arms are evaluated and blended
# with 0/1 masks.
SQRT_SOURCE = """\
def g(x):
    if x > 0:
        y = math.sqrt(x)
    else:
        y = math.sqrt(-x)
    return y
"""

SQRT_CANONICAL = """\
def g(x):
    y = (x > 0) * math.sqrt(x) + (x <= 0) * math.sqrt(-x)
    return y
"""
