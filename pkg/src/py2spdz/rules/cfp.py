"""Canonical-form certification and the refactoring driver.

``certify`` re-derives every canonical-form invariant from the tree with
independent queries; it never trusts that a pass ran.  ``refactor_to_cfp``
chains the passes in their fixed order, re-running pattern detection
before each one so a pass only executes when its pattern is present, and
returns the certified result.
"""

from __future__ import annotations

import dataclasses
import re
from dataclasses import dataclass

from .. import analysis as A
from ..errors import CertificationError
from ..frontend import nodes as N
from ..frontend.subset import LIST_METHODS
from .arrays import UFUNCS_1, UFUNCS_2, lower_array_ops, lower_data_structures
from .branches import flatten_branches, make_oblivious
from .desugar import desugar_syntax, split_chained_comparisons
from .detect import detect_patterns
from .loops import eliminate_break, eliminate_continue, rewrite_while
from .nonlinear import decompose_nonlinear
from .rule_ids import PatternReport, RuleId

#: Fixed pass order: sugar and chains vanish before guard propagation,
#: containers and array ops become loops before nonlinear decomposition
#: sees their scalar bodies, jump elimination precedes branch flattening
#: because flags introduce new conditions, and obliviousness runs last so
#: it sees final control flow.
PASS_ORDER = (
    (RuleId.SYNTAX_SUGAR, desugar_syntax),
    (RuleId.CHAINED_COMPARISON, split_chained_comparisons),
    (RuleId.DATA_STRUCTURE, lower_data_structures),
    (RuleId.REWRITE_WHILE_LOOP, rewrite_while),
    (RuleId.ELIMINATE_ADVANCED_ARRAY_OPERATIONS, lower_array_ops),
    (RuleId.LINEAR_NONLINEAR, decompose_nonlinear),
    (RuleId.ELIMINATE_CONTINUE, eliminate_continue),
    (RuleId.ELIMINATE_BREAK, eliminate_break),
    (RuleId.NESTED_IF_MULTIPLE_RETURN, flatten_branches),
    (RuleId.OBLIVIOUS_FORM, make_oblivious),
)


@dataclass(frozen=True)
class Cfp:
    """A function module certified to be in canonical form."""

    ast: N.Module
    certificate: tuple[str, ...]
    applied: tuple[RuleId, ...]
    fired: tuple[RuleId, ...]
    initial_report: PatternReport

    @property
    def skipped(self) -> tuple[RuleId, ...]:
        return tuple(r for r, _ in PASS_ORDER if r not in self.applied)


#: Callees a canonical-form program may still contain.
_BARE_CALLS = {"range", "len", "abs", "min", "max", "sorted", "invertsqrt"}
_BASIS_FINAL = {"exp", "log", "sqrt"}
_TRIG = {"sin", "cos", "tan", "asin", "acos", "atan"}
_NUMPY_STRUCTURAL = {"zeros", "ones", "arange", "array", "sort"}


def _check_single_function(module, ana, fail):
    fns = [s for s in module.body if isinstance(s, N.FunctionDef)]
    if len(fns) != 1 or len(module.body) != 1:
        fail("single-function", "module must hold exactly one function")


def _check_no_node(kind, name, detail):
    def check(module, ana, fail):
        for n in module.walk():
            if isinstance(n, kind):
                fail(name, f"{detail} at {n.span}")
                return

    return check


def _check_no_chain(module, ana, fail):
    for n in module.walk():
        if isinstance(n, N.Compare) and len(n.ops) > 1:
            fail("no-chained-comparison", f"chain at {n.span}")
            return


def _check_no_tuple_assign(module, ana, fail):
    for n in module.walk():
        if isinstance(n, N.Assign) and isinstance(n.target, N.TupleLit):
            fail("no-tuple-assign", f"tuple target at {n.span}")
            return


def _check_single_trailing_return(module, ana, fail):
    fn = N.single_function(module)
    if fn is None:
        return
    returns = [n for n in fn.walk() if isinstance(n, N.Return)]
    if not returns:
        return
    if len(returns) > 1:
        fail("single-trailing-return", f"{len(returns)} return statements")
    elif fn.body[-1] is not returns[0]:
        fail("single-trailing-return", "return is not the final statement")


def _check_no_secret_branch(module, ana, fail):
    for n in module.walk():
        if isinstance(n, N.If) and ana.is_secret(n.test):
            fail("no-secret-branch", f"secret condition at {n.span}")
            return


def _check_no_secret_while(module, ana, fail):
    for n in module.walk():
        if isinstance(n, N.While) and ana.is_secret(n.test):
            fail("no-secret-while", f"secret condition at {n.span}")
            return


def _check_clear_loop_bounds(module, ana, fail):
    for n in module.walk():
        if isinstance(n, N.For):
            if not N.is_range_call(n.iter):
                fail("clear-loop-bounds", f"non-range loop at {n.span}")
                return
            for arg in n.iter.args:
                if ana.is_secret(arg):
                    fail("clear-loop-bounds", f"secret bound at {n.span}")
                    return


def _check_no_container_method(module, ana, fail):
    for n in module.walk():
        if (
            isinstance(n, N.Call)
            and isinstance(n.func, N.Attribute)
            and n.func.attr in LIST_METHODS
        ):
            base = N.dotted_name(n.func.value)
            if base not in ("math", "numpy"):
                fail("no-container-method", f"{n.func.attr} at {n.span}")
                return


def _check_no_advanced_array_op(module, ana, fail):
    def is_array(e):
        return ana.expr_info(e).shape in ("array", "matrix")

    for n in module.walk():
        if isinstance(n, N.Subscript):
            if isinstance(n.index, N.SliceExpr):
                fail("no-advanced-array-op", f"slice at {n.span}")
                return
            if is_array(n.index):
                fail("no-advanced-array-op", f"array index at {n.span}")
                return
        if not isinstance(n, N.Call):
            continue
        name = N.dotted_name(n.func)
        if name in ("sum", "min", "max") and len(n.args) == 1:
            fail("no-advanced-array-op", f"{name} reduction at {n.span}")
            return
        if name in (
            "numpy.sum", "numpy.min", "numpy.max", "numpy.dot",
            "numpy.where", "numpy.clip",
        ):
            fail("no-advanced-array-op", f"{name} at {n.span}")
            return
        if name and name.startswith("numpy."):
            final = name.split(".", 1)[1]
            if final in (UFUNCS_1 | UFUNCS_2) and any(
                is_array(a) for a in n.args
            ):
                fail("no-advanced-array-op", f"array {name} at {n.span}")
                return


def _check_nonlinear_basis(module, ana, fail):
    for n in module.walk():
        if not isinstance(n, N.Call):
            continue
        name = N.dotted_name(n.func)
        if name is None:
            fail("nonlinear-basis-only", f"dynamic callee at {n.span}")
            return
        if "." not in name:
            if name not in _BARE_CALLS:
                fail("nonlinear-basis-only", f"{name} at {n.span}")
                return
            continue
        module_part, final = name.split(".", 1)
        if module_part == "math":
            ok = final in _BASIS_FINAL or final in _TRIG
            if final == "log" and len(n.args) != 1:
                ok = False
            if not ok:
                fail("nonlinear-basis-only", f"{name} at {n.span}")
                return
        elif module_part == "numpy":
            ok = (
                final in _NUMPY_STRUCTURAL
                or final in _BASIS_FINAL
                or final in _TRIG
            )
            if final == "log" and len(n.args) != 1:
                ok = False
            if not ok:
                fail("nonlinear-basis-only", f"{name} at {n.span}")
                return
        else:
            method = isinstance(n.func, N.Attribute)
            if method:  # container methods are someone else's failure
                continue
            fail("nonlinear-basis-only", f"{name} at {n.span}")
            return


_CHECKS = (
    _check_single_function,
    _check_no_node(N.Break, "no-break", "break statement"),
    _check_no_node(N.Continue, "no-continue", "continue statement"),
    _check_no_node(N.Ternary, "no-ternary", "conditional expression"),
    _check_no_node(N.ListComp, "no-comprehension", "list comprehension"),
    _check_no_chain,
    _check_no_tuple_assign,
    _check_single_trailing_return,
    _check_no_secret_branch,
    _check_no_secret_while,
    _check_clear_loop_bounds,
    _check_no_container_method,
    _check_no_advanced_array_op,
    _check_nonlinear_basis,
)

_CHECK_NAMES = (
    "single-function",
    "no-break",
    "no-continue",
    "no-ternary",
    "no-comprehension",
    "no-chained-comparison",
    "no-tuple-assign",
    "single-trailing-return",
    "no-secret-branch",
    "no-secret-while",
    "clear-loop-bounds",
    "no-container-method",
    "no-advanced-array-op",
    "nonlinear-basis-only",
)


def certify(module: N.Module, clear_params=()) -> tuple[str, ...]:
    """Check every canonical-form invariant; the returned tuple names the
    satisfied constraints.  Raises CertificationError listing failures."""
    ana = A.analyze(module, clear_params=clear_params)
    failures: list = []

    def fail(name, detail):
        failures.append((name, detail))

    for check in _CHECKS:
        check(module, ana, fail)
    if failures:
        raise CertificationError(failures)
    return _CHECK_NAMES


def refactor_to_cfp(
    module: N.Module, clear_params=(), pattern_match: bool = True
) -> Cfp:
    """Refactor a validated function into certified canonical form."""
    current = module
    initial = detect_patterns(current, clear_params)
    report = initial
    applied: list = []
    fired: list = []
    for index, (rule, pass_fn) in enumerate(PASS_ORDER):
        if pattern_match:
            if index > 0:
                report = detect_patterns(current, clear_params)
            if not report.applicable(rule):
                continue
        new = pass_fn(current, clear_params)
        applied.append(rule)
        if new != current:
            fired.append(rule)
        current = new
    final_report = detect_patterns(current, clear_params)
    leftover = final_report.applicable_rules()
    if leftover:
        raise CertificationError(
            [(str(rule), "pattern still applicable after refactoring")
             for rule in leftover]
        )
    certificate = certify(current, clear_params)
    return Cfp(
        ast=current,
        certificate=certificate,
        applied=tuple(applied),
        fired=tuple(fired),
        initial_report=initial,
    )


# --- structural equality modulo fresh names ----------------------------------

_FRESH = re.compile(r"^__(?:flag|t)_\d+$")


def alpha_equal(a, b) -> bool:
    """Structural equality where generated ``__flag_k``/``__t_k`` names
    match under a consistent renaming.  Spans are ignored (node equality
    already is position-blind)."""
    mapping: dict = {}
    reverse: dict = {}

    def names_eq(p: str, q: str) -> bool:
        pf, qf = bool(_FRESH.match(p)), bool(_FRESH.match(q))
        if pf != qf:
            return False
        if not pf:
            return p == q
        if p in mapping:
            return mapping[p] == q
        if q in reverse:
            return False
        mapping[p] = q
        reverse[q] = p
        return True

    def rec(x, y) -> bool:
        if type(x) is not type(y):
            return False
        if isinstance(x, N.Name):
            return names_eq(x.id, y.id)
        if isinstance(x, N.For):
            return (
                names_eq(x.var, y.var)
                and rec(x.iter, y.iter)
                and len(x.body) == len(y.body)
                and all(rec(p, q) for p, q in zip(x.body, y.body))
            )
        if isinstance(x, N.Node):
            for f in dataclasses.fields(x):
                if not f.compare:
                    continue
                vx, vy = getattr(x, f.name), getattr(y, f.name)
                if isinstance(vx, N.Node):
                    if not rec(vx, vy):
                        return False
                elif isinstance(vx, tuple):
                    if len(vx) != len(vy):
                        return False
                    for p, q in zip(vx, vy):
                        if isinstance(p, N.Node):
                            if not rec(p, q):
                                return False
                        elif p != q:
                            return False
                elif vx != vy:
                    return False
            return True
        return x == y

    return rec(a, b)
