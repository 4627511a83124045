"""Reference interpreter for the supported subset.

``run`` executes a parsed function on concrete inputs with Python
semantics: arbitrary-precision integers, binary64 floats, floored
``//`` and ``%``, true ``/``, short-circuit boolean operators.  It is
the ground truth that refactoring passes are checked against.

Arrays created by the numpy-style builtins are ``PyArr`` values backed
by plain lists.  Reductions (``sum``, ``min``, ``max``, ``dot``) are
sequential left folds, not pairwise trees, so that an explicit
accumulator loop produced by the rules stage yields bit-identical
floats.  Element writes never coerce: storing an int into an array
created by ``zeros`` keeps the int.

Execution is bounded by a step budget (default 10**7 evaluated nodes);
exceeding it raises a ``step-limit`` fault rather than hanging.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .frontend import (
    Assign, Attribute, AugAssign, BinOp, Bool, BoolOp, Break, Call, Compare,
    Continue, ExprStmt, For, FunctionDef, If, ListComp, ListLit, Module,
    Name, Num, Pass, Return, SliceExpr, Str, Subscript, Ternary, TupleLit,
    UnaryOp, While, dotted_name, single_function,
)

STEP_LIMIT = 10_000_000

FAULT_KINDS = ("index-out-of-bounds", "zero-division", "domain-error", "step-limit")


class RuntimeFault(Exception):
    """Runtime failure inside the interpreted program."""

    def __init__(self, kind: str, message: str, span=None):
        assert kind in FAULT_KINDS
        super().__init__(message)
        self.kind = kind
        self.message = message
        self.span = span

    def __str__(self) -> str:
        return f"{self.kind}: {self.message}"


class PyArr:
    """Numeric array value; list-backed, mutable, shape-fixed."""

    __slots__ = ("values",)

    def __init__(self, values):
        self.values = list(values)

    def __len__(self) -> int:
        return len(self.values)

    def __iter__(self):
        return iter(self.values)

    def __eq__(self, other) -> bool:
        if isinstance(other, PyArr):
            return self.values == other.values
        if isinstance(other, list):
            return self.values == other
        return NotImplemented

    def __repr__(self) -> str:
        return f"PyArr({self.values!r})"

    def copy(self) -> "PyArr":
        return PyArr(copy_value(v) for v in self.values)


@dataclass(frozen=True)
class TestCase:
    """One input/expected pair for a corpus entry.

    comparison is 'exact' or 'rel'; tol applies in 'rel' mode.
    """

    inputs: tuple
    expected: object
    comparison: str = "exact"
    tol: float = 0.0


@dataclass
class CaseResult:
    inputs: tuple
    source_output: object
    cfp_output: object
    passed: bool
    source_fault: str | None = None
    cfp_fault: str | None = None


@dataclass
class EquivalenceReport:
    results: list[CaseResult] = field(default_factory=list)

    @property
    def pass_count(self) -> int:
        return sum(1 for r in self.results if r.passed)

    @property
    def all_passed(self) -> bool:
        return all(r.passed for r in self.results)


def copy_value(value):
    if isinstance(value, PyArr):
        return value.copy()
    if isinstance(value, list):
        return [copy_value(v) for v in value]
    return value


def values_equal(a, b, tol: float | None = None) -> bool:
    """Structural numeric equality; PyArr and list compare alike.

    With tol=None floats must match exactly; otherwise a relative
    tolerance |a-b| <= tol*max(1, |b|) applies elementwise.
    """
    if isinstance(a, (PyArr, list)) or isinstance(b, (PyArr, list)):
        if not isinstance(a, (PyArr, list)) or not isinstance(b, (PyArr, list)):
            return False
        a_values = a.values if isinstance(a, PyArr) else a
        b_values = b.values if isinstance(b, PyArr) else b
        if len(a_values) != len(b_values):
            return False
        return all(values_equal(x, y, tol) for x, y in zip(a_values, b_values))
    # bools compare as the 0/1 integers the oblivious rewrites turn them
    # into, which plain numeric comparison already provides
    if isinstance(a, (int, float)) and isinstance(b, (int, float)):
        if tol is None:
            return a == b
        return abs(a - b) <= tol * max(1.0, abs(b))
    return a == b


def run(program, inputs, step_limit: int = STEP_LIMIT):
    """Execute a Module or FunctionDef on the given inputs.

    Inputs are deep-copied first, so callers can reuse them even though
    the program may mutate its array arguments.  Returns the function's
    return value (None if it falls off the end) or raises RuntimeFault.
    """
    fn = single_function(program) if isinstance(program, Module) else program
    if len(inputs) != len(fn.params):
        raise RuntimeFault(
            "domain-error",
            f"{fn.name} expects {len(fn.params)} inputs, got {len(inputs)}",
            fn.span,
        )
    env = {}
    if isinstance(inputs, dict):
        for param in fn.params:
            if param not in inputs:
                raise RuntimeFault(
                    "domain-error", f"missing input {param!r}", fn.span
                )
            env[param] = copy_value(_ingest(inputs[param]))
    else:
        for param, value in zip(fn.params, inputs):
            env[param] = copy_value(_ingest(value))
    interp = _Interp(env, step_limit)
    try:
        interp.exec_block(fn.body)
    except _ReturnSignal as signal:
        return signal.value
    return None


def _ingest(value):
    # JSON-sourced inputs arrive as lists; keep them as lists so list
    # methods work, since subset programs do not distinguish at entry.
    return value


_CASE_TOL = object()  # sentinel: honour each case's own comparison mode


def check_equivalence(src, cfp, cases, tolerance=_CASE_TOL, step_limit: int = STEP_LIMIT):
    """Run source and canonical form on each case and compare outputs.

    By default each case's own comparison mode applies; passing
    ``tolerance`` overrides it for every case (None forces exact).  A
    case passes only when neither side faults and the outputs agree;
    faults are surfaced on the case result.
    """
    cfp_ast = getattr(cfp, "ast", cfp)
    report = EquivalenceReport()
    for case in cases:
        if tolerance is _CASE_TOL:
            tol = None if case.comparison == "exact" else case.tol
        else:
            tol = tolerance
        source_output = cfp_output = None
        source_fault = cfp_fault = None
        try:
            source_output = run(src, case.inputs, step_limit)
        except RuntimeFault as fault:
            source_fault = fault.kind
        try:
            cfp_output = run(cfp_ast, case.inputs, step_limit)
        except RuntimeFault as fault:
            cfp_fault = fault.kind
        passed = (
            source_fault is None
            and cfp_fault is None
            and values_equal(cfp_output, source_output, tol)
        )
        report.results.append(
            CaseResult(
                inputs=case.inputs,
                source_output=source_output,
                cfp_output=cfp_output,
                passed=passed,
                source_fault=source_fault,
                cfp_fault=cfp_fault,
            )
        )
    return report


def materialize(value):
    """Convert PyArr results to plain lists for JSON-friendly reporting."""
    if isinstance(value, PyArr):
        return [materialize(v) for v in value]
    if isinstance(value, list):
        return [materialize(v) for v in value]
    return value


class _BreakSignal(Exception):
    pass


class _ContinueSignal(Exception):
    pass


class _ReturnSignal(Exception):
    def __init__(self, value):
        self.value = value


class _Interp:
    def __init__(self, env: dict, step_limit: int):
        self.env = env
        self.steps = 0
        self.step_limit = step_limit

    def tick(self, span) -> None:
        self.steps += 1
        if self.steps > self.step_limit:
            raise RuntimeFault("step-limit", f"exceeded {self.step_limit} steps", span)

    # ------------------------------------------------------------ statements

    def exec_block(self, stmts) -> None:
        for stmt in stmts:
            self.exec_stmt(stmt)

    def exec_stmt(self, stmt) -> None:
        self.tick(stmt.span)
        if isinstance(stmt, Assign):
            if isinstance(stmt.target, TupleLit):
                values = [self.eval(v) for v in stmt.value.elements]
                for target, value in zip(stmt.target.elements, values):
                    self.env[target.id] = value
            else:
                self.assign(stmt.target, self.eval(stmt.value))
        elif isinstance(stmt, AugAssign):
            current = self.eval(stmt.target)
            value = self.binop(stmt.op, current, self.eval(stmt.value), stmt.span)
            self.assign(stmt.target, value)
        elif isinstance(stmt, ExprStmt):
            self.eval(stmt.value)
        elif isinstance(stmt, Return):
            value = self.eval(stmt.value) if stmt.value is not None else None
            raise _ReturnSignal(value)
        elif isinstance(stmt, If):
            if self.truth(self.eval(stmt.test)):
                self.exec_block(stmt.body)
            else:
                self.exec_block(stmt.orelse)
        elif isinstance(stmt, For):
            for item in self.iterate(stmt.iter):
                self.env[stmt.var] = item
                try:
                    self.exec_block(stmt.body)
                except _BreakSignal:
                    break
                except _ContinueSignal:
                    continue
        elif isinstance(stmt, While):
            while self.truth(self.eval(stmt.test)):
                self.tick(stmt.span)
                try:
                    self.exec_block(stmt.body)
                except _BreakSignal:
                    break
                except _ContinueSignal:
                    continue
        elif isinstance(stmt, Break):
            raise _BreakSignal()
        elif isinstance(stmt, Continue):
            raise _ContinueSignal()
        elif isinstance(stmt, Pass):
            pass
        else:
            raise RuntimeFault("domain-error", f"cannot execute {type(stmt).__name__}", stmt.span)

    def assign(self, target, value) -> None:
        if isinstance(target, Name):
            self.env[target.id] = value
            return
        if isinstance(target, Subscript):
            container = self.eval(target.value)
            index = self.eval(target.index)
            self.store_index(container, index, value, target.span)
            return
        raise RuntimeFault("domain-error", "invalid assignment target", target.span)

    def iterate(self, iter_expr):
        value = self.eval(iter_expr)
        if isinstance(value, range):
            return value
        if isinstance(value, (list, PyArr)):
            return list(value)
        raise RuntimeFault("domain-error", "for loop requires range or sequence", iter_expr.span)

    # ----------------------------------------------------------- expressions

    def eval(self, expr):
        self.tick(expr.span)
        if isinstance(expr, Num):
            return expr.value
        if isinstance(expr, Bool):
            return expr.value
        if isinstance(expr, Str):
            return expr.value
        if isinstance(expr, Name):
            if expr.id == "math":
                raise RuntimeFault("domain-error", "bare module reference", expr.span)
            try:
                return self.env[expr.id]
            except KeyError:
                raise RuntimeFault("domain-error", f"unbound name {expr.id!r}", expr.span) from None
        if isinstance(expr, Attribute):
            dotted = dotted_name(expr)
            if dotted == "math.e":
                return math.e
            if dotted == "math.pi":
                return math.pi
            raise RuntimeFault("domain-error", f"unsupported attribute {dotted!r}", expr.span)
        if isinstance(expr, BinOp):
            left = self.eval(expr.left)
            right = self.eval(expr.right)
            return self.binop(expr.op, left, right, expr.span)
        if isinstance(expr, UnaryOp):
            if expr.op == "not":
                return not self.truth(self.eval(expr.operand))
            value = self.eval(expr.operand)
            if isinstance(value, PyArr):
                return PyArr(self.binop("-", 0, v, expr.span) for v in value)
            self.require_number(value, expr.span)
            return -value
        if isinstance(expr, BoolOp):
            result = None
            if expr.op == "and":
                for value_expr in expr.values:
                    result = self.eval(value_expr)
                    if not self.truth(result):
                        return result
                return result
            for value_expr in expr.values:
                result = self.eval(value_expr)
                if self.truth(result):
                    return result
            return result
        if isinstance(expr, Compare):
            left = self.eval(expr.left)
            for op, comparator_expr in zip(expr.ops, expr.comparators):
                right = self.eval(comparator_expr)
                if not self.compare(op, left, right, expr.span):
                    return False
                left = right
            return True
        if isinstance(expr, Ternary):
            if self.truth(self.eval(expr.test)):
                return self.eval(expr.body)
            return self.eval(expr.orelse)
        if isinstance(expr, Call):
            return self.call(expr)
        if isinstance(expr, Subscript):
            container = self.eval(expr.value)
            if isinstance(expr.index, SliceExpr):
                return self.load_slice(container, expr.index, expr.span)
            index = self.eval(expr.index)
            return self.load_index(container, index, expr.span)
        if isinstance(expr, ListLit):
            return [self.eval(e) for e in expr.elements]
        if isinstance(expr, ListComp):
            out = []
            saved = self.env.get(expr.var)
            for item in self.iterate(expr.iter):
                self.env[expr.var] = item
                out.append(self.eval(expr.expr))
            if saved is not None:
                self.env[expr.var] = saved
            return out
        raise RuntimeFault("domain-error", f"cannot evaluate {type(expr).__name__}", expr.span)

    # ------------------------------------------------------------- operators

    def truth(self, value) -> bool:
        return bool(value)

    def require_number(self, value, span) -> None:
        if not isinstance(value, (int, float)):
            raise RuntimeFault("domain-error", "operand is not a number", span)

    def binop(self, op: str, left, right, span):
        # numpy arrays broadcast arithmetic; plain lists never do.
        if isinstance(left, PyArr) or isinstance(right, PyArr):
            return self._broadcast(op, left, right, span)
        self.require_number(left, span)
        self.require_number(right, span)
        try:
            if op == "+":
                return left + right
            if op == "-":
                return left - right
            if op == "*":
                return left * right
            if op == "/":
                if right == 0:
                    raise RuntimeFault("zero-division", "division by zero", span)
                return left / right
            if op == "//":
                if right == 0:
                    raise RuntimeFault("zero-division", "floor division by zero", span)
                return left // right
            if op == "%":
                if right == 0:
                    raise RuntimeFault("zero-division", "modulo by zero", span)
                return left % right
            if op == "**":
                if left == 0 and isinstance(right, (int, float)) and right < 0:
                    raise RuntimeFault("zero-division", "zero to a negative power", span)
                if left < 0 and isinstance(right, float) and not right.is_integer():
                    raise RuntimeFault("domain-error", "negative base with fractional exponent", span)
                return left ** right
        except OverflowError:
            raise RuntimeFault("domain-error", "result too large", span) from None
        raise RuntimeFault("domain-error", f"unknown operator {op!r}", span)

    def _broadcast(self, op: str, left, right, span):
        seq_left = isinstance(left, (list, PyArr))
        seq_right = isinstance(right, (list, PyArr))
        if seq_left and seq_right:
            if len(left) != len(right):
                raise RuntimeFault(
                    "domain-error", "array length mismatch", span
                )
            pairs = zip(left, right)
        elif seq_left:
            pairs = ((v, right) for v in left)
        else:
            pairs = ((left, v) for v in right)
        return PyArr(self.binop(op, a, b, span) for a, b in pairs)

    def compare(self, op: str, left, right, span) -> bool:
        self.require_number(left, span)
        self.require_number(right, span)
        if op == "<":
            return left < right
        if op == "<=":
            return left <= right
        if op == ">":
            return left > right
        if op == ">=":
            return left >= right
        if op == "==":
            return left == right
        if op == "!=":
            return left != right
        raise RuntimeFault("domain-error", f"unknown comparison {op!r}", span)

    # ----------------------------------------------------------- containers

    def load_index(self, container, index, span):
        if not isinstance(container, (list, PyArr)):
            raise RuntimeFault("domain-error", "indexing a non-sequence", span)
        if isinstance(index, bool) or not isinstance(index, int):
            raise RuntimeFault("domain-error", "array index must be an integer", span)
        values = container.values if isinstance(container, PyArr) else container
        if index < -len(values) or index >= len(values):
            raise RuntimeFault("index-out-of-bounds", f"index {index} out of range", span)
        return values[index]

    def store_index(self, container, index, value, span) -> None:
        if not isinstance(container, (list, PyArr)):
            raise RuntimeFault("domain-error", "indexing a non-sequence", span)
        if isinstance(index, bool) or not isinstance(index, int):
            raise RuntimeFault("domain-error", "array index must be an integer", span)
        values = container.values if isinstance(container, PyArr) else container
        if index < -len(values) or index >= len(values):
            raise RuntimeFault("index-out-of-bounds", f"index {index} out of range", span)
        values[index] = value

    def load_slice(self, container, index: SliceExpr, span):
        if not isinstance(container, (list, PyArr)):
            raise RuntimeFault("domain-error", "slicing a non-sequence", span)
        parts = []
        for bound in (index.lower, index.upper, index.step):
            if bound is None:
                parts.append(None)
            else:
                value = self.eval(bound)
                if isinstance(value, bool) or not isinstance(value, int):
                    raise RuntimeFault("domain-error", "slice bounds must be integers", span)
                parts.append(value)
        if parts[2] == 0:
            raise RuntimeFault("domain-error", "slice step of zero", span)
        values = container.values if isinstance(container, PyArr) else container
        sliced = values[parts[0]:parts[1]:parts[2]]
        return PyArr(sliced) if isinstance(container, PyArr) else sliced

    # ------------------------------------------------------------------ calls

    def call(self, call: Call):
        func = call.func
        args = [self.eval(a) for a in call.args]
        span = call.span

        if isinstance(func, Name):
            return self.call_builtin(func.id, args, span)
        if isinstance(func, Attribute):
            dotted = dotted_name(func)
            if dotted is not None and dotted.startswith("math."):
                return self.call_math(func.attr, args, span)
            if dotted is not None and dotted.startswith("numpy."):
                return self.call_numpy(func.attr, args, span)
            receiver = self.eval(func.value)
            return self.call_method(receiver, func.attr, args, span)
        raise RuntimeFault("domain-error", "uncallable expression", span)

    def call_builtin(self, name: str, args, span):
        if name == "range":
            for a in args:
                if isinstance(a, bool) or not isinstance(a, int):
                    raise RuntimeFault("domain-error", "range bounds must be integers", span)
            if not 1 <= len(args) <= 3:
                raise RuntimeFault("domain-error", "range takes 1 to 3 arguments", span)
            if len(args) == 3 and args[2] == 0:
                raise RuntimeFault("domain-error", "range step of zero", span)
            return range(*args)
        if name == "len":
            if len(args) != 1 or not isinstance(args[0], (list, PyArr)):
                raise RuntimeFault("domain-error", "len expects one sequence", span)
            return len(args[0])
        if name == "abs":
            self.require_number(args[0], span)
            return abs(args[0])
        if name == "min" or name == "max":
            pick = min if name == "min" else max
            if len(args) == 1:
                seq = args[0]
                if not isinstance(seq, (list, PyArr)) or len(seq) == 0:
                    raise RuntimeFault("domain-error", f"{name} of empty or non-sequence", span)
                out = None
                for v in seq:  # left fold, matches the lowered loop
                    out = v if out is None else pick(out, v)
                return out
            if len(args) < 2:
                raise RuntimeFault("domain-error", f"{name} needs arguments", span)
            out = args[0]
            for v in args[1:]:
                out = pick(out, v)
            return out
        if name == "sum":
            if len(args) != 1 or not isinstance(args[0], (list, PyArr)):
                raise RuntimeFault("domain-error", "sum expects one sequence", span)
            acc = 0
            for v in args[0]:
                self.require_number(v, span)
                acc = acc + v
            return acc
        if name == "sorted":
            if len(args) != 1 or not isinstance(args[0], (list, PyArr)):
                raise RuntimeFault("domain-error", "sorted expects one sequence", span)
            out = sorted(args[0])
            return PyArr(out) if isinstance(args[0], PyArr) else out
        if name == "invertsqrt":
            # Canonical-form intrinsic for 1/sqrt(x); broadcasts like the
            # numpy expression it replaces.
            recip = lambda x: 1.0 / math.sqrt(x)
            if len(args) == 1 and isinstance(args[0], (list, PyArr)):
                return PyArr(
                    self.call_math_checked(recip, [v], span) for v in args[0]
                )
            return self.call_math_checked(recip, args, span)
        raise RuntimeFault("domain-error", f"unknown function {name!r}", span)

    def call_math_checked(self, fn, args, span):
        for a in args:
            self.require_number(a, span)
        try:
            return fn(*args)
        except ZeroDivisionError:
            raise RuntimeFault("zero-division", "division by zero", span) from None
        except ValueError:
            raise RuntimeFault("domain-error", "math domain error", span) from None
        except OverflowError:
            raise RuntimeFault("domain-error", "math result too large", span) from None

    def call_math(self, name: str, args, span):
        simple = {
            "exp": math.exp, "log2": math.log2, "log10": math.log10,
            "sqrt": math.sqrt, "sin": math.sin, "cos": math.cos,
            "tan": math.tan, "asin": math.asin, "acos": math.acos,
            "atan": math.atan, "sinh": math.sinh, "cosh": math.cosh,
            "tanh": math.tanh, "floor": math.floor, "ceil": math.ceil,
            "fabs": math.fabs, "pow": math.pow,
        }
        if name == "log":
            if len(args) == 2:
                return self.call_math_checked(lambda x, b: math.log(x) / math.log(b), args, span)
            return self.call_math_checked(math.log, args, span)
        if name in simple:
            return self.call_math_checked(simple[name], args, span)
        raise RuntimeFault("domain-error", f"unknown function math.{name}", span)

    def call_numpy(self, name: str, args, span):
        if name == "array":
            if len(args) != 1 or not isinstance(args[0], (list, PyArr)):
                raise RuntimeFault("domain-error", "numpy.array expects a sequence", span)
            return PyArr(copy_value(v) for v in args[0])
        if name in ("zeros", "ones"):
            if len(args) != 1 or isinstance(args[0], bool) or not isinstance(args[0], int):
                raise RuntimeFault("domain-error", f"numpy.{name} expects an integer length", span)
            if args[0] < 0:
                raise RuntimeFault("domain-error", "negative array length", span)
            fill = 0.0 if name == "zeros" else 1.0
            return PyArr([fill] * args[0])
        if name == "arange":
            if len(args) != 1 or isinstance(args[0], bool) or not isinstance(args[0], int):
                raise RuntimeFault("domain-error", "numpy.arange expects an integer length", span)
            return PyArr(range(max(args[0], 0)))
        if name == "sum":
            return self.call_builtin("sum", args, span)
        if name in ("min", "max"):
            if len(args) != 1:
                raise RuntimeFault("domain-error", f"numpy.{name} expects one array", span)
            return self.call_builtin(name, args, span)
        if name == "abs":
            if isinstance(args[0], (list, PyArr)):
                return PyArr(abs(v) for v in args[0])
            return abs(args[0])
        if name == "dot":
            a, b = args
            if not isinstance(a, (list, PyArr)) or not isinstance(b, (list, PyArr)):
                raise RuntimeFault("domain-error", "numpy.dot expects two arrays", span)
            if len(a) != len(b):
                raise RuntimeFault("domain-error", "numpy.dot length mismatch", span)
            acc = 0
            for x, y in zip(a, b):  # left fold of products
                acc = acc + x * y
            return acc
        if name == "sort":
            return self.call_builtin("sorted", args, span)
        if name == "where":
            cond, x, y = args
            if not isinstance(cond, (list, PyArr)):
                raise RuntimeFault("domain-error", "numpy.where expects an array condition", span)
            out = []
            for i, c in enumerate(cond):
                xv = x[i] if isinstance(x, (list, PyArr)) else x
                yv = y[i] if isinstance(y, (list, PyArr)) else y
                out.append(xv if c else yv)
            return PyArr(out)
        if name == "clip":
            value, lo, hi = args
            if isinstance(value, (list, PyArr)):
                return PyArr(min(max(v, lo), hi) for v in value)
            return min(max(value, lo), hi)
        scalar_math = {
            "exp": math.exp, "sqrt": math.sqrt, "log": math.log,
            "log2": math.log2, "log10": math.log10,
            "exp2": lambda x: math.exp(x * math.log(2)),
            "expm1": math.expm1, "log1p": math.log1p,
            "power": math.pow,
            "logaddexp": lambda x, y: math.log(math.exp(x) + math.exp(y)),
            "logaddexp2": lambda x, y: math.log2(2.0 ** x + 2.0 ** y),
        }
        if name in scalar_math:
            fn = scalar_math[name]
            if isinstance(args[0], (list, PyArr)):
                rest = args[1:]
                out = []
                for i, v in enumerate(args[0]):
                    row = [v]
                    for r in rest:
                        row.append(r[i] if isinstance(r, (list, PyArr)) else r)
                    out.append(self.call_math_checked(fn, row, span))
                return PyArr(out)
            return self.call_math_checked(fn, args, span)
        raise RuntimeFault("domain-error", f"unknown function numpy.{name}", span)

    def call_method(self, receiver, method: str, args, span):
        if not isinstance(receiver, list):
            raise RuntimeFault("domain-error", f".{method}() requires a list", span)
        try:
            if method == "append":
                receiver.append(args[0])
                return None
            if method == "pop":
                if receiver == []:
                    raise RuntimeFault("index-out-of-bounds", "pop from empty list", span)
                return receiver.pop(*args)
            if method == "insert":
                receiver.insert(args[0], args[1])
                return None
            if method == "extend":
                if not isinstance(args[0], (list, PyArr)):
                    raise RuntimeFault("domain-error", "extend expects a sequence", span)
                receiver.extend(args[0])
                return None
            if method == "index":
                return receiver.index(args[0])
            if method == "count":
                return receiver.count(args[0])
        except IndexError:
            raise RuntimeFault("index-out-of-bounds", f"{method} index out of range", span) from None
        except ValueError:
            raise RuntimeFault("domain-error", f"{method}: value not found", span) from None
        raise RuntimeFault("domain-error", f"unknown method .{method}()", span)
