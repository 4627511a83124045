"""Cleartext interpreter for target programs with trace recording.

Values follow the fixed-point contract in :mod:`fixedpoint`; every
instruction and container access appends a trace event that names
operand kinds and clear indices but never secret contents.  Control
flow on secret data is rejected unless ``leak_mode`` is set, which
reveals the bit, records the taken direction as a branch event, and is
how trace audits demonstrate a non-oblivious program leaking.

Two deliberate simplifications against the real platform: loop bodies
share the enclosing scope (rebinding a local inside ``for_range``
persists, where the real compiler needs a memory cell), and library
math is computed in binary64 then quantized.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from ..emit.spdz_ast import ForRange, SpdzProgram
from ..frontend import nodes as N
from ..rules.common import expand_augassign
from . import fixedpoint as fx
from .fixedpoint import SFix
from .lint import CompileError, lint
from .trace import FORBIDDEN_INDEX, Trace
from .values import Array, Matrix, SInt, is_secret, kind_of, sint_fit

_LOOP_BUDGET = 1_000_000

_MPC_UNARY = {
    "sqrt": math.sqrt,
    "InvertSqrt": lambda x: 1.0 / math.sqrt(x),
    "exp2_fx": lambda x: 2.0 ** x,
    "log2_fx": math.log2,
    "sin": math.sin,
    "cos": math.cos,
    "tan": math.tan,
    "asin": math.asin,
    "acos": math.acos,
    "atan": math.atan,
}
_MPC_BINARY = {
    "pow_fx": math.pow,
    "log_fx": math.log,
}


@dataclass(frozen=True)
class SimConfig:
    """Fixed-point layout for one run."""

    f: int = fx.DEFAULT_F
    k: int = fx.DEFAULT_K


@dataclass(frozen=True)
class Fault:
    """A runtime failure: the program compiled but could not finish."""

    kind: str  # overflow | zero-division | domain | secret-index
    message: str
    span: N.Span | None = None

    def __str__(self) -> str:
        return f"{self.kind}: {self.message}"


@dataclass(frozen=True)
class ExecOutcome:
    """Result or fault of one simulated run, plus its trace."""

    result: object
    fault: object  # CompileError | Fault | None
    trace: Trace

    @property
    def ok(self) -> bool:
        return self.fault is None


class _FaultSignal(Exception):
    def __init__(self, kind: str, message: str, span=None):
        super().__init__(message)
        self.kind = kind
        self.message = message
        self.span = span


class _Violation(Exception):
    def __init__(self, message: str, span=None):
        super().__init__(message)
        self.message = message
        self.span = span


class _Return(Exception):
    def __init__(self, value):
        self.value = value


def execute(
    spdz: SpdzProgram,
    inputs,
    config: SimConfig | None = None,
    *,
    clear_params=(),
    leak_mode: bool = False,
    run_lint: bool = True,
) -> ExecOutcome:
    """Run a target program on concrete inputs.

    Inputs bind positionally; values for parameters outside
    ``clear_params`` are quantized to secret types (ints to secret
    integers, reals to fixed point, lists to arrays, nested lists to
    matrices).  Trailing statements are usage examples, not program
    text, and do not run.
    """
    config = config or SimConfig()
    trace = Trace()
    if run_lint:
        issues = lint(spdz, clear_params=clear_params)
        if issues:
            return ExecOutcome(None, issues[0], trace)
    fn = spdz.fn
    if len(inputs) != len(fn.params):
        return ExecOutcome(
            None,
            CompileError(
                f"{fn.name} takes {len(fn.params)} inputs, {len(inputs)} given",
                fn.span,
            ),
            trace,
        )
    machine = _Machine(config, trace, leak_mode)
    try:
        for name, value in zip(fn.params, inputs):
            if name in clear_params:
                machine.env[name] = value
            else:
                machine.env[name] = machine.quantize_input(value)
        result = machine.run_body(fn.body)
    except _Violation as v:
        return ExecOutcome(None, CompileError(v.message, v.span), trace)
    except _FaultSignal as f:
        return ExecOutcome(None, Fault(f.kind, f.message, f.span), trace)
    return ExecOutcome(result, None, trace)


class _Machine:
    def __init__(self, config: SimConfig, trace: Trace, leak_mode: bool):
        self.config = config
        self.trace = trace
        self.leak_mode = leak_mode
        self.env: dict[str, object] = {}
        self._next_cid = 0

    # ------------------------------------------------------------ values

    def alloc_cid(self, prefix: str) -> str:
        cid = f"{prefix}{self._next_cid}"
        self._next_cid += 1
        return cid

    def sfix(self, x: float) -> SFix:
        return fx.quantize(x, self.config.f, self.config.k)

    def widen(self, v: int) -> SFix:
        return fx.from_int(v, self.config.f, self.config.k)

    def quantize_input(self, value):
        if isinstance(value, bool):
            return sint_fit(int(value), self.config.k)
        if isinstance(value, int):
            return sint_fit(value, self.config.k)
        if isinstance(value, float):
            return self.sfix(value)
        if isinstance(value, (list, tuple)):
            if value and all(isinstance(v, (list, tuple)) for v in value):
                return self._make_matrix(value)
            return self._make_array(value)
        raise _Violation(f"cannot bind a {type(value).__name__} input")

    def _make_array(self, values) -> Array:
        cid = self.alloc_cid("a")
        if all(isinstance(v, (bool, int)) for v in values):
            cells = [sint_fit(int(v), self.config.k) for v in values]
            return Array("sint", cells, cid)
        cells = [
            self.sfix(float(v)) if isinstance(v, (int, float)) else v
            for v in values
        ]
        return Array("sfix", cells, cid)

    def _make_matrix(self, rows) -> Matrix:
        if len({len(r) for r in rows}) > 1:
            raise _Violation("matrix input has ragged rows")
        cid = self.alloc_cid("m")
        made = []
        for i, row in enumerate(rows):
            arr = self._make_array(row)
            arr.cid = f"{cid}.{i}"
            made.append(arr)
        if len({a.kind for a in made}) > 1:
            for arr in made:
                if arr.kind == "sint":
                    arr.kind = "sfix"
                    arr.cells = [self.widen(c.value) for c in arr.cells]
        return Matrix(made, cid)

    # --------------------------------------------------------- statements

    def run_body(self, body):
        try:
            for stmt in body:
                self.exec_stmt(stmt)
        except _Return as r:
            return r.value
        return None

    def exec_stmt(self, s) -> None:
        if isinstance(s, N.Assign):
            self._assign(s)
        elif isinstance(s, N.AugAssign):
            self._assign(expand_augassign(s))
        elif isinstance(s, N.Return):
            value = self.eval(s.value) if s.value is not None else None
            self.trace.add(
                "return", kind_of(value) if value is not None else "none"
            )
            raise _Return(value)
        elif isinstance(s, N.ExprStmt):
            self.eval(s.value)
        elif isinstance(s, N.If):
            taken = self.branch_condition(s.test, "if")
            self.run_block(s.body if taken else s.orelse)
        elif isinstance(s, N.While):
            steps = 0
            while True:
                taken = self.branch_condition(s.test, "while")
                if not taken:
                    break
                steps += 1
                if steps > _LOOP_BUDGET:
                    raise _FaultSignal(
                        "overflow", "loop iteration budget exhausted", s.span
                    )
                self.run_block(s.body)
        elif isinstance(s, ForRange):
            self._for_range(s.var, s.args, s.body, s.span)
        elif isinstance(s, N.For):
            if not N.is_range_call(s.iter):
                raise _Violation(
                    "loop over a container; use for_range over indices", s.span
                )
            self._for_range(s.var, s.iter.args, s.body, s.span)
        elif isinstance(s, (N.Pass, N.ImportStmt)):
            pass
        elif isinstance(s, N.FunctionDef):
            raise _Violation("nested function definitions are not runnable", s.span)
        else:
            raise _Violation(
                f"{type(s).__name__} is not a runnable statement", s.span
            )

    def run_block(self, body) -> None:
        for stmt in body:
            self.exec_stmt(stmt)

    def branch_condition(self, test: N.Expr, label: str) -> bool:
        value = self.eval(test)
        if is_secret(value):
            if not self.leak_mode:
                raise _Violation(
                    "branching on a secret condition", test.span
                )
            taken = self._truth(value)
            self.trace.add("branch", f"{label} taken={int(taken)}")
            return taken
        taken = bool(value)
        kind = "branch" if label != "while" else "loop"
        detail = f"{label} taken={int(taken)}"
        self.trace.add(kind, detail)
        return taken

    @staticmethod
    def _truth(value) -> bool:
        if isinstance(value, SInt):
            return value.value != 0
        if isinstance(value, SFix):
            return value.raw != 0
        return bool(value)

    def _for_range(self, var, args, body, span) -> None:
        bounds = []
        for arg in args:
            value = self.eval(arg)
            if is_secret(value):
                raise _Violation("secret loop bound", arg.span)
            if isinstance(value, bool) or not isinstance(value, int):
                raise _Violation("loop bounds must be clear integers", arg.span)
            bounds.append(value)
        if not 1 <= len(bounds) <= 3:
            raise _Violation("for_range takes one to three bounds", span)
        self.trace.add("loop", "for_range " + ",".join(str(b) for b in bounds))
        # the body shares this scope: rebinding an enclosing name inside
        # the loop persists, so accumulator updates behave like Python
        for i in range(*bounds):
            self.env[var] = i
            self.run_block(body)

    def _assign(self, s: N.Assign) -> None:
        value = self.eval(s.value)
        target = s.target
        if isinstance(target, N.Name):
            self.env[target.id] = value
            return
        if isinstance(target, N.Subscript):
            container = self.eval(target.value)
            index = self.eval(target.index)
            self._store(container, index, value, target)
            return
        raise _Violation(
            f"{type(target).__name__} is not an assignable target", s.span
        )

    # -------------------------------------------------------- expressions

    def eval(self, e: N.Expr):
        try:
            return self._eval(e)
        except OverflowError as err:
            raise _FaultSignal("overflow", str(err), e.span) from None
        except ZeroDivisionError as err:
            raise _FaultSignal(
                "zero-division", str(err) or "division by zero", e.span
            ) from None

    def _eval(self, e: N.Expr):
        if isinstance(e, N.Num):
            return e.value
        if isinstance(e, N.Bool):
            return e.value
        if isinstance(e, N.Name):
            if e.id in self.env:
                return self.env[e.id]
            raise _Violation(f"name '{e.id}' is not defined", e.span)
        if isinstance(e, N.Attribute):
            return self._attribute(e)
        if isinstance(e, N.Subscript):
            return self._load(e)
        if isinstance(e, N.BinOp):
            left = self.eval(e.left)
            right = self.eval(e.right)
            self.trace.add("op", f"{e.op} {kind_of(left)},{kind_of(right)}")
            return self._binop(e.op, left, right, e.span)
        if isinstance(e, N.UnaryOp):
            operand = self.eval(e.operand)
            self.trace.add("op", f"{e.op} {kind_of(operand)}")
            return self._unary(e.op, operand, e.span)
        if isinstance(e, N.BoolOp):
            values = [self.eval(v) for v in e.values]
            if any(is_secret(v) for v in values):
                raise _Violation(
                    f"'{e.op}' on secret values; secret bits combine with "
                    "bit_and/bit_or",
                    e.span,
                )
            self.trace.add(
                "op", f"{e.op} " + ",".join(kind_of(v) for v in values)
            )
            out = bool(values[0])
            for v in values[1:]:
                out = (out and bool(v)) if e.op == "and" else (out or bool(v))
            return out
        if isinstance(e, N.Compare):
            return self._compare(e)
        if isinstance(e, N.Ternary):
            test = self.eval(e.test)
            if is_secret(test):
                raise _Violation(
                    "conditional expression on a secret condition; use "
                    "if_else",
                    e.span,
                )
            taken = bool(test)
            self.trace.add("branch", f"ternary taken={int(taken)}")
            return self.eval(e.body if taken else e.orelse)
        if isinstance(e, N.ListLit):
            return [self.eval(v) for v in e.elements]
        if isinstance(e, N.Call):
            return self._call(e)
        raise _Violation(
            f"{type(e).__name__} is not a target-side value", e.span
        )

    def _attribute(self, e: N.Attribute):
        dotted = N.dotted_name(e)
        if dotted == "math.e":
            return math.e
        if dotted in ("math.pi", "mpc_math.pi"):
            return math.pi
        if e.attr == "length":
            container = self.eval(e.value)
            if isinstance(container, (Array, Matrix)):
                return container.length
            if isinstance(container, (list, tuple)):
                return len(container)
            raise _Violation("only containers have a length", e.span)
        raise _Violation(f"unknown attribute {dotted or e.attr}", e.span)

    def _load(self, e: N.Subscript):
        container = self.eval(e.value)
        if isinstance(e.index, N.SliceExpr):
            raise _Violation("slicing is not supported here", e.span)
        index = self.eval(e.index)
        if isinstance(container, Array):
            i = self._clear_index(container, index, e)
            self.trace.add("read", f"{container.cid}[{i}]")
            return container.cells[i]
        if isinstance(container, Matrix):
            i = self._clear_index(container, index, e)
            self.trace.add("read", f"{container.cid}[{i}]")
            return container.rows[i]
        if isinstance(container, (list, tuple)):
            if is_secret(index):
                raise _FaultSignal(
                    "secret-index", "secret index into a clear list", e.span
                )
            return container[index]
        raise _Violation("only containers can be indexed", e.span)

    def _clear_index(self, container, index, e: N.Subscript) -> int:
        if is_secret(index):
            self.trace.add(
                "read", f"{container.cid}[{FORBIDDEN_INDEX}]"
            )
            raise _FaultSignal(
                "secret-index",
                "container access at a secret index",
                e.span,
            )
        if isinstance(index, bool):
            index = int(index)
        if not isinstance(index, int):
            raise _Violation("container index must be a clear integer", e.span)
        if not 0 <= index < container.length:
            raise _FaultSignal(
                "domain",
                f"index {index} outside [0, {container.length})",
                e.span,
            )
        return index

    def _store(self, container, index, value, target: N.Subscript) -> None:
        if isinstance(container, Matrix):
            raise _Violation("matrix rows cannot be replaced", target.span)
        if not isinstance(container, Array):
            raise _Violation("only arrays accept indexed stores", target.span)
        if is_secret(index):
            self.trace.add("write", f"{container.cid}[{FORBIDDEN_INDEX}]")
            raise _FaultSignal(
                "secret-index",
                "container store at a secret index",
                target.span,
            )
        i = self._clear_index(container, index, target)
        self.trace.add("write", f"{container.cid}[{i}]")
        container.cells[i] = self._coerce_cell(container.kind, value, target)

    def _coerce_cell(self, kind: str, value, node):
        if kind == "sint":
            if isinstance(value, SInt):
                return value
            if isinstance(value, bool) or isinstance(value, int):
                return sint_fit(int(value), self.config.k)
            raise _Violation(
                "cannot store a fixed-point value in an integer array",
                node.span,
            )
        if isinstance(value, SFix):
            return value
        if isinstance(value, SInt):
            return self.widen(value.value)
        if isinstance(value, bool) or isinstance(value, int):
            return self.widen(int(value))
        if isinstance(value, float):
            return self.sfix(value)
        raise _Violation("cannot store this value in an array", node.span)

    # ---------------------------------------------------------- operators

    def _binop(self, op: str, left, right, span):
        if not is_secret(left) and not is_secret(right):
            return self._clear_binop(op, left, right, span)
        if op == "**":
            return self._power(left, right, span)
        if isinstance(left, (Array, Matrix)) or isinstance(right, (Array, Matrix)):
            raise _Violation("arithmetic on whole containers", span)
        left = int(left) if isinstance(left, bool) else left
        right = int(right) if isinstance(right, bool) else right
        fixed = isinstance(left, (SFix, float)) or isinstance(right, (SFix, float))
        if op == "/":
            a, b = self._as_sfix(left), self._as_sfix(right)
            return fx.div(a, b)
        if fixed:
            return self._fixed_binop(op, left, right, span)
        return self._int_binop(op, left, right, span)

    @staticmethod
    def _clear_binop(op: str, left, right, span):
        if isinstance(left, (list, tuple)) or isinstance(right, (list, tuple)):
            raise _Violation("arithmetic on clear lists", span)
        if op == "+":
            return left + right
        if op == "-":
            return left - right
        if op == "*":
            return left * right
        if op == "/":
            return left / right
        if op == "//":
            return left // right
        if op == "%":
            return left % right
        if op == "**":
            return left ** right
        raise _Violation(f"operator {op} is not supported", span)

    def _int_binop(self, op: str, left, right, span):
        a = left.value if isinstance(left, SInt) else left
        b = right.value if isinstance(right, SInt) else right
        if op == "+":
            out = a + b
        elif op == "-":
            out = a - b
        elif op == "*":
            out = a * b
        elif op == "//":
            out = a // b
        elif op == "%":
            out = a % b
        else:
            raise _Violation(f"operator {op} on secret integers", span)
        return sint_fit(out, self.config.k)

    def _fixed_binop(self, op: str, left, right, span):
        if op == "*":
            if isinstance(left, SFix) and isinstance(right, (int, SInt)):
                return fx.scale(left, self._int_value(right))
            if isinstance(right, SFix) and isinstance(left, (int, SInt)):
                return fx.scale(right, self._int_value(left))
            return fx.mul(self._as_sfix(left), self._as_sfix(right))
        a, b = self._as_sfix(left), self._as_sfix(right)
        if op == "+":
            return fx.add(a, b)
        if op == "-":
            return fx.sub(a, b)
        if op in ("//", "%"):
            if b.raw == 0:
                raise ZeroDivisionError("division by zero")
            out = a.real // b.real if op == "//" else a.real % b.real
            return self.sfix(out)
        raise _Violation(f"operator {op} on fixed-point values", span)

    def _power(self, base, exponent, span):
        if is_secret(exponent):
            raise _Violation(
                "secret exponent; use the exponential basis", span
            )
        if isinstance(exponent, bool) or not isinstance(exponent, int):
            raise _Violation(
                "a secret base needs a clear integer exponent", span
            )
        if isinstance(base, SInt):
            if exponent < 0:
                raise _Violation(
                    "negative exponent on a secret integer", span
                )
            return sint_fit(base.value ** exponent, self.config.k)
        if not isinstance(base, SFix):
            raise _Violation("** needs a scalar base", span)
        if exponent == 0:
            return self.widen(1)
        acc = base
        for _ in range(abs(exponent) - 1):
            acc = fx.mul(acc, base)
        if exponent < 0:
            return fx.div(self.widen(1), acc)
        return acc

    def _unary(self, op: str, operand, span):
        if op == "-":
            if isinstance(operand, SInt):
                return SInt(-operand.value, operand.k)
            if isinstance(operand, SFix):
                return fx.neg(operand)
            if isinstance(operand, (int, float)):
                return -operand
            raise _Violation("cannot negate this value", span)
        if op == "not":
            if is_secret(operand):
                raise _Violation(
                    "'not' on a secret value; negate the bit as 1 - b", span
                )
            return not operand
        raise _Violation(f"operator {op} is not supported", span)

    def _compare(self, e: N.Compare):
        operands = [self.eval(e.left)] + [self.eval(c) for c in e.comparators]
        secret = any(is_secret(v) for v in operands)
        if len(e.ops) > 1 and secret:
            raise _Violation("chained comparison on secret values", e.span)
        result = True
        for op, a, b in zip(e.ops, operands, operands[1:]):
            self.trace.add("op", f"{op} {kind_of(a)},{kind_of(b)}")
            result = result and self._compare_pair(op, a, b, e.span)
        if secret:
            return SInt(int(self._truth(result)), self.config.k)
        return result

    def _compare_pair(self, op, a, b, span):
        if isinstance(a, (Array, Matrix)) or isinstance(b, (Array, Matrix)):
            raise _Violation("comparisons need scalar operands", span)
        ra, rb = self._as_real(a, span), self._as_real(b, span)
        if op == ">":
            out = ra > rb
        elif op == "<":
            out = ra < rb
        elif op == ">=":
            out = ra >= rb
        elif op == "<=":
            out = ra <= rb
        elif op == "==":
            out = ra == rb
        elif op == "!=":
            out = ra != rb
        else:
            raise _Violation(f"comparison {op} is not supported", span)
        return out

    def _as_real(self, v, span) -> float:
        if isinstance(v, SFix):
            return v.real
        if isinstance(v, SInt):
            return float(v.value)
        if isinstance(v, bool):
            return float(int(v))
        if isinstance(v, (int, float)):
            return float(v)
        raise _Violation("a scalar number is required here", span)

    def _as_sfix(self, v) -> SFix:
        if isinstance(v, SFix):
            return v
        if isinstance(v, SInt):
            return self.widen(v.value)
        if isinstance(v, bool):
            return self.widen(int(v))
        if isinstance(v, int):
            return self.widen(v)
        if isinstance(v, float):
            return self.sfix(v)
        raise _Violation(f"{kind_of(v)} is not a fixed-point operand")

    def _int_value(self, v) -> int:
        return v.value if isinstance(v, SInt) else int(v)

    # -------------------------------------------------------------- calls

    def _call(self, e: N.Call):
        dotted = N.dotted_name(e.func)
        if dotted == "Array":
            return self._alloc_array(e)
        if dotted == "Matrix":
            return self._alloc_matrix(e)

        if dotted and dotted.startswith("mpc_math."):
            return self._mpc_call(dotted[len("mpc_math."):], e)

        if dotted == "Array.create_from":
            source = self._eval_args(e, 1)[0]
            return self._create_from(source, e)
        if dotted == "radix_sort":
            (arr,) = self._eval_args(e, 1)
            if not isinstance(arr, Array):
                raise _Violation("radix_sort needs an array", e.span)
            self.trace.add("call", f"radix_sort {kind_of(arr)}")
            key = (lambda c: c.value) if arr.kind == "sint" else (lambda c: c.raw)
            return Array(
                arr.kind, sorted(arr.cells, key=key), self.alloc_cid("a")
            )
        if dotted in ("sint", "sfix", "cint", "cfix", "regint"):
            (value,) = self._eval_args(e, 1)
            self.trace.add("call", f"{dotted} {kind_of(value)}")
            return self._convert(dotted, value, e.span)

        if isinstance(e.func, N.Attribute) and e.func.attr in (
            "if_else", "bit_and", "bit_or",
        ):
            receiver = self.eval(e.func.value)
            args = [self.eval(a) for a in e.args]
            kinds = ",".join(kind_of(v) for v in (receiver, *args))
            self.trace.add("call", f"{e.func.attr} {kinds}")
            if e.func.attr == "if_else":
                if len(args) != 2:
                    raise _Violation("if_else takes two arguments", e.span)
                return self._if_else(receiver, args[0], args[1], e.span)
            if len(args) != 1:
                raise _Violation(f"{e.func.attr} takes one argument", e.span)
            return self._bit_op(e.func.attr, receiver, args[0], e.span)

        raise _Violation(
            f"unknown callee {dotted or 'a computed expression'}", e.span
        )

    def _eval_args(self, e: N.Call, count: int) -> list:
        if len(e.args) != count:
            raise _Violation(
                f"{N.dotted_name(e.func)} takes {count} argument(s)", e.span
            )
        return [self.eval(a) for a in e.args]

    def _elem_kind(self, arg: N.Expr) -> str:
        if isinstance(arg, N.Name) and arg.id in ("sint", "sfix"):
            return arg.id
        if isinstance(arg, N.Name) and arg.id in ("cint", "cfix", "regint"):
            raise _Violation("containers hold secret elements only", arg.span)
        raise _Violation("element kind must be sint or sfix", arg.span)

    def _clear_size(self, arg: N.Expr) -> int:
        size = self.eval(arg)
        if is_secret(size):
            raise _Violation("allocation size must be clear", arg.span)
        if isinstance(size, bool) or not isinstance(size, int):
            raise _Violation("allocation size must be an integer", arg.span)
        if size < 0:
            raise _FaultSignal("domain", f"negative size {size}", arg.span)
        return size

    def _alloc_array(self, e: N.Call) -> Array:
        if len(e.args) != 2:
            raise _Violation("Array takes a size and an element kind", e.span)
        kind = self._elem_kind(e.args[1])
        size = self._clear_size(e.args[0])
        self.trace.add("call", f"Array {size},{kind}")
        zero = sint_fit(0, self.config.k) if kind == "sint" else SFix(
            0, self.config.f, self.config.k
        )
        return Array(kind, [zero] * size, self.alloc_cid("a"))

    def _alloc_matrix(self, e: N.Call) -> Matrix:
        if len(e.args) != 3:
            raise _Violation(
                "Matrix takes rows, columns, and an element kind", e.span
            )
        kind = self._elem_kind(e.args[2])
        rows = self._clear_size(e.args[0])
        cols = self._clear_size(e.args[1])
        self.trace.add("call", f"Matrix {rows}x{cols},{kind}")
        zero = sint_fit(0, self.config.k) if kind == "sint" else SFix(
            0, self.config.f, self.config.k
        )
        cid = self.alloc_cid("m")
        made = [
            Array(kind, [zero] * cols, f"{cid}.{i}") for i in range(rows)
        ]
        return Matrix(made, cid)

    def _create_from(self, source, e: N.Call) -> Array:
        self.trace.add("call", f"Array.create_from {kind_of(source)}")
        if isinstance(source, Array):
            return Array(source.kind, list(source.cells), self.alloc_cid("a"))
        if isinstance(source, (list, tuple)):
            for v in source:
                if is_secret(v) or not isinstance(v, (bool, int, float)):
                    raise _Violation(
                        "create_from needs an array or a clear number list",
                        e.span,
                    )
            return self._make_array(list(source))
        raise _Violation("create_from needs an array or a list", e.span)

    def _convert(self, name: str, value, span):
        if name == "sint":
            if isinstance(value, SInt):
                return value
            if isinstance(value, bool) or isinstance(value, int):
                return sint_fit(int(value), self.config.k)
            raise _Violation("sint needs an integer", span)
        if name == "sfix":
            if isinstance(value, SFix):
                return value
            if isinstance(value, SInt):
                return self.widen(value.value)
            if isinstance(value, bool):
                return self.widen(int(value))
            if isinstance(value, (int, float)):
                return self.sfix(float(value))
            raise _Violation("sfix needs a number", span)
        # clear conversions cannot apply to secret data
        if is_secret(value):
            raise _Violation(f"{name} cannot reveal a secret value", span)
        if name in ("cint", "regint"):
            if isinstance(value, bool) or isinstance(value, int):
                return int(value)
            raise _Violation(f"{name} needs an integer", span)
        if isinstance(value, (bool, int, float)):
            return float(value)
        raise _Violation("cfix needs a number", span)

    def _mpc_call(self, name: str, e: N.Call):
        if name in _MPC_UNARY:
            args = self._eval_args(e, 1)
        elif name in _MPC_BINARY:
            args = self._eval_args(e, 2)
        else:
            raise _Violation(f"unknown callee mpc_math.{name}", e.span)
        kinds = ",".join(kind_of(v) for v in args)
        self.trace.add("call", f"mpc_math.{name} {kinds}")
        reals = [self._as_real(v, e.span) for v in args]
        fn = _MPC_UNARY.get(name) or _MPC_BINARY[name]
        try:
            out = fn(*reals)
        except (ValueError, ZeroDivisionError):
            # outside the domain the platform yields an unspecified value
            # rather than aborting; zero keeps masked-out branches harmless
            out = 0.0
        except OverflowError:
            raise _FaultSignal(
                "overflow", f"mpc_math.{name} result out of range", e.span
            ) from None
        if math.isnan(out):
            raise _FaultSignal(
                "domain", f"mpc_math.{name} produced an undefined value", e.span
            )
        if math.isinf(out):
            raise _FaultSignal(
                "overflow", f"mpc_math.{name} result out of range", e.span
            )
        return self.sfix(out)

    def _if_else(self, cond, a, b, span):
        if isinstance(a, (Array, Matrix)) or isinstance(b, (Array, Matrix)):
            raise _Violation("if_else selects scalars only", span)
        bit = self._bit_value(cond, span)
        secret = is_secret(cond) or is_secret(a) or is_secret(b)
        if isinstance(a, (SFix, float)) or isinstance(b, (SFix, float)):
            fa, fb = self._as_sfix(a), self._as_sfix(b)
            out = fx.add(fx.scale(fa, bit), fx.scale(fb, 1 - bit))
            return out if secret else out.real
        va = a.value if isinstance(a, SInt) else int(a)
        vb = b.value if isinstance(b, SInt) else int(b)
        out = va * bit + vb * (1 - bit)
        return sint_fit(out, self.config.k) if secret else out

    def _bit_op(self, name: str, a, b, span):
        va, vb = self._bit_value(a, span), self._bit_value(b, span)
        out = va * vb if name == "bit_and" else va + vb - va * vb
        if is_secret(a) or is_secret(b):
            return SInt(out, self.config.k)
        return out

    def _bit_value(self, v, span) -> int:
        if isinstance(v, SInt):
            return v.value
        if isinstance(v, bool):
            return int(v)
        if isinstance(v, int):
            return v
        raise _Violation("a 0/1 bit is required here", span)
