"""Subset validation: the gate between arbitrary parse trees and the
constructs the rest of the pipeline is allowed to see.

The unit of translation is a single top-level function.  Calls are
restricted to a fixed whitelist of builtins, ``math``/``numpy`` members,
and list methods; strings may appear only as the docstring.  All
violations are collected and reported together.
"""

from __future__ import annotations

from ..errors import SubsetError
from .nodes import (
    Assign, Attribute, AugAssign, Bool, BoolOp, Break, BinOp, Call, Compare,
    Continue, Expr, ExprStmt, For, FunctionDef, If, ImportStmt, ListComp,
    ListLit, Module, Name, Num, Pass, Return, SliceExpr, Str, Subscript,
    Ternary, TupleLit, UnaryOp, While, dotted_name,
)

BUILTIN_CALLS = {"range", "len", "abs", "min", "max", "sum", "sorted"}

LIST_METHODS = {"append", "pop", "insert", "extend", "index", "count"}

MATH_MEMBERS = {
    "exp", "log", "log2", "log10", "sqrt", "pow",
    "sin", "cos", "tan", "asin", "acos", "atan",
    "sinh", "cosh", "tanh", "floor", "ceil", "fabs",
}
MATH_CONSTANTS = {"e", "pi"}

NUMPY_MEMBERS = {
    "array", "zeros", "ones", "arange",
    "exp", "exp2", "expm1", "log", "log1p", "log2", "log10", "sqrt",
    "power", "logaddexp", "logaddexp2",
    "abs", "sum", "min", "max", "dot", "sort", "where", "clip",
}

RESERVED_PREFIXES = ("__flag_", "__t_")


def validate_subset(module: Module) -> FunctionDef:
    """Check the module against the subset; return its function.

    Raises SubsetError carrying every violation found.
    """
    checker = _Checker()
    fn = checker.check_module(module)
    if checker.violations:
        raise SubsetError(checker.violations)
    return fn


class _Checker:
    def __init__(self):
        self.violations: list[tuple] = []
        self._loop_depth = 0

    def flag(self, node, description: str) -> None:
        self.violations.append((node.span, description))

    # ------------------------------------------------------------------

    def check_module(self, module: Module) -> FunctionDef | None:
        functions = [s for s in module.body if isinstance(s, FunctionDef)]
        others = [s for s in module.body if not isinstance(s, FunctionDef)]
        for stmt in others:
            if isinstance(stmt, ImportStmt):
                self.flag(stmt, "import statements are not part of the subset")
            else:
                self.flag(stmt, "only a single function definition is allowed at top level")
        if len(functions) != 1:
            if module.body:
                self.flag(module.body[0], f"expected exactly one function, found {len(functions)}")
            else:
                self.violations.append((None, "empty module"))
            return functions[0] if functions else None
        fn = functions[0]
        self.check_function(fn)
        return fn

    def check_function(self, fn: FunctionDef) -> None:
        if fn.decorators:
            self.flag(fn, "decorators are not part of the subset")
        seen: set[str] = set()
        for param in fn.params:
            if param in seen:
                self.flag(fn, f"duplicate parameter {param!r}")
            if param.startswith(RESERVED_PREFIXES):
                self.flag(fn, f"parameter {param!r} uses a reserved name prefix")
            seen.add(param)
        for stmt in fn.body:
            self.check_stmt(stmt)

    def check_stmt(self, stmt) -> None:
        if isinstance(stmt, FunctionDef):
            self.flag(stmt, "nested function definitions are not allowed")
        elif isinstance(stmt, ImportStmt):
            self.flag(stmt, "import statements are not part of the subset")
        elif isinstance(stmt, Assign):
            self.check_target(stmt.target)
            if isinstance(stmt.value, TupleLit):
                if not isinstance(stmt.target, TupleLit):
                    self.flag(stmt, "tuple value requires a tuple target")
                elif len(stmt.target.elements) != len(stmt.value.elements):
                    self.flag(stmt, "tuple assignment arity mismatch")
                for element in stmt.value.elements:
                    self.check_expr(element)
            else:
                if isinstance(stmt.target, TupleLit):
                    self.flag(stmt, "tuple target requires a tuple value")
                self.check_expr(stmt.value)
        elif isinstance(stmt, AugAssign):
            self.check_target(stmt.target)
            self.check_expr(stmt.value)
        elif isinstance(stmt, ExprStmt):
            if isinstance(stmt.value, Str):
                self.flag(stmt, "string literals are only allowed as the docstring")
            elif not isinstance(stmt.value, Call):
                self.flag(stmt, "expression statements must be calls")
            else:
                self.check_expr(stmt.value)
        elif isinstance(stmt, Return):
            if stmt.value is None:
                self.flag(stmt, "return must carry a value")
            else:
                self.check_expr(stmt.value)
        elif isinstance(stmt, If):
            self.check_expr(stmt.test)
            for s in stmt.body:
                self.check_stmt(s)
            for s in stmt.orelse:
                self.check_stmt(s)
        elif isinstance(stmt, For):
            self.check_name(stmt.var, stmt)
            self.check_expr(stmt.iter)
            self._loop_depth += 1
            for s in stmt.body:
                self.check_stmt(s)
            self._loop_depth -= 1
        elif isinstance(stmt, While):
            self.check_expr(stmt.test)
            self._loop_depth += 1
            for s in stmt.body:
                self.check_stmt(s)
            self._loop_depth -= 1
        elif isinstance(stmt, (Break, Continue)):
            if self._loop_depth == 0:
                kind = "break" if isinstance(stmt, Break) else "continue"
                self.flag(stmt, f"{kind} outside a loop")
        elif isinstance(stmt, Pass):
            pass
        else:
            self.flag(stmt, f"unsupported statement {type(stmt).__name__}")

    def check_target(self, target) -> None:
        if isinstance(target, Name):
            self.check_name(target.id, target)
        elif isinstance(target, Subscript):
            if isinstance(target.index, SliceExpr):
                self.flag(target, "slice assignment is not supported")
            self.check_expr(target)
        elif isinstance(target, TupleLit):
            for element in target.elements:
                if isinstance(element, Name):
                    self.check_name(element.id, element)
                else:
                    self.flag(element, "tuple assignment targets must be names")
        else:
            self.flag(target, "invalid assignment target")

    def check_name(self, name: str, node) -> None:
        if name in BUILTIN_CALLS or name in ("math", "numpy"):
            self.flag(node, f"assignment shadows reserved name {name!r}")
        if name.startswith(RESERVED_PREFIXES):
            self.flag(node, f"name {name!r} uses a reserved prefix")

    # ------------------------------------------------------------------

    def check_expr(self, expr: Expr) -> None:
        if isinstance(expr, (Num, Bool, Name)):
            return
        if isinstance(expr, Str):
            self.flag(expr, "string literals are only allowed as the docstring")
        elif isinstance(expr, Attribute):
            dotted = dotted_name(expr)
            if dotted == "math.e" or dotted == "math.pi":
                return
            self.flag(expr, f"attribute {dotted or expr.attr!r} is not in the subset")
        elif isinstance(expr, Call):
            self.check_call(expr)
        elif isinstance(expr, Subscript):
            self.check_expr(expr.value)
            self.check_expr(expr.index)
        elif isinstance(expr, SliceExpr):
            for part in (expr.lower, expr.upper, expr.step):
                if part is not None:
                    self.check_expr(part)
        elif isinstance(expr, BinOp):
            self.check_expr(expr.left)
            self.check_expr(expr.right)
        elif isinstance(expr, UnaryOp):
            self.check_expr(expr.operand)
        elif isinstance(expr, BoolOp):
            for value in expr.values:
                self.check_expr(value)
        elif isinstance(expr, Compare):
            self.check_expr(expr.left)
            for comparator in expr.comparators:
                self.check_expr(comparator)
        elif isinstance(expr, Ternary):
            self.check_expr(expr.test)
            self.check_expr(expr.body)
            self.check_expr(expr.orelse)
        elif isinstance(expr, ListLit):
            for element in expr.elements:
                self.check_expr(element)
        elif isinstance(expr, ListComp):
            self.check_name(expr.var, expr)
            self.check_expr(expr.expr)
            self.check_expr(expr.iter)
        elif isinstance(expr, TupleLit):
            self.flag(expr, "tuple expressions are only allowed in tuple assignments")
        else:
            self.flag(expr, f"unsupported expression {type(expr).__name__}")

    def check_call(self, call: Call) -> None:
        func = call.func
        for arg in call.args:
            self.check_expr(arg)
        if isinstance(func, Name):
            if func.id not in BUILTIN_CALLS:
                self.flag(call, f"call to {func.id!r} is not whitelisted")
            return
        if isinstance(func, Attribute):
            dotted = dotted_name(func)
            if dotted is not None and dotted.startswith("math."):
                if func.attr not in MATH_MEMBERS:
                    self.flag(call, f"math.{func.attr} is not whitelisted")
                return
            if dotted is not None and dotted.startswith("numpy."):
                if func.attr not in NUMPY_MEMBERS:
                    self.flag(call, f"numpy.{func.attr} is not whitelisted")
                return
            # anything else is treated as a method call on a list value
            if func.attr not in LIST_METHODS:
                self.flag(call, f"method .{func.attr}() is not whitelisted")
            else:
                self.check_expr(func.value)
            return
        self.flag(call, "call target must be a name or attribute")
