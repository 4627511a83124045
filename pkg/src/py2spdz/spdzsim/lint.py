"""Static checks a target program must pass before simulation.

The simulator supports a deliberate subset of the MP-SPDZ high-level
surface; everything outside it is a compile error, mirroring how the
real compiler rejects unknown APIs and type-rule violations.  The
checks here are the feedback source for model-driven repair, so every
issue carries a message written for a reader fixing the program.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..emit.spdz_ast import ForRange, SpdzProgram
from ..frontend import nodes as N

# callables the simulator implements
_MPC_FUNCTIONS = frozenset({
    "pow_fx", "log_fx", "exp2_fx", "log2_fx", "sqrt", "InvertSqrt",
    "sin", "cos", "tan", "asin", "acos", "atan",
})
_CALLABLE = frozenset({
    "sint", "sfix", "cint", "cfix", "regint", "Array", "Matrix",
    "radix_sort", "Array.create_from",
}) | frozenset(f"mpc_math.{name}" for name in _MPC_FUNCTIONS)
_METHODS = frozenset({"if_else", "bit_and", "bit_or"})
_MODULES = frozenset({"math", "mpc_math", "numpy", "Compiler"})
_CLEAR_ATTRS = frozenset({"math.e", "math.pi", "mpc_math.pi"})
_TYPE_NAMES = frozenset({
    "sint", "sfix", "cint", "cfix", "regint", "Array", "Matrix", "MemValue",
})
_LIBRARY_NAMES = frozenset({"for_range", "radix_sort"})

# calls whose result is always secret, for the control-flow check
_SECRET_CALLS = frozenset({
    "sint", "sfix", "Array", "Matrix", "Array.create_from", "radix_sort",
}) | frozenset(f"mpc_math.{name}" for name in _MPC_FUNCTIONS)


@dataclass(frozen=True)
class CompileError:
    """One static violation; the message is repair feedback."""

    message: str
    span: N.Span | None = None

    def __str__(self) -> str:
        if self.span is not None:
            return f"{self.span}: {self.message}"
        return self.message


def lint(spdz: SpdzProgram, clear_params=()) -> list[CompileError]:
    """All static violations in ``spdz``, in deterministic order."""
    issues: list[CompileError] = []
    fn = spdz.fn

    issues.extend(_check_imports(spdz))
    for stmt in spdz.trailing:
        issues.append(
            CompileError("top-level statement outside the function", stmt.span)
        )

    secrets = _secret_names(fn, clear_params)
    for stmt in _statements(fn.body):
        issues.extend(_check_stmt(stmt, secrets))

    # attribute chains in call position are judged by the Call rule, not
    # the bare-attribute rule
    in_call_position: set[int] = set()
    for node in fn.walk():
        if isinstance(node, N.Call):
            func = node.func
            while isinstance(func, N.Attribute):
                in_call_position.add(id(func))
                func = func.value
    for node in fn.walk():
        if isinstance(node, N.Expr) and id(node) not in in_call_position:
            issues.extend(_check_expr(node, secrets))

    seen: set[tuple] = set()
    unique: list[CompileError] = []
    for issue in issues:
        key = (issue.message, issue.span)
        if key not in seen:
            seen.add(key)
            unique.append(issue)
    return unique


# ------------------------------------------------------------ imports


def _grants(import_lines) -> tuple[set, bool]:
    granted: set[str] = set()
    star = False
    for line in import_lines:
        text = line.strip()
        if text == "import math":
            granted.add("math")
        elif text == "from Compiler import mpc_math":
            granted.add("mpc_math")
        elif text.startswith("from Compiler.types import "):
            tail = text[len("from Compiler.types import "):]
            granted.update(name.strip() for name in tail.split(","))
        elif text == "from Compiler.library import *":
            star = True
    return granted, star


def _check_imports(spdz: SpdzProgram) -> list[CompileError]:
    granted, star = _grants(spdz.imports)
    missing: dict[str, N.Span | None] = {}

    def need(name: str, span) -> None:
        covered = name in granted or (star and name in _LIBRARY_NAMES)
        if not covered and name not in missing:
            missing[name] = span

    for node in spdz.fn.walk():
        if isinstance(node, ForRange):
            need("for_range", node.span)
        elif isinstance(node, N.Name):
            if node.id in _TYPE_NAMES or node.id in _LIBRARY_NAMES:
                need(node.id, node.span)
        elif isinstance(node, N.Attribute):
            root = node.value
            if isinstance(root, N.Name) and root.id in _MODULES:
                need(root.id, node.span)
    return [
        CompileError(f"missing import for {name}", span)
        for name, span in missing.items()
    ]


# ------------------------------------------------- secrecy approximation


def _secret_names(fn: N.FunctionDef, clear_params) -> set[str]:
    secrets = set(fn.params) - set(clear_params)
    changed = True
    while changed:
        changed = False
        for node in fn.walk():
            if (
                isinstance(node, (N.Assign, N.AugAssign))
                and isinstance(node.target, N.Name)
                and node.target.id not in secrets
                and _is_secret(node.value, secrets)
            ):
                secrets.add(node.target.id)
                changed = True
    return secrets


def _is_secret(e: N.Expr, secrets: set[str]) -> bool:
    if isinstance(e, N.Name):
        return e.id in secrets
    if isinstance(e, (N.Num, N.Bool, N.Str)):
        return False
    if isinstance(e, N.Attribute):
        if e.attr == "length" or N.dotted_name(e) in _CLEAR_ATTRS:
            return False
        return _is_secret(e.value, secrets)
    if isinstance(e, N.Call):
        dotted = N.dotted_name(e.func)
        if dotted in _SECRET_CALLS:
            return True
        if dotted in ("cint", "cfix", "regint"):
            return False
        if isinstance(e.func, N.Attribute):
            # method call: secrecy follows the receiver and arguments
            if _is_secret(e.func.value, secrets):
                return True
        return any(_is_secret(a, secrets) for a in e.args)
    if isinstance(e, N.Subscript):
        return _is_secret(e.value, secrets)
    if isinstance(e, N.BinOp):
        return _is_secret(e.left, secrets) or _is_secret(e.right, secrets)
    if isinstance(e, N.UnaryOp):
        return _is_secret(e.operand, secrets)
    if isinstance(e, N.BoolOp):
        return any(_is_secret(v, secrets) for v in e.values)
    if isinstance(e, N.Compare):
        return _is_secret(e.left, secrets) or any(
            _is_secret(c, secrets) for c in e.comparators
        )
    if isinstance(e, N.Ternary):
        return any(
            _is_secret(part, secrets) for part in (e.test, e.body, e.orelse)
        )
    if isinstance(e, (N.ListLit, N.TupleLit)):
        return any(_is_secret(v, secrets) for v in e.elements)
    return False


# ------------------------------------------------------------ checks


def _statements(body) -> list:
    out = []
    for stmt in body:
        out.append(stmt)
        for field in ("body", "orelse"):
            inner = getattr(stmt, field, None)
            if isinstance(inner, tuple):
                out.extend(_statements(inner))
    return out


def _check_stmt(stmt, secrets) -> list[CompileError]:
    issues: list[CompileError] = []
    if isinstance(stmt, N.If) and _is_secret(stmt.test, secrets):
        issues.append(
            CompileError(
                "branching on a secret condition; compute both arms and "
                "blend them with if_else or mask arithmetic",
                stmt.span,
            )
        )
    elif isinstance(stmt, N.While) and _is_secret(stmt.test, secrets):
        issues.append(
            CompileError("while loop conditioned on a secret value", stmt.span)
        )
    elif isinstance(stmt, ForRange):
        for arg in stmt.args:
            if _is_secret(arg, secrets):
                issues.append(
                    CompileError("secret loop bound in for_range", arg.span)
                )
        for inner in _statements(stmt.body):
            if isinstance(inner, N.Return):
                issues.append(
                    CompileError("return inside a for_range body", inner.span)
                )
    elif isinstance(stmt, N.For):
        if N.is_range_call(stmt.iter):
            for arg in stmt.iter.args:
                if _is_secret(arg, secrets):
                    issues.append(
                        CompileError("secret loop bound in range", arg.span)
                    )
        else:
            issues.append(
                CompileError(
                    "loop over a container; use for_range over indices",
                    stmt.span,
                )
            )
    elif isinstance(stmt, (N.Break, N.Continue)):
        issues.append(
            CompileError(
                f"{type(stmt).__name__.lower()} has no oblivious equivalent",
                stmt.span,
            )
        )
    elif isinstance(stmt, N.FunctionDef):
        issues.append(
            CompileError("nested function definitions are not runnable", stmt.span)
        )
    elif isinstance(stmt, N.Assign) and isinstance(stmt.target, N.TupleLit):
        issues.append(CompileError("tuple assignment is not supported", stmt.span))
    return issues


def _check_expr(e: N.Expr, secrets) -> list[CompileError]:
    issues: list[CompileError] = []
    if isinstance(e, N.Call):
        dotted = N.dotted_name(e.func)
        if dotted in _CALLABLE:
            return issues
        if isinstance(e.func, N.Attribute):
            root = e.func.value
            if isinstance(root, N.Name) and root.id in _MODULES:
                issues.append(
                    CompileError(f"unknown callee {dotted}", e.span)
                )
            elif e.func.attr not in _METHODS:
                issues.append(
                    CompileError(f"unknown method {e.func.attr}", e.span)
                )
        elif isinstance(e.func, N.Name):
            issues.append(CompileError(f"unknown callee {e.func.id}", e.span))
        else:
            issues.append(CompileError("computed callee", e.span))
    elif isinstance(e, N.Attribute):
        dotted = N.dotted_name(e)
        if e.attr == "length" or dotted in _CLEAR_ATTRS:
            return issues
        root = e.value
        if isinstance(root, N.Name) and root.id in _MODULES:
            # call-position attributes are judged by the Call check
            issues.append(CompileError(f"unknown attribute {dotted}", e.span))
    elif isinstance(e, N.BoolOp):
        if any(_is_secret(v, secrets) for v in e.values):
            issues.append(
                CompileError(
                    f"'{e.op}' on secret values; secret bits combine with "
                    "bit_and/bit_or",
                    e.span,
                )
            )
    elif isinstance(e, N.UnaryOp) and e.op == "not":
        if _is_secret(e.operand, secrets):
            issues.append(
                CompileError(
                    "'not' on a secret value; negate the bit as 1 - b",
                    e.span,
                )
            )
    elif isinstance(e, N.Ternary):
        if _is_secret(e.test, secrets):
            issues.append(
                CompileError(
                    "conditional expression on a secret condition; use "
                    "if_else",
                    e.span,
                )
            )
    elif isinstance(e, N.Compare) and len(e.ops) > 1:
        if _is_secret(e, secrets):
            issues.append(
                CompileError("chained comparison on secret values", e.span)
            )
    elif isinstance(e, (N.TupleLit, N.ListComp)):
        issues.append(
            CompileError(f"{type(e).__name__} is not a target-side value", e.span)
        )
    elif isinstance(e, N.Str):
        issues.append(CompileError("string values are not supported", e.span))
    return issues
