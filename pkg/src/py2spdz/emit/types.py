"""Secrecy typing of canonical-form programs.

Every expression in a certified program gets one of the MP-SPDZ value
types before name mapping runs: secret scalars become ``sint``/``sfix``,
containers of secrets become secret arrays or matrices, and everything
clear stays on the Python side of the fence (``cint``/``cfix`` for
runtime inputs, ``clear-int``/``clear-real`` for literals and values
computed from them).

Typing is also where operations with no MP-SPDZ counterpart are
rejected: fixed-point values have no floor division or modulo, secret
exponents have no power operator, and secret non-boolean values cannot
feed logical connectives.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..analysis import Analysis, ValInfo, analyze
from ..errors import SecrecyTypeError
from ..frontend import nodes as N

SECRET_KINDS = frozenset({"sint", "sfix", "secret-array", "secret-matrix"})
CLEAR_KINDS = frozenset({"cint", "cfix", "clear-int", "clear-real"})


@dataclass(frozen=True)
class SecrecyType:
    """Value type on the MP-SPDZ side; containers carry an element kind."""

    kind: str
    elem: str | None = None

    @property
    def secret(self) -> bool:
        return self.kind in SECRET_KINDS

    def __str__(self) -> str:
        if self.elem is not None:
            return f"{self.kind}[{self.elem}]"
        return self.kind


def _scalar_kind(info: ValInfo, *, runtime_clear: bool = False) -> str:
    if info.secret:
        return "sfix" if info.kind in ("float", "unknown") else "sint"
    if runtime_clear:
        return "cfix" if info.kind == "float" else "cint"
    return "clear-real" if info.kind == "float" else "clear-int"


def _elem_kind(info: ValInfo | None) -> str:
    if info is not None and info.kind in ("int", "bool"):
        return "sint"
    return "sfix"


def _of_info(info: ValInfo, *, runtime_clear: bool = False) -> SecrecyType:
    # container storage always lives on the protected side: storing a
    # clear value into shared memory promotes it, so arrays carry only
    # an element kind, never a clearness of their own
    if info.shape == "matrix":
        inner = info.elem.elem if info.elem is not None else None
        return SecrecyType(kind="secret-matrix", elem=_elem_kind(inner))
    if info.shape == "array":
        return SecrecyType(kind="secret-array", elem=_elem_kind(info.elem))
    if info.shape == "range":
        return SecrecyType(kind="clear-int")
    return SecrecyType(kind=_scalar_kind(info, runtime_clear=runtime_clear))


@dataclass(frozen=True)
class TypedCfp:
    """A certified function together with its secrecy typing."""

    fn: N.FunctionDef
    clear_params: frozenset[str]
    analysis: Analysis

    def info_of(self, expr: N.Expr) -> ValInfo:
        return self.analysis.expr_info(expr)

    def type_of(self, expr: N.Expr) -> SecrecyType:
        runtime_clear = isinstance(expr, N.Name) and expr.id in self.clear_params
        return _of_info(self.analysis.expr_info(expr), runtime_clear=runtime_clear)

    def var_type(self, name: str) -> SecrecyType:
        return _of_info(
            self.analysis.var_info(name), runtime_clear=name in self.clear_params
        )


def assign_secrecy_types(cfp, clear_params=frozenset()) -> TypedCfp:
    """Type every expression of a canonical program.

    ``cfp`` may be a refactoring result, a module, or a bare function.
    Raises :class:`SecrecyTypeError` where the inferred types admit no
    MP-SPDZ operation.
    """
    root = getattr(cfp, "ast", cfp)
    fn = N.single_function(root) if isinstance(root, N.Module) else root
    if fn is None:
        raise SecrecyTypeError("program does not hold a single function")
    ana = analyze(fn, clear_params=frozenset(clear_params))
    typed = TypedCfp(fn=fn, clear_params=frozenset(clear_params), analysis=ana)
    _check(typed)
    return typed


def _check(typed: TypedCfp) -> None:
    ana = typed.analysis
    for node in typed.fn.walk():
        if isinstance(node, N.BinOp):
            left = ana.expr_info(node.left)
            right = ana.expr_info(node.right)
            if node.op in ("//", "%"):
                if (left.secret or right.secret) and "float" in (left.kind, right.kind):
                    raise SecrecyTypeError(
                        f"'{node.op}' is undefined for secret fixed-point values",
                        node.span,
                    )
            elif node.op == "**":
                if right.secret:
                    raise SecrecyTypeError(
                        "'**' needs a clear exponent; use the exponential basis "
                        "for secret powers",
                        node.span,
                    )
                if left.secret and right.kind == "float":
                    raise SecrecyTypeError(
                        "'**' on a secret base needs an integer exponent",
                        node.span,
                    )
        elif isinstance(node, N.BoolOp):
            for value in node.values:
                info = ana.expr_info(value)
                if info.secret and info.kind != "bool":
                    raise SecrecyTypeError(
                        f"'{node.op}' needs boolean operands; a secret "
                        f"{info.kind} value has no truth value",
                        node.span,
                    )
        elif isinstance(node, N.UnaryOp) and node.op == "not":
            info = ana.expr_info(node.operand)
            if info.secret and info.kind != "bool":
                raise SecrecyTypeError(
                    f"'not' needs a boolean operand; a secret {info.kind} "
                    "value has no truth value",
                    node.span,
                )
        elif isinstance(node, (N.If, N.While)):
            if ana.is_secret(node.test):
                raise SecrecyTypeError(
                    "control flow on a secret condition survived refactoring",
                    node.span,
                )
