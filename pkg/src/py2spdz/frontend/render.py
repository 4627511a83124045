"""Deterministic source renderer.

Produces canonical text: 4-space indents, single spaces around binary
operators, parentheses only where precedence demands them, elif chains
collapsed from else-holding-a-single-if.  ``parse(render(t))`` is
structurally equal to ``t``.
"""

from __future__ import annotations

from .nodes import (
    Assign, Attribute, AugAssign, BinOp, Bool, BoolOp, Break, Call, Compare,
    Continue, Expr, ExprStmt, For, FunctionDef, If, ImportStmt, ListComp,
    ListLit, Module, Name, Num, Pass, Return, SliceExpr, Str, Subscript,
    Ternary, TupleLit, UnaryOp, While,
)

# precedence levels; higher binds tighter
_TERNARY, _OR, _AND, _NOT, _CMP, _ADD, _MUL, _UNARY, _POW, _ATOM = range(10)

_BINOP_PREC = {
    "+": _ADD, "-": _ADD,
    "*": _MUL, "/": _MUL, "//": _MUL, "%": _MUL,
    "**": _POW,
}


def render(node) -> str:
    """Render a Module, statement, or expression to canonical source."""
    if isinstance(node, Module):
        lines: list[str] = []
        previous = None
        for stmt in node.body:
            if isinstance(stmt, FunctionDef) and previous is not None:
                lines.append("")
            _render_stmt(stmt, 0, lines)
            previous = stmt
        return "\n".join(lines) + "\n"
    if isinstance(node, Expr):
        return render_expr(node)
    lines = []
    _render_stmt(node, 0, lines)
    return "\n".join(lines) + "\n"


def render_expr(expr: Expr, min_prec: int = _TERNARY) -> str:
    text, prec = _expr(expr)
    if prec < min_prec:
        return f"({text})"
    return text


def _render_block(stmts, depth: int, lines: list[str]) -> None:
    for stmt in stmts:
        _render_stmt(stmt, depth, lines)


def _render_stmt(stmt, depth: int, lines: list[str]) -> None:
    pad = "    " * depth
    if isinstance(stmt, FunctionDef):
        for deco in stmt.decorators:
            lines.append(f"{pad}@{render_expr(deco)}")
        params = ", ".join(stmt.params)
        lines.append(f"{pad}def {stmt.name}({params}):")
        if stmt.docstring is not None:
            lines.append(f'{pad}    """{stmt.docstring}"""')
        _render_block(stmt.body, depth + 1, lines)
    elif isinstance(stmt, Assign):
        lines.append(f"{pad}{_target(stmt.target)} = {_target(stmt.value)}")
    elif isinstance(stmt, AugAssign):
        lines.append(f"{pad}{_target(stmt.target)} {stmt.op}= {render_expr(stmt.value)}")
    elif isinstance(stmt, ExprStmt):
        lines.append(f"{pad}{render_expr(stmt.value)}")
    elif isinstance(stmt, Return):
        if stmt.value is None:
            lines.append(f"{pad}return")
        else:
            lines.append(f"{pad}return {render_expr(stmt.value)}")
    elif isinstance(stmt, If):
        _render_if(stmt, depth, lines, keyword="if")
    elif isinstance(stmt, For):
        lines.append(f"{pad}for {stmt.var} in {render_expr(stmt.iter)}:")
        _render_block(stmt.body, depth + 1, lines)
    elif isinstance(stmt, While):
        lines.append(f"{pad}while {render_expr(stmt.test)}:")
        _render_block(stmt.body, depth + 1, lines)
    elif isinstance(stmt, Break):
        lines.append(f"{pad}break")
    elif isinstance(stmt, Continue):
        lines.append(f"{pad}continue")
    elif isinstance(stmt, Pass):
        lines.append(f"{pad}pass")
    elif isinstance(stmt, ImportStmt):
        lines.append(f"{pad}{stmt.text}")
    else:
        raise TypeError(f"cannot render {type(stmt).__name__}")


def _render_if(stmt: If, depth: int, lines: list[str], keyword: str) -> None:
    pad = "    " * depth
    lines.append(f"{pad}{keyword} {render_expr(stmt.test)}:")
    _render_block(stmt.body, depth + 1, lines)
    if not stmt.orelse:
        return
    if len(stmt.orelse) == 1 and isinstance(stmt.orelse[0], If):
        _render_if(stmt.orelse[0], depth, lines, keyword="elif")
        return
    lines.append(f"{pad}else:")
    _render_block(stmt.orelse, depth + 1, lines)


def _target(expr: Expr) -> str:
    # tuple assignment sides render without parentheses
    if isinstance(expr, TupleLit):
        return ", ".join(render_expr(e) for e in expr.elements)
    return render_expr(expr)


def _expr(expr: Expr) -> tuple[str, int]:
    if isinstance(expr, Name):
        return expr.id, _ATOM
    if isinstance(expr, Num):
        return _num_text(expr.value), _ATOM if not _is_negative(expr.value) else _UNARY
    if isinstance(expr, Bool):
        return ("True" if expr.value else "False"), _ATOM
    if isinstance(expr, Str):
        return f'"{expr.value}"', _ATOM
    if isinstance(expr, Attribute):
        return f"{render_expr(expr.value, _ATOM)}.{expr.attr}", _ATOM
    if isinstance(expr, Call):
        args = ", ".join(render_expr(a) for a in expr.args)
        return f"{render_expr(expr.func, _ATOM)}({args})", _ATOM
    if isinstance(expr, Subscript):
        return f"{render_expr(expr.value, _ATOM)}[{_index_text(expr.index)}]", _ATOM
    if isinstance(expr, ListLit):
        inner = ", ".join(render_expr(e) for e in expr.elements)
        return f"[{inner}]", _ATOM
    if isinstance(expr, ListComp):
        return (
            f"[{render_expr(expr.expr)} for {expr.var} in {render_expr(expr.iter)}]",
            _ATOM,
        )
    if isinstance(expr, BinOp):
        prec = _BINOP_PREC[expr.op]
        if expr.op == "**":
            # right associative; left operand must be an atom-level form
            left = render_expr(expr.left, _ATOM)
            right = render_expr(expr.right, _UNARY)
        else:
            left = render_expr(expr.left, prec)
            right = render_expr(expr.right, prec + 1)
        return f"{left} {expr.op} {right}", prec
    if isinstance(expr, UnaryOp):
        if expr.op == "not":
            return f"not {render_expr(expr.operand, _NOT)}", _NOT
        return f"-{render_expr(expr.operand, _UNARY)}", _UNARY
    if isinstance(expr, BoolOp):
        prec = _OR if expr.op == "or" else _AND
        parts = [render_expr(v, prec + 1) for v in expr.values]
        return f" {expr.op} ".join(parts), prec
    if isinstance(expr, Compare):
        parts = [render_expr(expr.left, _CMP + 1)]
        for op, comparator in zip(expr.ops, expr.comparators):
            parts.append(op)
            parts.append(render_expr(comparator, _CMP + 1))
        return " ".join(parts), _CMP
    if isinstance(expr, Ternary):
        body = render_expr(expr.body, _OR)
        test = render_expr(expr.test, _OR)
        orelse = render_expr(expr.orelse, _TERNARY)
        return f"{body} if {test} else {orelse}", _TERNARY
    if isinstance(expr, TupleLit):
        inner = ", ".join(render_expr(e) for e in expr.elements)
        return f"({inner})", _ATOM
    raise TypeError(f"cannot render {type(expr).__name__}")


def _index_text(index: Expr) -> str:
    if isinstance(index, SliceExpr):
        lower = render_expr(index.lower) if index.lower is not None else ""
        upper = render_expr(index.upper) if index.upper is not None else ""
        if index.step is None:
            return f"{lower}:{upper}"
        return f"{lower}:{upper}:{render_expr(index.step)}"
    return render_expr(index)


def _num_text(value) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _is_negative(value) -> bool:
    try:
        return value < 0
    except TypeError:
        return False
