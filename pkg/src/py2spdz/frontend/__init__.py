"""Frontend: tokenizer, parser, subset validation, and rendering.

The frontend turns source text into the immutable syntax trees the rest
of the pipeline operates on, and turns trees back into canonical text.
Round trip holds in both directions: ``parse(render(t)) == t`` and
parsing the rendering of a parse reproduces the same tree.
"""

from .lex import Token, tokenize
from .nodes import (
    Assign, Attribute, AugAssign, BinOp, Bool, BoolOp, Break, Call, Compare,
    Continue, Expr, ExprStmt, For, FunctionDef, If, ImportStmt, ListComp,
    ListLit, Module, Name, Node, Num, Pass, Return, SliceExpr, Span, Stmt,
    Str, Subscript, Ternary, TupleLit, UnaryOp, While, dotted_name,
    is_range_call, single_function,
)
from .parse import parse, parse_expression
from .render import render, render_expr
from .subset import (
    BUILTIN_CALLS, LIST_METHODS, MATH_CONSTANTS, MATH_MEMBERS, NUMPY_MEMBERS,
    validate_subset,
)

__all__ = [
    "Token", "tokenize", "parse", "parse_expression", "render", "render_expr",
    "validate_subset", "single_function", "dotted_name", "is_range_call",
    "BUILTIN_CALLS", "LIST_METHODS", "MATH_CONSTANTS", "MATH_MEMBERS",
    "NUMPY_MEMBERS",
    "Span", "Node", "Expr", "Stmt", "Module", "FunctionDef", "ImportStmt",
    "Assign", "AugAssign", "ExprStmt", "Return", "If", "For", "While",
    "Break", "Continue", "Pass",
    "Name", "Num", "Bool", "Str", "Attribute", "Call", "Subscript",
    "SliceExpr", "BinOp", "UnaryOp", "BoolOp", "Compare", "Ternary",
    "ListLit", "TupleLit", "ListComp",
]
