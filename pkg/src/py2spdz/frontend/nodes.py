"""Syntax tree for the supported Python subset.

Design notes:

- Every node is a frozen dataclass, so trees are immutable after
  construction and safe to share; rewrite passes build new trees.
- Equality and hashing are structural.  The ``span`` field is excluded
  from comparisons, so ``parse(render(t)) == t`` holds even though the
  rendered text has different positions.
- Statement bodies are tuples, never lists, to keep nodes hashable.
- elif chains are represented as an ``If`` whose ``orelse`` is a single
  nested ``If``; the renderer collapses that shape back to ``elif``.
"""

from __future__ import annotations

from dataclasses import dataclass, field, fields


@dataclass(frozen=True)
class Span:
    """1-based source position (line, column) of a token or node."""

    line: int
    col: int

    def __str__(self) -> str:
        return f"{self.line}:{self.col}"


SYNTHETIC = Span(0, 0)

# dataclass spec for a span that does not participate in ==/hash
def span_field():
    return field(default=SYNTHETIC, compare=False)


@dataclass(frozen=True)
class Node:
    """Base class; concrete nodes add their payload fields."""

    def children(self):
        """Yield all direct child nodes (skipping plain values)."""
        for f in fields(self):
            value = getattr(self, f.name)
            if isinstance(value, Node):
                yield value
            elif isinstance(value, tuple):
                for item in value:
                    if isinstance(item, Node):
                        yield item

    def walk(self):
        """Yield this node and every descendant, preorder."""
        yield self
        for child in self.children():
            yield from child.walk()


class Expr(Node):
    pass


class Stmt(Node):
    pass


# --------------------------------------------------------------------------
# expressions


@dataclass(frozen=True)
class Name(Expr):
    id: str
    span: Span = span_field()


@dataclass(frozen=True)
class Num(Expr):
    """Integer or binary64 literal.  Bools are a separate node."""

    value: object
    span: Span = span_field()


@dataclass(frozen=True)
class Bool(Expr):
    value: bool
    span: Span = span_field()


@dataclass(frozen=True)
class Str(Expr):
    """String literal; only permitted as a docstring."""

    value: str
    span: Span = span_field()


@dataclass(frozen=True)
class Attribute(Expr):
    value: Expr
    attr: str
    span: Span = span_field()


@dataclass(frozen=True)
class Call(Expr):
    func: Expr
    args: tuple[Expr, ...]
    span: Span = span_field()


@dataclass(frozen=True)
class Subscript(Expr):
    value: Expr
    index: Expr
    span: Span = span_field()


@dataclass(frozen=True)
class SliceExpr(Expr):
    """Appears only as the index of a Subscript."""

    lower: Expr | None
    upper: Expr | None
    step: Expr | None
    span: Span = span_field()


@dataclass(frozen=True)
class BinOp(Expr):
    left: Expr
    op: str  # + - * / // % **
    right: Expr
    span: Span = span_field()


@dataclass(frozen=True)
class UnaryOp(Expr):
    op: str  # - or not
    operand: Expr
    span: Span = span_field()


@dataclass(frozen=True)
class BoolOp(Expr):
    op: str  # and / or
    values: tuple[Expr, ...]
    span: Span = span_field()


@dataclass(frozen=True)
class Compare(Expr):
    """Comparison chain: left ops[0] comparators[0] ops[1] ...

    A plain binary comparison has one op; anything longer is a chain
    that the rules stage splits.
    """

    left: Expr
    ops: tuple[str, ...]
    comparators: tuple[Expr, ...]
    span: Span = span_field()


@dataclass(frozen=True)
class Ternary(Expr):
    test: Expr
    body: Expr
    orelse: Expr
    span: Span = span_field()


@dataclass(frozen=True)
class ListLit(Expr):
    elements: tuple[Expr, ...]
    span: Span = span_field()


@dataclass(frozen=True)
class TupleLit(Expr):
    """Bare tuple; only valid in the two sides of a tuple assignment."""

    elements: tuple[Expr, ...]
    span: Span = span_field()


@dataclass(frozen=True)
class ListComp(Expr):
    """Simple one-generator comprehension [expr for var in seq]."""

    expr: Expr
    var: str
    iter: Expr
    span: Span = span_field()


# --------------------------------------------------------------------------
# statements


@dataclass(frozen=True)
class Assign(Stmt):
    target: Expr  # Name, Subscript, or TupleLit of Names
    value: Expr
    span: Span = span_field()


@dataclass(frozen=True)
class AugAssign(Stmt):
    target: Expr  # Name or Subscript
    op: str  # + - * /
    value: Expr
    span: Span = span_field()


@dataclass(frozen=True)
class ExprStmt(Stmt):
    value: Expr
    span: Span = span_field()


@dataclass(frozen=True)
class Return(Stmt):
    value: Expr | None
    span: Span = span_field()


@dataclass(frozen=True)
class If(Stmt):
    test: Expr
    body: tuple[Stmt, ...]
    orelse: tuple[Stmt, ...] = ()
    span: Span = span_field()


@dataclass(frozen=True)
class For(Stmt):
    var: str
    iter: Expr
    body: tuple[Stmt, ...]
    span: Span = span_field()


@dataclass(frozen=True)
class While(Stmt):
    test: Expr
    body: tuple[Stmt, ...]
    span: Span = span_field()


@dataclass(frozen=True)
class Break(Stmt):
    span: Span = span_field()


@dataclass(frozen=True)
class Continue(Stmt):
    span: Span = span_field()


@dataclass(frozen=True)
class Pass(Stmt):
    span: Span = span_field()


@dataclass(frozen=True)
class ImportStmt(Stmt):
    """Verbatim import line.  Outside the user subset; kept so emitted
    programs (which need a fixed import block) share this grammar."""

    text: str
    span: Span = span_field()


@dataclass(frozen=True)
class FunctionDef(Stmt):
    name: str
    params: tuple[str, ...]
    body: tuple[Stmt, ...]
    docstring: str | None = None
    decorators: tuple[Expr, ...] = ()
    span: Span = span_field()


@dataclass(frozen=True)
class Module(Node):
    body: tuple[Stmt, ...]
    span: Span = span_field()


# --------------------------------------------------------------------------
# helpers used across stages


def is_range_call(expr: Expr) -> bool:
    return isinstance(expr, Call) and isinstance(expr.func, Name) and expr.func.id == "range"


def dotted_name(expr: Expr) -> str | None:
    """Return 'math.exp' style text for a Name/Attribute chain, else None."""
    if isinstance(expr, Name):
        return expr.id
    if isinstance(expr, Attribute):
        base = dotted_name(expr.value)
        if base is not None:
            return f"{base}.{expr.attr}"
    return None


def single_function(module: Module) -> FunctionDef:
    """The one top-level function of a validated module."""
    for stmt in module.body:
        if isinstance(stmt, FunctionDef):
            return stmt
    raise ValueError("module has no function definition")
