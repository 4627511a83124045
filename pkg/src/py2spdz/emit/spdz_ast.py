"""Program representation for the MP-SPDZ surface.

An emitted program reuses the frontend expression grammar — the surface
is deliberately a Python dialect — plus one extra statement form:
``ForRange``, the counting loop MP-SPDZ spells as a decorated callback::

    @for_range(start, stop)
    def _(i):
        ...

``ForRange`` nodes lower to exactly that shape for rendering and are
raised back from it after parsing, so the frontend parser and renderer
serve both languages unchanged.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass

from ..frontend import nodes as N
from ..frontend.nodes import Span, span_field

# Every emitted program carries the same import block; the rectifier
# restores it verbatim on programs that arrived with anything else.
CANONICAL_IMPORTS: tuple[str, ...] = (
    "import math",
    "from Compiler import mpc_math",
    "from Compiler.types import sint",
    "from Compiler.types import sfix",
    "from Compiler.types import cint",
    "from Compiler.types import cfix",
    "from Compiler.types import regint",
    "from Compiler.types import Array",
    "from Compiler.types import Matrix",
    "from Compiler.types import MemValue",
    "from Compiler.library import *",
)


@dataclass(frozen=True)
class ForRange(N.Stmt):
    """Counting loop over clear bounds; ``args`` mirror ``range``'s."""

    var: str
    args: tuple[N.Expr, ...]
    body: tuple[N.Stmt, ...]
    span: Span = span_field()


@dataclass(frozen=True)
class SpdzProgram:
    """One translated function plus its import block.

    ``trailing`` holds statements found after the function when a program
    is parsed back from model output (typically an example-usage block);
    the rectifier deletes them.  ``fired`` records, in first-use order,
    the pattern text of every mapping entry the translation used, which
    the pipeline turns into demonstration token counts.
    """

    imports: tuple[str, ...]
    fn: N.FunctionDef
    trailing: tuple[N.Stmt, ...] = ()
    # provenance, not program identity: reparsing emitted text drops it
    fired: tuple[str, ...] = dataclasses.field(default=(), compare=False)

    def walk(self):
        yield from self.fn.walk()
        for stmt in self.trailing:
            yield from stmt.walk()


def lower_loops(stmt: N.Stmt) -> N.Stmt:
    """Rewrite ``ForRange`` into the decorated-callback form, recursively."""
    if isinstance(stmt, ForRange):
        deco = N.Call(func=N.Name(id="for_range"), args=stmt.args, span=stmt.span)
        return N.FunctionDef(
            name="_",
            params=(stmt.var,),
            body=tuple(lower_loops(s) for s in stmt.body),
            decorators=(deco,),
            span=stmt.span,
        )
    return _map_blocks(stmt, lower_loops)


def raise_loops(stmt: N.Stmt) -> N.Stmt:
    """Inverse of :func:`lower_loops`; foreign shapes pass through."""
    if (
        isinstance(stmt, N.FunctionDef)
        and len(stmt.decorators) == 1
        and isinstance(stmt.decorators[0], N.Call)
        and isinstance(stmt.decorators[0].func, N.Name)
        and stmt.decorators[0].func.id == "for_range"
        and len(stmt.params) == 1
    ):
        return ForRange(
            var=stmt.params[0],
            args=stmt.decorators[0].args,
            body=tuple(raise_loops(s) for s in stmt.body),
            span=stmt.span,
        )
    return _map_blocks(stmt, raise_loops)


def _map_blocks(stmt: N.Stmt, fn) -> N.Stmt:
    changes = {}
    for f in dataclasses.fields(stmt):
        value = getattr(stmt, f.name)
        if (
            isinstance(value, tuple)
            and value
            and all(isinstance(v, N.Stmt) for v in value)
        ):
            new = tuple(fn(s) for s in value)
            if any(a is not b for a, b in zip(new, value)):
                changes[f.name] = new
    if not changes:
        return stmt
    return dataclasses.replace(stmt, **changes)


def statement_count(program) -> int:
    """Statements in a program, nested bodies included.

    For a :class:`SpdzProgram` the import block counts too, so the tally
    is comparable with the source function it was translated from.
    """
    if isinstance(program, SpdzProgram):
        total = len(program.imports) + _count_block(program.fn.body)
        total += _count_block(program.trailing)
        return total
    if isinstance(program, N.Module):
        return _count_block(program.body)
    if isinstance(program, N.FunctionDef):
        return _count_block(program.body)
    raise TypeError(f"cannot count statements of {type(program).__name__}")


def _count_block(stmts) -> int:
    total = 0
    for stmt in stmts:
        if isinstance(stmt, N.FunctionDef):
            total += _count_block(stmt.body)
            continue
        total += 1
        for f in dataclasses.fields(stmt):
            value = getattr(stmt, f.name)
            if (
                isinstance(value, tuple)
                and value
                and all(isinstance(v, N.Stmt) for v in value)
            ):
                total += _count_block(value)
    return total
