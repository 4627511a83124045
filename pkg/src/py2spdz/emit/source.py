"""Rendering and reparsing of emitted programs.

The MP-SPDZ surface is a Python dialect, so the frontend renderer and
parser do the heavy lifting; this module only lowers ``ForRange`` into
the decorated-callback spelling on the way out and raises it back on
the way in.  ``parse_spdz(emit_source(p)) == p`` for every well-formed
program.
"""

from __future__ import annotations

from ..errors import ParseError
from ..frontend import nodes as N
from ..frontend.parse import parse
from ..frontend.render import render
from .spdz_ast import SpdzProgram, lower_loops, raise_loops


def emit_source(spdz: SpdzProgram) -> str:
    """Deterministic source text: imports, function, trailing statements."""
    body: list[N.Stmt] = [N.ImportStmt(text=line) for line in spdz.imports]
    body.append(lower_loops(spdz.fn))
    body.extend(lower_loops(stmt) for stmt in spdz.trailing)
    return render(N.Module(body=tuple(body)))


def parse_spdz(text: str) -> SpdzProgram:
    """Parse program text (ours or a model's) back into a SpdzProgram.

    The first function definition is the program; import lines before it
    form the import block; everything else — usage examples, stray
    prints, late imports — lands in ``trailing`` for the rectifier to
    delete.
    """
    module = parse(text)
    imports: list[str] = []
    fn: N.FunctionDef | None = None
    trailing: list[N.Stmt] = []
    for stmt in module.body:
        if fn is None and isinstance(stmt, N.ImportStmt):
            imports.append(stmt.text)
        elif fn is None and isinstance(stmt, N.FunctionDef):
            fn = raise_loops(stmt)
        else:
            trailing.append(raise_loops(stmt))
    if fn is None:
        raise ParseError("program has no function definition")
    return SpdzProgram(imports=tuple(imports), fn=fn, trailing=tuple(trailing))
