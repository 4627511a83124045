"""Shared machinery for the refactoring passes.

Every pass is a pure function from one function-module to another.  The
helpers here cover the recurring needs: generating fresh names that cannot
collide with user code, rebuilding immutable nodes around transformed
children, and block-level statement rewriting where a single statement may
expand into several.
"""

from __future__ import annotations

import dataclasses
import re

from ..frontend import nodes as N

_FRESH_RE = re.compile(r"^__(?:flag|t)_(\d+)$")


class NameGen:
    """Fresh-name source for one function, shared by a whole pass run.

    Names follow ``__flag_<k>`` and ``__t_<k>`` with a single counter, so a
    program that already contains such names (a re-run on refactored output)
    keeps getting collision-free ones.
    """

    def __init__(self, fn: N.FunctionDef):
        highest = -1
        for node in fn.walk():
            name = None
            if isinstance(node, N.Name):
                name = node.id
            elif isinstance(node, N.For):
                name = node.var
            if name is not None:
                m = _FRESH_RE.match(name)
                if m:
                    highest = max(highest, int(m.group(1)))
        for p in fn.params:
            m = _FRESH_RE.match(p)
            if m:
                highest = max(highest, int(m.group(1)))
        self._next = highest + 1

    def flag(self) -> str:
        name = f"__flag_{self._next}"
        self._next += 1
        return name

    def temp(self) -> str:
        name = f"__t_{self._next}"
        self._next += 1
        return name


def replace_fields(node, **changes):
    """dataclasses.replace that tolerates unchanged values."""
    return dataclasses.replace(node, **changes)


def map_child_exprs(node, fn):
    """Rebuild ``node`` with ``fn`` applied to every direct child expression.

    Works on both statements and expressions; block fields (tuples of
    statements) are left untouched.
    """
    changes = {}
    for f in dataclasses.fields(node):
        value = getattr(node, f.name)
        if isinstance(value, N.Expr):
            new = fn(value)
            if new is not value:
                changes[f.name] = new
        elif isinstance(value, tuple) and value and all(
            isinstance(v, N.Expr) for v in value
        ):
            new_items = tuple(fn(v) for v in value)
            if any(a is not b for a, b in zip(new_items, value)):
                changes[f.name] = new_items
    if not changes:
        return node
    return dataclasses.replace(node, **changes)


def transform_exprs(node, fn):
    """Apply ``fn`` post-order to every expression inside ``node``.

    ``node`` may be an expression or a statement; nested statement blocks
    are not entered (block recursion is each pass's own business, since
    passes differ in how they treat scopes).
    """

    def rec(expr):
        rebuilt = map_child_exprs(expr, rec)
        return fn(rebuilt)

    if isinstance(node, N.Expr):
        return rec(node)
    return map_child_exprs(node, rec)


def rewrite_blocks(stmts, fn):
    """Rewrite a statement tuple with a one-to-many statement function.

    ``fn(stmt)`` returns a list of replacement statements; it receives
    statements whose nested blocks have already been rewritten.
    """
    out = []
    for s in stmts:
        s = _rewrite_nested(s, fn)
        out.extend(fn(s))
    return tuple(out)


def _rewrite_nested(stmt, fn):
    if isinstance(stmt, N.If):
        return replace_fields(
            stmt,
            body=rewrite_blocks(stmt.body, fn),
            orelse=rewrite_blocks(stmt.orelse, fn),
        )
    if isinstance(stmt, (N.For, N.While)):
        return replace_fields(stmt, body=rewrite_blocks(stmt.body, fn))
    return stmt


def contains_node(root, kinds, *, stop_at=()) -> bool:
    """True if ``root`` contains a node of ``kinds``, not descending into
    statements of type ``stop_at``."""
    if isinstance(root, kinds):
        return True
    if isinstance(root, stop_at):
        return False
    for child in root.children():
        if contains_node(child, kinds, stop_at=stop_at):
            return True
    return False


def block_contains(stmts, kinds, *, stop_at=()) -> bool:
    return any(contains_node(s, kinds, stop_at=stop_at) for s in stmts)


def negate_condition(cond: N.Expr) -> N.Expr:
    """Logical complement, preferring comparison flips over ``not``.

    ``x > 0`` becomes ``x <= 0``; a bare ``not e`` unwraps to ``e``;
    anything else is wrapped in ``not``.
    """
    if isinstance(cond, N.Compare) and len(cond.ops) == 1:
        flipped = _COMPLEMENT.get(cond.ops[0])
        if flipped is not None:
            return replace_fields(cond, ops=(flipped,))
    if isinstance(cond, N.UnaryOp) and cond.op == "not":
        return cond.operand
    return N.UnaryOp(op="not", operand=cond, span=cond.span)


_COMPLEMENT = {
    ">": "<=",
    "<": ">=",
    ">=": "<",
    "<=": ">",
    "==": "!=",
    "!=": "==",
}


def complement_mask(cond: N.Expr) -> N.Expr:
    """Arithmetic complement of a 0/1 condition: flip a comparison,
    otherwise form ``1 - cond``."""
    if isinstance(cond, N.Compare) and len(cond.ops) == 1:
        flipped = _COMPLEMENT.get(cond.ops[0])
        if flipped is not None:
            return replace_fields(cond, ops=(flipped,))
    return N.BinOp(left=N.Num(value=1), op="-", right=cond, span=cond.span)


def mask_pair(cond: N.Expr, when_true: N.Expr, when_false: N.Expr) -> N.Expr:
    """``cond * when_true + (1 - cond) * when_false`` with two touches of
    polish: a ``not f`` guard flips the arms so the bare flag leads, and a
    comparison complement replaces ``1 - cond`` when available."""
    if isinstance(cond, N.UnaryOp) and cond.op == "not":
        return mask_pair(cond.operand, when_false, when_true)
    yes = N.BinOp(left=cond, op="*", right=when_true)
    no = N.BinOp(left=complement_mask(cond), op="*", right=when_false)
    return N.BinOp(left=yes, op="+", right=no)


def expand_augassign(stmt: N.AugAssign) -> N.Assign:
    """``x += e`` as ``x = x + e``."""
    return N.Assign(
        target=stmt.target,
        value=N.BinOp(left=stmt.target, op=stmt.op, right=stmt.value),
        span=stmt.span,
    )


def same_target(a: N.Expr, b: N.Expr) -> bool:
    """Structural equality of assignment targets (Name or Subscript)."""
    return a == b


def function_of(module: N.Module) -> N.FunctionDef:
    fn = N.single_function(module)
    if fn is None:
        raise ValueError("module does not hold a single function")
    return fn


def with_function(module: N.Module, fn: N.FunctionDef) -> N.Module:
    body = tuple(fn if isinstance(s, N.FunctionDef) else s for s in module.body)
    return replace_fields(module, body=body)


def with_body(fn: N.FunctionDef, body) -> N.FunctionDef:
    return replace_fields(fn, body=tuple(body))
