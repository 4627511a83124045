"""Deterministic self-reflection pass over emitted programs.

Model-produced MP-SPDZ code keeps hallucinating the same handful of
plausible-but-nonexistent spellings.  This pass canonicalizes them with
a fixed rewrite table instead of another model round trip:

- the import block is replaced with the canonical one;
- ``mpc_math.exp(x)`` becomes ``mpc_math.pow_fx(math.e, x)`` and
  ``mpc_math.log(x)`` becomes ``mpc_math.log_fx(x, math.e)``;
- ``cfix(math.e)`` (and the ``cifx`` misspelling) unwraps to ``math.e``
  inside ``pow_fx``/``log_fx`` arguments;
- ``mpc_math.sqrt_fx(x)`` becomes ``mpc_math.sqrt(x)``;
- bare ``math.pi``/``mpc_math.pi`` constants are wrapped in ``sfix`` and
  ``mpc_math.pi_fx()`` becomes ``sfix(math.pi)``;
- residual ternaries become ``condition.if_else(a, b)``;
- trailing example-usage statements are deleted.

Deterministic programs come out unchanged apart from the import block,
and the pass is idempotent.
"""

from __future__ import annotations

import dataclasses

from ..frontend import nodes as N
from ..rules.common import map_child_exprs
from .spdz_ast import CANONICAL_IMPORTS, SpdzProgram


def rectify(spdz: SpdzProgram) -> SpdzProgram:
    body = tuple(_rx_stmt(s) for s in spdz.fn.body)
    fn = dataclasses.replace(spdz.fn, body=body)
    return SpdzProgram(
        imports=CANONICAL_IMPORTS, fn=fn, trailing=(), fired=spdz.fired
    )


def _rx_stmt(stmt: N.Stmt) -> N.Stmt:
    stmt = map_child_exprs(stmt, _rx)
    changes = {}
    for f in dataclasses.fields(stmt):
        value = getattr(stmt, f.name)
        if (
            isinstance(value, tuple)
            and value
            and all(isinstance(v, N.Stmt) for v in value)
        ):
            new = tuple(_rx_stmt(s) for s in value)
            if any(a is not b for a, b in zip(new, value)):
                changes[f.name] = new
    if changes:
        stmt = dataclasses.replace(stmt, **changes)
    return stmt


def _rx(expr: N.Expr) -> N.Expr:
    # already-canonical constants stay put, or wrapping would not converge
    if _is_call_to(expr, "sfix") and len(expr.args) == 1 and _is_pi(expr.args[0]):
        return expr
    expr = map_child_exprs(expr, _rx)

    if isinstance(expr, N.Name) and expr.id == "cifx":
        return N.Name(id="cfix", span=expr.span)

    if isinstance(expr, N.Call):
        dotted = N.dotted_name(expr.func)
        if dotted == "mpc_math.exp" and len(expr.args) == 1:
            return _mpc_call(
                "pow_fx", (_math_e(expr.span), expr.args[0]), expr.span
            )
        if dotted == "mpc_math.log" and len(expr.args) == 1:
            return _mpc_call(
                "log_fx", (expr.args[0], _math_e(expr.span)), expr.span
            )
        if dotted == "mpc_math.sqrt_fx" and len(expr.args) == 1:
            return _mpc_call("sqrt", (expr.args[0],), expr.span)
        if dotted == "mpc_math.pi_fx" and not expr.args:
            return N.Call(
                func=N.Name(id="sfix", span=expr.span),
                args=(N.Attribute(value=N.Name(id="math"), attr="pi", span=expr.span),),
                span=expr.span,
            )
        if dotted in ("mpc_math.pow_fx", "mpc_math.log_fx"):
            args = tuple(
                a.args[0] if _is_call_to(a, "cfix") and len(a.args) == 1
                and _is_math_e(a.args[0]) else a
                for a in expr.args
            )
            if args != expr.args:
                return N.Call(func=expr.func, args=args, span=expr.span)
            return expr

    if isinstance(expr, N.Ternary):
        return N.Call(
            func=N.Attribute(value=expr.test, attr="if_else", span=expr.span),
            args=(expr.body, expr.orelse),
            span=expr.span,
        )

    if _is_pi(expr):
        return N.Call(func=N.Name(id="sfix", span=expr.span), args=(expr,),
                      span=expr.span)
    return expr


def _is_call_to(expr: N.Expr, name: str) -> bool:
    return (
        isinstance(expr, N.Call)
        and isinstance(expr.func, N.Name)
        and expr.func.id == name
    )


def _is_pi(expr: N.Expr) -> bool:
    return (
        isinstance(expr, N.Attribute)
        and expr.attr == "pi"
        and isinstance(expr.value, N.Name)
        and expr.value.id in ("math", "mpc_math")
    )


def _is_math_e(expr: N.Expr) -> bool:
    return (
        isinstance(expr, N.Attribute)
        and expr.attr == "e"
        and isinstance(expr.value, N.Name)
        and expr.value.id == "math"
    )


def _math_e(span) -> N.Attribute:
    return N.Attribute(value=N.Name(id="math"), attr="e", span=span)


def _mpc_call(name: str, args: tuple, span) -> N.Call:
    return N.Call(
        func=N.Attribute(value=N.Name(id="mpc_math"), attr=name, span=span),
        args=args,
        span=span,
    )
