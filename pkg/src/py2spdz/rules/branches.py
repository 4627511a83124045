"""Branch flattening and data-oblivious masking.

``flatten_branches`` normalizes control flow shape: one trailing return,
and no if nested under a secret-conditioned if (guards become explicit
conjunctions).  ``make_oblivious`` then turns every secret-conditioned
branch into arithmetic selection ``c*a + (1-c)*b``, after which the
sequence of executed instructions and memory accesses no longer depends on
any secret.
"""

from __future__ import annotations

from .. import analysis as A
from ..errors import RuleError
from ..frontend import nodes as N
from .common import (
    NameGen,
    expand_augassign,
    function_of,
    mask_pair,
    negate_condition,
    replace_fields,
    with_body,
    with_function,
)

# --- flatten_branches -------------------------------------------------------


def _returns_always(stmts) -> bool:
    if not stmts:
        return False
    last = stmts[-1]
    if isinstance(last, N.Return):
        return True
    if isinstance(last, N.If):
        return _returns_always(last.body) and _returns_always(last.orelse)
    return False


def _absorb_else(stmts) -> tuple:
    """Fold statements following an always-returning branch into the other
    branch, so early-return shapes become explicit if/else trees."""
    out: list = []
    items = [_absorb_in_stmt(s) for s in stmts]
    for i, s in enumerate(items):
        rest = items[i + 1 :]
        if isinstance(s, N.If) and rest:
            body_ret = _returns_always(s.body)
            else_ret = _returns_always(s.orelse)
            if body_ret and else_ret:
                out.append(s)  # everything after is unreachable
                return tuple(out)
            if body_ret:
                merged = _absorb_else(tuple(s.orelse) + tuple(rest))
                out.append(replace_fields(s, orelse=merged))
                return tuple(out)
            if else_ret and s.orelse:
                merged = _absorb_else(tuple(s.body) + tuple(rest))
                out.append(replace_fields(s, body=merged))
                return tuple(out)
        out.append(s)
    return tuple(out)


def _absorb_in_stmt(s):
    if isinstance(s, N.If):
        return replace_fields(
            s, body=_absorb_else(s.body), orelse=_absorb_else(s.orelse)
        )
    if isinstance(s, (N.For, N.While)):
        return replace_fields(s, body=_absorb_else(s.body))
    return s


def _tail_return_ids(stmts) -> set:
    """Identities of returns in tail position of this block."""
    if not stmts:
        return set()
    last = stmts[-1]
    if isinstance(last, N.Return):
        return {id(last)}
    if isinstance(last, N.If) and _returns_always([last]):
        return _tail_return_ids(last.body) | _tail_return_ids(last.orelse)
    return set()


def _replace_tail_returns(stmts, ret: str) -> tuple:
    out = list(stmts)
    last = out[-1]
    if isinstance(last, N.Return):
        out[-1] = N.Assign(
            target=N.Name(id=ret),
            value=last.value if last.value is not None else N.Num(value=0),
            span=last.span,
        )
    elif isinstance(last, N.If):
        out[-1] = replace_fields(
            last,
            body=_replace_tail_returns(last.body, ret),
            orelse=_replace_tail_returns(last.orelse, ret),
        )
    return tuple(out)


def _replace_all_returns(stmts, ret: str, done: str) -> tuple:
    """Return -> result assignment plus done-flag set; unreachable trailing
    statements are dropped.  Recurses into branches and loop bodies."""
    out: list = []
    for s in stmts:
        if isinstance(s, N.Return):
            value = s.value if s.value is not None else N.Num(value=0)
            out.append(N.Assign(target=N.Name(id=ret), value=value, span=s.span))
            out.append(
                N.Assign(target=N.Name(id=done), value=N.Bool(value=True),
                         span=s.span)
            )
            break
        if isinstance(s, N.If):
            s = replace_fields(
                s,
                body=_replace_all_returns(s.body, ret, done),
                orelse=_replace_all_returns(s.orelse, ret, done),
            )
        elif isinstance(s, (N.For, N.While)):
            s = replace_fields(s, body=_replace_all_returns(s.body, ret, done))
        out.append(s)
    return tuple(out)


def _guard_after_sets(stmts, flag: str) -> tuple:
    """Wrap runs of statements in ``if not flag`` so nothing executes once
    the flag is up.  Mirrors the jump-elimination guard."""
    from .loops import _guard_block

    return _guard_block(stmts, flag)


def _normalize_returns(fn: N.FunctionDef, names: NameGen) -> N.FunctionDef:
    returns = [n for n in fn.walk() if isinstance(n, N.Return)]
    if not returns:
        return fn
    body = _absorb_else(fn.body)
    returns = [
        n
        for s in body
        for n in s.walk()
        if isinstance(n, N.Return)
    ]
    compliant = (
        len(returns) == 1
        and body
        and body[-1] is returns[0]
    )
    if compliant:
        return with_body(fn, body)
    ret = names.temp()
    tail_ids = _tail_return_ids(body)
    if all(id(r) in tail_ids for r in returns):
        # The initial store keeps the result name bound once masking turns
        # the branch assignments into read-modify-write selections; it is
        # swept away later when the first selection never reads it.
        new_body = (
            N.Assign(target=N.Name(id=ret), value=N.Num(value=0)),
        ) + _replace_tail_returns(body, ret)
    else:
        done = names.flag()
        replaced = _replace_all_returns(body, ret, done)
        guarded = _guard_after_sets(replaced, done)
        new_body = (
            N.Assign(target=N.Name(id=ret), value=N.Num(value=0)),
            N.Assign(target=N.Name(id=done), value=N.Bool(value=False)),
        ) + guarded
    new_body = new_body + (N.Return(value=N.Name(id=ret)),)
    return with_body(fn, new_body)


def _conjoin(a: N.Expr, b: N.Expr) -> N.Expr:
    return N.BoolOp(op="and", values=(a, b))


def _expand_nested(guard: N.Expr, stmts) -> list:
    """Flatten a guarded branch into plain ifs with conjoined conditions."""
    out: list = []
    buffer: list = []

    def flush():
        if buffer:
            out.append(N.If(test=guard, body=tuple(buffer)))
            buffer.clear()

    for s in stmts:
        if isinstance(s, N.If):
            flush()
            out.extend(_expand_nested(_conjoin(guard, s.test), s.body))
            if s.orelse:
                out.extend(
                    _expand_nested(
                        _conjoin(guard, negate_condition(s.test)), s.orelse
                    )
                )
        else:
            buffer.append(s)
    flush()
    return out


def _flatten_ifs(stmts, ana: A.Analysis) -> tuple:
    out: list = []
    for s in stmts:
        if isinstance(s, N.If):
            body = _flatten_ifs(s.body, ana)
            orelse = _flatten_ifs(s.orelse, ana)
            nested = any(isinstance(x, N.If) for x in body + orelse)
            if ana.is_secret(s.test) and nested:
                out.extend(_expand_nested(s.test, body))
                if orelse:
                    out.extend(
                        _expand_nested(negate_condition(s.test), orelse)
                    )
            else:
                out.append(replace_fields(s, body=body, orelse=orelse))
        elif isinstance(s, (N.For, N.While)):
            out.append(replace_fields(s, body=_flatten_ifs(s.body, ana)))
        else:
            out.append(s)
    return tuple(out)


def flatten_branches(module: N.Module, clear_params=()) -> N.Module:
    """Single trailing return; no if nested under a secret-conditioned if."""
    fn = function_of(module)
    names = NameGen(fn)
    fn2 = _normalize_returns(fn, names)
    ana = A.analyze(with_function(module, fn2), clear_params=clear_params)
    fn3 = with_body(fn2, _flatten_ifs(fn2.body, ana))
    if fn3 == fn:
        return module
    return with_function(module, fn3)


# --- make_oblivious ---------------------------------------------------------


def _is_bool_or_chain(ana, target: N.Expr) -> bool:
    return isinstance(target, N.Name) and ana.expr_info(target).kind == "bool"


def _masked_assign(guard: N.Expr, target: N.Expr, value: N.Expr, ana) -> N.Stmt:
    # Monotone flag updates keep their or-form instead of arithmetic.
    if _is_bool_or_chain(ana, target):
        if isinstance(value, N.Bool) and value.value is True:
            return N.Assign(
                target=target,
                value=N.BoolOp(op="or", values=(target, guard)),
            )
        if (
            isinstance(value, N.BoolOp)
            and value.op == "or"
            and value.values[0] == target
        ):
            rest = value.values[1:]
            joined = rest[0] if len(rest) == 1 else N.BoolOp(op="or", values=rest)
            return N.Assign(
                target=target,
                value=N.BoolOp(
                    op="or", values=(target, _conjoin(guard, joined))
                ),
            )
    return N.Assign(target=target, value=mask_pair(guard, value, target))


def _mentions(expr, name: str) -> bool:
    return any(isinstance(n, N.Name) and n.id == name for n in expr.walk())


def _sweep_dead_stores(stmts) -> tuple:
    """Drop a literal store immediately overwritten without being read.

    Masking rewrites ``x = v`` under a condition into a read of the old
    ``x``; the branch normalizer therefore seeds result names with ``0``.
    When the first masked assignment turns out not to read the seed (the
    two-branch selection case) the seed is dead weight.
    """
    out: list = []
    for i, s in enumerate(stmts):
        nxt = stmts[i + 1] if i + 1 < len(stmts) else None
        if (
            isinstance(s, N.Assign)
            and isinstance(s.target, N.Name)
            and isinstance(s.value, (N.Num, N.Bool))
            and isinstance(nxt, N.Assign)
            and nxt.target == s.target
            and not _mentions(nxt.value, s.target.id)
        ):
            continue
        out.append(s)
    return tuple(out)


class _Obliviator:
    def __init__(self, ana: A.Analysis):
        self.ana = ana

    def block(self, stmts) -> tuple:
        out: list = []
        for s in stmts:
            out.extend(self.stmt(s))
        return _sweep_dead_stores(out)

    def stmt(self, s) -> list:
        if isinstance(s, N.If):
            body = self.block(s.body)
            orelse = self.block(s.orelse)
            if not self.ana.is_secret(s.test):
                if not body:
                    body = (N.Pass(),)
                return [replace_fields(s, body=body, orelse=orelse)]
            return self.mask_branches(s.test, body, orelse, s.span)
        if isinstance(s, N.For):
            self.check_bounds(s)
            return [replace_fields(s, body=self.block(s.body))]
        if isinstance(s, N.While):
            if self.ana.is_secret(s.test):
                raise RuleError(
                    "secret-dependent loop bound", span=s.span
                )
            return [replace_fields(s, body=self.block(s.body))]
        return [s]

    def check_bounds(self, loop: N.For) -> None:
        if N.is_range_call(loop.iter):
            for arg in loop.iter.args:
                if self.ana.is_secret(arg):
                    raise RuleError(
                        "secret-dependent loop bound", span=loop.span
                    )

    def mask_branches(self, test, body, orelse, span) -> list:
        if (
            len(body) == 1
            and len(orelse) == 1
            and isinstance(body[0], N.Assign)
            and isinstance(orelse[0], N.Assign)
            and body[0].target == orelse[0].target
        ):
            return [
                N.Assign(
                    target=body[0].target,
                    value=mask_pair(test, body[0].value, orelse[0].value),
                    span=span,
                )
            ]
        out: list = []
        for s in body:
            out.extend(self.mask_one(test, s))
        neg = negate_condition(test)
        for s in orelse:
            out.extend(self.mask_one(neg, s))
        return out

    def mask_one(self, guard: N.Expr, s) -> list:
        if isinstance(s, N.AugAssign):
            s = expand_augassign(s)
        if isinstance(s, N.Assign):
            if isinstance(s.target, N.TupleLit):
                raise RuleError(
                    "tuple assignment under a secret condition", span=s.span
                )
            return [_masked_assign(guard, s.target, s.value, self.ana)]
        if isinstance(s, N.If):
            out: list = []
            for x in s.body:
                out.extend(self.mask_one(_conjoin(guard, s.test), x))
            if s.orelse:
                neg = _conjoin(guard, negate_condition(s.test))
                for x in s.orelse:
                    out.extend(self.mask_one(neg, x))
            return out
        if isinstance(s, N.For):
            self.check_bounds(s)
            body: list = []
            for b in s.body:
                body.extend(self.mask_one(guard, b))
            if not body:
                return []
            return [replace_fields(s, body=tuple(body))]
        if isinstance(s, N.While):
            raise RuleError(
                "loop under a secret condition has no oblivious form",
                span=s.span,
            )
        if isinstance(s, (N.ExprStmt, N.Pass)):
            return []  # pure in the canonical subset; no effect to keep
        if isinstance(s, N.Return):
            raise RuleError(
                "return under a secret condition cannot be masked", span=s.span
            )
        raise RuleError(
            "statement cannot be made oblivious", span=getattr(s, "span", None)
        )


def make_oblivious(module: N.Module, clear_params=()) -> N.Module:
    """Replace secret-conditioned branches with arithmetic selection."""
    fn = function_of(module)
    ana = A.analyze(module, clear_params=clear_params)
    new_body = _Obliviator(ana).block(fn.body)
    if new_body == fn.body:
        return module
    return with_function(module, with_body(fn, new_body))
