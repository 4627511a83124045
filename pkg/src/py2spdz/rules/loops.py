"""Loop canonicalization: while-to-for conversion and jump elimination.

Break and continue are removed with guard flags: a fresh boolean flag is
set where the jump fired and every later loop-body effect is wrapped in an
``if not flag`` guard.  The flag only ever moves from False to True inside
one activation (break) or one iteration (continue), which is what makes
re-running the guarded statements safe.
"""

from __future__ import annotations

from .. import analysis as A
from ..errors import RuleError
from ..frontend import nodes as N
from .common import (
    NameGen,
    contains_node,
    function_of,
    replace_fields,
    with_body,
    with_function,
)


# --- while -> for ----------------------------------------------------------


def _match_counter(init_stmt, loop: N.While):
    """Recognize ``i = a`` / ``while i < b`` / trailing ``i = i + s``.

    Returns (var, start, bound, step, body-without-increment) or None.
    """
    if not (
        isinstance(init_stmt, N.Assign)
        and isinstance(init_stmt.target, N.Name)
    ):
        return None
    var = init_stmt.target.id
    test = loop.test
    if not (
        isinstance(test, N.Compare)
        and len(test.ops) == 1
        and test.ops[0] in ("<", "<=")
        and isinstance(test.left, N.Name)
        and test.left.id == var
    ):
        return None
    bound = test.comparators[0]
    if not loop.body:
        return None
    last = loop.body[-1]
    step = _increment_of(last, var)
    if step is None:
        return None
    body = loop.body[:-1]
    # The counter must not be written anywhere else in the body, and the
    # bound must not depend on anything the body assigns.
    for s in body:
        if contains_node(s, (N.Break, N.Continue)):
            return None
        for n in s.walk():
            if isinstance(n, N.Assign) and isinstance(n.target, N.Name):
                if n.target.id == var:
                    return None
            if isinstance(n, N.AugAssign) and isinstance(n.target, N.Name):
                if n.target.id == var:
                    return None
            if isinstance(n, N.For) and n.var == var:
                return None
    bound_names = {x.id for x in bound.walk() if isinstance(x, N.Name)}
    assigned = set()
    for s in body:
        for n in s.walk():
            if isinstance(n, (N.Assign, N.AugAssign)) and isinstance(
                n.target, N.Name
            ):
                assigned.add(n.target.id)
    if bound_names & assigned:
        return None
    return var, init_stmt.value, bound, step, body


def _increment_of(stmt, var: str):
    """The positive literal step if ``stmt`` is ``var += s``/``var = var + s``."""
    if isinstance(stmt, N.AugAssign):
        if (
            isinstance(stmt.target, N.Name)
            and stmt.target.id == var
            and stmt.op == "+"
            and isinstance(stmt.value, N.Num)
            and isinstance(stmt.value.value, int)
            and stmt.value.value >= 1
        ):
            return stmt.value.value
        return None
    if isinstance(stmt, N.Assign) and isinstance(stmt.target, N.Name):
        if stmt.target.id != var:
            return None
        v = stmt.value
        if (
            isinstance(v, N.BinOp)
            and v.op == "+"
            and isinstance(v.left, N.Name)
            and v.left.id == var
            and isinstance(v.right, N.Num)
            and isinstance(v.right.value, int)
            and v.right.value >= 1
        ):
            return v.right.value
    return None


def _range_for(match, span) -> N.For:
    var, start, bound, step, body = match
    is_zero = isinstance(start, N.Num) and start.value == 0
    if step == 1:
        args = (bound,) if is_zero else (start, bound)
    else:
        args = (start, bound, N.Num(value=step))
    return N.For(
        var=var,
        iter=N.Call(func=N.Name(id="range"), args=args),
        body=body,
        span=span,
    )


def _name_reads(node, var: str) -> int:
    return sum(
        1
        for n in node.walk()
        if isinstance(n, N.Name) and n.id == var
    )


def rewrite_while(module: N.Module, clear_params=()) -> N.Module:
    """Convert counter-style whiles to for-range; reject secret conditions."""
    fn = function_of(module)
    ana = A.analyze(module, clear_params=clear_params)

    def counter_escapes(init, loop, var: str) -> bool:
        """The counter value is observable after the loop, where a for-range
        leaves it one step earlier than the while form did."""
        inside = _name_reads(init, var) + _name_reads(loop, var)
        return _name_reads(fn, var) > inside

    def rewrite_block(stmts) -> tuple:
        out: list = []
        for s in stmts:
            if isinstance(s, N.While):
                original = s
                s = replace_fields(s, body=rewrite_block(s.body))
                match = out and _match_counter(out[-1], s)
                if (
                    match
                    and not ana.is_secret(match[2])
                    and not counter_escapes(out[-1], original, match[0])
                ):
                    # A while with <= needs an inclusive upper bound.
                    var, start, bound, step, body = match
                    if s.test.ops[0] == "<=":
                        bound = N.BinOp(left=bound, op="+", right=N.Num(value=1))
                    out.pop()
                    out.append(_range_for((var, start, bound, step, body), s.span))
                    continue
                if ana.is_secret(s.test):
                    raise RuleError(
                        "secret-conditioned while with no static bound",
                        span=s.span,
                    )
                out.append(s)
            elif isinstance(s, N.If):
                out.append(
                    replace_fields(
                        s,
                        body=rewrite_block(s.body),
                        orelse=rewrite_block(s.orelse),
                    )
                )
            elif isinstance(s, N.For):
                out.append(replace_fields(s, body=rewrite_block(s.body)))
            else:
                out.append(s)
        return tuple(out)

    new_body = rewrite_block(fn.body)
    if new_body == fn.body:
        return module
    return with_function(module, with_body(fn, new_body))


# --- break / continue elimination ------------------------------------------


def _replace_jumps(stmts, jump_type, flag: str) -> tuple:
    """Swap each jump for a flag-set, dropping unreachable trailing code.

    Recurses through if branches but never into nested loops, whose jumps
    belong to them.
    """
    out: list = []
    for s in stmts:
        if isinstance(s, jump_type):
            out.append(
                N.Assign(target=N.Name(id=flag), value=N.Bool(value=True),
                         span=s.span)
            )
            break  # anything after an unconditional jump is unreachable
        if isinstance(s, N.If):
            s = replace_fields(
                s,
                body=_replace_jumps(s.body, jump_type, flag),
                orelse=_replace_jumps(s.orelse, jump_type, flag),
            )
        out.append(s)
    return tuple(out)


def _sets_flag(stmt, flag: str) -> bool:
    """Does ``stmt`` (possibly via if branches) assign the flag?"""
    if isinstance(stmt, N.Assign) and isinstance(stmt.target, N.Name):
        if stmt.target.id == flag:
            return True
    if isinstance(stmt, N.If):
        return any(_sets_flag(s, flag) for s in stmt.body) or any(
            _sets_flag(s, flag) for s in stmt.orelse
        )
    return False


def _guard_block(stmts, flag: str) -> tuple:
    """Wrap runs of flag-free statements in ``if not flag`` guards."""
    out: list = []
    buffer: list = []

    def flush():
        if buffer:
            out.append(
                N.If(
                    test=N.UnaryOp(op="not", operand=N.Name(id=flag)),
                    body=tuple(buffer),
                )
            )
            buffer.clear()

    for s in stmts:
        if _sets_flag(s, flag):
            flush()
            out.append(_guard_setter(s, flag))
        else:
            buffer.append(s)
    flush()
    return tuple(out)


def _guard_setter(stmt, flag: str):
    """Canonicalize a flag-setting statement.

    ``if C: flag = True`` becomes ``flag = flag or C``; mixed branches keep
    the if but get their non-setting statements guarded recursively.
    """
    if isinstance(stmt, N.Assign):
        return stmt
    assert isinstance(stmt, N.If)
    if (
        len(stmt.body) == 1
        and not stmt.orelse
        and isinstance(stmt.body[0], N.Assign)
        and isinstance(stmt.body[0].target, N.Name)
        and stmt.body[0].target.id == flag
        and isinstance(stmt.body[0].value, N.Bool)
        and stmt.body[0].value.value is True
    ):
        value = N.BoolOp(op="or", values=(N.Name(id=flag), stmt.test),
                         span=stmt.span)
        return N.Assign(target=N.Name(id=flag), value=value, span=stmt.span)
    return replace_fields(
        stmt,
        body=_guard_block(stmt.body, flag),
        orelse=_guard_block(stmt.orelse, flag),
    )


def _eliminate_jumps(module: N.Module, jump_type, *, reset_each_iteration):
    fn = function_of(module)
    names = NameGen(fn)

    def process_block(stmts) -> tuple:
        out: list = []
        for s in stmts:
            if isinstance(s, N.If):
                s = replace_fields(
                    s,
                    body=process_block(s.body),
                    orelse=process_block(s.orelse),
                )
                out.append(s)
            elif isinstance(s, (N.For, N.While)):
                s = replace_fields(s, body=process_block(s.body))
                if _block_has_jump(s.body):
                    if isinstance(s, N.While) and not reset_each_iteration:
                        raise RuleError(
                            "break inside a while loop has no bounded form",
                            span=s.span,
                        )
                    flag = names.flag()
                    body = _replace_jumps(s.body, jump_type, flag)
                    body = _guard_block(body, flag)
                    reset = N.Assign(
                        target=N.Name(id=flag), value=N.Bool(value=False)
                    )
                    if reset_each_iteration:
                        out.append(replace_fields(s, body=(reset,) + body))
                    else:
                        out.append(reset)
                        out.append(replace_fields(s, body=body))
                else:
                    out.append(s)
            else:
                out.append(s)
        return tuple(out)

    def _block_has_jump(stmts) -> bool:
        return any(
            contains_node(x, jump_type, stop_at=(N.For, N.While))
            for x in stmts
        )

    new_body = process_block(fn.body)
    if new_body == fn.body:
        return module
    return with_function(module, with_body(fn, new_body))


def eliminate_break(module: N.Module, clear_params=()) -> N.Module:
    """Remove break statements via a per-loop stop flag."""
    return _eliminate_jumps(module, N.Break, reset_each_iteration=False)


def eliminate_continue(module: N.Module, clear_params=()) -> N.Module:
    """Remove continue statements via a per-iteration skip flag."""
    return _eliminate_jumps(module, N.Continue, reset_each_iteration=True)
