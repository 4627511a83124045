"""Container-method and advanced-array-operation lowering.

``lower_data_structures`` turns build-by-append into preallocated arrays
with indexed writes, the only dynamic-container idiom with a statically
derivable length.  ``lower_array_ops`` expands slices, reductions,
``where``/``clip`` and array-valued ufunc calls into explicit scalar
loops; primitive creations (``zeros``/``ones``/``arange``) stay.
"""

from __future__ import annotations

from .. import analysis as A
from ..errors import RuleError
from ..frontend import nodes as N
from ..frontend.subset import LIST_METHODS
from .common import (
    NameGen,
    function_of,
    map_child_exprs,
    replace_fields,
    with_body,
    with_function,
)

# --- shared expression builders ---------------------------------------------


def _name(s: str) -> N.Name:
    return N.Name(id=s)


def _num(v) -> N.Num:
    return N.Num(value=v)


def _call(func: N.Expr, *args: N.Expr) -> N.Call:
    return N.Call(func=func, args=tuple(args))


def _np(attr: str) -> N.Attribute:
    return N.Attribute(value=_name("numpy"), attr=attr)


def _len_of(e: N.Expr) -> N.Expr:
    return _call(_name("len"), e)


def _range_of(*args: N.Expr) -> N.Expr:
    return _call(_name("range"), *args)


def _zeros(length: N.Expr) -> N.Expr:
    return _call(_np("zeros"), length)


def _add(a: N.Expr, b: N.Expr) -> N.Expr:
    if isinstance(a, N.Num) and a.value == 0:
        return b
    if isinstance(b, N.Num) and b.value == 0:
        return a
    return N.BinOp(left=a, op="+", right=b)


def _sub(a: N.Expr, b: N.Expr) -> N.Expr:
    if isinstance(b, N.Num) and b.value == 0:
        return a
    return N.BinOp(left=a, op="-", right=b)


def _at(arr: N.Expr, idx: N.Expr) -> N.Subscript:
    return N.Subscript(value=arr, index=idx)


def _int_literal(e) -> int | None:
    """Integer value of a literal, folding a leading unary minus."""
    if isinstance(e, N.Num) and isinstance(e.value, int):
        return e.value
    if (
        isinstance(e, N.UnaryOp)
        and e.op == "-"
        and isinstance(e.operand, N.Num)
        and isinstance(e.operand.value, int)
    ):
        return -e.operand.value
    return None


GROWTH_ERROR = "dynamic container growth not derivable"


# --- lower_data_structures ---------------------------------------------------


class _Offset:
    """A running symbolic length: an integer plus expression terms."""

    def __init__(self):
        self.count = 0
        self.terms: list[N.Expr] = []

    def bump(self, n: int = 1) -> None:
        self.count += n

    def add_expr(self, e: N.Expr) -> None:
        self.terms.append(e)

    def expr(self) -> N.Expr:
        out: N.Expr = _num(self.count)
        for t in self.terms:
            out = _add(out, t)
        return out


def _append_of(stmt, name: str):
    """The appended value if ``stmt`` is ``name.append(E)``, else None."""
    if not isinstance(stmt, N.ExprStmt):
        return None
    call = stmt.value
    if (
        isinstance(call, N.Call)
        and isinstance(call.func, N.Attribute)
        and call.func.attr == "append"
        and isinstance(call.func.value, N.Name)
        and call.func.value.id == name
        and len(call.args) == 1
    ):
        return call.args[0]
    return None


def _append_calls(node, name: str) -> list:
    return [
        n
        for n in node.walk()
        if isinstance(n, N.Call)
        and isinstance(n.func, N.Attribute)
        and n.func.attr == "append"
        and isinstance(n.func.value, N.Name)
        and n.func.value.id == name
    ]


def _append_counts(stmts, name: str) -> set:
    """Possible numbers of appends to ``name`` along control paths."""
    counts = {0}
    for s in stmts:
        if _append_of(s, name) is not None:
            counts = {c + 1 for c in counts}
        elif isinstance(s, N.If):
            arm = _append_counts(s.body, name) | _append_counts(s.orelse, name)
            counts = {c + a for c in counts for a in arm}
        elif isinstance(s, (N.For, N.While)):
            if _append_counts(s.body, name) != {0}:
                raise RuleError(GROWTH_ERROR, span=s.span)
    return counts


def _replace_appends(stmts, name: str, target: N.Subscript, recurse) -> tuple:
    out: list = []
    for s in stmts:
        value = _append_of(s, name)
        if value is not None:
            out.append(N.Assign(target=target, value=value, span=s.span))
        elif isinstance(s, N.If):
            out.append(
                replace_fields(
                    s,
                    body=_replace_appends(s.body, name, target, recurse),
                    orelse=_replace_appends(s.orelse, name, target, recurse),
                )
            )
        else:
            out.append(recurse(s))
    return tuple(out)


def _loop_append(stmt, name: str):
    """Match a for-range loop appending to ``name`` exactly once on every
    control path, so the trip count is the growth.

    Returns (trip_count_expr, normalized_index_fn, loop) or None when the
    loop never appends; a loop that grows ``name`` any other way raises.
    """
    if not (isinstance(stmt, N.For) and N.is_range_call(stmt.iter)):
        return None
    if not _append_calls(stmt, name):
        return None  # the loop only reads the list; the build is over
    if _append_counts(stmt.body, name) != {1}:
        raise RuleError(GROWTH_ERROR, span=stmt.span)
    args = stmt.iter.args
    if len(args) == 1:
        trip, start = args[0], _num(0)
    elif len(args) == 2:
        trip, start = _sub(args[1], args[0]), args[0]
    else:
        raise RuleError(GROWTH_ERROR, span=stmt.span)
    var = _name(stmt.var)

    def index(offset: N.Expr) -> N.Expr:
        return _add(offset, _sub(var, start))

    return trip, index, stmt


def _check_build_uses(stmt, name: str) -> None:
    """During the build region, ``name`` may only be appended to or
    indexed; aggregate reads (len, sum, whole-array args) see the final
    preallocated length and would lie."""

    def walk(node):
        for child in node.children():
            exempt = (isinstance(node, N.Subscript) and child is node.value) or (
                isinstance(node, N.Attribute)
                and node.attr == "append"
                and child is node.value
            )
            if isinstance(child, N.Name) and child.id == name and not exempt:
                raise RuleError(GROWTH_ERROR, span=child.span)
            walk(child)

    walk(stmt)


def lower_data_structures(module: N.Module, clear_params=()) -> N.Module:
    """Preallocate build-by-append lists; reject underivable mutations."""
    fn = function_of(module)

    def block(stmts) -> tuple:
        out: list = []
        i = 0
        stmts = list(stmts)
        while i < len(stmts):
            s = stmts[i]
            if (
                isinstance(s, N.Assign)
                and isinstance(s.target, N.Name)
                and isinstance(s.value, N.ListLit)
            ):
                consumed, repl = _collect_build(stmts, i, s.target.id)
                if consumed:
                    out.extend(repl)
                    i += consumed
                    continue
            out.append(_recurse(s))
            i += 1
        return tuple(out)

    def _recurse(s):
        if isinstance(s, N.If):
            return replace_fields(s, body=block(s.body), orelse=block(s.orelse))
        if isinstance(s, (N.For, N.While)):
            return replace_fields(s, body=block(s.body))
        return s

    def _collect_build(stmts, start: int, name: str):
        creation = stmts[start]
        writes: list = []  # replacement statements after the allocation
        offset = _Offset()
        for k, e in enumerate(creation.value.elements):
            writes.append(N.Assign(target=_at(_name(name), _num(k)), value=e))
        offset.bump(len(creation.value.elements))
        j = start + 1
        while j < len(stmts):
            s = stmts[j]
            value = _append_of(s, name)
            if value is not None:
                _check_build_uses(s, name)
                writes.append(
                    N.Assign(target=_at(_name(name), offset.expr()), value=value)
                )
                offset.bump()
                j += 1
                continue
            loop = _loop_append(s, name)
            if loop is not None:
                trip, index_fn, loop_stmt = loop
                _check_build_uses(loop_stmt, name)
                target = _at(_name(name), index_fn(offset.expr()))
                new_body = _replace_appends(
                    loop_stmt.body, name, target, _recurse
                )
                rebuilt = replace_fields(loop_stmt, body=new_body)
                if _append_calls(rebuilt, name):
                    raise RuleError(GROWTH_ERROR, span=loop_stmt.span)
                writes.append(rebuilt)
                offset.add_expr(trip)
                j += 1
                continue
            break
        alloc = N.Assign(
            target=_name(name), value=_zeros(offset.expr()), span=creation.span
        )
        return j - start, [alloc] + writes

    new_body = block(fn.body)
    new_fn = with_body(fn, new_body)

    # Any surviving container-method call is not derivable.
    for node in new_fn.walk():
        if (
            isinstance(node, N.Call)
            and isinstance(node.func, N.Attribute)
            and node.func.attr in LIST_METHODS
        ):
            base = N.dotted_name(node.func.value)
            if base in ("math", "numpy"):
                continue
            if node.func.attr in ("index", "count"):
                raise RuleError(
                    f"list.{node.func.attr} has no canonical form",
                    span=node.span,
                )
            raise RuleError(GROWTH_ERROR, span=node.span)

    if new_body == fn.body:
        return module
    return with_function(module, new_fn)


# --- lower_array_ops ---------------------------------------------------------


UFUNCS_1 = {"exp", "exp2", "expm1", "log", "log1p", "log2", "log10", "sqrt", "abs"}
UFUNCS_2 = {"power", "logaddexp", "logaddexp2"}


class _ArrayLowerer:
    def __init__(self, fn: N.FunctionDef, ana: A.Analysis):
        self.names = NameGen(fn)
        self.ana = ana

    def is_array(self, e: N.Expr) -> bool:
        return self.ana.expr_info(e).shape in ("array", "matrix")

    def block(self, stmts) -> tuple:
        out: list = []
        for s in stmts:
            prelude: list = []
            s = self.stmt(s, prelude)
            out.extend(prelude)
            out.append(s)
        return tuple(out)

    def stmt(self, s, prelude):
        if isinstance(s, N.If):
            return N.If(
                test=self.expr(s.test, prelude),
                body=self.block(s.body),
                orelse=self.block(s.orelse),
                span=s.span,
            )
        if isinstance(s, N.While):
            return N.While(
                test=self.expr(s.test, prelude, hoist=False),
                body=self.block(s.body),
                span=s.span,
            )
        if isinstance(s, N.For):
            return N.For(
                var=s.var,
                iter=self.expr(s.iter, prelude),
                body=self.block(s.body),
                span=s.span,
            )
        return map_child_exprs(s, lambda e: self.expr(e, prelude))

    def fresh(self, prelude, value: N.Expr, span=None) -> N.Name:
        tmp = _name(self.names.temp())
        prelude.append(N.Assign(target=tmp, value=value,
                                span=span or N.SYNTHETIC))
        return tmp

    def simple(self, e: N.Expr, prelude) -> N.Expr:
        """Arrange for ``e`` to be evaluated exactly once."""
        if isinstance(e, (N.Name, N.Num, N.Bool)):
            return e
        return self.fresh(prelude, e)

    def expr(self, e: N.Expr, prelude, hoist=True) -> N.Expr:
        e = map_child_exprs(e, lambda c: self.expr(c, prelude, hoist))
        lowered = self.lower_site(e, prelude, hoist)
        return e if lowered is None else lowered

    def lower_site(self, e, prelude, hoist):
        if isinstance(e, N.Subscript):
            if isinstance(e.index, N.SliceExpr):
                return self.lower_slice(e, prelude, hoist)
            if self.is_array(e.index):
                raise RuleError(
                    "integer-array indexing is not supported", span=e.span
                )
            return None
        if not isinstance(e, N.Call):
            return None
        name = N.dotted_name(e.func)
        if name in ("sum", "min", "max") and len(e.args) == 1:
            return self.lower_reduction(name, e, prelude, hoist)
        if name in ("numpy.sum", "numpy.min", "numpy.max") and len(e.args) == 1:
            return self.lower_reduction(name.split(".")[1], e, prelude, hoist)
        if name == "numpy.dot":
            return self.lower_dot(e, prelude, hoist)
        if name == "numpy.where":
            return self.lower_where(e, prelude, hoist)
        if name == "numpy.clip":
            return self.lower_clip(e, prelude, hoist)
        if name and name.startswith("numpy."):
            final = name.split(".", 1)[1]
            arity = len(e.args)
            if (final in UFUNCS_1 and arity == 1) or (
                final in UFUNCS_2 and arity == 2
            ):
                if any(self.is_array(a) for a in e.args):
                    return self.lower_ufunc(final, e, prelude, hoist)
        return None

    def _need_hoist(self, e, hoist):
        if not hoist:
            raise RuleError(
                "array operation in a while condition", span=e.span
            )

    def lower_reduction(self, kind: str, e: N.Call, prelude, hoist):
        self._need_hoist(e, hoist)
        arr = self.simple(e.args[0], prelude)
        idx = _name(self.names.temp())
        acc = _name(self.names.temp())
        elem = _at(arr, idx)
        if kind == "sum":
            prelude.append(N.Assign(target=acc, value=_num(0), span=e.span))
            body = N.Assign(target=acc, value=_add(acc, elem))
            loop_range = _range_of(_len_of(arr))
        else:
            prelude.append(
                N.Assign(target=acc, value=_at(arr, _num(0)), span=e.span)
            )
            body = N.Assign(
                target=acc, value=_call(_name(kind), acc, elem)
            )
            loop_range = _range_of(_num(1), _len_of(arr))
        prelude.append(
            N.For(var=idx.id, iter=loop_range, body=(body,), span=e.span)
        )
        return acc

    def lower_dot(self, e: N.Call, prelude, hoist):
        self._need_hoist(e, hoist)
        a = self.simple(e.args[0], prelude)
        b = self.simple(e.args[1], prelude)
        idx = _name(self.names.temp())
        acc = _name(self.names.temp())
        prelude.append(N.Assign(target=acc, value=_num(0), span=e.span))
        term = N.BinOp(left=_at(a, idx), op="*", right=_at(b, idx))
        prelude.append(
            N.For(
                var=idx.id,
                iter=_range_of(_len_of(a)),
                body=(N.Assign(target=acc, value=_add(acc, term)),),
                span=e.span,
            )
        )
        return acc

    def _broadcast(self, arg: N.Expr, idx: N.Name) -> N.Expr:
        return _at(arg, idx) if self.is_array(arg) else arg

    def lower_where(self, e: N.Call, prelude, hoist):
        cond, yes, no = e.args
        if not self.is_array(cond):
            c = cond
            one_minus = N.BinOp(left=_num(1), op="-", right=c)
            return N.BinOp(
                left=N.BinOp(left=c, op="*", right=yes),
                op="+",
                right=N.BinOp(left=one_minus, op="*", right=no),
            )
        self._need_hoist(e, hoist)
        cond = self.simple(cond, prelude)
        yes = self.simple(yes, prelude)
        no = self.simple(no, prelude)
        res = self.fresh(prelude, _zeros(_len_of(cond)), span=e.span)
        idx = _name(self.names.temp())
        c = _at(cond, idx)
        pick = N.BinOp(
            left=N.BinOp(left=c, op="*", right=self._broadcast(yes, idx)),
            op="+",
            right=N.BinOp(
                left=N.BinOp(left=_num(1), op="-", right=c),
                op="*",
                right=self._broadcast(no, idx),
            ),
        )
        prelude.append(
            N.For(
                var=idx.id,
                iter=_range_of(_len_of(cond)),
                body=(N.Assign(target=_at(res, idx), value=pick),),
                span=e.span,
            )
        )
        return res

    def lower_clip(self, e: N.Call, prelude, hoist):
        value, lo, hi = e.args
        clipped = lambda v, l, h: _call(  # noqa: E731  - tiny local builder
            _name("min"), _call(_name("max"), v, l), h
        )
        if not self.is_array(value):
            return clipped(value, lo, hi)
        self._need_hoist(e, hoist)
        value = self.simple(value, prelude)
        lo = self.simple(lo, prelude)
        hi = self.simple(hi, prelude)
        res = self.fresh(prelude, _zeros(_len_of(value)), span=e.span)
        idx = _name(self.names.temp())
        prelude.append(
            N.For(
                var=idx.id,
                iter=_range_of(_len_of(value)),
                body=(
                    N.Assign(
                        target=_at(res, idx),
                        value=clipped(
                            _at(value, idx),
                            self._broadcast(lo, idx),
                            self._broadcast(hi, idx),
                        ),
                    ),
                ),
                span=e.span,
            )
        )
        return res

    def lower_ufunc(self, final: str, e: N.Call, prelude, hoist):
        self._need_hoist(e, hoist)
        args = [self.simple(a, prelude) for a in e.args]
        lead = next(a for a in args if self.is_array(a))
        res = self.fresh(prelude, _zeros(_len_of(lead)), span=e.span)
        idx = _name(self.names.temp())
        call = _call(_np(final), *(self._broadcast(a, idx) for a in args))
        prelude.append(
            N.For(
                var=idx.id,
                iter=_range_of(_len_of(lead)),
                body=(N.Assign(target=_at(res, idx), value=call),),
                span=e.span,
            )
        )
        return res

    def lower_slice(self, e: N.Subscript, prelude, hoist):
        self._need_hoist(e, hoist)
        arr = self.simple(e.value, prelude)
        sl: N.SliceExpr = e.index
        for bound in (sl.lower, sl.upper):
            if _int_literal(bound) is not None and _int_literal(bound) < 0:
                raise RuleError(
                    "negative slice bounds are not supported", span=e.span
                )
        if sl.step is None:
            stride = 1
        else:
            stride = _int_literal(sl.step)
            if stride is None:
                raise RuleError("slice step must be a literal", span=e.span)
            if stride == 0:
                raise RuleError("slice step cannot be zero", span=e.span)
        idx = _name(self.names.temp())
        if stride == -1:
            if sl.lower is not None or sl.upper is not None:
                raise RuleError(
                    "only full reversal is supported for negative steps",
                    span=e.span,
                )
            length = _len_of(arr)
            src = _at(arr, _sub(_sub(_len_of(arr), _num(1)), idx))
        elif stride < 0:
            raise RuleError(
                "only full reversal is supported for negative steps",
                span=e.span,
            )
        else:
            lo = sl.lower if sl.lower is not None else _num(0)
            hi = sl.upper if sl.upper is not None else _len_of(arr)
            span_len = _sub(hi, lo)
            if stride == 1:
                length = span_len
                src = _at(arr, _add(lo, idx))
            else:
                length = N.BinOp(
                    left=_add(span_len, _num(stride - 1)),
                    op="//",
                    right=_num(stride),
                )
                src = _at(
                    arr,
                    _add(lo, N.BinOp(left=idx, op="*", right=_num(stride))),
                )
        length = self.simple(length, prelude)
        res = self.fresh(prelude, _zeros(length), span=e.span)
        prelude.append(
            N.For(
                var=idx.id,
                iter=_range_of(length),
                body=(N.Assign(target=_at(res, idx), value=src),),
                span=e.span,
            )
        )
        return res


def lower_array_ops(module: N.Module, clear_params=()) -> N.Module:
    """Expand slices, reductions, where/clip and array ufuncs to loops."""
    fn = function_of(module)
    ana = A.analyze(module, clear_params=clear_params)
    lowerer = _ArrayLowerer(fn, ana)
    new_body = lowerer.block(fn.body)
    if new_body == fn.body:
        return module
    return with_function(module, with_body(fn, new_body))
