"""Syntax-sugar elimination and chained-comparison splitting.

Both passes rewrite statements in place, hoisting helper statements in
front of the statement that needed them.  Hoisting is forbidden inside a
``while`` condition (it would be evaluated once instead of per-iteration),
so those positions fall back to hoist-free forms where one exists and
raise :class:`RuleError` where it does not.
"""

from __future__ import annotations

from .. import analysis as A
from ..errors import RuleError
from ..frontend import nodes as N
from .common import (
    NameGen,
    expand_augassign,
    function_of,
    map_child_exprs,
    mask_pair,
    with_body,
    with_function,
)


def _len_call(arr: N.Expr) -> N.Expr:
    return N.Call(func=N.Name(id="len"), args=(arr,))


def _range_call(*args: N.Expr) -> N.Expr:
    return N.Call(func=N.Name(id="range"), args=tuple(args))


def _zeros_call(length: N.Expr) -> N.Expr:
    func = N.Attribute(value=N.Name(id="numpy"), attr="zeros")
    return N.Call(func=func, args=(length,))


class _Desugarer:
    def __init__(self, fn: N.FunctionDef, ana: A.Analysis):
        self.names = NameGen(fn)
        self.ana = ana

    def block(self, stmts) -> tuple:
        out = []
        for s in stmts:
            out.extend(self.stmt(s))
        return tuple(out)

    def stmt(self, s) -> list:
        prelude: list = []
        if isinstance(s, N.AugAssign):
            return self.stmt(expand_augassign(s))
        if isinstance(s, N.Assign):
            if isinstance(s.target, N.TupleLit):
                return self._tuple_assign(s)
            if isinstance(s.value, N.ListComp) and isinstance(s.target, N.Name):
                return self._comprehension(s.target.id, s.value)
            if isinstance(s.value, N.Ternary) and not self.ana.is_secret(
                s.value.test
            ):
                return self._clear_ternary_assign(s.target, s.value)
            value = self.expr(s.value, prelude)
            target = self.expr(s.target, prelude)
            return prelude + [
                N.Assign(target=target, value=value, span=s.span)
            ]
        if isinstance(s, N.Return):
            if s.value is not None and isinstance(s.value, N.Ternary) and not (
                self.ana.is_secret(s.value.test)
            ):
                test = self.expr(s.value.test, prelude)
                then = self.stmt(N.Return(value=s.value.body, span=s.span))
                other = self.stmt(N.Return(value=s.value.orelse, span=s.span))
                return prelude + [
                    N.If(test=test, body=tuple(then), orelse=tuple(other),
                         span=s.span)
                ]
            value = (
                None if s.value is None else self.expr(s.value, prelude)
            )
            return prelude + [N.Return(value=value, span=s.span)]
        if isinstance(s, N.ExprStmt):
            value = self.expr(s.value, prelude)
            return prelude + [N.ExprStmt(value=value, span=s.span)]
        if isinstance(s, N.If):
            test = self.expr(s.test, prelude)
            return prelude + [
                N.If(
                    test=test,
                    body=self.block(s.body),
                    orelse=self.block(s.orelse),
                    span=s.span,
                )
            ]
        if isinstance(s, N.While):
            test = self.expr(s.test, prelude, hoist=False)
            if prelude:
                raise RuleError(
                    "cannot desugar inside a while condition", span=s.span
                )
            return [N.While(test=test, body=self.block(s.body), span=s.span)]
        if isinstance(s, N.For):
            return self._for(s)
        return [s]

    def _tuple_assign(self, s: N.Assign) -> list:
        targets = s.target.elements
        values = s.value.elements if isinstance(s.value, N.TupleLit) else ()
        if len(targets) != len(values):
            raise RuleError("tuple assignment arity mismatch", span=s.span)
        if (
            len(targets) == 2
            and all(isinstance(t, N.Name) for t in targets)
            and all(isinstance(v, N.Name) for v in values)
            and targets[0].id == values[1].id
            and targets[1].id == values[0].id
        ):
            tmp = N.Name(id=self.names.temp())
            return [
                N.Assign(target=tmp, value=targets[0], span=s.span),
                N.Assign(target=targets[0], value=values[0], span=s.span),
                N.Assign(target=targets[1], value=tmp, span=s.span),
            ]
        prelude: list = []
        temps = []
        for v in values:
            tmp = N.Name(id=self.names.temp())
            prelude.append(
                N.Assign(target=tmp, value=self.expr(v, prelude), span=s.span)
            )
            temps.append(tmp)
        for t, tmp in zip(targets, temps):
            prelude.append(N.Assign(target=t, value=tmp, span=s.span))
        return prelude

    def _clear_ternary_assign(self, target, tern: N.Ternary) -> list:
        prelude: list = []
        test = self.expr(tern.test, prelude)
        then = self.stmt(N.Assign(target=target, value=tern.body))
        other = self.stmt(N.Assign(target=target, value=tern.orelse))
        return prelude + [
            N.If(test=test, body=tuple(then), orelse=tuple(other),
                 span=tern.span)
        ]

    def _comprehension(self, target: str, comp: N.ListComp) -> list:
        prelude: list = []
        tail = self._expand_comp(comp, N.Name(id=target), prelude)
        return prelude + tail

    def _expand_comp(self, comp: N.ListComp, result: N.Name, prelude) -> list:
        """Statements materializing ``comp`` into ``result``."""
        if N.is_range_call(comp.iter):
            args = [self.expr(a, prelude) for a in comp.iter.args]
            if len(args) == 1:
                length = args[0]
                loop_var = comp.var
                binding: list = []
                index: N.Expr = N.Name(id=comp.var)
            elif len(args) == 2:
                length = N.BinOp(left=args[1], op="-", right=args[0])
                loop_var = self.names.temp()
                index = N.Name(id=loop_var)
                binding = [
                    N.Assign(
                        target=N.Name(id=comp.var),
                        value=N.BinOp(left=args[0], op="+", right=index),
                    )
                ]
            else:
                raise RuleError(
                    "comprehension over a stepped range is not supported",
                    span=comp.span,
                )
        else:
            seq = self.expr(comp.iter, prelude)
            if not isinstance(seq, N.Name):
                tmp = N.Name(id=self.names.temp())
                prelude.append(N.Assign(target=tmp, value=seq))
                seq = tmp
            length = _len_call(seq)
            loop_var = self.names.temp()
            index = N.Name(id=loop_var)
            binding = [
                N.Assign(
                    target=N.Name(id=comp.var),
                    value=N.Subscript(value=seq, index=index),
                )
            ]
        write = N.Assign(
            target=N.Subscript(value=result, index=index), value=comp.expr
        )
        loop = N.For(
            var=loop_var,
            iter=_range_call(length),
            body=tuple(binding + [write]),
            span=comp.span,
        )
        alloc = N.Assign(target=result, value=_zeros_call(length), span=comp.span)
        return [alloc] + self.stmt(loop)

    def _for(self, s: N.For) -> list:
        prelude: list = []
        if N.is_range_call(s.iter):
            iter_expr = self.expr(s.iter, prelude)
            return prelude + [
                N.For(var=s.var, iter=iter_expr, body=self.block(s.body),
                      span=s.span)
            ]
        seq = self.expr(s.iter, prelude)
        if not isinstance(seq, N.Name):
            tmp = N.Name(id=self.names.temp())
            prelude.append(N.Assign(target=tmp, value=seq, span=s.span))
            seq = tmp
        idx = self.names.temp()
        binding = N.Assign(
            target=N.Name(id=s.var),
            value=N.Subscript(value=seq, index=N.Name(id=idx)),
            span=s.span,
        )
        body = (binding,) + self.block(s.body)
        return prelude + [
            N.For(
                var=idx,
                iter=_range_call(_len_call(seq)),
                body=body,
                span=s.span,
            )
        ]

    def expr(self, e: N.Expr, prelude, hoist=True) -> N.Expr:
        e = map_child_exprs(e, lambda c: self.expr(c, prelude, hoist))
        if isinstance(e, N.Ternary):
            if self.ana.is_secret(e.test) or not hoist:
                return mask_pair(e.test, e.body, e.orelse)
            tmp = N.Name(id=self.names.temp())
            prelude.append(
                N.If(
                    test=e.test,
                    body=(N.Assign(target=tmp, value=e.body),),
                    orelse=(N.Assign(target=tmp, value=e.orelse),),
                    span=e.span,
                )
            )
            return tmp
        if isinstance(e, N.ListComp):
            if not hoist:
                raise RuleError(
                    "cannot desugar a comprehension here", span=e.span
                )
            tmp = N.Name(id=self.names.temp())
            prelude.extend(self._expand_comp(e, tmp, prelude))
            return tmp
        return e


def desugar_syntax(module: N.Module, clear_params=()) -> N.Module:
    """Expand ternaries, comprehensions, tuple targets, sequence loops and
    augmented assignments."""
    fn = function_of(module)
    ana = A.analyze(module, clear_params=clear_params)
    desugarer = _Desugarer(fn, ana)
    new_body = desugarer.block(fn.body)
    if new_body == fn.body:
        return module
    return with_function(module, with_body(fn, new_body))


_ATOMIC = (N.Name, N.Num, N.Bool)


def _needs_hoist(e: N.Expr) -> bool:
    return any(isinstance(n, N.Call) for n in e.walk())


class _ChainSplitter:
    def __init__(self, fn: N.FunctionDef):
        self.names = NameGen(fn)

    def block(self, stmts) -> tuple:
        out = []
        for s in stmts:
            prelude: list = []
            s = self._stmt(s, prelude)
            out.extend(prelude)
            out.append(s)
        return tuple(out)

    def _stmt(self, s, prelude):
        if isinstance(s, N.If):
            return N.If(
                test=self._expr(s.test, prelude),
                body=self.block(s.body),
                orelse=self.block(s.orelse),
                span=s.span,
            )
        if isinstance(s, N.While):
            return N.While(
                test=self._expr(s.test, prelude, hoist=False),
                body=self.block(s.body),
                span=s.span,
            )
        if isinstance(s, N.For):
            return N.For(
                var=s.var,
                iter=self._expr(s.iter, prelude),
                body=self.block(s.body),
                span=s.span,
            )
        return map_child_exprs(s, lambda e: self._expr(e, prelude))

    def _expr(self, e, prelude, hoist=True):
        e = map_child_exprs(e, lambda c: self._expr(c, prelude, hoist))
        if isinstance(e, N.Compare) and len(e.ops) > 1:
            operands = [e.left, *e.comparators]
            fixed = [operands[0]]
            for mid in operands[1:-1]:
                if hoist and not isinstance(mid, _ATOMIC) and _needs_hoist(mid):
                    tmp = N.Name(id=self.names.temp())
                    prelude.append(N.Assign(target=tmp, value=mid))
                    fixed.append(tmp)
                else:
                    fixed.append(mid)
            fixed.append(operands[-1])
            parts = tuple(
                N.Compare(
                    left=fixed[i],
                    ops=(e.ops[i],),
                    comparators=(fixed[i + 1],),
                    span=e.span,
                )
                for i in range(len(e.ops))
            )
            return N.BoolOp(op="and", values=parts, span=e.span)
        return e


def split_chained_comparisons(module: N.Module, clear_params=()) -> N.Module:
    """Turn k-ary comparison chains into conjunctions of binary ones."""
    fn = function_of(module)
    new_body = _ChainSplitter(fn).block(fn.body)
    if new_body == fn.body:
        return module
    return with_function(module, with_body(fn, new_body))
