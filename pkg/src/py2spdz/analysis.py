"""Flow-insensitive secrecy and shape inference.

Parameters are secret unless named in ``clear_params`` (there is no
syntax for clearness; the corpus entry supplies it).  Literals are
clear.  Secrecy joins upward through every operator, and a comparison
whose operands involve a secret yields a secret bit.  Loop variables of
``range`` loops are clear integers.

The analysis is a fixpoint over variable assignments, so a variable
that is ever assigned a secret value counts as secret everywhere.  That
over-approximation is sound for the rewrites built on top: it can only
make the pipeline treat more branches as secret-conditioned.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from .frontend import (
    Assign, Attribute, AugAssign, BinOp, Bool, BoolOp, Call, Compare,
    ExprStmt, For, FunctionDef, If, ListComp, ListLit, Module, Name, Num,
    Return, SliceExpr, Str, Subscript, Ternary, TupleLit, UnaryOp, While,
    dotted_name, is_range_call, single_function,
)

_KIND_ORDER = {"unknown": 0, "bool": 1, "int": 2, "float": 3}


@dataclass(frozen=True)
class ValInfo:
    """Join-semilattice fact about a value."""

    secret: bool = False
    kind: str = "unknown"  # bool < int < float
    shape: str = "scalar"  # scalar | array | matrix | range
    elem: "ValInfo | None" = None

    def join(self, other: "ValInfo") -> "ValInfo":
        kind = self.kind if _KIND_ORDER[self.kind] >= _KIND_ORDER[other.kind] else other.kind
        # container shapes win over scalar so reassigned temps keep them
        shape = self.shape if self.shape != "scalar" else other.shape
        if self.elem is not None and other.elem is not None:
            elem = self.elem.join(other.elem)
        else:
            elem = self.elem or other.elem
        return ValInfo(secret=self.secret or other.secret, kind=kind, shape=shape, elem=elem)


CLEAR_INT = ValInfo(secret=False, kind="int")
CLEAR_FLOAT = ValInfo(secret=False, kind="float")
CLEAR_BOOL = ValInfo(secret=False, kind="bool")


def _numeric_join(a: ValInfo, b: ValInfo, kind: str | None = None) -> ValInfo:
    out_kind = kind
    if out_kind is None:
        out_kind = a.kind if _KIND_ORDER[a.kind] >= _KIND_ORDER[b.kind] else b.kind
        if out_kind == "bool":
            out_kind = "int"  # arithmetic on bits gives plain ints
    return ValInfo(secret=a.secret or b.secret, kind=out_kind, shape="scalar")


class Analysis:
    """Inference result for one function; query with expr_info/is_secret."""

    def __init__(self, fn: FunctionDef, clear_params=frozenset(), param_kinds=None):
        self.fn = fn
        self.clear_params = frozenset(clear_params)
        self.env: dict[str, ValInfo] = {}
        param_kinds = param_kinds or {}
        shapes = _param_shapes(fn)
        for param in fn.params:
            secret = param not in self.clear_params
            shape = shapes.get(param, "scalar")
            kind = param_kinds.get(param, "unknown")
            elem = None
            if shape == "array":
                elem = ValInfo(secret=secret, kind=kind)
                kind = "unknown"
            elif shape == "matrix":
                elem = ValInfo(secret=secret, kind=kind,
                               shape="array", elem=ValInfo(secret=secret, kind=kind))
                kind = "unknown"
            self.env[param] = ValInfo(secret=secret, kind=kind, shape=shape, elem=elem)
        self._solve()

    # ------------------------------------------------------------------

    def _solve(self) -> None:
        for _ in range(12):  # lattice height is small; this always settles
            before = dict(self.env)
            self._pass_stmts(self.fn.body)
            if self.env == before:
                return

    def _bind(self, name: str, info: ValInfo) -> None:
        old = self.env.get(name)
        self.env[name] = info if old is None else old.join(info)

    def _pass_stmts(self, stmts) -> None:
        for stmt in stmts:
            if isinstance(stmt, Assign):
                if isinstance(stmt.target, TupleLit):
                    for target, value in zip(stmt.target.elements, stmt.value.elements):
                        self._bind(target.id, self.expr_info(value))
                elif isinstance(stmt.target, Name):
                    self._bind(stmt.target.id, self.expr_info(stmt.value))
                elif isinstance(stmt.target, Subscript):
                    self._store_elem(stmt.target, self.expr_info(stmt.value))
            elif isinstance(stmt, AugAssign):
                info = _numeric_join(self.expr_info(stmt.target), self.expr_info(stmt.value))
                if stmt.op == "/":
                    info = replace(info, kind="float")
                if isinstance(stmt.target, Name):
                    self._bind(stmt.target.id, info)
                elif isinstance(stmt.target, Subscript):
                    self._store_elem(stmt.target, info)
            elif isinstance(stmt, If):
                self._pass_stmts(stmt.body)
                self._pass_stmts(stmt.orelse)
            elif isinstance(stmt, For):
                iter_info = self.expr_info(stmt.iter)
                if iter_info.shape == "range":
                    self._bind(stmt.var, CLEAR_INT)
                else:
                    self._bind(stmt.var, iter_info.elem or ValInfo(secret=iter_info.secret))
                self._pass_stmts(stmt.body)
            elif isinstance(stmt, While):
                self._pass_stmts(stmt.body)

    def _store_elem(self, target: Subscript, info: ValInfo) -> None:
        base = target.value
        depth = 1
        while isinstance(base, Subscript):
            base = base.value
            depth += 1
        if not isinstance(base, Name):
            return
        name = base.id
        old = self.env.get(name)
        if old is None:
            return
        if depth >= 2 and old.elem is not None and old.elem.elem is not None:
            new_inner = old.elem.elem.join(replace(info, shape="scalar", elem=None))
            self.env[name] = replace(
                old, elem=replace(old.elem, elem=new_inner),
            )
        else:
            elem = (old.elem or ValInfo()).join(replace(info, shape=info.shape, elem=info.elem))
            self.env[name] = replace(old, elem=elem)

    # ------------------------------------------------------------------

    def var_info(self, name: str) -> ValInfo:
        return self.env.get(name, ValInfo())

    def is_secret(self, expr) -> bool:
        return self.expr_info(expr).secret

    def expr_info(self, expr) -> ValInfo:
        if isinstance(expr, Num):
            return CLEAR_INT if isinstance(expr.value, int) else CLEAR_FLOAT
        if isinstance(expr, Bool):
            return CLEAR_BOOL
        if isinstance(expr, Str):
            return ValInfo()
        if isinstance(expr, Name):
            return self.var_info(expr.id)
        if isinstance(expr, Attribute):
            return CLEAR_FLOAT  # math.e / math.pi
        if isinstance(expr, BinOp):
            left = self.expr_info(expr.left)
            right = self.expr_info(expr.right)
            if expr.op == "/":
                return _numeric_join(left, right, kind="float")
            if expr.op in ("//", "%"):
                kind = "float" if "float" in (left.kind, right.kind) else "int"
                return _numeric_join(left, right, kind=kind)
            return _numeric_join(left, right)
        if isinstance(expr, UnaryOp):
            info = self.expr_info(expr.operand)
            if expr.op == "not":
                return ValInfo(secret=info.secret, kind="bool")
            return info
        if isinstance(expr, BoolOp):
            secret = any(self.expr_info(v).secret for v in expr.values)
            return ValInfo(secret=secret, kind="bool")
        if isinstance(expr, Compare):
            secret = self.expr_info(expr.left).secret or any(
                self.expr_info(c).secret for c in expr.comparators
            )
            return ValInfo(secret=secret, kind="bool")
        if isinstance(expr, Ternary):
            out = self.expr_info(expr.body).join(self.expr_info(expr.orelse))
            if self.expr_info(expr.test).secret:
                out = replace(out, secret=True)
            return out
        if isinstance(expr, Subscript):
            base = self.expr_info(expr.value)
            if isinstance(expr.index, SliceExpr):
                return base
            if base.elem is not None:
                return base.elem
            return ValInfo(secret=base.secret)
        if isinstance(expr, ListLit):
            elem = ValInfo()
            for element in expr.elements:
                elem = elem.join(self.expr_info(element))
            return ValInfo(secret=False, shape="array", elem=elem)
        if isinstance(expr, TupleLit):
            secret = any(self.expr_info(e).secret for e in expr.elements)
            return ValInfo(secret=secret)
        if isinstance(expr, ListComp):
            iter_info = self.expr_info(expr.iter)
            elem_in = iter_info.elem or ValInfo(secret=iter_info.secret)
            saved = self.env.get(expr.var)
            self.env[expr.var] = elem_in
            elem = self.expr_info(expr.expr)
            if saved is not None:
                self.env[expr.var] = saved
            return ValInfo(secret=False, shape="array", elem=elem)
        if isinstance(expr, Call):
            return self._call_info(expr)
        return ValInfo()

    def _call_info(self, call: Call) -> ValInfo:
        func = call.func
        args = call.args
        if isinstance(func, Name):
            name = func.id
            if name == "range":
                secret = any(self.expr_info(a).secret for a in args)
                return ValInfo(secret=secret, shape="range", elem=CLEAR_INT)
            if name == "len":
                return CLEAR_INT  # lengths are shape data, never secret
            if name == "invertsqrt":
                return ValInfo(secret=any(self.expr_info(a).secret for a in args), kind="float")
            if name in ("abs", "min", "max"):
                if len(args) == 1 and self.expr_info(args[0]).shape in ("array", "matrix"):
                    info = self.expr_info(args[0])
                    return info.elem or ValInfo(secret=info.secret)
                out = ValInfo()
                for a in args:
                    out = _numeric_join(out, self.expr_info(a))
                return out
            if name == "sum":
                info = self.expr_info(args[0]) if args else ValInfo()
                elem = info.elem or ValInfo(secret=info.secret)
                return replace(elem, shape="scalar", elem=None)
            if name == "sorted":
                return self.expr_info(args[0]) if args else ValInfo()
            return ValInfo()
        dotted = dotted_name(func) or ""
        if dotted.startswith("math."):
            secret = any(self.expr_info(a).secret for a in args)
            return ValInfo(secret=secret, kind="float")
        if dotted.startswith("numpy."):
            return self._numpy_info(func.attr, args)
        # list method
        if isinstance(func, Attribute):
            recv = self.expr_info(func.value)
            if func.attr in ("pop",):
                return recv.elem or ValInfo(secret=recv.secret)
            if func.attr in ("index", "count"):
                secret = (recv.elem.secret if recv.elem else recv.secret) or any(
                    self.expr_info(a).secret for a in args
                )
                return ValInfo(secret=secret, kind="int")
        return ValInfo()

    def _numpy_info(self, name: str, args) -> ValInfo:
        if name in ("zeros", "ones"):
            return ValInfo(shape="array", elem=CLEAR_FLOAT)
        if name == "arange":
            return ValInfo(shape="array", elem=CLEAR_INT)
        if name == "array":
            info = self.expr_info(args[0]) if args else ValInfo()
            return replace(info, shape="array")
        if name in ("sum", "min", "max"):
            info = self.expr_info(args[0]) if args else ValInfo()
            elem = info.elem or ValInfo(secret=info.secret)
            return replace(elem, shape="scalar", elem=None)
        if name == "dot":
            out = ValInfo(kind="int")
            for a in args:
                info = self.expr_info(a)
                out = out.join(info.elem or ValInfo(secret=info.secret))
            return replace(out, shape="scalar", elem=None)
        if name in ("sort",):
            return self.expr_info(args[0]) if args else ValInfo()
        if name in ("where",):
            elem = ValInfo()
            for a in args[1:]:
                info = self.expr_info(a)
                elem = elem.join(info.elem or info)
            if args and self.expr_info(args[0]).secret:
                elem = replace(elem, secret=True)
            return ValInfo(shape="array", elem=replace(elem, shape="scalar", elem=None))
        if name in ("clip",):
            info = self.expr_info(args[0]) if args else ValInfo()
            extra = ValInfo()
            for a in args[1:]:
                extra = extra.join(self.expr_info(a))
            if info.shape == "array":
                elem = (info.elem or ValInfo()).join(extra)
                return replace(info, elem=replace(elem, shape="scalar", elem=None))
            return _numeric_join(info, extra)
        if name == "abs":
            info = self.expr_info(args[0]) if args else ValInfo()
            return info
        # remaining ufuncs produce floats elementwise
        if args and self.expr_info(args[0]).shape == "array":
            info = self.expr_info(args[0])
            secret = (info.elem.secret if info.elem else info.secret) or any(
                self.expr_info(a).secret for a in args[1:]
            )
            return ValInfo(shape="array", elem=ValInfo(secret=secret, kind="float"))
        secret = any(self.expr_info(a).secret for a in args)
        return ValInfo(secret=secret, kind="float")


def _param_shapes(fn: FunctionDef) -> dict[str, str]:
    """Usage-based shapes: indexing depth and iteration mark arrays."""
    shapes: dict[str, str] = {}

    def note(name: str, shape: str) -> None:
        order = {"scalar": 0, "array": 1, "matrix": 2}
        if order.get(shape, 0) > order.get(shapes.get(name, "scalar"), 0):
            shapes[name] = shape

    params = set(fn.params)
    for node in fn.walk():
        if isinstance(node, Subscript):
            base, depth = node.value, 1
            while isinstance(base, Subscript):
                base, depth = base.value, depth + 1
            if isinstance(base, Name) and base.id in params:
                note(base.id, "matrix" if depth >= 2 else "array")
        elif isinstance(node, Call):
            func_name = dotted_name(node.func)
            if func_name in ("len", "sum", "sorted", "numpy.sum", "numpy.min",
                             "numpy.max", "numpy.sort", "numpy.array"):
                for a in node.args:
                    if isinstance(a, Name) and a.id in params:
                        note(a.id, "array")
            if func_name in ("numpy.dot", "numpy.where"):
                for a in node.args:
                    if isinstance(a, Name) and a.id in params:
                        note(a.id, "array")
            if func_name == "numpy.clip" and node.args:
                first = node.args[0]
                if isinstance(first, Name) and first.id in params:
                    note(first.id, "array")
        elif isinstance(node, For):
            if not is_range_call(node.iter) and isinstance(node.iter, Name):
                if node.iter.id in params:
                    note(node.iter.id, "array")
    return shapes


def analyze(program, clear_params=frozenset(), param_kinds=None) -> Analysis:
    fn = single_function(program) if isinstance(program, Module) else program
    return Analysis(fn, clear_params, param_kinds)
