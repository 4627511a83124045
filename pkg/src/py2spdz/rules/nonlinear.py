"""Rewriting advanced nonlinear math over the exp/ln/sqrt/invertsqrt basis.

The rewrite rules live in a text table shipped with the package
(``data/nonlinear_rules.txt``); each maps a callee, matched by final name
and arity, to a template expression over the basis and arithmetic.  A
callee that is nonlinear but has no table entry (``math.floor``,
``math.ceil``) raises :class:`RuleError`, which is the designed hook for
extending the table.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from importlib import resources

from ..errors import RuleError
from ..frontend import nodes as N
from ..frontend import parse_expression
from .common import function_of, rewrite_blocks, transform_exprs, with_function

#: Nonlinear member names per module; anything else (creations, reductions,
#: structural helpers) is not this pass's business.
NONLINEAR_MEMBERS = {
    "math": {
        "exp", "log", "log2", "log10", "sqrt", "pow", "sin", "cos", "tan",
        "asin", "acos", "atan", "sinh", "cosh", "tanh", "floor", "ceil",
        "fabs",
    },
    "numpy": {
        "exp", "exp2", "expm1", "log", "log1p", "log2", "log10", "sqrt",
        "power", "logaddexp", "logaddexp2", "abs",
    },
}

#: Basis and passthrough callees, by final name and arity.
PASSTHROUGH = {
    ("exp", 1), ("log", 1), ("sqrt", 1), ("invertsqrt", 1),
    ("sin", 1), ("cos", 1), ("tan", 1),
    ("asin", 1), ("acos", 1), ("atan", 1),
}


@dataclass(frozen=True)
class RewriteRule:
    name: str
    params: tuple[str, ...]
    template: N.Expr


@dataclass(frozen=True)
class RewriteTable:
    rules: dict  # (name, arity) -> RewriteRule
    recip_rules: dict  # name of the call under 1/... -> RewriteRule

    def lookup(self, name: str, arity: int) -> RewriteRule | None:
        return self.rules.get((name, arity))

    def keys(self):
        return set(self.rules)


def _parse_table(text: str) -> RewriteTable:
    rules = {}
    recip = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=>" not in line:
            raise RuleError(f"rewrite table line {lineno}: missing '=>'")
        lhs_text, rhs_text = line.split("=>", 1)
        lhs = parse_expression(lhs_text.strip())
        template = parse_expression(rhs_text.strip())
        if isinstance(lhs, N.Call) and isinstance(lhs.func, N.Name):
            params = []
            for arg in lhs.args:
                if not isinstance(arg, N.Name):
                    raise RuleError(
                        f"rewrite table line {lineno}: parameters must be names"
                    )
                params.append(arg.id)
            rule = RewriteRule(lhs.func.id, tuple(params), template)
            rules[(rule.name, len(rule.params))] = rule
        elif (
            isinstance(lhs, N.BinOp)
            and lhs.op == "/"
            and isinstance(lhs.left, N.Num)
            and lhs.left.value == 1
            and isinstance(lhs.right, N.Call)
            and len(lhs.right.args) == 1
            and isinstance(lhs.right.args[0], N.Name)
        ):
            name = N.dotted_name(lhs.right.func)
            if name is None:
                raise RuleError(f"rewrite table line {lineno}: bad pattern")
            final = name.rsplit(".", 1)[-1]
            rule = RewriteRule(final, (lhs.right.args[0].id,), template)
            recip[final] = rule
        else:
            raise RuleError(f"rewrite table line {lineno}: unsupported pattern")
    return RewriteTable(rules=rules, recip_rules=recip)


@functools.lru_cache(maxsize=None)
def _builtin_table() -> RewriteTable:
    text = (
        resources.files("py2spdz").joinpath("data/nonlinear_rules.txt")
        .read_text(encoding="utf-8")
    )
    return _parse_table(text)


def load_rewrite_table(path=None) -> RewriteTable:
    """The shipped table, optionally extended by a user file whose entries
    take precedence."""
    table = _builtin_table()
    if path is None:
        return table
    with open(path, encoding="utf-8") as fh:
        extra = _parse_table(fh.read())
    return RewriteTable(
        rules={**table.rules, **extra.rules},
        recip_rules={**table.recip_rules, **extra.recip_rules},
    )


def substitute(template: N.Expr, mapping: dict) -> N.Expr:
    def sub(expr):
        if isinstance(expr, N.Name) and expr.id in mapping:
            return mapping[expr.id]
        return expr

    return transform_exprs(template, sub)


def _requalify(expr: N.Expr, module: str) -> N.Expr:
    """Rewrite the template's basis calls into the site's own namespace.

    Templates are written over math.* and abs.  A numpy-qualified site may
    be applied to whole arrays, where only the numpy spellings broadcast,
    so the identity must be emitted as numpy.log/numpy.exp/... there.
    """
    if module == "math":
        return expr

    def fix(e):
        if (
            isinstance(e, N.Attribute)
            and isinstance(e.value, N.Name)
            and e.value.id == "math"
            and e.attr in ("exp", "log", "sqrt")
        ):
            return N.Attribute(value=N.Name(id=module), attr=e.attr, span=e.span)
        if isinstance(e, N.Call) and isinstance(e.func, N.Name) and e.func.id == "abs":
            return N.Call(
                func=N.Attribute(value=N.Name(id=module), attr="abs"),
                args=e.args,
                span=e.span,
            )
        return e

    return transform_exprs(expr, fix)


def _qualified(call: N.Call):
    """(module, final name) for math.*/numpy.* calls, else None."""
    name = N.dotted_name(call.func)
    if name is None or "." not in name:
        return None
    module, final = name.split(".", 1)
    if module in NONLINEAR_MEMBERS and "." not in final:
        return module, final
    return None


def _match_recip(expr: N.Expr, table: RewriteTable):
    """1/sqrt(x)-style patterns; returns the rewritten expression or None."""
    if not (isinstance(expr, N.BinOp) and expr.op == "/"):
        return None
    if not (isinstance(expr.left, N.Num) and expr.left.value == 1):
        return None
    call = expr.right
    if not (isinstance(call, N.Call) and len(call.args) == 1):
        return None
    qual = _qualified(call)
    if qual is None:
        return None
    rule = table.recip_rules.get(qual[1])
    if rule is None:
        return None
    return substitute(rule.template, {rule.params[0]: call.args[0]})


def _apply_rule(call: N.Call, rule: RewriteRule, module: str) -> N.Expr:
    template = _requalify(rule.template, module)
    return substitute(template, dict(zip(rule.params, call.args)))


def rewrite_sites(fn: N.FunctionDef, table: RewriteTable | None = None):
    """Spans of every expression decompose_nonlinear would change or
    reject.  Shared with pattern detection so gating matches execution."""
    table = table or load_rewrite_table()
    sites = []
    for node in fn.walk():
        if isinstance(node, N.BinOp) and _match_recip(node, table) is not None:
            sites.append(node.span)
        elif isinstance(node, N.Call):
            qual = _qualified(node)
            if qual is None:
                continue
            module, name = qual
            if name not in NONLINEAR_MEMBERS[module]:
                continue
            arity = len(node.args)
            rule = table.lookup(name, arity)
            if rule is not None:
                # Identity entries (sqrt, numpy.abs) are not sites when
                # they reproduce the input spelling.
                if _apply_rule(node, rule, module) != node:
                    sites.append(node.span)
            elif (name, arity) not in PASSTHROUGH:
                sites.append(node.span)  # pass will raise RuleError here
    return tuple(sites)


def decompose_nonlinear(module: N.Module, clear_params=(), table=None) -> N.Module:
    """Rewrite every advanced nonlinear callee over the basis."""
    table = table or load_rewrite_table()
    fn = function_of(module)

    def fix(expr):
        recip = _match_recip(expr, table)
        if recip is not None:
            return recip
        if not isinstance(expr, N.Call):
            return expr
        qual = _qualified(expr)
        if qual is None:
            return expr
        mod, name = qual
        if name not in NONLINEAR_MEMBERS[mod]:
            return expr
        arity = len(expr.args)
        rule = table.lookup(name, arity)
        if rule is None:
            if (name, arity) in PASSTHROUGH:
                return expr
            raise RuleError(
                f"{mod}.{name}/{arity} is absent from the nonlinear rewrite table",
                span=expr.span,
            )
        return _apply_rule(expr, rule, mod)

    new_body = rewrite_blocks(fn.body, lambda s: [transform_exprs(s, fix)])
    if new_body == fn.body:
        return module
    from .common import with_body

    return with_function(module, with_body(fn, new_body))
