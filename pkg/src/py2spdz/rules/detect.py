"""Static pattern detection: which refactoring rules apply to a program.

Detection is purely syntactic plus the secrecy lattice from
:mod:`py2spdz.analysis`.  A rule is applicable iff at least one site
matches; the driver re-runs detection before each pass so that patterns
exposed by earlier passes (flag guards, desugared branches) are caught at
the turn that handles them.
"""

from __future__ import annotations

from .. import analysis as A
from ..frontend import nodes as N
from ..frontend.subset import LIST_METHODS
from .nonlinear import rewrite_sites
from .rule_ids import PatternReport, RuleId

#: numpy calls that lower_array_ops expands into explicit loops.
REDUCTIONS = {"sum", "min", "max", "dot"}
ELEMENTWISE = {"where", "clip"}
UFUNCS = {
    "exp", "exp2", "expm1", "log", "log1p", "log2", "log10", "sqrt",
    "power", "abs", "logaddexp", "logaddexp2",
}


def _numpy_call(node):
    if not isinstance(node, N.Call):
        return None
    name = N.dotted_name(node.func)
    if name is None or not name.startswith("numpy."):
        return None
    return name.split(".", 1)[1]


def _is_array(info: A.ValInfo) -> bool:
    return info.shape in ("array", "matrix")


def detect_patterns(module: N.Module, clear_params=()) -> PatternReport:
    fn = N.single_function(module)
    if fn is None:
        return PatternReport()
    ana = A.analyze(module, clear_params=clear_params)
    sites: dict[RuleId, list] = {rule: [] for rule in RuleId}

    returns = [n for n in fn.walk() if isinstance(n, N.Return)]
    multiple_returns = len(returns) > 1
    early_return = bool(returns) and not (
        len(returns) == 1
        and fn.body
        and fn.body[-1] is returns[0]
    )
    if multiple_returns or early_return:
        sites[RuleId.NESTED_IF_MULTIPLE_RETURN].extend(r.span for r in returns)

    def scan(node):
        if isinstance(node, N.Ternary):
            sites[RuleId.SYNTAX_SUGAR].append(node.span)
        elif isinstance(node, N.ListComp):
            sites[RuleId.SYNTAX_SUGAR].append(node.span)
        elif isinstance(node, N.Assign) and isinstance(node.target, N.TupleLit):
            sites[RuleId.SYNTAX_SUGAR].append(node.span)
        elif isinstance(node, N.Assign) and isinstance(node.value, N.ListLit):
            sites[RuleId.DATA_STRUCTURE].append(node.span)
        elif isinstance(node, N.For) and not N.is_range_call(node.iter):
            sites[RuleId.SYNTAX_SUGAR].append(node.span)
        elif isinstance(node, N.Compare) and len(node.ops) > 1:
            sites[RuleId.CHAINED_COMPARISON].append(node.span)
        elif isinstance(node, N.While):
            sites[RuleId.REWRITE_WHILE_LOOP].append(node.span)
            if ana.is_secret(node.test):
                sites[RuleId.OBLIVIOUS_FORM].append(node.span)
        elif isinstance(node, N.Break):
            sites[RuleId.ELIMINATE_BREAK].append(node.span)
        elif isinstance(node, N.Continue):
            sites[RuleId.ELIMINATE_CONTINUE].append(node.span)
        elif isinstance(node, N.If):
            if ana.is_secret(node.test):
                sites[RuleId.OBLIVIOUS_FORM].append(node.span)
                if _contains_if(node.body) or _contains_if(node.orelse):
                    sites[RuleId.NESTED_IF_MULTIPLE_RETURN].append(node.span)
        elif isinstance(node, N.Call):
            _scan_call(node, ana, sites)
        elif isinstance(node, N.Subscript):
            if isinstance(node.index, N.SliceExpr):
                sites[RuleId.ELIMINATE_ADVANCED_ARRAY_OPERATIONS].append(node.span)
            elif _is_array(ana.expr_info(node.index)):
                sites[RuleId.ELIMINATE_ADVANCED_ARRAY_OPERATIONS].append(node.span)
        for child in node.children():
            scan(child)

    for stmt in fn.body:
        scan(stmt)

    for span in rewrite_sites(fn):
        sites[RuleId.LINEAR_NONLINEAR].append(span)

    report_sites = {
        rule: tuple(spans) for rule, spans in sites.items() if spans
    }
    return PatternReport(sites=report_sites)


def _contains_if(stmts) -> bool:
    """An if statement anywhere below, not crossing loop boundaries."""
    for s in stmts:
        if isinstance(s, N.If):
            return True
        if isinstance(s, (N.For, N.While)):
            continue
        for child in s.children():
            if isinstance(child, N.If):
                return True
    return False


def _scan_call(node: N.Call, ana, sites) -> None:
    if isinstance(node.func, N.Attribute):
        dotted = N.dotted_name(node.func)
        if dotted is None or dotted.split(".", 1)[0] not in ("math", "numpy"):
            if node.func.attr in LIST_METHODS:
                sites[RuleId.DATA_STRUCTURE].append(node.span)
            return
    np_name = _numpy_call(node)
    if np_name in REDUCTIONS or np_name in ELEMENTWISE:
        sites[RuleId.ELIMINATE_ADVANCED_ARRAY_OPERATIONS].append(node.span)
        return
    if np_name in UFUNCS and any(
        _is_array(ana.expr_info(a)) for a in node.args
    ):
        sites[RuleId.ELIMINATE_ADVANCED_ARRAY_OPERATIONS].append(node.span)
        return
    if isinstance(node.func, N.Name):
        if node.func.id in ("sum", "min", "max") and len(node.args) == 1:
            sites[RuleId.ELIMINATE_ADVANCED_ARRAY_OPERATIONS].append(node.span)
