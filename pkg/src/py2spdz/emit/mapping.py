"""Name mapping: canonical-form Python to the MP-SPDZ surface.

The mapping is data: ``data/mapping_table.txt`` holds one record per
rewrite (``pattern => template # demo-ref``), and ``data/demos.txt``
holds the worked conversion each record shows a model in LLM mode.  The
same records drive both routes, so the deterministic translator and the
prompt builder cannot drift apart.

``map_names`` walks a typed canonical function bottom-up, fires the
first matching record on every expression, and rewrites loops into
``ForRange``.  It is structure preserving: every statement maps to
exactly one statement.  Anything without a record raises
:class:`MappingError` — that error is the hook where model-driven
translation takes over.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from importlib import resources

from ..errors import MappingError, TemplateError
from ..frontend import nodes as N
from ..frontend.parse import parse_expression
from ..rules.common import expand_augassign, map_child_exprs
from ..tokens import count_tokens
from .spdz_ast import CANONICAL_IMPORTS, ForRange, SpdzProgram
from .types import TypedCfp

# names templates may introduce without being holes
_TEMPLATE_SURFACE = frozenset({
    "math", "mpc_math", "sint", "sfix", "cint", "cfix", "regint",
    "Array", "Matrix", "MemValue", "radix_sort",
})

_SEED_KINDS = ("int", "float")


@dataclass(frozen=True)
class MappingEntry:
    """One rewrite record plus its demonstration for LLM mode."""

    pattern: str
    template: str
    demo_ref: str
    demo: str
    token_cost: int
    seed: str | None  # "int"/"float" for the literal-seed records
    pattern_ast: N.Expr | None
    template_ast: N.Expr
    holes: frozenset[str]


def _pattern_holes(pattern: N.Expr) -> frozenset[str]:
    in_call_position: set[int] = set()
    for node in pattern.walk():
        if isinstance(node, N.Call):
            for sub in node.func.walk():
                in_call_position.add(id(sub))
    return frozenset(
        node.id
        for node in pattern.walk()
        if isinstance(node, N.Name) and id(node) not in in_call_position
    )


def _load_demos() -> dict[str, str]:
    text = resources.files("py2spdz").joinpath("data/demos.txt").read_text("utf-8")
    demos: dict[str, str] = {}
    ref = None
    body: list[str] = []
    for line in text.splitlines():
        if line.startswith("== "):
            if ref is not None:
                demos[ref] = "\n".join(body).strip() + "\n"
            ref = line[3:].strip()
            body = []
        elif ref is not None:
            body.append(line)
        elif line.startswith("#") or not line.strip():
            continue
        else:
            raise TemplateError(f"demo text before any header: {line!r}")
    if ref is not None:
        demos[ref] = "\n".join(body).strip() + "\n"
    return demos


def load_mapping_table(token_counter=count_tokens) -> tuple[MappingEntry, ...]:
    """Load the shipped mapping records and resolve their demonstrations."""
    text = resources.files("py2spdz").joinpath("data/mapping_table.txt").read_text(
        "utf-8"
    )
    return parse_mapping_records(text, _load_demos(), token_counter)


def parse_mapping_records(
    text: str, demos: dict[str, str], token_counter=count_tokens
) -> tuple[MappingEntry, ...]:
    entries: list[MappingEntry] = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        head, _, ref = line.partition(" # ")
        pattern_text, sep, template_text = head.partition(" => ")
        if not sep or not ref:
            raise TemplateError(f"malformed mapping record: {raw!r}")
        pattern_text = pattern_text.strip()
        template_text = template_text.strip()
        ref = ref.strip()
        if ref not in demos:
            raise TemplateError(f"mapping record points at unknown demo {ref!r}")
        seed = None
        words = pattern_text.split()
        if len(words) == 2 and words[0] in _SEED_KINDS and words[1].isidentifier():
            seed = words[0]
            pattern_ast = None
            holes = frozenset({words[1]})
        else:
            pattern_ast = parse_expression(pattern_text)
            holes = _pattern_holes(pattern_ast)
        template_ast = parse_expression(template_text)
        for node in template_ast.walk():
            if (
                isinstance(node, N.Name)
                and node.id not in holes
                and node.id not in _TEMPLATE_SURFACE
            ):
                raise TemplateError(
                    f"template for {pattern_text!r} has unbound name {node.id!r}"
                )
        entries.append(
            MappingEntry(
                pattern=pattern_text,
                template=template_text,
                demo_ref=ref,
                demo=demos[ref],
                token_cost=token_counter(demos[ref]),
                seed=seed,
                pattern_ast=pattern_ast,
                template_ast=template_ast,
                holes=holes,
            )
        )
    return tuple(entries)


# ---------------------------------------------------------------- matching


def _match(pattern: N.Expr, node: N.Expr, holes: frozenset[str], bind: dict) -> bool:
    if isinstance(pattern, N.Name) and pattern.id in holes:
        seen = bind.get(pattern.id)
        if seen is None:
            bind[pattern.id] = node
            return True
        return seen == node
    if type(pattern) is not type(node):
        return False
    for f in dataclasses.fields(pattern):
        if f.name == "span":
            continue
        pv = getattr(pattern, f.name)
        nv = getattr(node, f.name)
        if isinstance(pv, N.Node):
            if not isinstance(nv, N.Node) or not _match(pv, nv, holes, bind):
                return False
        elif isinstance(pv, tuple):
            if not isinstance(nv, tuple) or len(pv) != len(nv):
                return False
            for p_item, n_item in zip(pv, nv):
                if isinstance(p_item, N.Node):
                    if not isinstance(n_item, N.Node) or not _match(
                        p_item, n_item, holes, bind
                    ):
                        return False
                elif p_item != n_item:
                    return False
        elif pv != nv:
            return False
    return True


def substitute(template: N.Expr, bind: dict) -> N.Expr:
    if isinstance(template, N.Name):
        return bind.get(template.id, template)
    return map_child_exprs(template, lambda child: substitute(child, bind))


def match_entry(entry: MappingEntry, expr: N.Expr) -> dict | None:
    """Hole bindings if ``entry`` fires on ``expr``, else None.

    Seed records match literals only; their single hole binds the node.
    """
    if entry.seed is not None:
        if isinstance(expr, (N.Num, N.Bool)):
            return {next(iter(entry.holes)): expr}
        return None
    bind: dict = {}
    if _match(entry.pattern_ast, expr, entry.holes, bind):
        return bind
    return None


# ---------------------------------------------------------------- map_names


def map_names(typed: TypedCfp, table: tuple[MappingEntry, ...] | None = None) -> SpdzProgram:
    """Translate a typed canonical function into an MP-SPDZ program."""
    entries = table if table is not None else load_mapping_table()
    expr_entries = [e for e in entries if e.seed is None]
    seed_entries = {e.seed: e for e in entries if e.seed is not None}
    fired: list[str] = []

    def fire(entry: MappingEntry) -> None:
        if entry.pattern not in fired:
            fired.append(entry.pattern)

    def apply_entries(e: N.Expr) -> N.Expr:
        for entry in expr_entries:
            bind: dict = {}
            if _match(entry.pattern_ast, e, entry.holes, bind):
                fire(entry)
                return substitute(entry.template_ast, bind)
        if isinstance(e, N.Call):
            callee = N.dotted_name(e.func)
            raise MappingError(
                f"no translation for call to {callee or 'a computed callee'}",
                span=e.span,
                callee=callee,
            )
        if isinstance(e, (N.ListLit, N.ListComp, N.TupleLit, N.Str, N.Ternary)):
            raise MappingError(
                f"{type(e).__name__} has no translation; refactoring should "
                "have removed it",
                span=e.span,
            )
        return e

    def map_expr(e: N.Expr) -> N.Expr:
        e = map_child_exprs(e, map_expr)
        if isinstance(e, N.BoolOp) and len(e.values) > 2:
            # connectives are binary methods on the target side, so an
            # n-ary chain folds left before the records see it
            acc = e.values[0]
            for value in e.values[1:]:
                acc = apply_entries(
                    N.BoolOp(op=e.op, values=(acc, value), span=e.span)
                )
            return acc
        return apply_entries(e)

    def seed_for(target: N.Expr) -> MappingEntry | None:
        st = typed.type_of(target)
        if st.kind == "sint":
            return seed_entries["int"]
        if st.kind == "sfix":
            return seed_entries["float"]
        return None

    def map_stmt(s: N.Stmt) -> N.Stmt:
        if isinstance(s, N.AugAssign):
            s = expand_augassign(s)
        if isinstance(s, N.Assign):
            value = s.value
            seed = None
            if isinstance(value, (N.Num, N.Bool)):
                seed = seed_for(s.target)
            if seed is not None:
                fire(seed)
                literal = value
                if isinstance(literal, N.Bool):
                    literal = N.Num(value=int(literal.value), span=literal.span)
                hole = next(iter(seed.holes))
                new_value = substitute(seed.template_ast, {hole: literal})
            else:
                new_value = map_expr(value)
                # allocation records default to sfix; a buffer whose
                # stores all stay integral refines to sint, which widens
                # the value range the fixed-point encoding would cap
                if (
                    isinstance(value, N.Call)
                    and N.dotted_name(value.func) == "numpy.zeros"
                    and isinstance(s.target, N.Name)
                    and _stores_are_integral(typed, s.target.id)
                ):
                    new_value = _retype_alloc(new_value)
            return N.Assign(target=map_expr(s.target), value=new_value, span=s.span)
        if isinstance(s, N.Return):
            if s.value is None:
                return s
            return N.Return(value=map_expr(s.value), span=s.span)
        if isinstance(s, N.ExprStmt):
            return N.ExprStmt(value=map_expr(s.value), span=s.span)
        if isinstance(s, N.For):
            if not N.is_range_call(s.iter):
                raise MappingError(
                    "only range loops translate to counting loops",
                    span=s.span,
                    callee="for",
                )
            return ForRange(
                var=s.var,
                args=tuple(map_expr(a) for a in s.iter.args),
                body=tuple(map_stmt(b) for b in s.body),
                span=s.span,
            )
        if isinstance(s, N.If):
            return N.If(
                test=map_expr(s.test),
                body=tuple(map_stmt(b) for b in s.body),
                orelse=tuple(map_stmt(b) for b in s.orelse),
                span=s.span,
            )
        if isinstance(s, N.While):
            raise MappingError(
                "while loop has no translation; refactoring should have "
                "removed it",
                span=s.span,
                callee="while",
            )
        if isinstance(s, N.Pass):
            return s
        raise MappingError(
            f"{type(s).__name__} has no translation", span=s.span
        )

    fn = typed.fn
    new_fn = N.FunctionDef(
        name=fn.name,
        params=fn.params,
        body=tuple(map_stmt(s) for s in fn.body),
        span=fn.span,
    )
    return SpdzProgram(imports=CANONICAL_IMPORTS, fn=new_fn, fired=tuple(fired))


def _retype_alloc(call: N.Expr) -> N.Expr:
    if isinstance(call, N.Call) and len(call.args) == 2:
        return N.Call(
            func=call.func,
            args=(call.args[0], N.Name(id="sint")),
            span=call.span,
        )
    return call


def _stores_are_integral(typed: TypedCfp, name: str) -> bool:
    """True when every indexed store into ``name`` writes an integer.

    The variable's own element fact cannot answer this: the allocation
    seeds it with the float kind, which would swallow the integer joins.
    """
    saw_store = False
    for node in typed.fn.walk():
        if not (isinstance(node, N.Assign) and isinstance(node.target, N.Subscript)):
            continue
        base = node.target.value
        while isinstance(base, N.Subscript):
            base = base.value
        if isinstance(base, N.Name) and base.id == name:
            saw_store = True
            if not _integral_by_construction(typed, node.value):
                return False
    return saw_store


def _integral_by_construction(typed: TypedCfp, expr: N.Expr) -> bool:
    """True when ``expr`` is an integer for reasons visible in the code.

    Kind facts alone cannot be trusted here: a never-pinned variable
    starts at the unknown kind, which arithmetic joins up to int, so
    ``a[i] * 2`` over an array of unpinned elements would read as an
    integer.  Demand the integer kind at every variable and element
    read as well.  Comparisons are exempt — a bit is a bit whatever its
    operands were.
    """
    if typed.info_of(expr).kind not in ("int", "bool"):
        return False
    if isinstance(expr, (N.Compare, N.Name, N.Subscript)):
        return True
    ok = True

    def visit(child: N.Expr) -> N.Expr:
        nonlocal ok
        ok = ok and _integral_by_construction(typed, child)
        return child

    map_child_exprs(expr, visit)
    return ok
