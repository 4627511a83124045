"""Recursive-descent parser over the token stream.

The grammar is a small Python subset: function definitions with
positional parameters, the usual statement forms, and expressions up to
ternaries, boolean logic, comparison chains, arithmetic, calls, indexing
and slicing, list literals, and one-generator comprehensions.

Import lines and decorators parse here too so that emitted MP-SPDZ
programs can reuse this module; ``validate_subset`` rejects them for
user input.
"""

from __future__ import annotations

from ..errors import ParseError
from .lex import Token, tokenize
from .nodes import (
    Assign, Attribute, AugAssign, BinOp, Bool, BoolOp, Break, Call, Compare,
    Continue, ExprStmt, For, FunctionDef, If, ImportStmt, ListComp, ListLit,
    Module, Name, Num, Pass, Return, SliceExpr, Span, Str, Subscript, Ternary,
    TupleLit, UnaryOp, While,
)

AUG_OPS = {"+=": "+", "-=": "-", "*=": "*", "/=": "/"}
COMPARE_OPS = {"<", "<=", ">", ">=", "==", "!="}


def parse(source: str) -> Module:
    """Parse source text into a Module, or raise LexError/ParseError."""
    return _Parser(tokenize(source)).parse_module()


def parse_expression(source: str) -> "Expr":
    """Parse a single expression; used by rule tables and tests."""
    tokens = tokenize(source)
    parser = _Parser(tokens)
    expr = parser.parse_ternary()
    tok = parser.peek()
    if tok.kind not in ("NEWLINE", "ENDMARKER"):
        raise ParseError(f"unexpected {tok.text!r} after expression", tok.span)
    return expr


class _Parser:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.pos = 0

    # ---------------------------------------------------------------- stream

    def peek(self, ahead: int = 0) -> Token:
        return self.tokens[min(self.pos + ahead, len(self.tokens) - 1)]

    def advance(self) -> Token:
        tok = self.tokens[self.pos]
        if self.pos < len(self.tokens) - 1:
            self.pos += 1
        return tok

    def at_op(self, text: str) -> bool:
        tok = self.peek()
        return tok.kind == "OP" and tok.text == text

    def at_keyword(self, text: str) -> bool:
        tok = self.peek()
        return tok.kind == "KEYWORD" and tok.text == text

    def expect(self, kind: str, text: str | None = None) -> Token:
        tok = self.peek()
        if tok.kind != kind or (text is not None and tok.text != text):
            want = text if text is not None else kind
            raise ParseError(f"expected {want!r}, found {tok.text or tok.kind!r}", tok.span)
        return self.advance()

    # ---------------------------------------------------------------- module

    def parse_module(self) -> Module:
        body: list = []
        while not self.peek().kind == "ENDMARKER":
            body.append(self.parse_statement())
        span = body[0].span if body else Span(1, 1)
        return Module(body=tuple(body), span=span)

    def parse_block(self) -> tuple:
        self.expect("OP", ":")
        self.expect("NEWLINE")
        self.expect("INDENT")
        stmts: list = []
        while self.peek().kind != "DEDENT":
            stmts.append(self.parse_statement())
        self.expect("DEDENT")
        if not stmts:
            raise ParseError("empty block", self.peek().span)
        return tuple(stmts)

    # ------------------------------------------------------------ statements

    def parse_statement(self):
        tok = self.peek()
        if tok.kind == "OP" and tok.text == "@":
            return self.parse_decorated()
        if tok.kind == "KEYWORD":
            handler = {
                "def": self.parse_funcdef,
                "if": self.parse_if,
                "for": self.parse_for,
                "while": self.parse_while,
                "return": self.parse_return,
                "break": self.parse_break,
                "continue": self.parse_continue,
                "pass": self.parse_pass,
                "import": self.parse_import,
                "from": self.parse_import,
            }.get(tok.text)
            if handler is not None:
                return handler()
        return self.parse_small_statement()

    def parse_decorated(self):
        decorators = []
        while self.at_op("@"):
            span = self.advance().span
            expr = self.parse_trailer_chain(self.parse_atom())
            decorators.append(expr)
            self.expect("NEWLINE")
            del span
        fn = self.parse_statement()
        if not isinstance(fn, FunctionDef):
            raise ParseError("decorator must precede a function definition", self.peek().span)
        return FunctionDef(
            name=fn.name, params=fn.params, body=fn.body,
            docstring=fn.docstring, decorators=tuple(decorators), span=fn.span,
        )

    def parse_funcdef(self) -> FunctionDef:
        span = self.expect("KEYWORD", "def").span
        name = self.expect("NAME").text
        self.expect("OP", "(")
        params: list[str] = []
        while not self.at_op(")"):
            params.append(self.expect("NAME").text)
            if self.at_op(","):
                self.advance()
            elif not self.at_op(")"):
                raise ParseError("expected ',' or ')'", self.peek().span)
        self.expect("OP", ")")
        body = self.parse_block()
        docstring = None
        if body and isinstance(body[0], ExprStmt) and isinstance(body[0].value, Str):
            docstring = body[0].value.value
            body = body[1:]
            if not body:
                raise ParseError("function body is only a docstring", span)
        return FunctionDef(name=name, params=tuple(params), body=body,
                           docstring=docstring, span=span)

    def parse_if(self) -> If:
        span = self.expect("KEYWORD", "if").span
        test = self.parse_ternary()
        body = self.parse_block()
        orelse: tuple = ()
        if self.at_keyword("elif"):
            # rewrite 'elif' to an else holding a nested if
            nested = self.parse_if_from_elif()
            orelse = (nested,)
        elif self.at_keyword("else"):
            self.advance()
            orelse = self.parse_block()
        return If(test=test, body=body, orelse=orelse, span=span)

    def parse_if_from_elif(self) -> If:
        span = self.expect("KEYWORD", "elif").span
        test = self.parse_ternary()
        body = self.parse_block()
        orelse: tuple = ()
        if self.at_keyword("elif"):
            orelse = (self.parse_if_from_elif(),)
        elif self.at_keyword("else"):
            self.advance()
            orelse = self.parse_block()
        return If(test=test, body=body, orelse=orelse, span=span)

    def parse_for(self) -> For:
        span = self.expect("KEYWORD", "for").span
        var = self.expect("NAME").text
        self.expect("KEYWORD", "in")
        iter_expr = self.parse_ternary()
        body = self.parse_block()
        return For(var=var, iter=iter_expr, body=body, span=span)

    def parse_while(self) -> While:
        span = self.expect("KEYWORD", "while").span
        test = self.parse_ternary()
        body = self.parse_block()
        return While(test=test, body=body, span=span)

    def parse_return(self) -> Return:
        span = self.expect("KEYWORD", "return").span
        if self.peek().kind == "NEWLINE":
            self.advance()
            return Return(value=None, span=span)
        value = self.parse_ternary()
        self.expect("NEWLINE")
        return Return(value=value, span=span)

    def parse_break(self) -> Break:
        span = self.expect("KEYWORD", "break").span
        self.expect("NEWLINE")
        return Break(span=span)

    def parse_continue(self) -> Continue:
        span = self.expect("KEYWORD", "continue").span
        self.expect("NEWLINE")
        return Continue(span=span)

    def parse_pass(self) -> Pass:
        span = self.expect("KEYWORD", "pass").span
        self.expect("NEWLINE")
        return Pass(span=span)

    def parse_import(self) -> ImportStmt:
        span = self.peek().span
        words: list[str] = []
        while self.peek().kind != "NEWLINE":
            tok = self.advance()
            words.append(tok.text)
        self.expect("NEWLINE")
        # normalize spacing; commas attach to the preceding word
        text = " ".join(words).replace(" , ", ", ").replace(" . ", ".")
        return ImportStmt(text=text, span=span)

    def parse_small_statement(self):
        span = self.peek().span
        first = self.parse_ternary()
        if self.at_op(","):
            elements = [first]
            while self.at_op(","):
                self.advance()
                elements.append(self.parse_ternary())
            first = TupleLit(elements=tuple(elements), span=span)
        tok = self.peek()
        if tok.kind == "OP" and tok.text == "=":
            self.advance()
            value = self.parse_ternary()
            if self.at_op(","):
                elements = [value]
                while self.at_op(","):
                    self.advance()
                    elements.append(self.parse_ternary())
                value = TupleLit(elements=tuple(elements), span=value.span)
            self.expect("NEWLINE")
            self.check_assign_target(first)
            return Assign(target=first, value=value, span=span)
        if tok.kind == "OP" and tok.text in AUG_OPS:
            self.advance()
            value = self.parse_ternary()
            self.expect("NEWLINE")
            if not isinstance(first, (Name, Subscript)):
                raise ParseError("invalid augmented-assignment target", span)
            return AugAssign(target=first, op=AUG_OPS[tok.text], value=value, span=span)
        self.expect("NEWLINE")
        if isinstance(first, TupleLit):
            raise ParseError("bare tuple expression", span)
        return ExprStmt(value=first, span=span)

    def check_assign_target(self, target) -> None:
        if isinstance(target, (Name, Subscript)):
            return
        if isinstance(target, TupleLit) and all(
            isinstance(e, Name) for e in target.elements
        ):
            return
        raise ParseError("invalid assignment target", target.span)

    # ----------------------------------------------------------- expressions

    def parse_ternary(self):
        value = self.parse_or()
        if self.at_keyword("if"):
            span = self.advance().span
            test = self.parse_or()
            self.expect("KEYWORD", "else")
            orelse = self.parse_ternary()
            return Ternary(test=test, body=value, orelse=orelse, span=span)
        return value

    def parse_or(self):
        first = self.parse_and()
        if not self.at_keyword("or"):
            return first
        values = [first]
        span = first.span
        while self.at_keyword("or"):
            self.advance()
            values.append(self.parse_and())
        return BoolOp(op="or", values=tuple(values), span=span)

    def parse_and(self):
        first = self.parse_not()
        if not self.at_keyword("and"):
            return first
        values = [first]
        span = first.span
        while self.at_keyword("and"):
            self.advance()
            values.append(self.parse_not())
        return BoolOp(op="and", values=tuple(values), span=span)

    def parse_not(self):
        if self.at_keyword("not"):
            span = self.advance().span
            return UnaryOp(op="not", operand=self.parse_not(), span=span)
        return self.parse_comparison()

    def parse_comparison(self):
        left = self.parse_arith()
        ops: list[str] = []
        comparators: list = []
        while self.peek().kind == "OP" and self.peek().text in COMPARE_OPS:
            ops.append(self.advance().text)
            comparators.append(self.parse_arith())
        if not ops:
            return left
        return Compare(left=left, ops=tuple(ops), comparators=tuple(comparators),
                       span=left.span)

    def parse_arith(self):
        left = self.parse_term()
        while self.peek().kind == "OP" and self.peek().text in ("+", "-"):
            op = self.advance().text
            right = self.parse_term()
            left = BinOp(left=left, op=op, right=right, span=left.span)
        return left

    def parse_term(self):
        left = self.parse_factor()
        while self.peek().kind == "OP" and self.peek().text in ("*", "/", "//", "%"):
            op = self.advance().text
            right = self.parse_factor()
            left = BinOp(left=left, op=op, right=right, span=left.span)
        return left

    def parse_factor(self):
        if self.at_op("-"):
            span = self.advance().span
            return UnaryOp(op="-", operand=self.parse_factor(), span=span)
        return self.parse_power()

    def parse_power(self):
        base = self.parse_trailer_chain(self.parse_atom())
        if self.at_op("**"):
            self.advance()
            exponent = self.parse_factor()  # right associative, unary ok
            return BinOp(left=base, op="**", right=exponent, span=base.span)
        return base

    def parse_trailer_chain(self, expr):
        while True:
            if self.at_op("("):
                self.advance()
                args: list = []
                while not self.at_op(")"):
                    args.append(self.parse_ternary())
                    if self.at_op(","):
                        self.advance()
                    elif not self.at_op(")"):
                        raise ParseError("expected ',' or ')'", self.peek().span)
                self.expect("OP", ")")
                expr = Call(func=expr, args=tuple(args), span=expr.span)
            elif self.at_op("["):
                self.advance()
                index = self.parse_subscript()
                self.expect("OP", "]")
                expr = Subscript(value=expr, index=index, span=expr.span)
            elif self.at_op("."):
                self.advance()
                attr = self.expect("NAME").text
                expr = Attribute(value=expr, attr=attr, span=expr.span)
            else:
                return expr

    def parse_subscript(self):
        span = self.peek().span
        lower = None
        if not self.at_op(":"):
            lower = self.parse_ternary()
            if not self.at_op(":"):
                return lower
        self.expect("OP", ":")
        upper = None
        if not self.at_op(":") and not self.at_op("]"):
            upper = self.parse_ternary()
        step = None
        if self.at_op(":"):
            self.advance()
            if not self.at_op("]"):
                step = self.parse_ternary()
        return SliceExpr(lower=lower, upper=upper, step=step, span=span)

    def parse_atom(self):
        tok = self.peek()
        if tok.kind == "NAME":
            self.advance()
            return Name(id=tok.text, span=tok.span)
        if tok.kind == "NUMBER":
            self.advance()
            text = tok.text
            if any(c in text for c in ".eE"):
                return Num(value=float(text), span=tok.span)
            return Num(value=int(text), span=tok.span)
        if tok.kind == "STRING":
            self.advance()
            return Str(value=tok.text, span=tok.span)
        if tok.kind == "KEYWORD" and tok.text in ("True", "False"):
            self.advance()
            return Bool(value=tok.text == "True", span=tok.span)
        if tok.kind == "OP" and tok.text == "(":
            self.advance()
            inner = self.parse_ternary()
            self.expect("OP", ")")
            return inner
        if tok.kind == "OP" and tok.text == "[":
            return self.parse_list_display()
        raise ParseError(f"unexpected {tok.text or tok.kind!r}", tok.span)

    def parse_list_display(self):
        span = self.expect("OP", "[").span
        if self.at_op("]"):
            self.advance()
            return ListLit(elements=(), span=span)
        first = self.parse_ternary()
        if self.at_keyword("for"):
            self.advance()
            var = self.expect("NAME").text
            self.expect("KEYWORD", "in")
            iter_expr = self.parse_ternary()
            self.expect("OP", "]")
            return ListComp(expr=first, var=var, iter=iter_expr, span=span)
        elements = [first]
        while self.at_op(","):
            self.advance()
            if self.at_op("]"):
                break
            elements.append(self.parse_ternary())
        self.expect("OP", "]")
        return ListLit(elements=tuple(elements), span=span)
