"""Tokenizer for the supported subset.

Indentation must use 4-space levels; tab characters anywhere in leading
whitespace are rejected.  Comments run to end of line and produce no
tokens.  Blank lines produce no tokens.  The stream always ends with
NEWLINE* DEDENT* ENDMARKER so the parser never has to special-case EOF.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import LexError
from .nodes import Span

KEYWORDS = {
    "def", "return", "if", "elif", "else", "for", "while", "in",
    "break", "continue", "pass", "and", "or", "not", "True", "False",
    "import", "from",
}

# multi-character operators first so maximal munch works by ordering
OPERATORS = [
    "**", "//", "<=", ">=", "==", "!=", "+=", "-=", "*=", "/=",
    "+", "-", "*", "/", "%", "<", ">", "=", "(", ")", "[", "]",
    ",", ":", ".", "@",
]


@dataclass(frozen=True)
class Token:
    kind: str  # NAME KEYWORD NUMBER STRING OP NEWLINE INDENT DEDENT ENDMARKER
    text: str
    span: Span

    def __repr__(self) -> str:
        return f"Token({self.kind}, {self.text!r}, {self.span})"


def tokenize(source: str) -> list[Token]:
    """Tokenize source text, or raise LexError at the first bad input."""
    tokens: list[Token] = []
    indent_stack = [0]
    lines = source.split("\n")

    for lineno, line in enumerate(lines, start=1):
        stripped = line.strip()
        if stripped == "" or stripped.startswith("#"):
            continue

        indent = 0
        for ch in line:
            if ch == " ":
                indent += 1
            elif ch == "\t":
                raise LexError("tab character in indentation", Span(lineno, indent + 1))
            else:
                break

        if indent % 4 != 0:
            raise LexError(
                f"indentation of {indent} spaces is not a multiple of 4",
                Span(lineno, 1),
            )
        level = indent // 4
        current = indent_stack[-1]
        if level > current:
            if level != current + 1:
                raise LexError("indentation jumps more than one level", Span(lineno, 1))
            indent_stack.append(level)
            tokens.append(Token("INDENT", "", Span(lineno, 1)))
        else:
            while indent_stack[-1] > level:
                indent_stack.pop()
                tokens.append(Token("DEDENT", "", Span(lineno, 1)))
            if indent_stack[-1] != level:
                raise LexError("unindent does not match an outer level", Span(lineno, 1))

        _tokenize_line(line, lineno, indent, tokens)
        tokens.append(Token("NEWLINE", "", Span(lineno, len(line) + 1)))

    final_line = len(lines) + 1
    while indent_stack[-1] > 0:
        indent_stack.pop()
        tokens.append(Token("DEDENT", "", Span(final_line, 1)))
    tokens.append(Token("ENDMARKER", "", Span(final_line, 1)))
    return tokens


def _tokenize_line(line: str, lineno: int, start: int, out: list[Token]) -> None:
    i = start
    n = len(line)
    while i < n:
        ch = line[i]
        if ch == " ":
            i += 1
            continue
        if ch == "\t":
            raise LexError("tab character", Span(lineno, i + 1))
        if ch == "#":
            return
        span = Span(lineno, i + 1)

        if ch.isdigit() or (ch == "." and i + 1 < n and line[i + 1].isdigit()):
            i = _lex_number(line, i, span, out)
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (line[j].isalnum() or line[j] == "_"):
                j += 1
            text = line[i:j]
            kind = "KEYWORD" if text in KEYWORDS else "NAME"
            out.append(Token(kind, text, span))
            i = j
            continue
        if ch in ("'", '"'):
            i = _lex_string(line, i, span, out)
            continue

        for op in OPERATORS:
            if line.startswith(op, i):
                out.append(Token("OP", op, span))
                i += len(op)
                break
        else:
            raise LexError(f"unexpected character {ch!r}", span)


def _lex_number(line: str, i: int, span: Span, out: list[Token]) -> int:
    n = len(line)
    j = i
    while j < n and line[j].isdigit():
        j += 1
    is_float = False
    if j < n and line[j] == ".":
        # a '.' not followed by a digit after digits is still a float ("1.")
        is_float = True
        j += 1
        while j < n and line[j].isdigit():
            j += 1
    if j < n and line[j] in ("e", "E"):
        k = j + 1
        if k < n and line[k] in ("+", "-"):
            k += 1
        if k < n and line[k].isdigit():
            is_float = True
            j = k
            while j < n and line[j].isdigit():
                j += 1
    text = line[i:j]
    if j < n and (line[j].isalpha() or line[j] == "_"):
        raise LexError(f"malformed number {line[i:j + 1]!r}", span)
    out.append(Token("NUMBER", text, span))
    return j


def _lex_string(line: str, i: int, span: Span, out: list[Token]) -> int:
    quote = line[i]
    n = len(line)
    # tolerate triple quotes so docstrings read naturally
    if line.startswith(quote * 3, i):
        end = line.find(quote * 3, i + 3)
        if end < 0:
            raise LexError("unterminated string", span)
        out.append(Token("STRING", line[i + 3:end], span))
        return end + 3
    j = i + 1
    chars = []
    while j < n:
        ch = line[j]
        if ch == "\\" and j + 1 < n:
            chars.append(line[j + 1])
            j += 2
            continue
        if ch == quote:
            out.append(Token("STRING", "".join(chars), span))
            return j + 1
        chars.append(ch)
        j += 1
    raise LexError("unterminated string", span)
