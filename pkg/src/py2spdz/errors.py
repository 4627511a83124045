"""Exception hierarchy shared across the transpiler.

Every error that carries a source location exposes a ``span`` attribute
(a ``Span`` or ``None`` for errors without a position).  Stages never
raise bare ``Exception``; callers can catch ``Py2SpdzError`` to handle
anything produced by this package.
"""

from __future__ import annotations


class Py2SpdzError(Exception):
    """Base class for all errors raised by py2spdz."""

    def __init__(self, message: str, span=None):
        super().__init__(message)
        self.message = message
        self.span = span

    def __str__(self) -> str:
        if self.span is not None:
            return f"{self.span}: {self.message}"
        return self.message


class LexError(Py2SpdzError):
    """Tokenizer rejected the input (bad character, tabs, bad indent)."""


class ParseError(Py2SpdzError):
    """Token stream does not form a program in the supported grammar."""


class SubsetError(Py2SpdzError):
    """Parsed program uses constructs outside the supported subset.

    ``violations`` collects every offending (span, description) pair so
    a caller can report all of them at once.
    """

    def __init__(self, violations):
        self.violations = list(violations)
        first = self.violations[0] if self.violations else (None, "subset violation")
        lines = "; ".join(desc for _, desc in self.violations)
        super().__init__(lines, first[0])


class RuleError(Py2SpdzError):
    """A refactoring pass cannot produce an equivalent oblivious form."""


class CertificationError(Py2SpdzError):
    """Refactored output failed one or more canonical-form checks."""

    def __init__(self, failures):
        self.failures = list(failures)
        msg = "; ".join(f"{name}: {detail}" for name, detail in self.failures)
        super().__init__(msg or "certification failed")


class SecrecyTypeError(Py2SpdzError):
    """An operation has no MP-SPDZ form for the inferred secrecy types."""


class MappingError(Py2SpdzError):
    """No emission rule covers a callee or construct in the input."""

    def __init__(self, message: str, span=None, callee: str | None = None):
        super().__init__(message, span)
        self.callee = callee


class LintError(Py2SpdzError):
    """Emitted program violates the supported MP-SPDZ surface."""


class SimulationError(Py2SpdzError):
    """Simulated execution faulted where a caller required a result."""


class TemplateError(Py2SpdzError):
    """Prompt template is missing, malformed, or has unbound slots."""


class ProviderError(Py2SpdzError):
    """Model provider failed (no fixture, transport error, bad reply)."""

    def __init__(self, message: str, kind: str = "transport"):
        super().__init__(message)
        self.kind = kind


class PipelineError(Py2SpdzError):
    """Translation pipeline aborted (gate failure, config error)."""

    def __init__(self, message: str, artifacts=None):
        super().__init__(message)
        self.artifacts = artifacts


class CorpusError(Py2SpdzError):
    """Corpus file or a corpus entry is invalid."""

    def __init__(self, message: str, entry_id: str | None = None):
        super().__init__(message)
        self.entry_id = entry_id


class DomainError(Py2SpdzError):
    """Argument outside the mathematical domain of an operation."""
