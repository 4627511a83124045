"""Refactoring rule identifiers and the pattern-detection report."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field


class RuleId(enum.Enum):
    LINEAR_NONLINEAR = "LinearNonLinear"
    DATA_STRUCTURE = "DataStructure"
    SYNTAX_SUGAR = "SyntaxSugar"
    REWRITE_WHILE_LOOP = "RewriteWhileLoop"
    ELIMINATE_ADVANCED_ARRAY_OPERATIONS = "EliminateAdvancedArrayOperations"
    ELIMINATE_BREAK = "EliminateBreak"
    ELIMINATE_CONTINUE = "EliminateContinue"
    NESTED_IF_MULTIPLE_RETURN = "NestedIfMultipleReturn"
    CHAINED_COMPARISON = "ChainedComparison"
    OBLIVIOUS_FORM = "ObliviousForm"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class PatternReport:
    """Which rules apply to a program, with the matched node spans."""

    sites: dict = field(default_factory=dict)  # RuleId -> tuple[Span, ...]

    def applicable(self, rule: RuleId) -> bool:
        return bool(self.sites.get(rule))

    def spans(self, rule: RuleId) -> tuple:
        return self.sites.get(rule, ())

    def applicable_rules(self) -> tuple[RuleId, ...]:
        return tuple(r for r in RuleId if self.applicable(r))

    def to_dict(self) -> dict:
        return {
            rule.value: {
                "applicable": self.applicable(rule),
                "sites": [[s.line, s.col] for s in self.spans(rule)],
            }
            for rule in RuleId
        }
