"""Stage-1 refactoring: pattern detection, rewrite passes, certification.

The public surface is ``detect_patterns`` to learn which rules a program
needs, the ten passes themselves, and ``refactor_to_cfp`` which chains
them in the fixed order and certifies the result.
"""

from .arrays import lower_array_ops, lower_data_structures
from .branches import flatten_branches, make_oblivious
from .cfp import PASS_ORDER, Cfp, alpha_equal, certify, refactor_to_cfp
from .common import NameGen, mask_pair, negate_condition
from .desugar import desugar_syntax, split_chained_comparisons
from .detect import detect_patterns
from .loops import eliminate_break, eliminate_continue, rewrite_while
from .nonlinear import (
    RewriteTable,
    decompose_nonlinear,
    load_rewrite_table,
)
from .rule_ids import PatternReport, RuleId

__all__ = [
    "PASS_ORDER",
    "Cfp",
    "NameGen",
    "PatternReport",
    "RewriteTable",
    "RuleId",
    "alpha_equal",
    "certify",
    "decompose_nonlinear",
    "desugar_syntax",
    "detect_patterns",
    "eliminate_break",
    "eliminate_continue",
    "flatten_branches",
    "load_rewrite_table",
    "lower_array_ops",
    "lower_data_structures",
    "make_oblivious",
    "mask_pair",
    "negate_condition",
    "refactor_to_cfp",
    "rewrite_while",
    "split_chained_comparisons",
]
