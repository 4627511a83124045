"""Stage 2: translate certified canonical programs to MP-SPDZ.

The stage has three steps — secrecy typing, data-driven name mapping,
and a deterministic self-reflection pass — plus the renderer/reparser
pair for the emitted surface.
"""

from .mapping import (
    MappingEntry, load_mapping_table, map_names, match_entry,
    parse_mapping_records, substitute,
)
from .rectify import rectify
from .source import emit_source, parse_spdz
from .spdz_ast import (
    CANONICAL_IMPORTS, ForRange, SpdzProgram, lower_loops, raise_loops,
    statement_count,
)
from .types import SecrecyType, TypedCfp, assign_secrecy_types

__all__ = [
    "CANONICAL_IMPORTS",
    "ForRange",
    "MappingEntry",
    "SecrecyType",
    "SpdzProgram",
    "TypedCfp",
    "assign_secrecy_types",
    "emit_source",
    "load_mapping_table",
    "lower_loops",
    "map_names",
    "match_entry",
    "parse_mapping_records",
    "parse_spdz",
    "raise_loops",
    "rectify",
    "statement_count",
    "substitute",
]
