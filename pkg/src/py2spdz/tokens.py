"""Token accounting for prompt budgets.

One token per four UTF-8 bytes, rounded up.  The estimate only has to be
monotone in text length and identical everywhere it is used — mapping
entries, prompt templates, and the pipeline report all share it.
"""

from __future__ import annotations

import math


def count_tokens(text: str) -> int:
    return math.ceil(len(text.encode("utf-8")) / 4)
