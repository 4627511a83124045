"""Failure taxonomy for simulated runs.

A run either passes, failed to compile or execute, or finished with a
wrong answer.  The split matters because repair needs to know whether
to fix the program text (compile/runtime) or its logic.
"""

from __future__ import annotations

from .machine import ExecOutcome
from .values import to_python

PASS = "pass"
COMPILE_RUNTIME_ERROR = "compile_runtime_error"
LOGIC_ERROR = "logic_error"


def classify_failure(outcome: ExecOutcome, case, tol: float) -> str:
    """Bucket an outcome against a case's expected value.

    ``tol`` is an absolute elementwise bound; fixed-point results carry
    quantization error, so exact comparison is reserved for tol=0.
    """
    if outcome.fault is not None:
        return COMPILE_RUNTIME_ERROR
    if _close(to_python(outcome.result), case.expected, tol):
        return PASS
    return LOGIC_ERROR


def _close(result, expected, tol: float) -> bool:
    expected = getattr(expected, "values", expected)
    result = getattr(result, "values", result)
    if isinstance(expected, (list, tuple)) or isinstance(result, (list, tuple)):
        if not isinstance(expected, (list, tuple)):
            return False
        if not isinstance(result, (list, tuple)):
            return False
        if len(result) != len(expected):
            return False
        return all(_close(r, x, tol) for r, x in zip(result, expected))
    if isinstance(result, bool):
        result = int(result)
    if isinstance(expected, bool):
        expected = int(expected)
    if isinstance(result, (int, float)) and isinstance(expected, (int, float)):
        return abs(result - expected) <= tol
    return result == expected
