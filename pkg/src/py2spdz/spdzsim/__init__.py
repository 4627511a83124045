"""Cleartext simulator of the target platform's high-level semantics.

Fixed-point arithmetic, the supported math library, secret containers,
trace recording, and obliviousness auditing — enough to compile-check
and run translated programs without the real MPC toolchain.
"""

from .audit import ObliviousReport, check_trace_oblivious
from .classify import (
    COMPILE_RUNTIME_ERROR,
    LOGIC_ERROR,
    PASS,
    classify_failure,
)
from .fixedpoint import SFix, from_int, quantize
from .lint import CompileError, lint
from .machine import ExecOutcome, Fault, SimConfig, execute
from .trace import Event, Trace, first_divergence
from .values import Array, Matrix, SInt, kind_of, to_python

__all__ = [
    "Array",
    "COMPILE_RUNTIME_ERROR",
    "CompileError",
    "Event",
    "ExecOutcome",
    "Fault",
    "LOGIC_ERROR",
    "Matrix",
    "ObliviousReport",
    "PASS",
    "SFix",
    "SInt",
    "SimConfig",
    "Trace",
    "check_trace_oblivious",
    "classify_failure",
    "execute",
    "first_divergence",
    "from_int",
    "kind_of",
    "lint",
    "quantize",
    "to_python",
]
