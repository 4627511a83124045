"""Trace-based obliviousness audit.

A program is data-oblivious when any two same-shape inputs produce the
same event sequence.  The audit runs input pairs through the simulator
and reports the first trace divergence; lint is skipped and leak mode
is on so that deliberately non-oblivious programs run far enough to
show where they leak.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import SimulationError
from .machine import SimConfig, execute
from .trace import Event, first_divergence


@dataclass(frozen=True)
class ObliviousReport:
    """Audit verdict plus the first divergence, when there is one."""

    oblivious: bool
    pair_index: int | None = None
    event_index: int | None = None
    left: Event | None = None
    right: Event | None = None


def check_trace_oblivious(
    spdz,
    input_pairs,
    config: SimConfig | None = None,
    *,
    clear_params=(),
) -> ObliviousReport:
    """Compare traces across each input pair; report the first mismatch."""
    for pair_index, (inputs_a, inputs_b) in enumerate(input_pairs):
        outcomes = [
            execute(
                spdz,
                inputs,
                config,
                clear_params=clear_params,
                leak_mode=True,
                run_lint=False,
            )
            for inputs in (inputs_a, inputs_b)
        ]
        for outcome in outcomes:
            if outcome.fault is not None:
                raise SimulationError(
                    f"run faulted during the trace audit: {outcome.fault}"
                )
        divergence = first_divergence(outcomes[0].trace, outcomes[1].trace)
        if divergence is not None:
            event_index, left, right = divergence
            return ObliviousReport(False, pair_index, event_index, left, right)
    return ObliviousReport(True)
