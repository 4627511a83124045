"""Execution traces: the observable behaviour of a simulated run.

A trace is the append-only sequence of instruction and memory events a
program produces.  Events carry operand secrecy kinds and clear index
values, never the contents of secret data — two runs of an oblivious
program on same-shape inputs must yield identical traces.
"""

from __future__ import annotations

from dataclasses import dataclass

FORBIDDEN_INDEX = "⊥"


@dataclass(frozen=True)
class Event:
    kind: str
    detail: str


class Trace:
    """Append-only event log for one execution."""

    __slots__ = ("events",)

    def __init__(self):
        self.events: list[Event] = []

    def add(self, kind: str, detail: str) -> None:
        self.events.append(Event(kind, detail))

    def __len__(self) -> int:
        return len(self.events)

    def __iter__(self):
        return iter(self.events)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Trace):
            return NotImplemented
        return self.events == other.events

    def dump(self) -> str:
        """Line-oriented ``seq kind detail`` rendering for golden tests."""
        return "".join(
            f"{seq} {e.kind} {e.detail}\n" for seq, e in enumerate(self.events)
        )


def first_divergence(a: Trace, b: Trace):
    """Index and event pair where two traces first differ, else None.

    A missing event (one trace being a prefix of the other) diverges at
    the shorter trace's end with ``None`` standing in for the absent
    side.
    """
    for i, (ea, eb) in enumerate(zip(a.events, b.events)):
        if ea != eb:
            return i, ea, eb
    if len(a) != len(b):
        i = min(len(a), len(b))
        longer = a if len(a) > len(b) else b
        ea = longer.events[i] if longer is a else None
        eb = longer.events[i] if longer is b else None
        return i, ea, eb
    return None
