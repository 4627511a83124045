"""Runtime values: secret scalars, containers, and conversions.

Clear data rides as plain Python ints, floats, and bools; secret data
as :class:`~py2spdz.spdzsim.fixedpoint.SFix` and :class:`SInt`.
Containers are always secret — that is the only form the emitter
allocates — and carry a creation-order id so trace events can name them
without exposing contents.
"""

from __future__ import annotations

from dataclasses import dataclass

from .fixedpoint import DEFAULT_K, SFix


@dataclass(frozen=True)
class SInt:
    """One secret integer of at most k-1 magnitude bits."""

    value: int
    k: int = DEFAULT_K

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return f"SInt({self.value})"


def sint_fit(value: int, k: int) -> SInt:
    if abs(value) >= 1 << (k - 1):
        raise OverflowError(
            f"secret integer overflow: |{value}| does not fit in {k - 1} bits"
        )
    return SInt(value, k)


class Array:
    """Secret vector with homogeneous element kind ('sint' or 'sfix')."""

    __slots__ = ("kind", "cells", "cid")

    def __init__(self, kind: str, cells: list, cid: str):
        self.kind = kind
        self.cells = cells
        self.cid = cid

    @property
    def length(self) -> int:
        return len(self.cells)


class Matrix:
    """Secret matrix stored as rows of :class:`Array`."""

    __slots__ = ("rows", "cid")

    def __init__(self, rows: list, cid: str):
        self.rows = rows
        self.cid = cid

    @property
    def length(self) -> int:
        return len(self.rows)


def is_secret(v) -> bool:
    return isinstance(v, (SInt, SFix, Array, Matrix))


def kind_of(v) -> str:
    """Short secrecy-kind label used in trace events; never a value."""
    if isinstance(v, SInt):
        return "sint"
    if isinstance(v, SFix):
        return "sfix"
    if isinstance(v, Array):
        return f"array-{v.kind}"
    if isinstance(v, Matrix):
        return "matrix"
    if isinstance(v, bool) or isinstance(v, int):
        return "cint"
    if isinstance(v, float):
        return "cfix"
    if isinstance(v, (list, tuple)):
        return "clist"
    return type(v).__name__


def to_python(v):
    """Plain-Python image of a runtime value, for comparisons."""
    if isinstance(v, SInt):
        return v.value
    if isinstance(v, SFix):
        return v.real
    if isinstance(v, Array):
        return [to_python(c) for c in v.cells]
    if isinstance(v, Matrix):
        return [to_python(r) for r in v.rows]
    if isinstance(v, bool):
        return int(v)
    if isinstance(v, (list, tuple)):
        return [to_python(c) for c in v]
    return v
