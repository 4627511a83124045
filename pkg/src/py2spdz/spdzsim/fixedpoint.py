"""Fixed-point scalar arithmetic for the simulator.

A value is ``raw / 2**f`` with ``raw`` a signed integer confined to
``|raw| < 2**(k-1)``.  Addition and subtraction are exact; a product is
formed at double width and then truncated toward negative infinity;
division and the math library go through binary64 and re-quantize.
Deterministic truncation is a simplification — some MP-SPDZ protocols
truncate probabilistically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

DEFAULT_F = 16
DEFAULT_K = 31


@dataclass(frozen=True)
class SFix:
    """One secret fixed-point scalar."""

    raw: int
    f: int = DEFAULT_F
    k: int = DEFAULT_K

    @property
    def real(self) -> float:
        return self.raw / (1 << self.f)

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return f"SFix({self.real!r}, raw={self.raw})"


def fit(raw: int, f: int, k: int) -> SFix:
    """Wrap a raw mantissa, enforcing the magnitude bound."""
    if abs(raw) >= 1 << (k - 1):
        raise OverflowError(
            f"fixed-point overflow: |{raw}| does not fit in {k - 1} bits"
        )
    return SFix(raw, f, k)


def quantize(x: float, f: int = DEFAULT_F, k: int = DEFAULT_K) -> SFix:
    """Nearest representable value, rounding halves away from zero."""
    if not math.isfinite(x):
        raise OverflowError(f"cannot quantize non-finite value {x!r}")
    raw = int(abs(x) * (1 << f) + 0.5)
    if x < 0:
        raw = -raw
    return fit(raw, f, k)


def from_int(v: int, f: int = DEFAULT_F, k: int = DEFAULT_K) -> SFix:
    """Exact widening of an integer; overflows past 2**(k-1-f)."""
    return fit(v * (1 << f), f, k)


def add(a: SFix, b: SFix) -> SFix:
    return fit(a.raw + b.raw, a.f, a.k)


def sub(a: SFix, b: SFix) -> SFix:
    return fit(a.raw - b.raw, a.f, a.k)


def neg(a: SFix) -> SFix:
    return SFix(-a.raw, a.f, a.k)


def mul(a: SFix, b: SFix) -> SFix:
    # arithmetic shift floors, which is exactly the contract
    return fit((a.raw * b.raw) >> a.f, a.f, a.k)


def scale(a: SFix, m: int) -> SFix:
    """Multiply by an integer; exact, no truncation step."""
    return fit(a.raw * m, a.f, a.k)


def div(a: SFix, b: SFix) -> SFix:
    if b.raw == 0:
        raise ZeroDivisionError("fixed-point division by zero")
    return quantize(a.real / b.real, a.f, a.k)
