"""Open intervals on the real line and gap decompositions.

Everything downstream treats intervals as open; the sets under study have
Lebesgue measure zero, so endpoint membership never changes a measure or an
integral.  Ties at component boundaries are resolved by half-open bookkeeping
in :class:`GapList`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field


@dataclass(frozen=True, order=True)
class Interval:
    """Bounded open interval (lo, hi) with lo < hi."""

    lo: float
    hi: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.lo) and math.isfinite(self.hi)):
            raise ValueError(f"interval endpoints must be finite, got ({self.lo}, {self.hi})")
        if not self.lo < self.hi:
            raise ValueError(f"need lo < hi, got ({self.lo}, {self.hi})")

    @property
    def length(self) -> float:
        return self.hi - self.lo

    @property
    def center(self) -> float:
        return 0.5 * (self.lo + self.hi)

    @property
    def left_half(self) -> "Interval":
        """Open left split (lo, mid)."""
        return Interval(self.lo, self.center)

    @property
    def right_half(self) -> "Interval":
        """Open right split (mid, hi); endpoint conventions are immaterial for null sets."""
        return Interval(self.center, self.hi)

    def contains(self, x: float) -> bool:
        return self.lo < x < self.hi

    def contains_interval(self, other: "Interval") -> bool:
        return self.lo <= other.lo and other.hi <= self.hi

    def shifted(self, t: float) -> "Interval":
        return Interval(self.lo + t, self.hi + t)

    def reflected(self) -> "Interval":
        return Interval(-self.hi, -self.lo)

    def as_pair(self) -> tuple[float, float]:
        return (self.lo, self.hi)


@dataclass(frozen=True)
class GapList:
    """Ordered connected components of I \\ E for a bounded interval I.

    ``left_touches`` / ``right_touches`` record whether the window endpoint
    itself is off the set (distance > 0), i.e. whether the first/last
    component could extend past the window.
    """

    interval: Interval
    components: tuple[Interval, ...]
    left_touches: bool
    right_touches: bool
    total_length: float = field(default=0.0)

    def __len__(self) -> int:
        return len(self.components)

    def largest(self) -> Interval:
        return max(self.components, key=lambda c: c.length)
