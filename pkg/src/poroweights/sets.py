"""Symbolic closed null subsets of the real line with exact window queries.

Every supported set variant is locally finite: any bounded window contains
finitely many points.  Queries answer from a run-compressed form (maximal
arithmetic progressions of points), so hole radii and integrals stay cheap
on windows whose raw point count would be enormous.  Materialising points
(``points_in``, ``gaps``) is capped at ``DEFAULT_POINT_CAP``.

All operations are pure functions of immutable values; concurrent use needs
no locking.
"""

from __future__ import annotations

import json
import math
from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from functools import lru_cache
from math import fsum
from typing import Iterator, Optional, Union as TUnion

from .intervals import GapList, Interval

DEFAULT_POINT_CAP = 1_000_000

MAX_CANTOR_DEPTH = 18  # 2^(d+1) endpoints must stay well under the point cap


class EmptySetError(ValueError):
    """Raised when a query needs at least one point and the set has none."""


class PointCapExceeded(RuntimeError):
    """Raised when a window would materialise more points than the cap allows."""

    def __init__(self, count: int, cap: int, window: tuple[float, float]):
        self.count = count
        self.cap = cap
        self.window = window
        super().__init__(
            f"window {window} holds {count} points, above the cap of {cap}"
        )


class SetFormatError(ValueError):
    """Raised by the JSON parser on a malformed set description."""


@dataclass(frozen=True)
class Run:
    """Arithmetic progression of points: start + i*step for i in [0, count)."""

    start: float
    step: float
    count: int

    @property
    def end(self) -> float:
        if self.count == 1:
            return self.start
        return self.start + (self.count - 1) * self.step

    def point(self, i: int) -> float:
        return self.start + i * self.step

    def points(self) -> list[float]:
        if self.count == 1:
            return [self.start]
        return [self.start + i * self.step for i in range(self.count)]


def _compress(points: list[float]) -> list[Run]:
    """Greedy compression of a sorted, deduplicated point list into runs."""
    runs: list[Run] = []
    i, n = 0, len(points)
    while i < n:
        if i + 1 == n:
            runs.append(Run(points[i], 0.0, 1))
            break
        step = points[i + 1] - points[i]
        j = i + 1
        while j + 1 < n and points[j + 1] - points[j] == step:
            j += 1
        if j - i >= 1 and step > 0.0:
            runs.append(Run(points[i], step, j - i + 1))
            i = j + 1
        else:
            runs.append(Run(points[i], 0.0, 1))
            i += 1
    return runs


def _index_floor(t: float, step: float) -> int:
    """Largest integer k with k*step <= t, robust to float rounding."""
    k = math.floor(t / step)
    while k * step > t:
        k -= 1
    while (k + 1) * step <= t:
        k += 1
    return k


def _index_ceil(t: float, step: float) -> int:
    k = math.ceil(t / step)
    while k * step < t:
        k += 1
    while (k - 1) * step >= t:
        k -= 1
    return k


class SetDescription:
    """Base for all set variants.  Subclasses implement the window primitives."""

    # -- primitives ---------------------------------------------------------

    def runs_in(self, lo: float, hi: float) -> list[Run]:
        """Runs covering exactly the points of the set in the closed [lo, hi]."""
        raise NotImplementedError

    def nearest_leq(self, x: float) -> Optional[float]:
        """Largest point <= x, or None."""
        raise NotImplementedError

    def nearest_geq(self, x: float) -> Optional[float]:
        """Smallest point >= x, or None."""
        raise NotImplementedError

    # -- derived queries ----------------------------------------------------

    def count_in(self, lo: float, hi: float) -> int:
        return sum(r.count for r in self.runs_in(lo, hi))

    def points_in(self, lo: float, hi: float, cap: int = DEFAULT_POINT_CAP) -> list[float]:
        runs = self.runs_in(lo, hi)
        total = sum(r.count for r in runs)
        if total > cap:
            raise PointCapExceeded(total, cap, (lo, hi))
        out: list[float] = []
        for r in runs:
            out.extend(r.points())
        return out

    def is_empty(self) -> bool:
        raise NotImplementedError

    def __contains__(self, x: float) -> bool:
        p = self.nearest_leq(x)
        return p is not None and p == x


# ---------------------------------------------------------------------------
# concrete variants
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FinitePoints(SetDescription):
    points: tuple[float, ...]

    def __init__(self, points):
        pts = sorted(set(float(p) for p in points))
        if not pts:
            raise ValueError("FinitePoints needs at least one point")
        if not all(math.isfinite(p) for p in pts):
            raise ValueError("FinitePoints requires finite coordinates")
        object.__setattr__(self, "points", tuple(pts))

    def runs_in(self, lo: float, hi: float) -> list[Run]:
        i = bisect_left(self.points, lo)
        j = bisect_right(self.points, hi)
        return _compress(list(self.points[i:j]))

    def nearest_leq(self, x: float) -> Optional[float]:
        i = bisect_right(self.points, x)
        return self.points[i - 1] if i > 0 else None

    def nearest_geq(self, x: float) -> Optional[float]:
        i = bisect_left(self.points, x)
        return self.points[i] if i < len(self.points) else None

    def is_empty(self) -> bool:
        return False


EXTENTS = ("two_sided", "right", "left")


@dataclass(frozen=True)
class Lattice(SetDescription):
    """origin + k*step for integer k; extent restricts k >= 0 ('right') or k <= 0 ('left')."""

    origin: float
    step: float
    extent: str = "two_sided"

    def __post_init__(self):
        if not self.step > 0:
            raise ValueError("lattice step must be positive")
        if self.extent not in EXTENTS:
            raise ValueError(f"extent must be one of {EXTENTS}")

    def _k_bounds(self, lo: float, hi: float) -> tuple[int, int]:
        k_lo = _index_ceil(lo - self.origin, self.step)
        k_hi = _index_floor(hi - self.origin, self.step)
        if self.extent == "right":
            k_lo = max(k_lo, 0)
        elif self.extent == "left":
            k_hi = min(k_hi, 0)
        return k_lo, k_hi

    def runs_in(self, lo: float, hi: float) -> list[Run]:
        k_lo, k_hi = self._k_bounds(lo, hi)
        if k_lo > k_hi:
            return []
        count = k_hi - k_lo + 1
        return [Run(self.origin + k_lo * self.step, self.step, count)]

    def nearest_leq(self, x: float) -> Optional[float]:
        if x == math.inf:
            # only a left-bounded-above lattice has a largest point
            return self.origin if self.extent == "left" else None
        if not math.isfinite(x):
            return None
        k = _index_floor(x - self.origin, self.step)
        if self.extent == "right" and k < 0:
            return None
        if self.extent == "left" and k > 0:
            k = 0
        return self.origin + k * self.step

    def nearest_geq(self, x: float) -> Optional[float]:
        if x == -math.inf:
            return self.origin if self.extent == "right" else None
        if not math.isfinite(x):
            return None
        k = _index_ceil(x - self.origin, self.step)
        if self.extent == "left" and k > 0:
            return None
        if self.extent == "right" and k < 0:
            k = 0
        return self.origin + k * self.step

    def is_empty(self) -> bool:
        return False


@dataclass(frozen=True)
class GeometricPlusLattice(SetDescription):
    """{-ratio**m : m >= 1} joined with a lattice part.

    The geometric branch marches to -infinity; with ratio 2 and a unit
    right-sided lattice this is the standard mixed-speed catalog set.
    """

    ratio: float
    lattice: Lattice

    def __post_init__(self):
        if not self.ratio > 1:
            raise ValueError("ratio must exceed 1")

    def _geom_in(self, lo: float, hi: float) -> list[float]:
        out = []
        v = self.ratio
        while -v >= lo:
            if -v <= hi:
                out.append(-v)
            v *= self.ratio
        out.reverse()
        return out

    def _geom_leq(self, x: float) -> Optional[float]:
        if x >= -self.ratio:
            return -self.ratio
        if x == -math.inf:
            return None
        v = self.ratio
        while v < -x:
            v *= self.ratio
        return -v

    def _geom_geq(self, x: float) -> Optional[float]:
        if x > -self.ratio:
            return None
        v = self.ratio
        while v * self.ratio <= -x:
            v *= self.ratio
        return -v

    def runs_in(self, lo: float, hi: float) -> list[Run]:
        geom = _compress(self._geom_in(lo, hi))
        latt = self.lattice.runs_in(lo, hi)
        return _merge_run_lists([geom, latt], lo, hi)

    def nearest_leq(self, x: float) -> Optional[float]:
        cands = [p for p in (self._geom_leq(x), self.lattice.nearest_leq(x)) if p is not None]
        return max(cands) if cands else None

    def nearest_geq(self, x: float) -> Optional[float]:
        cands = [p for p in (self._geom_geq(x), self.lattice.nearest_geq(x)) if p is not None]
        return min(cands) if cands else None

    def is_empty(self) -> bool:
        return False


@lru_cache(maxsize=64)
def _cantor_endpoints(lo: float, hi: float, middle: float, depth: int) -> tuple[float, ...]:
    intervals = [(lo, hi)]
    for _ in range(depth):
        nxt = []
        for a, b in intervals:
            keep = (b - a) * (1.0 - middle) / 2.0
            nxt.append((a, a + keep))
            nxt.append((b - keep, b))
        intervals = nxt
    pts: list[float] = []
    for a, b in intervals:
        pts.append(a)
        pts.append(b)
    return tuple(sorted(set(pts)))


@dataclass(frozen=True)
class CantorIterate(SetDescription):
    """Endpoint set of the n-th step of the middle-fraction removal scheme.

    This is a finite set (the limit set is out of scope); all queries stay exact.
    """

    lo: float
    hi: float
    middle: float
    depth: int

    def __post_init__(self):
        if not self.lo < self.hi:
            raise ValueError("need lo < hi")
        if not 0.0 < self.middle < 1.0:
            raise ValueError("middle fraction must be in (0, 1)")
        if not 0 <= self.depth <= MAX_CANTOR_DEPTH:
            raise ValueError(f"depth must be in [0, {MAX_CANTOR_DEPTH}]")

    def _pts(self) -> tuple[float, ...]:
        return _cantor_endpoints(self.lo, self.hi, self.middle, self.depth)

    def runs_in(self, lo: float, hi: float) -> list[Run]:
        pts = self._pts()
        i = bisect_left(pts, lo)
        j = bisect_right(pts, hi)
        return _compress(list(pts[i:j]))

    def nearest_leq(self, x: float) -> Optional[float]:
        pts = self._pts()
        i = bisect_right(pts, x)
        return pts[i - 1] if i > 0 else None

    def nearest_geq(self, x: float) -> Optional[float]:
        pts = self._pts()
        i = bisect_left(pts, x)
        return pts[i] if i < len(pts) else None

    def is_empty(self) -> bool:
        return False


@dataclass(frozen=True)
class UnionSet(SetDescription):
    members: tuple[SetDescription, ...]

    def __init__(self, members):
        ms = tuple(members)
        if not ms:
            raise ValueError("union needs at least one member")
        object.__setattr__(self, "members", ms)

    def runs_in(self, lo: float, hi: float) -> list[Run]:
        return _merge_run_lists([m.runs_in(lo, hi) for m in self.members], lo, hi)

    def nearest_leq(self, x: float) -> Optional[float]:
        cands = [p for p in (m.nearest_leq(x) for m in self.members) if p is not None]
        return max(cands) if cands else None

    def nearest_geq(self, x: float) -> Optional[float]:
        cands = [p for p in (m.nearest_geq(x) for m in self.members) if p is not None]
        return min(cands) if cands else None

    def is_empty(self) -> bool:
        return all(m.is_empty() for m in self.members)


@dataclass(frozen=True)
class Translate(SetDescription):
    inner: SetDescription
    shift: float

    def runs_in(self, lo: float, hi: float) -> list[Run]:
        return [
            Run(r.start + self.shift, r.step, r.count)
            for r in self.inner.runs_in(lo - self.shift, hi - self.shift)
        ]

    def nearest_leq(self, x: float) -> Optional[float]:
        p = self.inner.nearest_leq(x - self.shift)
        return None if p is None else p + self.shift

    def nearest_geq(self, x: float) -> Optional[float]:
        p = self.inner.nearest_geq(x - self.shift)
        return None if p is None else p + self.shift

    def is_empty(self) -> bool:
        return self.inner.is_empty()


@dataclass(frozen=True)
class Reflect(SetDescription):
    """Image of the inner set under x -> -x."""

    inner: SetDescription

    def runs_in(self, lo: float, hi: float) -> list[Run]:
        out = []
        for r in reversed(self.inner.runs_in(-hi, -lo)):
            out.append(Run(-r.end, r.step, r.count))
        return out

    def nearest_leq(self, x: float) -> Optional[float]:
        p = self.inner.nearest_geq(-x)
        return None if p is None else -p

    def nearest_geq(self, x: float) -> Optional[float]:
        p = self.inner.nearest_leq(-x)
        return None if p is None else -p

    def is_empty(self) -> bool:
        return self.inner.is_empty()


@dataclass(frozen=True)
class Cutoff(SetDescription):
    """inner n [point, inf) for side 'right', inner n (-inf, point] for side 'left'."""

    inner: SetDescription
    point: float
    side: str

    def __post_init__(self):
        if self.side not in ("right", "left"):
            raise ValueError("side must be 'right' or 'left'")

    def runs_in(self, lo: float, hi: float) -> list[Run]:
        if self.side == "right":
            lo = max(lo, self.point)
        else:
            hi = min(hi, self.point)
        if lo > hi:
            return []
        return self.inner.runs_in(lo, hi)

    def nearest_leq(self, x: float) -> Optional[float]:
        if self.side == "left":
            p = self.inner.nearest_leq(min(x, self.point))
            return p
        p = self.inner.nearest_leq(x)
        if p is None or p < self.point:
            return None
        return p

    def nearest_geq(self, x: float) -> Optional[float]:
        if self.side == "right":
            return self.inner.nearest_geq(max(x, self.point))
        p = self.inner.nearest_geq(x)
        if p is None or p > self.point:
            return None
        return p

    def is_empty(self) -> bool:
        if self.side == "right":
            return self.inner.nearest_geq(self.point) is None
        return self.inner.nearest_leq(self.point) is None


def _merge_run_lists(lists: list[list[Run]], lo: float, hi: float) -> list[Run]:
    """Merge per-member run lists; spatially disjoint lists concatenate exactly.

    Interleaved members fall back to a capped point merge.
    """
    runs = [r for lst in lists for r in lst]
    runs.sort(key=lambda r: (r.start, r.end))
    disjoint = all(runs[i].end < runs[i + 1].start for i in range(len(runs) - 1))
    if disjoint:
        return runs
    total = sum(r.count for r in runs)
    if total > DEFAULT_POINT_CAP:
        raise PointCapExceeded(total, DEFAULT_POINT_CAP, (lo, hi))
    pts = sorted({p for r in runs for p in r.points()})
    return _compress(pts)


# ---------------------------------------------------------------------------
# transform helpers
# ---------------------------------------------------------------------------


def reflect(e: SetDescription) -> SetDescription:
    return e.inner if isinstance(e, Reflect) else Reflect(e)


def translate(e: SetDescription, t: float) -> SetDescription:
    return Translate(e, t)


def cutoff(e: SetDescription, point: float, side: str) -> SetDescription:
    return Cutoff(e, point, side)


def union(*members: SetDescription) -> SetDescription:
    return UnionSet(members)


# ---------------------------------------------------------------------------
# window queries
# ---------------------------------------------------------------------------


def distance(e: SetDescription, x: float) -> float:
    """Exact distance from x to the set; zero iff x is a set point."""
    leq = e.nearest_leq(x)
    geq = e.nearest_geq(x)
    if leq is None and geq is None:
        raise EmptySetError("distance undefined for an empty set")
    best = math.inf
    if leq is not None:
        best = min(best, x - leq)
    if geq is not None:
        best = min(best, geq - x)
    return best


def set_distance(e: SetDescription, i: Interval) -> float:
    """inf over x in I of d(x, E); zero when the closure of I meets the set."""
    p = e.nearest_geq(i.lo)
    if p is not None and p <= i.hi:
        return 0.0
    best = math.inf
    leq = e.nearest_leq(i.lo)
    if leq is not None:
        best = min(best, i.lo - leq)
    geq = e.nearest_geq(i.hi)
    if geq is not None:
        best = min(best, geq - i.hi)
    if best is math.inf:
        raise EmptySetError("set distance undefined for an empty set")
    return best


def _interior_runs(e: SetDescription, i: Interval) -> list[Run]:
    """Runs of set points strictly inside the open interval."""
    out = []
    for r in e.runs_in(i.lo, i.hi):
        start, step, count = r.start, r.step, r.count
        if start == i.lo:
            start += step
            count -= 1
        if count > 0:
            last = start + (count - 1) * step if count > 1 else start
            if last == i.hi:
                count -= 1
        if count > 0:
            out.append(Run(start, step, count))
    return out


def iter_components(e: SetDescription, i: Interval) -> Iterator[tuple]:
    """Yield the components of I \\ E without materialising points.

    Items are ``("span", a, b)`` for an explicit component or
    ``("cells", start, step, m)`` for m consecutive components of equal
    length ``step`` between the points of an arithmetic run.
    """
    prev = i.lo
    for r in _interior_runs(e, i):
        if r.start > prev:
            yield ("span", prev, r.start)
        if r.count >= 2:
            yield ("cells", r.start, r.step, r.count - 1)
        prev = r.end
    if i.hi > prev:
        yield ("span", prev, i.hi)


def component_lengths(e: SetDescription, i: Interval) -> Iterator[tuple[float, int]]:
    """(length, multiplicity) pairs over the components of I \\ E."""
    for item in iter_components(e, i):
        if item[0] == "span":
            yield (item[2] - item[1], 1)
        else:
            yield (item[2], item[3])


def max_component_length(e: SetDescription, i: Interval) -> float:
    best = 0.0
    for length, _ in component_lengths(e, i):
        if length > best:
            best = length
    return best


def largest_component(e: SetDescription, i: Interval) -> Optional[Interval]:
    """Leftmost component of I \\ E of maximal length, or None if I is covered."""
    best: Optional[Interval] = None
    for item in iter_components(e, i):
        if item[0] == "span":
            cand = Interval(item[1], item[2])
        else:
            cand = Interval(item[1], item[1] + item[2])
        if best is None or cand.length > best.length:
            best = cand
    return best


def min_component_length(e: SetDescription, i: Interval) -> float:
    best = math.inf
    for length, _ in component_lengths(e, i):
        if 0 < length < best:
            best = length
    return best if best is not math.inf else i.length


def gaps(e: SetDescription, i: Interval, cap: int = DEFAULT_POINT_CAP) -> GapList:
    """Explicit ordered decomposition of I \\ E into open components."""
    if e.is_empty():
        raise EmptySetError("gap decomposition needs a non-empty set")
    pts = [p for p in e.points_in(i.lo, i.hi, cap=cap) if i.lo < p < i.hi]
    bounds = [i.lo] + pts + [i.hi]
    comps = tuple(
        Interval(a, b) for a, b in zip(bounds[:-1], bounds[1:]) if b > a
    )
    total = fsum(c.length for c in comps)
    return GapList(
        interval=i,
        components=comps,
        left_touches=distance(e, i.lo) > 0.0,
        right_touches=distance(e, i.hi) > 0.0,
        total_length=total,
    )


def neighborhood_measure(e: SetDescription, i: Interval, eps: float, cap: int = DEFAULT_POINT_CAP) -> float:
    """Lebesgue measure of {x : d(x, E) < eps} intersected with I, exactly."""
    if not eps > 0:
        raise ValueError("eps must be positive")
    pts = e.points_in(i.lo - eps, i.hi + eps, cap=cap)
    pieces: list[tuple[float, float]] = []
    cur_lo = cur_hi = None
    for p in pts:
        a, b = max(p - eps, i.lo), min(p + eps, i.hi)
        if b <= a:
            continue
        if cur_hi is None:
            cur_lo, cur_hi = a, b
        elif a <= cur_hi:
            cur_hi = max(cur_hi, b)
        else:
            pieces.append((cur_lo, cur_hi))
            cur_lo, cur_hi = a, b
    if cur_hi is not None:
        pieces.append((cur_lo, cur_hi))
    return fsum(b - a for a, b in pieces)


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------


def to_dict(e: SetDescription) -> dict:
    if isinstance(e, FinitePoints):
        return {"kind": "finite", "points": list(e.points)}
    if isinstance(e, Lattice):
        return {"kind": "lattice", "origin": e.origin, "step": e.step, "extent": e.extent}
    if isinstance(e, GeometricPlusLattice):
        return {"kind": "geometric_lattice", "ratio": e.ratio, "lattice": to_dict(e.lattice)}
    if isinstance(e, CantorIterate):
        return {
            "kind": "cantor",
            "lo": e.lo,
            "hi": e.hi,
            "middle": e.middle,
            "depth": e.depth,
        }
    if isinstance(e, UnionSet):
        return {"kind": "union", "members": [to_dict(m) for m in e.members]}
    if isinstance(e, Translate):
        return {"kind": "translate", "shift": e.shift, "inner": to_dict(e.inner)}
    if isinstance(e, Reflect):
        return {"kind": "reflect", "inner": to_dict(e.inner)}
    if isinstance(e, Cutoff):
        return {"kind": "cutoff", "point": e.point, "side": e.side, "inner": to_dict(e.inner)}
    raise TypeError(f"unknown set variant {type(e).__name__}")


def _need(d: dict, key: str, path: str):
    if key not in d:
        raise SetFormatError(f"{path}: missing field '{key}'")
    return d[key]


def _num(d: dict, key: str, path: str) -> float:
    v = _need(d, key, path)
    if not isinstance(v, (int, float)) or isinstance(v, bool):
        raise SetFormatError(f"{path}.{key}: expected a number, got {v!r}")
    return float(v)


def from_dict(d: dict, path: str = "$") -> SetDescription:
    if not isinstance(d, dict):
        raise SetFormatError(f"{path}: expected an object, got {type(d).__name__}")
    kind = _need(d, "kind", path)
    try:
        if kind == "finite":
            pts = _need(d, "points", path)
            if not isinstance(pts, list) or not pts:
                raise SetFormatError(f"{path}.points: expected a non-empty list")
            return FinitePoints(pts)
        if kind == "lattice":
            extent = d.get("extent", "two_sided")
            return Lattice(_num(d, "origin", path), _num(d, "step", path), extent)
        if kind == "geometric_lattice":
            latt = from_dict(_need(d, "lattice", path), path + ".lattice")
            if not isinstance(latt, Lattice):
                raise SetFormatError(f"{path}.lattice: must be a lattice description")
            return GeometricPlusLattice(_num(d, "ratio", path), latt)
        if kind == "cantor":
            return CantorIterate(
                _num(d, "lo", path),
                _num(d, "hi", path),
                _num(d, "middle", path),
                int(_num(d, "depth", path)),
            )
        if kind == "union":
            members = _need(d, "members", path)
            if not isinstance(members, list) or not members:
                raise SetFormatError(f"{path}.members: expected a non-empty list")
            return UnionSet(
                [from_dict(m, f"{path}.members[{i}]") for i, m in enumerate(members)]
            )
        if kind == "translate":
            return Translate(from_dict(_need(d, "inner", path), path + ".inner"), _num(d, "shift", path))
        if kind == "reflect":
            return Reflect(from_dict(_need(d, "inner", path), path + ".inner"))
        if kind == "cutoff":
            side = _need(d, "side", path)
            return Cutoff(
                from_dict(_need(d, "inner", path), path + ".inner"),
                _num(d, "point", path),
                side,
            )
    except SetFormatError:
        raise
    except ValueError as exc:
        raise SetFormatError(f"{path}: {exc}") from exc
    raise SetFormatError(f"{path}.kind: unknown kind {kind!r}")


def to_json(e: SetDescription, indent: int = 2) -> str:
    return json.dumps(to_dict(e), indent=indent)


def from_json(text: str) -> SetDescription:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SetFormatError(f"invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    return from_dict(data)
