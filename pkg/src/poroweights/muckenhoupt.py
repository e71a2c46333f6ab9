"""Lower bounds and divergence hunting for one-sided A1 constants.

The backward-average condition is probed through its triple form: for
a < b < c the ratio

    (1/(c-a)) * integral of w over (a, b)   /   ess inf of w over (b, c)

is a lower bound for the A1 constant of the '+' side; the '-' side mirrors
the roles of the outer intervals.  Sampling triples across anchors and a
dyadic scale ladder yields either stabilising maxima (boundedness evidence)
or a monotone-growing witness chain (divergence evidence).  No upper bound
on the true constant is ever claimed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .intervals import Interval
from .porosity import (
    SweepResult,
    anchor_candidates,
    certification_probes,
    sweep_parameters,
)
from .scaling import LadderReport, rising_prefix_maxima
from .sets import SetDescription, min_component_length
from .weights import WeightSpec, ess_inf, integrate

SIDES = ("plus", "minus", "two_sided")
POROSITY_SIDE = {"plus": "right", "minus": "left", "two_sided": "two_sided"}

TRIPLE_RATIOS = (0.25, 0.5, 1.0, 2.0, 4.0)
DEFAULT_TRIPLE_OCTAVES = 24
TRIPLE_ANCHOR_CAP = 32


def triple_value(w: WeightSpec, a: float, b: float, c: float, side: str = "plus") -> float:
    """Exact triple ratio; infinite when the averaged window is non-integrable."""
    if not a < b < c:
        raise ValueError("need a < b < c")
    if side == "plus":
        num = integrate(w, Interval(a, b))
        den = ess_inf(w, Interval(b, c))
    elif side == "minus":
        num = integrate(w, Interval(b, c))
        den = ess_inf(w, Interval(a, b))
    else:
        raise ValueError("side must be 'plus' or 'minus'")
    if num == math.inf:
        return math.inf
    return num / (c - a) / den


@dataclass(frozen=True)
class TripleSample:
    a: float
    b: float
    c: float
    value: float
    scale: float


@dataclass(frozen=True)
class TripleFamily:
    """Triples (anchor - s*u, anchor, anchor + s) on a dyadic scale ladder.

    The '-' side mirrors to (anchor - s, anchor, anchor + s*u).  Extremal
    configurations place the middle point near the set and the comparison
    interval inside a large hole, which this layout covers as u varies.
    """

    anchors: tuple[float, ...]
    octaves: tuple[int, ...]
    ratios: tuple[float, ...] = TRIPLE_RATIOS

    @classmethod
    def default(
        cls,
        e: SetDescription,
        window: Interval,
        octaves: int = DEFAULT_TRIPLE_OCTAVES,
        anchor_cap: int = TRIPLE_ANCHOR_CAP,
    ) -> "TripleFamily":
        finest = min_component_length(e, window)
        k_lo = math.floor(math.log2(finest)) - 4
        return cls(
            anchors=tuple(anchor_candidates(e, window, anchor_cap)),
            octaves=tuple(range(k_lo, k_lo + octaves)),
        )

    def triples(self, side: str) -> list[tuple[float, float, float, float]]:
        """(a, b, c, scale) tuples for the requested side."""
        out = []
        for m in self.anchors:
            for k in self.octaves:
                s = 2.0 ** k
                for u in self.ratios:
                    if side == "plus":
                        out.append((m - s * u, m, m + s, s))
                    else:
                        out.append((m - s, m, m + s * u, s))
        return out

    def reflected(self) -> "TripleFamily":
        return TripleFamily(
            anchors=tuple(sorted(-a for a in self.anchors)),
            octaves=self.octaves,
            ratios=self.ratios,
        )


@dataclass(frozen=True)
class A1Report:
    """Sampled evidence about one one-sided constant of a fixed weight."""

    side: str
    alpha: float
    triple_count: int
    constant_lower_bound: float
    best: Optional[TripleSample]
    divergence_flag: bool
    ladder: tuple[tuple[int, float], ...]
    growth_per_octave: float
    witnesses: tuple[TripleSample, ...]
    nonintegrable_count: int
    samples: tuple[TripleSample, ...] = field(repr=False, default=())

    @property
    def bounded_evidence(self) -> bool:
        return not self.divergence_flag and self.nonintegrable_count == 0


def _scan_side(w: WeightSpec, side: str, family: TripleFamily) -> A1Report:
    samples: list[TripleSample] = []
    nonint = 0
    best: Optional[TripleSample] = None
    for a, b, c, s in family.triples(side):
        v = triple_value(w, a, b, c, side)
        t = TripleSample(a, b, c, v, s)
        samples.append(t)
        if v == math.inf:
            nonint += 1
            continue
        if best is None or v > best.value:
            best = t
    ladder = LadderReport.from_samples(
        (round(math.log2(t.scale)), t.value) for t in samples if math.isfinite(t.value)
    )
    witnesses: tuple[TripleSample, ...] = ()
    if ladder.divergent:
        rows = sorted(
            ((t.scale, t, t.value) for t in samples if math.isfinite(t.value)),
            key=lambda r: (r[0], r[2]),
        )
        witnesses = tuple(r[1] for r in rising_prefix_maxima(rows))[-16:]
    return A1Report(
        side=side,
        alpha=w.alpha,
        triple_count=len(samples),
        constant_lower_bound=best.value if best else 0.0,
        best=best,
        divergence_flag=ladder.divergent,
        ladder=ladder.ladder,
        growth_per_octave=ladder.growth_per_octave,
        witnesses=witnesses,
        nonintegrable_count=nonint,
        samples=tuple(samples),
    )


def a1_constant(w: WeightSpec, side: str, probes: TripleFamily) -> A1Report:
    """Sampled lower bound (and divergence verdict) for the requested side.

    The two-sided constant is the max of the two one-sided scans, mirroring
    the split of the two-sided class into its one-sided halves.
    """
    if side not in SIDES:
        raise ValueError(f"side must be one of {SIDES}")
    if side in ("plus", "minus"):
        return _scan_side(w, side, probes)
    plus = _scan_side(w, "plus", probes)
    minus = _scan_side(w, "minus", probes)
    dominant = plus if plus.constant_lower_bound >= minus.constant_lower_bound else minus
    merged_ladder = LadderReport.from_samples(list(plus.ladder) + list(minus.ladder))
    return A1Report(
        side="two_sided",
        alpha=w.alpha,
        triple_count=plus.triple_count + minus.triple_count,
        constant_lower_bound=dominant.constant_lower_bound,
        best=dominant.best,
        divergence_flag=plus.divergence_flag or minus.divergence_flag,
        ladder=merged_ladder.ladder,
        growth_per_octave=max(plus.growth_per_octave, minus.growth_per_octave),
        witnesses=plus.witnesses + minus.witnesses,
        nonintegrable_count=plus.nonintegrable_count + minus.nonintegrable_count,
        samples=plus.samples + minus.samples,
    )


# ---------------------------------------------------------------------------
# critical exponent search
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CriticalAlphaResult:
    alpha: Optional[float]
    grid: tuple[tuple[float, bool], ...]  # (alpha, bounded evidence)
    monotone: bool
    porosity: SweepResult
    evidence: Optional[A1Report]
    note: str


def critical_alpha(
    e: SetDescription,
    side: str,
    window: Interval,
    tol: float = 2.0 ** -8,
    octaves: int = DEFAULT_TRIPLE_OCTAVES,
    probe_seed: int = 0,
) -> CriticalAlphaResult:
    """Largest exponent (within tol) whose scan shows no divergence.

    The matching one-sided porosity certificate is a precondition: when the
    probe sweep refutes porosity, no exponent can work and the search reports
    'no alpha found up to the grid floor' together with divergence evidence
    at alpha = 1/2.  Monotonicity of boundedness in alpha is assumed by the
    bisection and re-checked on the sampled grid afterwards.
    """
    if side not in SIDES:
        raise ValueError(f"side must be one of {SIDES}")
    porosity_probes = certification_probes(e, window, seed=probe_seed)
    sweep = sweep_parameters(e, porosity_probes, POROSITY_SIDE[side])
    family = TripleFamily.default(e, window, octaves=octaves)
    if not sweep.certified:
        evidence = a1_constant(WeightSpec(e, 0.5), side, family)
        return CriticalAlphaResult(
            alpha=None,
            grid=(),
            monotone=True,
            porosity=sweep,
            evidence=evidence,
            note="no alpha found up to grid floor: porosity refuted on probes",
        )
    grid: list[tuple[float, bool]] = []
    lo, hi = 0.0, 1.0
    best_report: Optional[A1Report] = None
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        report = a1_constant(WeightSpec(e, mid), side, family)
        ok = report.bounded_evidence
        grid.append((mid, ok))
        if ok:
            lo = mid
            best_report = report
        else:
            hi = mid
    passes = [a for a, ok in grid if ok]
    fails = [a for a, ok in grid if not ok]
    monotone = not passes or not fails or max(passes) < min(fails)
    return CriticalAlphaResult(
        alpha=lo if lo > 0.0 else None,
        grid=tuple(grid),
        monotone=monotone,
        porosity=sweep,
        evidence=best_report,
        note="bisection on (0, 1)" if lo > 0.0 else "no alpha found up to grid floor",
    )
