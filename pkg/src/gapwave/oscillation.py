"""Zero places, sign changes, the counting function s(r), and densities.

A "zero place" is a maximal closed interval on which the signal stays within
zero tolerance; a point zero is the degenerate interval.  A place is a sign
change when the nearest clearly-nonzero samples on both sides carry opposite
signs.  The counting function s(r) counts sign-change places with left
endpoint in the half-open interval (0, r]; the half-open convention makes
per-period counts additive.  For r < 0 the mirror convention [r, 0) is used,
which is what the two-sided averaged count integrates.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .core_signals import SampledSignal
from .errors import InvalidInputError, OutOfRangeError

Evaluator = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class ZeroPlace:
    """Maximal closed interval [left, right] where the signal is within tolerance."""

    left: float
    right: float
    sign_change: bool = False
    degenerate: bool = False

    def __post_init__(self) -> None:
        if self.right < self.left:
            raise InvalidInputError("zero place needs left <= right")

    @property
    def is_point(self) -> bool:
        return self.right == self.left


@dataclass(frozen=True)
class SignChangeReport:
    """Ordered zero places with sign-change flags over a sampled window."""

    places: tuple[ZeroPlace, ...]
    window: tuple[float, float]
    zero_tol: float

    @property
    def change_positions(self) -> np.ndarray:
        """Left endpoints of the sign-change places, ascending."""
        return np.array([p.left for p in self.places if p.sign_change], dtype=float)

    def to_json(self) -> dict:
        return {
            "schema": "gapwave/1",
            "kind": "sign_change_report",
            "window": list(self.window),
            "zero_tol": self.zero_tol,
            "places": [
                {
                    "left": p.left,
                    "right": p.right,
                    "sign_change": p.sign_change,
                    "degenerate": p.degenerate,
                }
                for p in self.places
            ],
        }


@dataclass(frozen=True)
class DensityProfile:
    """Pointwise densities s(r)/r with the tail minimum as a liminf stand-in."""

    r: np.ndarray
    s: np.ndarray
    ratio: np.ndarray
    tail_min: float
    tail_start: float
    degenerate: bool


def _default_tol(values: np.ndarray, zero_tol: float | None) -> float:
    if zero_tol is not None:
        if zero_tol < 0:
            raise InvalidInputError("zero_tol must be >= 0")
        return float(zero_tol)
    m = float(np.max(np.abs(values)))
    return 1e-9 * m


def _refine_roots(lo: np.ndarray, hi: np.ndarray, f: Evaluator, iters: int = 60) -> np.ndarray:
    """Vectorized bisection on brackets with f(lo), f(hi) of opposite sign."""
    flo = f(lo)
    lo = lo.copy()
    hi = hi.copy()
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        left = flo * fm > 0
        lo = np.where(left, mid, lo)
        flo = np.where(left, fm, flo)
        hi = np.where(left, hi, mid)
    return 0.5 * (lo + hi)


def zero_places(
    s: SampledSignal,
    zero_tol: float | None = None,
    evaluator: Evaluator | None = None,
) -> list[ZeroPlace]:
    """Maximal within-tolerance runs plus strict crossings between samples.

    With an evaluator (an exactly evaluable source such as a trigonometric
    polynomial) point zeros are refined by bisection far below grid spacing;
    without one they sit at the linear interpolation of the crossing bracket.
    Runs of two or more samples are reported with their sampled endpoints.
    An all-zero signal yields one degenerate place spanning the grid.
    """
    v = s.values
    x = s.x
    tol = _default_tol(v, zero_tol)
    zeroish = np.abs(v) <= tol
    if np.all(zeroish):
        return [ZeroPlace(float(x[0]), float(x[-1]), degenerate=True)]

    places: list[tuple[float, float]] = []

    # maximal zeroish runs
    d = np.diff(zeroish.astype(np.int8))
    starts = np.flatnonzero(d == 1) + 1
    ends = np.flatnonzero(d == -1)
    if zeroish[0]:
        starts = np.concatenate(([0], starts))
    if zeroish[-1]:
        ends = np.concatenate((ends, [v.size - 1]))
    run_single_mask = starts == ends

    # strict crossings: adjacent clearly-nonzero samples of opposite sign
    above = ~zeroish
    cross = above[:-1] & above[1:] & (v[:-1] * v[1:] < 0)
    ci = np.flatnonzero(cross)
    if ci.size:
        # linear interpolation inside each bracket
        roots = x[ci] - v[ci] * (x[ci + 1] - x[ci]) / (v[ci + 1] - v[ci])
        if evaluator is not None:
            roots = _refine_roots(x[ci], x[ci + 1], evaluator)
        places.extend((float(r), float(r)) for r in roots)

    for st, en, single in zip(starts, ends, run_single_mask):
        if (
            single
            and evaluator is not None
            and st > 0
            and en < v.size - 1
            and v[st - 1] * v[en + 1] < 0
        ):
            # a simple zero that happens to land within tolerance of a sample
            r = float(_refine_roots(x[st - 1 : st], x[en + 1 : en + 2], evaluator)[0])
            places.append((r, r))
        else:
            places.append((float(x[st]), float(x[en])))

    places.sort()
    return [ZeroPlace(a, b) for a, b in places]


def sign_change_places(
    s: SampledSignal,
    zero_tol: float | None = None,
    evaluator: Evaluator | None = None,
) -> SignChangeReport:
    """Flag each zero place by the signs of its nearest nonzero neighbors.

    A place touching the window boundary is never flagged (its outer flank is
    unknown).  Consecutive flagged places necessarily alternate surrounding
    signs, which the suite checks as an invariant.
    """
    v = s.values
    x = s.x
    tol = _default_tol(v, zero_tol)
    raw = zero_places(s, tol, evaluator)
    window = (float(x[0]), float(x[-1]))
    if len(raw) == 1 and raw[0].degenerate:
        return SignChangeReport((raw[0],), window, tol)

    nz_idx = np.flatnonzero(np.abs(v) > tol)
    nz_x = x[nz_idx]
    nz_sign = np.sign(v[nz_idx])

    flagged: list[ZeroPlace] = []
    for p in raw:
        li = np.searchsorted(nz_x, p.left, side="left") - 1
        ri = np.searchsorted(nz_x, p.right, side="right")
        if li < 0 or ri >= nz_idx.size:
            flagged.append(p)  # boundary-touching: flank unknown, not flagged
            continue
        change = nz_sign[li] * nz_sign[ri] < 0
        flagged.append(ZeroPlace(p.left, p.right, sign_change=bool(change)))
    return SignChangeReport(tuple(flagged), window, tol)


def s_count(report: SignChangeReport, r: float) -> int:
    """Number of sign-change places with left endpoint in (0, r] (or [r, 0) mirrored)."""
    lo, hi = report.window
    if r > 0 and r > hi + 1e-12 * max(1.0, abs(hi)):
        raise OutOfRangeError(f"r={r} beyond sampled window end {hi}")
    if r < 0 and r < lo - 1e-12 * max(1.0, abs(lo)):
        raise OutOfRangeError(f"r={r} beyond sampled window start {lo}")
    pos = report.change_positions
    if pos.size == 0 or r == 0:
        return 0
    if r > 0:
        return int(np.count_nonzero((pos > 0) & (pos <= r)))
    return int(np.count_nonzero((pos >= r) & (pos < 0)))


def density_profile(report: SignChangeReport, r_grid: Sequence[float]) -> DensityProfile:
    """Pointwise s(r)/r on an increasing grid of positive radii.

    tail_min is the minimum ratio over the second half of the grid (all r at
    or beyond the midpoint of the requested range); it stands in for the
    infinite-radius liminf, which a finite window cannot see.
    """
    r = np.asarray(r_grid, dtype=float)
    if r.size == 0 or np.any(np.diff(r) <= 0) or r[0] <= 0:
        raise InvalidInputError("r_grid must be positive and strictly increasing")
    counts = np.array([s_count(report, float(rv)) for rv in r], dtype=float)
    ratio = counts / r
    degenerate = bool(np.all(counts == 0))
    mid = 0.5 * (r[0] + r[-1])
    tail = ratio[r >= mid]
    tail_min = float(tail.min()) if tail.size else float("nan")
    return DensityProfile(r, counts, ratio, tail_min, float(mid), degenerate)


def averaged_S(report_pos: SignChangeReport, report_neg: SignChangeReport, r: float) -> float:
    """Two-sided logarithmically averaged count: integral of (s(t) + s(-t))/t.

    The integrand is piecewise constant, so the integral is the exact sum of
    log(r / |t_i|) over sign-change abscissae with 0 < |t_i| <= r.  Before the
    first abscissa the integrand vanishes, so no lower cutoff is needed.
    """
    if r <= 0:
        raise InvalidInputError("r must be positive")
    pos = report_pos.change_positions
    neg = report_neg.change_positions
    ts = np.concatenate([pos[(pos > 0) & (pos <= r)], -neg[(neg < 0) & (neg >= -r)]])
    if ts.size == 0:
        return 0.0
    return float(np.sum(np.log(r / ts)))
