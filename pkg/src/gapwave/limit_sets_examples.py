"""Scaling operators, a closed-form charge family, and two gap-signal builds.

The charge family: a fixed negative bump u0 on [0, 2] whose harmonic
extension off the line carries a charge with density q and primitive Q,
both in closed form.  The constants m = -min q, eta = max Q(x)/x, and
m' = m + q(0) drive the second construction.

The scaling operators act on boundary profiles, (A_t u)(x) = u(t x)/t, and
on line measures, (B_t mu)([a,b]) = mu([ta, tb])/t.  Taking the charge of
a profile commutes with the pair (A_t, B_t); split_check measures how well
the discrete pipeline honors that identity.

The two builds:
  * example1_build places double zeros of a gap signal on prescribed
    integer intervals and then destroys them by a half-shift sum, leaving
    intervals with no sign change at all.
  * example2_build schedules scaled copies of the charge along a geometric
    block sequence, rounds the running mass to an integer zero set, and
    realizes it as f(x) = g(x) sin(pi x) whose sign-change density dips
    below 1 - m on the scheduled windows.
"""

from __future__ import annotations

import csv
import math
import warnings
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.optimize import minimize_scalar

from .core_signals import GapSpec, Grid, SampledSignal, verify_gap
from .errors import DiagnosticError, InvalidInputError
from .hardy import hilbert_transform

__all__ = [
    "u0_profile",
    "Q_closed",
    "q_closed",
    "ChargeProfile",
    "charge_profile",
    "Example2Constants",
    "find_constants",
    "scale_u",
    "ScalingOrbit",
    "scaling_orbit",
    "IntervalMeasure",
    "scale_mu",
    "boundary_charge",
    "split_check",
    "ZeroSet",
    "integer_zero_set",
    "Example2Report",
    "Example2Result",
    "example2_build",
    "Example1Report",
    "Example1Result",
    "example1_build",
]


# ---------------------------------------------------------------------------
# closed forms


def u0_profile(x, k: float):
    """Bump -k(1-(x-1)^2)^2 on [0, 2], zero elsewhere."""
    xa = np.asarray(x, dtype=np.float64)
    y = xa - 1.0
    out = np.where(np.abs(y) <= 1.0, -k * (1.0 - y * y) ** 2, 0.0)
    return float(out) if np.isscalar(x) else out


def _weighted_log(y: np.ndarray) -> np.ndarray:
    # log|(y+1)/(y-1)| where finite; the callers multiply by powers of
    # (y^2-1), whose zeros at y = +-1 absorb the singularity, so the exact
    # singular points may take any finite placeholder (0 here)
    L = np.zeros_like(y)
    good = (y != 1.0) & (y != -1.0)
    L[good] = np.log(np.abs((y[good] + 1.0) / (y[good] - 1.0)))
    return L


def Q_closed(x, k: float):
    """Primitive of the charge density: k(y^2-1)^2 log|(y+1)/(y-1)| - 2ky^3 + (10/3)ky, y = x-1."""
    xa = np.atleast_1d(np.asarray(x, dtype=np.float64))
    y = xa - 1.0
    w = y * y - 1.0
    out = k * w * w * _weighted_log(y) - 2.0 * k * y**3 + (10.0 / 3.0) * k * y
    return float(out[0]) if np.isscalar(x) else out


def q_closed(x, k: float):
    """Charge density: 4ky(y^2-1) log|(y+1)/(y-1)| - 8ky^2 + (16/3)k, y = x-1."""
    xa = np.atleast_1d(np.asarray(x, dtype=np.float64))
    y = xa - 1.0
    w = y * y - 1.0
    out = 4.0 * k * y * w * _weighted_log(y) - 8.0 * k * y * y + (16.0 / 3.0) * k
    return float(out[0]) if np.isscalar(x) else out


@dataclass(frozen=True)
class ChargeProfile:
    """Closed-form Q, q, and boundary values u on a grid, mutually verified."""

    k: float
    grid: Grid
    Q_values: np.ndarray
    q_values: np.ndarray
    u_values: np.ndarray

    def __post_init__(self) -> None:
        for name in ("Q_values", "q_values", "u_values"):
            a = np.asarray(getattr(self, name), dtype=np.float64)
            if a.shape != (self.grid.n,):
                raise InvalidInputError(f"{name} must match the grid length")
            a.setflags(write=False)
            object.__setattr__(self, name, a)


_HQ_ANCHOR = 3.0  # u0 vanishes identically there; pins the additive constant


def transform_residual(k: float, probe: np.ndarray) -> float:
    """Max deviation of u0 from the pi-scaled anchored Hilbert transform of Q.

    The boundary values and the charge primitive determine each other through
    the transform up to a factor pi and an additive constant; anchoring at
    x = 3 (outside the bump) removes the constant.  Evaluated on a wide
    internal grid so the slowly decaying tails of Q cancel in the anchored
    difference.
    """
    n = 1 << 16
    g = Grid(-80.0, 160.0 / n, n)
    HQ = hilbert_transform(
        SampledSignal(g, Q_closed(g.points, k)), include_normalization=False
    )
    ref = np.interp(_HQ_ANCHOR, g.points, HQ.values)
    v = (np.interp(probe, g.points, HQ.values) - ref) / np.pi
    return float(np.max(np.abs(v - u0_profile(probe, k))))


def charge_profile(k: float, grid: Grid, check: bool = True) -> ChargeProfile:
    """Evaluate the closed forms on a grid; optionally verify their relations.

    Checks, when enabled: q agrees with a central difference of Q to 1e-6 of
    the density scale away from the endpoints {0, 2}, and u0 agrees with the
    anchored transform of Q to 1e-3 of the bump depth.
    """
    if not (k > 0):
        raise InvalidInputError(f"need k > 0, got {k}")
    xs = grid.points
    prof = ChargeProfile(
        k, grid, Q_closed(xs, k), q_closed(xs, k), u0_profile(xs, k)
    )
    if check:
        h = 1e-4
        mask = (np.abs(xs) > 1e-3) & (np.abs(xs - 2.0) > 1e-3)
        if np.any(mask):
            dQ = (Q_closed(xs[mask] + h, k) - Q_closed(xs[mask] - h, k)) / (2 * h)
            scale = np.max(np.abs(prof.q_values))
            err = np.max(np.abs(dQ - prof.q_values[mask]))
            if err > 1e-6 * scale:
                raise DiagnosticError(
                    f"dQ/dx deviates from q by {err:.3e} (scale {scale:.3e})"
                )
        probe = xs[(xs > -4.0) & (xs < 6.0)]
        if probe.size:
            res = transform_residual(k, probe)
            if res > 1e-3 * k:
                raise DiagnosticError(
                    f"boundary values deviate from the transform of Q by {res:.3e}"
                )
    return prof


# ---------------------------------------------------------------------------
# constants of the construction


@dataclass(frozen=True)
class Example2Constants:
    k: float
    m: float
    eta: float
    m_prime: float
    k_threshold: float
    admissible: bool


_MAX_Q_OVER_K = 16.0 / 3.0  # attained at x = 1


def _refine_min(fn, lo: float, hi: float) -> tuple[float, float]:
    xs = np.linspace(lo, hi, 4001)
    vals = fn(xs)
    i = int(np.argmin(vals))
    a, b = xs[max(i - 1, 0)], xs[min(i + 1, xs.size - 1)]
    res = minimize_scalar(fn, bounds=(a, b), method="bounded",
                          options={"xatol": 1e-12})
    if not res.success:
        raise DiagnosticError(f"refinement failed: {res.message}")
    return float(res.x), float(res.fun)


def find_constants(k: float) -> Example2Constants:
    """Scan-plus-refine the constants m, eta, m' and the admissibility bound.

    m = -min q (minimizers sit symmetrically near x = 0.06 and x = 1.94),
    eta = max_{x>0} Q(x)/x (near x = 1.52), m' = m + q(0), and the
    threshold solves k (m/k + max q/k) = 1 with max q = 16k/3.
    """
    if not (k > 0):
        raise InvalidInputError(f"need k > 0, got {k}")
    _, qmin = _refine_min(lambda x: q_closed(x, k), -4.0, 6.0)
    m = -qmin
    _, neg_eta = _refine_min(lambda x: -Q_closed(x, k) / x, 0.05, 8.0)
    eta = -neg_eta
    if not (m > 0 and eta > 0):
        raise DiagnosticError(f"constants out of order: m={m}, eta={eta}")
    m_prime = m + q_closed(0.0, k)
    if not (m_prime < m):
        raise DiagnosticError("m' should drop below m by the negative q(0)")
    k_threshold = 1.0 / (m / k + _MAX_Q_OVER_K)
    return Example2Constants(k, m, eta, m_prime, k_threshold, k < k_threshold)


# ---------------------------------------------------------------------------
# scaling operators


def scale_u(s: SampledSignal, t: float) -> SampledSignal:
    """(A_t u)(x) = u(t x)/t resampled on the grid of u.

    For t > 1 the operator needs values of u beyond the window edge; those
    are taken as 0 and a truncation warning is issued if the edge values
    were not already negligible.
    """
    if not (t > 0):
        raise InvalidInputError(f"need t > 0, got {t}")
    x = s.x
    tx = t * x
    lo, hi = x[0], x[-1]
    outside = (tx < lo) | (tx > hi)
    if np.any(outside):
        edge = max(abs(s.values[0]), abs(s.values[-1]))
        if edge > 1e-12 * max(s.max_abs(), 1e-300):
            warnings.warn(
                "scaling needs values outside the window; truncating to 0",
                RuntimeWarning,
                stacklevel=2,
            )
    w = np.interp(tx, x, s.values, left=0.0, right=0.0) / t
    return SampledSignal(s.grid, w)


@dataclass(frozen=True)
class ScalingOrbit:
    """Snapshots A_t u of one boundary profile along a sequence of scales."""

    base: SampledSignal
    t_values: tuple[float, ...]
    profiles: tuple[SampledSignal, ...]


def scaling_orbit(base: SampledSignal, t_values: Sequence[float]) -> ScalingOrbit:
    ts = tuple(float(t) for t in t_values)
    if not ts or any(t <= 0 for t in ts):
        raise InvalidInputError("scales must be positive and nonempty")
    return ScalingOrbit(base, ts, tuple(scale_u(base, t) for t in ts))


@dataclass(frozen=True)
class IntervalMeasure:
    """Nonuniform-cell measure on the line: masses over [edges_i, edges_{i+1}]."""

    edges: np.ndarray
    masses: np.ndarray

    def __post_init__(self) -> None:
        e = np.asarray(self.edges, dtype=np.float64)
        m = np.asarray(self.masses, dtype=np.float64)
        if e.ndim != 1 or e.size < 2 or np.any(np.diff(e) <= 0):
            raise InvalidInputError("edges must be strictly increasing, length >= 2")
        if m.shape != (e.size - 1,):
            raise InvalidInputError("need one mass per cell")
        e.setflags(write=False)
        m.setflags(write=False)
        object.__setattr__(self, "edges", e)
        object.__setattr__(self, "masses", m)

    def _cumulative(self, t) -> np.ndarray:
        cum = np.concatenate([[0.0], np.cumsum(self.masses)])
        return np.interp(t, self.edges, cum)  # uniform density within a cell

    def mass(self, a: float, b: float) -> float:
        if b < a:
            raise InvalidInputError("need a <= b")
        return float(self._cumulative(b) - self._cumulative(a))

    def total(self) -> float:
        return float(np.sum(self.masses))


def scale_mu(mu: IntervalMeasure, t: float) -> IntervalMeasure:
    """(B_t mu)([a, b]) = mu([ta, tb])/t on the same cell decomposition."""
    if not (t > 0):
        raise InvalidInputError(f"need t > 0, got {t}")
    e = mu.edges
    if t > 1 and (abs(mu.masses[0]) > 0 or abs(mu.masses[-1]) > 0):
        # reads reach t*edges, beyond the span; only harmless if the
        # boundary cells were already empty
        warnings.warn(
            "scaling reads mass outside the cell span; treating it as 0",
            RuntimeWarning,
            stacklevel=2,
        )
    masses = np.array([mu.mass(t * a, t * b) / t for a, b in zip(e[:-1], e[1:])])
    return IntervalMeasure(e, masses)


# ---------------------------------------------------------------------------
# charge of a boundary profile and the splitting identity


def boundary_charge(u: SampledSignal, cone: float = 0.0) -> SampledSignal:
    """Line-charge density of the even harmonic extension of boundary data.

    For a function harmonic off the line with boundary values u plus a
    cone term c|Im z|, the charge sits on the line with density
    -(1/pi) d/dx H[u] + c/pi.  The derivative is a centered difference on
    the grid.
    """
    H = hilbert_transform(u, include_normalization=False)
    rho = -np.gradient(H.values, u.grid.dx) / np.pi + cone / np.pi
    return SampledSignal(u.grid, rho)


def _interval_masses(rho: SampledSignal, intervals: np.ndarray) -> np.ndarray:
    x = rho.x
    cells = 0.5 * (rho.values[:-1] + rho.values[1:]) * rho.grid.dx
    cum = np.concatenate([[0.0], np.cumsum(cells)])
    caf = lambda t: np.interp(t, x, cum)
    return caf(intervals[:, 1]) - caf(intervals[:, 0])


def split_check(
    u: SampledSignal,
    t: float,
    cone: float = 0.0,
    probes: np.ndarray | None = None,
) -> float:
    """Max interval-mass discrepancy between charge-of-A_t and B_t-of-charge.

    Route one rescales the boundary data first and then takes its charge;
    route two takes the charge first and rescales the interval masses.  The
    two agree identically in the continuum; the return value is the largest
    probe-interval discrepancy relative to the total absolute charge, so 0
    at t = 1 and small when the grid resolves both u and u(t .).
    """
    if not (t > 0):
        raise InvalidInputError(f"need t > 0, got {t}")
    if probes is None:
        edges = np.arange(-4.0, 6.5, 1.0)
        probes = np.column_stack([edges[:-1], edges[1:]])
    probes = np.asarray(probes, dtype=np.float64)
    rho_a = boundary_charge(scale_u(u, t), cone)
    mass_a = _interval_masses(rho_a, probes)
    rho = boundary_charge(u, cone)
    mass_b = _interval_masses(rho, t * probes) / t
    total = float(np.trapezoid(np.abs(rho.values), rho.x))
    if total == 0:
        return float(np.max(np.abs(mass_a - mass_b)))
    return float(np.max(np.abs(mass_a - mass_b)) / total)


# ---------------------------------------------------------------------------
# integer zero sets


@dataclass(frozen=True)
class ZeroSet:
    """Distinct integer zero positions in (0, R]."""

    positions: tuple[int, ...]
    R: int

    def __post_init__(self) -> None:
        p = self.positions
        if any(p[i] >= p[i + 1] for i in range(len(p) - 1)):
            raise InvalidInputError("positions must increase strictly")
        if p and (p[0] < 1 or p[-1] > self.R):
            raise InvalidInputError("positions must lie in (0, R]")

    def count_upto(self, x: float) -> int:
        import bisect

        return bisect.bisect_right(self.positions, x)

    def density(self, a: float, b: float) -> float:
        if b <= a:
            raise InvalidInputError("need a < b")
        return (self.count_upto(b) - self.count_upto(a)) / (b - a)

    def to_csv(self, path: str) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            for n in self.positions:
                w.writerow([n])


def integer_zero_set(F: Sequence[float]) -> ZeroSet:
    """Round a nondecreasing mass profile at integers to a 0/1 zero set.

    F[n] is the running mass at integer n (n = 0 .. R).  A zero is placed
    at n exactly when floor F(n) > floor F(n-1); with cell increments below
    1 this keeps every mass in {0, 1} and the cumulative count within 1 of
    the mass profile.
    """
    Fa = np.asarray(F, dtype=np.float64)
    if Fa.ndim != 1 or Fa.size < 2:
        raise InvalidInputError("need mass values at the integers 0..R, R >= 1")
    d = np.diff(Fa)
    if np.any(d < -1e-9 * max(1.0, np.max(np.abs(Fa)))):
        raise InvalidInputError("mass profile must be nondecreasing")
    fl = np.floor(Fa)
    jumps = np.diff(fl)
    if np.any(jumps > 1):
        raise DiagnosticError("a unit cell holds mass >= 2; masses left {0,1}")
    positions = tuple(int(n) for n in np.nonzero(jumps >= 1)[0] + 1)
    R = Fa.size - 1
    counts = np.cumsum(jumps >= 1)
    dev = np.max(np.abs(counts - (Fa[1:] - Fa[0])))
    if dev > 1.0 + 1e-9:
        raise DiagnosticError(f"count drifts from the mass profile by {dev:.3f}")
    return ZeroSet(positions, R)


# ---------------------------------------------------------------------------
# stabilized products over integer zero sets


def _product_eval(x: np.ndarray, zeros: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """log|prod (1 - x/n)| and its sign over positive integer zeros.

    The sign is the parity of the number of zeros below x (all zeros are
    positive); the magnitude accumulates in log space, chunked to bound
    memory.  Points equal to a zero get -inf log-magnitude.
    """
    logmag = np.zeros_like(x)
    with np.errstate(divide="ignore"):
        for j in range(0, zeros.size, 256):
            chunk = zeros[j : j + 256]
            logmag += np.sum(np.log(np.abs(1.0 - x[:, None] / chunk[None, :])), axis=1)
    sign = np.where(np.searchsorted(zeros, x, side="left") % 2 == 1, -1.0, 1.0)
    # searchsorted counts zeros strictly below x except at exact hits; the
    # -inf magnitude makes the sign there irrelevant
    return logmag, sign


# ---------------------------------------------------------------------------
# the scheduled construction


@dataclass(frozen=True)
class Example2Report:
    schedule: tuple[float, ...]
    R: int
    peak_block: tuple[float, float]
    peak_zero_density: float
    peak_target: float
    peak_ratio: float
    sign_change_density: float
    sign_density_bound: float
    one_minus_m: float
    log_scale: float
    label: str = "finite-schedule approximation"

    def to_json(self) -> dict:
        return {
            "schema": "gapwave/1",
            "schedule": list(self.schedule),
            "R": self.R,
            "peak_block": list(self.peak_block),
            "densities": {
                "peak_zero_density": self.peak_zero_density,
                "peak_target": self.peak_target,
                "peak_ratio": self.peak_ratio,
                "sign_change_density": self.sign_change_density,
                "sign_density_bound": self.sign_density_bound,
                "one_minus_m": self.one_minus_m,
            },
            "log_scale": self.log_scale,
            "label": self.label,
        }


@dataclass(frozen=True)
class Example2Result:
    constants: Example2Constants
    zeros: ZeroSet
    f: SampledSignal
    report: Example2Report


def _block_mass_at(x: np.ndarray, lo: float, hi: float, j: int,
                   k: float, m: float, m_prime: float) -> np.ndarray:
    """Mass contributed by block j = [lo, hi) below each x (vectorized)."""
    top = np.clip(x, lo, hi)
    n = math.isqrt(j)
    if n * n == j:
        s = math.sqrt(lo * hi)
        Q1 = lambda y: Q_closed(y, k) + m * y
        return np.where(x > lo, s * (Q1(top / s) - Q1(lo / s)), 0.0)
    i = j - n * n  # 1 .. 2n between squares
    dens = (i / (2 * n)) * m_prime + (1 - i / (2 * n)) * m
    return np.where(x > lo, dens * (top - lo), 0.0)


def example2_build(
    k: float, schedule: Sequence[float], R: float | None = None
) -> Example2Result:
    """Schedule scaled charges on geometric blocks and realize the zero set.

    Blocks [r_j, r_{j+1}) with j a perfect square carry a scaled copy of the
    nonnegative running charge Q(x) + m x (scale s_j = sqrt(r_j r_{j+1}));
    the blocks between squares interpolate linearly between the extreme
    cone densities m and m'.  The running mass at integers becomes a 0/1
    zero set, g is the finite product over the zeros, and f = g sin(pi x).

    The report measures, on the last square block, the peak of
    (N(x) - N(block start))/x against the target density m + eta, and the
    sign-change density of f on that block against 1 - peak density + 0.05.
    Results are labeled a finite-schedule approximation: the scheduled
    ratios are finite where the limiting statement sends them to infinity.
    """
    const = find_constants(k)
    if not const.admissible:
        raise InvalidInputError(
            f"k = {k} is not admissible (threshold {const.k_threshold:.4f})"
        )
    r = [float(v) for v in schedule]
    if len(r) < 2 or any(b <= a for a, b in zip(r, r[1:])) or r[0] <= 0:
        raise InvalidInputError("schedule must be positive and increasing")
    if any(b / a < 4.0 - 1e-9 for a, b in zip(r, r[1:])):
        raise InvalidInputError("schedule ratios must be at least 4")
    if R is None:
        R = r[-1]
    if R > r[-1] + 1e-9:
        raise InvalidInputError("R must not exceed the last scheduled radius")
    Rn = int(math.floor(R))

    ns = np.arange(0.0, Rn + 1)
    F = np.zeros(Rn + 1)
    square_blocks: list[tuple[int, float, float]] = []
    for j in range(1, len(r)):
        lo, hi = r[j - 1], r[j]
        F += _block_mass_at(ns, lo, hi, j, k, const.m, const.m_prime)
        n = math.isqrt(j)
        if n * n == j and hi <= Rn + 1e-9:
            square_blocks.append((j, lo, hi))
    if not square_blocks:
        raise InvalidInputError("schedule holds no complete square block below R")
    zeros = integer_zero_set(F)

    # peak density on the last complete square block, measured from the
    # block start so earlier (denser) interpolation blocks do not inflate it
    _, blo, bhi = square_blocks[-1]
    xs = np.arange(math.floor(blo) + 1.0, math.floor(bhi) + 1.0)
    n_lo = zeros.count_upto(blo)
    rates = (np.array([zeros.count_upto(v) for v in xs]) - n_lo) / xs
    peak_density = float(np.max(rates))
    target = const.m + const.eta
    peak_ratio = peak_density / target

    # sample f on the peak block, off the integers, rescaled to unit peak
    zarr = np.asarray(zeros.positions, dtype=np.float64)
    span_lo, span_hi = blo, min(bhi, float(Rn))
    npts = int((span_hi - span_lo) * 10)
    g = Grid(span_lo + 0.05, (span_hi - span_lo) / npts, npts)
    logmag, sign = _product_eval(g.points, zarr)
    logmag += np.log(np.abs(np.sin(np.pi * g.points)))
    sign = sign * np.where(np.sin(np.pi * g.points) < 0, -1.0, 1.0)
    log_scale = float(np.max(logmag))
    f = SampledSignal(g, sign * np.exp(logmag - log_scale))

    # sign changes of f across an integer happen exactly when the integer
    # carries no zero of g (there sin flips alone); count them exactly
    mid = np.arange(math.floor(span_lo), math.floor(span_hi) + 1) + 0.5
    par = np.searchsorted(zarr, mid) % 2
    sin_par = np.floor(mid).astype(int) % 2
    signs_mid = np.where((par + sin_par) % 2 == 1, -1, 1)
    flips = int(np.sum(signs_mid[1:] != signs_mid[:-1]))
    sign_density = flips / (mid[-1] - mid[0])

    report = Example2Report(
        schedule=tuple(r),
        R=Rn,
        peak_block=(blo, bhi),
        peak_zero_density=peak_density,
        peak_target=target,
        peak_ratio=peak_ratio,
        sign_change_density=float(sign_density),
        sign_density_bound=1.0 - peak_density + 0.05,
        one_minus_m=1.0 - const.m,
        log_scale=log_scale,
    )
    return Example2Result(const, zeros, f, report)


# ---------------------------------------------------------------------------
# the interval construction


@dataclass(frozen=True)
class Example1Report:
    intervals: tuple[tuple[int, int], ...]
    sign_changes: tuple[int, ...]
    min_abs: tuple[float, ...]
    gap_energy_ratio: float
    outside_band_ratio: float
    gap_verified: bool
    reference_density: float

    def to_json(self) -> dict:
        return {
            "schema": "gapwave/1",
            "intervals": [list(iv) for iv in self.intervals],
            "sign_changes": list(self.sign_changes),
            "min_abs": list(self.min_abs),
            "gap_energy_ratio": self.gap_energy_ratio,
            "outside_band_ratio": self.outside_band_ratio,
            "gap_verified": self.gap_verified,
            "densities": {"outside_reference": self.reference_density},
        }


@dataclass(frozen=True)
class Example1Result:
    f: SampledSignal
    zeros: tuple[int, ...]
    report: Example1Report


def _example1_eval(
    x: np.ndarray, zeros: np.ndarray, epsilon: float, N: int
) -> np.ndarray:
    """f1(x + 1/2) + f1(x) with f1 = (powered sinc) (finite product) sin(pi x)."""

    def f1(t: np.ndarray) -> np.ndarray:
        logmag, sign = _product_eval(t, zeros)
        u = epsilon * t / (2 * N)
        sinc = np.where(np.abs(u) < 1e-8, 1.0 - u * u / 6.0, np.sin(u) / np.where(u == 0, 1.0, u))
        with np.errstate(divide="ignore"):
            logmag = logmag + 2 * N * np.log(np.abs(sinc))
        return sign * np.exp(logmag) * np.sin(np.pi * t)

    return f1(x + 0.5) + f1(x)


def example1_build(
    intervals: Sequence[tuple[int, int]],
    alpha: float,
    epsilon: float,
    window: tuple[float, float],
) -> Example1Result:
    """Build a two-band signal with no sign change on prescribed intervals.

    The zeros of the finite product sit at every integer of the requested
    intervals, turning the sine's simple zeros there into double zeros of
    f1; the half-shift sum f(x) = f1(x + 1/2) + f1(x) removes the touching
    zeros entirely, so f keeps one sign across each interval.  The powered
    sinc factor (exponent 2N, N = #zeros + 2) keeps |x|^2 f bounded while
    confining the spectrum to two bands of half-width epsilon about +-pi.

    Interval lengths must obey sum_{j<=n} (x_j - y_j) <= x_n^alpha for
    every n, with alpha in (0, 1).
    """
    if not (0 < alpha < 1):
        raise InvalidInputError(f"need alpha in (0,1), got {alpha}")
    if not (0 < epsilon < np.pi / 2):
        raise InvalidInputError(f"need epsilon in (0, pi/2), got {epsilon}")
    ivs = [(int(y), int(x)) for y, x in intervals]
    if not ivs:
        raise InvalidInputError("need at least one interval")
    for (y, x), orig in zip(ivs, intervals):
        if (y, x) != tuple(orig) or y > x or y < 1:
            raise InvalidInputError(f"interval {orig} must be integer-aligned, 1 <= y <= x")
    for (y0, x0), (y1, _) in zip(ivs, ivs[1:]):
        if y1 <= x0:
            raise InvalidInputError("intervals must be disjoint and increasing")
    run = 0
    for y, x in ivs:
        run += x - y
        if run > x**alpha:
            raise InvalidInputError(
                f"growth condition fails at {x}: {run} > {x**alpha:.2f}"
            )
    lo, hi = float(window[0]), float(window[1])
    if not (hi > lo):
        raise InvalidInputError("window must be an increasing pair")

    zeros = np.concatenate([np.arange(y, x + 1) for y, x in ivs]).astype(np.float64)
    N = zeros.size + 2

    n = 1 << max(12, int(math.ceil(math.log2((hi - lo) * 64))))
    grid = Grid(lo, (hi - lo) / n, n)
    f = SampledSignal(grid, _example1_eval(grid.points, zeros, epsilon, N))

    A = np.fft.fft(f.values) / n
    xi = 2 * np.pi * np.fft.fftfreq(n, d=grid.dx)
    E = np.abs(A) ** 2
    tot = float(np.sum(E))
    a = np.pi - 2 * epsilon
    gap_ratio = float(np.sum(E[np.abs(xi) < a]) / tot)
    in_band = np.abs(np.abs(xi) - np.pi) <= 2 * epsilon
    outside_band = float(np.sum(E[~in_band]) / tot)
    gap_ok = verify_gap(f, GapSpec(a, np.pi + 2 * epsilon), rel_tol=1e-2).passed

    counts, minabs = [], []
    for y, x in ivs:
        t = np.arange(y, x + 1e-9, 0.01)
        v = _example1_eval(t, zeros, epsilon, N)
        counts.append(int(np.sum(np.sign(v[1:]) * np.sign(v[:-1]) < 0)))
        minabs.append(float(np.min(np.abs(v))))

    ref_lo = ivs[-1][1] + 10
    t = np.arange(ref_lo, ref_lo + 100, 0.01)
    v = _example1_eval(t, zeros, epsilon, N)
    ref_density = float(np.sum(np.sign(v[1:]) * np.sign(v[:-1]) < 0) / 100.0)

    report = Example1Report(
        intervals=tuple(ivs),
        sign_changes=tuple(counts),
        min_abs=tuple(minabs),
        gap_energy_ratio=gap_ratio,
        outside_band_ratio=outside_band,
        gap_verified=gap_ok,
        reference_density=ref_density,
    )
    return Example1Result(f, tuple(int(z) for z in zeros), report)
