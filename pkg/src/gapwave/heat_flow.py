"""Heat-kernel smoothing and what it does to sign changes.

The kernel K_t(x) = e^{-x^2/t} / sqrt(pi t) acts on the spectrum as the
multiplier e^{-xi^2 t / 4}, so smoothing never moves spectral support, is
exact per coefficient on trigonometric polynomials, and solves
4 u_t = u_xx.  The per-period count of sign changes can only fall under
this flow, which is the mechanism the monotonicity checks exercise.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from .core_signals import (
    Grid,
    SampledSignal,
    Spectrum,
    TrigPoly,
    inverse_spectrum,
    spectrum_of,
)
from .errors import InvalidInputError, NeedsRefinementError
from .oscillation import s_count, sign_change_places, zero_places


def heat_kernel(x, t: float):
    """Gaussian kernel e^{-x^2/t} / sqrt(pi t); unit mass for every t > 0."""
    if t <= 0:
        raise InvalidInputError(f"heat kernel needs t > 0, got {t}")
    xa = np.asarray(x, dtype=float)
    out = np.exp(-(xa**2) / t) / np.sqrt(np.pi * t)
    return out if out.shape else float(out)


def heat_convolve(s: SampledSignal, t: float) -> SampledSignal:
    """Smooth a signal by the multiplier e^{-xi^2 t / 4} on its spectrum.

    The sampled window is treated as one period, so for periodic content
    the result agrees with the whole-line convolution; t = 0 returns the
    input unchanged.  Exact per line for trigonometric polynomials.
    """
    if t < 0:
        raise InvalidInputError(f"smoothing time must be nonnegative, got {t}")
    if t == 0:
        return s
    sp = spectrum_of(s)
    damped = sp.amplitudes * np.exp(-(sp.freqs**2) * t / 4.0)
    return inverse_spectrum(Spectrum(sp.freqs, damped, sp.normalization), s.grid)


def heat_trig(p: TrigPoly, t: float) -> TrigPoly:
    """The same flow applied exactly to a trigonometric polynomial."""
    if t < 0:
        raise InvalidInputError(f"smoothing time must be nonnegative, got {t}")
    w = p.omega
    return p.scaled({n: float(np.exp(-((n * w) ** 2) * t / 4.0)) for n in p.harmonics})


@dataclass(frozen=True)
class TemperatureField:
    """Samples u(x_j, t_i) of a smoothed family, one row per time.

    Row 0 is the initial signal; residual_bound records the heat-equation
    defect its constructor promised (None for fields assembled by hand).
    """

    grid: Grid
    times: np.ndarray
    values: np.ndarray
    residual_bound: float | None = None

    def __post_init__(self):
        times = np.asarray(self.times, dtype=float)
        vals = np.asarray(self.values, dtype=float)
        if times.ndim != 1 or times.size < 1:
            raise InvalidInputError("need at least one time row")
        if times[0] != 0.0:
            raise InvalidInputError("time rows must start at t = 0")
        if np.any(np.diff(times) <= 0):
            raise InvalidInputError("times must increase strictly")
        if vals.shape != (times.size, self.grid.n):
            raise InvalidInputError(
                f"values shape {vals.shape} does not match "
                f"({times.size}, {self.grid.n})"
            )
        times.setflags(write=False)
        vals.setflags(write=False)
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "values", vals)

    def row(self, i: int) -> SampledSignal:
        return SampledSignal(self.grid, self.values[i])

    def to_csv(self, path: str) -> None:
        with open(path, "w", newline="") as fh:
            wr = csv.writer(fh)
            wr.writerow(["x", "t", "u"])
            for i, t in enumerate(self.times):
                for x, u in zip(self.grid.points, self.values[i]):
                    wr.writerow([f"{x:.17g}", f"{t:.17g}", f"{u:.17g}"])

    def zero_trajectories_csv(self, path: str, zero_tol: float | None = None) -> None:
        """One row per time: t followed by the zero-place left endpoints."""
        with open(path, "w", newline="") as fh:
            wr = csv.writer(fh)
            wr.writerow(["t", "zeros"])
            for i, t in enumerate(self.times):
                places = zero_places(self.row(i), zero_tol=zero_tol)
                wr.writerow(
                    [f"{t:.17g}"] + [f"{q.left:.17g}" for q in places]
                )


def temperature_field(s: SampledSignal, times) -> TemperatureField:
    """Stack heat_convolve rows into a field; row 0 is s itself."""
    ts = np.asarray(list(times), dtype=float)
    rows = [heat_convolve(s, float(t)).values for t in ts]
    return TemperatureField(s.grid, ts, np.vstack(rows), residual_bound=None)


def heat_residual(field: TemperatureField) -> float:
    """Max interior defect |4 du/dt - d2u/dx2| by centered differences.

    Time derivatives use second-order differences on the (possibly
    nonuniform) time rows; the reported number converges like
    O(dx^2 + dt^2) for a true temperature.
    """
    if field.times.size < 3 or field.grid.n < 3:
        raise InvalidInputError("residual needs at least 3 rows and 3 columns")
    u = field.values
    dx = field.grid.dx
    u_t = np.gradient(u, field.times, axis=0)
    u_xx = (u[:, :-2] - 2.0 * u[:, 1:-1] + u[:, 2:]) / dx**2
    interior = 4.0 * u_t[1:-1, 1:-1] - u_xx[1:-1, :]
    return float(np.max(np.abs(interior)))


@dataclass(frozen=True)
class MonotonicityReport:
    times: np.ndarray
    counts: np.ndarray
    r: float
    nonincreasing: bool

    def to_json(self) -> dict:
        return {
            "schema": "gapwave/1",
            "r": self.r,
            "times": [float(t) for t in self.times],
            "counts": [int(c) for c in self.counts],
            "pass": bool(self.nonincreasing),
        }


def monotonicity_check(s: SampledSignal, t_grid, r: float) -> MonotonicityReport:
    """Track s(r, f_t) along the flow and flag any increase.

    For a window holding a whole period the count per window can only fall;
    a partial window can see a zero drift in across the cut, so choose r
    accordingly when monotonicity is the claim under test.
    """
    ts = np.asarray(list(t_grid), dtype=float)
    if ts.size < 1 or ts[0] != 0.0:
        raise InvalidInputError("time grid must start at 0")
    if np.any(np.diff(ts) <= 0):
        raise InvalidInputError("time grid must increase strictly")
    counts = []
    for t in ts:
        ft = heat_convolve(s, float(t))
        counts.append(s_count(sign_change_places(ft), r))
    arr = np.asarray(counts, dtype=int)
    return MonotonicityReport(ts, arr, float(r), bool(np.all(np.diff(arr) <= 0)))


@dataclass(frozen=True)
class SimpleZeroReport:
    T: float
    zeros: tuple[float, ...]
    derivative_floor: float


def simple_zero_time(s: SampledSignal, t0: float, r: float) -> SimpleZeroReport:
    """Find the least tested smoothing time making all zeros in (0, r] simple.

    Times run down a geometric grid t0, t0/2, ..., and the smallest passing
    value wins.  A zero place passes when it is a refined point (not a
    plateau) and the space derivative there clears the floor
    1e-6 * max|f_T| / period.  When even t0 fails, the flow needs more room
    and the caller gets a refinement error; multiple zeros are isolated in
    time, so enlarging t0 or the grid resolves it.
    """
    if t0 <= 0:
        raise InvalidInputError(f"need t0 > 0, got {t0}")
    period = s.grid.length
    candidates = [t0 * 0.5**k for k in range(20, -1, -1)]  # ascending
    for T in candidates:
        ft = heat_convolve(s, T)
        top = ft.max_abs()
        if top == 0.0:
            return SimpleZeroReport(T, (), 0.0)
        floor = 1e-6 * top / period
        places = [
            q
            for q in zero_places(ft)
            if 0.0 < q.left <= r or 0.0 < q.right <= r
        ]
        dv = np.gradient(ft.values, s.grid.dx)
        ok = True
        zs = []
        for q in places:
            if not q.is_point:
                ok = False
                break
            j = int(np.clip(round((q.left - s.grid.x0) / s.grid.dx), 0, s.grid.n - 1))
            if abs(dv[j]) < floor:
                ok = False
                break
            zs.append(q.left)
        if ok:
            return SimpleZeroReport(T, tuple(zs), floor)
    raise NeedsRefinementError(
        f"no smoothing time in ({t0 * 0.5**20:.3e}, {t0}] makes every "
        f"zero in (0, {r}] simple; enlarge t0 or refine the grid"
    )
