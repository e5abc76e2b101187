"""Signal and spectrum carriers, gap-constrained synthesis, spectral checks.

Conventions used throughout the package:

- Frequencies are in radians per unit length.
- The discrete transform of a sampled window of length L = n*dx is scaled so
  that an amplitude approximates (1/L) * integral of f(x) e^{-i xi x} dx over
  the window.  With that scaling a pure cosine cos(ax) shows amplitude 1/2 at
  xi = +/-a whenever the window is an integer number of its periods.
- Signals with a "spectral gap (-a, a)" are represented by sampled windows
  whose transform carries (numerically) no energy at |xi| < a.  Sampled data
  cannot have an exactly vanishing transform on an interval, so gap checks are
  energy ratios against a relative tolerance.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from typing import Iterable, Mapping

import numpy as np

from .errors import InvalidInputError

TWO_PI = 2.0 * np.pi

# Relative slack when classifying a bin frequency against a band edge.  Bins
# are spaced exactly, so anything much larger than unit roundoff works; this
# only protects lines that sit exactly on an edge from falling on the wrong
# side after floating-point evaluation of 2*pi*k/(n*dx).
_EDGE_RTOL = 1e-12


# ---------------------------------------------------------------------------
# carriers


@dataclass(frozen=True)
class Grid:
    """Uniform abscissa grid x0 + j*dx for 0 <= j < n."""

    x0: float
    dx: float
    n: int

    def __post_init__(self) -> None:
        if not (self.dx > 0):
            raise InvalidInputError(f"grid step must be positive, got {self.dx}")
        if self.n < 2:
            raise InvalidInputError(f"grid needs at least 2 samples, got {self.n}")

    @property
    def points(self) -> np.ndarray:
        return self.x0 + self.dx * np.arange(self.n)

    @property
    def length(self) -> float:
        """Window length n*dx (the DFT period, one step past the last sample)."""
        return self.n * self.dx

    @property
    def x_last(self) -> float:
        return self.x0 + (self.n - 1) * self.dx


def _freeze(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class SampledSignal:
    """Real values on a uniform grid; the universal carrier for signals."""

    grid: Grid
    values: np.ndarray

    def __post_init__(self) -> None:
        v = np.asarray(self.values, dtype=np.float64)
        if v.ndim != 1 or v.size != self.grid.n:
            raise InvalidInputError(
                f"values must be a 1-d array of length {self.grid.n}, got shape {v.shape}"
            )
        if not np.all(np.isfinite(v)):
            raise InvalidInputError("values must be finite")
        object.__setattr__(self, "values", _freeze(v))

    @property
    def x(self) -> np.ndarray:
        return self.grid.points

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.values)))


@dataclass(frozen=True)
class TrigPoly:
    """Real trigonometric polynomial c_0 + sum_{n>=1} (c_n e^{in w x} + conj).

    Coefficients are stored canonically on nonnegative indices; a mapping with
    negative keys is accepted when it satisfies c_{-n} = conj(c_n).  The number
    gap_order = min{|n| : c_n != 0} is the order of the lowest surviving
    harmonic, i.e. the spectrum sits outside (-gap_order*w, gap_order*w).
    """

    coeffs: Mapping[int, complex]
    period: float = TWO_PI
    _canon: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if not (self.period > 0):
            raise InvalidInputError(f"period must be positive, got {self.period}")
        canon: dict[int, complex] = {}
        items = dict(self.coeffs)
        for n, c in items.items():
            c = complex(c)
            if c == 0:
                continue
            if n == 0:
                if abs(c.imag) > 1e-13 * max(1.0, abs(c)):
                    raise InvalidInputError("c_0 must be real for a real signal")
                canon[0] = complex(c.real, 0.0)
                continue
            m, cm = (n, c) if n > 0 else (-n, np.conj(c))
            if m in canon:
                if abs(canon[m] - cm) > 1e-12 * max(1.0, abs(cm)):
                    raise InvalidInputError(
                        f"coefficients at +/-{m} violate c_-n = conj(c_n)"
                    )
            else:
                canon[m] = complex(cm)
        object.__setattr__(self, "_canon", canon)

    @property
    def omega(self) -> float:
        return TWO_PI / self.period

    @property
    def harmonics(self) -> dict[int, complex]:
        """Canonical nonzero coefficients on n >= 0 (copy)."""
        return dict(self._canon)

    def is_zero(self) -> bool:
        return not self._canon

    @property
    def gap_order(self) -> int:
        if not self._canon:
            raise InvalidInputError("gap_order undefined for the zero polynomial")
        return min(abs(n) for n in self._canon)

    @property
    def degree(self) -> int:
        if not self._canon:
            return 0
        return max(self._canon)

    def eval(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=np.float64)
        out = np.zeros_like(x)
        w = self.omega
        for n, c in self._canon.items():
            if n == 0:
                out = out + c.real
            else:
                out = out + 2.0 * (
                    c.real * np.cos(n * w * x) - c.imag * np.sin(n * w * x)
                )
        return out

    def derivative(self) -> "TrigPoly":
        w = self.omega
        return TrigPoly(
            {n: 1j * n * w * c for n, c in self._canon.items() if n != 0},
            period=self.period,
        )

    def scaled(self, factors: Mapping[int, float]) -> "TrigPoly":
        """New polynomial with c_n multiplied by factors[n] (default 1)."""
        return TrigPoly(
            {n: c * factors.get(n, 1.0) for n, c in self._canon.items()},
            period=self.period,
        )


@dataclass(frozen=True)
class Spectrum:
    """Discrete spectrum: strictly increasing frequencies with amplitudes.

    normalization "per-sample" means amplitudes approximate the windowed
    transform (1/L) * integral f e^{-i xi x} dx; "none" means raw sums.
    """

    freqs: np.ndarray
    amplitudes: np.ndarray
    normalization: str = "per-sample"

    def __post_init__(self) -> None:
        f = np.asarray(self.freqs, dtype=np.float64)
        a = np.asarray(self.amplitudes, dtype=np.complex128)
        if f.ndim != 1 or a.shape != f.shape:
            raise InvalidInputError("freqs and amplitudes must be 1-d of equal length")
        if f.size >= 2 and not np.all(np.diff(f) > 0):
            raise InvalidInputError("freqs must be strictly increasing")
        if self.normalization not in ("per-sample", "none"):
            raise InvalidInputError(f"unknown normalization {self.normalization!r}")
        object.__setattr__(self, "freqs", _freeze(f))
        object.__setattr__(self, "amplitudes", _freeze(a))

    @property
    def spacing(self) -> float:
        return float(self.freqs[1] - self.freqs[0])


@dataclass(frozen=True)
class GapSpec:
    """Spectral gap (-a, a), optionally with an outer band edge b (|xi| <= b)."""

    a: float
    b: float | None = None

    def __post_init__(self) -> None:
        if not (self.a > 0):
            raise InvalidInputError(f"gap half-width must be positive, got {self.a}")
        if self.b is not None and self.b < self.a:
            raise InvalidInputError(f"band edge b={self.b} must be >= a={self.a}")


@dataclass(frozen=True)
class GapReport:
    in_gap_energy_ratio: float
    passed: bool
    a: float
    rel_tol: float


# ---------------------------------------------------------------------------
# synthesis and transforms


def synth_trig(p: TrigPoly, g: Grid) -> SampledSignal:
    """Sample a real trigonometric polynomial on a grid.

    The evaluation runs through the complex exponential sum and asserts the
    imaginary residue is below 1e-12 of the value scale before discarding it.
    """
    x = g.points
    acc = np.zeros(g.n, dtype=np.complex128)
    w = p.omega
    for n, c in p.harmonics.items():
        if n == 0:
            acc += c
        else:
            e = np.exp(1j * n * w * x)
            acc += c * e + np.conj(c) * np.conj(e)
    scale = max(1.0, float(np.max(np.abs(acc)))) if acc.size else 1.0
    resid = float(np.max(np.abs(acc.imag))) if acc.size else 0.0
    if resid > 1e-12 * scale:
        raise InvalidInputError(
            f"synthesis produced imaginary residue {resid:.3e} (reality violated)"
        )
    return SampledSignal(g, acc.real.copy())


def spectrum_of(s: SampledSignal) -> Spectrum:
    """Windowed discrete transform scaled to approximate (1/L) int f e^{-i xi x} dx.

    Frequencies are the DFT bins 2*pi*k/(n*dx) in increasing order; the phase
    reference is the true abscissa (the grid origin enters as e^{-i xi x0}).
    """
    g = s.grid
    raw = np.fft.fftshift(np.fft.fft(s.values)) / g.n
    freqs = TWO_PI * np.fft.fftshift(np.fft.fftfreq(g.n, d=g.dx))
    amps = raw * np.exp(-1j * freqs * g.x0)
    return Spectrum(freqs, amps, normalization="per-sample")


def inverse_spectrum(sp: Spectrum, g: Grid) -> SampledSignal:
    """Invert spectrum_of back to samples on the same grid layout.

    The frequencies must be exactly the DFT bins of g.  The imaginary residue
    of the inverse transform must stay below 1e-10 of the magnitude scale
    (Hermitian-symmetric input), otherwise the input was not a real signal's
    spectrum.
    """
    expected = TWO_PI * np.fft.fftshift(np.fft.fftfreq(g.n, d=g.dx))
    if sp.freqs.shape != expected.shape or not np.allclose(
        sp.freqs, expected, rtol=0, atol=1e-9 * max(1.0, abs(expected[0]))
    ):
        raise InvalidInputError("spectrum bins do not match the target grid")
    if sp.normalization != "per-sample":
        raise InvalidInputError("inverse_spectrum expects per-sample normalization")
    raw = sp.amplitudes * np.exp(1j * sp.freqs * g.x0)
    vals = np.fft.ifft(np.fft.ifftshift(raw)) * g.n
    scale = max(float(np.max(np.abs(vals))), 1e-300)
    resid = float(np.max(np.abs(vals.imag)))
    if resid > 1e-10 * scale:
        raise InvalidInputError(
            f"inverse transform has imaginary residue {resid:.3e}; "
            "spectrum is not Hermitian-symmetric"
        )
    return SampledSignal(g, vals.real.copy())


def random_highpass(
    gap: GapSpec,
    degree_range: tuple[int, int],
    seed: int,
    period: float = TWO_PI,
) -> TrigPoly:
    """Seed-deterministic real TrigPoly whose lowest harmonic clears the gap.

    Draws every admissible harmonic n (degree_range intersected with the gap
    constraint n*w >= a and, when present, n*w <= b) with magnitude in
    [0.3, 1.0] and uniform phase, so the result is never the zero polynomial
    and gap_order * w >= a by construction.
    """
    lo, hi = int(degree_range[0]), int(degree_range[1])
    if lo > hi:
        raise InvalidInputError(f"empty degree range {degree_range}")
    w = TWO_PI / period
    ns = [n for n in range(max(lo, 1), hi + 1) if n * w >= gap.a]
    if gap.b is not None:
        ns = [n for n in ns if n * w <= gap.b]
    if not ns:
        raise InvalidInputError(
            f"no admissible degrees in [{lo},{hi}] for gap a={gap.a} (w={w:.6g})"
        )
    rng = np.random.default_rng(seed)
    mags = rng.uniform(0.3, 1.0, size=len(ns))
    phases = rng.uniform(0.0, TWO_PI, size=len(ns))
    coeffs = {n: m * np.exp(1j * ph) for n, m, ph in zip(ns, mags, phases)}
    return TrigPoly(coeffs, period=period)


def _in_gap_mask(freqs: np.ndarray, a: float) -> np.ndarray:
    # strict interior of (-a, a); lines exactly on the edge stay outside
    return np.abs(freqs) < a * (1.0 - _EDGE_RTOL)


def verify_gap(s: SampledSignal, gap: GapSpec, rel_tol: float = 1e-8) -> GapReport:
    """Energy-ratio check that the transform of s vanishes on (-a, a).

    passes iff sum |A|^2 over bins strictly inside the gap is at most rel_tol
    times the total.  A zero signal passes with ratio 0 by convention.
    """
    if not (0.0 < rel_tol < 1.0):
        raise InvalidInputError(f"rel_tol must be in (0,1), got {rel_tol}")
    sp = spectrum_of(s)
    power = np.abs(sp.amplitudes) ** 2
    total = float(power.sum())
    if total == 0.0:
        return GapReport(0.0, True, gap.a, rel_tol)
    ratio = float(power[_in_gap_mask(sp.freqs, gap.a)].sum() / total)
    return GapReport(ratio, ratio <= rel_tol, gap.a, rel_tol)


def apply_gap_mask(sp: Spectrum, gap: GapSpec) -> Spectrum:
    """Zero amplitudes inside the gap (and outside the band edge when given)."""
    amps = sp.amplitudes.copy()
    amps[_in_gap_mask(sp.freqs, gap.a)] = 0.0
    if gap.b is not None:
        amps[np.abs(sp.freqs) > gap.b * (1.0 + _EDGE_RTOL)] = 0.0
    return Spectrum(sp.freqs.copy(), amps, normalization=sp.normalization)


def signal_energy(s: SampledSignal) -> float:
    """Window energy sum |f_j|^2 dx."""
    return float(np.sum(s.values**2) * s.grid.dx)


def spectrum_energy(sp: Spectrum, window_length: float) -> float:
    """Energy carried by a per-sample-normalized spectrum: L * sum |A|^2."""
    if sp.normalization != "per-sample":
        raise InvalidInputError("spectrum_energy expects per-sample normalization")
    return float(window_length * np.sum(np.abs(sp.amplitudes) ** 2))


# ---------------------------------------------------------------------------
# serialization (CSV and JSON, deterministic field order)

SCHEMA = "gapwave/1"


def signal_to_csv(s: SampledSignal, path: str) -> None:
    with open(path, "w", newline="") as fh:
        wr = csv.writer(fh)
        wr.writerow(["x", "value"])
        for x, v in zip(s.x, s.values):
            wr.writerow([f"{x:.17g}", f"{v:.17g}"])


def signal_from_csv(path: str) -> SampledSignal:
    xs: list[float] = []
    vs: list[float] = []
    with open(path, newline="") as fh:
        rd = csv.reader(fh)
        header = next(rd)
        if header[:2] != ["x", "value"]:
            raise InvalidInputError(f"unexpected signal CSV header {header}")
        for row in rd:
            xs.append(float(row[0]))
            vs.append(float(row[1]))
    x = np.asarray(xs)
    if x.size < 2:
        raise InvalidInputError("signal CSV must contain at least 2 rows")
    dx = float((x[-1] - x[0]) / (x.size - 1))
    if not np.allclose(np.diff(x), dx, rtol=0, atol=1e-9 * max(dx, 1e-12)):
        raise InvalidInputError("signal CSV abscissae are not uniformly spaced")
    return SampledSignal(Grid(float(x[0]), dx, x.size), np.asarray(vs))


def spectrum_to_csv(sp: Spectrum, path: str) -> None:
    with open(path, "w", newline="") as fh:
        wr = csv.writer(fh)
        wr.writerow(["freq", "re", "im"])
        for f, a in zip(sp.freqs, sp.amplitudes):
            wr.writerow([f"{f:.17g}", f"{a.real:.17g}", f"{a.imag:.17g}"])


def spectrum_from_csv(path: str, normalization: str = "per-sample") -> Spectrum:
    fs: list[float] = []
    amps: list[complex] = []
    with open(path, newline="") as fh:
        rd = csv.reader(fh)
        header = next(rd)
        if header[:3] != ["freq", "re", "im"]:
            raise InvalidInputError(f"unexpected spectrum CSV header {header}")
        for row in rd:
            fs.append(float(row[0]))
            amps.append(complex(float(row[1]), float(row[2])))
    return Spectrum(np.asarray(fs), np.asarray(amps), normalization=normalization)


def signal_to_json(s: SampledSignal) -> dict:
    return {
        "schema": SCHEMA,
        "kind": "sampled_signal",
        "grid": {"x0": s.grid.x0, "dx": s.grid.dx, "n": s.grid.n},
        "values": [float(v) for v in s.values],
    }


def signal_from_json(obj: Mapping) -> SampledSignal:
    g = obj["grid"]
    return SampledSignal(
        Grid(float(g["x0"]), float(g["dx"]), int(g["n"])), np.asarray(obj["values"])
    )


def spectrum_to_json(sp: Spectrum) -> dict:
    return {
        "schema": SCHEMA,
        "kind": "spectrum",
        "normalization": sp.normalization,
        "freqs": [float(f) for f in sp.freqs],
        "amp_re": [float(a.real) for a in sp.amplitudes],
        "amp_im": [float(a.imag) for a in sp.amplitudes],
    }


def spectrum_from_json(obj: Mapping) -> Spectrum:
    amps = np.asarray(obj["amp_re"], dtype=np.float64) + 1j * np.asarray(
        obj["amp_im"], dtype=np.float64
    )
    return Spectrum(np.asarray(obj["freqs"]), amps, normalization=obj["normalization"])


def dump_json(obj: Mapping, path: str) -> None:
    """Write a report dict with stable formatting (keys in insertion order)."""
    with open(path, "w") as fh:
        json.dump(obj, fh, indent=2, sort_keys=False)
        fh.write("\n")
