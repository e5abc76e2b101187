"""Analytic-signal machinery: the split f = h + conj(h), half-plane evaluation,
Hilbert transforms, weighted boundary functionals, phase curves, and the
quantitative sign-change bound they assemble into.

The carrier h holds the positive-frequency half of the discrete spectrum, so
f = 2*Re(h) exactly on the grid, h extends holomorphically upward by the
multiplier e^{-xi y}, and every zero of f on the real axis is either a real
zero of h or a point where h is purely imaginary.  Counting how often the
continuous argument of h crosses the lattice pi/2 + k*pi therefore counts
sign changes, which is the mechanism the phase tools make measurable.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .core_signals import (
    GapSpec,
    Grid,
    SampledSignal,
    TrigPoly,
    spectrum_of,
    verify_gap,
)
from .errors import (
    DiagnosticError,
    InvalidInputError,
    NeedsHeatingError,
    NoSplitError,
)

ComplexFn = Callable[[np.ndarray], np.ndarray]

# ---------------------------------------------------------------------------
# analytic decomposition


@dataclass(frozen=True)
class AnalyticDecomposition:
    """Positive-frequency half h of a real signal, with half-plane evaluators.

    one_sided holds the full shifted bin layout with negative-frequency bins
    zeroed and the xi = 0 bin halved (the self-paired Nyquist bin of an even
    grid is folded to +|xi| with half weight), so that on the grid
    f = h + conj(h) holds to rounding.  Evaluation off the grid and in the
    upper half-plane runs over the significant bins only.
    """

    grid: Grid
    freqs: np.ndarray
    one_sided: np.ndarray
    h_real_axis: np.ndarray
    source_band: GapSpec | None
    gap_verified: bool
    recon_residual: float
    sig_freqs: np.ndarray = field(repr=False, default=None)
    sig_amps: np.ndarray = field(repr=False, default=None)

    def upper_row(self, y: float) -> np.ndarray:
        """h(x + iy) on the grid via the decay multiplier e^{-xi y}."""
        if y < 0:
            raise InvalidInputError("upper_row needs y >= 0")
        damped = self.one_sided * np.exp(-np.maximum(self.freqs, 0.0) * y)
        damped[self.freqs < 0] = 0.0
        raw = damped * np.exp(1j * self.freqs * self.grid.x0)
        row = np.fft.ifft(np.fft.ifftshift(raw)) * self.grid.n
        nyq = self._nyquist
        if nyq is not None:
            xi, a = nyq
            row = row + a * np.exp(1j * xi * (self.grid.points + 1j * y))
        return row

    @property
    def _nyquist(self):
        if self.grid.n % 2 == 0:
            a = self.one_sided_nyq
            if a != 0:
                return -float(self.freqs[0]), a
        return None

    @property
    def one_sided_nyq(self) -> complex:
        return complex(getattr(self, "_nyq_amp", 0.0))

    def eval_at(self, z) -> np.ndarray | complex:
        """h(z) for Im z >= 0 from the significant-bin sum (vectorized in z)."""
        za = np.asarray(z, dtype=np.complex128)
        if np.any(za.imag < -1e-12):
            raise InvalidInputError("eval_at is defined on the closed upper half-plane")
        out = np.zeros_like(za)
        for f_, a in zip(self.sig_freqs, self.sig_amps):
            out = out + a * np.exp(1j * f_ * za)
        return out if out.shape else complex(out)

    def deriv_at(self, z) -> np.ndarray | complex:
        za = np.asarray(z, dtype=np.complex128)
        out = np.zeros_like(za)
        for f_, a in zip(self.sig_freqs, self.sig_amps):
            out = out + 1j * f_ * a * np.exp(1j * f_ * za)
        return out if out.shape else complex(out)

    def log_abs_at(self, x: float, y: float) -> float:
        """log|h(x+iy)| with the exponentials accumulated in log space.

        Safe far beyond double-precision underflow of |h| itself: the largest
        term's log magnitude is factored out before summation.
        """
        if self.sig_freqs.size == 0:
            return float("-inf")
        with np.errstate(divide="ignore"):
            L = np.log(np.abs(self.sig_amps)) - self.sig_freqs * y
        M = float(np.max(L))
        if not np.isfinite(M):
            return float("-inf")
        phases = self.sig_freqs * x + np.angle(self.sig_amps)
        S = np.sum(np.exp(L - M) * np.exp(1j * phases))
        mag = abs(S)
        if mag == 0.0:
            return float("-inf")
        return M + float(np.log(mag))


def decompose(s: SampledSignal, band: GapSpec | None = None) -> AnalyticDecomposition:
    """Split a real signal into its positive-frequency half.

    The xi = 0 bin is halved so constants split evenly between h and conj(h);
    for even sample counts the self-paired Nyquist bin is mapped to +|xi| with
    half weight.  The reconstruction residual max|f - 2 Re h| is checked
    against 1e-8 of the signal scale and stored on the result.
    """
    sp = spectrum_of(s)
    freqs = sp.freqs
    amps = sp.amplitudes
    n = s.grid.n
    one = np.where(freqs > 0, amps, 0.0)
    zi = np.flatnonzero(freqs == 0.0)
    if zi.size:
        one[zi] = amps[zi] * 0.5

    nyq_amp = 0.0 + 0.0j
    if n % 2 == 0 and abs(amps[0]) > 0:
        nyq_amp = 0.5 * complex(amps[0])  # bin at -pi/dx, self-paired, real f

    raw = one * np.exp(1j * freqs * s.grid.x0)
    h_real = np.fft.ifft(np.fft.ifftshift(raw)) * n
    if nyq_amp != 0:
        h_real = h_real + nyq_amp * np.exp(1j * (-freqs[0]) * s.x)

    scale = max(float(np.max(np.abs(one))), abs(nyq_amp), 1e-300)
    keep = np.abs(one) > 1e-13 * scale
    sig_f = [float(f_) for f_ in freqs[keep]]
    sig_a = [complex(a) for a in one[keep]]
    if nyq_amp != 0:
        sig_f.append(-float(freqs[0]))
        sig_a.append(nyq_amp)
    order = np.argsort(sig_f)
    sig_freqs = np.asarray(sig_f, dtype=float)[order]
    sig_amps = np.asarray(sig_a, dtype=complex)[order]

    resid = float(np.max(np.abs(s.values - 2.0 * h_real.real)))
    if resid > 1e-8 * max(1.0, s.max_abs()):
        raise DiagnosticError(f"reconstruction residual {resid:.3e} too large")

    verified = bool(band is not None and verify_gap(s, band).passed)
    d = AnalyticDecomposition(
        grid=s.grid,
        freqs=freqs,
        one_sided=one,
        h_real_axis=h_real,
        source_band=band,
        gap_verified=verified,
        recon_residual=resid,
        sig_freqs=sig_freqs,
        sig_amps=sig_amps,
    )
    object.__setattr__(d, "_nyq_amp", nyq_amp)
    return d


# ---------------------------------------------------------------------------
# the independent Cauchy-integral route to h


@dataclass(frozen=True)
class CauchyValue:
    value: complex
    truncation_bound: float


def cauchy_h(s: SampledSignal, z: complex) -> CauchyValue:
    """Windowed Cauchy integral (i/2pi) int f(t)/(z - t) dt for Im z > 0.

    The independent route to h: no spectra involved, trapezoid quadrature on
    the sampled window.  The reported truncation bound covers the discarded
    tails (integration by parts against the lowest significant frequency,
    which is how an oscillating tail decays) plus a quadrature term.
    """
    z = complex(z)
    if z.imag <= 0:
        raise InvalidInputError("cauchy_h requires Im z > 0")
    t = s.x
    w = np.ones(t.size)
    w[0] = w[-1] = 0.5
    val = (1j / (2 * np.pi)) * np.sum(w * s.values / (z - t)) * s.grid.dx

    sp = spectrum_of(s)
    mag = np.abs(sp.amplitudes)
    top = float(mag.max()) if mag.size else 0.0
    keep = mag > 1e-12 * max(top, 1e-300)
    m = s.max_abs()
    d_lo = abs(z - t[0])
    d_hi = abs(z - t[-1])
    if np.any(keep):
        xi_min = float(np.min(np.abs(sp.freqs[keep])))
    else:
        xi_min = 0.0
    if xi_min > 0:
        tail = (m / (np.pi * xi_min)) * (1.0 / d_lo + 1.0 / d_hi)
    else:
        tail = m * (1.0 / d_lo + 1.0 / d_hi)  # no oscillatory decay to lean on
    quad = m * s.grid.dx**2 / max(z.imag, 1e-6)
    return CauchyValue(complex(val), float(3.0 * tail + quad))


# ---------------------------------------------------------------------------
# decay of h up the half-plane


@dataclass(frozen=True)
class DecayProbe:
    x: float
    y: float
    log_abs_h: float
    log_bound: float
    ratio: float  # |h| / bound, formed in log space


@dataclass(frozen=True)
class DecayReport:
    probes: tuple[DecayProbe, ...]
    max_ratio: float
    passed: bool


def decay_check(
    d: AnalyticDecomposition,
    a: float,
    f_hat_sup: float,
    probes: Sequence[tuple[float, float]],
    tol_margin: float = 1e-3,
) -> DecayReport:
    """Check |h(x+iy)| <= e^{-ay}/(2 pi y) * f_hat_sup * (1 + tol_margin).

    f_hat_sup is the sup of the windowed transform (window length times the
    largest per-sample amplitude).  The comparison happens in log space so
    probes far up the half-plane, where |h| underflows, are still decided
    correctly.  Requires a decomposition whose gap was verified.
    """
    if d.source_band is None or not d.gap_verified:
        raise InvalidInputError("decay_check needs a decomposition with a verified gap")
    if f_hat_sup <= 0:
        raise InvalidInputError("f_hat_sup must be positive")
    rows = []
    worst = 0.0
    for x, y in probes:
        if y <= 0:
            raise InvalidInputError("decay probes need y > 0")
        lh = d.log_abs_at(float(x), float(y))
        lb = -a * y - np.log(2 * np.pi * y) + np.log(f_hat_sup) + np.log1p(tol_margin)
        ratio = float(np.exp(lh - lb)) if np.isfinite(lh) else 0.0
        worst = max(worst, ratio)
        rows.append(DecayProbe(float(x), float(y), lh, float(lb), ratio))
    return DecayReport(tuple(rows), worst, worst <= 1.0)


def nevanlinna_exponent(
    d: AnalyticDecomposition, y_lo: float = 5.0, y_hi: float = 20.0, count: int = 40
) -> float:
    """Decay rate a' of h up the imaginary axis, by least squares.

    Fits log|h(iy)| ~ const - a'*y on [y_lo, y_hi]; for a verified gap a the
    measured value sits at or above a (the lowest surviving frequency).
    """
    ys = np.linspace(y_lo, y_hi, count)
    ls = np.array([d.log_abs_at(0.0, float(y)) for y in ys])
    good = np.isfinite(ls)
    if np.count_nonzero(good) < 2:
        raise DiagnosticError("h vanished at all probe heights; no slope to fit")
    slope = np.polyfit(ys[good], ls[good], 1)[0]
    return float(-slope)


# ---------------------------------------------------------------------------
# Hilbert transforms (two routes, never collapsed)


def hilbert_transform(
    u: SampledSignal, include_normalization: bool = True
) -> SampledSignal:
    """Principal-value quadrature of the normalized Hilbert transform.

    Computes (1/pi) PV int u(t) [1/(x-t) + t/(1+t^2)] dt on the grid of u by
    pairing samples symmetrically about the singularity:

        v(x_j) = (1/pi) [ sum_{l != 0} u(x_{j-l})/l  -  dx u'(x_j)  +  C_u ]

    with C_u the t/(1+t^2) normalization integral (dropped when
    include_normalization is false, leaving the plain 1/(x-t) kernel).  The
    paired sum has an even local integrand about the singular point, making
    the scheme fourth order in dx for smooth u; the convolution runs through
    an FFT.  Out-of-window tails are the caller's concern (use compactly
    supported or decaying u, or account for the tail separately).
    """
    x = u.x
    vals = u.values
    n = x.size
    dx = u.grid.dx
    l = np.arange(-(n - 1), n)
    K = np.zeros(l.size)
    nz = l != 0
    K[nz] = 1.0 / l[nz]
    m = 1 << int(np.ceil(np.log2(3 * n)))
    conv = np.fft.irfft(np.fft.rfft(vals, m) * np.fft.rfft(K, m), m)[n - 1 : 2 * n - 1]
    du = np.gradient(vals, dx)
    out = conv - dx * du
    if include_normalization:
        out = out + np.trapezoid(vals * x / (1.0 + x * x), x)
    return SampledSignal(u.grid, out / np.pi)


def hilbert_spectral(p: TrigPoly) -> TrigPoly:
    """Exact transform of a trigonometric polynomial: c_n -> -i sign(n) c_n.

    The constant term maps to zero, matching the normalized kernel for which
    the transform of 1 vanishes.
    """
    return TrigPoly(
        {n: -1j * c for n, c in p.harmonics.items() if n > 0}, period=p.period
    )


# ---------------------------------------------------------------------------
# weighted boundary functionals


@dataclass(frozen=True)
class JReport:
    value: float
    tail_bound: float
    warn: bool


def J_functional(
    u: SampledSignal,
    compact: bool = False,
    sup_outside: float | None = None,
) -> JReport:
    """Weighted boundary norm int |u(x)|/(1+x^2) dx over the window.

    tail_bound estimates the discarded mass as sup_outside (defaulting to the
    window sup of |u|) times the exact weight tail; warn is set when that
    bound is not below 1e-6 and u is not flagged compactly supported.
    """
    x = u.x
    val = float(np.trapezoid(np.abs(u.values) / (1.0 + x * x), x))
    if compact:
        return JReport(val, 0.0, False)
    sup = float(sup_outside) if sup_outside is not None else u.max_abs()
    lo, hi = u.grid.x0, u.grid.x_last
    tail = sup * float((np.pi / 2 - np.arctan(hi)) + (np.pi / 2 + np.arctan(lo)))
    return JReport(val, tail, tail > 1e-6)


@dataclass(frozen=True)
class SplitData:
    epsilon: float
    r0: float
    tail_value: float
    u0: SampledSignal
    u1: SampledSignal
    v0: SampledSignal
    v1: SampledSignal


@dataclass(frozen=True)
class HarmonicPair:
    """Boundary function u with its transform v, optionally tail-split."""

    u: SampledSignal
    v: SampledSignal
    split: SplitData | None = None


def make_harmonic_pair(u: SampledSignal) -> HarmonicPair:
    return HarmonicPair(u, hilbert_transform(u))


@dataclass(frozen=True)
class KolmogorovRow:
    lam: float
    measure: float
    bound: float
    ok: bool


@dataclass(frozen=True)
class KolmogorovReport:
    rows: tuple[KolmogorovRow, ...]
    J_value: float
    passed: bool


def kolmogorov_check(pair: HarmonicPair, lambdas: Sequence[float]) -> KolmogorovReport:
    """Weak-type estimate: weight of {|v| > lam} at most (4/lam) * J(u)."""
    J = J_functional(pair.u).value
    x = pair.u.x
    weight = 1.0 / (1.0 + x * x)
    rows = []
    ok_all = True
    for lam in lambdas:
        if lam <= 0:
            raise InvalidInputError("lambda values must be positive")
        mask = np.abs(pair.v.values) > lam
        measure = float(np.trapezoid(weight * mask, x))
        bound = 4.0 * J / lam
        ok = measure <= bound
        ok_all = ok_all and ok
        rows.append(KolmogorovRow(float(lam), measure, bound, ok))
    return KolmogorovReport(tuple(rows), J, ok_all)


def tail_split(u: SampledSignal, epsilon: float) -> HarmonicPair:
    """Split u at the smallest grid radius with weighted tail below eps^2/8.

    u0 is u cut to [-r0, r0] and u1 the remainder; v0, v1 are their
    transforms.  The tail counts the in-window mass beyond r0 plus the
    out-of-window bound from J_functional, so success means the whole-line
    tail condition under the boundedness proxy.  Raises NoSplitError when no
    radius inside the window works.
    """
    if epsilon <= 0:
        raise InvalidInputError("epsilon must be positive")
    target = epsilon * epsilon / 8.0
    x = u.x
    w = np.abs(u.values) / (1.0 + x * x)
    outside = J_functional(u).tail_bound
    if outside >= target:
        raise NoSplitError(
            f"out-of-window weighted tail bound {outside:.3e} already exceeds "
            f"eps^2/8 = {target:.3e}; widen the window or enlarge eps"
        )
    # Upper-bound the in-window tail by the mass of every trapezoid cell not
    # fully inside [-r0, r0]; prefix sums make the radius sweep O(n log n).
    cell = 0.5 * (w[:-1] + w[1:]) * u.grid.dx
    prefix = np.concatenate([[0.0], np.cumsum(cell)])
    total = prefix[-1]
    radii = np.unique(np.abs(np.concatenate([x, x + u.grid.dx])))
    radii = radii[radii > 0]
    best = None
    for r0 in radii:
        i_lo = int(np.searchsorted(x, -r0, side="left"))
        i_hi = min(int(np.searchsorted(x, r0 - u.grid.dx, side="right")) - 1, x.size - 2)
        inner_mass = prefix[i_hi + 1] - prefix[i_lo] if i_hi >= i_lo else 0.0
        tail = float(total - inner_mass) + outside
        if tail < target:
            best = (float(r0), tail)
            break
    if best is None:
        raise NoSplitError(
            f"smallest achievable weighted tail {outside:.3e} (plus in-window "
            f"remainder) never drops below eps^2/8 = {target:.3e}"
        )
    r0, tail = best
    inner = np.abs(x) <= r0
    u0 = SampledSignal(u.grid, np.where(inner, u.values, 0.0))
    u1 = SampledSignal(u.grid, np.where(inner, 0.0, u.values))
    return HarmonicPair(
        u,
        hilbert_transform(u),
        SplitData(float(epsilon), r0, tail, u0, u1, hilbert_transform(u0), hilbert_transform(u1)),
    )


# ---------------------------------------------------------------------------
# phase curve and lattice counting


@dataclass(frozen=True)
class Lattice:
    """Horizontal lines offset + k*spacing crossed by the phase curve."""

    offset: float = np.pi / 2
    spacing: float = np.pi


@dataclass(frozen=True)
class PhaseSegment:
    x: np.ndarray
    phi: np.ndarray  # continuous, already glued across earlier jumps


@dataclass(frozen=True)
class PhaseJump:
    """A -pi drop of the phase at a simple real zero of h.

    transversal records whether the underlying real signal actually changes
    sign there (Re h' != 0 at the zero); a tangential touch still drops the
    phase by pi but grazes the lattice instead of crossing it.
    """

    x: float
    phi_before: float
    transversal: bool


@dataclass(frozen=True)
class PhaseCurve:
    """Continuous argument of h with -pi jump markers at simple real zeros.

    The curve drops from phi_before to phi_before - pi at each jump and the
    following segment continues from the dropped level.
    """

    segments: tuple[PhaseSegment, ...]
    jumps: tuple[PhaseJump, ...]

    @property
    def jump_positions(self) -> np.ndarray:
        return np.array([j.x for j in self.jumps])

    def total_variation(self) -> float:
        tv = sum(float(np.sum(np.abs(np.diff(seg.phi)))) for seg in self.segments)
        return tv + np.pi * len(self.jumps)


def _densify_phase(
    xs: np.ndarray, hs: np.ndarray, eval_fn: ComplexFn, max_rounds: int = 24
):
    """Insert midpoints until adjacent raw phase steps drop below pi/2."""
    for _ in range(max_rounds):
        raw = np.angle(hs)
        steps = np.abs(np.mod(np.diff(raw) + np.pi, 2 * np.pi) - np.pi)
        tiny = np.abs(hs[:-1]) + np.abs(hs[1:]) == 0.0
        bad = (steps >= np.pi / 2) & ~tiny
        if not np.any(bad):
            return xs, hs
        mid = 0.5 * (xs[:-1][bad] + xs[1:][bad])
        xs = np.concatenate([xs, mid])
        order = np.argsort(xs)
        xs = xs[order]
        hs = np.concatenate([hs, eval_fn(mid)])[order]
    raise DiagnosticError("phase refinement did not converge in 24 rounds")


def _find_real_zeros(
    grid: Grid,
    h_vals: np.ndarray,
    eval_fn: ComplexFn,
    deriv_fn: ComplexFn,
    zero_tol: float | None,
) -> list[float]:
    """Real zeros of h by dip detection plus real-Newton refinement.

    A local minimum of |h| qualifies as a zero candidate when its depth is
    consistent with a zero passing within half a grid step (|h| <= 0.75 *
    |h'| * dx) or it falls below the explicit tolerance.  Each candidate is
    refined and must converge to |h| below 1e-6 * |h'| * dx; a refined zero
    with derivative below the simplicity floor raises NeedsHeatingError.
    """
    mag = np.abs(h_vals)
    scale = float(mag.max())
    if scale == 0.0:
        raise InvalidInputError("phase curve undefined for the zero signal")
    x = grid.points
    dx = grid.dx
    interior = np.arange(1, mag.size - 1)
    mins = interior[
        (mag[interior] <= mag[interior - 1]) & (mag[interior] <= mag[interior + 1])
    ]
    zeros: list[float] = []
    floor = 1e-8 * scale
    for i in mins:
        slope = abs(complex(deriv_fn(np.asarray([x[i]]))[0]))
        if mag[i] > max(zero_tol or 0.0, 0.75 * slope * dx):
            continue
        xz = float(x[i])
        for _ in range(60):
            hv = complex(eval_fn(np.asarray([xz]))[0])
            hd = complex(deriv_fn(np.asarray([xz]))[0])
            if hd == 0:
                break
            step = (hv / hd).real
            xz -= step
            if abs(step) < 1e-15 * max(1.0, abs(xz)):
                break
        if not (x[0] <= xz <= x[-1]):
            continue
        hv = abs(complex(eval_fn(np.asarray([xz]))[0]))
        hd = abs(complex(deriv_fn(np.asarray([xz]))[0]))
        if hv > 1e-6 * max(hd * dx, floor * dx):
            continue  # dip did not resolve into a zero
        if hd * dx < floor:
            raise NeedsHeatingError(
                f"zero of h near x = {xz:.6f} is not simple at grid resolution; "
                "smooth the signal first"
            )
        if zeros and xz - zeros[-1] <= dx:
            continue
        zeros.append(xz)
    return zeros


def phase_curve_from_callable(
    grid: Grid,
    h_vals: np.ndarray,
    eval_fn: ComplexFn,
    deriv_fn: ComplexFn | None = None,
    zero_tol: float | None = None,
) -> PhaseCurve:
    """Build the continuous-argument curve for any analytic h given samples.

    Segments between real zeros are unwrapped with adjacent steps below pi/2
    (densifying through eval_fn as needed); each simple real zero inserts a
    -pi jump and the next segment is glued to continue from the dropped
    level.  Non-simple zeros raise NeedsHeatingError.
    """
    if deriv_fn is None:
        eps = 1e-7 * max(grid.dx, 1e-3)

        def deriv_fn(z, _e=eps):  # central difference fallback
            z = np.asarray(z, dtype=np.complex128)
            return (eval_fn(z + _e) - eval_fn(z - _e)) / (2 * _e)

    zeros = _find_real_zeros(grid, h_vals, eval_fn, deriv_fn, zero_tol)
    x_all = grid.points
    delta = 1e-4 * grid.dx
    bounds = [float(x_all[0])] + zeros + [float(x_all[-1])]
    segments: list[PhaseSegment] = []
    jumps: list[PhaseJump] = []
    level = 0.0
    for si in range(len(bounds) - 1):
        lo = bounds[si] + (delta if si > 0 else 0.0)
        hi = bounds[si + 1] - (delta if si + 1 < len(bounds) - 1 else 0.0)
        inner = x_all[(x_all > lo) & (x_all < hi)]
        xs = np.unique(np.concatenate([[lo], inner, [hi]]))
        hs = eval_fn(xs)
        xs, hs = _densify_phase(xs, hs, eval_fn)
        phi = np.unwrap(np.angle(hs))
        if si > 0:
            # continue from (phi_before - pi): gluing fixes the 2 pi branch,
            # the O(delta) offset from skirting the zero stays
            phi = phi + 2 * np.pi * np.round((level - phi[0]) / (2 * np.pi))
        segments.append(PhaseSegment(xs, phi))
        if si + 1 < len(bounds) - 1:
            xz = bounds[si + 1]
            c = complex(deriv_fn(np.asarray([xz]))[0])
            phi_before = float(phi[-1])
            jumps.append(PhaseJump(xz, phi_before, abs(c.real) > 1e-9 * abs(c)))
            level = phi_before - np.pi
    return PhaseCurve(tuple(segments), tuple(jumps))


def phase_curve(d: AnalyticDecomposition, zero_tol: float | None = None) -> PhaseCurve:
    """Continuous argument of the decomposition's h along the real axis."""

    def ev(z):
        return np.asarray(d.eval_at(np.asarray(z, dtype=np.complex128)))

    def dv(z):
        return np.asarray(d.deriv_at(np.asarray(z, dtype=np.complex128)))

    return phase_curve_from_callable(d.grid, d.h_real_axis, ev, dv, zero_tol)


def lattice_crossings(
    c: PhaseCurve, r: float, lattice: Lattice = Lattice()
) -> int:
    """Transversal crossings of the lattice lines over abscissae in (0, r].

    Graph crossings are located by linear interpolation inside each segment
    step (steps stay below pi/2, so a step meets at most one line); each
    transversal -pi jump crosses exactly one line, a tangential jump none.
    A sample landing exactly on a line with both neighbors on the same side
    is a graph tangency and contributes nothing, matching the fact that the
    signal grazes zero there without changing sign.
    """
    if not c.segments:
        return 0
    if r <= 0:
        raise InvalidInputError("crossings are counted over (0, r] with r > 0")
    if r > float(c.segments[-1].x[-1]) + 1e-9:
        raise InvalidInputError("curve does not cover the requested radius")
    off, sp = lattice.offset, lattice.spacing
    bias = 1e-12
    count = 0
    for seg in c.segments:
        idx = np.floor((seg.phi - off - bias) / sp).astype(np.int64)
        d_idx = np.diff(idx)
        if np.any(np.abs(d_idx) > 1):
            raise DiagnosticError("phase step crossed multiple lattice lines")
        for i in np.flatnonzero(d_idx != 0):
            k = max(idx[i], idx[i + 1])
            line = off + sp * k
            p0, p1 = seg.phi[i], seg.phi[i + 1]
            x0, x1 = seg.x[i], seg.x[i + 1]
            xc = x0 if p1 == p0 else x0 + (line - p0) / (p1 - p0) * (x1 - x0)
            if 0.0 < xc <= r:
                count += 1
        # retract the double count of an exact graph tangency from above:
        # the biased floor puts the on-line sample one cell down, so both
        # adjacent steps register although the curve never crosses
        res = np.mod(seg.phi - off, sp)
        on_line = np.minimum(res, sp - res) < 1e-11
        for i in np.flatnonzero(on_line):
            if (
                0 < i < seg.phi.size - 1
                and idx[i - 1] == idx[i + 1]
                and idx[i - 1] != idx[i]
                and 0.0 < seg.x[i] <= r
            ):
                count -= 2
    for j in c.jumps:
        if j.transversal and 0.0 < j.x <= r:
            count += 1
    return count


# ---------------------------------------------------------------------------
# Blaschke products and the quantitative bound


def blaschke(zeros: Sequence[complex], z) -> np.ndarray | complex:
    """Finite product of factors (1 - z/z_n) / (1 - z/conj(z_n)).

    Each factor is unimodular on the real axis and vanishes at its z_n in the
    open upper half-plane; the argument of the product increases along the
    real axis.  Real or lower-half zeros are rejected.
    """
    za = np.asarray(z, dtype=np.complex128)
    out = np.ones_like(za)
    for zn in zeros:
        zn = complex(zn)
        if zn.imag <= 0:
            raise InvalidInputError(f"Blaschke zero {zn} must lie strictly above R")
        out = out * (1 - za / zn) / (1 - za / np.conj(zn))
    return out if out.shape else complex(out)


def quant_bound(a: float, epsilon: float, r0: float, J: float, r: float) -> float:
    """Arithmetic lower bound (a - eps) r / pi - J (2 r0 + 1/r0) / pi - 1.

    Combines the gap width, the phase slack eps, the split radius r0 and the
    weighted norm J into the guaranteed sign-change count on (0, r].
    """
    if not (0 < epsilon < 0.5):
        raise InvalidInputError("epsilon must lie in (0, 1/2)")
    if not (r0 > 1):
        raise InvalidInputError("r0 must exceed 1")
    if not (r > 2 * r0):
        raise InvalidInputError("r must exceed 2 r0")
    return (a - epsilon) * r / np.pi - J * (2 * r0 + 1.0 / r0) / np.pi - 1.0


# ---------------------------------------------------------------------------
# half-plane transform pair across a spectral gap


def carleman_pair(s: SampledSignal, z: complex, half: str) -> complex:
    """Windowed transform of one half-line, the branch living off the spectrum.

    half = "upper" (Im z > 0): integral of f(t) e^{-itz} over the window's
    t < 0 part.  half = "lower" (Im z < 0): minus the integral over t > 0.
    The sign makes the two branches boundary values of a single function
    analytic wherever the transform vanishes, so for a signal with a spectral
    gap the mismatch across (-a, a) tends to 0 with the distance to the axis,
    while without the gap it stays of order one.
    """
    z = complex(z)
    t = s.x
    if half == "upper":
        if z.imag <= 0:
            raise InvalidInputError("upper-half transform needs Im z > 0")
        mask = t <= 0.0
        sign = 1.0
    elif half == "lower":
        if z.imag >= 0:
            raise InvalidInputError("lower-half transform needs Im z < 0")
        mask = t >= 0.0
        sign = -1.0
    else:
        raise InvalidInputError(f"half must be 'upper' or 'lower', got {half!r}")
    tt = t[mask]
    ff = s.values[mask]
    if tt.size < 2:
        return 0.0 + 0.0j
    w = np.ones(tt.size)
    w[0] = w[-1] = 0.5
    val = sign * np.sum(w * ff * np.exp(-1j * tt * z)) * s.grid.dx
    return complex(val)


def carleman_mismatch(s: SampledSignal, xi: float, delta: float) -> float:
    """|F_upper(xi + i delta) - F_lower(xi - i delta)|, the gap diagnostic."""
    if delta <= 0:
        raise InvalidInputError("delta must be positive")
    up = carleman_pair(s, complex(xi, delta), "upper")
    lo = carleman_pair(s, complex(xi, -delta), "lower")
    return float(abs(up - lo))
