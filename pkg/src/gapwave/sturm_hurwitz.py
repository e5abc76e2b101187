"""Exact oscillation results for trigonometric polynomials.

Four mechanisms that pin the sign-change count of a polynomial whose
spectrum starts at order m: the direct 2m-per-period bound, the
orthogonality contradiction behind it, the winding-number argument on the
unit circle, and the alternation bound for band-limited signals.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .core_signals import (
    GapSpec,
    Grid,
    SampledSignal,
    TrigPoly,
    spectrum_of,
    synth_trig,
    verify_gap,
)
from .errors import DiagnosticError, InvalidInputError, NearZeroOnCircleError
from .hardy import decompose
from .oscillation import s_count, sign_change_places

TWO_PI = 2.0 * np.pi


@dataclass(frozen=True)
class SturmReport:
    m: int
    count: int
    passed: bool


@dataclass(frozen=True)
class WitnessReport:
    """Outcome of the orthogonality construction.

    applicable is False when the polynomial already shows at least 2m sign
    changes, which is the only thing that ever happens for genuine input;
    with injected points the report carries the degree <= m-1 factor g and
    the period integral of p*g, whose vanishing is the contradiction.
    """

    applicable: bool
    m: int
    s: int
    g: TrigPoly | None
    integral: float | None


@dataclass(frozen=True)
class WindingReport:
    turns: int
    imag_axis_crossings: int


@dataclass(frozen=True)
class AlternationReport:
    lower_bound: int
    s_f: int
    passed: bool


def _period_window(p: TrigPoly, n: int) -> SampledSignal:
    # one full period with an incommensurate offset so a zero never sits on
    # the seam sample; the per-period count is shift invariant
    T = p.period
    dx = T / n
    x0 = -T / 2 + 0.2371 * dx
    return synth_trig(p, Grid(x0, dx, n + 1))


def check_sturm_bound(p: TrigPoly) -> SturmReport:
    """Count sign changes over one period against the 2m lower bound.

    m is the order of the lowest surviving harmonic; the count comes from
    refined sign-change detection on a grid fine enough for the degree.
    """
    if p.is_zero():
        raise InvalidInputError("the zero polynomial has no oscillation to bound")
    m = p.gap_order
    n = max(8192, 512 * p.degree)
    s = _period_window(p, n)
    rep = sign_change_places(s, evaluator=p.eval)
    count = len(rep.change_positions)
    return SturmReport(m, count, count >= 2 * m)


def _half_sine_product(points: Sequence[float], period: float) -> TrigPoly:
    """Expand g(x) = prod sin(omega (x - x_j) / 2) as a TrigPoly.

    An even number of half-angle factors is periodic with degree exactly
    len(points)/2; the expansion reads the coefficients off a DFT of exact
    samples.
    """
    pts = [float(x) for x in points]
    if len(pts) % 2 != 0:
        raise InvalidInputError(
            "sign changes of a periodic function come in pairs; got "
            f"{len(pts)} points"
        )
    omega = TWO_PI / period
    deg = len(pts) // 2
    N = max(64, 8 * (deg + 1))
    x = np.arange(N) * (period / N)
    vals = np.ones(N)
    for xj in pts:
        vals = vals * np.sin(0.5 * omega * (x - xj))
    coeff = np.fft.fft(vals) / N
    top = float(np.max(np.abs(coeff))) or 1.0
    harm: dict[int, complex] = {}
    for n in range(deg + 1):
        c = complex(coeff[n])
        if abs(c) > 1e-12 * top:
            harm[n] = c
    # everything beyond deg must be numerically absent
    leak = max(
        (abs(coeff[k]) for k in range(deg + 1, N - deg)),
        default=0.0,
    )
    if leak > 1e-10 * top:
        raise DiagnosticError("half-sine product expansion leaked high harmonics")
    return TrigPoly(harm, period=period)


def orthogonality_witness(
    p: TrigPoly, points: Sequence[float] | None = None
) -> WitnessReport:
    """The contradiction behind the 2m bound, made computable.

    If p had fewer than 2m sign changes, at points x_1..x_s, then
    g = prod sin(omega(x - x_j)/2) has degree s/2 <= m-1, p*g would keep one
    sign, yet the period integral of p*g vanishes because every harmonic of
    g sits below the spectrum of p.  For genuine polynomials s >= 2m always
    holds and the construction is not applicable; injected points let the
    vanishing integral be observed directly.
    """
    if p.is_zero():
        raise InvalidInputError("the zero polynomial has no sign structure")
    m = p.gap_order
    if m < 1:
        return WitnessReport(False, m, -1, None, None)
    if points is None:
        rep = sign_change_places(
            _period_window(p, max(8192, 512 * p.degree)), evaluator=p.eval
        )
        if any(q.degenerate for q in rep.places):
            raise DiagnosticError("unresolved zero run; sign changes ambiguous")
        pts = list(rep.change_positions)
    else:
        pts = [float(x) for x in points]
    s = len(pts)
    if s >= 2 * m:
        return WitnessReport(False, m, s, None, None)
    g = _half_sine_product(pts, p.period)
    # exact quadrature: N uniform nodes integrate trig polys of degree < N
    N = 4 * (p.degree + g.degree + 1)
    x = np.arange(N) * (p.period / N)
    integral = float(np.sum(p.eval(x) * g.eval(x)) * (p.period / N))
    return WitnessReport(True, m, s, g, integral)


def winding_count(p_coeffs: Sequence[complex], samples: int = 4096) -> WindingReport:
    """Winding number of z -> p(z) around 0 on the unit circle.

    turns accumulates the argument over one positive loop; crossings counts
    transversal sign changes of Re p along the loop (seam pair included).
    The sample count is raised internally until adjacent argument steps stay
    below pi/2, so the requested resolution only sets a floor.
    """
    coeffs = np.asarray(list(p_coeffs), dtype=np.complex128)
    if coeffs.size == 0 or not np.any(coeffs != 0):
        raise InvalidInputError("polynomial must be nonzero")
    if samples < 64:
        raise InvalidInputError("need at least 64 samples on the circle")
    deg = int(np.max(np.flatnonzero(np.abs(coeffs) > 0)))
    N = max(int(samples), 64 * (deg + 1))
    for _ in range(16):
        th = np.arange(N) * (TWO_PI / N)
        w = np.polynomial.polynomial.polyval(np.exp(1j * th), coeffs)
        if np.min(np.abs(w)) < 1e-12:
            raise NearZeroOnCircleError(
                "polynomial dips below 1e-12 on the unit circle"
            )
        closed = np.concatenate([w, w[:1]])
        ph = np.unwrap(np.angle(closed))
        if np.max(np.abs(np.diff(ph))) < np.pi / 2:
            break
        N *= 2
    else:
        raise DiagnosticError("argument sampling did not settle")
    raw_turns = (ph[-1] - ph[0]) / TWO_PI
    turns = int(np.round(raw_turns))
    if abs(raw_turns - turns) > 0.05:
        raise DiagnosticError(f"winding number not integral: {raw_turns}")
    re = closed.real
    flips = int(np.sum(np.sign(re[1:]) * np.sign(re[:-1]) < 0))
    return WindingReport(turns, flips)


def _band_energy_ok(s: SampledSignal, a: float, b: float) -> bool:
    sp = spectrum_of(s)
    power = np.abs(sp.amplitudes) ** 2
    total = float(power.sum())
    if total == 0.0:
        return True
    high = float(power[np.abs(sp.freqs) > b * (1.0 + 1e-9)].sum())
    return high <= 1e-8 * total and verify_gap(s, GapSpec(a, b)).passed


def logan_g(s: SampledSignal, a: float, b: float) -> SampledSignal:
    """Demodulate a band-limited signal to its slow envelope companion.

    For spectrum inside a <= |xi| <= b, write f = e^{ibx} h1 + conj, with
    h the positive-frequency half; g = 2 Re(e^{-ibx} h) then has spectrum
    in [-(b-a), b-a] and satisfies f(n pi / b) = (-1)^n g(n pi / b).
    """
    if not (0 < a <= b):
        raise InvalidInputError("need 0 < a <= b")
    if not _band_energy_ok(s, a, b):
        raise InvalidInputError(
            f"signal is not band-limited to {a} <= |xi| <= {b}"
        )
    h = decompose(s).h_real_axis
    g_vals = 2.0 * np.real(np.exp(-1j * b * s.x) * h)
    return SampledSignal(s.grid, g_vals)


def alternation_bound(
    s: SampledSignal, g: SampledSignal, b: float, r: float
) -> AlternationReport:
    """Check s(r, f) >= floor(b r / pi) - s(r, g) on the sampled window.

    The bound is the alternation mechanism: f agrees with (-1)^n g on the
    lattice n pi / b, so between consecutive lattice points f either changes
    sign or g already did.  The right-hand side only discounts sign changes
    of g: when g instead touches zero at a lattice point without changing
    sign, f vanishes there tangentially and two adjacent forced intervals
    die at once, so the reported bound can exceed the true count and the
    check fails honestly.  Away from such tangencies the bound is exact.
    """
    if g.grid != s.grid:
        raise InvalidInputError("f and g must share one grid")
    rep_f = sign_change_places(s)
    rep_g = sign_change_places(g)
    lower = int(np.floor(b * r / np.pi)) - s_count(rep_g, r)
    sf = s_count(rep_f, r)
    return AlternationReport(lower, sf, sf >= lower)
