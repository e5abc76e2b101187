"""Heat smoothing: kernel facts, spectral flow, residuals, sign-change decay."""

import csv

import numpy as np
import pytest

from gapwave.core_signals import (
    GapSpec,
    Grid,
    SampledSignal,
    TrigPoly,
    random_highpass,
    synth_trig,
    verify_gap,
)
from gapwave.errors import InvalidInputError, NeedsRefinementError
from gapwave.heat_flow import (
    TemperatureField,
    heat_convolve,
    heat_kernel,
    heat_residual,
    heat_trig,
    monotonicity_check,
    simple_zero_time,
    temperature_field,
)
from gapwave.oscillation import s_count, sign_change_places


def period_window(n: int = 4096) -> Grid:
    # two full 2 pi periods starting at -pi/2, so (0, 2 pi] sits inside and
    # every integer harmonic lands exactly on a DFT bin
    return Grid(-np.pi / 2, 4 * np.pi / n, n)


# ---------------------------------------------------------------------------
# kernel


def test_kernel_peak_value():
    assert abs(heat_kernel(0.0, 1.0) - 1.0 / np.sqrt(np.pi)) < 1e-15


def test_kernel_unit_mass():
    x = np.linspace(-40, 40, 200001)
    for t in (0.1, 1.0, 10.0):
        assert abs(np.trapezoid(heat_kernel(x, t), x) - 1.0) < 1e-10


def test_kernel_transform_value():
    x = np.linspace(-30, 30, 400001)
    val = np.trapezoid(heat_kernel(x, 1.0) * np.exp(-2j * x), x)
    assert abs(val - np.exp(-1.0)) < 1e-10


def test_kernel_rejects_bad_time():
    with pytest.raises(InvalidInputError):
        heat_kernel(0.0, 0.0)
    with pytest.raises(InvalidInputError):
        heat_kernel(1.0, -2.0)


# ---------------------------------------------------------------------------
# the flow


def test_cosines_are_eigenfunctions():
    g = Grid(-np.pi, 2 * np.pi / 1024, 1024)
    for n, t in ((1, 0.5), (5, 0.37), (12, 0.05)):
        s = synth_trig(TrigPoly({n: 0.5}), g)
        ft = heat_convolve(s, t)
        assert np.max(np.abs(ft.values - np.exp(-(n**2) * t / 4) * s.values)) < 1e-12


def test_zero_time_is_identity():
    g = Grid(-np.pi, 2 * np.pi / 256, 256)
    s = synth_trig(TrigPoly({3: 0.5}), g)
    assert heat_convolve(s, 0.0) is s


def test_semigroup_property():
    g = Grid(-np.pi, 2 * np.pi / 1024, 1024)
    s = synth_trig(TrigPoly({1: 0.5, 4: 0.3, 9: 0.2}), g)
    two_step = heat_convolve(heat_convolve(s, 0.3), 0.2)
    one_step = heat_convolve(s, 0.5)
    assert np.max(np.abs(two_step.values - one_step.values)) < 1e-10


def test_negative_time_rejected():
    g = Grid(-np.pi, 2 * np.pi / 256, 256)
    s = synth_trig(TrigPoly({1: 0.5}), g)
    with pytest.raises(InvalidInputError):
        heat_convolve(s, -0.1)
    with pytest.raises(InvalidInputError):
        heat_trig(TrigPoly({1: 0.5}), -0.1)


def test_trig_flow_matches_sampled_flow():
    g = Grid(-np.pi, 2 * np.pi / 2048, 2048)
    p = TrigPoly({1: 0.4, 3: 0.3 - 0.2j, 8: 0.1})
    a = heat_convolve(synth_trig(p, g), 0.7)
    b = synth_trig(heat_trig(p, 0.7), g)
    assert np.max(np.abs(a.values - b.values)) < 1e-12


def test_spectral_flow_matches_direct_quadrature():
    # compact bump far from the window edge: wrap mass is e^{-(T/2)^2/t}
    T = 128.0
    n = 1 << 14
    g = Grid(-T / 2, T / n, n)
    x = g.points
    u = np.where(np.abs(x) < 6, np.cos(x) * (1 - (x / 6) ** 2) ** 2, 0.0)
    s = SampledSignal(g, u)
    t = 1.0
    spectral = heat_convolve(s, t)
    for j in range(n // 2 - 900, n // 2 + 900, 180):
        direct = np.trapezoid(heat_kernel(x[j] - x, t) * u, x)
        assert abs(spectral.values[j] - direct) < 1e-6


# ---------------------------------------------------------------------------
# temperature fields and residuals


def exact_field(n_x: int = 629, n_t: int = 101) -> TemperatureField:
    g = Grid(-np.pi, 2 * np.pi / n_x, n_x)
    ts = np.linspace(0.0, 1.0, n_t)
    U = np.exp(-ts[:, None] / 4) * np.cos(g.points)[None, :]
    return TemperatureField(g, ts, U)


def test_field_validates_shape_and_times():
    g = Grid(-np.pi, 2 * np.pi / 64, 64)
    with pytest.raises(InvalidInputError):
        TemperatureField(g, np.array([0.1, 0.2]), np.zeros((2, 64)))
    with pytest.raises(InvalidInputError):
        TemperatureField(g, np.array([0.0, 0.0]), np.zeros((2, 64)))
    with pytest.raises(InvalidInputError):
        TemperatureField(g, np.array([0.0, 0.1]), np.zeros((3, 64)))


def test_residual_small_for_exact_solution():
    assert heat_residual(exact_field()) < 1e-4


def test_residual_detects_non_temperature():
    g = Grid(-np.pi, 2 * np.pi / 629, 629)
    ts = np.linspace(0.0, 1.0, 101)
    U = np.tile(g.points[None, :] ** 2, (101, 1))
    res = heat_residual(TemperatureField(g, ts, U))
    assert abs(res - 2.0) < 1e-6


def test_residual_needs_enough_rows():
    g = Grid(-np.pi, 2 * np.pi / 64, 64)
    fld = TemperatureField(g, np.array([0.0, 0.1]), np.zeros((2, 64)))
    with pytest.raises(InvalidInputError):
        heat_residual(fld)


def test_convolved_field_is_a_temperature():
    # low harmonics at dx = dt = 1e-2: the dt^2 u_ttt term stays below 1e-4
    g = Grid(-np.pi, 2 * np.pi / 629, 629)
    s = synth_trig(TrigPoly({1: 0.6, 2: 0.15}), g)
    fld = temperature_field(s, np.linspace(0.0, 1.0, 101))
    assert np.max(np.abs(fld.values[0] - s.values)) < 1e-12
    assert heat_residual(fld) < 1e-4


def test_residual_converges_under_refinement():
    res = []
    for n_x, n_t in ((315, 51), (629, 101), (1257, 201)):
        g = Grid(-np.pi, 2 * np.pi / n_x, n_x)
        s = synth_trig(TrigPoly({5: 0.5}), g)
        fld = temperature_field(s, np.linspace(0.0, 0.5, n_t))
        res.append(heat_residual(fld))
    # halving dx and dt together should quarter the defect each step
    assert res[1] < res[0] / 2
    assert res[2] < res[0] / 8


def test_field_csv_exports(tmp_path):
    fld = temperature_field(
        synth_trig(TrigPoly({2: 0.5}), Grid(-np.pi, 2 * np.pi / 64, 64)),
        [0.0, 0.1, 0.2],
    )
    p1 = tmp_path / "field.csv"
    fld.to_csv(str(p1))
    rows = list(csv.reader(open(p1)))
    assert rows[0] == ["x", "t", "u"]
    assert len(rows) == 1 + 3 * 64
    p2 = tmp_path / "zeros.csv"
    fld.zero_trajectories_csv(str(p2))
    zrows = list(csv.reader(open(p2)))
    assert zrows[0] == ["t", "zeros"]
    assert len(zrows) == 4
    assert len(zrows[1]) == 1 + 4  # cos(2x): 4 sign changes on [-pi, pi)


# ---------------------------------------------------------------------------
# sign changes under the flow


def test_eigenfunction_counts_never_move():
    g = period_window()
    s = synth_trig(TrigPoly({4: 0.5}), g)
    rep = monotonicity_check(s, np.linspace(0, 2, 11), 2 * np.pi)
    assert np.all(rep.counts == 8)
    assert rep.nonincreasing


def test_fast_line_dies_and_count_drops():
    g = period_window()
    s = synth_trig(TrigPoly({1: 0.5, 10: 0.5}), g)
    rep = monotonicity_check(s, np.linspace(0, 4, 21), 2 * np.pi)
    assert rep.counts[0] >= 18
    assert rep.counts[-1] == 2
    assert rep.nonincreasing


def test_monotone_for_seeded_suite():
    g = period_window()
    for seed in range(30):
        p = random_highpass(GapSpec(1.0, 12.0), (1, 12), seed + 300)
        s = synth_trig(p, g)
        rep = monotonicity_check(s, np.linspace(0, 1, 11), 2 * np.pi)
        assert rep.nonincreasing, (seed, list(rep.counts))


def test_monotonicity_validates_time_grid():
    g = period_window(512)
    s = synth_trig(TrigPoly({2: 0.5}), g)
    with pytest.raises(InvalidInputError):
        monotonicity_check(s, [0.5, 1.0], np.pi)
    with pytest.raises(InvalidInputError):
        monotonicity_check(s, [0.0, 1.0, 1.0], np.pi)


def test_monotonicity_report_serializes():
    g = period_window(512)
    s = synth_trig(TrigPoly({2: 0.5}), g)
    obj = monotonicity_check(s, [0.0, 0.5], np.pi).to_json()
    assert obj["schema"] == "gapwave/1"
    assert obj["pass"] is True
    assert obj["counts"] == [2, 2]  # cos(2x) changes sign at pi/4 and 3pi/4


# ---------------------------------------------------------------------------
# simple zeros


def test_simple_zeros_immediately_for_clean_signal():
    g = period_window()
    s = synth_trig(TrigPoly({5: 0.5}), g)
    rep = simple_zero_time(s, 1.0, np.pi)
    assert rep.T == 1.0 * 0.5**20
    assert len(rep.zeros) == 5  # 5 zeros of cos(5x) in (0, pi]


def test_double_zeros_heat_away():
    g = period_window()
    s = synth_trig(TrigPoly({0: 1.0, 1: -0.5}), g)  # 1 - cos x >= 0
    rep = simple_zero_time(s, 1.0, 2 * np.pi)
    assert rep.zeros == ()  # strictly positive for every t > 0


def test_colliding_zeros_stay_simple_below_collision_time():
    # f = cos 3x + 1/2: the pairs merge when e^{-9t/4} falls to 1/2,
    # at t* = (4/9) log 2 ~ 0.308
    g = period_window()
    s = synth_trig(TrigPoly({0: 0.5, 3: 0.5}), g)
    t_star = 4.0 / 9.0 * np.log(2.0)
    rep = simple_zero_time(s, 0.8 * t_star, 2 * np.pi)
    assert len(rep.zeros) == 6
    # and past the collision the zeros are gone entirely
    late = heat_convolve(s, 1.2 * t_star)
    assert np.min(late.values) > 0


def test_unresolvable_plateau_raises():
    # half the window is exactly zero; smoothing leaves it under the zero
    # tolerance, so the plateau never refines to simple points
    n = 1 << 12
    g = Grid(-0.5, 30.5 / n, n)
    x = g.points
    vals = np.where(x > 20, np.sin(2 * np.pi * x), 0.0)
    with pytest.raises(NeedsRefinementError):
        simple_zero_time(SampledSignal(g, vals), 0.01, 25.0)


def test_simple_zero_time_validates_t0():
    g = period_window(512)
    s = synth_trig(TrigPoly({1: 0.5}), g)
    with pytest.raises(InvalidInputError):
        simple_zero_time(s, 0.0, np.pi)


# ---------------------------------------------------------------------------
# conserved structure


def test_l1_never_grows():
    g = period_window()
    for seed in range(10):
        p = random_highpass(GapSpec(1.0, 10.0), (1, 10), seed + 77)
        s = synth_trig(p, g)
        base = np.sum(np.abs(s.values)) * g.dx
        for t in (0.1, 0.5, 2.0):
            ft = heat_convolve(s, t)
            assert np.sum(np.abs(ft.values)) * g.dx <= base + 1e-9


def test_gap_survives_the_flow():
    T = 32 * np.pi
    n = 1 << 13
    g = Grid(-T / 2, T / n, n)
    gap = GapSpec(2.0, 8.0)
    for seed in range(10):
        p = random_highpass(gap, (1, 128), seed + 41, period=T)
        s = synth_trig(p, g)
        assert verify_gap(s, gap).passed
        for t in (0.3, 1.7):
            assert verify_gap(heat_convolve(s, t), gap).passed


def test_positivity_is_preserved():
    g = period_window()
    s = synth_trig(TrigPoly({0: 1.0, 1: -0.5}), g)  # 1 - cos x >= 0
    top = s.max_abs()
    for t in (0.05, 0.4, 3.0):
        ft = heat_convolve(s, t)
        assert np.min(ft.values) >= -1e-12 * top
