"""Closed-form charge family, scaling operators, and the two example builds."""

import csv
import warnings

import numpy as np
import pytest

from gapwave.core_signals import Grid, SampledSignal
from gapwave.errors import DiagnosticError, InvalidInputError
from gapwave.limit_sets_examples import (
    IntervalMeasure,
    ZeroSet,
    boundary_charge,
    charge_profile,
    example1_build,
    example2_build,
    find_constants,
    integer_zero_set,
    q_closed,
    Q_closed,
    scale_mu,
    scale_u,
    scaling_orbit,
    split_check,
    transform_residual,
    u0_profile,
)
from gapwave.oscillation import sign_change_places, s_count

K = 0.1


# ---------------------------------------------------------------------------
# closed forms


def test_bump_spot_values():
    assert u0_profile(1.0, K) == -K
    assert u0_profile(0.0, K) == 0.0
    assert u0_profile(2.0, K) == 0.0
    assert abs(u0_profile(1.5, K) + 0.5625 * K) < 1e-15
    assert u0_profile(-0.3, K) == 0.0 and u0_profile(2.7, K) == 0.0


def test_primitive_spot_values():
    assert Q_closed(1.0, K) == 0.0
    assert abs(Q_closed(2.0, K) - 4 * K / 3) < 1e-15
    assert abs(Q_closed(0.0, K) + 4 * K / 3) < 1e-15


def test_density_spot_values():
    assert abs(q_closed(1.0, K) - 16 * K / 3) < 1e-15
    assert abs(q_closed(0.0, K) + 8 * K / 3) < 1e-15
    assert abs(q_closed(2.0, K) + 8 * K / 3) < 1e-15


def test_closed_forms_finite_at_log_points():
    # the (y^2-1) weights absorb the log singularities at x = 0 and 2
    x = np.array([0.0, 2.0, 1e-13, 2 - 1e-13])
    assert np.all(np.isfinite(Q_closed(x, K)))
    assert np.all(np.isfinite(q_closed(x, K)))


def test_density_is_the_derivative():
    x = np.linspace(-4, 6, 2001)
    x = x[(np.abs(x) > 1e-3) & (np.abs(x - 2) > 1e-3)]
    h = 1e-5
    dQ = (Q_closed(x + h, K) - Q_closed(x - h, K)) / (2 * h)
    assert np.max(np.abs(dQ - q_closed(x, K))) < 1e-6 * np.max(np.abs(q_closed(x, K)))


def test_density_symmetry_about_one():
    x = np.linspace(0, 3, 1501)
    assert np.max(np.abs(q_closed(1 + x, K) - q_closed(1 - x, K))) < 1e-12


def test_boundary_values_match_transform_of_primitive():
    # u0 = (H(Q) - H(Q)(3)) / pi on the sampling grid
    res = transform_residual(K, np.linspace(-4, 6, 401))
    assert res < 1e-5


def test_charge_profile_builds_and_freezes():
    g = Grid(-4.0, 10.0 / 1000, 1000)
    prof = charge_profile(K, g)
    assert prof.q_values.flags.writeable is False
    assert abs(np.max(prof.q_values) - 16 * K / 3) < 1e-6
    with pytest.raises(InvalidInputError):
        charge_profile(-1.0, g)


# ---------------------------------------------------------------------------
# constants


def test_constants_land_in_expected_ranges():
    c = find_constants(K)
    assert 3.20 * K <= c.m <= 3.30 * K
    assert 1.30 * K <= c.eta <= 1.42 * K
    assert abs(c.k_threshold - 0.116) < 0.005
    assert abs(c.m_prime - (c.m + q_closed(0.0, K))) < 1e-12
    assert c.m_prime < c.m


def test_admissibility_flag_is_monotone():
    assert find_constants(0.05).admissible
    assert find_constants(0.11).admissible
    assert not find_constants(0.12).admissible
    assert not find_constants(0.2).admissible


def test_threshold_does_not_depend_on_k():
    a = find_constants(0.05).k_threshold
    b = find_constants(0.2).k_threshold
    assert abs(a - b) < 1e-9


# ---------------------------------------------------------------------------
# scaling operators


def gaussian_signal(n: int = 1 << 14) -> SampledSignal:
    g = Grid(-20.0, 40.0 / n, n)
    return SampledSignal(g, np.exp(-g.points**2))


def test_scale_identity():
    s = gaussian_signal()
    assert np.array_equal(scale_u(s, 1.0).values, s.values)


def test_scale_matches_closed_form():
    s = gaussian_signal()
    a = scale_u(s, 1.5)
    expect = np.exp(-2.25 * s.x**2) / 1.5
    assert np.max(np.abs(a.values - expect)) < 1e-5


def test_scale_fixes_homogeneous_profiles():
    # |x| has scaling degree 1, the cone-type fixed point of the operator
    n = 1 << 12
    g = Grid(-8.0, 16.0 / n, n)
    s = SampledSignal(g, np.abs(g.points))
    for t in (0.25, 0.5, 1.0):
        assert np.max(np.abs(scale_u(s, t).values - s.values)) < 1e-12


def test_scale_warns_on_truncation():
    n = 256
    g = Grid(-2.0, 4.0 / n, n)
    s = SampledSignal(g, np.ones(n))
    with pytest.warns(RuntimeWarning):
        scale_u(s, 3.0)
    with pytest.raises(InvalidInputError):
        scale_u(s, 0.0)


def test_orbit_holds_snapshots():
    s = gaussian_signal(1 << 10)
    orb = scaling_orbit(s, [0.5, 1.0])
    assert len(orb.profiles) == 2
    assert np.array_equal(orb.profiles[1].values, s.values)
    with pytest.raises(InvalidInputError):
        scaling_orbit(s, [])


def test_measure_scaling_preserves_lebesgue():
    edges = np.linspace(-5, 5, 11)
    leb = IntervalMeasure(edges, np.diff(edges))
    half = scale_mu(leb, 0.5)
    assert np.max(np.abs(half.masses - leb.masses)) < 1e-12
    assert abs(leb.mass(-0.25, 1.75) - 2.0) < 1e-12
    with pytest.raises(InvalidInputError):
        IntervalMeasure(edges, np.ones(3))
    with pytest.raises(InvalidInputError):
        scale_mu(leb, -1.0)


def test_measure_scaling_warns_at_span_edge():
    edges = np.linspace(-5, 5, 11)
    leb = IntervalMeasure(edges, np.diff(edges))
    with pytest.warns(RuntimeWarning):
        scale_mu(leb, 2.0)


# ---------------------------------------------------------------------------
# charge of boundary data and the splitting identity


def wide_bump(k: float = K, n: int = 1 << 16) -> SampledSignal:
    g = Grid(-80.0, 160.0 / n, n)
    return SampledSignal(g, u0_profile(g.points, k))


def test_charge_recovers_scaled_density():
    # the bump's extension carries line charge q/pi^2
    u = wide_bump()
    rho = boundary_charge(u)
    x = u.x
    target = q_closed(x, K) / np.pi**2
    inner = (x > -3) & (x < 5)
    smooth = inner & (np.abs(x) > 0.05) & (np.abs(x - 2) > 0.05)
    assert np.max(np.abs(rho.values[smooth] - target[smooth])) < 1e-5
    # the density's log kinks at 0 and 2 cost accuracy but stay bounded
    assert np.max(np.abs(rho.values[inner] - target[inner])) < 2e-4


def test_cone_charge_is_uniform():
    m = find_constants(K).m
    u = wide_bump()
    z = SampledSignal(u.grid, np.zeros(u.grid.n))
    rho = boundary_charge(z, cone=np.pi * m)
    assert np.max(np.abs(rho.values - m)) < 1e-12


def test_split_residual_zero_at_identity():
    u = wide_bump()
    assert split_check(u, 1.0, cone=0.1) == 0.0


def test_split_residual_small_at_scale_two():
    u = wide_bump()
    m = find_constants(K).m
    cone = np.pi * m / np.pi**2
    assert split_check(u, 2.0, cone=cone) < 1e-6
    assert split_check(u, 0.5, cone=cone) < 1e-6
    # without the cone the normalizing integral is small, so relative error grows
    assert split_check(u, 2.0) < 1e-4
    with pytest.raises(InvalidInputError):
        split_check(u, -2.0)


# ---------------------------------------------------------------------------
# integer zero sets


def test_unit_slope_fills_every_integer():
    zs = integer_zero_set(np.arange(11.0))
    assert zs.positions == tuple(range(1, 11))
    assert zs.density(0, 10) == 1.0


def test_half_slope_takes_even_integers():
    zs = integer_zero_set(np.arange(11.0) / 2)
    assert zs.positions == (2, 4, 6, 8, 10)
    assert zs.density(0, 10) == 0.5


def test_zero_set_validation():
    with pytest.raises(InvalidInputError):
        integer_zero_set([0.0, 1.0, 0.5])
    with pytest.raises(InvalidInputError):
        integer_zero_set([3.0])
    with pytest.raises(DiagnosticError):
        integer_zero_set([0.0, 2.5])  # unit cell carrying mass 2
    with pytest.raises(InvalidInputError):
        ZeroSet((3, 3), 5)
    with pytest.raises(InvalidInputError):
        ZeroSet((0,), 5)


def test_count_tracks_mass_profile():
    m = find_constants(K).m
    F = Q_closed(np.arange(51.0), K) + m * np.arange(51.0)
    zs = integer_zero_set(F)
    counts = np.array([zs.count_upto(n) for n in range(1, 51)])
    assert np.max(np.abs(counts - (F[1:] - F[0]))) <= 1.0


def test_zero_set_csv(tmp_path):
    zs = integer_zero_set(np.arange(6.0) / 2)
    p = tmp_path / "zeros.csv"
    zs.to_csv(str(p))
    rows = list(csv.reader(open(p)))
    assert rows == [["2"], ["4"]]


# ---------------------------------------------------------------------------
# the scheduled construction


def test_example2_peak_density_tracks_target():
    res = example2_build(K, [5 * 4**j for j in range(6)])
    r = res.report
    assert r.peak_block == (320.0, 1280.0)
    assert abs(r.peak_ratio - 1.0) <= 0.10
    assert r.sign_change_density <= r.sign_density_bound
    assert r.sign_change_density < r.one_minus_m
    assert r.label == "finite-schedule approximation"


def test_example2_first_block_also_lands():
    res = example2_build(K, [5.0, 20.0, 80.0])
    assert abs(res.report.peak_ratio - 1.0) <= 0.10


def test_example2_zero_structure():
    res = example2_build(K, [5.0, 20.0, 80.0])
    zs = res.zeros
    assert all(isinstance(n, int) and 1 <= n <= zs.R for n in zs.positions)
    assert zs.R == 80
    # masses stay 0/1: strict increase
    assert all(a < b for a, b in zip(zs.positions, zs.positions[1:]))


def test_example2_sign_changes_match_oscillation_count():
    # small schedule keeps the product's dynamic range tame, so the
    # generic sign-change counter sees the same flips the parity rule gives
    res = example2_build(K, [5.0, 20.0, 80.0])
    f = res.f
    rep = sign_change_places(f)
    counted = s_count(rep, f.grid.x_last)
    mids = np.arange(np.floor(f.grid.x0), np.ceil(f.grid.x_last)) + 0.5
    mids = mids[(mids > f.grid.x0) & (mids < f.grid.x_last)]
    zarr = np.asarray(res.zeros.positions, float)
    par = np.searchsorted(zarr, mids) % 2
    sin_par = np.floor(mids).astype(int) % 2
    signs = np.where((par + sin_par) % 2 == 1, -1, 1)
    exact = int(np.sum(signs[1:] != signs[:-1]))
    assert counted == exact


def test_example2_report_serializes():
    res = example2_build(K, [5.0, 20.0, 80.0])
    obj = res.report.to_json()
    assert obj["schema"] == "gapwave/1"
    assert set(obj["densities"]) == {
        "peak_zero_density",
        "peak_target",
        "peak_ratio",
        "sign_change_density",
        "sign_density_bound",
        "one_minus_m",
    }


def test_example2_validation():
    with pytest.raises(InvalidInputError):
        example2_build(0.2, [5.0, 20.0, 80.0])  # k above threshold
    with pytest.raises(InvalidInputError):
        example2_build(K, [5.0, 15.0, 60.0])  # ratio 3 < 4
    with pytest.raises(InvalidInputError):
        example2_build(K, [5.0, 20.0], R=40.0)  # beyond the schedule
    with pytest.raises(InvalidInputError):
        example2_build(K, [5.0, 20.0], R=10.0)  # no complete square block


# ---------------------------------------------------------------------------
# the interval construction


def test_example1_single_interval():
    res = example1_build([(10, 13)], 0.75, 0.05 * np.pi, (-300.0, 300.0))
    assert res.report.sign_changes == (0,)
    assert res.zeros == tuple(range(10, 14))
    assert min(res.report.min_abs) > 0


def test_example1_two_intervals_and_gap():
    res = example1_build([(10, 13), (40, 46)], 0.75, 0.05 * np.pi, (-500.0, 500.0))
    r = res.report
    assert r.sign_changes == (0, 0)
    assert r.gap_energy_ratio < 1e-6
    assert r.outside_band_ratio < 1e-6
    assert r.gap_verified
    assert abs(r.reference_density - 1.0) <= 0.02


def test_example1_report_serializes():
    res = example1_build([(10, 13)], 0.75, 0.05 * np.pi, (-300.0, 300.0))
    obj = res.report.to_json()
    assert obj["schema"] == "gapwave/1"
    assert obj["intervals"] == [[10, 13]]
    assert "densities" in obj and "gap_energy_ratio" in obj


def test_example1_validation():
    eps = 0.05 * np.pi
    with pytest.raises(InvalidInputError):
        example1_build([(10, 13)], 1.5, eps, (-100.0, 100.0))
    with pytest.raises(InvalidInputError):
        example1_build([(10, 13)], 0.75, 2.0, (-100.0, 100.0))
    with pytest.raises(InvalidInputError):
        example1_build([(13, 10)], 0.75, eps, (-100.0, 100.0))
    with pytest.raises(InvalidInputError):
        example1_build([(10, 13), (12, 15)], 0.75, eps, (-100.0, 100.0))
    with pytest.raises(InvalidInputError):
        example1_build([(10, 80)], 0.75, eps, (-100.0, 100.0))  # growth condition
    with pytest.raises(InvalidInputError):
        example1_build([], 0.75, eps, (-100.0, 100.0))
