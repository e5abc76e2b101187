"""Zero-place detection, sign-change counting, densities, averaged counts."""

import numpy as np
import pytest

from gapwave import Grid, SampledSignal, TrigPoly, synth_trig
from gapwave.errors import InvalidInputError, OutOfRangeError
from gapwave.oscillation import (
    averaged_S,
    density_profile,
    s_count,
    sign_change_places,
    zero_places,
)


def sampled(fn, lo, hi, n, x0=None):
    g = Grid(lo if x0 is None else x0, (hi - lo) / (n - 1), n)
    return SampledSignal(g, fn(g.points))


class TestZeroPlaces:
    def test_cos_point_places_refined(self):
        p = TrigPoly({1: 0.5})
        g = Grid(0.0, 10 * np.pi / 2560, 2561)
        s = SampledSignal(g, p.eval(g.points))
        places = zero_places(s, zero_tol=0.0, evaluator=p.eval)
        assert len(places) == 10
        truth = np.pi / 2 + np.pi * np.arange(10)
        got = np.array([q.left for q in places])
        assert np.all([q.is_point for q in places])
        assert np.max(np.abs(got - truth)) < 1e-10

    def test_constant_has_no_places(self):
        s = sampled(lambda x: np.ones_like(x), 0, 1, 64)
        assert zero_places(s) == []

    def test_exact_plateau(self):
        def f(x):
            out = np.where(x < 1, x - 1.0, 0.0)
            return np.where(x > 2, x - 2.0, out)

        s = sampled(f, 0, 3, 301)
        places = zero_places(s, zero_tol=0.0)
        assert len(places) == 1
        assert places[0].left == pytest.approx(1.0)
        assert places[0].right == pytest.approx(2.0)

    def test_all_zero_degenerate(self):
        s = sampled(lambda x: np.zeros_like(x), 0, 1, 32)
        places = zero_places(s)
        assert len(places) == 1 and places[0].degenerate
        assert (places[0].left, places[0].right) == (0.0, 1.0)

    def test_sample_landing_on_root_is_refined(self):
        # tolerance wide enough to capture the sample nearest the root
        p = TrigPoly({1: 0.5})
        g = Grid(0.0, np.pi / 100, 301)
        s = SampledSignal(g, p.eval(g.points))
        places = zero_places(s, zero_tol=2e-2, evaluator=p.eval)
        pts = [q for q in places if q.is_point]
        assert len(pts) >= 2
        for q in pts:
            k = round((q.left - np.pi / 2) / np.pi)
            assert abs(q.left - (np.pi / 2 + k * np.pi)) < 1e-10


class TestSignChanges:
    def test_cos_ten_changes(self):
        p = TrigPoly({1: 0.5})
        g = Grid(0.0, 10 * np.pi / 4000, 4001)
        rep = sign_change_places(SampledSignal(g, p.eval(g.points)), evaluator=p.eval)
        changes = [q for q in rep.places if q.sign_change]
        assert len(changes) == 10

    def test_square_touch_is_not_a_change(self):
        s = sampled(lambda x: (x - 5.0) ** 2, 0, 10, 1001)
        rep = sign_change_places(s)
        assert len(rep.places) >= 1
        assert all(not q.sign_change for q in rep.places)

    def test_plateau_change(self):
        def f(x):
            out = np.where(x < 1, x - 1.0, 0.0)
            return np.where(x > 2, x - 2.0, out)

        rep = sign_change_places(sampled(f, 0, 3, 301), zero_tol=0.0)
        assert len(rep.places) == 1
        assert rep.places[0].sign_change

    def test_boundary_touch_excluded(self):
        # zero run at the right window edge: flank unknown, not flagged
        def f(x):
            return np.where(x < 2, 2.0 - x, 0.0)

        rep = sign_change_places(sampled(f, 0, 3, 301), zero_tol=0.0)
        assert all(not q.sign_change for q in rep.places)

    def test_alternating_surrounding_signs(self):
        rng = np.random.default_rng(7)
        for _ in range(10):
            p = TrigPoly({n: rng.normal() + 1j * rng.normal() for n in range(1, 6)})
            g = Grid(0.0, 2 * np.pi / 1024, 4097)
            s = SampledSignal(g, p.eval(g.points))
            rep = sign_change_places(s, evaluator=p.eval)
            pos = rep.change_positions
            mid = 0.5 * (pos[:-1] + pos[1:])
            vals = p.eval(mid)
            assert np.all(vals[:-1] * vals[1:] < 0)


class TestCounting:
    def make_report(self, p, lo, hi, n):
        g = Grid(lo, (hi - lo) / (n - 1), n)
        return sign_change_places(SampledSignal(g, p.eval(g.points)), evaluator=p.eval)

    def test_cos_count(self):
        rep = self.make_report(TrigPoly({1: 0.5}), 0.0, 10 * np.pi, 8001)
        assert s_count(rep, 10 * np.pi) == 10

    def test_sin_half_open(self):
        rep = self.make_report(TrigPoly({1: -0.5j}), 0.0, 10 * np.pi, 8001)
        # changes at pi..9pi inside (0, 9.5pi]; the change at 0 is excluded
        assert s_count(rep, 9.5 * np.pi) == 9

    def test_cos3_near_linear_density(self):
        rep = self.make_report(TrigPoly({3: 0.5}), 0.0, 100.0, 20001)
        assert abs(s_count(rep, 100.0) - 3 * 100.0 / np.pi) <= 1.0

    def test_out_of_range(self):
        rep = self.make_report(TrigPoly({1: 0.5}), 0.0, 10.0, 101)
        with pytest.raises(OutOfRangeError):
            s_count(rep, 11.0)

    def test_monotone_in_r(self):
        rep = self.make_report(TrigPoly({2: 0.5, 5: 0.2j}), 0.0, 50.0, 10001)
        rs = np.linspace(0.5, 50.0, 200)
        counts = [s_count(rep, float(r)) for r in rs]
        assert np.all(np.diff(counts) >= 0)

    def test_halving_dx_stability(self):
        p = TrigPoly({2: 0.4, 7: 0.3 - 0.2j})
        coarse = self.make_report(p, 0.0, 40.0, 4001)
        fine = self.make_report(p, 0.0, 40.0, 8001)
        for r in np.linspace(5, 40, 15):
            assert abs(s_count(coarse, float(r)) - s_count(fine, float(r))) <= 1


class TestDensityProfile:
    def test_cos3_tail_min(self):
        p = TrigPoly({3: 0.5})
        g = Grid(0.0, 200.0 / 40000, 40001)
        rep = sign_change_places(SampledSignal(g, p.eval(g.points)), evaluator=p.eval)
        prof = density_profile(rep, np.linspace(5.0, 200.0, 100))
        assert 3 / np.pi - 0.02 <= prof.tail_min <= 3 / np.pi + 0.02

    def test_zero_signal_degenerate(self):
        g = Grid(0.0, 0.1, 101)
        rep = sign_change_places(SampledSignal(g, np.zeros(g.n)))
        prof = density_profile(rep, np.linspace(1.0, 10.0, 10))
        assert prof.degenerate and np.all(prof.ratio == 0)

    def test_rejects_bad_grid(self):
        g = Grid(0.0, 0.1, 101)
        rep = sign_change_places(SampledSignal(g, np.ones(g.n)))
        with pytest.raises(InvalidInputError):
            density_profile(rep, [3.0, 2.0, 1.0])


class TestAveragedS:
    def two_sided_reports(self, p, R, n):
        gp = Grid(0.0, R / n, n + 1)
        gn = Grid(-R, R / n, n + 1)
        sp_ = SampledSignal(gp, p.eval(gp.points))
        sn = SampledSignal(gn, p.eval(gn.points))
        return (
            sign_change_places(sp_, evaluator=p.eval),
            sign_change_places(sn, evaluator=p.eval),
        )

    def test_cos3_matches_exact_sum(self):
        a, r = 3.0, 200.0
        rp, rn = self.two_sided_reports(TrigPoly({3: 0.5}), r, 60000)
        got = averaged_S(rp, rn, r)
        # exact oracle: zeros at +/-(pi/6 + n pi/3); sum log(r/t) both sides
        t = np.pi / 6 + (np.pi / 3) * np.arange(0, int(a * r / np.pi) + 2)
        t = t[(t > 0) & (t <= r)]
        exact = 2 * np.sum(np.log(r / t))
        assert got == pytest.approx(exact, rel=1e-9)
        assert abs(got - 2 * a * r / np.pi) / (2 * a * r / np.pi) < 0.05

    def test_zero_signal(self):
        g = Grid(-10.0, 0.1, 201)
        rep = sign_change_places(SampledSignal(g, np.zeros(g.n)))
        assert averaged_S(rep, rep, 10.0) == 0.0

    def test_even_signal_symmetry(self):
        p = TrigPoly({2: 0.5, 4: 0.25})  # even: cos terms only
        rp, rn = self.two_sided_reports(p, 60.0, 30000)
        two_sided = averaged_S(rp, rn, 60.0)
        one_side_doubled = 2 * averaged_S(rp, rp, 60.0)
        # mirrored abscissae coincide for an even signal
        assert two_sided == pytest.approx(one_side_doubled, rel=1e-9)
