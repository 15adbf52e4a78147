#!/usr/bin/env python3
"""
Tests for phase time, time delay, sign-change energies and the delta limit
"""

import math
import sys
import unittest
from pathlib import Path

import numpy as np

# Add parent directory to path for imports
sys.path.insert(0, str(Path(__file__).parent.parent))

from src.core import timing
from src.core.model import area_family, delta_config, finite_config, unit_area_symmetric
from src.core.scattering import reduced_phase, reflection_amplitude
from src.utils.exceptions import BracketError, DomainError, GridError

TABLE_EA = {2.5: 0.03406092, 1.0: 0.10100123, 0.5: 0.16473112}


def unwrapped_slope(fn, x: float, h: float) -> float:
    values = np.unwrap([fn(x + d) for d in (-2.0 * h, -h, h, 2.0 * h)])
    return (values[0] - 8.0 * values[1] + 8.0 * values[2] - values[3]) / (12.0 * h)


class TestPhaseTime(unittest.TestCase):

    def test_group_velocity(self):
        self.assertEqual(timing.group_velocity(1.0), 2.0)
        self.assertEqual(timing.group_velocity(0.25), 1.0)
        with self.assertRaises(DomainError):
            timing.group_velocity(0.0)

    def test_tau_p(self):
        self.assertAlmostEqual(timing.tau_p(unit_area_symmetric(1.0), 1.0), 1.0)
        self.assertAlmostEqual(timing.tau_p(finite_config(0.5, 1.5, 1.0), 4.0), 0.5)
        self.assertEqual(timing.tau_p(delta_config(1.0), 2.0), 0.0)


class TestTimeDelay(unittest.TestCase):

    def test_tau_w_identity(self):
        for cfg in (unit_area_symmetric(2.5), finite_config(0.5, 1.0, 2.0)):
            for e in (0.02, 0.4, 3.0):
                sample = timing.tau_w(cfg, e)
                self.assertEqual(sample.tau_w, sample.tau_p - sample.tau_e)

    def test_delta_well_tau_w(self):
        sample = timing.tau_w(delta_config(1.0), 0.7)
        self.assertEqual(sample.tau_p, 0.0)
        self.assertEqual(sample.tau_w, -sample.tau_e)

    def test_below_guard_rejected(self):
        with self.assertRaises(DomainError):
            timing.tau_e(unit_area_symmetric(1.0), 0.5 * timing.THRESHOLD_GUARD)

    def test_step_robustness(self):
        cfg = unit_area_symmetric(1.0)
        for e in (0.05, 1.0, 6.0):
            default = timing.tau_e(cfg, e)
            halved = timing.tau_e(cfg, e, h=0.5 * max(1e-4, 1e-3 * math.sqrt(e)))
            self.assertAlmostEqual(halved, default, delta=1e-6 * max(1.0, abs(default)))

    def test_closed_form_and_reduced_phase_agree(self):
        cfg = unit_area_symmetric(2.5)
        for e in (0.05, 0.5, 4.0):
            k = math.sqrt(e)
            direct = unwrapped_slope(lambda q: reduced_phase(cfg, q * q), k, 1e-4) / timing.group_velocity(e)
            self.assertAlmostEqual(direct, timing.tau_e(cfg, e), delta=1e-5 * max(1.0, abs(direct)))

    def test_phase_slope_from_amplitude(self):
        cfg = unit_area_symmetric(2.5)
        for e in (0.5, 2.0, 5.0):
            direct = unwrapped_slope(lambda x: reflection_amplitude(cfg, x).delta, e, 1e-4)
            slope = timing.phase_slope(cfg, e)
            self.assertAlmostEqual(slope, direct, delta=1e-4 * max(1.0, abs(direct)))
            self.assertAlmostEqual(slope, -timing.tau_w(cfg, e).tau_w, delta=1e-9)

    def test_half_period_asymptote(self):
        cfg = delta_config(1.0)
        values = np.array([timing.tau_e(cfg, float(e)) for e in np.linspace(2.0, 10.0, 400)])
        self.assertAlmostEqual(values.mean(), 0.5 * math.pi, delta=0.05)
        offset = values - 0.5 * math.pi
        self.assertGreaterEqual(int(np.count_nonzero(np.sign(offset[1:]) != np.sign(offset[:-1]))), 3)


class TestSignChange(unittest.TestCase):

    def test_table_values(self):
        for a, expected in TABLE_EA.items():
            cfg = unit_area_symmetric(a)
            lo, hi = timing.bracket_sign_change(cfg)
            self.assertAlmostEqual(timing.find_sign_change(cfg, lo, hi), expected, delta=1e-4)

    def test_no_sign_change_in_bracket(self):
        with self.assertRaises(BracketError):
            timing.find_sign_change(unit_area_symmetric(2.5), 0.5, 1.0)

    def test_negative_below_and_divergent(self):
        for a, e_a in TABLE_EA.items():
            cfg = unit_area_symmetric(a)
            self.assertLess(timing.tau_e(cfg, e_a / 4.0), 0.0)
            self.assertGreater(timing.tau_e(cfg, 2.0 * e_a), 0.0)
            self.assertGreater(timing.tau_e(cfg, 4.0 * e_a), 0.0)
            values = [timing.tau_e(cfg, float(e)) for e in np.geomspace(e_a / 100.0, e_a / 2.0, 6)]
            self.assertTrue(all(later > earlier for earlier, later in zip(values, values[1:])))

    def test_scan_reports_missing_crossing(self):
        with self.assertRaises(BracketError):
            timing.scan_for_sign_change(lambda e: 1.0 + e, 0.1, 1.0)
        lo, hi = timing.scan_for_sign_change(lambda e: e - 0.3, 0.1, 1.0)
        self.assertTrue(lo <= 0.3 <= hi)

    def test_delay_curve_locates_sign_change(self):
        curve = timing.delay_curve(unit_area_symmetric(2.5), 0.001, 0.2, n0=100)
        self.assertGreater(len(curve), 0)
        self.assertTrue(np.all(curve.energies >= timing.THRESHOLD_GUARD))
        self.assertAlmostEqual(curve.features.e_a, TABLE_EA[2.5], delta=1e-4)


    def test_delay_curve_grid_budget(self):
        with self.assertRaises(GridError):
            timing.delay_curve(delta_config(1.0), 1.0, 200.0, n0=20, max_points=20)

    def test_wide_well_has_a_resonance(self):
        features = timing.delay_maxima(unit_area_symmetric(2.5), 0.05, 5.0)
        self.assertGreaterEqual(len(features.maxima), 1)
        self.assertTrue(all(0.05 <= e <= 5.0 for e in features.maxima))


class TestDeltaLimit(unittest.TestCase):

    def test_richardson_table(self):
        # samples 1 + a, geometric widths: the first column of corrections removes the linear term
        table = timing._richardson_in_width([1.04, 1.02, 1.01])
        self.assertAlmostEqual(table[1][1], 1.0)
        self.assertAlmostEqual(table[2][2], 1.0)

    def test_extrapolates_to_delta_well(self):
        report = timing.delta_limit_report(1.0)
        self.assertAlmostEqual(report.extrapolated, 0.45727096, delta=1e-3)
        self.assertLess(report.disagreement, timing.DELTA_LIMIT_AGREEMENT)
        steps = np.diff(report.samples)
        self.assertTrue(np.all(steps > 0) or np.all(steps < 0))
        self.assertIs(timing.last_delta_limit, report)

    def test_resonance_moves_up_as_well_narrows(self):
        wide = timing.delay_maxima(area_family(1.0, 0.4), 0.05, 10.0)
        narrow = timing.delay_maxima(area_family(1.0, 0.03), 0.05, 10.0)
        self.assertTrue(wide.maxima and narrow.maxima)
        self.assertGreater(narrow.maxima[0], wide.maxima[0])


if __name__ == '__main__':
    unittest.main()
