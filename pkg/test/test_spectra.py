#!/usr/bin/env python3
"""
Tests for bound states with harmonic, flat and laddered backgrounds
"""

import sys
import unittest
from pathlib import Path

# Add parent directory to path for imports
sys.path.insert(0, str(Path(__file__).parent.parent))

from src.core import spectra
from src.core.model import area_family, delta_config, finite_config, unit_area_symmetric
from src.utils.exceptions import DomainError

DELTA_HARMONIC_E0 = -0.0797104


class TestDeltaWell(unittest.TestCase):

    def test_flat_background(self):
        for g in (1.0, 2.0):
            states = spectra.bound_states(delta_config(g), background=spectra.flat_background)
            self.assertEqual(len(states), 1)
            self.assertAlmostEqual(states[0].e, -g * g / 4.0, delta=1e-12)
            self.assertIsNone(states[0].nodes)

    def test_harmonic_background(self):
        states = spectra.bound_states(delta_config(1.0))
        self.assertEqual(len(states), 1)
        self.assertAlmostEqual(states[0].e, DELTA_HARMONIC_E0, delta=1e-5)
        self.assertEqual(states[0].nodes, 0)

    def test_window(self):
        lower, upper = spectra.energy_window(delta_config(2.0))
        self.assertAlmostEqual(lower, -1.5 - 1e-3)
        self.assertEqual(upper, 0.0)


class TestFiniteWell(unittest.TestCase):

    def test_unit_area_has_one_state(self):
        self.assertEqual(spectra.count_by_area(1.0, (0.5, 1.0, 2.5)), [1, 1, 1])

    def test_ground_state_has_no_nodes(self):
        states = spectra.bound_states(unit_area_symmetric(1.0))
        self.assertEqual([s.index for s in states], [0])
        self.assertEqual(states[0].nodes, 0)
        self.assertTrue(-0.5 < states[0].e < 0.0)

    def test_harmonic_wall_raises_energy(self):
        for a in (0.5, 2.5):
            cfg = unit_area_symmetric(a)
            harmonic = spectra.bound_states(cfg)[0].e
            flat = spectra.bound_states(cfg, background=spectra.flat_background)[0].e
            self.assertGreater(harmonic, flat)

    def test_converges_to_delta_well(self):
        coarse = spectra.bound_states(area_family(1.0, 0.01))[0].e
        fine = spectra.bound_states(area_family(1.0, 0.005))[0].e
        self.assertAlmostEqual(2.0 * fine - coarse, DELTA_HARMONIC_E0, delta=1e-4)

    def test_deeper_wells_hold_more_states(self):
        counts = spectra.count_by_area(20.0, (1.0,))
        self.assertGreater(counts[0], 1)
        states = spectra.bound_states(area_family(20.0, 1.0))
        self.assertEqual([s.nodes for s in states], list(range(len(states))))

    def test_outside_window_rejected(self):
        cfg = unit_area_symmetric(1.0)
        for e in (0.0, 0.2, -0.6):
            with self.assertRaises(DomainError):
                spectra.matching_function(cfg, e)

    def test_wide_well_count_matches_ladder(self):
        # a = 5 lies beyond the series domain at the left edge
        cfg = finite_config(5.0, 5.0, 2.0)
        exact = spectra.bound_states(cfg)
        self.assertGreater(len(exact), 1)
        self.assertEqual(len(spectra.ladder_bound_states(cfg, n=20000, xtol=1e-9)), len(exact))

    def test_ladder_agrees(self):
        cfg = unit_area_symmetric(2.5)
        exact = spectra.bound_states(cfg)
        ladder = spectra.ladder_bound_states(cfg)
        self.assertEqual(len(ladder), len(exact))
        for s, t in zip(exact, ladder):
            self.assertAlmostEqual(s.e, t.e, delta=1e-6)


if __name__ == '__main__':
    unittest.main()
