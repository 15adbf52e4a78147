#!/usr/bin/env python3
"""
Tests for transfer matrices, harmonic ladders and the waveguide mapping
"""

import math
import sys
import unittest
from pathlib import Path

import numpy as np

# Add parent directory to path for imports
sys.path.insert(0, str(Path(__file__).parent.parent))

from src.core.harmonic import log_derivative, log_derivative_ode
from src.core.model import delta_config, unit_area_symmetric
from src.core.stepladder import (
    StepPotential, TransferMatrix, cutoff_profile, discretize_harmonic, ladder_log_derivative,
    ladder_profile, ladder_propagate, segment_matrix, waveguide_profile, well_ladder
)
from src.utils.exceptions import DomainError, VariantError


def assert_matrix_close(case, m: TransferMatrix, expected, tol=1e-12):
    for got, want in zip((m.m11, m.m12, m.m21, m.m22), expected):
        case.assertAlmostEqual(got, want, delta=tol)


class TestSegmentMatrix(unittest.TestCase):

    def test_free_drift(self):
        assert_matrix_close(self, segment_matrix(0.3, 0.3, 0.7), (1.0, 0.7, 0.0, 1.0))

    def test_half_period(self):
        assert_matrix_close(self, segment_matrix(math.pi ** 2, 0.0, 1.0), (-1.0, 0.0, 0.0, -1.0))

    def test_evanescent(self):
        assert_matrix_close(self, segment_matrix(-1.0, 0.0, 1.0),
                            (math.cosh(1.0), math.sinh(1.0), math.sinh(1.0), math.cosh(1.0)))

    def test_width_must_be_positive(self):
        with self.assertRaises(DomainError):
            segment_matrix(1.0, 0.0, 0.0)

    def test_unit_determinant(self):
        rng = np.random.default_rng(7)
        for e, v, w in zip(rng.uniform(-10, 10, 10000), rng.uniform(-10, 10, 10000), rng.uniform(1e-3, 0.5, 10000)):
            self.assertAlmostEqual(segment_matrix(float(e), float(v), float(w)).det, 1.0, delta=1e-12)

    def test_semigroup(self):
        for e, v in ((2.0, -0.5), (-1.0, 3.0), (0.4, 0.4)):
            whole = segment_matrix(e, v, 0.8)
            split = segment_matrix(e, v, 0.5) @ segment_matrix(e, v, 0.3)
            assert_matrix_close(self, split, (whole.m11, whole.m12, whole.m21, whole.m22))


class TestLadder(unittest.TestCase):

    def test_midpoint_values(self):
        steps = discretize_harmonic(-2.0, 0.0, 2)
        np.testing.assert_allclose(steps.edges, [-2.0, -1.0, 0.0])
        np.testing.assert_allclose(steps.values, [2.25, 0.25])
        single = discretize_harmonic(-8.0, -2.5, 1)
        self.assertEqual(single.values[0], 27.5625)

    def test_invalid_ladders(self):
        with self.assertRaises(DomainError):
            discretize_harmonic(-1.0, -2.0, 10)
        with self.assertRaises(DomainError):
            discretize_harmonic(-2.0, 0.5, 10)
        with self.assertRaises(DomainError):
            StepPotential([0.0, 1.0, 1.0], [0.0, 0.0])
        with self.assertRaises(DomainError):
            StepPotential([0.0, 1.0], [0.0, 0.0])

    def test_flat_barrier(self):
        steps = StepPotential([-5.0, 0.0], [0.0])
        self.assertAlmostEqual(ladder_log_derivative(-1.0, steps), 1.0, delta=1e-12)

    def test_allowed_start_rejected(self):
        with self.assertRaises(DomainError):
            ladder_propagate(1.0, StepPotential([-1.0, 0.0], [0.5]))

    def test_ground_state_anchor(self):
        value = ladder_log_derivative(1.0, discretize_harmonic(-8.0, -2.0, 100000))
        self.assertAlmostEqual(value, 2.0, delta=1e-6)

    def test_agrees_with_riccati_oracle(self):
        value = ladder_log_derivative(0.6, discretize_harmonic(-8.0, -2.5, 100000))
        self.assertAlmostEqual(value, log_derivative_ode(0.6, -2.5), delta=1e-6)

    def test_second_order_convergence(self):
        exact = log_derivative(1.0, -2.0)
        errors = [abs(ladder_log_derivative(1.0, discretize_harmonic(-8.0, -2.0, n)) - exact)
                  for n in (1000, 2000)]
        self.assertAlmostEqual(errors[0] / errors[1], 4.0, delta=0.4)

    def test_profile_keeps_sign(self):
        steps = discretize_harmonic(-8.0, 0.0, 4000)
        self.assertTrue(np.all(ladder_profile(0.5, steps) > 0))

    def test_well_ladder(self):
        cfg = unit_area_symmetric(1.0)
        steps = well_ladder(cfg, 100, well_steps=4)
        self.assertEqual(len(steps), 104)
        self.assertEqual(steps.x_right, 1.0)
        np.testing.assert_allclose(steps.values[-4:], -0.5)
        with self.assertRaises(VariantError):
            well_ladder(delta_config(1.0), 100)


class TestWaveguide(unittest.TestCase):

    def test_cutoff_values(self):
        self.assertEqual(cutoff_profile(StepPotential([0.0, 1.0], [0.0]), 4.0), [2.0])
        np.testing.assert_allclose(cutoff_profile(discretize_harmonic(-2.0, 0.0, 2), 0.0), [1.5, 0.5])

    def test_negative_cutoff_rejected(self):
        with self.assertRaises(DomainError):
            cutoff_profile(StepPotential([0.0, 1.0], [-1.0]), 0.5)

    def test_unit_area_profile(self):
        cfg = unit_area_symmetric(2.5)
        sections = waveguide_profile(cfg, n=50)
        self.assertEqual(len(sections), 51)
        self.assertEqual(sections[-1].omega_c, 0.0)
        self.assertEqual(sections[-1].x_right, 2.5)
        self.assertAlmostEqual(sections[0].omega_c, math.sqrt(sections[0].v + cfg.v0))
        self.assertTrue(all(s.x_left < s.x_right for s in sections))


if __name__ == '__main__':
    unittest.main()
