#!/usr/bin/env python3
"""
Tests for the well geometry and unit conventions
"""

import math
import sys
import unittest
from pathlib import Path

# Add parent directory to path for imports
sys.path.insert(0, str(Path(__file__).parent.parent))

from src.core.model import (
    WellConfig, WellVariant, area_family, delta_config, finite_config,
    potential, unit_area_symmetric, wavenumbers, well_wavenumber
)
from src.utils.exceptions import DomainError, VariantError


class TestConstruction(unittest.TestCase):

    def test_unit_area_family(self):
        for a in (0.0025, 0.03, 0.4, 1.0, 2.5, 10.0):
            cfg = unit_area_symmetric(a)
            self.assertEqual(cfg.a, cfg.b)
            self.assertAlmostEqual(cfg.area, 1.0, delta=1e-15)

    def test_area_family_scales_depth(self):
        cfg = area_family(3.0, 1.5)
        self.assertAlmostEqual(cfg.v0, 1.0)
        self.assertTrue(cfg.is_symmetric)

    def test_invalid_geometry(self):
        with self.assertRaises(DomainError):
            unit_area_symmetric(0.0)
        with self.assertRaises(DomainError):
            area_family(-1.0, 1.0)
        with self.assertRaises(DomainError):
            finite_config(1.0, 1.0, 0.0)
        with self.assertRaises(DomainError):
            finite_config(-0.5, 1.0, 1.0)
        with self.assertRaises(DomainError):
            finite_config(0.0, 0.0, 1.0)
        with self.assertRaises(DomainError):
            delta_config(0.0)

    def test_delta_variant(self):
        cfg = delta_config(1.0)
        self.assertIs(cfg.variant, WellVariant.DELTA)
        self.assertTrue(cfg.is_delta)
        self.assertEqual(cfg.matching_point, 0.0)
        self.assertEqual(cfg.left_edge, 0.0)
        self.assertEqual(cfg.area, 1.0)
        self.assertFalse(cfg.is_symmetric)

    def test_configs_are_immutable(self):
        cfg = finite_config(1.0, 2.0, 0.5)
        with self.assertRaises(Exception):
            cfg.a = 3.0
        self.assertEqual(cfg, WellConfig(1.0, 2.0, 0.5))
        self.assertIn("a=1", cfg.describe())


class TestPotential(unittest.TestCase):

    def setUp(self):
        self.cfg = finite_config(1.0, 2.0, 0.5)

    def test_regions(self):
        self.assertEqual(potential(self.cfg, -3.0), 9.0)
        self.assertEqual(potential(self.cfg, -1.0), -0.5)
        self.assertEqual(potential(self.cfg, 0.0), -0.5)
        self.assertEqual(potential(self.cfg, 2.0), -0.5)
        self.assertEqual(potential(self.cfg, 2.5), 0.0)

    def test_left_edge_limit(self):
        self.assertAlmostEqual(potential(self.cfg, -1.0 - 1e-9), 1.0, delta=1e-8)

    def test_delta_has_no_potential(self):
        with self.assertRaises(VariantError):
            potential(delta_config(1.0), 0.5)


class TestWavenumbers(unittest.TestCase):

    def test_values(self):
        k, q = wavenumbers(unit_area_symmetric(2.5), 1.0)
        self.assertEqual(k, 1.0)
        self.assertAlmostEqual(q, math.sqrt(1.2))

    def test_scattering_energy_required(self):
        with self.assertRaises(DomainError):
            wavenumbers(unit_area_symmetric(1.0), 0.0)
        with self.assertRaises(VariantError):
            wavenumbers(delta_config(1.0), 1.0)

    def test_well_wavenumber_below_threshold(self):
        cfg = unit_area_symmetric(1.0)
        self.assertAlmostEqual(well_wavenumber(cfg, -0.25), 0.5)
        with self.assertRaises(DomainError):
            well_wavenumber(cfg, -0.6)


if __name__ == '__main__':
    unittest.main()
