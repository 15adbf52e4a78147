#!/usr/bin/env python3
"""
Tests for the acceptance suite: check bookkeeping, reporting and a few real checks
"""

import math
import sys
import unittest
from pathlib import Path

# Add parent directory to path for imports
sys.path.insert(0, str(Path(__file__).parent.parent))

from src.monitoring.acceptance import GROUPS, AcceptanceCheck, AcceptanceSuite, _within
from src.utils.exceptions import GridError


class TestBookkeeping(unittest.TestCase):

    def setUp(self):
        self.suite = AcceptanceSuite()

    def test_within(self):
        self.assertTrue(_within("x", "reference", 1.00005, 1.0, 1e-4, "").passed)
        failed = _within("x", "reference", 1.1, 1.0, 1e-4, "")
        self.assertEqual(failed.status, "fail")
        self.assertAlmostEqual(failed.delta, 0.1)

    def test_every_check_has_a_group(self):
        self.assertEqual({group for group, _ in self.suite.checks}, set(GROUPS))

    def test_unknown_group(self):
        with self.assertRaises(ValueError):
            self.suite.run("plots")

    def test_errors_become_error_rows(self):
        def broken():
            raise GridError("budget", max_points=10)

        def fine():
            return [_within("fine", "structure", 0.0, 0.0, 0.0, "always passes")]

        self.suite.checks = [("oracles", broken), ("structure", fine)]
        results = self.suite.run()
        self.assertEqual([r.status for r in results], ["error", "pass"])
        self.assertTrue(math.isnan(results[0].value))
        self.assertEqual([r.name for r in self.suite.run("structure")], ["fine"])

    def test_report_and_table(self):
        results = [
            AcceptanceCheck("a", "reference", 1.0, 1.0, 0.1, 0.0, "pass", "ok"),
            AcceptanceCheck("b", "reference", 2.0, 1.0, 0.1, 1.0, "fail", "off"),
        ]
        report = self.suite.report(results)
        self.assertEqual(report["summary"], {"total": 2, "passed": 1, "failed": 1, "errors": 0})
        self.assertEqual(report["checks"][1]["name"], "b")
        self.assertGreater(report["resources"]["process_memory_mb"], 0.0)
        table = AcceptanceSuite.format_table(results)
        self.assertIn("FAIL", table)
        self.assertTrue(table.endswith("1/2 checks passed"))


class TestChecks(unittest.TestCase):

    def setUp(self):
        self.suite = AcceptanceSuite()

    def test_exact_anchors(self):
        self.assertTrue(all(r.passed for r in self.suite.check_exact_anchors()))

    def test_structure_group(self):
        results = self.suite.run("structure")
        self.assertEqual(len(results), 4)
        self.assertTrue(all(r.passed for r in results), [r.name for r in results if not r.passed])

    def test_bound_states(self):
        results = self.suite.check_bound_states()
        self.assertEqual(len(results), 5)
        self.assertTrue(all(r.passed for r in results), [r.name for r in results if not r.passed])

    def test_delay_sign_on_both_sides(self):
        results = {r.name: r for r in self.suite.check_negative_delay()}
        self.assertEqual(len(results), 15)
        for a in ("2.5", "2", "1.5", "1", "0.5"):
            self.assertTrue(results[f"positive_delay_a{a}"].passed)
            self.assertTrue(results[f"negative_delay_a{a}"].passed)

    def test_oscillation_threshold_is_documented(self):
        oscillation = {r.name: r for r in self.suite.check_half_period_asymptote()}["half_period_oscillation"]
        self.assertTrue(oscillation.passed)
        self.assertEqual(oscillation.expected, 3)
        self.assertIn("rather than the published 5", oscillation.description)


if __name__ == '__main__':
    unittest.main()
