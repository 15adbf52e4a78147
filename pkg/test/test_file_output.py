#!/usr/bin/env python3
"""
Tests for result rendering and atomic writes
"""

import io
import json
import shutil
import sys
import tempfile
import unittest
from pathlib import Path

# Add parent directory to path for imports
sys.path.insert(0, str(Path(__file__).parent.parent))

from src.utils.file_output import AtomicFileOperation, format_number, render_csv, write_csv, write_json


class TestRendering(unittest.TestCase):

    def test_numbers_round_trip_exactly(self):
        self.assertEqual(format_number(0.1), "0.10000000000000001")
        self.assertEqual(float(format_number(1.0 / 3.0)), 1.0 / 3.0)
        self.assertEqual(format_number(7), "7")
        self.assertEqual(format_number(True), "True")

    def test_csv_layout(self):
        text = render_csv(["n", "E"], [(0, -0.25)])
        self.assertEqual(text, "n,E\n0,-0.25\n")

    def test_stdout_when_no_path(self):
        stream = io.StringIO()
        write_json({"E_a": 0.5}, stream=stream)
        self.assertEqual(json.loads(stream.getvalue()), {"E_a": 0.5})


class TestAtomicWrite(unittest.TestCase):

    def setUp(self):
        self.test_dir = Path(tempfile.mkdtemp(prefix='semiharmonic_output_'))

    def tearDown(self):
        shutil.rmtree(self.test_dir)

    def test_write_creates_parents(self):
        target = self.test_dir / "nested" / "curve.csv"
        write_csv(["E", "delta"], [(0.5, 1.25)], str(target))
        self.assertEqual(target.read_text(), "E,delta\n0.5,1.25\n")
        self.assertFalse(target.with_suffix(".csv.tmp").exists())

    def test_overwrite_leaves_no_sidecar_files(self):
        target = self.test_dir / "report.json"
        target.write_text("old")
        AtomicFileOperation().atomic_write(str(target), b"new")
        self.assertEqual(target.read_text(), "new")
        self.assertEqual([p.name for p in self.test_dir.iterdir()], ["report.json"])


if __name__ == '__main__':
    unittest.main()
