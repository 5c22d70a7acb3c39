"""
Test suite for the sqlite run archive.
"""

import os
import sqlite3
import tempfile
import unittest
from unittest.mock import patch

import numpy as np

from database.run_archive import RunArchive
from optimize.vmax import OptimizerReport, VnConfig, candidate_config, lambda_n


def _report(n: int, value: float, residual: float = 1e-12, seed: int = 0) -> OptimizerReport:
    return OptimizerReport(
        n=n,
        best_value=value,
        best_config=candidate_config(n) if n >= 3 else VnConfig(np.array([0.5, -0.5])),
        lambda_n=lambda_n(n),
        ratio=value / lambda_n(n),
        restarts=10,
        converged_restarts=8,
        criticality_residual=residual,
        seed=seed,
        tol=1e-12,
        certified_value=f"{value:.20f}",
    )


class TestRunArchive(unittest.TestCase):
    """Test run archive persistence"""

    def setUp(self):
        """Set up test environment"""
        self.temp_db = tempfile.NamedTemporaryFile(delete=False, suffix='.db')
        self.temp_db.close()
        self.archive = RunArchive(self.temp_db.name)

    def tearDown(self):
        """Clean up test environment"""
        os.unlink(self.temp_db.name)

    def test_save_and_read_back(self):
        """Test une sauvegarde puis relecture"""
        row_id = self.archive.save_report(_report(3, 0.25))
        self.assertIsNotNone(row_id)

        rows = self.archive.get_reports()
        self.assertEqual(len(rows), 1)
        self.assertEqual(rows[0]['n'], 3)
        self.assertAlmostEqual(rows[0]['ratio'], 1.0)
        self.assertEqual(len(rows[0]['best_config']), 3)
        self.assertEqual(rows[0]['converged_restarts'], 8)

    def test_infinite_residual_stored_as_null(self):
        self.archive.save_report(_report(4, 3.0 ** -4.5, residual=float("inf")))
        self.assertIsNone(self.archive.get_reports()[0]['criticality_residual'])

    def test_filter_by_n(self):
        self.archive.save_report(_report(3, 0.25))
        self.archive.save_report(_report(4, 3.0 ** -4.5))
        self.archive.save_report(_report(4, 0.019))
        self.assertEqual(len(self.archive.get_reports(4)), 2)
        self.assertEqual(self.archive.get_reports(5), [])

    def test_best_for_n(self):
        """Test le meilleur run pour un n donné"""
        self.archive.save_report(_report(4, 0.019, seed=1))
        self.archive.save_report(_report(4, 3.0 ** -4.5, seed=2))
        best = self.archive.best_for_n(4)
        self.assertEqual(best['seed'], 2)
        self.assertIsNone(self.archive.best_for_n(7))

    def test_stats(self):
        self.archive.save_report(_report(3, 0.25))
        self.archive.save_report(_report(3, 0.24))
        self.archive.save_report(_report(2, 1.0))
        stats = self.archive.get_stats()
        self.assertEqual(stats[3]['runs'], 2)
        self.assertAlmostEqual(stats[3]['best_ratio'], 1.0)
        self.assertEqual(list(stats), [2, 3])

    def test_reopen_keeps_rows(self):
        self.archive.save_report(_report(3, 0.25))
        again = RunArchive(self.temp_db.name)
        self.assertEqual(len(again.get_reports()), 1)

    def test_insert_failure_returns_none(self):
        with patch('database.run_archive.json.dumps', side_effect=TypeError("boom")):
            self.assertIsNone(self.archive.save_report(_report(3, 0.25)))
        self.assertEqual(self.archive.get_reports(), [])

    def test_default_path_from_environment(self):
        with patch.dict(os.environ, {'MAXENT_ARCHIVE_PATH': self.temp_db.name}):
            archive = RunArchive()
        self.assertEqual(archive.db_path, self.temp_db.name)

    def test_blank_environment_path_uses_default(self):
        """Une variable vide ne doit pas ouvrir une base temporaire"""
        with patch.dict(os.environ, {'MAXENT_ARCHIVE_PATH': ''}), \
                patch.object(RunArchive, '_create_tables'):
            archive = RunArchive()
        self.assertEqual(archive.db_path, 'maxent_runs.db')

    def test_index_exists(self):
        conn = sqlite3.connect(self.temp_db.name)
        try:
            names = [row[0] for row in conn.execute("SELECT name FROM sqlite_master WHERE type = 'index'")]
        finally:
            conn.close()
        self.assertIn('idx_optimizer_runs_n', names)


if __name__ == '__main__':
    unittest.main()
