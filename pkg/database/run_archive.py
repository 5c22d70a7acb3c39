"""
Run archive - sqlite store of optimizer reports, one row per maximize_vn run.
"""

import json
import logging
import os
import sqlite3
from typing import Dict, List, Optional

from optimize.vmax import OptimizerReport

logger = logging.getLogger(__name__)


class RunArchive:
    """Persists OptimizerReport summaries and the best configuration found."""

    def __init__(self, db_path: Optional[str] = None):
        self.db_path = db_path or os.getenv('MAXENT_ARCHIVE_PATH') or 'maxent_runs.db'
        logger.info(f"Initializing run archive at {self.db_path}")
        self._create_tables()

    def _create_tables(self):
        conn = sqlite3.connect(self.db_path)
        cursor = conn.cursor()

        cursor.execute("""
            CREATE TABLE IF NOT EXISTS optimizer_runs (
                id INTEGER PRIMARY KEY AUTOINCREMENT,
                n INTEGER NOT NULL,
                restarts INTEGER NOT NULL,
                converged_restarts INTEGER NOT NULL,
                seed INTEGER NOT NULL,
                tol REAL NOT NULL,
                best_value REAL NOT NULL,
                lambda_n REAL NOT NULL,
                ratio REAL NOT NULL,
                criticality_residual REAL,
                certified_value TEXT,
                config_json TEXT NOT NULL,
                created_at TIMESTAMP DEFAULT CURRENT_TIMESTAMP
            )
        """)
        cursor.execute("CREATE INDEX IF NOT EXISTS idx_optimizer_runs_n ON optimizer_runs (n)")

        conn.commit()
        conn.close()

    def save_report(self, report: OptimizerReport) -> Optional[int]:
        """
        Store one report.

        Returns:
            Row id, or None when the insert failed.
        """
        conn = sqlite3.connect(self.db_path)
        cursor = conn.cursor()

        try:
            residual = report.criticality_residual
            cursor.execute("""
                INSERT INTO optimizer_runs
                (n, restarts, converged_restarts, seed, tol, best_value, lambda_n, ratio,
                 criticality_residual, certified_value, config_json)
                VALUES (?, ?, ?, ?, ?, ?, ?, ?, ?, ?, ?)
            """, (
                report.n, report.restarts, report.converged_restarts, report.seed, report.tol,
                report.best_value, report.lambda_n, report.ratio,
                residual if residual == residual and residual != float("inf") else None,
                report.certified_value,
                json.dumps(report.best_config.to_pairs()),
            ))
            conn.commit()
            row_id = cursor.lastrowid
            logger.info(f"Archived n={report.n} run as #{row_id} (ratio {report.ratio:.12f})")
            return row_id

        except Exception as e:
            logger.error(f"Error archiving optimizer report: {e}")
            conn.rollback()
            return None
        finally:
            conn.close()

    def _rows_to_dicts(self, rows) -> List[Dict]:
        out = []
        for row in rows:
            out.append({
                'id': row[0],
                'n': row[1],
                'restarts': row[2],
                'converged_restarts': row[3],
                'seed': row[4],
                'tol': row[5],
                'best_value': row[6],
                'lambda_n': row[7],
                'ratio': row[8],
                'criticality_residual': row[9],
                'certified_value': row[10],
                'best_config': json.loads(row[11]),
                'created_at': row[12],
            })
        return out

    def get_reports(self, n: Optional[int] = None) -> List[Dict]:
        """All archived runs, oldest first, optionally for one n."""
        conn = sqlite3.connect(self.db_path)
        cursor = conn.cursor()

        try:
            query = "SELECT * FROM optimizer_runs"
            params = ()
            if n is not None:
                query += " WHERE n = ?"
                params = (n,)
            cursor.execute(query + " ORDER BY id", params)
            return self._rows_to_dicts(cursor.fetchall())

        except Exception as e:
            logger.error(f"Error reading optimizer runs: {e}")
            return []
        finally:
            conn.close()

    def best_for_n(self, n: int) -> Optional[Dict]:
        """Highest best_value ever archived for n."""
        conn = sqlite3.connect(self.db_path)
        cursor = conn.cursor()

        try:
            cursor.execute("""
                SELECT * FROM optimizer_runs
                WHERE n = ?
                ORDER BY best_value DESC, id ASC
                LIMIT 1
            """, (n,))
            rows = self._rows_to_dicts(cursor.fetchall())
            return rows[0] if rows else None

        except Exception as e:
            logger.error(f"Error reading best run for n={n}: {e}")
            return None
        finally:
            conn.close()

    def get_stats(self) -> Dict:
        """Run counts per n."""
        conn = sqlite3.connect(self.db_path)
        cursor = conn.cursor()

        try:
            cursor.execute("SELECT n, COUNT(*), MAX(ratio) FROM optimizer_runs GROUP BY n ORDER BY n")
            return {row[0]: {'runs': row[1], 'best_ratio': row[2]} for row in cursor.fetchall()}

        except Exception as e:
            logger.error(f"Error getting archive stats: {e}")
            return {}
        finally:
            conn.close()
