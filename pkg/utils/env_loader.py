import logging
import os

from dotenv import load_dotenv

from utils.constants import (
    DEFAULT_LU_RESTARTS,
    DEFAULT_N7_RESTARTS,
    DEFAULT_RESTARTS,
    DEFAULT_SEED,
    DEFAULT_TOL,
)

logger = logging.getLogger(__name__)


class EnvLoader:
    def __init__(self, dotenv_path=None):
        # The project root is two levels up from the current file (utils/env_loader.py)
        project_root = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
        dotenv_path = dotenv_path or os.path.join(project_root, '.env')

        self.loaded_path = None
        if os.path.exists(dotenv_path):
            load_dotenv(dotenv_path=dotenv_path, override=True)
            self.loaded_path = dotenv_path
            logger.debug(f"Loaded environment variables from: {os.path.basename(dotenv_path)}")
        else:
            logger.debug("No .env file found, relying on process environment")

    @staticmethod
    def _read(name, default, cast):
        raw = os.getenv(name)
        if raw is None or raw.strip() == '':
            return default
        try:
            return cast(raw.strip())
        except ValueError:
            raise ValueError(f"Invalid value for {name}: {raw!r}")

    def get_config(self):
        """
        Load run defaults from environment variables with validation
        """
        config = {
            "seed": self._read('MAXENT_SEED', DEFAULT_SEED, int),
            "restarts": self._read('MAXENT_RESTARTS', DEFAULT_RESTARTS, int),
            "tol": self._read('MAXENT_TOL', DEFAULT_TOL, float),
            "threads": self._read('MAXENT_THREADS', os.cpu_count() or 1, int),
            "log_level": self._read('MAXENT_LOG_LEVEL', 'INFO', str).upper(),
            "archive_path": self._read('MAXENT_ARCHIVE_PATH', None, str),
            "n7_restarts": self._read('MAXENT_N7_RESTARTS', DEFAULT_N7_RESTARTS, int),
            "lu_restarts": self._read('MAXENT_LU_RESTARTS', DEFAULT_LU_RESTARTS, int),
        }

        if config["restarts"] < 1 or config["n7_restarts"] < 1 or config["lu_restarts"] < 1:
            raise ValueError("Restart counts must be at least 1")
        if config["threads"] < 1:
            raise ValueError("MAXENT_THREADS must be at least 1")
        if config["tol"] <= 0:
            raise ValueError("MAXENT_TOL must be positive")
        if config["log_level"] not in logging._nameToLevel:
            raise ValueError(f"Unknown log level: {config['log_level']}")

        return config
