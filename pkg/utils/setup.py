import logging
import sys

from colorama import init as colorama_init

from utils.env_loader import EnvLoader

_configured = False


def setup_logging(level="INFO"):
    """Configure the root logger once; records go to stderr so stdout stays JSON."""
    global _configured
    if _configured:
        logging.getLogger().setLevel(level)
        return
    logging.basicConfig(
        level=level,
        stream=sys.stderr,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    _configured = True


def setup():
    # Load configuration from environment
    env_loader = EnvLoader()
    config = env_loader.get_config()
    colorama_init()
    setup_logging(config["log_level"])
    logging.getLogger(__name__).debug(f"Run defaults: {config}")
    return config
