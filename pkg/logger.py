import logging
import os
import sys

LOG_LEVEL_ENV = "REEB_LOG_LEVEL"
LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s (%(filename)s:%(lineno)d)'


def get_logger(name):
    """Logger writing to stderr; stdout carries documents between subcommands."""
    logger = logging.getLogger(name)
    if not logger.handlers:
        handler = logging.StreamHandler(sys.stderr)
        handler.setFormatter(logging.Formatter(LOG_FORMAT))
        logger.addHandler(handler)
        logger.propagate = False
    return logger


def set_logging_level(debug):
    """--debug wins; otherwise $REEB_LOG_LEVEL (e.g. from .env), else INFO."""
    if debug:
        level = logging.DEBUG
    else:
        name = os.getenv(LOG_LEVEL_ENV, "INFO").upper()
        level = logging.getLevelName(name)
        if not isinstance(level, int):
            raise ValueError(
                f"Environment variable '{LOG_LEVEL_ENV}' must be a logging "
                f"level name, got {name!r}")
    logging.getLogger().setLevel(level)
    return level
