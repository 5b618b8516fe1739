import logging
import sys
from functools import lru_cache
from typing import Optional

import config

LOG_FORMAT = '%(asctime)s [%(levelname)s] %(name)s - %(message)s'


@lru_cache(maxsize=1)
def _file_handler() -> Optional[logging.Handler]:
    """One FileHandler for the whole process, or None when TFL_LOG_FILE is empty."""
    if not config.LOG_FILE:
        return None
    handler = logging.FileHandler(config.LOG_FILE, encoding='utf-8')
    handler.setFormatter(logging.Formatter(LOG_FORMAT))
    return handler


def get_logger(name: str) -> logging.Logger:
    """
    Named logger writing to stderr and to the shared log file. Handlers are
    attached on the first call for a name only; modules call this once at
    import time instead of logging.basicConfig().
    """
    logger = logging.getLogger(name)
    if logger.handlers:
        return logger

    logger.setLevel(getattr(logging, config.LOG_LEVEL.upper(), logging.INFO))

    # stdout stays free for report output
    console = logging.StreamHandler(sys.stderr)
    console.setFormatter(logging.Formatter(LOG_FORMAT))
    logger.addHandler(console)

    shared = _file_handler()
    if shared is not None:
        logger.addHandler(shared)

    logger.propagate = False
    return logger
