"""Logging with one file per day and execution time tracking.

The log directory comes from ``HARTREE_LAB_LOG_DIR`` (default ``logs``) and the
level from ``HARTREE_LAB_LOG_LEVEL`` (default ``INFO``).
"""
import logging
import os
import time
from datetime import datetime
from functools import wraps

LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'


def _log_dir() -> str:
    return os.environ.get('HARTREE_LAB_LOG_DIR', 'logs')


def _log_level() -> int:
    return logging.getLevelName(os.environ.get('HARTREE_LAB_LOG_LEVEL', 'INFO').upper())


class DailyFileHandler(logging.FileHandler):
    """File handler that reopens on ``<dir>/YYYY-MM-DD.log`` when the date rolls over."""

    def __init__(self, directory: str):
        self.directory = directory
        super().__init__(self._current_path(), encoding='utf-8', delay=True)
        self.setFormatter(logging.Formatter(LOG_FORMAT))

    def _current_path(self) -> str:
        return os.path.abspath(os.path.join(self.directory, f"{datetime.now():%Y-%m-%d}.log"))

    def emit(self, record):
        path = self._current_path()
        if path != self.baseFilename:
            if self.stream:
                self.stream.close()
                self.stream = None
            self.baseFilename = path
        super().emit(record)


def setup_logger(name):
    """Logger writing to the console and to the daily log file; handlers are attached once."""
    directory = _log_dir()
    os.makedirs(directory, exist_ok=True)

    logger = logging.getLogger(name)
    level = _log_level()
    logger.setLevel(level if isinstance(level, int) else logging.INFO)

    if not logger.handlers:
        console = logging.StreamHandler()
        console.setFormatter(logging.Formatter(LOG_FORMAT))
        logger.addHandler(DailyFileHandler(directory))
        logger.addHandler(console)
    return logger


def log_execution_time(logger):
    """Decorator logging start, duration and failure of the wrapped call."""
    def decorator(func):
        @wraps(func)
        def wrapper(*args, **kwargs):
            start = time.perf_counter()
            logger.info(f"Starting {func.__name__}")
            try:
                result = func(*args, **kwargs)
            except Exception as e:
                logger.error(f"{func.__name__} failed after {time.perf_counter() - start:.2f} s: {e}")
                raise
            logger.info(f"{func.__name__} finished in {time.perf_counter() - start:.2f} s")
            return result

        return wrapper
    return decorator
