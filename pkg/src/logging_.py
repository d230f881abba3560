__all__ = ["logger", "log_duration"]

import contextlib
import inspect
import logging.config
import os
import time
from pathlib import Path
from typing import Generator

import yaml


class RelativePathFilter(logging.Filter):
    def filter(self, record: logging.LogRecord) -> bool:
        record.relativePath = os.path.relpath(record.pathname)
        return True


with open(Path(__file__).parents[1] / "logging.yaml") as f:
    config = yaml.safe_load(f)
    logging.config.dictConfig(config)

logger = logging.getLogger("src")
logger.addFilter(RelativePathFilter())


@contextlib.contextmanager
def log_duration(name: str, level: int = logging.INFO) -> Generator[None, None, None]:
    # Record is attributed to the caller, so the log line links to the timed block
    caller = inspect.stack(0)[2]
    start_time = time.perf_counter()
    yield
    duration = time.perf_counter() - start_time
    record = logging.LogRecord(
        name="src.log_duration",
        level=level,
        pathname=caller.filename,
        lineno=caller.lineno,
        msg=f"`{name}` took {int(duration * 1000)} ms",
        args=(),
        exc_info=None,
        func=caller.function,
    )
    record.relativePath = os.path.relpath(record.pathname)
    if logger.isEnabledFor(level):
        logger.handle(record)
