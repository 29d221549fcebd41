"""Logging setup: rich handler on stderr, level from TVSENSE_LOG."""

import logging
from typing import Optional

from rich.console import Console
from rich.logging import RichHandler

from .config import LOG_LEVEL


def setup_logging(level: Optional[str] = None) -> None:
    """Install a RichHandler on the root logger.

    Args:
        level: Log level name; defaults to the TVSENSE_LOG environment value.
    """
    name = (level or LOG_LEVEL).upper()
    numeric = getattr(logging, name, None)
    if not isinstance(numeric, int):
        numeric = logging.WARNING

    logging.basicConfig(
        level=numeric,
        format="%(message)s",
        datefmt="[%X]",
        handlers=[RichHandler(console=Console(stderr=True), show_path=False)],
        force=True,
    )
