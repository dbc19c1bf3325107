from __future__ import annotations

import logging
import sys

from .config import get_settings


def configure_logging() -> None:
    settings = get_settings()
    if settings.log_level:
        log_level = logging.getLevelName(settings.log_level)
    else:
        log_level = logging.INFO if settings.environment != "production" else logging.WARNING

    # stdout carries command output
    logging.basicConfig(
        level=log_level,
        format="%(asctime)s %(levelname)s [%(name)s] %(message)s",
        handlers=[logging.StreamHandler(sys.stderr)],
    )


__all__ = ["configure_logging"]
