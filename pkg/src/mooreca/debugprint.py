from __future__ import annotations

import logging
import sys
from typing import Any
from typing import TextIO

logger = logging.getLogger("mooreca")
logger.addHandler(logging.NullHandler())

DISABLED = True


def enable(stream: TextIO | None = None) -> None:
    """Route debug output to ``stream`` (stderr by default)."""
    global DISABLED
    DISABLED = False
    handler = logging.StreamHandler(stream or sys.stderr)
    handler.setFormatter(logging.Formatter("%(name)s: %(message)s"))
    logger.addHandler(handler)
    logger.setLevel(logging.DEBUG)


def debug(*args: Any) -> None:
    if not DISABLED:
        logger.debug(" ".join(str(a) for a in args))
