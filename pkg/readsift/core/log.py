"""
Logging setup for readsift.

Library modules only ever call ``logging.getLogger(__name__)``; the CLI calls
``configure_logging`` once to route records through rich on stderr.
"""

import logging

from rich.console import Console
from rich.logging import RichHandler

_LEVELS = {0: logging.WARNING, 1: logging.INFO}


def configure_logging(verbosity: int = 0, console: Console | None = None) -> None:
    """
    Install a rich handler on the ``readsift`` logger.

    Args:
        verbosity: 0 = warnings only, 1 = info, 2+ = debug
        console: Console to log to (defaults to a stderr console)
    """
    level = _LEVELS.get(verbosity, logging.DEBUG)
    handler = RichHandler(
        console=console or Console(stderr=True),
        show_time=False,
        show_path=verbosity >= 2,
        markup=False,
    )
    handler.setFormatter(logging.Formatter("%(message)s"))

    root = logging.getLogger("readsift")
    root.handlers.clear()
    root.addHandler(handler)
    root.setLevel(level)
    root.propagate = False
