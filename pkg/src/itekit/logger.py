"""Logging setup.

All modules log through children of the ``itekit`` logger. Nothing is printed
by library code; the CLI installs a single stderr handler via ``configure``.
"""

from __future__ import annotations

import logging
import sys

ROOT = "itekit"
FORMAT = "[%(asctime)s] [%(levelname)s] [%(name)s] %(message)s"
DATEFMT = "%H:%M:%S"


def get_logger(name: str) -> logging.Logger:
    """Logger for a module, e.g. ``get_logger(__name__)``.

    Args:
        name (str): dotted module name; prefixed with ``itekit`` if needed"""

    if name != ROOT and not name.startswith(ROOT + "."):
        name = f"{ROOT}.{name}"
    return logging.getLogger(name)


def configure(verbosity: int = 0) -> logging.Logger:
    """Install the stderr handler.

    Args:
        verbosity (int): -1 quiet (warnings only), 0 info, 1 debug"""

    level = {-1: logging.WARNING, 0: logging.INFO}.get(verbosity, logging.DEBUG)
    root = logging.getLogger(ROOT)
    for handler in list(root.handlers):
        root.removeHandler(handler)

    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter(FORMAT, DATEFMT))
    root.addHandler(handler)
    root.setLevel(level)
    root.propagate = False
    return root


logging.getLogger(ROOT).addHandler(logging.NullHandler())
