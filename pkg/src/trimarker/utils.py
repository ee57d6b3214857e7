import hashlib
import logging
import sys

import numpy as np

LOG_FORMAT = "%(levelname)s %(name)s: %(message)s"


def print_with_underline(text: str, symbol: str = "="):
    """Print text with an underline of specified symbols."""
    print(text)
    print(symbol * len(text))


def configure_logging(level: str = "WARNING") -> None:
    """Send trimarker log records to stderr at the given level."""
    logger = logging.getLogger("trimarker")
    logger.setLevel(level)
    if not any(getattr(handler, "_trimarker", False) for handler in logger.handlers):
        handler = logging.StreamHandler(sys.stderr)
        handler.setFormatter(logging.Formatter(LOG_FORMAT))
        handler._trimarker = True
        logger.addHandler(handler)


def stable_key(text: str) -> int:
    """32-bit integer derived from text, identical across processes and runs."""
    return int.from_bytes(hashlib.sha256(text.encode("utf-8")).digest()[:4], "big")


def substream(seed: int, *key: int) -> np.random.Generator:
    """
    Independent generator for one unit of work.

    The stream depends only on the seed and the key path (e.g. scenario, size
    triple, replication, bootstrap iteration), never on execution order.
    """
    return np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=tuple(int(k) for k in key)))
