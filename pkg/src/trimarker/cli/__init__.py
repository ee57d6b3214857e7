"""
CLI package for trimarker.

``run`` is the console entry point: it maps trimarker errors and command-line
usage errors to the documented exit codes.
"""

import sys

import click

from ..errors import ExitCode, TrimarkerError
from .main import app


def run() -> None:
    try:
        code = app(standalone_mode=False)
    except click.exceptions.UsageError as exc:
        exc.show()
        sys.exit(ExitCode.USAGE)
    except click.exceptions.Abort:
        print("\nOperation cancelled by user.")
        sys.exit(ExitCode.USAGE)
    except TrimarkerError as exc:
        print(f"❌ {exc}")
        sys.exit(exc.exit_code)
    sys.exit(code or ExitCode.SUCCESS)


__all__ = ["app", "run"]
