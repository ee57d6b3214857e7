"""
Shared pieces of the trimarker commands.
"""

from contextlib import contextmanager
from pathlib import Path
from typing import Optional

import typer

from ..config import settings
from ..errors import TrimarkerError
from ..models import BootstrapConfig


@contextmanager
def handle_errors():
    """Print a trimarker error and exit with its code (1 usage, 2 data, 3 numerical)."""
    try:
        yield
    except TrimarkerError as exc:
        print(f"❌ {exc}")
        raise typer.Exit(exc.exit_code)


def bootstrap_config(
    resamples: Optional[int] = None,
    level: Optional[float] = None,
    alpha: Optional[float] = None,
    seed: Optional[int] = None,
) -> BootstrapConfig:
    """Bootstrap settings from the flags, falling back to the configured defaults."""
    return BootstrapConfig(
        B=settings.bootstrap_resamples if resamples is None else resamples,
        level=settings.confidence_level if level is None else level,
        alpha=settings.significance_level if alpha is None else alpha,
        seed=settings.seed if seed is None else seed,
    )


def write_output(text: str, out: Optional[Path]) -> None:
    """Write to ``out`` when given, otherwise to stdout."""
    if out is None:
        typer.echo(text)
        return
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(text if text.endswith("\n") else text + "\n", encoding="utf-8")
    print(f"✅ Wrote {out}")
