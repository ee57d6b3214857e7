#!/usr/bin/env python3
"""
Configuration CLI for trimarker.

Reads and edits the ``TRIMARKER_*`` lines of the working directory's ``.env``
file. Every value goes through ``TrimarkerSettings`` before it is written.
"""

import os
from pathlib import Path
from typing import Annotated, Callable, Optional

import typer
from pydantic import ValidationError
from pydantic.fields import FieldInfo

from .. import config as config_module
from ..config import TrimarkerSettings
from ..utils import print_with_underline

app = typer.Typer(
    name="config",
    help="Configuration management commands",
    no_args_is_help=True,
)

ENV_PREFIX = "TRIMARKER_"

CATEGORIES = {
    "🎲 Randomness": ["seed"],
    "📊 Inference": ["bootstrap_resamples", "confidence_level", "significance_level", "normality_threshold"],
    "🔁 Simulation": ["desk_reps", "desk_bootstrap", "full_reps", "full_bootstrap", "workers"],
    "📁 Output": ["results_dir", "log_level"],
}

TYPE_NAMES = {int: "integer", float: "number", Path: "path", str: "text"}


def current_settings() -> TrimarkerSettings:
    return config_module.settings


def get_field_info(field_name: str) -> FieldInfo:
    return TrimarkerSettings.model_fields[field_name]


def default_of(field_name: str):
    return get_field_info(field_name).get_default(call_default_factory=True)


def get_field_type_name(field_name: str) -> str:
    annotation = get_field_info(field_name).annotation
    return TYPE_NAMES.get(annotation, getattr(annotation, "__name__", str(annotation)))


def validate_field_value(field_name: str, value: str):
    """Parse ``value`` as the settings model would; ``typer.BadParameter`` carries its message."""
    try:
        return getattr(TrimarkerSettings(**{field_name: value}), field_name)
    except ValidationError as e:
        messages = [error["msg"] for error in e.errors() if error["loc"] == (field_name,)]
        raise typer.BadParameter(messages[0] if messages else str(e))


def env_key(setting: str) -> str:
    return f"{ENV_PREFIX}{setting.upper()}"


# ============================================================================
# .env editing
# ============================================================================


def _env_file() -> Path:
    return Path.cwd() / ".env"


def _line_key(line: str) -> Optional[str]:
    """Upper-cased key of an assignment line; None for comments and blanks."""
    stripped = line.strip()
    if not stripped or stripped.startswith("#") or "=" not in stripped:
        return None
    return stripped.split("=", 1)[0].strip().removeprefix("export ").strip().upper()


def _quote(value) -> str:
    text = str(value)
    if any(char in text for char in " =\n\r\t\"'"):
        return f'"{text}"'
    return text


def _rewrite_env(edit: Callable[[list[str]], list[str]]) -> None:
    env_file = _env_file()
    lines = env_file.read_text(encoding="utf-8").splitlines() if env_file.exists() else []
    lines = edit(lines)
    if not lines and not env_file.exists():
        return
    env_file.write_text("".join(f"{line}\n" for line in lines), encoding="utf-8")


def update_env_file(setting: str, value) -> None:
    """Write ``TRIMARKER_<SETTING>=value`` into ./.env in place of any earlier line for it."""
    key = env_key(setting)
    entry = f"{key}={_quote(value)}"

    def edit(lines: list[str]) -> list[str]:
        positions = [i for i, line in enumerate(lines) if _line_key(line) == key]
        if not positions:
            return [*lines, entry]
        lines[positions[0]] = entry
        return [line for i, line in enumerate(lines) if i not in positions[1:]]

    _rewrite_env(edit)


def remove_env_keys(keep: Callable[[Optional[str]], bool]) -> int:
    """Drop the .env lines whose key fails ``keep``; returns how many went."""
    removed = 0

    def edit(lines: list[str]) -> list[str]:
        nonlocal removed
        kept = [line for line in lines if keep(_line_key(line))]
        removed = len(lines) - len(kept)
        return kept

    _rewrite_env(edit)
    return removed


def require_setting(setting: str) -> None:
    if setting not in TrimarkerSettings.model_fields:
        print(f"❌ Unknown setting: {setting}")
        print(f"Available settings: {', '.join(TrimarkerSettings.model_fields)}")
        raise typer.Exit(1)


def confirm_or_exit(question: str, cancelled: str, force: bool) -> None:
    if force or typer.confirm(question):
        return
    print(f"❌ {cancelled}")
    raise typer.Exit(1)


# ============================================================================
# Commands
# ============================================================================


@app.command("show")
def show_config():
    """Show current configuration values; * marks values changed from the default."""
    settings = current_settings()
    print_with_underline("📋 Current Configuration")
    for category, fields in CATEGORIES.items():
        print(f"\n{category}:")
        for field_name in fields:
            value = getattr(settings, field_name)
            marker = "" if value == default_of(field_name) else " *"
            print(f"  {field_name}: {value}{marker}")


@app.command("list")
def list_configurable():
    """List every setting with its variable name, type, default and description."""
    settings = current_settings()
    print_with_underline("⚙️  Configurable Settings")
    for category, fields in CATEGORIES.items():
        print(f"\n{category}:")
        for field_name in fields:
            print(f"  {field_name} ({env_key(field_name)}): {getattr(settings, field_name)}")
            print(f"    {get_field_info(field_name).description}")
            print(f"    {get_field_type_name(field_name)}, default {default_of(field_name)}")


@app.command("set")
def set_config(
    setting: Annotated[str, typer.Argument(help="Setting name to change")],
    value: Annotated[str, typer.Argument(help="New value for the setting")],
    force: Annotated[bool, typer.Option("--force", "-f", help="Skip confirmation prompt")] = False,
):
    """Validate a value and store it in ./.env."""
    require_setting(setting)
    try:
        parsed = validate_field_value(setting, value)
    except typer.BadParameter as e:
        print(f"❌ {setting} takes a {get_field_type_name(setting)}: {e}")
        print(f"💡 {get_field_info(setting).description}")
        raise typer.Exit(1)

    print(f"{setting}: {getattr(current_settings(), setting)} → {parsed}")
    confirm_or_exit("Write this to .env?", "Change cancelled", force)
    try:
        update_env_file(setting, parsed)
    except OSError as e:
        print(f"❌ Could not write .env: {e}")
        raise typer.Exit(1)
    print(f"✅ Successfully updated {setting} ({env_key(setting)})")


def consistency_problems(settings: TrimarkerSettings) -> tuple[list[str], list[str]]:
    """(errors, warnings) about combinations the field bounds cannot express."""
    errors, warnings = [], []
    for name in ("reps", "bootstrap"):
        desk, full = getattr(settings, f"desk_{name}"), getattr(settings, f"full_{name}")
        if desk > full:
            warnings.append(f"desk_{name} ({desk}) exceeds full_{name} ({full})")
    cpus = os.cpu_count() or 1
    if settings.workers > cpus:
        warnings.append(f"workers ({settings.workers}) exceeds the {cpus} available CPUs")
    if settings.results_dir.exists() and not settings.results_dir.is_dir():
        errors.append(f"results_dir is not a directory: {settings.results_dir}")
    return errors, warnings


@app.command("validate")
def validate_config():
    """Load the settings from scratch and report problems."""
    print_with_underline("🔍 Validating Configuration")
    try:
        errors, warnings = consistency_problems(TrimarkerSettings())
    except ValidationError as e:
        errors = [f"{'.'.join(map(str, error['loc']))}: {error['msg']}" for error in e.errors()]
        warnings = []

    for heading, items in (("❌ Errors", errors), ("⚠️  Warnings", warnings)):
        if items:
            print(f"{heading}:")
            print("\n".join(f"  • {item}" for item in items))

    if errors:
        print(f"\n❌ {len(errors)} error(s) need attention")
        raise typer.Exit(1)
    print(f"✅ Configuration is valid ({len(warnings)} warning(s))")


@app.command("reset")
def reset_config(
    setting: Annotated[Optional[str], typer.Argument(help="Setting to reset (or all)")] = None,
    force: Annotated[bool, typer.Option("--force", "-f", help="Skip confirmation prompt")] = False,
):
    """Remove setting(s) from ./.env so the defaults apply again."""
    if setting is None:
        print("❌ Please specify a setting name or 'all'")
        print("Use 'trimarker config list' to see available settings")
        raise typer.Exit(1)

    if setting == "all":
        confirm_or_exit(f"Remove every {ENV_PREFIX} line from .env?", "Reset cancelled", force)
        removed = remove_env_keys(lambda key: key is None or not key.startswith(ENV_PREFIX))
    else:
        require_setting(setting)
        key = env_key(setting)
        confirm_or_exit(f"Reset {setting} to {default_of(setting)}?", "Reset cancelled", force)
        removed = remove_env_keys(lambda line_key: line_key != key)
    print(f"✅ Removed {removed} line(s) from .env")


if __name__ == "__main__":
    app()
