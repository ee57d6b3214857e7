#!/usr/bin/env python3
"""
Validation functions for trimarker command-line arguments.

Each validator takes the raw text of an option and returns the parsed value,
raising ``typer.BadParameter`` with a message naming the offending input.
"""

import re

import typer

from .distributions import parse_spec
from .errors import SpecParseError
from .markers import AUTO, METHOD_NAMES

_SIZE_TRIPLE = re.compile(r"\(\s*(\d+)\s*,\s*(\d+)\s*,\s*(\d+)\s*\)")


def validate_class_order(value: str) -> tuple[str, str, str]:
    """
    Parse three distinct comma-separated class labels, lowest class first.

    Args:
        value: Labels such as "D-,D0,D+"

    Returns:
        tuple: The three stripped labels

    Raises:
        typer.BadParameter: If there are not exactly three distinct labels

    Examples:
        >>> validate_class_order("D-, D0, D+")
        ('D-', 'D0', 'D+')
        >>> validate_class_order("a,b")  # doctest: +IGNORE_EXCEPTION_DETAIL
        Traceback (most recent call last):
        typer.BadParameter: --order needs three distinct labels, got 2
    """
    labels = tuple(label.strip() for label in value.split(",") if label.strip())
    if len(labels) != 3 or len(set(labels)) != 3:
        raise typer.BadParameter(f"--order needs three distinct labels, got {len(set(labels))}")
    return labels


def validate_methods(value: str) -> list[str]:
    """
    Parse a comma-separated list of estimation methods.

    Examples:
        >>> validate_methods("auto,kernel,empirical")
        ['auto', 'kernel', 'empirical']
        >>> validate_methods("Normal, BOXCOX")
        ['normal', 'boxcox']
    """
    names = [name.strip().lower() for name in value.split(",") if name.strip()]
    valid = (AUTO, *METHOD_NAMES)
    unknown = [name for name in names if name not in valid]
    if not names or unknown:
        shown = ", ".join(unknown) or "(none given)"
        raise typer.BadParameter(f"unknown method(s) {shown}; choose from {', '.join(valid)}")
    return names


def validate_probability(value: float, field_name: str) -> float:
    """
    Validate a level strictly between 0 and 1.

    Examples:
        >>> validate_probability(0.95, "level")
        0.95
        >>> validate_probability(1.0, "level")  # doctest: +IGNORE_EXCEPTION_DETAIL
        Traceback (most recent call last):
        typer.BadParameter: level must lie strictly between 0 and 1
    """
    if not 0.0 < value < 1.0:
        raise typer.BadParameter(f"{field_name} must lie strictly between 0 and 1")
    return value


def validate_ovl_value(value: float) -> float:
    """OVL values lie in [0, 1]."""
    if not 0.0 <= value <= 1.0:
        raise typer.BadParameter(f"OVL must lie in [0, 1], got {value}")
    return value


def validate_size_triples(value: str) -> list[tuple[int, int, int]]:
    """
    Parse size triples such as "(20,20,20), (50,50,100)".

    Examples:
        >>> validate_size_triples("(20,20,20),(50, 50, 100)")
        [(20, 20, 20), (50, 50, 100)]
    """
    triples = [tuple(int(n) for n in match) for match in _SIZE_TRIPLE.findall(value)]
    if not triples:
        raise typer.BadParameter("sizes must look like (20,20,20), (50,50,50)")
    for triple in triples:
        if min(triple) < 2:
            raise typer.BadParameter(f"every class size must be at least 2, got {triple}")
    return triples


def validate_distribution(value: str) -> str:
    """Check a distribution in text form, e.g. "gamma(5,2/3)"; returns it unchanged."""
    try:
        parse_spec(value)
    except SpecParseError as e:
        raise typer.BadParameter(str(e))
    return value


if __name__ == "__main__":
    import doctest

    doctest.testmod()
