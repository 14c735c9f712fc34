"""Scenario files: JSON documents with exact decimal number parsing.

A scenario file holds the fields accepted by `validate_scenario`:

    {
      "covariates": ["a", "b"],
      "treatments": ["0", "1"],
      "covariate_distribution": {"a": 0.5, "b": 0.5},
      "experimental_marginals": {"0": 0.49, "1": 0.67},
      "joint": {"0": {"a": 0.98, "b": 0}, "1": {"a": 0.34, "b": 1}}   // optional
    }

Numbers are parsed in decimal at full precision: ``0.49`` becomes the exact
rational 49/100, never the nearest float.  Strings like ``"49/100"`` are also
accepted wherever a number is expected.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

from rulebounds.distributions import Scenario, validate_scenario
from rulebounds.errors import ParseError, ValidationError

_ALLOWED_FIELDS = {
    "covariates",
    "treatments",
    "covariate_distribution",
    "experimental_marginals",
    "joint",
}


def _reject_constant(name: str) -> Fraction:
    raise ParseError(f"non-finite number {name!r} is not a probability")


def _pairs_hook(pairs: list[tuple[str, object]]) -> dict[str, object]:
    seen = set()
    for key, _ in pairs:
        if key in seen:
            raise ParseError(f"duplicate key {key!r}")
        seen.add(key)
    return dict(pairs)


def loads_scenario(text: str, source: str = "<string>") -> Scenario:
    """Parse scenario JSON text; errors carry source and line context."""
    try:
        data = json.loads(
            text,
            parse_float=Fraction,
            parse_constant=_reject_constant,
            object_pairs_hook=_pairs_hook,
        )
    except json.JSONDecodeError as exc:
        raise ParseError(f"{source}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc
    except ParseError as exc:
        raise ParseError(f"{source}: {exc}") from None
    if not isinstance(data, dict):
        raise ParseError(f"{source}: scenario document must be a JSON object")
    unknown = set(data) - _ALLOWED_FIELDS
    if unknown:
        raise ParseError(
            f"{source}: unknown scenario fields {sorted(unknown)!r} "
            f"(allowed: {sorted(_ALLOWED_FIELDS)!r})"
        )
    try:
        return validate_scenario(data)
    except ValidationError as exc:
        raise type(exc)(f"{source}: {exc}") from exc


def parse_scenario(path: str | Path) -> Scenario:
    """Read and validate a scenario file."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read scenario file {path}: {exc}") from exc
    return loads_scenario(text, source=str(path))
