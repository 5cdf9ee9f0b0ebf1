"""JSON forms of families and results, and the shipped JSON schemas."""

from __future__ import annotations

import json
from importlib import resources
from typing import Any

import jsonschema

from .errors import InvalidInputError
from .setfam import SetFamily


class DataError(InvalidInputError):
    """Malformed input file; the message locates the offending line or field."""


def family_to_json(family: SetFamily) -> dict:
    out: dict[str, Any] = {"ground_size": family.ground_size, "members": family.as_sets()}
    if family.labels is not None:
        out["labels"] = list(family.labels)
    return out


def family_from_json(data: Any, where: str = "family") -> SetFamily:
    """Members are lists of 1-based ground elements; labels are optional names."""
    if not isinstance(data, dict):
        raise DataError(f"{where}: expected an object with ground_size and members")
    extra = set(data) - {"ground_size", "members", "labels"}
    if extra:
        raise DataError(f"{where}: unknown field(s) {sorted(extra)}")
    n = data.get("ground_size")
    if not isinstance(n, int) or isinstance(n, bool):
        raise DataError(f"{where}.ground_size: expected an integer, got {n!r}")
    members = data.get("members")
    if not isinstance(members, list):
        raise DataError(f"{where}.members: expected a list of element lists")
    for i, m in enumerate(members):
        if not isinstance(m, list):
            raise DataError(f"{where}.members[{i}]: expected a list, got {m!r}")
        for j, e in enumerate(m):
            if not isinstance(e, int) or isinstance(e, bool) or not 1 <= e <= n:
                raise DataError(f"{where}.members[{i}][{j}]: element {e!r} not in [1, {n}]")
        if len(set(m)) != len(m):
            raise DataError(f"{where}.members[{i}]: repeated element")
    labels = data.get("labels")
    if labels is not None and (not isinstance(labels, list) or len(labels) != n):
        raise DataError(f"{where}.labels: expected a list of {n} names")
    try:
        return SetFamily.from_sets(n, members, labels)
    except InvalidInputError as exc:
        raise DataError(f"{where}: {exc}") from None


def load_json_text(text: str, source: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise DataError(f"{source}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None


def load_family(path: str) -> SetFamily:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise DataError(f"{path}: {exc.strerror}") from None
    return family_from_json(load_json_text(text, path), where=path)


def dumps(obj: Any) -> str:
    """Canonical JSON: sorted keys, fixed separators, trailing newline."""
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def schema(name: str) -> dict:
    """Load a shipped schema by stem, e.g. ``schema("fk_result")``."""
    text = resources.files("lcmsunflower.schemas").joinpath(f"{name}.schema.json").read_text()
    return json.loads(text)


def validate(obj: Any, name: str) -> None:
    """Raise jsonschema.ValidationError when obj does not match the named schema."""
    jsonschema.validate(obj, schema(name))
