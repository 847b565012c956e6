"""JSON schemas for certificates and every JSON document the CLI emits."""

from __future__ import annotations

import json
from functools import lru_cache
from importlib import resources

NAMES = ("certificate", "run_report", "verify", "oracle", "encode", "bench", "bench_manifest")


@lru_cache(maxsize=None)
def load_schema(name: str) -> dict:
    if name not in NAMES:
        raise KeyError(f"unknown schema {name!r}")
    return json.loads(resources.files(__package__).joinpath(f"{name}.json").read_text("utf-8"))


@lru_cache(maxsize=None)
def _registry():
    from referencing import Registry, Resource

    return Registry().with_resources(
        (load_schema(name)["$id"], Resource.from_contents(load_schema(name))) for name in NAMES
    )


def validate(document, name: str) -> None:
    """Raise ``jsonschema.ValidationError`` if ``document`` does not match the named schema."""
    import jsonschema

    validator = jsonschema.Draft202012Validator(load_schema(name), registry=_registry())
    error = jsonschema.exceptions.best_match(validator.iter_errors(document))
    if error is not None:
        raise error
