"""JSON experiment configs: schema validation, presets and overrides."""

from __future__ import annotations

import json
from dataclasses import replace
from importlib import resources
from pathlib import Path

import jsonschema
from referencing import Registry, Resource

from .approximation import ExperimentConfig
from .errors import InvalidTriplet, ParseError, ValidationError
from .levy import ThetaClass, classify_theta, triplet_from_dict

_PKG = resources.files("kacstroock")


def _schema(name: str) -> dict:
    return json.loads((_PKG / "schemas" / name).read_text())


def _validator() -> jsonschema.Draft202012Validator:
    triplet = _schema("triplet.schema.json")
    registry = Registry().with_resource("triplet.schema.json", Resource.from_contents(triplet))
    return jsonschema.Draft202012Validator(_schema("config.schema.json"), registry=registry)


def preset_names() -> list:
    return sorted(p.name[:-5] for p in (_PKG / "presets").iterdir() if p.name.endswith(".json"))


def preset_path(name: str):
    p = _PKG / "presets" / f"{name}.json"
    if not p.is_file():
        raise ValidationError("preset", f"unknown preset {name!r}; known: {', '.join(preset_names())}")
    return p


def parse_config_text(text: str, source: str = "<string>") -> dict:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{source}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    if not isinstance(doc, dict):
        raise ParseError(f"{source}: top level must be a JSON object")
    return doc


def _field_of(err: jsonschema.ValidationError) -> str:
    path = ".".join(str(p) for p in err.absolute_path)
    if not path and err.validator == "required":
        # "'x' is a required property"
        return err.message.split("'")[1]
    if not path and err.validator == "additionalProperties":
        return err.message.split("'")[1]
    return path or "<root>"


def config_from_dict(doc: dict) -> ExperimentConfig:
    """Validate a parsed document and build the config.

    Degenerate thetas do not fail here; they are reported in
    ``config.warnings`` so degenerate studies stay scriptable.
    """
    err = jsonschema.exceptions.best_match(_validator().iter_errors(doc))
    if err is not None:
        raise ValidationError(_field_of(err), err.message)
    try:
        triplet = triplet_from_dict(doc["triplet"])
    except InvalidTriplet as exc:
        raise ValidationError("triplet", str(exc)) from None
    kwargs = {k: doc[k] for k in ("T", "n_out", "replicas", "master_seed", "grid_step",
                                  "allow_degenerate", "partition_cells", "name") if k in doc}
    cfg = ExperimentConfig(triplet, tuple(doc["thetas"]), doc["epsilon"], **kwargs)
    return replace(cfg, warnings=tuple(admissibility_warnings(cfg)))


def admissibility_warnings(cfg: ExperimentConfig) -> list:
    out = []
    for j, th in enumerate(cfg.thetas):
        cls = classify_theta(th, cfg.triplet)
        if cls.kind is not ThetaClass.COMPLEX_ADMISSIBLE:
            out.append(f"theta[{j}]={th!r} is {cls}")
    return out


def load_config(path) -> ExperimentConfig:
    path = Path(path)
    try:
        text = path.read_text()
    except FileNotFoundError:
        raise ParseError(f"{path}: no such file") from None
    return config_from_dict(parse_config_text(text, str(path)))


def load_preset(name: str) -> ExperimentConfig:
    p = preset_path(name)
    return config_from_dict(parse_config_text(p.read_text(), f"preset:{name}"))


def apply_overrides(cfg: ExperimentConfig, epsilon=None, thetas=None, replicas=None, seed=None, T=None) -> ExperimentConfig:
    """Inline values win over file values; the result is revalidated."""
    doc = json.loads(json.dumps(cfg.to_dict()))
    for key, val in (("epsilon", epsilon), ("thetas", list(thetas) if thetas else None),
                     ("replicas", replicas), ("master_seed", seed), ("T", T)):
        if val is not None:
            doc[key] = val
    if doc.get("grid_step") is None:
        doc.pop("grid_step", None)
    return config_from_dict(doc)
