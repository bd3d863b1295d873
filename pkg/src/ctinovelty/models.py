"""Reading and writing model files for either novelty model."""
from __future__ import annotations

import json
from pathlib import Path
from typing import Union

from .centroid import CentroidModel
from .errors import FormatError
from .ocsvm import OcsvmModel

Model = Union[CentroidModel, OcsvmModel]

__all__ = ["Model", "save_model", "load_model", "dumps_model"]


def dumps_model(model: Model) -> str:
    return json.dumps(model.to_json(), indent=1) + "\n"


def save_model(model: Model, path: str | Path) -> None:
    Path(path).write_text(dumps_model(model), encoding="utf-8")


def load_model(path: str | Path) -> Model:
    try:
        obj = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: invalid JSON ({exc.msg})") from None
    kind = obj.get("kind") if isinstance(obj, dict) else None
    if kind == "centroid":
        return CentroidModel.from_json(obj)
    if kind == "ocsvm":
        model = OcsvmModel.from_json(obj)
        if model.vocab is None:
            raise FormatError(f"{path}: ocsvm model file lacks a vocabulary")
        return model
    raise FormatError(f"{path}: unknown model kind {kind!r}")
