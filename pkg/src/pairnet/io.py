"""
Instance and report files
=========================

pairnet-instance-v1 JSON, parsed through pydantic models. Loading always
validates; anything malformed surfaces as UsageError.
"""

import hashlib
import json
import sys
from pathlib import Path
from typing import List, Literal, Optional, Tuple, Union

from pydantic import BaseModel, Field, ValidationError, model_validator

from .config import FORMAT_TAG
from .errors import UsageError
from .instance_model import (
    Coloring,
    PairInstance,
    ensure_valid,
    euclidean_space,
    line_space,
    matrix_space,
)
from .reports import coloring_to_dict


class MetricModel(BaseModel):
    kind: Literal["euclidean2d", "line1d", "matrix"]
    points: Optional[List[Union[Tuple[float, float], float]]] = None
    matrix: Optional[List[List[float]]] = None
    pseudometric: bool = False

    @model_validator(mode="after")
    def check_payload(self):
        if self.kind == "matrix":
            if self.matrix is None:
                raise ValueError("matrix metric needs `matrix`")
            size = len(self.matrix)
            if any(len(row) != size for row in self.matrix):
                raise ValueError(f"matrix must be square, every row of length {size}")
        elif self.points is None:
            raise ValueError(f"{self.kind} metric needs `points`")
        elif self.kind == "euclidean2d" and not all(isinstance(p, tuple) for p in self.points):
            raise ValueError("euclidean2d points must be [x, y] pairs")
        elif self.kind == "line1d" and not all(isinstance(p, float) for p in self.points):
            raise ValueError("line1d points must be numbers")
        return self


class InstanceModel(BaseModel):
    format: str = Field(default=FORMAT_TAG, description="Format tag, always pairnet-instance-v1.")
    metric: MetricModel
    pairs: List[Tuple[int, int]]

    @model_validator(mode="after")
    def check_format(self):
        if self.format != FORMAT_TAG:
            raise ValueError(f"unsupported format {self.format!r}")
        return self


class ColoringModel(BaseModel):
    red: List[int]
    blue: List[int]


def instance_to_dict(inst: PairInstance) -> dict:
    metric = {"kind": inst.metric.kind}
    if inst.metric.kind == "matrix":
        metric["matrix"] = inst.metric.matrix.tolist()
    else:
        metric["points"] = inst.metric.points.tolist()
    if inst.metric.pseudometric:
        metric["pseudometric"] = True
    return {"format": FORMAT_TAG, "metric": metric, "pairs": [list(p) for p in inst.pairs]}


def instance_from_dict(payload: dict) -> PairInstance:
    try:
        model = InstanceModel.model_validate(payload)
    except ValidationError as e:
        raise UsageError(f"malformed instance: {e.errors()[0]['msg']}") from e
    metric = model.metric
    if metric.kind == "matrix":
        space = matrix_space(metric.matrix, pseudometric=metric.pseudometric)
    elif metric.kind == "euclidean2d":
        space = euclidean_space(metric.points)
    else:
        space = line_space(metric.points)
    return ensure_valid(PairInstance(space, tuple(model.pairs)))


def _canonical_json(payload) -> str:
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def load_instance(path: Union[str, Path]) -> PairInstance:
    try:
        payload = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as e:
        raise UsageError(f"cannot read instance {path}: {e}") from e
    return instance_from_dict(payload)


def dump_instance(inst: PairInstance, path: Union[str, Path]) -> None:
    Path(path).write_text(_canonical_json(instance_to_dict(inst)))


def instance_digest(inst: PairInstance) -> str:
    """SHA-256 of the compact canonical JSON form."""
    compact = json.dumps(instance_to_dict(inst), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(compact.encode()).hexdigest()


def coloring_from_dict(payload: dict) -> Coloring:
    try:
        model = ColoringModel.model_validate(payload)
    except ValidationError as e:
        raise UsageError(f"malformed coloring: {e.errors()[0]['msg']}") from e
    return Coloring.of(model.red, model.blue)


def write_json(payload, path: Optional[Union[str, Path]] = None) -> None:
    """Write to `path`, or to standard output when no path is given."""
    text = _canonical_json(payload)
    if path is None:
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)
