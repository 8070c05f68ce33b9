"""Reading models, value functions and samples; writing JSON and CSV.

File formats:

* discrete model: JSON ``{"support": [...], "prob": [...]}``
* closed-form model: JSON ``{"family": "gaussian", "params": {"mu": 0, "sigma": 1}}``,
  or inline as ``gaussian`` / ``exponential:rate=2``
* grid model: CSV with header ``x,density``
* value function table: CSV with header ``x,v``
* sample: JSON ``{"counts": [...]}``

JSON floats are written with Python's shortest round-trip repr, so reading a
report back reproduces every number bit for bit.
"""

from __future__ import annotations

import csv
import io
import json
import math
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import InvalidModel, InvalidValueFunction
from .measures import DiscreteModel, GridModel, Model, ValueFunction, closed_form
from .mle import Sample


def _read_columns(path: Path, names: tuple[str, str]) -> tuple[list[float], list[float]]:
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        fields = [f.strip() for f in (reader.fieldnames or [])]
        if list(fields[:2]) != list(names):
            raise InvalidModel(f"{path}: expected header {','.join(names)}, got {','.join(fields)}")
        reader.fieldnames = fields
        xs, ys = [], []
        for lineno, row in enumerate(reader, start=2):
            try:
                xs.append(float(row[names[0]]))
                ys.append(float(row[names[1]]))
            except (TypeError, ValueError):
                raise InvalidModel(f"{path}:{lineno}: non-numeric value") from None
    return xs, ys


def model_from_dict(data: dict) -> Model:
    if "support" in data:
        return DiscreteModel.from_dict(data)
    if "family" in data:
        return closed_form(data["family"], **data.get("params", {}))
    raise InvalidModel("model JSON needs either 'support'/'prob' or 'family'/'params'")


def parse_inline_family(spec: str) -> Model:
    """``gaussian``, ``gaussian:mu=1,sigma=2``, ``exponential:rate=0.5``."""
    family, _, rest = spec.partition(":")
    params = {}
    for item in filter(None, rest.split(",")):
        key, sep, value = item.partition("=")
        if not sep:
            raise InvalidModel(f"bad parameter {item!r} in {spec!r}; expected key=value")
        try:
            params[key.strip()] = float(value)
        except ValueError:
            raise InvalidModel(f"parameter {key!r} in {spec!r} is not a number") from None
    return closed_form(family.strip(), **params)


def load_model(spec: str | Path) -> Model:
    """Load a model from a JSON/CSV file, or parse an inline family tag."""
    path = Path(spec)
    if path.is_file():
        if path.suffix.lower() == ".csv":
            nodes, dens = _read_columns(path, ("x", "density"))
            return GridModel(np.array(nodes), np.array(dens))
        try:
            data = json.loads(path.read_text())
        except json.JSONDecodeError as exc:
            raise InvalidModel(f"{path}: {exc}") from None
        return model_from_dict(data)
    text = str(spec)
    if "/" in text or text.endswith((".json", ".csv")):
        raise FileNotFoundError(f"model file not found: {text}")
    return parse_inline_family(text)


def parse_value_spec(spec: str) -> ValueFunction:
    """``identity``, ``log`` or ``table:<path to x,v CSV>``."""
    if spec == "identity":
        return ValueFunction.identity()
    if spec == "log":
        return ValueFunction.log()
    if spec.startswith("table:"):
        xs, vs = _read_columns(Path(spec[len("table:"):]), ("x", "v"))
        return ValueFunction.table(xs, vs)
    raise InvalidValueFunction(f"unknown v-spec {spec!r}; use identity, log or table:<path>")


def load_sample(path: str | Path) -> Sample:
    try:
        data = json.loads(Path(path).read_text())
        return Sample.from_dict(data)
    except (json.JSONDecodeError, KeyError, TypeError) as exc:
        raise InvalidModel(f"{path}: not a sample file ({exc})") from None


def _plain(obj):
    if isinstance(obj, dict):
        return {k: _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist())
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    return obj


def dumps_json(obj) -> str:
    """JSON text with round-trip float repr; inf and nan use JSON5 spellings."""
    return json.dumps(_plain(obj), indent=2)


def format_number(x, precision: int) -> str:
    if isinstance(x, bool) or x is None:
        return "" if x is None else str(x)
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        x = float(x)
        if not math.isfinite(x):
            return repr(x)
        return f"{x:.{precision}f}"
    return str(x)


def to_csv(rows: Iterable[dict], columns: Sequence[str], precision: int) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([format_number(row.get(c), precision) for c in columns])
    return buf.getvalue()
