"""JSON model files for classical-quantum sources.

Schema::

    {
      "name": "optional label",
      "alphabet": ["x0", "x1", "x2"],
      "prior": ["1/2", "1/4", 0.25],
      "states": [ [[[re, im], ...], ...], ... ],
      "metadata": {"free": "form"}
    }

Prior entries are numbers or rational strings "a/b" (decimal strings also
parse); rational strings are kept exactly for type-class arithmetic.  Each
state is a d x d matrix whose entries are [re, im] pairs.  "alphabet" and
"metadata" are optional and only checked for shape.  Files are UTF-8.
"""
from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

import numpy as np

from .errors import ValidationError
from .sources import CqSource


def _parse_prior(raw):
    if not isinstance(raw, list) or not raw:
        raise ValidationError("'prior' must be a non-empty list")
    floats = []
    fracs = []
    exact = True
    for i, entry in enumerate(raw):
        if isinstance(entry, str):
            try:
                q = Fraction(entry)
            except (ValueError, ZeroDivisionError) as err:
                raise ValidationError(f"prior[{i}]: cannot parse {entry!r} as a rational") from err
            if q < 0:
                raise ValidationError(f"prior[{i}]: negative probability {entry!r}")
            floats.append(float(q))
            fracs.append(q)
        elif isinstance(entry, (int, float)) and not isinstance(entry, bool):
            floats.append(float(entry))
            exact = False
        else:
            raise ValidationError(f"prior[{i}]: expected a number or rational string, got {entry!r}")
    return floats, tuple(fracs) if exact else None


def _parse_matrix(raw, x: int) -> np.ndarray:
    if not isinstance(raw, list) or not raw:
        raise ValidationError(f"states[{x}]: expected a matrix as a list of rows")
    d = len(raw)
    out = np.zeros((d, d), np.complex128)
    for i, row in enumerate(raw):
        if not isinstance(row, list) or len(row) != d:
            raise ValidationError(f"states[{x}][{i}]: expected {d} entries, got {row!r}")
        for j, cell in enumerate(row):
            if (
                not isinstance(cell, list)
                or len(cell) != 2
                or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in cell)
            ):
                raise ValidationError(f"states[{x}][{i}][{j}]: expected an [re, im] pair, got {cell!r}")
            out[i, j] = complex(cell[0], cell[1])
    return out


def parse_model(doc: dict) -> CqSource:
    if not isinstance(doc, dict):
        raise ValidationError("model document must be a JSON object")
    if "prior" not in doc or "states" not in doc:
        raise ValidationError("model document needs 'prior' and 'states'")
    floats, fracs = _parse_prior(doc["prior"])
    labels = doc.get("alphabet")
    if labels is not None and (not isinstance(labels, list) or len(labels) != len(doc["prior"])):
        raise ValidationError(f"'alphabet' must list one label per prior entry ({len(doc['prior'])})")
    meta = doc.get("metadata")
    if meta is not None and not isinstance(meta, dict):
        raise ValidationError("'metadata' must be a JSON object")
    raw_states = doc["states"]
    if not isinstance(raw_states, list) or len(raw_states) != len(floats):
        raise ValidationError(
            f"'states' must list one matrix per prior entry ({len(floats)}), got "
            f"{len(raw_states) if isinstance(raw_states, list) else type(raw_states).__name__}"
        )
    mats = [_parse_matrix(m, x) for x, m in enumerate(raw_states)]
    return CqSource(floats, mats, prior_fractions=fracs)


def load_model(path) -> CqSource:
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except FileNotFoundError as err:
        raise ValidationError(f"model file not found: {p}") from err
    except OSError as err:
        raise ValidationError(f"cannot read model file {p}: {err}") from err
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as err:
        raise ValidationError(f"model file {p} is not valid JSON: {err}") from err
    return parse_model(doc)
