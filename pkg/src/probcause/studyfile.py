"""Study files: JSON documents holding one or two 2x2 tables.

Schema (version 1)::

    {
      "version": 1,                         # mandatory
      "label": "drug trial",                # optional
      "notes": "...",                       # optional
      "assumptions": ["monotonicity"],      # optional, declared assumptions
      "experimental": {                     # optional block
        "mode": "counts",                   # or "probabilities"
        "x":       {"y": 16, "y_prime": 984},
        "x_prime": {"y": 14, "y_prime": 986}
      },
      "observational": { ... same shape ... },
      "truth": {"pns": "1/50", ...}         # optional, written by `simulate`
    }

At least one of ``experimental`` / ``observational`` is required. In counts
mode every cell is a nonnegative integer. In probabilities mode cells are
numbers or strings such as ``"0.25"`` or ``"1/4"``; observational cells must
sum to 1, and each experimental treatment row must sum to 1 (both within
1e-9, then renormalized exactly).
"""
from __future__ import annotations

import io
import json
import os
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Union

from .errors import ParseError, ValidationError
from .model import (
    NORMALIZATION_TOL,
    AssumptionSet,
    CausalEffects,
    JointDistribution,
    effects_from_counts,
    joint_from_counts,
)

FORMAT_VERSION = 1
TREATMENTS = ("x", "x_prime")
OUTCOMES = ("y", "y_prime")
MODES = ("counts", "probabilities")
_TOP_KEYS = {"version", "label", "notes", "assumptions", "experimental", "observational", "truth"}


@dataclass(frozen=True)
class StudyBlock:
    """One 2x2 table; ``cells`` ordered (x y, x y', x' y, x' y')."""

    mode: str
    cells: tuple

    @property
    def is_counts(self) -> bool:
        return self.mode == "counts"


@dataclass(frozen=True)
class StudyFile:
    experimental: Optional[StudyBlock] = None
    observational: Optional[StudyBlock] = None
    assumptions: Optional[AssumptionSet] = None
    label: str = ""
    notes: str = ""
    version: int = FORMAT_VERSION
    truth: dict = field(default_factory=dict)

    def joint(self) -> Optional[JointDistribution]:
        block = self.observational
        if block is None:
            return None
        if block.is_counts:
            return joint_from_counts(*block.cells)
        return JointDistribution(*block.cells)

    def effects(self) -> Optional[CausalEffects]:
        block = self.experimental
        if block is None:
            return None
        if block.is_counts:
            return effects_from_counts(*block.cells)
        return CausalEffects(block.cells[0], block.cells[2])

    def to_dict(self) -> dict:
        doc = {"version": self.version}
        if self.label:
            doc["label"] = self.label
        if self.notes:
            doc["notes"] = self.notes
        if self.assumptions is not None:
            doc["assumptions"] = list(self.assumptions.names)
        for name in ("experimental", "observational"):
            block = getattr(self, name)
            if block is not None:
                doc[name] = _block_to_dict(block)
        if self.truth:
            doc["truth"] = dict(self.truth)
        return doc


def _cell_out(value):
    if isinstance(value, int):
        return value
    return f"{value.numerator}/{value.denominator}"


def _block_to_dict(block: StudyBlock) -> dict:
    c = block.cells
    return {
        "mode": block.mode,
        "x": {"y": _cell_out(c[0]), "y_prime": _cell_out(c[1])},
        "x_prime": {"y": _cell_out(c[2]), "y_prime": _cell_out(c[3])},
    }


def dumps_study(study: StudyFile) -> str:
    return json.dumps(study.to_dict(), indent=2, sort_keys=True) + "\n"


def _probability(value, where: str) -> Fraction:
    if isinstance(value, bool):
        raise ValidationError("expected a probability, got a boolean", where)
    if isinstance(value, (int, Fraction)):
        p = Fraction(value)
    elif isinstance(value, float):
        p = Fraction(repr(value))
    elif isinstance(value, str):
        try:
            p = Fraction(value.strip())
        except (ValueError, ZeroDivisionError):
            raise ValidationError(f"cannot read {value!r} as a probability", where) from None
    else:
        raise ValidationError(f"expected a probability, got {type(value).__name__}", where)
    if not 0 <= p <= 1:
        raise ValidationError(f"probability {value} is outside [0, 1]", where)
    return p


def _parse_block(raw, name: str) -> StudyBlock:
    if not isinstance(raw, dict):
        raise ParseError("block must be an object", name)
    mode = raw.get("mode")
    if mode not in MODES:
        raise ValidationError(f"mode must be one of {MODES}, got {mode!r}", f"{name}.mode")
    extra = set(raw) - {"mode", *TREATMENTS}
    if extra:
        raise ParseError(f"unknown keys {sorted(extra)}", name)
    cells = []
    for t in TREATMENTS:
        row = raw.get(t)
        if not isinstance(row, dict):
            raise ParseError("missing or malformed treatment row", f"{name}.{t}")
        extra = set(row) - set(OUTCOMES)
        if extra:
            raise ParseError(f"unknown keys {sorted(extra)}", f"{name}.{t}")
        for o in OUTCOMES:
            where = f"{name}.{t}.{o}"
            if o not in row:
                raise ParseError("missing cell", where)
            value = row[o]
            if mode == "counts":
                if isinstance(value, bool) or not isinstance(value, int):
                    raise ValidationError(f"count must be an integer, got {value!r}", where)
                if value < 0:
                    raise ValidationError(f"count {value} is negative", where)
                cells.append(value)
            else:
                cells.append(_probability(value, where))

    if mode == "counts":
        if name == "observational" and sum(cells) == 0:
            raise ValidationError("all counts are zero", name)
        if name == "experimental":
            for t, pair in zip(TREATMENTS, (cells[:2], cells[2:])):
                if sum(pair) == 0:
                    raise ValidationError("treatment group is empty", f"{name}.{t}")
        return StudyBlock(mode, tuple(cells))

    if name == "observational":
        total = sum(cells)
        if abs(total - 1) > NORMALIZATION_TOL:
            raise ValidationError(f"cells sum to {float(total)}, not 1", name)
        cells = [c / total for c in cells]
    else:
        for t, k in zip(TREATMENTS, (0, 2)):
            total = cells[k] + cells[k + 1]
            if abs(total - 1) > NORMALIZATION_TOL:
                raise ValidationError(f"row sums to {float(total)}, not 1", f"{name}.{t}")
            cells[k], cells[k + 1] = cells[k] / total, cells[k + 1] / total
    return StudyBlock(mode, tuple(cells))


def parse_study(doc) -> StudyFile:
    if not isinstance(doc, dict):
        raise ParseError("study must be a JSON object", "$")
    extra = set(doc) - _TOP_KEYS
    if extra:
        raise ParseError(f"unknown keys {sorted(extra)}", "$")
    if "version" not in doc:
        raise ParseError("missing mandatory field", "version")
    if doc["version"] != FORMAT_VERSION:
        raise ValidationError(f"unsupported version {doc['version']!r}", "version")
    blocks = {}
    for name in ("experimental", "observational"):
        if doc.get(name) is not None:
            blocks[name] = _parse_block(doc[name], name)
    if not blocks:
        raise ValidationError("need an experimental or observational block", "$")
    assumptions = None
    if "assumptions" in doc:
        raw = doc["assumptions"]
        if not isinstance(raw, list) or not all(isinstance(a, str) for a in raw):
            raise ParseError("assumptions must be a list of strings", "assumptions")
        try:
            assumptions = AssumptionSet.from_names(raw)
        except ValueError as exc:
            raise ValidationError(str(exc), "assumptions") from None
    for key in ("label", "notes"):
        if key in doc and not isinstance(doc[key], str):
            raise ParseError("must be a string", key)
    truth = doc.get("truth", {})
    if not isinstance(truth, dict):
        raise ParseError("must be an object", "truth")
    return StudyFile(
        blocks.get("experimental"),
        blocks.get("observational"),
        assumptions,
        doc.get("label", ""),
        doc.get("notes", ""),
        FORMAT_VERSION,
        truth,
    )


def parse_dataset(source: Union[str, os.PathLike, io.TextIOBase]) -> StudyFile:
    """Read and validate a study file from a path or an open text stream."""
    if hasattr(source, "read"):
        text = source.read()
        origin = getattr(source, "name", "<stream>")
    else:
        origin = os.fspath(source)
        try:
            with open(origin, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise ParseError(f"cannot read: {exc.strerror}", origin) from None
    try:
        doc = json.loads(text, parse_float=Fraction)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg} (line {exc.lineno}, column {exc.colno})", origin) from None
    return parse_study(doc)
