"""Errors and machine-readable check reports shared by every module."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np

VERSION = "0.1.0"


class InputError(ValueError):
    """Malformed or out-of-range input to a constructor or checker."""


class FormulaError(ValueError):
    """A closed-form evaluator produced NaN or left its range by more than 1e-9."""


def jsonable(obj: Any) -> Any:
    """Convert numpy scalars/arrays and tuples into plain JSON values."""
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        if math.isnan(v):
            return "nan"
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return v
    return obj


@dataclass
class Report:
    """Verdicts of a sampled or exhaustive check.

    A failing verdict always comes with at least one witness; checkers
    enforce that before returning.
    """

    name: str
    verdicts: dict[str, bool] = field(default_factory=dict)
    witnesses: list[dict[str, Any]] = field(default_factory=list)
    params: dict[str, Any] = field(default_factory=dict)
    metrics: dict[str, Any] = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(self.verdicts.values())

    def failed(self) -> list[str]:
        return [k for k, ok in self.verdicts.items() if not ok]

    def witnesses_for(self, verdict: str) -> list[dict[str, Any]]:
        return [w for w in self.witnesses if w.get("verdict") == verdict]

    def to_dict(self) -> dict[str, Any]:
        return jsonable(
            {
                "name": self.name,
                "passed": self.passed,
                "verdicts": self.verdicts,
                "witnesses": self.witnesses,
                "params": self.params,
                "metrics": self.metrics,
                "notes": self.notes,
                "version": VERSION,
            }
        )

    def to_json(self, **kw: Any) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2, **kw)


# Alias used where the report covers the three probabilistic-submeasure axioms.
AxiomReport = Report


@dataclass(frozen=True)
class Verdict:
    """Boolean outcome of a sampled comparison, with a witness when false."""

    ok: bool
    witness: dict[str, Any] | None = None

    def __bool__(self) -> bool:
        return self.ok
