"""Grids on [0, x_max] and distance distribution functions (DDFs).

A DDF is a non-decreasing map from the reals into [0, 1] that vanishes on
x <= 0.  Two realizations exist:

* :class:`ClosedForm` wraps an exact vectorized formula, evaluated for
  x > 0 only and clamped into [0, 1].
* :class:`Sampled` stores values at grid knots.  Evaluation is
  left-continuous: the value at the greatest knot strictly below x, 0
  when there is none, and ``tail`` beyond ``x_max``.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from .report import FormulaError, InputError

DEFAULT_XMAX = 10.0
DEFAULT_N = 256
MIN_N = 8
RANGE_SLACK = 1e-9


@dataclass(frozen=True, eq=False)
class Grid:
    knots: np.ndarray

    def __post_init__(self) -> None:
        k = np.array(self.knots, dtype=float)
        if k.ndim != 1 or k.size < MIN_N + 1:
            raise InputError(f"grid needs at least {MIN_N + 1} knots")
        if not np.all(np.isfinite(k)):
            raise InputError("grid knots must be finite")
        if k[0] != 0.0:
            raise InputError("first knot must be exactly 0")
        if not np.all(np.diff(k) > 0):
            raise InputError("grid knots must be strictly increasing")
        k.setflags(write=False)
        object.__setattr__(self, "knots", k)

    @property
    def x_max(self) -> float:
        return float(self.knots[-1])

    @property
    def n(self) -> int:
        """Number of intervals (one less than the number of knots)."""
        return self.knots.size - 1

    @property
    def spacing(self) -> float:
        return float(np.max(np.diff(self.knots)))

    @property
    def positive(self) -> np.ndarray:
        return self.knots[1:]

    @property
    def midpoints(self) -> np.ndarray:
        return 0.5 * (self.knots[1:] + self.knots[:-1])

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Grid) and np.array_equal(self.knots, other.knots)

    def __hash__(self) -> int:
        return hash(self.knots.tobytes())

    def __repr__(self) -> str:
        return f"Grid(x_max={self.x_max:g}, n={self.n})"


def make_grid(x_max: float = DEFAULT_XMAX, n: int = DEFAULT_N) -> Grid:
    """Uniform grid with ``n`` intervals on [0, x_max]."""
    if not (isinstance(x_max, (int, float)) and math.isfinite(x_max) and x_max > 0):
        raise InputError(f"x_max must be positive and finite, got {x_max!r}")
    if int(n) != n or n < MIN_N:
        raise InputError(f"n must be an integer >= {MIN_N}, got {n!r}")
    return Grid(np.linspace(0.0, float(x_max), int(n) + 1))


def _as_array(x):
    arr = np.asarray(x, dtype=float)
    return arr, arr.ndim == 0


class DDF:
    """Base class; subclasses implement :meth:`_eval` on float arrays."""

    label: str = ""

    def __call__(self, x):
        return evaluate(self, x)

    def _eval(self, x: np.ndarray) -> np.ndarray:  # pragma: no cover - abstract
        raise NotImplementedError

    @property
    def is_closed(self) -> bool:
        return isinstance(self, ClosedForm)


@dataclass(frozen=True, eq=False)
class ClosedForm(DDF):
    """Exact DDF given by ``fn`` on positive arguments.

    ``fn`` receives a float array of strictly positive values and must be
    non-decreasing.  Results are clamped into [0, 1]; a departure of more
    than 1e-9 or a NaN raises :class:`FormulaError`.
    """

    fn: Callable[[np.ndarray], np.ndarray]
    label: str = ""

    def _eval(self, x: np.ndarray) -> np.ndarray:
        out = np.zeros_like(x, dtype=float)
        pos = x > 0
        if np.any(pos):
            with np.errstate(all="ignore"):
                vals = np.asarray(self.fn(x[pos]), dtype=float)
            vals = np.broadcast_to(vals, x[pos].shape)
            if np.any(np.isnan(vals)):
                raise FormulaError(f"{self.label or 'DDF'}: NaN in evaluation")
            if np.any(vals < -RANGE_SLACK) or np.any(vals > 1 + RANGE_SLACK):
                raise FormulaError(f"{self.label or 'DDF'}: value outside [0, 1]")
            out[pos] = np.clip(vals, 0.0, 1.0)
        return out


@dataclass(frozen=True, eq=False)
class Sampled(DDF):
    grid: Grid
    values: np.ndarray
    tail: float | None = None
    label: str = ""
    notes: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        v = np.array(self.values, dtype=float)
        if v.shape != self.grid.knots.shape:
            raise InputError("sampled values must match the grid knots")
        if np.any(np.isnan(v)) or np.any(v < 0) or np.any(v > 1):
            raise InputError("sampled values must lie in [0, 1]")
        if np.any(np.diff(v) < 0):
            raise InputError("sampled values must be non-decreasing")
        if v[0] != 0.0:
            raise InputError("sampled value at knot 0 must be 0")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)
        tail = float(v[-1]) if self.tail is None else float(self.tail)
        if not v[-1] <= tail <= 1:
            raise InputError("tail must lie between the last value and 1")
        object.__setattr__(self, "tail", tail)

    def _eval(self, x: np.ndarray) -> np.ndarray:
        knots = self.grid.knots
        idx = np.searchsorted(knots, x, side="left") - 1
        out = np.where(idx >= 0, self.values[np.clip(idx, 0, None)], 0.0)
        out = np.where(x > knots[-1], self.tail, out)
        return np.where(x > 0, out, 0.0)


def evaluate(F: DDF, x):
    """Evaluate a DDF at a scalar or array; always 0 for x <= 0."""
    arr, scalar = _as_array(x)
    out = F._eval(arr)
    return float(out) if scalar else out


def closed(fn: Callable[[np.ndarray], np.ndarray], label: str = "") -> ClosedForm:
    return ClosedForm(fn, label)


def dirac(a: float) -> ClosedForm:
    """The step DDF equal to 1 strictly above ``a`` and 0 elsewhere."""
    if not (math.isfinite(a) and a >= 0):
        raise InputError(f"dirac location must be finite and >= 0, got {a!r}")
    a = float(a)
    return ClosedForm(lambda x: (x > a).astype(float), f"dirac({a:g})")


def bottom() -> ClosedForm:
    """The identically-zero function (an improper DDF used as an empty sup)."""
    return ClosedForm(lambda x: np.zeros_like(x), "bottom")


def exponential(rate: float) -> ClosedForm:
    if not rate > 0:
        raise InputError("rate must be positive")
    return ClosedForm(lambda x: -np.expm1(-rate * x), f"exp({rate:g})")


def knot_values(F: DDF, g: Grid) -> np.ndarray:
    """Values of ``F`` at the knots of ``g``.

    Sampled DDFs on the same grid return their stored values; everything
    else is evaluated.
    """
    if isinstance(F, Sampled) and F.grid == g:
        return F.values
    return evaluate(F, g.knots)


def _monotone(values: np.ndarray) -> np.ndarray:
    v = np.clip(np.nan_to_num(np.asarray(values, dtype=float), nan=0.0), 0.0, 1.0)
    return np.maximum.accumulate(v)


def sample(f: DDF, g: Grid, label: str | None = None) -> Sampled:
    """Sample ``f`` at the knots of ``g``, repaired by a running maximum."""
    if isinstance(f, Sampled) and f.grid == g:
        return f
    if isinstance(f, ClosedForm):
        arr = g.knots
        raw = np.zeros_like(arr)
        pos = arr > 0
        with np.errstate(all="ignore"):
            raw[pos] = np.asarray(f.fn(arr[pos]), dtype=float)
    else:
        raw = evaluate(f, g.knots)
    return Sampled(g, _monotone(raw), label=f.label if label is None else label)


def sample_function(fn: Callable[[np.ndarray], np.ndarray], g: Grid, label: str = "") -> Sampled:
    """Sample an arbitrary (possibly non-monotone) formula into a valid DDF."""
    return sample(ClosedForm(fn, label), g)


def ddf_leq(F: DDF, G: DDF, g: Grid, tol: float = 1e-12) -> bool:
    """Pointwise F <= G at every knot and every midpoint of ``g``."""
    pts = np.concatenate([g.knots, g.midpoints])
    return bool(np.all(evaluate(F, pts) <= evaluate(G, pts) + tol))


def ddf_extrema(family: Sequence[DDF], g: Grid, mode: str = "sup") -> Sampled:
    if not family:
        raise InputError("extrema of an empty family")
    if mode not in ("sup", "inf"):
        raise InputError(f"mode must be 'sup' or 'inf', got {mode!r}")
    stack = np.vstack([knot_values(F, g) for F in family])
    vals = stack.max(axis=0) if mode == "sup" else stack.min(axis=0)
    return Sampled(g, _monotone(vals), label=f"{mode}({len(family)})")


def to_csv(F: DDF, g: Grid, path: str | Path | None = None) -> str:
    """Two-column ``x,value`` CSV with one row per knot."""
    vals = knot_values(F, g)
    lines = ["x,value"] + [f"{x:.17g},{v:.17g}" for x, v in zip(g.knots, vals)]
    text = "\n".join(lines) + "\n"
    if path is not None:
        Path(path).write_text(text)
    return text


def read_csv(path: str | Path) -> Sampled:
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    xs = [float(r["x"]) for r in rows]
    vs = [float(r["value"]) for r in rows]
    return Sampled(Grid(np.array(xs)), np.array(vs), label=Path(path).stem)

