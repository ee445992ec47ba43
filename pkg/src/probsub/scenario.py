"""Build module objects from scenario JSON fragments.

A scenario is a plain dict; every builder raises :class:`InputError` on a
missing or unknown name so the CLI can map it to exit code 2.
"""

from __future__ import annotations

import json
import math
import re
from pathlib import Path
from typing import Any

import numpy as np

from . import agg, grid as gridmod, padd, psub, sets
from .report import InputError

INF = math.inf


def load(path: str | Path) -> dict[str, Any]:
    try:
        data = json.loads(Path(path).read_text())
    except OSError as exc:
        raise InputError(f"cannot read scenario: {exc}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"malformed scenario JSON: {exc}") from None
    if not isinstance(data, dict):
        raise InputError("scenario must be a JSON object")
    return data


def number(v: Any, name: str = "value") -> float:
    """Float from JSON, accepting "inf", "+inf", "-inf"."""
    if isinstance(v, str):
        s = v.strip().lower().lstrip("+")
        if s in ("inf", "infinity"):
            return INF
        if s in ("-inf", "-infinity"):
            return -INF
    try:
        out = float(v)
    except (TypeError, ValueError):
        raise InputError(f"{name}: expected a number, got {v!r}") from None
    if math.isnan(out):
        raise InputError(f"{name}: NaN not allowed")
    return out


def _need(d: dict, key: str) -> Any:
    if key not in d:
        raise InputError(f"missing key {key!r}")
    return d[key]


def universe(sc: dict) -> sets.Universe:
    u = sc.get("universe", 4)
    if isinstance(u, int):
        return sets.Universe.of_size(u)
    if isinstance(u, list):
        return sets.Universe(tuple(u))
    raise InputError("universe must be a size or a list of labels")


def ring(sc: dict, u: sets.Universe) -> sets.Ring:
    r = sc.get("ring", "powerset")
    if r == "powerset":
        return sets.powerset(u)
    if isinstance(r, dict) and "generators" in r:
        return sets.generate_ring(u, [u.mask(g) for g in r["generators"]])
    raise InputError("ring must be 'powerset' or {'generators': [...]}")


def eta(spec: Any, r: sets.Ring) -> sets.NumericalSubmeasure:
    if spec is None or spec == "cardinality":
        return sets.cardinality(r)
    if isinstance(spec, dict) and spec.get("kind") == "cardinality":
        return sets.cardinality(r, number(spec.get("scale", 1.0), "scale"))
    if isinstance(spec, dict) and spec.get("kind") == "weighted":
        tf = {"sqrt": math.sqrt, None: None}.get(spec.get("transform"), "bad")
        if tf == "bad":
            raise InputError(f"unknown transform {spec.get('transform')!r}")
        return sets.weighted(r, [number(w, "weight") for w in _need(spec, "weights")], tf)
    if isinstance(spec, dict):
        return sets.from_table(r, {k: number(v, f"eta[{k}]") for k, v in spec.items()})
    raise InputError("eta must be 'cardinality' or a table")


def pseudo_addition(spec: Any) -> padd.PseudoAddition:
    if spec is None:
        return padd.k_alpha(1.0)
    if isinstance(spec, str):
        m = re.fullmatch(r"[kK]_?(inf|\d+(?:\.\d+)?)", spec.strip())
        if m:
            return padd.k_inf() if m.group(1) == "inf" else padd.k_alpha(float(m.group(1)))
        if spec == "max":
            return padd.k_inf()
        raise InputError(f"unknown pseudo-addition {spec!r}")
    if isinstance(spec, dict):
        spec = dict(spec)
        if "alpha" in spec:
            spec["alpha"] = number(spec["alpha"], "alpha")
            if spec["alpha"] == INF:
                return padd.k_inf()
        return padd.make_padd(spec)
    raise InputError("L must be a string or an object")


def generator(spec: Any) -> agg.AdditiveGenerator:
    if isinstance(spec, str):
        return agg.generator(spec)
    if isinstance(spec, dict):
        lam = spec.get("lambda")
        return agg.generator(str(_need(spec, "name")), None if lam is None else number(lam, "lambda"))
    raise InputError("generator must be a name or {'name', 'lambda'}")


def automorphism(spec: Any) -> agg.Automorphism:
    if isinstance(spec, str):
        return agg.automorphism(spec)
    if isinstance(spec, dict):
        p = spec.get("p")
        return agg.automorphism(str(_need(spec, "name")), None if p is None else number(p, "p"))
    raise InputError("h must be a name or {'name', 'p'}")


def aggregator(spec: Any) -> agg.Aggregator:
    if spec is None:
        return agg.M
    if isinstance(spec, str):
        if spec in ("geometric", "G"):
            return agg.geometric_mean()
        return agg.make_tnorm(spec)
    if not isinstance(spec, dict):
        raise InputError("A must be a string or an object")
    if "family" in spec:
        return agg.make_family(str(spec["family"]).lower(), number(_need(spec, "lambda"), "lambda"))
    if "pmean" in spec:
        return agg.pmean(number(spec["pmean"], "pmean"))
    kind = spec.get("kind")
    if kind == "tnorm":
        return agg.make_tnorm(str(_need(spec, "name")))
    if kind in ("copula", "generated"):
        return agg.from_additive_generator(generator(_need(spec, "generator")),
                                           "copula" if kind == "copula" else "tnorm")
    if kind == "gh":
        return agg.gumbel_hougaard(number(_need(spec, "lambda"), "lambda"))
    if kind == "nonstrict":
        return agg.nonstrict_copula(number(_need(spec, "lambda"), "lambda"))
    if kind == "geometric":
        return agg.geometric_mean()
    if kind == "psi":
        return agg.psi(automorphism(_need(spec, "h")), aggregator(_need(spec, "A")))
    if kind in ("join", "meet"):
        return agg.agg_extrema(aggregator(_need(spec, "left")), aggregator(_need(spec, "right")), kind)
    raise InputError(f"unknown aggregator spec {spec!r}")


def make_grid(sc: dict, x_max: float | None = None, n: int | None = None) -> gridmod.Grid:
    g = sc.get("grid", {}) or {}
    xm = x_max if x_max is not None else number(g.get("x_max", gridmod.DEFAULT_XMAX), "x_max")
    nn = n if n is not None else g.get("n", gridmod.DEFAULT_N)
    return gridmod.make_grid(xm, nn)


def ddf(spec: Any) -> gridmod.DDF:
    if not isinstance(spec, dict):
        raise InputError("DDF spec must be an object")
    kind = spec.get("kind")
    if kind == "dirac":
        return gridmod.dirac(number(_need(spec, "a"), "a"))
    if kind == "exponential":
        return gridmod.exponential(number(_need(spec, "rate"), "rate"))
    if kind == "uniform":
        b = number(_need(spec, "b"), "b")
        if not b > 0:
            raise InputError("uniform needs b > 0")
        return gridmod.ClosedForm(lambda x: np.minimum(x / b, 1.0), f"uniform(0,{b:g})")
    if kind == "weibull":
        lam, k = number(spec.get("lambda", 1), "lambda"), number(spec.get("k", 1), "k")
        if not (lam > 0 and k > 0):
            raise InputError("weibull needs positive parameters")
        return gridmod.ClosedForm(lambda x: -np.expm1(-((x / lam) ** k)), f"weibull({lam:g},{k:g})")
    if kind == "ratio":
        c = number(spec.get("c", 1), "c")
        return gridmod.ClosedForm(lambda x: x / (x + c), f"x/(x+{c:g})")
    raise InputError(f"unknown DDF kind {kind!r}")


def gamma(spec: Any, sc: dict, r: sets.Ring, e: sets.NumericalSubmeasure,
          g: gridmod.Grid | None = None) -> psub.ProbSubmeasure:
    if not isinstance(spec, dict):
        raise InputError("gamma must be an object with a 'constructor'")
    c = _need(spec, "constructor")
    if "eta" in spec:
        e = eta(spec["eta"], r)
    if c == "universal":
        return psub.universal(e, strict=bool(spec.get("strict", True)))
    if c == "weibull":
        return psub.weibull(e, number(spec.get("lambda", 1), "lambda"), number(spec.get("k", 1), "k"))
    if c == "table1":
        return psub.table1(str(_need(spec, "family")).lower(), number(_need(spec, "lambda"), "lambda"), e)
    if c == "copula_gen":
        h = automorphism(spec["h"]) if "h" in spec else None
        return psub.copula_gen_submeasure(generator(_need(spec, "generator")), e, h)
    if c == "pmean":
        p = spec.get("p", 1)
        return psub.pmean_submeasure(p if p == "geometric" else number(p, "p"), e)
    if c in ("ratio", "halfstep", "affine"):
        return getattr(psub, c)(e)
    if c == "exponential":
        rates = {r.universe.parse_key(k): number(v, "rate") for k, v in _need(spec, "rates").items()}
        return psub.exponential(r, rates)
    if c == "two_point_exponential":
        return psub.two_point_exponential(*(number(_need(spec, k), k) for k in ("a", "b", "c")))
    if c == "level_family":
        levels = [(number(_need(lv, "alpha"), "alpha"), eta(_need(lv, "eta"), r))
                  for lv in _need(spec, "levels")]
        return psub.level_family(levels, r)
    if c == "combine_qam":
        parts = [gamma(p, sc, r, e, g) for p in _need(spec, "parts")]
        weights = [number(w, "weight") for w in _need(spec, "weights")]
        return psub.combine_qam(generator(_need(spec, "generator")), weights, parts, g)
    if c == "jordan":
        base_ring = ring({"ring": spec.get("ring", sc.get("ring", "powerset"))}, r.universe)
        base = gamma(_need(spec, "base"), sc, base_ring, eta(sc.get("eta"), base_ring), g)
        return psub.jordan_extension(base)
    if c == "postcompose":
        return psub.postcompose(automorphism(_need(spec, "h")), gamma(_need(spec, "base"), sc, r, e, g))
    raise InputError(f"unknown gamma constructor {c!r}")


def build_gamma(sc: dict, g: gridmod.Grid | None = None) -> psub.ProbSubmeasure:
    """The scenario's submeasure, with its universe, ring and eta."""
    spec = _need(sc, "gamma")
    if isinstance(spec, dict) and spec.get("constructor") == "two_point_exponential":
        r = sets.powerset(sets.Universe(("w1", "w2")))
        return gamma(spec, sc, r, sets.cardinality(r), g)
    u = universe(sc)
    r = ring(sc, u)
    return gamma(spec, sc, r, eta(sc.get("eta"), r), g)
