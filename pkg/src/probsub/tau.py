"""Sup-convolution of DDFs over a pseudo-addition and an aggregator.

``tau_conv`` computes, at each knot x,

    max over u of A(G(u), H(v(u)))   with v(u) the largest v such that L(u, v) <= x

where u ranges over the knots, the knot midpoints, 0 and x itself.  The
result can only undershoot the true supremum (A monotone, finite u set),
so it is a lower envelope that refines as the grid is refined.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .agg import Aggregator
from .grid import DDF, Grid, Sampled, ddf_leq, dirac, evaluate, exponential, ClosedForm
from .padd import PseudoAddition, k_alpha, partner_array
from .report import InputError, Report

VALUE_TOL = 1e-9


@dataclass(frozen=True)
class TriangleSpec:
    L: PseudoAddition
    A: Aggregator

    @property
    def label(self) -> str:
        return f"tau[{self.L.label},{self.A.label}]"


def _candidates(g: Grid) -> np.ndarray:
    return np.unique(np.concatenate([g.knots, g.midpoints]))


def _finish(raw: np.ndarray, g: Grid, label: str) -> Sampled:
    raw = np.clip(raw, 0.0, 1.0)
    raw[0] = 0.0
    fixed = np.maximum.accumulate(raw)
    notes = ("monotonized",) if np.any(fixed - raw > VALUE_TOL) else ()
    return Sampled(g, fixed, label=label, notes=notes)


def tau_conv(spec: TriangleSpec, G: DDF, H: DDF, g: Grid) -> Sampled:
    """Grid sup-convolution tau_{L,A}(G, H) sampled at the knots of ``g``."""
    cand = _candidates(g)
    g_vals = evaluate(G, cand)
    out = np.zeros(g.knots.size)
    for i, x in enumerate(g.knots):
        if x <= 0:
            continue
        us = cand[cand <= x]
        v = partner_array(spec.L, x, us, x_max=g.x_max)
        ok = ~np.isnan(v)
        if not np.any(ok):
            continue
        vals = spec.A(g_vals[: us.size][ok], evaluate(H, v[ok]))
        out[i] = np.max(vals)
    return _finish(out, g, f"{spec.label}({G.label},{H.label})")


def tau_pointwise_max(T: Aggregator, G: DDF, H: DDF, g: Grid) -> Sampled:
    """Knotwise T(G(s), H(s)): the convolution for L = max."""
    vals = T(evaluate(G, g.knots), evaluate(H, g.knots))
    return _finish(np.asarray(vals, dtype=float), g, f"tau[K_inf,{T.label}]({G.label},{H.label})")


def _sup_sum(T: Aggregator, G: DDF, H: DDF, s: np.ndarray, cand: np.ndarray) -> np.ndarray:
    """max over candidate p <= s_i of T(G(p), H(s_i - p)), for each s_i > 0."""
    g_vals = evaluate(G, cand)
    out = np.zeros(s.size)
    for i, si in enumerate(s):
        if si <= 0:
            continue
        k = int(np.searchsorted(cand, si, side="right"))
        out[i] = np.max(T(g_vals[:k], evaluate(H, si - cand[:k])))
    return out


def kalpha_readings(alpha: float, T: Aggregator, G: DDF, H: DDF, g: Grid) -> Report:
    """Compare tau over K_alpha with two readings of the power substitution.

    printed:  tau_T(G, H) evaluated at x**alpha
    rescaled: tau_T(G(p**(1/alpha)), H(q**(1/alpha))) evaluated at x**alpha

    Both use the candidate splits u**alpha of the direct computation, so the
    rescaled reading agrees with it up to rounding.  Nothing is asserted.
    """
    if not alpha > 0:
        raise InputError("alpha must be positive")
    direct = tau_conv(TriangleSpec(k_alpha(alpha), T), G, H, g)
    s = g.knots ** alpha
    cand = _candidates(g) ** alpha
    root = 1.0 / alpha
    G_r = ClosedForm(lambda p: evaluate(G, p ** root), f"{G.label}(p^{root:g})")
    H_r = ClosedForm(lambda q: evaluate(H, q ** root), f"{H.label}(q^{root:g})")
    printed = _finish(_sup_sum(T, G, H, s, cand), g, "printed")
    rescaled = _finish(_sup_sum(T, G_r, H_r, s, cand), g, "rescaled")
    rep = Report("kalpha_readings", params={"alpha": alpha, "T": T.label, "G": G.label,
                                             "H": H.label, "grid_n": g.n, "x_max": g.x_max})
    rep.metrics.update({
        "printed_residual": float(np.max(np.abs(printed.values - direct.values))),
        "rescaled_residual": float(np.max(np.abs(rescaled.values - direct.values))),
        "direct": direct.values, "printed": printed.values, "rescaled": rescaled.values,
    })
    return rep


def catalogue() -> list[DDF]:
    """Fixed family of DDFs used by the sampled triangle-function checks."""
    return [
        dirac(0.5),
        dirac(1.0),
        dirac(2.0),
        exponential(0.5),
        exponential(1.0),
        exponential(2.0),
        ClosedForm(lambda x: -np.expm1(-(x / 2.0) ** 2), "weibull(2,2)"),
        ClosedForm(lambda x: np.minimum(x / 3.0, 1.0), "uniform(0,3)"),
        ClosedForm(lambda x: x / (x + 1.0), "x/(x+1)"),
    ]


def check_triangle_properties(spec: TriangleSpec, g: Grid, trials: int = 10, seed: int = 0) -> Report:
    """Sampled symmetry, monotonicity, identity and associativity residual."""
    if trials < 10:
        raise InputError("trials must be >= 10")
    rep = Report("check_triangle_properties",
                 params={"spec": spec.label, "grid_n": g.n, "x_max": g.x_max,
                         "trials": trials, "seed": seed})
    cat = catalogue()
    rng = np.random.default_rng(seed)
    h = g.spacing

    sym_ok, worst_sym = True, 0.0
    for _ in range(trials):
        i, j = rng.choice(len(cat), 2, replace=False)
        a = tau_conv(spec, cat[i], cat[j], g).values
        b = tau_conv(spec, cat[j], cat[i], g).values
        d = np.abs(a - b)
        k = int(np.argmax(d))
        worst_sym = max(worst_sym, float(d[k]))
        if d[k] > VALUE_TOL and sym_ok:
            sym_ok = False
            rep.witnesses.append({"verdict": "symmetric", "G": cat[i].label, "H": cat[j].label,
                                  "x": g.knots[k], "values": [a[k], b[k]]})
    rep.verdicts["symmetric"] = sym_ok
    rep.metrics["symmetry_residual"] = worst_sym

    mono_ok = True
    ordered = [(p, q) for p in range(len(cat)) for q in range(len(cat))
               if p != q and ddf_leq(cat[p], cat[q], g)]
    picks = rng.choice(len(ordered), min(trials, len(ordered)), replace=False)
    for n in picks:
        p, q = ordered[n]
        r = cat[int(rng.integers(len(cat)))]
        for lo, hi in (
            (tau_conv(spec, cat[p], r, g), tau_conv(spec, cat[q], r, g)),
            (tau_conv(spec, r, cat[p], g), tau_conv(spec, r, cat[q], g)),
        ):
            d = lo.values - hi.values
            k = int(np.argmax(d))
            if d[k] > VALUE_TOL and mono_ok:
                mono_ok = False
                rep.witnesses.append({"verdict": "monotone", "smaller": cat[p].label,
                                      "larger": cat[q].label, "other": r.label,
                                      "x": g.knots[k], "values": [lo.values[k], hi.values[k]]})
    rep.verdicts["monotone"] = mono_ok

    ident_ok = True
    e0 = dirac(0.0)
    for F in cat:
        out = tau_conv(spec, F, e0, g).values
        upper = evaluate(F, g.knots)
        lower = evaluate(F, np.maximum(g.knots - h, 0.0))
        bad = (out > upper + VALUE_TOL) | (out < lower - VALUE_TOL)
        bad[0] = False
        if np.any(bad) and ident_ok:
            ident_ok = False
            k = int(np.argmax(bad))
            rep.witnesses.append({"verdict": "identity", "G": F.label, "x": g.knots[k],
                                  "value": out[k], "bounds": [lower[k], upper[k]]})
    rep.verdicts["identity"] = ident_ok

    worst_assoc = 0.0
    for _ in range(max(1, trials // 5)):
        i, j, k = rng.choice(len(cat), 3, replace=False)
        left = tau_conv(spec, tau_conv(spec, cat[i], cat[j], g), cat[k], g).values
        right = tau_conv(spec, cat[i], tau_conv(spec, cat[j], cat[k], g), g).values
        worst_assoc = max(worst_assoc, float(np.max(np.abs(left - right))))
    rep.metrics["associativity_residual"] = worst_assoc
    return rep


__all__ = [
    "TriangleSpec",
    "tau_conv",
    "tau_pointwise_max",
    "check_triangle_properties",
    "catalogue",
    "kalpha_readings",
]
