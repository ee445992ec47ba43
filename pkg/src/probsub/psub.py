"""Probabilistic submeasures on a finite ring of sets.

A :class:`ProbSubmeasure` assigns a DDF to every ring member.  The three
axioms checked by :func:`check_axioms` are

* the empty set carries the identity step ``dirac(0)``;
* ``E <= F`` implies ``gamma_E >= gamma_F`` pointwise;
* ``gamma_{E|F}(L(x, y)) >= A(gamma_E(x), gamma_F(y))`` for x, y > 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np
from scipy.stats import qmc

from .agg import AdditiveGenerator, Aggregator, Automorphism, psi, pseudo_inverse, check_family_lambda
from .grid import (
    DDF,
    ClosedForm,
    Grid,
    Sampled,
    bottom,
    dirac,
    evaluate,
    knot_values,
    make_grid,
    sample,
)
from .padd import PseudoAddition
from .report import InputError, Report
from .sets import NumericalSubmeasure, Ring, Universe, check_numerical, powerset, subset

INF = math.inf
CLOSED_TOL = 1e-9
SAMPLED_TOL = 1e-7
OFFGRID = 200
MAX_WITNESSES = 50
EXTRACT_TOL = 1e-10
Z_MAX = 1e3


@dataclass(frozen=True, eq=False)
class ProbSubmeasure:
    """Map from ring members (bitmasks) to DDFs.

    ``flagged`` lists members whose DDF is a convention rather than a
    derived value (e.g. an empty supremum in the Jordan extension).
    """

    ring: Ring
    assignment: Mapping[int, DDF]
    label: str = "gamma"
    notes: tuple[str, ...] = ()
    flagged: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        amap = {int(k): v for k, v in self.assignment.items()}
        for m in self.ring:
            if m not in amap:
                raise InputError(f"{self.label}: no DDF for {self.ring.key(m)!r}")
            if not isinstance(amap[m], DDF):
                raise InputError(f"{self.label}: value for {self.ring.key(m)!r} is not a DDF")
        object.__setattr__(self, "assignment", {m: amap[m] for m in self.ring})

    def __getitem__(self, mask: int) -> DDF:
        try:
            return self.assignment[mask]
        except KeyError:
            raise InputError(f"{self.label}: no DDF for mask {mask}") from None

    def __call__(self, mask: int, x):
        return evaluate(self[mask], x)

    @property
    def all_closed(self) -> bool:
        return all(F.is_closed for F in self.assignment.values())

    def default_tol(self) -> float:
        return CLOSED_TOL if self.all_closed else SAMPLED_TOL


def _per_set(ring: Ring, eta: NumericalSubmeasure, make: Callable[[float], DDF], label: str,
             notes: tuple[str, ...] = ()) -> ProbSubmeasure:
    if eta.ring is not ring and set(ring.members) - set(eta.values):
        raise InputError("eta does not cover the ring")
    return ProbSubmeasure(ring, {m: make(eta[m]) for m in ring}, label, notes)


# -- constructors ---------------------------------------------------------------

def universal(eta: NumericalSubmeasure, strict: bool = True) -> ProbSubmeasure:
    """gamma_E = dirac(eta(E)).

    With ``strict`` an eta failing :func:`check_numerical` raises; otherwise
    the construction is returned with a note, for experiments.
    """
    rep = check_numerical(eta)
    notes: tuple[str, ...] = ()
    if not rep.passed:
        if strict:
            raise InputError(f"{eta.label} is not a numerical submeasure: fails {rep.failed()}")
        notes = (f"eta fails {','.join(rep.failed())}",)
    return _per_set(eta.ring, eta, dirac, f"universal({eta.label})", notes)


def weibull(eta: NumericalSubmeasure, lam: float = 1.0, k: float = 1.0) -> ProbSubmeasure:
    """1 - exp(-(x / (lam eta(E)))^k); eta(E) = 0 gives dirac(0)."""
    if not (lam > 0 and k > 0 and math.isfinite(lam) and math.isfinite(k)):
        raise InputError("weibull needs positive finite lambda and k")

    def make(e: float) -> DDF:
        if e == 0:
            return dirac(0.0)
        return ClosedForm(lambda x: -np.expm1(-((x / (lam * e)) ** k)), f"weibull({lam:g},{k:g};{e:g})")

    return _per_set(eta.ring, eta, make, f"weibull({lam:g},{k:g})")


def _table1_fn(family: str, lam: float) -> Callable[[np.ndarray], np.ndarray] | None:
    """Value as a function of d = max(eta(E) - x, 0); None for the step rows."""
    if family in ("aa", "dombi", "yager") and lam == 0:
        return None
    if family == "hamacher" and lam == INF:
        return None
    if family == "sw" and lam == -1:
        return None
    if family == "aa":
        return lambda d: np.exp(-(d ** (1.0 / lam)))
    if family == "dombi":
        return lambda d: 1.0 / (1.0 + d ** (1.0 / lam))
    if family == "yager":
        return lambda d: np.maximum(1.0 - d ** (1.0 / lam), 0.0)
    if family == "frank":
        if lam == 1:
            return lambda d: np.exp(-d)
        if lam == INF:
            return lambda d: np.maximum(1.0 - d, 0.0)
        return lambda d: np.log1p((lam - 1.0) * np.exp(-d)) / math.log(lam)
    if family == "hamacher":
        if lam == 0:
            return lambda d: 1.0 / (1.0 + d)
        return lambda d: lam / (np.exp(d) + lam - 1.0)
    if family == "sw":
        if lam == 0:
            return lambda d: np.maximum(1.0 - d, 0.0)
        if lam == INF:
            return lambda d: np.exp(-d)
        return lambda d: np.maximum(np.expm1((1.0 - d) * math.log1p(lam)) / lam, 0.0)
    raise InputError(f"unknown family {family!r}")


def table1(family: str, lam: float, eta: NumericalSubmeasure) -> ProbSubmeasure:
    """Per-family submeasure matched to the family's t-norm.

    Each row is the generator pseudo-inverse evaluated at max(eta(E) - x, 0);
    the degenerate rows are the steps dirac(eta(E)).
    """
    family = family.lower()
    check_family_lambda(family, lam)
    lam = float(lam)
    fn = _table1_fn(family, lam)

    def make(e: float) -> DDF:
        if fn is None:
            return dirac(e)
        return ClosedForm(lambda x: fn(np.maximum(e - x, 0.0)), f"{family}({lam:g};{e:g})")

    return _per_set(eta.ring, eta, make, f"table1[{family},{lam:g}]")


def copula_gen_submeasure(phi: AdditiveGenerator, eta: NumericalSubmeasure,
                          h: Automorphism | None = None) -> ProbSubmeasure:
    """gamma_E(x) = (phi o h)^[-1](eta(E) - x) for a convex generator phi."""
    if not isinstance(phi, AdditiveGenerator):
        raise InputError("phi must be an AdditiveGenerator")
    if not phi.convex:
        raise InputError(f"generator {phi.label} is not convex")

    def make(e: float) -> DDF:
        if h is None:
            return ClosedForm(lambda x: pseudo_inverse(phi, e - x), f"{phi.label}({e:g})")
        return ClosedForm(lambda x: h.inverse(pseudo_inverse(phi, e - x)), f"{phi.label}o{h.label}({e:g})")

    label = f"copula_gen[{phi.label}" + (f",{h.label}]" if h else "]")
    return _per_set(eta.ring, eta, make, label)


def pmean_submeasure(p: float | str, eta: NumericalSubmeasure) -> ProbSubmeasure:
    """Submeasure paired with the Hoelder p-mean, or its geometric limit."""
    if p == "geometric":
        def make(e: float) -> DDF:
            return ClosedForm(lambda x: np.sqrt(np.minimum(np.exp(x - e), 1.0)), f"geometric({e:g})")

        return _per_set(eta.ring, eta, make, "pmean[geometric]")
    if isinstance(p, str) or not (p > 0 and math.isfinite(p)):
        raise InputError(f"p must be positive or 'geometric', got {p!r}")
    p = float(p)

    def make(e: float) -> DDF:
        def fn(x):
            inner = np.maximum(1.0 + p * (x - e), 0.0) ** (1.0 / p)
            s = np.clip(inner, 0.0, 1.0)
            return 2.0 ** (-1.0 / p) * (1.0 + s ** p) ** (1.0 / p)

        return ClosedForm(fn, f"pmean({p:g};{e:g})")

    return _per_set(eta.ring, eta, make, f"pmean[{p:g}]")


def ratio(eta: NumericalSubmeasure) -> ProbSubmeasure:
    """gamma_E(x) = x / (x + eta(E))."""
    return _per_set(eta.ring, eta, lambda e: ClosedForm(lambda x: x / (x + e), f"ratio({e:g})"), "ratio")


def halfstep(eta: NumericalSubmeasure) -> ProbSubmeasure:
    """1/2 on (0, eta(E)], 1 beyond."""
    return _per_set(eta.ring, eta,
                    lambda e: ClosedForm(lambda x: np.where(x > e, 1.0, 0.5), f"halfstep({e:g})"),
                    "halfstep")


def affine(eta: NumericalSubmeasure) -> ProbSubmeasure:
    """min((1 + x) / (1 + eta(E)), 1)."""
    return _per_set(eta.ring, eta,
                    lambda e: ClosedForm(lambda x: np.minimum((1.0 + x) / (1.0 + e), 1.0), f"affine({e:g})"),
                    "affine")


def _exp_ddf(rate: float) -> DDF:
    if rate == INF:
        return dirac(0.0)
    return ClosedForm(lambda x: -np.expm1(-rate * x), f"exp({rate:g})")


def exponential(ring: Ring, rates: Mapping[int, float], label: str = "exponential") -> ProbSubmeasure:
    """gamma_E(x) = 1 - exp(-rate_E x); the empty set gets rate +inf."""
    out = {}
    for m in ring:
        r = INF if m == 0 else float(rates.get(m, float("nan")))
        if not r > 0:
            raise InputError(f"rate for {ring.key(m)!r} must be positive")
        out[m] = _exp_ddf(r)
    return ProbSubmeasure(ring, out, label)


def two_point_exponential(a: float, b: float, c: float) -> ProbSubmeasure:
    """Two-point universe with rates a, b on the singletons and c on the whole."""
    if not (a > 0 and b > 0 and c > 0):
        raise InputError("rates must be positive")
    if c > min(a, b):
        raise InputError("need c <= min(a, b)")
    ring = powerset(Universe(("w1", "w2")))
    return exponential(ring, {1: a, 2: b, 3: c}, f"two_point_exponential({a:g},{b:g},{c:g})")


def level_family(levels: Sequence[tuple[float, NumericalSubmeasure]], ring: Ring) -> ProbSubmeasure:
    """gamma_E(x) = max of the levels alpha with eta_alpha(E) <= x, 0 when none."""
    if not levels:
        raise InputError("level_family needs at least one level")
    alphas = [float(a) for a, _ in levels]
    if any(not 0 < a <= 1 for a in alphas) or any(b <= a for a, b in zip(alphas, alphas[1:])):
        raise InputError("levels must be strictly increasing in (0, 1]")
    etas = [e for _, e in levels]
    for m in ring:
        for e in etas:
            if m not in e.values:
                raise InputError(f"level submeasure {e.label} misses {ring.key(m)!r}")
        for lo, hi in zip(etas, etas[1:]):
            if lo[m] > hi[m]:
                raise InputError(f"level family not non-decreasing at {ring.key(m)!r}")

    def make(thresholds: tuple[float, ...]) -> DDF:
        th = np.array(thresholds)
        al = np.array(alphas)

        def fn(x):
            ok = th[None, :] <= np.asarray(x)[..., None]
            return np.max(np.where(ok, al, 0.0), axis=-1)

        return ClosedForm(fn, "levels(" + ",".join(f"{t:g}" for t in thresholds) + ")")

    return ProbSubmeasure(ring, {m: make(tuple(e[m] for e in etas)) for m in ring}, "level_family")


def combine_qam(t: AdditiveGenerator, weights: Sequence[float], gammas: Sequence[ProbSubmeasure],
                g: Grid | None = None) -> ProbSubmeasure:
    """Weighted quasi-arithmetic mean t^(-1)(sum w_i t(gamma_i)) set by set.

    Closed-form inputs give a closed-form result; otherwise the mean is
    sampled on ``g`` and monotonized.  A zero weight times an infinite
    generator value counts as 0.
    """
    if len(weights) != len(gammas) or not gammas:
        raise InputError("need one weight per submeasure")
    w = np.array(weights, dtype=float)
    if np.any(w < 0) or abs(w.sum() - 1.0) > 1e-12:
        raise InputError("weights must be non-negative and sum to 1")
    ring = gammas[0].ring
    for gm in gammas[1:]:
        if set(gm.ring.members) != set(ring.members):
            raise InputError("submeasures must share a ring")
    closed_inputs = all(gm.all_closed for gm in gammas)

    def mean_fn(ddfs: list[DDF]):
        def fn(x):
            acc = np.zeros_like(np.asarray(x, dtype=float))
            for wi, F in zip(w, ddfs):
                if wi == 0:
                    continue
                acc = acc + wi * t(evaluate(F, x))
            return pseudo_inverse(t, acc)

        return fn

    out: dict[int, DDF] = {}
    for m in ring:
        ddfs = [gm[m] for gm in gammas]
        fn = mean_fn(ddfs)
        label = f"qam[{t.label}]({ring.key(m)})"
        if closed_inputs:
            out[m] = ClosedForm(fn, label)
        else:
            out[m] = sample(ClosedForm(fn, label), g or make_grid())
    return ProbSubmeasure(ring, out, f"combine_qam[{t.label}]")


def jordan_extension(gamma: ProbSubmeasure, universe: Universe | None = None) -> ProbSubmeasure:
    """Extension to the powerset by pointwise suprema over ring supersets.

    Subsets with no ring superset get the identically-zero function and
    are listed in ``flagged``.
    """
    u = universe or gamma.ring.universe
    if u != gamma.ring.universe:
        raise InputError("universe differs from the ring's universe")
    full = powerset(u)
    out: dict[int, DDF] = {}
    flagged = []
    for e in full:
        if e in gamma.ring:
            out[e] = gamma[e]
            continue
        sups = [gamma[f] for f in gamma.ring if subset(e, f)]
        if not sups:
            out[e] = bottom()
            flagged.append(e)
        elif len(sups) == 1:
            out[e] = sups[0]
        else:
            out[e] = _sup_ddf(sups, f"sup({u.key(e)})")
    notes = ("no ring superset: bottom function assigned",) if flagged else ()
    return ProbSubmeasure(full, out, f"jordan({gamma.label})", notes, tuple(flagged))


def _sup_ddf(ddfs: list[DDF], label: str) -> ClosedForm:
    def fn(x):
        return np.max(np.stack([evaluate(F, x) for F in ddfs]), axis=0)

    return ClosedForm(fn, label)


def postcompose(h: Callable[[np.ndarray], np.ndarray], gamma: ProbSubmeasure) -> ProbSubmeasure:
    """Set-by-set h o gamma_E for a non-decreasing h with h(0)=0, h(1)=1."""
    fwd = h.forward if isinstance(h, Automorphism) else h
    lad = np.linspace(0.0, 1.0, 257)
    hv = np.asarray(fwd(lad), dtype=float)
    if abs(hv[0]) > 1e-12 or abs(hv[-1] - 1.0) > 1e-12 or np.any(np.diff(hv) < -1e-12):
        raise InputError("h must be non-decreasing with h(0)=0 and h(1)=1")
    out = {}
    for m in gamma.ring:
        F = gamma[m]
        out[m] = ClosedForm(lambda x, F=F: fwd(evaluate(F, x)), f"h({F.label})")
    if not gamma.all_closed:
        g = next(F.grid for F in gamma.assignment.values() if isinstance(F, Sampled))
        out = {m: sample(F, g) for m, F in out.items()}
    return ProbSubmeasure(gamma.ring, out, f"h o {gamma.label}")


# -- axiom checker ---------------------------------------------------------------

def _witness(verdict: str, ring: Ring, e: int, f: int, x: float, y: float, lxy: float,
             lhs: float, rhs: float) -> dict:
    return {"verdict": verdict, "E": ring.key(e), "F": ring.key(f), "x": x, "y": y,
            "Lxy": lxy, "lhs": lhs, "rhs": rhs, "violation": rhs - lhs}


def _value_classes(vals: dict[int, np.ndarray]) -> dict[int, int]:
    """Map each set to a representative with identical value array."""
    seen: dict[bytes, int] = {}
    rep = {}
    for m, v in vals.items():
        rep[m] = seen.setdefault(np.ascontiguousarray(v).tobytes(), m)
    return rep


def check_axioms(gamma: ProbSubmeasure, L: PseudoAddition, A: Aggregator, ring: Ring | None = None,
                 grid: Grid | None = None, tol: float | None = None, *,
                 probes: Iterable[Sequence[float]] = (), offgrid: int = OFFGRID, seed: int = 0,
                 max_witnesses: int = MAX_WITNESSES) -> Report:
    """Exhaustive check of the three axioms on ``ring`` and ``grid``.

    The union condition is scanned over every ring pair and every pair of
    positive knots, plus ``offgrid`` scrambled Halton points when all
    assignments are closed form, plus every explicit ``probes`` pair.  One
    witness (the worst) is kept per failing pair of sets; probes record
    each violation.
    """
    ring = gamma.ring if ring is None else ring
    for m in ring:
        if m not in gamma.assignment:
            raise InputError(f"{gamma.label}: no DDF for {ring.key(m)!r}")
    g = grid or make_grid()
    tol = gamma.default_tol() if tol is None else float(tol)
    closed = all(gamma[m].is_closed for m in ring)
    rep = Report("check_axioms", params={
        "gamma": gamma.label, "L": L.label, "A": A.label, "x_max": g.x_max, "grid_n": g.n,
        "tol": tol, "seed": seed, "ring_size": len(ring), "offgrid": offgrid if closed else 0,
    })
    if gamma.flagged:
        rep.notes.append("flagged sets: " + ";".join(ring.key(m) for m in gamma.flagged if m in ring))

    # empty set carries dirac(0)
    kv0 = knot_values(gamma[0], g)
    bad = np.abs(kv0[1:] - 1.0) > tol
    rep.verdicts["empty_identity"] = not np.any(bad)
    if np.any(bad):
        i = int(np.argmax(bad)) + 1
        rep.witnesses.append({"verdict": "empty_identity", "E": "", "x": g.knots[i],
                              "value": kv0[i], "expected": 1.0})

    # antitone in inclusion
    kv = {m: knot_values(gamma[m], g) for m in ring}
    short = [ring.key(m) or "{}" for m in ring if kv[m][-1] < 1.0 - tol]
    if short:
        # limit 1 at infinity cannot be decided on a finite grid
        rep.notes.append("tail unverified: below 1 at x_max for " + ";".join(short))
    worst_b = None
    for e in ring:
        for f in ring:
            if e != f and subset(e, f):
                d = kv[f] - kv[e]
                i = int(np.argmax(d))
                if d[i] > tol and (worst_b is None or d[i] > worst_b["violation"]):
                    worst_b = {"verdict": "antitone", "E": ring.key(e), "F": ring.key(f),
                               "x": g.knots[i], "lhs": kv[e][i], "rhs": kv[f][i], "violation": d[i]}
    rep.verdicts["antitone"] = worst_b is None
    if worst_b:
        rep.witnesses.append(worst_b)

    # union condition on knot pairs
    xs = g.positive
    S = L(xs[:, None], xs[None, :])
    vals = {m: evaluate(gamma[m], xs) for m in ring}
    lhs = {m: evaluate(gamma[m], S) for m in ring}
    vclass = _value_classes(vals)
    lclass = _value_classes(lhs)
    cache: dict[tuple[int, int, int], tuple[float, int, int, int]] = {}
    failing_pairs = 0
    within = 0
    worst_c = 0.0
    pair_witnesses = []
    for e in ring:
        for f in ring:
            key = (vclass[e], vclass[f], lclass[e | f])
            if key not in cache:
                rhs = A(vals[key[0]][:, None], vals[key[1]][None, :])
                viol = rhs - lhs[key[2]]
                i, j = np.unravel_index(int(np.argmax(viol)), viol.shape)
                n_within = int(np.count_nonzero((viol > 0) & (viol <= tol)))
                cache[key] = (float(viol[i, j]), int(i), int(j), n_within)
            v, i, j, n_within = cache[key]
            within += n_within
            worst_c = max(worst_c, v)
            if v > tol:
                failing_pairs += 1
                lv = float(lhs[e | f][i, j])
                pair_witnesses.append(_witness("union", ring, e, f, float(xs[i]), float(xs[j]),
                                               float(S[i, j]), lv, lv + v))

    # off-grid and explicit probe points, closed form only for the former
    pts = []
    if closed and offgrid > 0:
        hal = qmc.Halton(d=2, scramble=True, seed=seed).random(offgrid)
        pts.extend((float(a), float(b), False) for a, b in g.x_max * (1.0 - hal))
    pts.extend((float(a), float(b), True) for a, b in probes)
    if pts:
        px = np.array([p[0] for p in pts])
        py = np.array([p[1] for p in pts])
        is_probe = np.array([p[2] for p in pts])
        if np.any(px <= 0) or np.any(py <= 0):
            raise InputError("probe points must be positive")
        pl = L(px, py)
        pv = {m: evaluate(gamma[m], np.concatenate([px, py])) for m in ring}
        plhs = {m: evaluate(gamma[m], pl) for m in ring}
        n = px.size
        for e in ring:
            for f in ring:
                u = e | f
                rhs = A(pv[e][:n], pv[f][n:])
                viol = rhs - plhs[u]
                within += int(np.count_nonzero((viol > 0) & (viol <= tol)))
                if not np.any(viol > tol):
                    continue
                worst_c = max(worst_c, float(np.max(viol)))
                for k in np.flatnonzero(is_probe & (viol > tol)):
                    rep.witnesses.append(_witness("union", ring, e, f, px[k], py[k], pl[k],
                                                  plhs[u][k], rhs[k]))
                off = np.where(is_probe, -np.inf, viol)
                k = int(np.argmax(off))
                if off[k] > tol:
                    pair_witnesses.append(_witness("union", ring, e, f, px[k], py[k], pl[k],
                                                   plhs[u][k], rhs[k]))
                    failing_pairs += 1
    probe_ws = [w for w in rep.witnesses if w["verdict"] == "union"]
    rep.verdicts["union"] = not probe_ws and not pair_witnesses
    pair_witnesses.sort(key=lambda w: -w["violation"])
    rep.witnesses.extend(pair_witnesses[: max(0, max_witnesses - len(probe_ws))])
    rep.metrics.update({"max_violation": max(worst_c, 0.0), "within_tolerance": within,
                        "failing_pairs": failing_pairs})
    return rep


# -- derived objects ---------------------------------------------------------------

def extract_numerical(gamma: ProbSubmeasure, t: AdditiveGenerator, z_max: float = Z_MAX) -> NumericalSubmeasure:
    """eta(E) = sup{z >= 0 : t(gamma_E(z)) >= z}, by bisection to 1e-10.

    z -> t(gamma_E(z)) - z is non-increasing, so the sup lies in
    [0, min(t(0), z_max)]; a note records when ``z_max`` binds.
    """
    if not z_max > 0:
        raise InputError("z_max must be positive")
    hi0 = min(t.t0, float(z_max))
    capped = []
    out = {}
    for m in gamma.ring:
        F = gamma[m]

        def ok(z: float) -> bool:
            return float(t(evaluate(F, z))) >= z

        if ok(hi0):
            out[m] = hi0
            if hi0 < t.t0:
                capped.append(m)
            continue
        lo, hi = 0.0, hi0
        while hi - lo > EXTRACT_TOL:
            mid = 0.5 * (lo + hi)
            if ok(mid):
                lo = mid
            else:
                hi = mid
        out[m] = lo
    eta = NumericalSubmeasure(gamma.ring, out, f"eta[{gamma.label},{t.label}]")
    if capped:
        note = "z_max cap binds at " + ";".join(gamma.ring.key(m) for m in capped)
        object.__setattr__(eta, "notes", (note,))
    return eta


def rho(gamma: ProbSubmeasure) -> dict[tuple[int, int], DDF]:
    """Pseudo-metric rho(E, F) = gamma of the symmetric difference."""
    return {(e, f): gamma[e ^ f] for e in gamma.ring for f in gamma.ring}


def check_rho(gamma: ProbSubmeasure, L: PseudoAddition, T: Aggregator, ring: Ring | None = None,
              grid: Grid | None = None, tol: float | None = None,
              max_witnesses: int = MAX_WITNESSES) -> Report:
    """Identity, symmetry, translation invariance and the triangle inequality
    rho(E,F)(L(x,y)) >= T(rho(E,G)(x), rho(G,F)(y)) over all triples and knot pairs."""
    ring = gamma.ring if ring is None else ring
    g = grid or make_grid()
    tol = gamma.default_tol() if tol is None else float(tol)
    r = rho(gamma)
    rep = Report("check_rho", params={"gamma": gamma.label, "L": L.label, "T": T.label,
                                      "x_max": g.x_max, "grid_n": g.n, "tol": tol,
                                      "ring_size": len(ring)})
    kv = {m: knot_values(gamma[m], g) for m in ring}
    members = list(ring)

    ident = all(np.array_equal(knot_values(r[(e, e)], g)[1:], np.ones(g.n)) for e in members)
    rep.verdicts["identity"] = ident
    if not ident:
        rep.witnesses.append({"verdict": "identity", "E": ring.key(members[0])})

    sym_bad = [(e, f) for e in members for f in members
               if not np.array_equal(kv[e ^ f], kv[f ^ e])]
    rep.verdicts["symmetric"] = not sym_bad
    if sym_bad:
        e, f = sym_bad[0]
        rep.witnesses.append({"verdict": "symmetric", "E": ring.key(e), "F": ring.key(f)})

    trans_bad = None
    for e in members:
        for f in members:
            for c in members:
                if not np.array_equal(kv[e ^ f], kv[(e ^ c) ^ (c ^ f)]):
                    trans_bad = (e, f, c)
                    break
    rep.verdicts["translation_invariant"] = trans_bad is None
    if trans_bad:
        e, f, c = trans_bad
        rep.witnesses.append({"verdict": "translation_invariant", "E": ring.key(e),
                              "F": ring.key(f), "G": ring.key(c)})

    xs = g.positive
    S = L(xs[:, None], xs[None, :])
    vals = {m: evaluate(gamma[m], xs) for m in ring}
    lhs = {m: evaluate(gamma[m], S) for m in ring}
    cache: dict[tuple[int, int], tuple[float, int, int]] = {}
    ws = []
    worst = 0.0
    for e in members:
        for f in members:
            for c in members:
                a, b = e ^ c, c ^ f
                if (a, b) not in cache:
                    viol = T(vals[a][:, None], vals[b][None, :]) - lhs[a ^ b]
                    i, j = np.unravel_index(int(np.argmax(viol)), viol.shape)
                    cache[(a, b)] = (float(viol[i, j]), int(i), int(j))
                v, i, j = cache[(a, b)]
                worst = max(worst, v)
                if v > tol and len(ws) < max_witnesses:
                    ws.append({"verdict": "triangle", "E": ring.key(e), "F": ring.key(f),
                               "G": ring.key(c), "x": xs[i], "y": xs[j], "Lxy": S[i, j],
                               "lhs": lhs[a ^ b][i, j], "rhs": v + lhs[a ^ b][i, j], "violation": v})
    rep.verdicts["triangle"] = not ws
    rep.witnesses.extend(ws)
    rep.metrics["max_violation"] = worst
    rep.metrics["triples"] = len(members) ** 3
    return rep


def neighborhood(gamma: ProbSubmeasure, eps: float, delta: float) -> list[int]:
    """Ring members E with gamma_E(eps) > 1 - delta."""
    if not eps > 0:
        raise InputError("epsilon must be positive")
    if not 0 < delta <= 1:
        raise InputError("delta must lie in (0, 1]")
    return [m for m in gamma.ring if evaluate(gamma[m], eps) > 1.0 - delta]


def postcompose_probe(h: Automorphism, gamma: ProbSubmeasure, L: PseudoAddition, T: Aggregator,
                      grid: Grid | None = None, tol: float | None = None) -> Report:
    """Report both verdicts: gamma under (L, T) and h o gamma under (L, Psi_h T)."""
    before = check_axioms(gamma, L, T, grid=grid, tol=tol)
    after = check_axioms(postcompose(h, gamma), L, psi(h, T), grid=grid, tol=tol)
    rep = Report("postcompose_probe", params={"h": h.label, "gamma": gamma.label, "L": L.label,
                                              "T": T.label})
    rep.metrics["original_passes"] = before.passed
    rep.metrics["transformed_passes"] = after.passed
    rep.verdicts["agree"] = before.passed == after.passed
    if not rep.verdicts["agree"]:
        rep.witnesses.append({"verdict": "agree", "original": before.failed(),
                              "transformed": after.failed(),
                              "detail": (before.witnesses or after.witnesses)[:1]})
    return rep
