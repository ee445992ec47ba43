"""Pseudo-additions on the extended non-negative reals.

Constructors: :func:`k_alpha`, :func:`k_inf`, :func:`k_ell` (generated by a
named increasing bijection) and :func:`interval_system` (ordinal-sum form:
``ell_k^-1(ell_k(x) + ell_k(y))`` on each open square ``]a_k, b_k[^2``,
``max`` elsewhere).  Continuity is assumed of every constructor, not
checked.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Callable, Sequence

import numpy as np

from .report import InputError, Report, Verdict

INF = math.inf
PARTNER_TOL = 1e-10
BISECT_ITERS = 200
SEARCH_XMAX = 10.0

Unary = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True, eq=False)
class Bijection:
    """Increasing bijection with its inverse; ``lo``/``hi`` bound the domain."""

    forward: Unary
    inverse: Unary
    label: str
    lo: float = 0.0
    hi: float = INF


def _ell_catalogue(name: str, p: float | None = None) -> Bijection:
    if name == "identity":
        return Bijection(lambda x: x, lambda y: y, "identity")
    if name == "power":
        p = 2.0 if p is None else float(p)
        if not p > 0:
            raise InputError("power bijection needs p > 0")
        return Bijection(lambda x: x ** p, lambda y: y ** (1.0 / p), f"power({p:g})")
    if name in ("exp", "expm1", "exp-shifted"):
        return Bijection(np.expm1, np.log1p, "expm1")
    raise InputError(f"unknown bijection {name!r}; expected identity, power or expm1")


def ratio_bijection(a: float, b: float) -> Bijection:
    """[a, b] -> [0, inf]: (x - a)/(b - x), or x - a when b is infinite."""
    if b == INF:
        return Bijection(lambda x: x - a, lambda y: y + a, f"shift({a:g})", a, b)
    return Bijection(
        lambda x: (x - a) / (b - x),
        lambda y: np.where(np.isinf(y), b, (a + b * y) / (1.0 + y)),
        f"ratio({a:g},{b:g})",
        a,
        b,
    )


@dataclass(frozen=True, eq=False)
class PseudoAddition:
    fn: Callable[[np.ndarray, np.ndarray], np.ndarray]
    kind: str
    label: str
    alpha: float | None = None
    ell: Bijection | None = None
    pieces: tuple[tuple[float, float, Bijection], ...] = ()
    key: tuple | None = field(default=None)

    def __call__(self, x, y):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        scalar = x.ndim == 0 and y.ndim == 0
        with np.errstate(all="ignore"):
            out = np.asarray(self.fn(x, y), dtype=float)
        out = np.broadcast_to(out, np.broadcast_shapes(x.shape, y.shape))
        out = np.where(np.isnan(out), INF, out)
        return float(out) if scalar else out

    def __repr__(self) -> str:
        return f"PseudoAddition({self.label})"


def same(L1: PseudoAddition, L2: PseudoAddition) -> bool:
    return L1 is L2 or (L1.key is not None and L1.key == L2.key)


def k_alpha(alpha: float) -> PseudoAddition:
    """(x^a + y^a)^(1/a), computed with max-scaling to avoid overflow."""
    if not (alpha > 0 and math.isfinite(alpha)):
        raise InputError(f"K_alpha needs 0 < alpha < inf, got {alpha!r}")
    a = float(alpha)

    def fn(x, y):
        if a == 1.0:
            return x + y
        m = np.maximum(x, y)
        safe = np.where((m > 0) & np.isfinite(m), m, 1.0)
        s = safe * ((x / safe) ** a + (y / safe) ** a) ** (1.0 / a)
        return np.where(np.isinf(m), INF, np.where(m > 0, s, 0.0))

    return PseudoAddition(fn, "k_alpha", f"K_{a:g}", alpha=a, key=("k_alpha", a))


def k_inf() -> PseudoAddition:
    return PseudoAddition(np.maximum, "k_inf", "K_inf", key=("k_inf",))


def k_ell(ell: Bijection | str, p: float | None = None) -> PseudoAddition:
    """L(x, y) = ell^-1(ell(x) + ell(y)) for an increasing bijection of [0, inf]."""
    if isinstance(ell, str):
        ell = _ell_catalogue(ell, p)
    probe = np.concatenate([[0.0], np.geomspace(1e-3, 1e2, 61)])
    with np.errstate(all="ignore"):
        fwd = np.asarray(ell.forward(probe), dtype=float)
        back = np.asarray(ell.inverse(fwd), dtype=float)
    if abs(fwd[0]) > 1e-12 or not np.all(np.diff(fwd) > 0):
        raise InputError(f"{ell.label} is not an increasing bijection fixing 0")
    if np.max(np.abs(back - probe) / np.maximum(1.0, probe)) > 1e-9:
        raise InputError(f"{ell.label}: inverse does not invert")

    def fn(x, y):
        return ell.inverse(ell.forward(x) + ell.forward(y))

    return PseudoAddition(fn, "k_ell", f"K[{ell.label}]", ell=ell, key=("k_ell", ell.label))


def interval_system(pieces: Sequence[tuple[float, float, Bijection | None]]) -> PseudoAddition:
    """Ordinal-sum pseudo-addition; an empty system is ``max``."""
    norm = []
    for a, b, ell in sorted(pieces, key=lambda p: p[0]):
        a, b = float(a), float(b)
        if not (0 <= a < b):
            raise InputError(f"interval ]{a:g},{b:g}[ must satisfy 0 <= a < b")
        norm.append((a, b, ell if ell is not None else ratio_bijection(a, b)))
    for (a1, b1, _), (a2, b2, _) in zip(norm, norm[1:]):
        if a2 < b1:
            raise InputError(f"intervals ]{a1:g},{b1:g}[ and ]{a2:g},{b2:g}[ overlap")
    norm = tuple(norm)

    def fn(x, y):
        out = np.maximum(x, y)
        for a, b, ell in norm:
            inside = (x > a) & (x < b) & (y > a) & (y < b)
            if np.any(inside):
                xi = np.where(inside, x, (a + min(b, a + 1.0)) / 2)
                yi = np.where(inside, y, (a + min(b, a + 1.0)) / 2)
                val = ell.inverse(ell.forward(xi) + ell.forward(yi))
                out = np.where(inside, val, out)
        return out

    label = "intervals[" + ",".join(f"]{a:g},{b:g}[" for a, b, _ in norm) + "]"
    key = ("intervals",) + tuple((a, b, e.label) for a, b, e in norm)
    return PseudoAddition(fn, "intervals", label, pieces=norm, key=key)


def custom(fn: Callable[[np.ndarray, np.ndarray], np.ndarray], label: str) -> PseudoAddition:
    """Arbitrary binary operation (used to probe the axioms, e.g. ``min``)."""
    return PseudoAddition(fn, "custom", label)


def make_padd(spec: dict[str, Any] | str) -> PseudoAddition:
    """Build from a scenario fragment such as ``{"kind": "k_alpha", "alpha": 2}``."""
    if isinstance(spec, str):
        spec = {"kind": spec}
    kind = spec.get("kind")
    if kind == "k_alpha":
        return k_alpha(float(spec.get("alpha", 1.0)))
    if kind in ("k_inf", "max"):
        return k_inf()
    if kind == "k_ell":
        return k_ell(str(spec.get("ell", "identity")), spec.get("p"))
    if kind == "intervals":
        pieces = []
        for piece in spec.get("pieces", []):
            a, b = float(piece["a"]), float(piece.get("b", INF))
            pieces.append((a, b, None))
        return interval_system(pieces)
    raise InputError(f"unknown pseudo-addition kind {kind!r}")


# -- partner solving -----------------------------------------------------------

def _closed_partner(L: PseudoAddition, x: np.ndarray, u: np.ndarray) -> np.ndarray | None:
    if L.kind == "k_alpha":
        a = L.alpha
        if a == 1.0:
            v = x - u
        else:
            v = np.maximum(x ** a - u ** a, 0.0) ** (1.0 / a)
        return np.where(u <= x, np.maximum(v, 0.0), np.nan)
    if L.kind == "k_inf":
        return np.where(u <= x, x, np.nan)
    if L.kind == "k_ell":
        lx, lu = L.ell.forward(x), L.ell.forward(u)
        return np.where(lu <= lx, L.ell.inverse(np.maximum(lx - lu, 0.0)), np.nan)
    return None


def partner_array(L: PseudoAddition, x: float, us, x_max: float = SEARCH_XMAX) -> np.ndarray:
    """Largest v with L(u, v) = x for every u; NaN where L(u, 0) > x.

    Closed forms for K_alpha, K_inf and K_ell; vectorized bisection on
    the non-decreasing map v -> L(u, v) otherwise.
    """
    us = np.asarray(us, dtype=float)
    xs = np.full_like(us, float(x))
    with np.errstate(all="ignore"):
        v = _closed_partner(L, xs, us)
    if v is not None:
        return v
    base = L(us, np.zeros_like(us))
    ok = base <= x + PARTNER_TOL
    hi = np.full_like(us, max(float(x), x_max))
    for _ in range(64):
        short = ok & (L(us, hi) <= x)
        if not np.any(short):
            break
        hi = np.where(short, 2 * hi, hi)
    lo = np.zeros_like(us)
    for _ in range(BISECT_ITERS):
        mid = 0.5 * (lo + hi)
        below = L(us, mid) <= x
        lo = np.where(below, mid, lo)
        hi = np.where(below, hi, mid)
        if np.max(hi - lo, initial=0.0) <= 1e-15 * max(1.0, float(x)):
            break
    good = ok & (np.abs(L(us, lo) - x) <= PARTNER_TOL)
    return np.where(good, lo, np.nan)


def partner(L: PseudoAddition, x: float, u: float) -> float | None:
    if not x > 0:
        raise InputError("partner needs x > 0")
    v = float(partner_array(L, x, np.array([float(u)]))[0])
    return None if math.isnan(v) else v


# -- sampled property checks -----------------------------------------------------

LANDMARKS = np.array([0.0, 3.0, 1.0, 2.0, 0.5, 5.0, 10.0])


def _samples(samples: int, seed: int, hi: float = 10.0) -> np.ndarray:
    rng = np.random.default_rng(seed)
    return np.concatenate([LANDMARKS, rng.uniform(0.0, hi, max(samples - LANDMARKS.size, 0))])


def check_padd(L: PseudoAddition, samples: int = 200, seed: int = 0, tol: float = 1e-9) -> Report:
    """Sampled commutativity, associativity, joint strict increase, neutral 0."""
    if samples < 100:
        raise InputError("check_padd needs samples >= 100")
    rep = Report("check_padd", params={"L": L.label, "samples": samples, "seed": seed})
    s = _samples(samples, seed)
    rng = np.random.default_rng(seed + 1)

    def rel(a, b):
        return np.abs(a - b) / np.maximum(1.0, np.maximum(np.abs(a), np.abs(b)))

    # neutral element
    n = rel(L(np.zeros_like(s), s), s)
    i = int(np.argmax(n > tol)) if np.any(n > tol) else -1
    rep.verdicts["neutral_zero"] = i < 0
    if i >= 0:
        rep.witnesses.append({"verdict": "neutral_zero", "point": [0.0, s[i]],
                              "value": L(0.0, s[i]), "expected": s[i]})

    x, y = rng.choice(s, samples), rng.choice(s, samples)
    c = rel(L(x, y), L(y, x))
    rep.verdicts["commutative"] = not np.any(c > tol)
    if np.any(c > tol):
        j = int(np.argmax(c))
        rep.witnesses.append({"verdict": "commutative", "point": [x[j], y[j]],
                              "values": [L(x[j], y[j]), L(y[j], x[j])]})

    z = rng.choice(s, samples)
    lhs, rhs = L(L(x, y), z), L(x, L(y, z))
    a = rel(lhs, rhs)
    rep.verdicts["associative"] = not np.any(a > tol)
    if np.any(a > tol):
        j = int(np.argmax(a))
        rep.witnesses.append({"verdict": "associative", "point": [x[j], y[j], z[j]],
                              "values": [lhs[j], rhs[j]]})

    u1, v1 = rng.choice(s, samples), rng.choice(s, samples)
    du, dv = rng.uniform(0.01, 2.0, samples), rng.uniform(0.01, 2.0, samples)
    low, high = L(u1, v1), L(u1 + du, v1 + dv)
    bad = ~(low < high)
    rep.verdicts["strictly_increasing"] = not np.any(bad)
    if np.any(bad):
        j = int(np.argmax(bad))
        rep.witnesses.append({"verdict": "strictly_increasing",
                              "point": [u1[j], v1[j]], "other": [u1[j] + du[j], v1[j] + dv[j]],
                              "values": [low[j], high[j]]})
    return rep


def padd_leq(L1: PseudoAddition, L2: PseudoAddition, samples: int = 200, seed: int = 0,
             tol: float = 1e-12) -> Verdict:
    """L1 <= L2 on sampled pairs (relative tolerance)."""
    if samples < 100:
        raise InputError("padd_leq needs samples >= 100")
    s = _samples(samples, seed)
    X, Y = np.meshgrid(s, s, indexing="ij")
    a, b = L1(X, Y), L2(X, Y)
    excess = (a - b) / np.maximum(1.0, np.abs(b))
    i = np.unravel_index(np.argmax(excess), excess.shape)
    if excess[i] > tol:
        return Verdict(False, {"point": [X[i], Y[i]], "lhs": a[i], "rhs": b[i]})
    return Verdict(True)
