"""Binary aggregation functions on [0, 1]^2.

Covers the landmark t-norms, the six parametric t-norm families, additive
generators with their pseudo-inverses, automorphism transforms, the
symmetrization, sampled classification and the pointwise lattice.

Family formulas (lambda ranges as tabulated for the induced submeasures):

==========  ===============  ==============================================
family      range            member
==========  ===============  ==============================================
aa          [0, inf)         0: D; else exp(-((-ln x)^l + (-ln y)^l)^(1/l))
dombi       [0, inf)         0: D; else 1/(1 + (((1-x)/x)^l + ((1-y)/y)^l)^(1/l))
frank       (0, inf]         1: Pi; inf: W; else log_l(1 + (l^x-1)(l^y-1)/(l-1))
hamacher    [0, inf]         inf: D; else xy / (l + (1-l)(x + y - xy))
yager       [0, inf)         0: D; else max(1 - ((1-x)^l + (1-y)^l)^(1/l), 0)
sw          [-1, inf]        -1: D; inf: Pi; else max((x+y-1+l*xy)/(1+l), 0)
==========  ===============  ==============================================
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .report import FormulaError, InputError, Report, Verdict

CLASSES = ("aggregation", "tnorm", "semicopula", "quasicopula", "copula")
RANGE_SLACK = 1e-9
LADDER_TOL = 1e-12
INF = math.inf

BinaryFn = Callable[[np.ndarray, np.ndarray], np.ndarray]


@dataclass(frozen=True, eq=False)
class Aggregator:
    fn: BinaryFn
    label: str
    claimed_class: str = "aggregation"

    def __post_init__(self) -> None:
        if self.claimed_class not in CLASSES:
            raise InputError(f"unknown class {self.claimed_class!r}")

    def __call__(self, u, v):
        u = np.asarray(u, dtype=float)
        v = np.asarray(v, dtype=float)
        scalar = u.ndim == 0 and v.ndim == 0
        with np.errstate(all="ignore"):
            out = np.asarray(self.fn(u, v), dtype=float)
        out = np.broadcast_to(out, np.broadcast_shapes(u.shape, v.shape))
        if np.any(np.isnan(out)):
            raise FormulaError(f"{self.label}: NaN in evaluation")
        if np.any(out < -RANGE_SLACK) or np.any(out > 1 + RANGE_SLACK):
            raise FormulaError(f"{self.label}: value outside [0, 1]")
        out = np.clip(out, 0.0, 1.0)
        return float(out) if scalar else out

    def __repr__(self) -> str:
        return f"Aggregator({self.label})"


# -- landmark t-norms ---------------------------------------------------------

def _drastic(u, v):
    return np.where(np.maximum(u, v) >= 1.0, np.minimum(u, v), 0.0)


_TNORMS: dict[str, BinaryFn] = {
    "M": np.minimum,
    "Pi": lambda u, v: u * v,
    "W": lambda u, v: np.maximum(u + v - 1.0, 0.0),
    "D": _drastic,
}
_ALIASES = {"min": "M", "P": "Pi", "prod": "Pi", "product": "Pi", "Π": "Pi",
            "luk": "W", "lukasiewicz": "W", "drastic": "D"}


def make_tnorm(name: str) -> Aggregator:
    key = _ALIASES.get(name, name)
    if key not in _TNORMS:
        raise InputError(f"unknown t-norm {name!r}; expected one of M, Pi, W, D")
    cls = "copula" if key in ("M", "Pi", "W") else "tnorm"
    return Aggregator(_TNORMS[key], key, cls)


M = make_tnorm("M")
Pi = make_tnorm("Pi")
W = make_tnorm("W")
D = make_tnorm("D")


# -- parametric families ------------------------------------------------------

FAMILY_RANGES: dict[str, tuple[float, float, bool, bool]] = {
    # (low, high, low included, high included)
    "aa": (0.0, INF, True, False),
    "dombi": (0.0, INF, True, False),
    "frank": (0.0, INF, False, True),
    "hamacher": (0.0, INF, True, True),
    "yager": (0.0, INF, True, False),
    "sw": (-1.0, INF, True, True),
}


def check_family_lambda(family: str, lam: float) -> None:
    if family not in FAMILY_RANGES:
        raise InputError(f"unknown family {family!r}; expected one of {sorted(FAMILY_RANGES)}")
    lo, hi, lo_in, hi_in = FAMILY_RANGES[family]
    lam = float(lam)
    ok = (lo < lam or (lo_in and lam == lo)) and (lam < hi or (hi_in and lam == hi))
    if math.isnan(lam) or not ok:
        left = "[" if lo_in else "("
        right = "]" if hi_in else ")"
        raise InputError(f"{family} lambda {lam!r} outside {left}{lo:g}, {hi:g}{right}")


def _aa(lam):
    def fn(u, v):
        s = (-np.log(u)) ** lam + (-np.log(v)) ** lam
        return np.exp(-(s ** (1.0 / lam)))
    return fn


def _dombi(lam):
    def fn(u, v):
        s = ((1.0 - u) / u) ** lam + ((1.0 - v) / v) ** lam
        out = 1.0 / (1.0 + s ** (1.0 / lam))
        return np.where((u <= 0) | (v <= 0), 0.0, out)
    return fn


def _frank(lam):
    def fn(u, v):
        arg = 1.0 + (lam ** u - 1.0) * (lam ** v - 1.0) / (lam - 1.0)
        return np.log(arg) / math.log(lam)
    return fn


def _hamacher(lam):
    def fn(u, v):
        den = lam + (1.0 - lam) * (u + v - u * v)
        return np.where(den > 0, u * v / np.where(den > 0, den, 1.0), 0.0)
    return fn


def _yager(lam):
    def fn(u, v):
        s = (1.0 - u) ** lam + (1.0 - v) ** lam
        return np.maximum(1.0 - s ** (1.0 / lam), 0.0)
    return fn


def _sw(lam):
    def fn(u, v):
        return np.maximum((u + v - 1.0 + lam * u * v) / (1.0 + lam), 0.0)
    return fn


def make_family(family: str, lam: float) -> Aggregator:
    """Member of a parametric t-norm family, endpoints mapped to M/Pi/W/D."""
    family = family.lower()
    check_family_lambda(family, lam)
    lam = float(lam)
    label = f"{family}({lam:g})"
    if family in ("aa", "dombi", "yager") and lam == 0:
        return Aggregator(_drastic, label, "tnorm")
    if (family == "hamacher" and lam == INF) or (family == "sw" and lam == -1):
        return Aggregator(_drastic, label, "tnorm")
    if (family == "frank" and lam == 1) or (family == "sw" and lam == INF) or (
        family == "aa" and lam == 1
    ):
        return Aggregator(_TNORMS["Pi"], label, "tnorm")
    if (family == "frank" and lam == INF) or (family == "sw" and lam == 0) or (
        family == "yager" and lam == 1
    ):
        return Aggregator(_TNORMS["W"], label, "tnorm")
    builder = {"aa": _aa, "dombi": _dombi, "frank": _frank, "hamacher": _hamacher,
               "yager": _yager, "sw": _sw}[family]
    return Aggregator(builder(lam), label, "tnorm")


# -- automorphisms and generators --------------------------------------------

@dataclass(frozen=True, eq=False)
class Automorphism:
    forward: Callable[[np.ndarray], np.ndarray]
    inverse: Callable[[np.ndarray], np.ndarray]
    label: str = "h"

    def __post_init__(self) -> None:
        ladder = np.linspace(0.0, 1.0, 257)
        with np.errstate(all="ignore"):
            f = np.asarray(self.forward(ladder), dtype=float)
            back = np.asarray(self.inverse(f), dtype=float)
        if abs(f[0]) > 1e-12 or abs(f[-1] - 1.0) > 1e-12:
            raise InputError(f"automorphism {self.label} must fix 0 and 1")
        if not np.all(np.diff(f) > 0):
            raise InputError(f"automorphism {self.label} is not strictly increasing")
        if np.max(np.abs(back - ladder)) > 1e-9:
            raise InputError(f"automorphism {self.label}: inverse does not invert")

    def __call__(self, x):
        return self.forward(np.asarray(x, dtype=float))


def identity_automorphism() -> Automorphism:
    return Automorphism(lambda x: x, lambda y: y, "id")


def power_automorphism(p: float) -> Automorphism:
    if not p > 0:
        raise InputError("power automorphism needs p > 0")
    return Automorphism(lambda x: x ** p, lambda y: y ** (1.0 / p), f"x^{p:g}")


def tan_automorphism() -> Automorphism:
    """h(x) = tan(pi x / 4)."""
    return Automorphism(
        lambda x: np.tan(np.pi * x / 4.0),
        lambda y: 4.0 / np.pi * np.arctan(y),
        "tan(pi x/4)",
    )


def automorphism(name: str, p: float | None = None) -> Automorphism:
    if name in ("id", "identity"):
        return identity_automorphism()
    if name == "power":
        return power_automorphism(2.0 if p is None else p)
    if name == "tan":
        return tan_automorphism()
    raise InputError(f"unknown automorphism {name!r}")


def is_supermultiplicative(h: Automorphism, m: int = 64, tol: float = 1e-12) -> bool:
    """Sampled check of h(xy) >= h(x) h(y)."""
    x = np.linspace(0.0, 1.0, m)
    X, Y = np.meshgrid(x, x, indexing="ij")
    return bool(np.all(h(X * Y) >= h(X) * h(Y) - tol))


def is_dual_subadditive(h: Automorphism, m: int = 64, tol: float = 1e-12) -> bool:
    """Sampled check that g(x) = 1 - h(1 - x) is subadditive where x + y <= 1."""
    x = np.linspace(0.0, 1.0, m)
    X, Y = np.meshgrid(x, x, indexing="ij")
    ok = X + Y <= 1.0
    g = lambda z: 1.0 - h(1.0 - z)
    return bool(np.all((g(X + Y) <= g(X) + g(Y) + tol)[ok]))


@dataclass(frozen=True, eq=False)
class AdditiveGenerator:
    """Continuous strictly decreasing t on [0, 1] with t(1) = 0.

    ``inverse`` is the ordinary inverse on [0, t0]; when omitted the
    pseudo-inverse falls back to bisection.  ``convex`` marks copula
    generators.
    """

    t: Callable[[np.ndarray], np.ndarray]
    t0: float
    inverse: Callable[[np.ndarray], np.ndarray] | None = None
    convex: bool = False
    label: str = "t"

    def __post_init__(self) -> None:
        ladder = np.linspace(0.0, 1.0, 257)
        with np.errstate(all="ignore"):
            vals = np.asarray(self.t(ladder), dtype=float)
        if abs(vals[-1]) > 1e-12:
            raise InputError(f"generator {self.label}: t(1) must be 0")
        if not np.all(np.diff(vals) < 0):
            raise InputError(f"generator {self.label} is not strictly decreasing")
        if not (vals[0] == self.t0 or math.isclose(vals[0], self.t0, rel_tol=1e-12)):
            raise InputError(f"generator {self.label}: t0 disagrees with t(0)")

    def __call__(self, x):
        with np.errstate(all="ignore"):
            return self.t(np.asarray(x, dtype=float))


def sampled_convex(t: Callable[[np.ndarray], np.ndarray], m: int = 513, tol: float = 1e-9) -> bool:
    x = np.linspace(0.0, 1.0, m)[1:]
    with np.errstate(all="ignore"):
        y = np.asarray(t(x), dtype=float)
    d2 = y[2:] - 2 * y[1:-1] + y[:-2]
    scale = np.maximum(1.0, np.abs(y[1:-1]))
    return bool(np.all(d2 >= -tol * scale))


def _bisect_inverse(t, z: np.ndarray) -> np.ndarray:
    lo = np.zeros_like(z)
    hi = np.ones_like(z)
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        with np.errstate(all="ignore"):
            above = t(mid) > z
        lo = np.where(above, mid, lo)
        hi = np.where(above, hi, mid)
        if np.max(hi - lo, initial=0.0) < 1e-12:
            break
    return 0.5 * (lo + hi)


def pseudo_inverse(gen: AdditiveGenerator, x):
    """t^(-1)(min(t0, x)) for x >= 0; +inf maps to 0 and non-positive x to 1."""
    arr = np.asarray(x, dtype=float)
    scalar = arr.ndim == 0
    z = np.minimum(np.maximum(arr, 0.0), gen.t0)
    if gen.inverse is not None:
        with np.errstate(all="ignore"):
            out = np.asarray(gen.inverse(z), dtype=float)
        out = np.broadcast_to(out, z.shape).copy()
    else:
        out = _bisect_inverse(gen.t, np.atleast_1d(z)).reshape(z.shape)
    out = np.where(z <= 0, 1.0, out)
    out = np.where(z >= gen.t0, 0.0, out)
    out = np.clip(out, 0.0, 1.0)
    return float(out) if scalar else out


def generator(name: str, lam: float | None = None) -> AdditiveGenerator:
    """Catalogue of named additive generators.

    ``linear`` (W), ``log`` (Pi), ``aa`` / ``gh`` ((-ln x)^l), ``yager``,
    ``frank``, ``hamacher``, ``dombi``, ``sw`` and ``nonstrict``
    ((1-x)/(1+(l-1)x), the non-strict copula family).  Convexity is decided
    by a sampled second-difference test.
    """
    name = name.lower()
    if name == "linear":
        t, inv, t0 = (lambda x: 1.0 - x), (lambda z: 1.0 - z), 1.0
    elif name == "log":
        t, inv, t0 = (lambda x: -np.log(x)), (lambda z: np.exp(-z)), INF
    elif name in ("aa", "gh"):
        _need(lam, lam is not None and lam > 0, name)
        t, inv, t0 = (lambda x: (-np.log(x)) ** lam), (lambda z: np.exp(-(z ** (1.0 / lam)))), INF
    elif name == "yager":
        _need(lam, lam is not None and lam > 0, name)
        t, inv, t0 = (lambda x: (1.0 - x) ** lam), (lambda z: 1.0 - z ** (1.0 / lam)), 1.0
    elif name == "frank":
        _need(lam, lam is not None and lam > 0 and lam != 1, name)
        t = lambda x: -np.log((lam ** x - 1.0) / (lam - 1.0))
        inv = lambda z: np.log1p((lam - 1.0) * np.exp(-z)) / math.log(lam)
        t0 = INF
    elif name == "hamacher":
        _need(lam, lam is not None and lam >= 0, name)
        if lam == 0:
            t, inv = (lambda x: (1.0 - x) / x), (lambda z: 1.0 / (1.0 + z))
        else:
            t = lambda x: np.log((lam + (1.0 - lam) * x) / x)
            inv = lambda z: lam / (np.exp(z) + lam - 1.0)
        t0 = INF
    elif name == "dombi":
        _need(lam, lam is not None and lam > 0, name)
        t, inv, t0 = (lambda x: ((1.0 - x) / x) ** lam), (lambda z: 1.0 / (1.0 + z ** (1.0 / lam))), INF
    elif name == "sw":
        _need(lam, lam is not None and lam > -1, name)
        if lam == 0:
            t, inv = (lambda x: 1.0 - x), (lambda z: 1.0 - z)
        else:
            t = lambda x: 1.0 - np.log1p(lam * x) / math.log1p(lam)
            inv = lambda z: ((1.0 + lam) ** (1.0 - z) - 1.0) / lam
        t0 = 1.0
    elif name == "nonstrict":
        _need(lam, lam is not None and lam >= 1, name)
        t = lambda x: (1.0 - x) / (1.0 + (lam - 1.0) * x)
        inv = lambda z: (1.0 - z) / (1.0 + (lam - 1.0) * z)
        t0 = 1.0
    else:
        raise InputError(f"unknown generator {name!r}")
    label = name if lam is None else f"{name}({lam:g})"
    return AdditiveGenerator(t, t0, inv, sampled_convex(t), label)


def _need(lam, ok: bool, name: str) -> None:
    if not ok:
        raise InputError(f"generator {name}: parameter {lam!r} out of range")


def from_additive_generator(gen: AdditiveGenerator, kind: str = "tnorm") -> Aggregator:
    """T(x, y) = t^(-1)(t(x) + t(y)); ``kind='copula'`` requires convexity."""
    if kind not in ("tnorm", "copula"):
        raise InputError(f"kind must be 'tnorm' or 'copula', got {kind!r}")
    if kind == "copula" and not gen.convex:
        raise InputError(f"generator {gen.label} is not convex; no copula")

    def fn(u, v):
        return pseudo_inverse(gen, gen(u) + gen(v))

    return Aggregator(fn, f"gen[{gen.label}]", "copula" if kind == "copula" else "tnorm")


def gumbel_hougaard(lam: float) -> Aggregator:
    if not lam >= 1:
        raise InputError("Gumbel-Hougaard needs lambda >= 1")
    return from_additive_generator(generator("gh", lam), "copula")


def nonstrict_copula(lam: float) -> Aggregator:
    """C_l(u,v) = max((l^2 uv - (1-u)(1-v)) / (l^2 - (l-1)^2 (1-u)(1-v)), 0)."""
    if not lam >= 1:
        raise InputError("non-strict copula family needs lambda >= 1")

    def fn(u, v):
        p = (1.0 - u) * (1.0 - v)
        return np.maximum((lam * lam * u * v - p) / (lam * lam - (lam - 1.0) ** 2 * p), 0.0)

    return Aggregator(fn, f"C_nonstrict({lam:g})", "copula")


def pmean(p: float) -> Aggregator:
    """Hoelder mean ((x^p + y^p)/2)^(1/p)."""
    if not p > 0:
        raise InputError("p-mean needs p > 0")
    return Aggregator(lambda u, v: ((u ** p + v ** p) / 2.0) ** (1.0 / p), f"pmean({p:g})")


def geometric_mean() -> Aggregator:
    return Aggregator(lambda u, v: np.sqrt(u * v), "geometric")


# -- transforms and lattice ----------------------------------------------------

def psi(h: Automorphism, A: Aggregator) -> Aggregator:
    """(Psi_h A)(x, y) = h^-1(A(h(x), h(y)))."""

    def fn(u, v):
        return h.inverse(A(h.forward(u), h.forward(v)))

    return Aggregator(fn, f"Psi[{h.label}]({A.label})", A.claimed_class)


def symmetrize(A: Aggregator) -> Aggregator:
    return Aggregator(lambda u, v: np.maximum(A(u, v), A(v, u)), f"sym({A.label})",
                      A.claimed_class)


def agg_extrema(A: Aggregator, B: Aggregator, mode: str = "join") -> Aggregator:
    if mode == "join":
        return Aggregator(lambda u, v: np.maximum(A(u, v), B(u, v)),
                          f"({A.label} v {B.label})", _common_class(A, B, "join"))
    if mode == "meet":
        return Aggregator(lambda u, v: np.minimum(A(u, v), B(u, v)),
                          f"({A.label} ^ {B.label})", _common_class(A, B, "meet"))
    raise InputError(f"mode must be 'join' or 'meet', got {mode!r}")


def _common_class(A: Aggregator, B: Aggregator, mode: str) -> str:
    # semi-copulas and quasi-copulas are closed under pointwise max/min
    rank = {"aggregation": 0, "semicopula": 1, "tnorm": 1, "quasicopula": 2, "copula": 2}
    r = min(rank[A.claimed_class], rank[B.claimed_class])
    return {0: "aggregation", 1: "semicopula", 2: "quasicopula"}[r]


def ladder(m: int) -> np.ndarray:
    return np.linspace(0.0, 1.0, m)


def agg_leq(A: Aggregator, B: Aggregator, m: int = 33, tol: float = LADDER_TOL) -> Verdict:
    """A <= B on an m x m ladder; the witness is the largest excess."""
    if m < 16:
        raise InputError("ladder size must be >= 16")
    x = ladder(m)
    X, Y = np.meshgrid(x, x, indexing="ij")
    a, b = A(X, Y), B(X, Y)
    excess = a - b
    i = np.unravel_index(np.argmax(excess), excess.shape)
    if excess[i] > tol:
        return Verdict(False, {"point": [X[i], Y[i]], "lhs": a[i], "rhs": b[i]})
    return Verdict(True)


def _worst(diff: np.ndarray) -> tuple[int, ...]:
    return np.unravel_index(np.argmax(diff), diff.shape)


def classify(A: Aggregator, m: int = 33, assoc_m: int | None = None, tol: float = 1e-9) -> Report:
    """Sampled necessary-condition verdicts for each aggregation class.

    Flags: monotone, boundary, aggregation, neutral_one, semicopula,
    lipschitz, quasicopula, two_increasing, copula, commutative,
    associative, tnorm.  Failures carry the worst witness found.
    """
    if m < 16:
        raise InputError("ladder size must be >= 16")
    rep = Report("classify", params={"aggregator": A.label, "m": m,
                                      "claimed_class": A.claimed_class})
    x = ladder(m)
    X, Y = np.meshgrid(x, x, indexing="ij")
    V = A(X, Y)
    step = np.diff(x)

    def fail(flag, **w):
        rep.witnesses.append({"verdict": flag, **w})

    dx = V[:-1, :] - V[1:, :]
    dy = V[:, :-1] - V[:, 1:]
    mono = True
    for d, axis in ((dx, 0), (dy, 1)):
        i = _worst(d)
        if d[i] > LADDER_TOL:
            mono = False
            p = [X[i], Y[i]]
            q = [X[i[0] + 1, i[1]], Y[i[0] + 1, i[1]]] if axis == 0 else [X[i[0], i[1] + 1], Y[i[0], i[1] + 1]]
            fail("monotone", point=p, other=q, values=[V[i], V[i] - d[i]])
    rep.verdicts["monotone"] = mono

    a00, a11 = float(V[0, 0]), float(V[-1, -1])
    boundary = abs(a00) <= tol and abs(a11 - 1.0) <= tol
    if not boundary:
        fail("boundary", point=[[0, 0], [1, 1]], values=[a00, a11])
    rep.verdicts["boundary"] = boundary
    rep.verdicts["aggregation"] = mono and boundary

    right = np.abs(V[:, -1] - x)   # A(x, 1) vs x
    left = np.abs(V[-1, :] - x)    # A(1, x) vs x
    neutral = True
    if right.max() > tol or left.max() > tol:
        neutral = False
        if right.max() >= left.max():
            i = int(np.argmax(right))
            fail("neutral_one", point=[x[i], 1.0], values=[V[i, -1]], expected=x[i])
        else:
            i = int(np.argmax(left))
            fail("neutral_one", point=[1.0, x[i]], values=[V[-1, i]], expected=x[i])
    rep.verdicts["neutral_one"] = neutral
    rep.verdicts["semicopula"] = mono and neutral

    jx = np.abs(V[1:, :] - V[:-1, :]) - step[:, None]
    jy = np.abs(V[:, 1:] - V[:, :-1]) - step[None, :]
    lip = True
    for d, axis in ((jx, 0), (jy, 1)):
        i = _worst(d)
        if d[i] > tol:
            lip = False
            p = [X[i], Y[i]]
            q = [X[i[0] + 1, i[1]], Y[i[0] + 1, i[1]]] if axis == 0 else [X[i[0], i[1] + 1], Y[i[0], i[1] + 1]]
            vq = V[i[0] + 1, i[1]] if axis == 0 else V[i[0], i[1] + 1]
            fail("lipschitz", point=p, other=q, values=[V[i], vq])
    rep.verdicts["lipschitz"] = lip
    rep.verdicts["quasicopula"] = rep.verdicts["semicopula"] and lip

    vol = V[1:, 1:] - V[:-1, 1:] - V[1:, :-1] + V[:-1, :-1]
    i = _worst(-vol)
    two_inc = bool(-vol[i] <= tol)
    if not two_inc:
        fail("two_increasing", point=[X[i], Y[i]], other=[X[i[0] + 1, i[1] + 1], Y[i[0] + 1, i[1] + 1]],
             values=[vol[i]])
    rep.verdicts["two_increasing"] = two_inc
    rep.verdicts["copula"] = rep.verdicts["quasicopula"] and two_inc

    asym = np.abs(V - V.T)
    i = _worst(asym)
    comm = bool(asym[i] <= tol)
    if not comm:
        fail("commutative", point=[X[i], Y[i]], values=[V[i], V.T[i]])
    rep.verdicts["commutative"] = comm

    am = min(m, 33) if assoc_m is None else assoc_m
    z = ladder(am)
    P, Q, R = np.meshgrid(z, z, z, indexing="ij")
    lhs = A(A(P, Q), R)
    rhs = A(P, A(Q, R))
    res = np.abs(lhs - rhs)
    i = _worst(res)
    assoc = bool(res[i] <= tol)
    if not assoc:
        fail("associative", point=[P[i], Q[i], R[i]], values=[lhs[i], rhs[i]])
    rep.verdicts["associative"] = assoc
    rep.metrics["associativity_residual"] = float(res[i])
    rep.verdicts["tnorm"] = rep.verdicts["semicopula"] and comm and assoc

    # composite flags cite the component flags that sank them
    for flag, parts in _COMPOSITE.items():
        if not rep.verdicts[flag]:
            fail(flag, because=[p for p in parts if not rep.verdicts[p]])
    return rep


_COMPOSITE = {
    "aggregation": ("monotone", "boundary"),
    "semicopula": ("monotone", "neutral_one"),
    "quasicopula": ("semicopula", "lipschitz"),
    "copula": ("quasicopula", "two_increasing"),
    "tnorm": ("semicopula", "commutative", "associative"),
}
