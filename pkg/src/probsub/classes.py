"""Descriptors of submeasure classes, their order and lattice operations.

A class is described by its pair (L, A); classes are never enumerated.
``d1 << d2`` holds when L1 <= L2 and A2 <= A1, and then every member of
the first class belongs to the second.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .agg import Aggregator, agg_extrema, agg_leq
from .grid import Grid
from .padd import PseudoAddition, padd_leq, same
from .psub import ProbSubmeasure, check_axioms
from .report import InputError, Report, Verdict


@dataclass(frozen=True)
class ThetaDescriptor:
    L: PseudoAddition
    A: Aggregator
    label: str = ""

    def __post_init__(self) -> None:
        if not isinstance(self.L, PseudoAddition) or not isinstance(self.A, Aggregator):
            raise InputError("descriptor needs a PseudoAddition and an Aggregator")
        if not self.label:
            object.__setattr__(self, "label", f"Theta[{self.L.label},{self.A.label}]")


def theta_leq(d1: ThetaDescriptor, d2: ThetaDescriptor, samples: int = 200, m: int = 33) -> Verdict:
    """d1 << d2: sampled L1 <= L2 and laddered A2 <= A1."""
    lv = padd_leq(d1.L, d2.L, samples=samples)
    if not lv:
        return Verdict(False, {"part": "L", **(lv.witness or {})})
    av = agg_leq(d2.A, d1.A, m=m)
    if not av:
        return Verdict(False, {"part": "A", **(av.witness or {})})
    return Verdict(True)


def theta_lattice(d1: ThetaDescriptor, d2: ThetaDescriptor, mode: str = "join") -> ThetaDescriptor:
    """Join takes the pointwise meet of the aggregators, meet the pointwise join."""
    if not same(d1.L, d2.L):
        raise InputError(f"lattice operations need a shared L, got {d1.L.label} and {d2.L.label}")
    if mode == "join":
        A = agg_extrema(d1.A, d2.A, "meet")
    elif mode == "meet":
        A = agg_extrema(d1.A, d2.A, "join")
    else:
        raise InputError(f"mode must be 'join' or 'meet', got {mode!r}")
    return ThetaDescriptor(d1.L, A)


def membership_implication(gamma: ProbSubmeasure, d1: ThetaDescriptor, d2: ThetaDescriptor,
                           grid: Grid | None = None, tol: float | None = None,
                           samples: int = 200) -> Report:
    """Check gamma against both classes; a pass under d1 with a fail under
    d2 falsifies the implication."""
    order = theta_leq(d1, d2, samples=samples)
    if not order:
        raise InputError(f"{d1.label} << {d2.label} does not hold: {order.witness}")
    r1 = check_axioms(gamma, d1.L, d1.A, grid=grid, tol=tol)
    r2 = check_axioms(gamma, d2.L, d2.A, grid=grid, tol=tol)
    rep = Report("membership_implication",
                 params={"gamma": gamma.label, "d1": d1.label, "d2": d2.label,
                         "tol": r1.params["tol"]})
    rep.metrics.update({"d1_pass": r1.passed, "d2_pass": r2.passed})
    rep.verdicts["implication"] = (not r1.passed) or r2.passed
    if not rep.verdicts["implication"]:
        rep.witnesses.extend(r2.witnesses[:5])
    rep.metrics["d1_witnesses"] = r1.witnesses[:5]
    rep.metrics["d2_witnesses"] = r2.witnesses[:5]
    return rep


def ideal_filter_membership(d: ThetaDescriptor, anchor: ThetaDescriptor, kind: str = "ideal",
                            second_anchor: ThetaDescriptor | None = None,
                            samples: int = 200) -> bool:
    """ideal: d << anchor; filter: anchor << d; interval: anchor << d << second_anchor."""
    if not same(d.L, anchor.L) or (second_anchor is not None and not same(d.L, second_anchor.L)):
        raise InputError("ideal/filter membership needs a shared L")
    if kind == "ideal":
        return bool(theta_leq(d, anchor, samples))
    if kind == "filter":
        return bool(theta_leq(anchor, d, samples))
    if kind == "interval":
        if second_anchor is None:
            raise InputError("interval membership needs a second anchor")
        return bool(theta_leq(anchor, d, samples)) and bool(theta_leq(d, second_anchor, samples))
    raise InputError(f"kind must be ideal, filter or interval, got {kind!r}")


def lattice_law_residuals(a: Aggregator, b: Aggregator, c: Aggregator, m: int = 33) -> dict[str, float]:
    """Max pointwise residuals of absorption and distributivity on an m x m ladder."""
    x = np.linspace(0.0, 1.0, m)
    U, V = np.meshgrid(x, x, indexing="ij")

    def join(p, q):
        return agg_extrema(p, q, "join")

    def meet(p, q):
        return agg_extrema(p, q, "meet")

    def res(p, q):
        return float(np.max(np.abs(np.asarray(p(U, V)) - np.asarray(q(U, V)))))

    return {
        "absorption_join": res(join(a, meet(a, b)), a),
        "absorption_meet": res(meet(a, join(a, b)), a),
        "distributive_meet": res(meet(a, join(b, c)), join(meet(a, b), meet(a, c))),
        "distributive_join": res(join(a, meet(b, c)), meet(join(a, b), join(a, c))),
    }
