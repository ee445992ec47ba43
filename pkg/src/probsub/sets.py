"""Finite universes, bitmask sets, rings of sets and numerical submeasures.

Sets are plain ``int`` bitmasks over universe positions.  Scenario files
key a set by its comma-joined sorted labels, ``""`` for the empty set.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, Sequence

from .report import InputError, Report

MAX_UNIVERSE = 16


@dataclass(frozen=True)
class Universe:
    labels: tuple[str, ...]

    def __post_init__(self) -> None:
        labels = tuple(str(x) for x in self.labels)
        if not 1 <= len(labels) <= MAX_UNIVERSE:
            raise InputError(f"universe size must be in 1..{MAX_UNIVERSE}")
        if len(set(labels)) != len(labels):
            raise InputError("universe labels must be distinct")
        if any("," in x or x == "" for x in labels):
            raise InputError("universe labels must be non-empty and comma-free")
        object.__setattr__(self, "labels", labels)

    @classmethod
    def of_size(cls, n: int) -> "Universe":
        return cls(tuple(f"w{i + 1}" for i in range(n)))

    @property
    def size(self) -> int:
        return len(self.labels)

    @property
    def full(self) -> int:
        return (1 << self.size) - 1

    def mask(self, labels: Iterable[str]) -> int:
        m = 0
        for lab in labels:
            try:
                m |= 1 << self.labels.index(lab)
            except ValueError:
                raise InputError(f"unknown element {lab!r}") from None
        return m

    def members(self, mask: int) -> list[str]:
        return [lab for i, lab in enumerate(self.labels) if mask >> i & 1]

    def key(self, mask: int) -> str:
        return ",".join(sorted(self.members(mask)))

    def parse_key(self, key: str) -> int:
        key = key.strip()
        return 0 if key == "" else self.mask(p.strip() for p in key.split(","))

    def check_mask(self, mask: int) -> int:
        if not 0 <= mask <= self.full:
            raise InputError(f"mask {mask} outside universe of size {self.size}")
        return mask


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def subset(a: int, b: int) -> bool:
    return a & ~b == 0


@dataclass(frozen=True)
class Ring:
    universe: Universe
    members: tuple[int, ...]

    def __post_init__(self) -> None:
        ms = tuple(sorted(set(int(m) for m in self.members)))
        for m in ms:
            self.universe.check_mask(m)
        if 0 not in ms:
            raise InputError("a ring must contain the empty set")
        s = set(ms)
        is_powerset = len(ms) == self.universe.full + 1
        for a in () if is_powerset else ms:
            for b in ms:
                if a | b not in s or a & ~b not in s:
                    raise InputError("family is not closed under union and difference")
        object.__setattr__(self, "members", ms)

    def __contains__(self, mask: int) -> bool:
        return mask in self._set

    @cached_property
    def _set(self) -> frozenset[int]:
        return frozenset(self.members)

    def __iter__(self):
        return iter(self.members)

    def __len__(self) -> int:
        return len(self.members)

    def key(self, mask: int) -> str:
        return self.universe.key(mask)


def powerset(u: Universe) -> Ring:
    return Ring(u, tuple(range(u.full + 1)))


def generate_ring(u: Universe, generators: Iterable[int]) -> Ring:
    """Least family containing the generators and the empty set, closed
    under union and difference (fixed-point iteration)."""
    fam = {0} | {u.check_mask(int(g)) for g in generators}
    while True:
        new = {a | b for a in fam for b in fam} | {a & ~b for a in fam for b in fam}
        if new <= fam:
            return Ring(u, tuple(fam))
        fam |= new


@dataclass(frozen=True)
class NumericalSubmeasure:
    ring: Ring
    values: Mapping[int, float]
    label: str = "eta"
    notes: tuple[str, ...] = field(default=())

    def __post_init__(self) -> None:
        vals = {int(k): float(v) for k, v in self.values.items()}
        missing = [m for m in self.ring.members if m not in vals]
        if missing:
            raise InputError(f"{self.label}: no value for {self.ring.key(missing[0])!r}")
        for m in self.ring.members:
            v = vals[m]
            if not (v >= 0 and v < float("inf")):
                raise InputError(f"{self.label}: value for {self.ring.key(m)!r} must be finite and >= 0")
        object.__setattr__(self, "values", {m: vals[m] for m in self.ring.members})

    def __getitem__(self, mask: int) -> float:
        return self.values[mask]


def from_table(ring: Ring, table: Mapping[str, float], label: str = "eta") -> NumericalSubmeasure:
    """Numerical submeasure from a label-keyed table."""
    vals: dict[int, float] = {}
    for key, v in table.items():
        m = ring.universe.parse_key(key)
        if m not in ring:
            raise InputError(f"set {key!r} is not a ring member")
        vals[m] = float(v)
    return NumericalSubmeasure(ring, vals, label)


def cardinality(ring: Ring, scale: float = 1.0) -> NumericalSubmeasure:
    return NumericalSubmeasure(ring, {m: scale * popcount(m) for m in ring}, "cardinality")


def weighted(ring: Ring, weights: Sequence[float], transform=None, label: str = "weighted") -> NumericalSubmeasure:
    """eta(E) = transform(sum of weights over E); ``transform`` should be
    non-decreasing, subadditive and vanish at 0 (e.g. sqrt)."""
    vals = {}
    for m in ring:
        s = sum(w for i, w in enumerate(weights) if m >> i & 1)
        vals[m] = float(transform(s)) if transform else s
    return NumericalSubmeasure(ring, vals, label)


def check_numerical(eta: NumericalSubmeasure, ring: Ring | None = None, tol: float = 1e-12) -> Report:
    """Exhaustive check of eta(empty) = 0, monotonicity and subadditivity."""
    ring = eta.ring if ring is None else ring
    for m in ring:
        if m not in eta.values:
            raise InputError(f"{eta.label}: no value for {ring.key(m)!r}")
    rep = Report("check_numerical", params={"eta": eta.label, "tol": tol, "ring_size": len(ring)})
    v = eta.values

    rep.verdicts["empty"] = abs(v[0]) <= tol
    if not rep.verdicts["empty"]:
        rep.witnesses.append({"verdict": "empty", "E": "", "value": v[0]})

    worst_mono = None
    worst_sub = None
    for a in ring:
        for b in ring:
            if subset(a, b) and v[a] > v[b] + tol:
                gap = v[a] - v[b]
                if worst_mono is None or gap > worst_mono["violation"]:
                    worst_mono = {"verdict": "monotone", "E": ring.key(a), "F": ring.key(b),
                                  "lhs": v[a], "rhs": v[b], "violation": gap}
            u = a | b
            if v[u] > v[a] + v[b] + tol:
                gap = v[u] - v[a] - v[b]
                if worst_sub is None or gap > worst_sub["violation"]:
                    worst_sub = {"verdict": "subadditive", "E": ring.key(a), "F": ring.key(b),
                                 "lhs": v[u], "rhs": v[a] + v[b], "violation": gap}
    rep.verdicts["monotone"] = worst_mono is None
    rep.verdicts["subadditive"] = worst_sub is None
    rep.witnesses.extend(w for w in (worst_mono, worst_sub) if w is not None)
    return rep
