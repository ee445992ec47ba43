"""Command-line front end.

Exit codes: 0 when every asserted check passes, 1 when a violation is
found (witnesses in the report), 2 on malformed input.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path
from typing import Any, Callable

from . import agg, classes, psub, scenario, sets, tau
from .grid import to_csv
from .report import VERSION, FormulaError, InputError, jsonable

EXIT_OK, EXIT_VIOLATION, EXIT_INPUT = 0, 1, 2
INF = float("inf")

# lambda values swept per family; the rows listed in MANDATORY must pass
CONFORMANCE_LAMBDAS: dict[str, tuple[float, ...]] = {
    "aa": (0.0, 1.0, 2.0),
    "dombi": (0.0, 1.0, 2.0),
    "frank": (0.5, 1.0, 2.0, INF),
    "hamacher": (0.0, 2.0, INF),
    "yager": (0.0, 1.0, 2.0),
    "sw": (-1.0, 0.0, 1.0, INF),
}
MANDATORY = {("frank", 1.0), ("frank", INF), ("aa", 0.0), ("aa", 1.0), ("yager", 1.0),
             ("sw", 0.0), ("sw", INF)}


class Context:
    def __init__(self, args: argparse.Namespace):
        self.args = args
        self.sc: dict[str, Any] = scenario.load(args.scenario) if args.scenario else {}
        self.grid = scenario.make_grid(self.sc, args.xmax, args.grid_n)
        tol = args.tol if args.tol is not None else self.sc.get("tol")
        self.tol = None if tol is None else scenario.number(tol, "tol")
        self.seed = args.seed if args.seed is not None else int(self.sc.get("seed", 0))

    def gamma(self) -> psub.ProbSubmeasure:
        return scenario.build_gamma(self.sc, self.grid)

    def L(self, key: str = "L"):
        return scenario.pseudo_addition(self.sc.get(key))

    def A(self, key: str = "A"):
        return scenario.aggregator(self.sc.get(key))

    def descriptor(self, key: str) -> classes.ThetaDescriptor:
        d = scenario._need(self.sc, key)
        return classes.ThetaDescriptor(scenario.pseudo_addition(d.get("L")), scenario.aggregator(d.get("A")))


def _csv_dir(args) -> Path | None:
    if not args.csv:
        return None
    p = Path(args.csv)
    p.mkdir(parents=True, exist_ok=True)
    return p


def _set_filename(key: str) -> str:
    return "set_" + (key.replace(",", "_") if key else "empty") + ".csv"


# -- subcommands -------------------------------------------------------------------

def cmd_check(ctx: Context) -> tuple[int, dict]:
    gm = ctx.gamma()
    rep = psub.check_axioms(gm, ctx.L(), ctx.A(), grid=ctx.grid, tol=ctx.tol,
                            probes=ctx.sc.get("probes", ()), seed=ctx.seed)
    return (EXIT_OK if rep.passed else EXIT_VIOLATION), rep.to_dict()


def cmd_construct(ctx: Context) -> tuple[int, dict]:
    gm = ctx.gamma()
    out = _csv_dir(ctx.args)
    files = {}
    for m in gm.ring:
        key = gm.ring.key(m)
        if out is not None:
            name = _set_filename(key)
            to_csv(gm[m], ctx.grid, out / name)
            files[key] = name
    return EXIT_OK, {
        "gamma": gm.label,
        "sets": {gm.ring.key(m): gm[m].label for m in gm.ring},
        "flagged": [gm.ring.key(m) for m in gm.flagged],
        "notes": list(gm.notes),
        "csv": files,
    }


def _gen_spec(ctx: Context):
    return scenario.generator(ctx.sc.get("t", "linear"))


def cmd_extract(ctx: Context) -> tuple[int, dict]:
    gm = ctx.gamma()
    t = _gen_spec(ctx)
    z_max = scenario.number(ctx.sc.get("z_max", psub.Z_MAX), "z_max")
    e = psub.extract_numerical(gm, t, z_max)
    rep = sets.check_numerical(e, tol=ctx.tol if ctx.tol is not None else 1e-9)
    body = rep.to_dict()
    body["table"] = {gm.ring.key(m): e[m] for m in gm.ring}
    body["notes"] = list(body["notes"]) + list(e.notes)
    return (EXIT_OK if rep.passed else EXIT_VIOLATION), body


def cmd_classify(ctx: Context) -> tuple[int, dict]:
    A = ctx.A()
    rep = agg.classify(A)
    body = rep.to_dict()
    body["claimed_class"] = A.claimed_class
    ok = rep.verdicts.get(A.claimed_class, True)
    return (EXIT_OK if ok else EXIT_VIOLATION), body


def cmd_tau(ctx: Context) -> tuple[int, dict]:
    G = scenario.ddf(scenario._need(ctx.sc, "G"))
    H = scenario.ddf(scenario._need(ctx.sc, "H"))
    spec = tau.TriangleSpec(ctx.L(), ctx.A())
    res = tau.tau_conv(spec, G, H, ctx.grid)
    out = _csv_dir(ctx.args)
    if out is not None:
        to_csv(res, ctx.grid, out / "tau.csv")
    return EXIT_OK, {"spec": spec.label, "G": G.label, "H": H.label,
                     "notes": list(res.notes), "values": res.values,
                     "knots": ctx.grid.knots}


def cmd_order(ctx: Context) -> tuple[int, dict]:
    d1, d2 = ctx.descriptor("d1"), ctx.descriptor("d2")
    a, b = classes.theta_leq(d1, d2), classes.theta_leq(d2, d1)
    return EXIT_OK, {"d1": d1.label, "d2": d2.label,
                     "d1_leq_d2": a.ok, "d2_leq_d1": b.ok,
                     "witnesses": {"d1_leq_d2": a.witness, "d2_leq_d1": b.witness}}


def cmd_lattice(ctx: Context) -> tuple[int, dict]:
    d1, d2 = ctx.descriptor("d1"), ctx.descriptor("d2")
    body: dict[str, Any] = {"d1": d1.label, "d2": d2.label}
    f1 = agg.classify(d1.A).verdicts
    f2 = agg.classify(d2.A).verdicts
    ok = True
    for mode in ("join", "meet"):
        d = classes.theta_lattice(d1, d2, mode)
        flags = agg.classify(d.A).verdicts
        kept = flags["semicopula"] or not (f1["semicopula"] and f2["semicopula"])
        ok &= kept
        body[mode] = {"descriptor": d.label, "flags": flags, "semicopula_kept": kept}
    body["verdicts"] = {"semicopula_kept": ok}
    return (EXIT_OK if ok else EXIT_VIOLATION), body


def cmd_rho(ctx: Context) -> tuple[int, dict]:
    rep = psub.check_rho(ctx.gamma(), ctx.L(), ctx.A(), grid=ctx.grid, tol=ctx.tol)
    return (EXIT_OK if rep.passed else EXIT_VIOLATION), rep.to_dict()


def cmd_neighborhood(ctx: Context) -> tuple[int, dict]:
    gm = ctx.gamma()
    eps = scenario.number(scenario._need(ctx.sc, "epsilon"), "epsilon")
    delta = scenario.number(scenario._need(ctx.sc, "delta"), "delta")
    members = psub.neighborhood(gm, eps, delta)
    return EXIT_OK, {"gamma": gm.label, "epsilon": eps, "delta": delta,
                     "members": [gm.ring.key(m) for m in members]}


def conformance(grid, tol=None, seed: int = 0, size: int = 4) -> dict:
    """Sweep every family row against (K_1, family t-norm) on powerset(size)."""
    r = sets.powerset(sets.Universe.of_size(size))
    eta = sets.cardinality(r)
    L = scenario.pseudo_addition("K_1")
    rows = []
    ok = True
    for fam, lams in CONFORMANCE_LAMBDAS.items():
        for lam in lams:
            gm = psub.table1(fam, lam, eta)
            rep = psub.check_axioms(gm, L, agg.make_family(fam, lam), grid=grid, tol=tol, seed=seed)
            mandatory = (fam, lam) in MANDATORY
            ok &= rep.passed or not mandatory
            rows.append({"family": fam, "lambda": lam, "mandatory": mandatory,
                         "passed": rep.passed, "verdicts": rep.verdicts,
                         "witnesses": rep.witnesses[:5], "max_violation": rep.metrics["max_violation"]})
    return {"rows": rows, "verdicts": {"mandatory_rows": ok}, "params": {
        "universe_size": size, "eta": "cardinality", "L": L.label, "grid_n": grid.n,
        "x_max": grid.x_max, "seed": seed}}


def cmd_conformance(ctx: Context) -> tuple[int, dict]:
    size = int(ctx.sc.get("universe", 4)) if isinstance(ctx.sc.get("universe", 4), int) else 4
    body = conformance(ctx.grid, ctx.tol, ctx.seed, size)
    return (EXIT_OK if body["verdicts"]["mandatory_rows"] else EXIT_VIOLATION), body


COMMANDS: dict[str, Callable[[Context], tuple[int, dict]]] = {
    "check": cmd_check,
    "construct": cmd_construct,
    "extract": cmd_extract,
    "classify": cmd_classify,
    "tau": cmd_tau,
    "order": cmd_order,
    "lattice": cmd_lattice,
    "rho": cmd_rho,
    "neighborhood": cmd_neighborhood,
    "conformance": cmd_conformance,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="probsub", description="Probabilistic submeasure checker")
    p.add_argument("--version", action="version", version=VERSION)
    sub = p.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        s = sub.add_parser(name)
        s.add_argument("--scenario", help="scenario JSON file")
        s.add_argument("--grid-n", type=int, default=None, help="grid intervals (default 256)")
        s.add_argument("--xmax", type=float, default=None, help="grid upper end (default 10)")
        s.add_argument("--tol", type=float, default=None)
        s.add_argument("--seed", type=int, default=None, help="off-knot sampling seed (default 0)")
        s.add_argument("--out", help="write the JSON report here instead of stdout")
        s.add_argument("--csv", help="directory for CSV exports")
        s.add_argument("--timing", action="store_true", help="include wall time (breaks byte-identity)")
    return p


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    start = time.perf_counter()
    try:
        ctx = Context(args)
        if args.command not in ("conformance", "classify") and not ctx.sc:
            raise InputError(f"{args.command} needs --scenario")
        code, body = COMMANDS[args.command](ctx)
    except (InputError, FormulaError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    report = {
        "subcommand": args.command,
        "inputs": {"scenario": ctx.sc, "grid_n": ctx.grid.n, "x_max": ctx.grid.x_max,
                   "tol": ctx.tol, "seed": ctx.seed},
        "result": body,
        "exit_code": code,
        "version": VERSION,
    }
    if args.timing:
        report["timing_s"] = round(time.perf_counter() - start, 6)
    text = json.dumps(jsonable(report), sort_keys=True, indent=2) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return code


def main() -> None:
    sys.exit(run())


__all__ = ["run", "main", "conformance", "CONFORMANCE_LAMBDAS", "MANDATORY"]
