"""Command-line front end: ``solenoid-lab <subcommand> ...`` prints one JSON report.

Exit codes: 0 success, 2 precondition violation, 1 numeric failure,
64 unknown subcommand.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Any

import numpy as np

from . import __version__, harmonic, meshes, profinite, rank_one, ricci, solv3, suspension, tower

SUBCOMMANDS = ("profinite", "classify-1d", "tower", "odometer", "solv3", "ricci-flow", "harmonic")
EX_USAGE = 64


class PreconditionError(ValueError):
    pass


@dataclass
class Report:
    subcommand: str
    inputs: dict
    values: dict = field(default_factory=dict)
    provenance: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        prov = {"version": __version__, "seed": None, "schedule": None}
        prov.update(self.provenance)
        return {"subcommand": self.subcommand, "inputs": self.inputs, **self.values, "provenance": prov}

    @classmethod
    def from_json(cls, data: dict) -> "Report":
        data = dict(data)
        sub, inputs, prov = data.pop("subcommand"), data.pop("inputs"), data.pop("provenance")
        return cls(sub, inputs, data, prov)

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def report_schema() -> dict:
    return json.loads(resources.files("solenoid_lab").joinpath("schemas/report.schema.json").read_text())


def _frac(x: Fraction) -> str:
    return str(Fraction(x))


def _ints(text: str) -> list[int]:
    return [int(x) for x in text.replace(" ", "").split(",") if x]


def _chain(args) -> profinite.ModulusChain:
    if args.moduli:
        return profinite.ModulusChain(tuple(_ints(args.moduli)))
    if args.chain == "factorial":
        return profinite.factorial_chain(args.depth)
    return profinite.geometric_chain(int(args.chain), args.depth)


# --- subcommands ------------------------------------------------------------------


def cmd_profinite(args) -> Report:
    chain = _chain(args)
    rep = Report("profinite", {"moduli": list(chain.moduli)})
    out = rep.values
    if args.embed is not None:
        out["element"] = profinite.embed_integer(args.embed, chain).to_json()
    if args.add:
        a, b = args.add
        x = profinite.embed_integer(a, chain) + profinite.embed_integer(b, chain)
        out["element"] = x.to_json()
    if args.mul:
        a, b = args.mul
        x = profinite.embed_integer(a, chain) * profinite.embed_integer(b, chain)
        out["element"] = x.to_json()
    if args.component:
        a, p, e = args.component
        try:
            out["component"] = profinite.component_p(profinite.embed_integer(a, chain), p, e)
        except profinite.InsufficientDepth as exc:
            raise PreconditionError(str(exc)) from exc
    if args.haar:
        n, r = args.haar
        out["measure"] = _frac(profinite.haar_measure(profinite.ClopenCylinder(n, r)))
    if args.dense is not None:
        out["dense"] = profinite.translation_orbit_is_dense(chain, args.dense)
    if not out:
        raise PreconditionError("nothing to do: pass --embed, --add, --mul, --component, --haar or --dense")
    return rep


def _baer(text: str) -> rank_one.BaerType:
    return rank_one.BaerType.from_json(json.loads(text))


def cmd_classify(args) -> Report:
    if args.tower:
        t = rank_one.SolenoidTower1D(tuple(args.tower), repeat=args.repeat)
        ty = rank_one.type_from_tower(t)
        rep = Report("classify-1d", {"tower": args.tower, "repeat": args.repeat})
    elif args.type:
        ty = _baer(args.type)
        rep = Report("classify-1d", {"type": ty.to_json()})
        if not ty.is_zero():
            t = rank_one.tower_from_type(ty)
            rep.values["tower"] = {"prefix": list(t.prefix), "degrees": list(t.degrees), "repeat": t.repeat}
    else:
        raise PreconditionError("pass --tower or --type")
    rep.values["type"] = ty.to_json()
    rep.values["dense"] = rank_one.is_dense_in_Q(ty)
    if args.isomorphic:
        other = _baer(args.isomorphic)
        rep.inputs["other"] = other.to_json()
        rep.values["verdict"] = rank_one.isomorphic(ty, other)
    if args.contains:
        rep.inputs["q"] = args.contains
        rep.values["contains"] = rank_one.contains(rank_one.RationalSubgroup(ty), Fraction(args.contains))
    return rep


def _load_tower(source: str) -> tower.TorusTower:
    path = Path(source)
    data = json.loads(path.read_text()) if path.exists() else json.loads(source)
    return tower.TorusTower.from_json(data)


def cmd_tower(args) -> Report:
    t = _load_tower(args.file)
    rep = Report("tower", {"tower": t.to_json()})
    out = rep.values
    if args.fiber_group is not None:
        out["fiber_group"] = tower.fiber_group(t, args.fiber_group)
    if args.holonomy:
        loop, k = args.holonomy
        out["holonomy"] = tower.holonomy(t, _ints(loop), int(k))
    if args.dual:
        q = [Fraction(x) for x in args.dual.split(",")]
        res = tower.dual_membership(t, q, args.max_depth)
        out["dual"] = {"depth": res.depth, "searched": res.searched, "never": res.never}
    if args.product:
        try:
            out["product"] = [ty.to_json() for ty in tower.as_product_of_1d(t)]
        except tower.NotDiagonal:
            out["product"] = "NotDiagonal"
    if args.dominates:
        other = _load_tower(args.dominates)
        rep.inputs["other"] = other.to_json()
        out["verdict"] = tower.dominates(t, other, args.depth)
        out["valid_to_depth"] = args.depth
    if args.shift:
        out["shifted"] = tower.shift(t).to_json()
    if not out:
        raise PreconditionError("nothing to do")
    return rep


def cmd_odometer(args) -> Report:
    chain = _chain(args)
    o = suspension.Odometer(chain)
    rep = Report("odometer", {"moduli": list(chain.moduli), "kind": chain.kind})
    if args.first_return:
        x = profinite.ProfiniteInt(chain, tuple(_ints(args.first_return)))
        rep.values["element"] = suspension.first_return(o, x).to_json()
    if args.orbit is not None:
        rep.values["orbit_covers_level"] = suspension.orbit_covers_level(o, args.orbit)
    if args.dual_type or not rep.values:
        rep.values["type"] = suspension.matches_dual_type(o).to_json()
    return rep


def cmd_solv3(args) -> Report:
    rep = Report("solv3", {})
    out = rep.values
    if args.invariant:
        A = solv3.HypMatrix.of(args.invariant)
        rep.inputs["A"] = str(A)
        out["field"] = solv3.field_invariant(A).to_json()
        out["lambda"] = str(solv3.eigen_data(A).lam)
    elif args.from_field is not None:
        rep.inputs["d"] = args.from_field
        F = solv3.QuadField(args.from_field)
        eps = solv3.fundamental_unit(F)
        M = solv3.matrix_from_field(F)
        out["field"] = F.to_json()
        out["unit"] = str(eps)
        out["unit_norm"] = int(eps.norm())
        out["matrix"] = str(M)
        out["lambda"] = str(solv3.eigen_data(M).lam)
    elif args.isometric or args.commensurable:
        a_txt, b_txt = args.isometric or args.commensurable
        A, B = solv3.HypMatrix.of(a_txt), solv3.HypMatrix.of(b_txt)
        rep.inputs.update({"A": str(A), "B": str(B)})
        fa, fb = solv3.field_invariant(A), solv3.field_invariant(B)
        if args.isometric:
            rep.inputs["relation"] = "isometric"
            out["verdict"] = solv3.isometric_bundles(A, B)
        else:
            rep.inputs["relation"] = "commensurable"
            out["verdict"] = solv3.commensurable_bundles(A, B)
        if fa == fb:
            out["field"] = fa.to_json()
        else:
            out["fields"] = [fa.to_json(), fb.to_json()]
        out["lambda"] = str(solv3.eigen_data(A).lam)
    else:
        raise PreconditionError("pass --invariant, --from-field, --isometric or --commensurable")
    return rep


BUILTIN_MESHES = {
    "genus2": lambda: meshes.genus2_mesh(6),
    "genus2-one-vertex": meshes.one_vertex_genus2,
    "torus": lambda: meshes.torus_mesh(6),
}


def cmd_ricci(args) -> Report:
    mesh = BUILTIN_MESHES[args.mesh]() if args.mesh in BUILTIN_MESHES else meshes.load_mesh(args.mesh)
    if args.c == "auto":
        c = ricci.target_curvature(mesh)
    else:
        c = float(args.c)
    base = ricci.perturbed_metric(mesh, args.perturb, args.seed)
    # fiber k gets an extra perturbation of size k * eps, shrinking transversally
    rng = np.random.default_rng(args.seed + 1)
    direction = rng.uniform(-1, 1, mesh.n_vertices)
    fibers = tuple(
        ricci.CirclePackingMetric(base.u + args.fiber_spread * min(k, args.fibers - k) * direction)
        for k in range(args.fibers)
    )
    fam = ricci.FiberFamily(args.fibers, fibers)
    _, report = ricci.laminated_flow(mesh, fam, c, args.tol, args.max_steps, args.dt)
    rep = Report(
        "ricci-flow",
        {"mesh": args.mesh, "V": mesh.n_vertices, "chi": mesh.euler_characteristic, "c": c, "fibers": args.fibers},
        provenance={"seed": args.seed, "schedule": {"dt": args.dt, "max_steps": args.max_steps, "tol": args.tol}},
    )
    rep.values.update(report.summary())
    rep.values["total_curvature"] = {str(k): tr.rows[-1][3] for k, tr in report.traces.items()}
    if args.out:
        out = Path(args.out)
        if args.fibers == 1:
            report.traces[0].write_csv(out)
        else:
            for k, tr in report.traces.items():
                tr.write_csv(out.with_name(f"{out.stem}.fiber{k}{out.suffix or '.csv'}"))
        rep.values["trace_path"] = str(out)
    return rep


def cmd_harmonic(args) -> Report:
    rng = np.random.default_rng(args.seed)
    if args.graph:
        G = harmonic.load_graph(args.graph)
    else:
        G = harmonic.random_instance(args.random, rng)
    f0 = harmonic.random_map(G, rng)
    res = harmonic.flow_to_harmonic(G, f0, args.tol, args.max_steps)
    rep = Report(
        "harmonic",
        {"graph": args.graph or f"random:{args.random}", "vertices": G.n_vertices},
        provenance={"seed": args.seed, "schedule": {"tol": args.tol, "max_steps": args.max_steps}},
    )
    rep.values.update(
        {
            "steps": res.steps,
            "energy_initial": res.energies[0],
            "energy_final": res.energies[-1],
            "energy_monotone": bool(all(b <= a * (1 + harmonic.ENERGY_SLACK) for a, b in zip(res.energies, res.energies[1:]))),
            "map": [[z.real, z.imag] for z in res.map.points],
        }
    )
    return rep


# --- parser -----------------------------------------------------------------------------


def _chain_args(p):
    p.add_argument("--chain", default="factorial", help="'factorial' or an integer base for a geometric chain")
    p.add_argument("--depth", type=int, default=profinite.DEFAULT_DEPTH)
    p.add_argument("--moduli", help="explicit comma-separated divisibility chain")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="solenoid-lab", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("profinite", help="arithmetic in the profinite integers")
    _chain_args(p)
    p.add_argument("--embed", type=int)
    p.add_argument("--add", type=int, nargs=2)
    p.add_argument("--mul", type=int, nargs=2)
    p.add_argument("--component", type=int, nargs=3, metavar=("A", "P", "E"))
    p.add_argument("--haar", type=int, nargs=2, metavar=("MODULUS", "RESIDUE"))
    p.add_argument("--dense", type=int, metavar="T", help="is translation by T minimal at every level")
    p.set_defaults(func=cmd_profinite)

    p = sub.add_parser("classify-1d", help="Baer types of rank-one solenoids")
    p.add_argument("--tower", type=int, nargs="+")
    p.add_argument("--repeat", action="store_true")
    p.add_argument("--type", help='JSON like {"entries":[[2,"inf"]],"default":0}')
    p.add_argument("--isomorphic", metavar="TYPE_JSON")
    p.add_argument("--contains", metavar="P/Q")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("tower", help="covering towers of tori")
    p.add_argument("file", help="tower JSON file or literal")
    p.add_argument("--fiber-group", type=int, metavar="K")
    p.add_argument("--holonomy", nargs=2, metavar=("LOOP", "K"))
    p.add_argument("--dual", metavar="Q1,Q2,...")
    p.add_argument("--max-depth", type=int, default=10)
    p.add_argument("--product", action="store_true")
    p.add_argument("--dominates", metavar="OTHER")
    p.add_argument("--depth", type=int, default=4)
    p.add_argument("--shift", action="store_true")
    p.set_defaults(func=cmd_tower)

    p = sub.add_parser("odometer", help="odometer dynamics")
    _chain_args(p)
    p.add_argument("--first-return", metavar="R1,R2,...")
    p.add_argument("--orbit", type=int, metavar="K")
    p.add_argument("--dual-type", action="store_true")
    p.set_defaults(func=cmd_odometer)

    p = sub.add_parser("solv3", help="Sol torus bundles and quadratic fields")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--isometric", nargs=2, metavar=("A", "B"))
    g.add_argument("--commensurable", nargs=2, metavar=("A", "B"))
    g.add_argument("--from-field", type=int, metavar="D")
    g.add_argument("--invariant", metavar="A")
    p.set_defaults(func=cmd_solv3)

    p = sub.add_parser("ricci-flow", help="combinatorial Ricci flow over a fiber family")
    p.add_argument("--mesh", default="genus2", help=f"mesh JSON path or one of {sorted(BUILTIN_MESHES)}")
    p.add_argument("--fibers", type=int, default=1)
    p.add_argument("--fiber-spread", type=float, default=0.01)
    p.add_argument("--perturb", type=float, default=0.1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--c", default="auto")
    p.add_argument("--dt", type=float, default=0.1)
    p.add_argument("--max-steps", type=int, default=100_000)
    p.add_argument("--out", help="CSV trace path")
    p.set_defaults(func=cmd_ricci)

    p = sub.add_parser("harmonic", help="harmonic maps into the hyperbolic plane")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--graph", help="graph JSON path")
    src.add_argument("--random", type=int, metavar="N", help="random graph with N vertices")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--max-steps", type=int, default=100_000)
    p.set_defaults(func=cmd_harmonic)
    return parser


class _ArgError(Exception):
    pass


def run(argv: list[str] | None = None, stdout=None) -> int:
    stdout = sys.stdout if stdout is None else stdout
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    first = next((a for a in argv if not a.startswith("-")), None)
    if first not in SUBCOMMANDS and not any(a in ("-h", "--help", "--version") for a in argv):
        parser.print_usage(sys.stderr)
        return EX_USAGE

    def fail(message):
        raise _ArgError(message)

    for action in parser._subparsers._group_actions:  # type: ignore[union-attr]
        for sp in action.choices.values():
            sp.error = fail  # type: ignore[method-assign]
    try:
        args = parser.parse_args(argv)
    except _ArgError as exc:
        _emit(stdout, Report(first, {"argv": argv}, {"error": {"kind": "usage", "message": str(exc)}}))
        return 2
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        rep = args.func(args)
    except (harmonic.CentroidError, harmonic.HarmonicNonConvergence, ricci.NonConvergence,
            ricci.StiffConfiguration, ricci.FiberFailure) as exc:
        _emit(stdout, Report(args.subcommand, {"argv": argv}, {"error": {"kind": type(exc).__name__, "message": str(exc)}}))
        return 1
    except (ValueError, KeyError, IndexError, json.JSONDecodeError, FileNotFoundError) as exc:
        _emit(stdout, Report(args.subcommand, {"argv": argv}, {"error": {"kind": type(exc).__name__, "message": str(exc)}}))
        return 2
    _emit(stdout, rep)
    return 0


def _emit(stdout, rep: Report) -> None:
    stdout.write(rep.dumps() + "\n")


def main() -> None:
    sys.exit(run())
