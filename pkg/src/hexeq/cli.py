"""Command-line entry point: ``hexeq check ...``, ``hexeq evolve``, ``hexeq list``.

Every run writes a JSON report (atomically) and prints one summary line.
Exit status: 0 all checks pass, 1 some check failed, 2 bad configuration.
"""
from __future__ import annotations

import argparse
import os
import sys

from . import checks, hexsys, lattice, legs, polytopes
from .catalog import CORRESPONDENCE, all_specs, parse_spec
from .errors import ConfigError, HexeqError, IllegalCombo, IllegalPair, PatternTooSmall, UnknownFamily, UnknownRow
from .report import ConsistencyReport

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2
OUTPUT_ENV = "HEXEQ_OUTPUT_DIR"
CONFIG_ERRORS = (ConfigError, UnknownFamily, UnknownRow, IllegalPair, IllegalCombo, PatternTooSmall)


def _output_path(name: str, given: str | None) -> str:
    if given:
        return given
    return os.path.join(os.environ.get(OUTPUT_ENV, "."), name)


def _spec_text(family: str, flags: str | None) -> str:
    return f"{family}:{flags}" if flags else family


def _system(args) -> hexsys.HexSystem:
    spec = parse_spec(_spec_text(args.family, args.flags))
    if spec.kind == "A":
        if spec.domain == "elliptic":
            return hexsys.elliptic_system(spec, args.seed)
        return hexsys.HexSystem.type_a(spec)
    if spec.kind != "C":
        raise ConfigError(f"{spec.id} is not a face-centered family")
    if args.cbar:
        return hexsys.HexSystem.type_c(spec, parse_spec(args.cbar))
    for c, cb in hexsys.c_pairs():
        if c == spec:
            return hexsys.HexSystem.type_c(c, cb)
        if cb == spec:
            return hexsys.HexSystem.type_c(cb, c)
    raise IllegalPair(f"{spec.label} is in no listed C-pair")


def _systems(args) -> list:
    if args.family:
        return [_system(args)]
    out = hexsys.all_systems()
    out.append(hexsys.elliptic_system("A4", args.seed))
    return out


# ---------------------------------------------------------------------------
# commands

def cmd_cah(args) -> ConsistencyReport:
    report = ConsistencyReport("check cah", {"family": args.family, "flags": args.flags, "cbar": args.cbar,
                                            "trials": args.trials, "seed": args.seed, "tol": args.tol})
    for system in _systems(args):
        trials = args.trials
        if system.domain == "elliptic" and not args.family:
            trials = min(trials, 25)
        hexsys.cah_verify(system, trials=trials, seed=args.seed, tol=args.tol, report=report)
    return report


def cmd_symmetry(args) -> ConsistencyReport:
    report = ConsistencyReport("check symmetry", {"family": args.family, "flags": args.flags,
                                                 "samples": args.trials, "seed": args.seed})
    if args.family:
        spec = parse_spec(_spec_text(args.family, args.flags))
        specs = [spec]
        systems = [_system(args)] if spec.kind in "AC" else []
    else:
        specs = all_specs()
        systems = hexsys.all_systems()
    checks.symmetry_suite(specs, samples=args.trials, seed=args.seed, tol=args.tol, report=report)
    for system in systems:
        if system.domain != "elliptic":
            hexsys.hex_symmetry_check(system, seed=args.seed, samples=args.trials, report=report)
    return report


def cmd_correspondence(args) -> ConsistencyReport:
    rows = [(f, q) for f, q in CORRESPONDENCE]
    if args.family:
        face = parse_spec(_spec_text(args.family, args.flags))
        rows = [(f, q) for f, q in rows if parse_spec(f) == face]
        if not rows:
            raise ConfigError(f"{face.label} has no listed ABS partner")
    report = ConsistencyReport("check correspondence", {"family": args.family, "flags": args.flags,
                                                       "samples": args.trials, "seed": args.seed})
    return checks.abs_correspondence_check(rows, samples=args.trials, seed=args.seed, report=report)


def cmd_legs(args) -> ConsistencyReport:
    return legs.legs_suite(samples=args.trials, seed=args.seed, tol=args.tol)


def cmd_polytope(args) -> ConsistencyReport:
    shapes = [args.shape] if args.shape else ["cahp1", "cahp2", "caed1", "caed2", "cato", "prism-a", "ca66d"]
    report = ConsistencyReport("check polytope", {"shape": args.shape, "combo": args.combo,
                                                 "trials": args.trials, "seed": args.seed,
                                                 "control": args.control})
    for shape in shapes:
        scenario = polytopes.load_scenario(shape)
        if args.combo:
            rows = [polytopes.combo_table(args.combo)]
        else:
            rows = polytopes.TYPE_C_ROWS if scenario.kind == "C" else polytopes.TYPE_A_ROWS
        for row in rows:
            if args.control:
                polytopes.negative_control(scenario, row, trials=args.trials, seed=args.seed, report=report)
            else:
                polytopes.run_polytope(scenario, row, trials=args.trials, seed=args.seed, report=report)
    return report


def cmd_evolve(args) -> ConsistencyReport:
    system = _system(args)
    ivp = lattice.IvpSpec(args.ivp, args.rows, args.cols, args.seed)
    lat = lattice.init_lattice(ivp, system)
    report = ConsistencyReport("evolve", {"family": args.family, "flags": args.flags, "cbar": args.cbar,
                                         "ivp": args.ivp, "rows": args.rows, "cols": args.cols,
                                         "seed": args.seed, "system": system.name})
    try:
        done, report, face_ok = lattice.evolve(lat, system, report)
    except HexeqError as exc:
        report.record_error("lattice:evolution", str(exc), {"type": type(exc).__name__})
        return report
    out = _output_path("lattice.json", args.out)
    csv_path = args.csv or (os.path.splitext(out)[0] + ".csv")
    lattice.write_lattice(done, out, system, face_ok, csv_path)
    report.note("lattice_file", out)
    report.note("lattice_csv", csv_path)
    return report


def cmd_list(args) -> int:
    what = args.what
    if what in ("families", "all"):
        print("families:")
        for spec in all_specs():
            print(f"  {spec.id:16s} {spec.label:16s} {spec.domain}")
    if what in ("systems", "all"):
        print("systems:")
        for system in hexsys.all_systems() + [hexsys.HexSystem.type_a("A4")]:
            print(f"  {system.name}")
    if what in ("combos", "all"):
        print("combos:")
        for i, row in enumerate(polytopes.ALL_ROWS):
            d = row.to_dict()
            cols = "  ".join(f"{k}={v}" for k, v in d.items() if k != "name")
            print(f"  {i:2d} {row.name:14s} {cols}")
    if what in ("scenarios", "all"):
        print("scenarios:")
        for name in polytopes.scenario_names():
            sc = polytopes.load_scenario(name)
            print(f"  {name:8s} {sc.shape:8s} type-{sc.kind}  {len(sc.vertices)} vertices, "
                  f"{len(sc.unknowns)} unknowns, {len(sc.checks())} checks")
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser

def _common(p, trials: int, tol: float = 1e-8):
    p.add_argument("--trials", "--samples", dest="trials", type=int, default=trials)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float, default=tol, help="tolerance for numeric (elliptic, legs) checks")
    p.add_argument("--report", help="report path (default: $HEXEQ_OUTPUT_DIR/report-<command>.json)")


def _family(p, required: bool = False):
    p.add_argument("--family", required=required, help="equation family, e.g. A2, C3")
    p.add_argument("--flags", help="family flags, e.g. 1,0 or 1/2,1/2,0")
    p.add_argument("--cbar", help="second equation of a type-C pair (default: its listed partner)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hexeq", description="Verify hex equation systems and their consistency.")
    sub = parser.add_subparsers(dest="command", required=True)

    check = sub.add_parser("check", help="run a verification suite")
    suites = check.add_subparsers(dest="suite", required=True)
    p = suites.add_parser("cah", help="consistency around a hexagon")
    _family(p)
    _common(p, 100)
    p = suites.add_parser("symmetry", help="quad, face-centered and hexagon symmetries")
    _family(p)
    _common(p, 50)
    p = suites.add_parser("correspondence", help="face-centered to ABS correspondence")
    _family(p)
    _common(p, 50)
    p = suites.add_parser("legs", help="three-leg, four-leg and vertex-star checks")
    _common(p, 50, tol=1e-9)
    p = suites.add_parser("polytope", help="consistency on polytopes")
    p.add_argument("--shape", choices=polytopes.scenario_names())
    p.add_argument("--combo", help="combination row: index, name (C1_0) or label (C2(1;0;1))")
    p.add_argument("--control", action="store_true", help="run with Q and Q* exchanged; checks must fail")
    _common(p, 50)

    p = sub.add_parser("evolve", help="evolve a lattice initial value problem")
    _family(p, required=True)
    p.add_argument("--ivp", default="staircase", choices=[k for k in lattice.PATTERNS if k != "explicit"])
    p.add_argument("--rows", type=int, default=8)
    p.add_argument("--cols", type=int, default=8)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="lattice JSON path (default: $HEXEQ_OUTPUT_DIR/lattice.json)")
    p.add_argument("--csv", help="lattice CSV path (default: next to --out)")
    p.add_argument("--report", help="report path")

    p = sub.add_parser("list", help="list families, systems, combos and scenarios")
    p.add_argument("what", nargs="?", default="all", choices=["all", "families", "systems", "combos", "scenarios"])
    return parser


COMMANDS = {
    "cah": cmd_cah,
    "symmetry": cmd_symmetry,
    "correspondence": cmd_correspondence,
    "legs": cmd_legs,
    "polytope": cmd_polytope,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "list":
        return cmd_list(args)
    try:
        if args.command == "evolve":
            if not (1 <= args.rows <= lattice.MAX_SIZE and 1 <= args.cols <= lattice.MAX_SIZE):
                raise ConfigError(f"lattice size must be within 1..{lattice.MAX_SIZE}")
            report = cmd_evolve(args)
            name = "report-evolve.json"
        else:
            if args.trials < 1:
                raise ConfigError("--trials must be positive")
            report = COMMANDS[args.suite](args)
            name = f"report-{args.suite}.json"
    except CONFIG_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    report.finish()
    report.write(_output_path(name, args.report))
    print(report.summary_line())
    return EXIT_OK if report.ok else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
