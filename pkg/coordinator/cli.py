"""
Command-line front end.

    analyze <spec.json> [--report out.json] [--tol T] [--r-min A --r-max B --grid N] [--seed S] [--margin M]
    orbits <spec.json> --r0 1.0,2.0 --out orbits.csv [--steps-per-turn K] [--margin M]
    selftest [--quick]
    serve [--host H --port P]

Exit codes: 0 success, 1 I/O or input-document error, 2 system out of scope.
"""
import argparse
import csv
import io
import logging
import math
import os
import sys
import tempfile
from pathlib import Path
from typing import List, Optional, Sequence

from analysis.transforms import polar_equation
from coordinator.schema import AnalysisOptions, SystemSpec, load_spec
from dynamics.integrator import DOMAIN_MARGIN, ExitKind
from dynamics.return_map import sample_orbit
from scheduler import selftest
from scheduler.analysis_scheduler import AnalysisScheduler
from system.errors import DomainViolationAtStart, InvalidWeightedDegree, NotTwoComponents, SpecError
from system.vectorfield import QHSystem, radial_coefficients

logger = logging.getLogger(__name__)

EXIT_OK, EXIT_INPUT, EXIT_SCOPE = 0, 1, 2


def write_atomic(path: Path, text: str) -> None:
    """Write via a temporary file in the same directory, then rename over the target."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or Path("."), prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as f:
            f.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _read_spec(path: str) -> SystemSpec:
    return load_spec(Path(path).read_text(encoding="utf-8"))


def _float_list(text: str) -> List[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


# ---------- analyze ----------
def cmd_analyze(args: argparse.Namespace) -> int:
    spec = _read_spec(args.spec)
    flags = {"tol": args.tol, "r_min": args.r_min, "r_max": args.r_max, "grid_points": args.grid,
             "quad_tol": args.quad_tol, "seed": args.seed, "samples": args.samples, "margin": args.margin}
    options = AnalysisOptions().merged(spec.analysis, flags)
    report = AnalysisScheduler().dispatch(Path(args.spec).stem, spec, options)
    text = report.to_json() + "\n"
    if args.report:
        write_atomic(Path(args.report), text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


# ---------- orbits ----------
def orbit_rows(system: QHSystem, r0: float, steps_per_turn: int, tol: float,
               margin: float = DOMAIN_MARGIN) -> List[List[str]]:
    """theta,r,x,y,status rows of one orbit; (x, y) = (r^{p/(m−n)} cos θ, r^{q/(m−n)} sin θ)."""
    gap = system.m - system.n
    ex, ey = system.weight.p / gap, system.weight.q / gap

    def row(theta: float, r: float, status: str) -> List[str]:
        if r <= 0:
            return [repr(theta), repr(r), "", "", status]
        return [repr(theta), repr(r), repr(r ** ex * math.cos(theta)), repr(r ** ey * math.sin(theta)), status]

    ode = polar_equation(radial_coefficients(system))
    try:
        traj = sample_orbit(ode, r0, steps_per_turn, tol, margin)
    except DomainViolationAtStart as e:
        logger.warning("orbit r0=%g: %s", r0, e)
        return [row(0.0, r0, "DomainViolationAtStart")]
    rows = [row(float(t), float(r), "ok") for t, r in zip(traj.theta, traj.r)]
    if traj.exit.kind is not ExitKind.COMPLETED:
        rows.append(row(traj.exit.theta, traj.exit.r, traj.exit.kind.value))
    return rows


def cmd_orbits(args: argparse.Namespace) -> int:
    spec = _read_spec(args.spec)
    system = spec.to_system()
    opts = AnalysisOptions().merged(spec.analysis, {"tol": args.tol, "margin": args.margin})
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["theta", "r", "x", "y", "status"])
    for i, r0 in enumerate(args.r0):
        if i:
            buf.write("\n")
        writer.writerows(orbit_rows(system, r0, args.steps_per_turn, opts.tol, opts.margin))
    write_atomic(Path(args.out), buf.getvalue())
    return EXIT_OK


# ---------- selftest / serve ----------
def cmd_selftest(args: argparse.Namespace) -> int:
    results = selftest.run(quick=args.quick)
    for name, ok, detail in results:
        print(f"{'PASS' if ok else 'FAIL'} {name}: {detail}")
    return EXIT_OK if all(ok for _, ok, _ in results) else EXIT_INPUT


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn
    uvicorn.run("coordinator.server:app", host=args.host, port=args.port)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qhcycles", description="Limit cycles of X_n + X_m quasi-homogeneous systems")
    parser.add_argument("-v", "--verbose", action="count", default=0, help="-v info, -vv debug")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="run the full analysis and emit a JSON report")
    p.add_argument("spec")
    p.add_argument("--report")
    p.add_argument("--tol", type=float)
    p.add_argument("--r-min", dest="r_min", type=float)
    p.add_argument("--r-max", dest="r_max", type=float)
    p.add_argument("--grid", type=int)
    p.add_argument("--quad-tol", dest="quad_tol", type=float)
    p.add_argument("--seed", type=int)
    p.add_argument("--samples", type=int)
    p.add_argument("--margin", type=float)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("orbits", help="sample orbits to CSV")
    p.add_argument("spec")
    p.add_argument("--r0", type=_float_list, required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--steps-per-turn", dest="steps_per_turn", type=int, default=256)
    p.add_argument("--tol", type=float)
    p.add_argument("--margin", type=float)
    p.set_defaults(func=cmd_orbits)

    p = sub.add_parser("selftest", help="run the built-in battery")
    p.add_argument("--quick", action="store_true")
    p.set_defaults(func=cmd_selftest)

    p = sub.add_parser("serve", help="HTTP front end streaming analysis progress")
    p.add_argument("--host", default=os.getenv("QHCYCLES_HOST", "0.0.0.0"))
    p.add_argument("--port", type=int, default=int(os.getenv("QHCYCLES_PORT", "8080")))
    p.set_defaults(func=cmd_serve)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    level = {0: logging.WARNING, 1: logging.INFO}.get(args.verbose, logging.DEBUG)
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (NotTwoComponents, InvalidWeightedDegree) as e:
        print(f"error: system out of scope: {e}", file=sys.stderr)
        return EXIT_SCOPE
    except SpecError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
