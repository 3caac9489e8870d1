"""Command-line front end.

Subcommands:

    solve         solve a built-in problem or a config file, print levels
    converge      grid-refinement scan of tracked states
    completeness  truncation error of the resolution of identity
    bench         reference gate over all tabulated benchmarks (CI)
    list          show built-in problem ids

Exit codes: 0 success, 1 configuration/parse error, 2 numerical failure
(mass pole on the grid, non-convergence), 3 benchmark tolerance failure.
The environment variable QMBOX_MAX_THREADS caps BLAS/LAPACK threads.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import analysis, expr
from .bench import run_benchmarks
from .eig import SolverError, Spectrum
from .hamiltonian import ConstantMass, ProblemDefinition, ordering_from_name
from .lattice import (GridMemoryError, Lattice2D, make_lattice,
                      make_lattice_2d, points_to_m)
from .operators import GridValueError
from .problems import BUILTIN_IDS, builtin_problem
from .solve import solve as solve_problem

#: Eigenvalues print with 12 significant digits everywhere.
_FMT = "{:.12g}"


class ConfigError(ValueError):
    pass


def _apply_thread_cap():
    cap = os.environ.get("QMBOX_MAX_THREADS")
    if not cap:
        return
    try:
        limit = int(cap)
    except ValueError:
        raise ConfigError(f"QMBOX_MAX_THREADS must be an integer, got {cap!r}")
    try:
        import threadpoolctl
        threadpoolctl.threadpool_limits(limits=limit)
    except ImportError:
        for var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
            os.environ[var] = str(limit)


# --- Config-file problems ----------------------------------------------------

_CONFIG_KEYS = {"dimension", "N", "L", "N_x", "N_y", "L_x", "L_y", "ordering",
                "mass", "potential_real", "potential_imag", "unit"}


def load_config(path: str) -> ProblemDefinition:
    """Parse a key = value problem description into a ProblemDefinition.

    Required keys: dimension, potential_real, N/L (per axis in 2D), plus a
    mass or a constant-mass ordering.  Expressions use the variable x (and
    y in 2D); '#' starts a comment.
    """
    entries: dict[str, str] = {}
    try:
        with open(path, encoding="utf-8") as fh:
            for lineno, raw in enumerate(fh, 1):
                line = raw.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise ConfigError(f"{path}:{lineno}: expected key = value, got {raw.strip()!r}")
                key, _, value = line.partition("=")
                key, value = key.strip(), value.strip()
                if key not in _CONFIG_KEYS:
                    raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
                if key in entries:
                    raise ConfigError(f"{path}:{lineno}: duplicate key {key!r}")
                if not value:
                    raise ConfigError(f"{path}:{lineno}: empty value for {key!r}")
                entries[key] = value
    except OSError as err:
        raise ConfigError(f"cannot read config {path}: {err}")

    def require(key: str) -> str:
        if key not in entries:
            raise ConfigError(f"{path}: missing required key {key!r}")
        return entries[key]

    dimension = require("dimension")
    if dimension not in ("1", "2"):
        raise ConfigError(f"{path}: dimension must be 1 or 2, got {dimension!r}")
    dim = int(dimension)
    variables = {"x"} if dim == 1 else {"x", "y"}

    def parse_expr(key: str):
        source = entries[key]
        try:
            return expr.parse(source, variables)
        except expr.ExpressionError as err:
            raise ConfigError(f"{path}: key {key!r}: {err}")

    if dim == 1:
        grid = make_lattice(_config_float(path, entries, "L"),
                            points_to_m(_config_int(path, entries, "N")))
    else:
        grid = make_lattice_2d(
            _config_float(path, entries, "L_x"), points_to_m(_config_int(path, entries, "N_x")),
            _config_float(path, entries, "L_y"), points_to_m(_config_int(path, entries, "N_y")))

    ordering_spec = entries.get("ordering", "")
    mass = None
    if "mass" in entries:
        try:
            mass = float(entries["mass"])
        except ValueError:
            mass = parse_expr("mass")
    if ordering_spec:
        parts = ordering_spec.replace(",", " ").split()
        try:
            ordering = ordering_from_name(parts[0], *map(float, parts[1:]))
        except ValueError as err:
            raise ConfigError(f"{path}: key 'ordering': {err}")
    elif isinstance(mass, float):
        ordering, mass = ConstantMass(mass), None
    elif mass is not None:
        ordering = ordering_from_name("mass-sandwich")
    else:
        raise ConfigError(f"{path}: missing required key 'mass' (or a constant-mass ordering)")

    require("potential_real")
    return ProblemDefinition(
        name=os.path.splitext(os.path.basename(path))[0],
        grid=grid,
        ordering=ordering,
        potential_real=parse_expr("potential_real"),
        mass=mass,
        potential_imag=parse_expr("potential_imag") if "potential_imag" in entries else None,
        energy_unit=entries.get("unit", "model"),
    )


def _config_float(path, entries, key) -> float:
    if key not in entries:
        raise ConfigError(f"{path}: missing required key {key!r}")
    try:
        return float(entries[key])
    except ValueError:
        raise ConfigError(f"{path}: key {key!r} must be a number, got {entries[key]!r}")


def _config_int(path, entries, key) -> int:
    if key not in entries:
        raise ConfigError(f"{path}: missing required key {key!r}")
    try:
        return int(entries[key])
    except ValueError:
        raise ConfigError(f"{path}: key {key!r} must be an integer, got {entries[key]!r}")


# --- Output helpers ----------------------------------------------------------

def _spectrum_rows(problem: ProblemDefinition, spectrum: Spectrum, n_states: int,
                   unit: str, shift: bool):
    values = spectrum.eigenvalues
    real = values.real.copy()
    imag = values.imag.copy()
    if shift:
        real = real - real[0]
    if unit == "cm-1":
        real = analysis.to_wavenumbers(real)
        imag = analysis.to_wavenumbers(imag)
    rows = []
    for n in range(min(n_states, spectrum.n_states)):
        rows.append({
            "state": spectrum.state_label(n),
            "energy": float(real[n]),
            "imag": float(imag[n]),
            "residual": float(spectrum.residuals[n]),
        })
    return rows


def _emit(rows, header, args):
    fmt = getattr(args, "format", "csv")
    out = getattr(args, "output", None)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            if fmt == "json":
                json.dump(rows, fh, indent=2)
                fh.write("\n")
            else:
                fh.write(",".join(header) + "\n")
                for row in rows:
                    fh.write(",".join(_format_cell(row[h]) for h in header) + "\n")
    else:
        widths = {h: max(len(h), 18) for h in header}
        print("  ".join(h.rjust(widths[h]) for h in header))
        for row in rows:
            print("  ".join(_format_cell(row[h]).rjust(widths[h]) for h in header))


def _format_cell(value) -> str:
    if isinstance(value, float):
        return _FMT.format(value)
    return str(value)


def _make_problem(args) -> ProblemDefinition:
    if bool(args.problem) == bool(args.config):
        raise ConfigError("provide exactly one of --problem or --config")
    if args.config:
        problem = load_config(args.config)
        if args.N or args.L or args.ordering:
            raise ConfigError("grid/ordering overrides apply to built-ins only; "
                              "edit the config file instead")
        return problem
    overrides = {}
    if args.N:
        overrides["N"] = args.N
    if args.L:
        overrides["L"] = args.L
    if getattr(args, "Nx", None):
        overrides["Nx"] = args.Nx
    if getattr(args, "Ny", None):
        overrides["Ny"] = args.Ny
    if getattr(args, "Lx", None):
        overrides["Lx"] = args.Lx
    if getattr(args, "Ly", None):
        overrides["Ly"] = args.Ly
    if args.ordering:
        parts = args.ordering.replace(",", " ").split()
        overrides["ordering"] = ordering_from_name(parts[0], *map(float, parts[1:]))
    try:
        return builtin_problem(args.problem, **overrides)
    except ValueError as err:
        raise ConfigError(str(err))


def _default_unit(problem: ProblemDefinition, requested: str) -> str:
    if requested != "auto":
        return requested
    return "cm-1" if problem.energy_unit == "hartree" else "model"


# --- Subcommands -------------------------------------------------------------

def _cmd_solve(args) -> int:
    problem = _make_problem(args)
    spectrum = solve_problem(problem)
    unit = _default_unit(problem, args.unit)
    rows = _spectrum_rows(problem, spectrum, args.states, unit, args.shift)
    _emit(rows, ["state", "energy", "imag", "residual"], args)
    if args.dump_wavefunctions:
        _dump_wavefunctions(problem, spectrum, args)
    return 0


def _dump_wavefunctions(problem, spectrum, args):
    path = args.dump_wavefunctions
    n = min(args.states, spectrum.n_states)
    with open(path, "w", encoding="utf-8") as fh:
        if isinstance(problem.grid, Lattice2D):
            X, Y = problem.grid.meshgrid()
            coords = np.column_stack([X.ravel(), Y.ravel()])
            fh.write("# x y " + " ".join(f"re_psi{k} im_psi{k}" for k in range(n)) + "\n")
        else:
            coords = problem.grid.x[:, None]
            fh.write("# x " + " ".join(f"re_psi{k} im_psi{k}" for k in range(n)) + "\n")
        psi = spectrum.eigenvectors[:, :n]
        for i in range(coords.shape[0]):
            cells = [_FMT.format(c) for c in coords[i]]
            for k in range(n):
                cells.append(_FMT.format(float(psi[i, k].real)))
                cells.append(_FMT.format(float(psi[i, k].imag)))
            fh.write(" ".join(cells) + "\n")


def _cmd_converge(args) -> int:
    problem = _make_problem(args)
    n_list = [int(tok) for tok in args.N_list.split(",")]
    states = [int(tok) for tok in args.track.split(",")]
    scan = analysis.convergence_scan(problem, args.mode, n_list, states)
    rows = [{"N": n, "state": s, "energy": e, "rel_error": r}
            for n, s, e, r in scan.rows()]
    _emit(rows, ["N", "state", "energy", "rel_error"], args)
    if args.gnuplot_prefix:
        for s in states:
            scan.write_gnuplot(f"{args.gnuplot_prefix}.state{s}.dat", s)
    for s in states:
        slope, corr, npts = analysis.exponential_fit(scan, s)
        print(f"# state {s}: log10(err) slope {slope:.4f}/point over {npts} "
              f"pre-plateau grids, correlation {corr:.4f}", file=sys.stderr)
    return 0


def _cmd_completeness(args) -> int:
    problem = _make_problem(args)
    spectrum = solve_problem(problem)
    curve = analysis.completeness_error(spectrum, ground=args.ground)
    rows = [{"n_max": n, "epsilon": float(curve[n])} for n in range(len(curve))]
    _emit(rows, ["n_max", "epsilon"], args)
    return 0


def _cmd_bench(args) -> int:
    results = run_benchmarks()
    failed = 0
    for result in results:
        status = "PASS" if result.passed else "FAIL"
        print(f"[{status}] {result.name:<22} {result.seconds:6.2f}s  {result.detail}")
        failed += not result.passed
    total = sum(r.seconds for r in results)
    print(f"# {len(results) - failed}/{len(results)} benchmark gates passed "
          f"in {total:.1f}s")
    return 3 if failed else 0


def _cmd_list(args) -> int:
    for problem_id in BUILTIN_IDS:
        print(problem_id)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qmbox",
        description="Spectral matrix solver for low-dimensional bound states")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_problem_args(p, two_d=False):
        p.add_argument("--problem", choices=BUILTIN_IDS, help="built-in problem id")
        p.add_argument("--config", help="problem config file (key = value lines)")
        p.add_argument("--N", type=int, help="override point count (odd)")
        p.add_argument("--L", type=float, help="override box width (a.u.)")
        if two_d:
            p.add_argument("--Nx", type=int)
            p.add_argument("--Ny", type=int)
            p.add_argument("--Lx", type=float)
            p.add_argument("--Ly", type=float)
        p.add_argument("--ordering",
                       help="kinetic ordering, e.g. mass-left or 'von-roos -1 0'")

    p_solve = sub.add_parser("solve", help="diagonalize one problem")
    add_problem_args(p_solve, two_d=True)
    p_solve.add_argument("--states", type=int, default=8, help="levels to print")
    p_solve.add_argument("--unit", choices=["auto", "hartree", "cm-1", "model"],
                         default="auto")
    p_solve.add_argument("--shift", action="store_true",
                         help="report energies relative to the ground state")
    p_solve.add_argument("--output", help="write rows to this file")
    p_solve.add_argument("--format", choices=["csv", "json"], default="csv")
    p_solve.add_argument("--dump-wavefunctions", metavar="PATH",
                         help="write grid-sampled eigenfunctions to PATH")
    p_solve.set_defaults(fn=_cmd_solve)

    p_conv = sub.add_parser("converge", help="convergence scan over grid sizes")
    add_problem_args(p_conv)
    p_conv.add_argument("--mode", choices=analysis.SCAN_MODES, default="fixed_L_vary_N")
    p_conv.add_argument("--N-list", required=True,
                        help="comma-separated ascending odd N values (>= 12)")
    p_conv.add_argument("--track", default="0", help="comma-separated state indices")
    p_conv.add_argument("--output", help="write CSV rows to this file")
    p_conv.add_argument("--format", choices=["csv", "json"], default="csv")
    p_conv.add_argument("--gnuplot-prefix",
                        help="also write two-column error files per state")
    p_conv.set_defaults(fn=_cmd_converge)

    p_comp = sub.add_parser("completeness",
                            help="identity-resolution truncation error")
    add_problem_args(p_comp)
    p_comp.add_argument("--ground", type=int, default=0)
    p_comp.add_argument("--output", help="write rows to this file")
    p_comp.add_argument("--format", choices=["csv", "json"], default="csv")
    p_comp.set_defaults(fn=_cmd_completeness)

    p_bench = sub.add_parser("bench", help="run the full reference gate")
    p_bench.set_defaults(fn=_cmd_bench)

    p_list = sub.add_parser("list", help="list built-in problem ids")
    p_list.set_defaults(fn=_cmd_list)
    return parser


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exit_request:  # argparse exits 2 on bad flags; remap
        return 0 if exit_request.code in (0, None) else 1
    try:
        _apply_thread_cap()
        return args.fn(args)
    except (GridValueError, GridMemoryError, SolverError, ZeroDivisionError) as err:
        print(f"numerical failure: {err}", file=sys.stderr)
        return 2
    except (ConfigError, expr.ExpressionError, ValueError, KeyError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
