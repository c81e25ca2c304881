"""Command-line front end.

Subcommands
-----------
solve       lowest states for one potential and box
sweep       the same over several box sizes ``R`` or offsets ``d``
converge    one problem on a sequence of grids, with observed order
reproduce   recompute a bundled reference table and compare cell by cell

Settings come from built-in defaults, then the file named by
``ITP_CONFINE_CONFIG`` (``key = value`` lines, ``#`` comments), then the
command line.  Exit status: 0 success, 2 usage error, 3 non-convergence or
a failed comparison, 4 numerical failure (collapse, zero pivot).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, fields
from importlib import resources
from typing import Sequence

import numpy as np
from scipy.optimize import brentq

from .engine import TRIALS, ItpConfig, SpectrumError, solve_spectrum
from .grid import Grid, make_asymmetric_grid, make_symmetric_grid
from .oracle import OracleError, build_hamiltonian, lowest_eigenpairs
from .pentasolve import PivotError
from .potential import POTENTIAL_NAMES, PotentialSpec, potential_from_name
from .quadrature import QUADRATURE_RULE, CollapseError, position_moments

log = logging.getLogger("itp_confine")

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NOT_CONVERGED = 3
EXIT_NUMERICAL = 4

CONFIG_ENV = "ITP_CONFINE_CONFIG"
TABLES = ("I", "II", "III", "IV", "V", "VI")
METHODS = ("itp", "oracle", "both")
DEFAULT_N = 2001


class UsageError(ValueError):
    """Invalid settings; reported with exit status 2."""


# -- configuration ---------------------------------------------------------

@dataclass(frozen=True)
class RunConfig:
    """Everything needed to run one solve.

    Geometry is either ``R`` (box ``[-R, R]``) or ``L`` with offset ``d``
    (box ``[-L/2 + d, L/2 + d]``).  For ``shifted-harmonic`` the offset
    moves the potential minimum instead and the box stays centred.
    """

    potential: str = "harmonic"
    sign: int | None = None
    R: float | None = None
    L: float | None = None
    d: float = 0.0
    N: int = DEFAULT_N
    dtau: float | None = None
    tol: float = 1e-13
    max_iter: int = 1_000_000
    sustain: int = 3
    trial: str | None = None
    n_states: int = 1
    method: str = "itp"

    def __post_init__(self):
        if self.potential not in POTENTIAL_NAMES:
            raise UsageError(f"unknown potential {self.potential!r}; choose from {', '.join(POTENTIAL_NAMES)}")
        if (self.R is None) == (self.L is None):
            raise UsageError("give exactly one geometry: --R, or --L (with optional --d)")
        if self.R is not None and self.d != 0.0 and self.potential != "shifted-harmonic":
            raise UsageError("--d needs --L for the box offset (or --potential shifted-harmonic)")
        for name in ("R", "L", "d", "dtau", "tol"):
            value = getattr(self, name)
            if value is not None and not math.isfinite(value):
                raise UsageError(f"{name} must be finite, got {value}")
        if self.n_states < 1:
            raise UsageError(f"n-states must be at least 1, got {self.n_states}")
        if self.n_states > self.N - 2:
            raise UsageError(f"n-states {self.n_states} exceeds the {self.N - 2} interior grid points")
        if self.method not in METHODS:
            raise UsageError(f"unknown method {self.method!r}; choose from {', '.join(METHODS)}")
        try:
            self.build()
            self.engine_config()
        except ValueError as exc:
            raise UsageError(str(exc)) from exc

    def build(self) -> tuple[PotentialSpec, Grid]:
        spec = potential_from_name(self.potential, sign=self.sign, d=self.d)
        if self.R is not None:
            grid = make_symmetric_grid(self.R, self.N)
        elif self.potential == "shifted-harmonic":
            grid = make_asymmetric_grid(self.L, 0.0, self.N)
        else:
            grid = make_asymmetric_grid(self.L, self.d, self.N)
        return spec, grid

    def engine_config(self) -> ItpConfig:
        return ItpConfig(dtau=self.dtau, tol=self.tol, max_iter=self.max_iter,
                         sustain=self.sustain, trial=self.trial)


# config-file key -> (RunConfig field, parser); list-valued keys feed sweeps
_SCALAR_KEYS = {
    "potential": ("potential", str),
    "sign": ("sign", int),
    "L": ("L", float),
    "dtau": ("dtau", float),
    "tol": ("tol", float),
    "max_iter": ("max_iter", int),
    "sustain": ("sustain", int),
    "trial": ("trial", str),
    "n_states": ("n_states", int),
    "method": ("method", str),
    "format": ("format", str),
    "jobs": ("jobs", int),
}
_LIST_KEYS = {"R": float, "d": float, "N": int}


def _parse_int(text: str) -> int:
    value = float(text)
    if value != int(value):
        raise ValueError(f"expected an integer, got {text!r}")
    return int(value)


def _parse_value(kind, text: str):
    if kind is int:
        return _parse_int(text)
    if kind is float:
        value = float(text)
        if not math.isfinite(value):
            raise ValueError(f"expected a finite number, got {text!r}")
        return value
    return text


def read_config_file(path: str) -> dict:
    """Parse a flat ``key = value`` file.

    Keys are option names with ``-`` or ``_`` (``max-iter`` and ``max_iter``
    are the same key).  ``R``, ``d`` and ``N`` accept comma or space
    separated lists.
    """
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise UsageError(f"cannot read config file {path}: {exc}") from exc
    out = {}
    for lineno, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key, value = key.strip().replace("-", "_"), value.strip()
        if not sep or not key or not value:
            raise UsageError(f"{path}:{lineno}: expected 'key = value'")
        try:
            if key in _LIST_KEYS:
                out[key] = [_parse_value(_LIST_KEYS[key], v) for v in value.replace(",", " ").split()]
            elif key in _SCALAR_KEYS:
                out[key] = _parse_value(_SCALAR_KEYS[key][1], value)
            else:
                raise UsageError(f"{path}:{lineno}: unknown key {key!r}")
        except ValueError as exc:
            raise UsageError(f"{path}:{lineno}: {exc}") from exc
    return out


# -- records and output ----------------------------------------------------

@dataclass
class ResultRecord:
    """One state of one run.  ``R`` is empty for asymmetric boxes."""

    state_index: int
    potential: str
    R: float | None
    a: float
    b: float
    d: float
    N: int
    h: float
    dtau: float | None
    iterations: int | None
    energy: float
    x2_moment: float
    x4_moment: float
    converged: bool
    method: str
    quadrature_order: str = QUADRATURE_RULE


@dataclass
class ConvergenceRow:
    state_index: int
    N: int
    h: float
    energy: float
    difference: float | None
    observed_order: float | None
    iterations: int | None
    converged: bool
    method: str


@dataclass
class CellResult:
    table: str
    potential: str
    R: float | None
    L: float | None
    d: float | None
    N: int
    state: int
    quantity: str
    source: str
    computed: float
    reference: float
    deviation: float
    tolerance: float
    passed: bool


def _csv_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        # repr is the shortest string that round-trips the double
        return repr(value)
    return str(value)


def _json_cell(value):
    if isinstance(value, float) and not math.isfinite(value):
        return None
    return value


def format_records(records: Sequence, fmt: str) -> str:
    """CSV (header row, ``.`` decimals) or a JSON list of objects."""
    if fmt == "json":
        rows = [{k: _json_cell(v) for k, v in asdict(r).items()} for r in records]
        return json.dumps(rows, indent=1) + "\n"
    if not records:
        return ""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow([f.name for f in fields(records[0])])
    for r in records:
        writer.writerow([_csv_cell(getattr(r, f.name)) for f in fields(r)])
    return buf.getvalue()


def parse_csv_records(text: str) -> list[dict]:
    """Read CSV output back into dictionaries of floats, ints, bools and ``None``."""

    def convert(cell: str):
        if cell == "":
            return None
        if cell in ("true", "false"):
            return cell == "true"
        for kind in (int, float):
            try:
                return kind(cell)
            except ValueError:
                pass
        return cell

    return [{k: convert(v) for k, v in row.items()} for row in csv.DictReader(io.StringIO(text))]


def write_output(text: str, path: str | None):
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def dump_path(path: str, state_index: int, n_states: int, tag: str = "") -> str:
    """``psi.dat`` for a single state, ``psi_n0.dat``, ``psi_n1.dat``... otherwise."""
    if n_states == 1 and not tag:
        return path
    root, ext = os.path.splitext(path)
    return f"{root}{tag}_n{state_index}{ext}"


def write_wavefunction(path: str, psi, energy: float, potential: str, state_index: int):
    """Two whitespace-separated columns ``x psi`` after ``#`` metadata lines."""
    grid = psi.grid
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"# potential = {potential}\n")
        fh.write(f"# state = {state_index}\n")
        fh.write(f"# box = [{grid.domain.a!r}, {grid.domain.b!r}]\n")
        fh.write(f"# N = {grid.n_points}\n")
        fh.write(f"# h = {grid.h!r}\n")
        fh.write(f"# energy = {energy!r}\n")
        fh.write("# x psi\n")
        np.savetxt(fh, np.column_stack([grid.x, psi.values]), fmt="%.17g")


# -- running ---------------------------------------------------------------

@dataclass
class RunOutcome:
    records: list
    states: list  # WaveFunction per record, same order
    status: int
    message: str = ""


def _record(cfg: RunConfig, spec, grid: Grid, n: int, energy: float, psi, method: str,
            dtau=None, iterations=None, converged=True) -> ResultRecord:
    x2, x4 = position_moments(psi) if psi is not None else (math.nan, math.nan)
    return ResultRecord(
        state_index=n, potential=spec.name,
        R=cfg.R, a=grid.domain.a, b=grid.domain.b, d=cfg.d,
        N=grid.n_points, h=grid.h, dtau=dtau, iterations=iterations,
        energy=float(energy), x2_moment=float(x2), x4_moment=float(x4),
        converged=bool(converged), method=method,
    )


def _failed_records(cfg: RunConfig, spec, grid: Grid, method: str, start: int) -> list:
    return [_record(cfg, spec, grid, n, math.nan, None, method, converged=False)
            for n in range(start, cfg.n_states)]


def run_config(cfg: RunConfig, keep_states: bool = False) -> RunOutcome:
    """Solve ``cfg`` with its method(s); never raises for numerical trouble."""
    spec, grid = cfg.build()
    records, states, status, messages = [], [], EXIT_OK, []
    if cfg.method in ("itp", "both"):
        try:
            results = solve_spectrum(spec, grid, cfg.engine_config(), cfg.n_states)
        except SpectrumError as exc:
            results = exc.results
            status = EXIT_NUMERICAL
            messages.append(f"itp: {exc}")
        for r in results:
            records.append(_record(cfg, spec, grid, r.state_index, r.energy, r.psi, "itp",
                                   r.dtau, r.iterations, r.converged))
            states.append(r.psi)
            if not r.converged:
                status = max(status, EXIT_NOT_CONVERGED)
                messages.append(f"itp: state {r.state_index} not converged in {r.iterations} iterations")
        if len(results) < cfg.n_states:
            failed = _failed_records(cfg, spec, grid, "itp", len(results))
            records.extend(failed)
            states.extend([None] * len(failed))
    if cfg.method in ("oracle", "both"):
        try:
            energies, psis = lowest_eigenpairs(build_hamiltonian(spec, grid, 5), cfg.n_states)
            for n, (e, psi) in enumerate(zip(energies, psis)):
                records.append(_record(cfg, spec, grid, n, e, psi, "oracle"))
                states.append(psi)
        except (OracleError, PivotError, ValueError) as exc:
            status = EXIT_NUMERICAL
            messages.append(f"oracle: {exc}")
            failed = _failed_records(cfg, spec, grid, "oracle", 0)
            records.extend(failed)
            states.extend([None] * len(failed))
    return RunOutcome(records, states if keep_states else [], status, "; ".join(messages))


def _run_many(configs: list[RunConfig], jobs: int, keep_states: bool = False) -> list[RunOutcome]:
    """Run independent configurations, results in input order."""
    if jobs <= 1 or len(configs) <= 1:
        return [run_config(c, keep_states) for c in configs]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(run_config, configs, [keep_states] * len(configs)))


# -- subcommands -----------------------------------------------------------

def _report(outcome_status: int, message: str):
    if message:
        log.error(message)
    return outcome_status


def cmd_solve(cfg: RunConfig, fmt: str = "csv", out: str | None = None,
              dump_psi: str | None = None) -> tuple[int, list]:
    """Solve one configuration; returns ``(exit status, records)``."""
    outcome = run_config(cfg, keep_states=dump_psi is not None)
    write_output(format_records(outcome.records, fmt), out)
    if dump_psi is not None:
        both = cfg.method == "both"
        for rec, psi in zip(outcome.records, outcome.states):
            if psi is not None:
                tag = f"_{rec.method}" if both else ""
                write_wavefunction(dump_path(dump_psi, rec.state_index, cfg.n_states, tag),
                                   psi, rec.energy, rec.potential, rec.state_index)
    return _report(outcome.status, outcome.message), outcome.records


def cmd_sweep(cfg: RunConfig, R_values: Sequence[float] | None = None,
              d_values: Sequence[float] | None = None, fmt: str = "csv",
              out: str | None = None, jobs: int = 1) -> tuple[int, list]:
    """Repeat a solve over several ``R`` or ``d``; failed points stay in the output."""
    if bool(R_values) == bool(d_values):
        raise UsageError("sweep over exactly one of --R or --d")
    try:
        if R_values:
            configs = [_replace(cfg, R=r, L=None) for r in R_values]
        else:
            configs = [_replace(cfg, d=d) for d in d_values]
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    outcomes = _run_many(configs, jobs)
    records, status = [], EXIT_OK
    for c, o in zip(configs, outcomes):
        records.extend(o.records)
        if o.status:
            label = f"R={c.R}" if R_values else f"d={c.d}"
            log.error("sweep point %s failed: %s", label, o.message)
            status = max(status, o.status)
    write_output(format_records(records, fmt), out)
    return status, records


def _observed_order(h, e) -> float | None:
    """Order ``p`` with ``e = e_inf + C h**p`` through three points."""
    d1, d2 = e[0] - e[1], e[1] - e[2]
    if d1 == 0.0 or d2 == 0.0 or (d1 > 0) != (d2 > 0):
        return None
    ratio = d1 / d2

    def f(p):
        return (h[0] ** p - h[1] ** p) / (h[1] ** p - h[2] ** p) - ratio

    try:
        return float(brentq(f, 0.05, 30.0))
    except ValueError:
        return None


def cmd_converge(cfg: RunConfig, N_values: Sequence[int], fmt: str = "csv",
                 out: str | None = None, jobs: int = 1) -> tuple[int, list]:
    """Energies on successively finer grids with differences and observed order."""
    N_values = list(N_values)
    if len(N_values) < 2:
        raise UsageError("converge needs at least two --N values")
    if any(b <= a for a, b in zip(N_values, N_values[1:])):
        raise UsageError("--N values must be strictly increasing (no repeats)")
    if cfg.method == "both":
        raise UsageError("converge takes --method itp or --method oracle")
    try:
        configs = [_replace(cfg, N=n) for n in N_values]
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    outcomes = _run_many(configs, jobs)
    rows, status = [], EXIT_OK
    for n in range(cfg.n_states):
        hs, es = [], []
        for c, o in zip(configs, outcomes):
            rec = o.records[n]
            hs.append(rec.h)
            es.append(rec.energy)
            diff = es[-1] - es[-2] if len(es) > 1 else None
            order = _observed_order(hs[-3:], es[-3:]) if len(es) > 2 else None
            rows.append(ConvergenceRow(n, rec.N, rec.h, rec.energy, diff, order,
                                       rec.iterations, rec.converged, rec.method))
    for c, o in zip(configs, outcomes):
        if o.status:
            log.error("N=%d: %s", c.N, o.message)
            status = max(status, o.status)
    write_output(format_records(rows, fmt), out)
    return status, rows


def load_manifest(table: str) -> list[dict]:
    """Reference cells bundled for ``table`` (comment lines skipped)."""
    if table not in TABLES:
        raise UsageError(f"unknown table {table!r}; choose from {', '.join(TABLES)}")
    text = resources.files("itp_confine").joinpath("data", f"table_{table}.csv").read_text("utf-8")
    body = "\n".join(line for line in text.splitlines() if not line.startswith("#"))
    cells = []
    for row in csv.DictReader(io.StringIO(body)):
        cells.append({
            "table": row["table"],
            "potential": row["potential"],
            "R": float(row["R"]) if row["R"] else None,
            "L": float(row["L"]) if row["L"] else None,
            "d": float(row["d"]) if row["d"] else 0.0,
            "N": int(row["N"]),
            "state": int(row["state"]),
            "quantity": row["quantity"],
            "reference": float(row["reference"]),
            "tolerance": float(row["tolerance"]),
            "scale": float(row["scale"]),
            "source": row["source"],
        })
    return cells


_QUANTITY = {"energy": "energy", "x2": "x2_moment", "x4": "x4_moment"}


def cmd_reproduce(table: str, base: RunConfig | None = None, fmt: str = "csv",
                  out: str | None = None, jobs: int = 1) -> tuple[int, list]:
    """Recompute every cell of a bundled table and compare at its tolerance.

    Only the solver settings (``dtau``, ``tol``, ``max_iter``, ``sustain``,
    ``method``) of ``base`` are used; the problems come from the manifest.
    """
    cells = load_manifest(table)
    base = base or RunConfig(R=1.0)
    method = "itp" if base.method == "both" else base.method
    groups: dict[tuple, int] = {}
    for c in cells:
        key = (c["potential"], c["R"], c["L"], c["d"], c["N"])
        groups[key] = max(groups.get(key, 0), c["state"] + 1)
    keys = list(groups)
    configs = [_replace(base, potential=p, sign=None, R=R, L=L, d=d, N=N,
                        n_states=groups[(p, R, L, d, N)], method=method, trial=None)
               for (p, R, L, d, N) in keys]
    outcomes = dict(zip(keys, _run_many(configs, jobs)))
    results, status, worst = [], EXIT_OK, 0.0
    for c in cells:
        key = (c["potential"], c["R"], c["L"], c["d"], c["N"])
        rec = outcomes[key].records[c["state"]]
        value = c["scale"] * getattr(rec, _QUANTITY[c["quantity"]])
        dev = value - c["reference"]
        ok = bool(abs(dev) <= c["tolerance"]) and rec.converged
        worst = max(worst, abs(dev)) if math.isfinite(dev) else math.inf
        results.append(CellResult(c["table"], c["potential"], c["R"], c["L"], c["d"] if c["L"] else None,
                                  c["N"], c["state"], c["quantity"], c["source"], value,
                                  c["reference"], dev, c["tolerance"], ok))
        if not ok:
            status = EXIT_NOT_CONVERGED
    for key, o in outcomes.items():
        if o.status == EXIT_NUMERICAL:
            log.error("%s: %s", key, o.message)
    write_output(format_records(results, fmt), out)
    n_fail = sum(not r.passed for r in results)
    print(f"table {table}: {len(results) - n_fail}/{len(results)} cells within tolerance, "
          f"max |deviation| = {worst:.3e}", file=sys.stderr)
    return status, results


def _replace(cfg: RunConfig, **changes) -> RunConfig:
    values = {f.name: getattr(cfg, f.name) for f in fields(cfg)}
    values.update(changes)
    return RunConfig(**values)


# -- argument handling -----------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _common_options() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("problem")
    g.add_argument("--potential", choices=POTENTIAL_NAMES)
    g.add_argument("--sign", type=int, choices=(1, -1), help="sign of x^2/2 for --potential harmonic")
    g.add_argument("--R", type=float, nargs="+", help="half-width of the box [-R, R]")
    g.add_argument("--L", type=float, help="width of an offset box [-L/2 + d, L/2 + d]")
    g.add_argument("--d", type=float, nargs="+",
                   help="box offset with --L; potential minimum for shifted-harmonic")
    g.add_argument("--N", type=int, nargs="+", help=f"grid points including walls (default {DEFAULT_N})")
    g = p.add_argument_group("solver")
    g.add_argument("--dtau", type=float, help="imaginary time step (default: chosen from the grid)")
    g.add_argument("--tol", type=float, help="energy convergence threshold (default 1e-13, relative above 1)")
    g.add_argument("--max-iter", type=int)
    g.add_argument("--sustain", type=int, help="consecutive converged steps required (default 3)")
    g.add_argument("--n-states", type=int)
    g.add_argument("--trial", choices=TRIALS, help="trial state (default alternates even/odd)")
    g.add_argument("--method", choices=METHODS, help="itp (default), oracle, or both")
    g = p.add_argument_group("output")
    g.add_argument("--format", choices=("csv", "json"))
    g.add_argument("--out", help="output file (default stdout)")
    g.add_argument("--jobs", type=int, help="parallel worker processes for sweep/converge/reproduce")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common_options()
    parser = _Parser(prog="itp-confine", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    s = sub.add_parser("solve", parents=[common], help="lowest states of one problem")
    s.add_argument("--dump-psi", metavar="PATH", help="write x/psi columns per state")
    sub.add_parser("sweep", parents=[common], help="solve over several --R or --d values")
    sub.add_parser("converge", parents=[common], help="solve on several --N grids")
    r = sub.add_parser("reproduce", parents=[common], help="recompute a bundled reference table")
    r.add_argument("table", choices=TABLES)
    return parser


def _merge(args: argparse.Namespace, env: dict) -> dict:
    """Defaults < config file < command line."""
    merged = {}
    path = env.get(CONFIG_ENV)
    if path:
        merged.update(read_config_file(path))
    for key in ("potential", "sign", "L", "dtau", "tol", "max_iter", "sustain", "trial",
                "n_states", "method", "format", "jobs", "R", "d", "N"):
        value = getattr(args, key, None)
        if value is not None:
            merged[key] = value
    return merged


def _single(values, name):
    if values is None:
        return None
    if len(values) != 1:
        raise UsageError(f"--{name} takes one value here (use sweep or converge for lists)")
    return values[0]


def _run_config_from(m: dict, *, R=None, d=0.0, N=DEFAULT_N) -> RunConfig:
    scalar = {k: m[k] for k in ("potential", "sign", "L", "dtau", "tol", "max_iter",
                                "sustain", "trial", "n_states", "method") if k in m}
    return RunConfig(R=R, d=d, N=N, **scalar)


def main(argv: Sequence[str] | None = None, env: dict | None = None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")
    env = os.environ if env is None else env
    try:
        args = build_parser().parse_args(argv)
        m = _merge(args, env)
        fmt = m.get("format", "csv")
        if fmt not in ("csv", "json"):
            raise UsageError(f"unknown format {fmt!r}")
        jobs = m.get("jobs", 1)
        if jobs < 1:
            raise UsageError("--jobs must be at least 1")
        R_list, d_list, N_list = m.get("R"), m.get("d"), m.get("N")
        if args.command == "solve":
            cfg = _run_config_from(m, R=_single(R_list, "R"), d=_single(d_list, "d") or 0.0,
                                   N=_single(N_list, "N") or DEFAULT_N)
            status, _ = cmd_solve(cfg, fmt, args.out, args.dump_psi)
        elif args.command == "sweep":
            if R_list and d_list and len(R_list) > 1 and len(d_list) > 1:
                raise UsageError("sweep over --R or --d, not both")
            N = _single(N_list, "N") or DEFAULT_N
            if R_list and (len(R_list) > 1 or not d_list):
                cfg = _run_config_from(m, R=R_list[0], d=_single(d_list, "d") or 0.0, N=N)
                status, _ = cmd_sweep(cfg, R_values=R_list, fmt=fmt, out=args.out, jobs=jobs)
            elif d_list:
                cfg = _run_config_from(m, R=_single(R_list, "R"), d=d_list[0], N=N)
                status, _ = cmd_sweep(cfg, d_values=d_list, fmt=fmt, out=args.out, jobs=jobs)
            else:
                raise UsageError("sweep needs a list of --R or --d values")
        elif args.command == "converge":
            if not N_list:
                raise UsageError("converge needs a list of --N values")
            cfg = _run_config_from(m, R=_single(R_list, "R"), d=_single(d_list, "d") or 0.0,
                                   N=N_list[0])
            status, _ = cmd_converge(cfg, N_list, fmt=fmt, out=args.out, jobs=jobs)
        else:
            solver = {k: m[k] for k in ("dtau", "tol", "max_iter", "sustain", "method") if k in m}
            status, _ = cmd_reproduce(args.table, RunConfig(R=1.0, **solver), fmt=fmt,
                                      out=args.out, jobs=jobs)
        return status
    except UsageError as exc:
        print(f"itp-confine: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (CollapseError, PivotError, OracleError) as exc:
        print(f"itp-confine: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


def main_exit():
    """Console-script entry point."""
    sys.exit(main())
