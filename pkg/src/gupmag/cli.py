"""Command-line front end.

Units: hbar = m = k_B = 1 and q/(2mc) = 1, so the cyclotron frequency equals B.
Energies come out in units of hbar*omega0 when omega0 = 1.
"""

from __future__ import annotations

import argparse
import datetime as _dt
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .core import SystemConfig, make_config
from .errors import (
    ConvergenceError,
    DomainError,
    GridTooCoarse,
    GupMagError,
    GupViolation,
    RegimeError,
    RootNotBracketed,
    ThermalRegimeViolation,
)
from .spectrum import QuantumNumbers, degeneracy_table, energy_exact, energy_first_order, multiplicity_map
from .table import SweepTable

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2, 3

PHYSICAL_KEYS = ("omega0", "B", "T", "V", "z", "beta")
DEFAULTS = {"omega0": 1.0, "B": 0.5, "T": 30.0, "V": 1.0, "z": 1.0, "beta": 0.001}
# the oracle is meant for moderate deformation; tiny epsilon needs grids far beyond its budget
COMMAND_DEFAULTS = {"verify": {"beta": 0.05}, "wavefn": {"beta": 0.05}}

THERMO_COLUMNS = [
    "family", "index", "T", "B", "beta", "omega0", "V", "z",
    "phi_direct", "phi_closed", "phi_thermo", "M_closed", "M_numeric", "chi_numeric",
    "chi_variant", "variant", "in_closed_regime", "high_T", "u_plus", "u_minus",
    "s_max", "tail_bound", "B1", "B2", "status",
]  # fmt: skip


class CliError(Exception):
    def __init__(self, code: str, message: str, status: int = EXIT_USAGE):
        super().__init__(message)
        self.code = code
        self.status = status


@dataclass
class RunSpec:
    command: str
    params: dict
    var: str | None = None
    grid: list = field(default_factory=list)
    fmt: str = "csv"
    out: str | None = None
    meta: bool = True
    workers: int = 1
    options: dict = field(default_factory=dict)


# parsing ------------------------------------------------------------------


def parse_value(key: str, text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise CliError("CONFIG_INVALID", f"{key}: not a number: {text!r}") from None
    if not math.isfinite(value):
        raise CliError("CONFIG_INVALID", f"{key}: must be finite")
    return value


def read_config_file(path: str) -> dict:
    """Flat ``key = value`` file; ``#`` starts a comment."""
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise CliError("CONFIG_INVALID", f"cannot read config {path}: {exc.strerror}") from None
    out = {}
    for num, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise CliError("CONFIG_INVALID", f"{path}:{num}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in PHYSICAL_KEYS:
            raise CliError("CONFIG_INVALID", f"{path}:{num}: unknown key {key!r}")
        out[key] = parse_value(key, value)
    return out


def parse_set(items) -> dict:
    out = {}
    for item in items or ():
        if "=" not in item:
            raise CliError("CONFIG_INVALID", f"--set expects key=value, got {item!r}")
        key, value = (s.strip() for s in item.split("=", 1))
        if key not in PHYSICAL_KEYS:
            raise CliError("CONFIG_INVALID", f"unknown parameter {key!r}")
        out[key] = parse_value(key, value)
    return out


def parse_range(text: str) -> list[float]:
    """LO:HI:N[:log] into a list of grid values."""
    parts = text.split(":")
    if len(parts) not in (3, 4) or (len(parts) == 4 and parts[3] not in ("log", "lin")):
        raise CliError("RANGE_INVALID", f"range must be LO:HI:N[:log], got {text!r}")
    try:
        lo, hi, n = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise CliError("RANGE_INVALID", f"range must be LO:HI:N[:log], got {text!r}") from None
    if not (math.isfinite(lo) and math.isfinite(hi)) or not lo < hi:
        raise CliError("RANGE_INVALID", f"range needs LO < HI, got {lo:g}:{hi:g}")
    if n < 2:
        raise CliError("RANGE_INVALID", "range needs at least 2 points")
    if len(parts) == 4 and parts[3] == "log":
        if lo <= 0:
            raise CliError("RANGE_INVALID", "log spacing needs LO > 0")
        grid = np.geomspace(lo, hi, n)
    else:
        grid = np.linspace(lo, hi, n)
    return [float(v) for v in grid]


def build_config(params: dict) -> SystemConfig:
    try:
        return make_config(**params)
    except GupViolation as exc:
        raise CliError("GUP_VIOLATION", str(exc)) from None
    except ThermalRegimeViolation as exc:
        raise CliError("THERMAL_REGIME_VIOLATION", str(exc)) from None
    except DomainError as exc:
        raise CliError("CONFIG_INVALID", str(exc)) from None


def make_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH", help="key = value file (omega0, B, T, V, z, beta)")
    common.add_argument("--set", action="append", metavar="KEY=VALUE", help="override one parameter (repeatable)")
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--out", metavar="PATH", help="output file (default stdout)")
    common.add_argument("--no-meta", action="store_true", help="omit the provenance/timestamp header")
    common.add_argument("--var", choices=("B", "T", "beta", "omega0"), help="swept variable")
    common.add_argument("--range", metavar="LO:HI:N[:log]", help="grid for the swept variable")

    p = argparse.ArgumentParser(
        prog="gupmag",
        description=(
            "Magnetism of a trapped charge with a minimal length. "
            "Natural units: hbar = m = k_B = 1, q/(2mc) = 1 (cyclotron omega = B)."
        ),
    )
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("spectrum", parents=[common], help="energy levels and degeneracy classes")
    s.add_argument("--max-N", type=int, default=6, dest="max_N")
    s.add_argument("--tol", type=float, default=1e-9)

    w = sub.add_parser("wavefn", parents=[common], help="sample R_nl(p)")
    w.add_argument("--n", type=int, default=0)
    w.add_argument("--l", type=int, default=0)
    w.add_argument("--p-max", type=float, default=None, dest="p_max")
    w.add_argument("--points", type=int, default=201)

    v = sub.add_parser("verify", parents=[common], help="check the analytic solution against the numerical oracles")
    v.add_argument("--perturb-energy", type=float, default=0.0, dest="perturb", help="debug: shift the reduced eigenvalue")

    t = sub.add_parser("thermo", parents=[common], help="thermodynamics at one state point")
    t.add_argument("--baseline-beta0", action="store_true", help="add the critical fields B1, B2")

    sw = sub.add_parser("sweep", parents=[common], help="thermodynamics along one variable")
    sw.add_argument("--baseline-beta0", action="store_true", help="add the critical fields B1, B2")
    sw.add_argument("--workers", type=int, default=1)
    sw.add_argument("--family", metavar="B0,B1,...", help="comma-separated beta values merged into one table")
    return p


def resolve(args) -> RunSpec:
    params = dict(DEFAULTS)
    params.update(COMMAND_DEFAULTS.get(args.command, {}))
    if args.config:
        params.update(read_config_file(args.config))
    params.update(parse_set(args.set))
    grid = parse_range(args.range) if args.range else []
    if args.command == "sweep" and (not args.var or not grid):
        raise CliError("RANGE_INVALID", "sweep needs --var and --range")
    opts = {k: v for k, v in vars(args).items() if k not in ("config", "set", "format", "out", "no_meta", "var", "range")}
    return RunSpec(
        command=args.command,
        params=params,
        var=args.var,
        grid=grid,
        fmt=args.format,
        out=args.out,
        meta=not args.no_meta,
        workers=getattr(args, "workers", 1),
        options=opts,
    )


# commands -----------------------------------------------------------------


def cmd_spectrum(run: RunSpec) -> SweepTable:
    cfg = build_config(run.params)
    max_N = run.options["max_N"]
    try:
        classes = degeneracy_table(cfg, max_N, tol=run.options["tol"])
    except DomainError as exc:
        raise CliError("CONFIG_INVALID", str(exc)) from None
    mult = multiplicity_map(classes)
    cls_index = {q: i for i, c in enumerate(classes) for q in c.members}
    rows = []
    for s in range(max_N + 1):
        for nd in range(s, -1, -1):
            q = QuantumNumbers.from_circular(nd, s - nd)
            rows.append(
                {
                    "n": q.n,
                    "l": q.l,
                    "n_d": q.n_d,
                    "n_g": q.n_g,
                    "N": q.N,
                    "E_exact": energy_exact(q, cfg).energy,
                    "E_first_order": energy_first_order(q.n_d, q.n_g, cfg),
                    "multiplicity": mult[q],
                    "class": cls_index[q],
                }
            )
    return SweepTable.from_dicts(rows)


def cmd_wavefn(run: RunSpec) -> SweepTable:
    from .wavefn import norm, radial_wavefunction

    cfg = build_config(run.params)
    if cfg.beta <= 0:
        raise CliError("UNDEFORMED_NOT_VERIFIABLE", "the Jacobi-form eigenfunction needs beta > 0")
    o = run.options
    if o["n"] < 0 or o["points"] < 2:
        raise CliError("CONFIG_INVALID", "need n >= 0 and at least 2 points")
    q = QuantumNumbers(o["n"], o["l"])
    wf = radial_wavefunction(q, cfg)
    p_max = o["p_max"] if o["p_max"] is not None else 10 / math.sqrt(cfg.beta)
    p = np.linspace(0.0, p_max, o["points"])
    values = wf(p)
    table = SweepTable(["p", "R"], [[float(a), float(b)] for a, b in zip(p, values)])
    table.meta.update(n=q.n, l=q.l, lambda_exp=wf.lambda_exp, norm=norm(q, cfg))
    return table


VERIFY_RESIDUAL_QNS = ((0, 0), (1, 0), (0, 1), (2, 1), (1, 2))
VERIFY_GRIDS = (4096, 8192, 16384)


def cmd_verify(run: RunSpec) -> tuple[SweepTable, bool]:
    from .oracle import RadialGrid, fd_eigensolve, reduced_eigenvalue, residual_check
    from .wavefn import overlap

    cfg = build_config(run.params)
    if cfg.beta <= 0:
        raise CliError("UNDEFORMED_NOT_VERIFIABLE", "oracle checks need beta > 0")
    rows = []

    for n, l in VERIFY_RESIDUAL_QNS:
        q = QuantumNumbers(n, l)
        report = None
        for m in VERIFY_GRIDS:
            try:
                report = residual_check(q, cfg, RadialGrid(cfg.beta, m), perturb=run.options["perturb"])
                break
            except GridTooCoarse:
                continue
        if report is None:
            raise CliError("GRID_TOO_COARSE", f"residual for {q} unresolved on {VERIFY_GRIDS[-1]} points", EXIT_NUMERIC)
        detail = f"coarse={report.coarse_residual:.3e} order={report.observed_order:.2f}"
        if not report.passed and report.coarse_residual > 0 and report.max_residual / report.coarse_residual > 0.5:
            detail += " plateau"
        rows.append(["residual", n, l, report.max_residual, report.tol, report.passed, detail])

    for l in (0, 1, 2):
        try:
            res = fd_eigensolve(l, cfg, k=6)
        except ConvergenceError as exc:
            raise CliError("EIGENSOLVE_FAILED", str(exc), EXIT_NUMERIC) from None
        for n, mu in enumerate(res.eigenvalues):
            exact = reduced_eigenvalue(QuantumNumbers(n, l), cfg)
            err = abs(mu / exact - 1)
            rows.append(["eigenvalue", n, l, err, 1e-6, err <= 1e-6, f"fd={float(mu)!r} analytic={exact!r}"])

    for l in (0, 1):
        worst = 0.0
        for i in range(5):
            for j in range(i, 5):
                worst = max(worst, abs(overlap(i, j, l, cfg) - (1.0 if i == j else 0.0)))
        rows.append(["gram", 4, l, worst, 1e-7, worst <= 1e-7, "n <= 4"])

    table = SweepTable(["check", "n", "l", "value", "tol", "passed", "detail"], rows)
    return table, all(r[5] for r in rows)


def _point_row(args) -> dict:
    """Worker: one state point. Must stay a top-level function for process pools."""
    from .thermo import evaluate_point

    family, index, params = args
    row = {"family": family, "index": index}
    try:
        cfg = make_config(**params)
    except DomainError as exc:
        row.update({k: params[k] for k in PHYSICAL_KEYS})
        row["status"] = f"invalid:{type(exc).__name__}"
        return row
    row.update(evaluate_point(cfg).as_row())
    return row


def _critical(params: dict) -> tuple[float | None, float | None, str]:
    from .thermo import critical_fields

    try:
        cfg = make_config(**params)
        cf = critical_fields(cfg)
        return cf.B1, cf.B2, ""
    except (DomainError, RootNotBracketed, RegimeError) as exc:
        return None, None, f"critical:{type(exc).__name__}"


def _with_baseline(rows, params_for_row):
    cache = {}
    for row in rows:
        params = params_for_row(row)
        key = tuple(sorted((k, v) for k, v in params.items() if k != "B"))
        if key not in cache:
            cache[key] = _critical(params) if params["beta"] > 0 else (None, None, "critical:beta0")
        b1, b2, note = cache[key]
        row["B1"], row["B2"] = b1, b2
        if note:
            row["status"] = note if row.get("status", "ok") == "ok" else f"{row['status']};{note}"


def cmd_thermo(run: RunSpec) -> SweepTable:
    build_config(run.params)
    row = _point_row(("", 0, run.params))
    if run.options.get("baseline_beta0"):
        _with_baseline([row], lambda r: dict(run.params))
    return SweepTable.from_dicts([row], THERMO_COLUMNS)


def cmd_sweep(run: RunSpec) -> SweepTable:
    families = [None]
    if run.options.get("family"):
        try:
            families = [float(s) for s in run.options["family"].split(",")]
        except ValueError:
            raise CliError("CONFIG_INVALID", "--family expects comma-separated numbers") from None
        if run.var == "beta":
            raise CliError("CONFIG_INVALID", "--family sets beta; sweep another variable")
    tasks = []
    for fam in families:
        base = dict(run.params)
        if fam is not None:
            base["beta"] = fam
        # the run as a whole must be valid at its base point
        build_config({**base, run.var: run.grid[0]})
        for i, value in enumerate(run.grid):
            tasks.append(("" if fam is None else repr(fam), i, {**base, run.var: value}))

    if run.workers > 1:
        with ProcessPoolExecutor(max_workers=run.workers) as pool:
            rows = list(pool.map(_point_row, tasks, chunksize=max(1, len(tasks) // (4 * run.workers))))
    else:
        rows = [_point_row(t) for t in tasks]

    if run.options.get("baseline_beta0"):
        _with_baseline(rows, lambda r: {k: r[k] for k in PHYSICAL_KEYS})
    return SweepTable.from_dicts(rows, THERMO_COLUMNS, axis={"var": run.var, "grid": run.grid})


# entry point --------------------------------------------------------------


def _emit(table: SweepTable, run: RunSpec) -> None:
    if run.meta:
        table.meta.setdefault("program", f"gupmag {__version__}")
        table.meta["command"] = run.command
        table.meta["params"] = run.params
        table.meta["generated"] = _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds")
    text = table.dumps(run.fmt, with_meta=run.meta)
    if run.out:
        with open(run.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _error(code: str, message: str, status: int) -> int:
    sys.stderr.write(json.dumps({"error": code, "message": message, "exit": status}) + "\n")
    return status


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    try:
        run = resolve(args)
        ok = True
        if run.command == "spectrum":
            table = cmd_spectrum(run)
        elif run.command == "wavefn":
            table = cmd_wavefn(run)
        elif run.command == "verify":
            table, ok = cmd_verify(run)
        elif run.command == "thermo":
            table = cmd_thermo(run)
        else:
            table = cmd_sweep(run)
        _emit(table, run)
        if not ok:
            failed = [f"{r[0]}(n={r[1]},l={r[2]})" for r in table.rows if not r[5]]
            return _error("VERIFY_FAILED", "failing checks: " + ", ".join(failed), EXIT_FAIL)
        return EXIT_OK
    except CliError as exc:
        return _error(exc.code, str(exc), exc.status)
    except ConvergenceError as exc:
        return _error("NUMERICAL_FAILURE", str(exc), EXIT_NUMERIC)
    except GupMagError as exc:
        return _error("CONFIG_INVALID", str(exc), EXIT_USAGE)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
