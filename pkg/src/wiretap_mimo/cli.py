"""Command-line surface: scenario files in, capacity tables out.

Subcommands: ``solve`` (single power point), ``sweep`` (power grid),
``certify`` (ZF/WF/IS verdicts), ``oracle`` (Monte-Carlo estimate) and
``figure`` (built-in demo sweeps).  Scenario files are JSON; matrices are
row-major nested arrays with complex entries written as [re, im] pairs and a
"matrix_kind" field choosing between Gram matrices (W) and raw channels (H).

Output is CSV (stable header: snr_db,p_t,solver,capacity,lower,upper,lambda,
active_modes,status) or JSON.  Capacities are in nats unless --units bits.
Exit codes: 0 success, 1 input error, 2 solver non-convergence.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import certificates, common_rsv, omnidirectional, weak_eavesdropper
from .core import (ChannelPair, ConvergenceError, NATS_PER_BIT, SolveStatus)
from .isotropic import IsotropicProblem, capacity_bounds_isotropic, solve_isotropic
from .oracle import Objective, OracleConfig, mc_capacity

CSV_HEADER = "snr_db,p_t,solver,capacity,lower,upper,lambda,active_modes,status"

_SOLVER_NAMES = ("auto", "weak", "isotropic", "omni", "rsv", "certify", "oracle")


@dataclass
class ScenarioSpec:
    pair: ChannelPair
    grid: list[tuple[float, float]]  # (snr_db, p_t) in grid order
    solvers: list[str]
    oracle_cfg: OracleConfig
    out_format: str = "csv"
    units: str = "nats"


@dataclass
class Row:
    snr_db: float
    p_t: float
    solver: str
    capacity: Optional[float] = None
    lower: Optional[float] = None
    upper: Optional[float] = None
    lam: Optional[float] = None
    active_modes: Optional[int] = None
    status: str = ""
    covariance: Optional[np.ndarray] = None  # emitted by `solve` in JSON mode


def _parse_entry(entry, where: str) -> complex:
    if isinstance(entry, (int, float)):
        return complex(entry)
    if (isinstance(entry, list) and len(entry) == 2
            and all(isinstance(v, (int, float)) for v in entry)):
        return complex(entry[0], entry[1])
    raise ValueError(f"{where}: matrix entries must be numbers or [re, im] pairs")


def _parse_matrix(obj, where: str) -> np.ndarray:
    if not isinstance(obj, list) or not obj:
        raise ValueError(f"{where}: expected a nonempty nested array")
    rows = []
    for i, row in enumerate(obj):
        if not isinstance(row, list) or not row:
            raise ValueError(f"{where}: row {i} is not a nonempty array")
        rows.append([_parse_entry(e, f"{where}[{i}][{j}]")
                     for j, e in enumerate(row)])
    if len({len(r) for r in rows}) != 1:
        raise ValueError(f"{where}: rows have inconsistent lengths")
    mat = np.array(rows, dtype=complex)
    if np.all(mat.imag == 0):
        return mat.real
    return mat


def _parse_channel(obj, rank_tol: float) -> ChannelPair:
    if not isinstance(obj, dict):
        raise ValueError("field 'channel': expected an object")
    kind = obj.get("matrix_kind")
    if kind == "W":
        keys = ("w1", "w2")
    elif kind == "H":
        keys = ("h1", "h2")
    else:
        raise ValueError("field 'channel.matrix_kind': must be 'W' or 'H'")
    extra = set(obj) - {"matrix_kind", *keys}
    if extra or not all(k in obj for k in keys):
        raise ValueError(
            f"field 'channel': exactly one channel source is allowed; "
            f"matrix_kind {kind!r} requires keys {keys}")
    a = _parse_matrix(obj[keys[0]], f"channel.{keys[0]}")
    b = _parse_matrix(obj[keys[1]], f"channel.{keys[1]}")
    if kind == "W":
        if a.shape[0] != a.shape[1] or b.shape != a.shape:
            raise ValueError("field 'channel': W1 and W2 must be square with equal shape")
        return ChannelPair.from_gram(a, b, rank_tol=rank_tol)
    return ChannelPair.from_channels(a, b, rank_tol=rank_tol)


def _parse_grid(obj) -> list[tuple[float, float]]:
    if not isinstance(obj, dict):
        raise ValueError("field 'power_grid': expected an object")
    if "p_t" in obj:
        values = obj["p_t"]
        if not isinstance(values, list) or not values:
            raise ValueError("field 'power_grid.p_t': expected a nonempty list")
        grid = []
        for v in values:
            if not isinstance(v, (int, float)) or not v > 0 or not math.isfinite(v):
                raise ValueError(f"field 'power_grid.p_t': invalid power {v!r}")
            grid.append((10.0 * math.log10(v), float(v)))
        return grid
    needed = ("db_start", "db_stop", "db_step")
    if all(k in obj for k in needed):
        start, stop, step = (float(obj[k]) for k in needed)
        if not all(math.isfinite(v) for v in (start, stop, step)) or step <= 0:
            raise ValueError("field 'power_grid': dB range must be finite with step > 0")
        if stop < start:
            raise ValueError("field 'power_grid': db_stop must be >= db_start")
        n = int(math.floor((stop - start) / step + 1e-9)) + 1
        return [(start + i * step, 10.0 ** ((start + i * step) / 10.0))
                for i in range(n)]
    raise ValueError("field 'power_grid': provide either 'p_t' or "
                     "'db_start'/'db_stop'/'db_step'")


def _parse_solvers(obj) -> list[str]:
    if obj is None:
        return ["auto"]
    names = [obj] if isinstance(obj, str) else obj
    if not isinstance(names, list) or not names:
        raise ValueError("field 'solver': expected a name or nonempty list of names")
    for name in names:
        if name not in _SOLVER_NAMES:
            raise ValueError(f"field 'solver': unknown solver {name!r}; "
                             f"choose from {_SOLVER_NAMES}")
    return list(names)


def load_scenario(path: str, rank_tol: float = 1e-10,
                  oracle_overrides: dict | None = None) -> ScenarioSpec:
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as err:
        raise ValueError(f"invalid JSON in {path}: line {err.lineno}: {err.msg}")
    if not isinstance(doc, dict):
        raise ValueError("scenario file must contain a JSON object")
    if "channel" not in doc or "power_grid" not in doc:
        raise ValueError("scenario requires 'channel' and 'power_grid' fields")
    oracle_doc = dict(doc.get("oracle", {}))
    oracle_doc.update(oracle_overrides or {})
    known = {"samples", "seed", "refine_rounds", "grid_points", "complex_sampling"}
    bad = set(oracle_doc) - known
    if bad:
        raise ValueError(f"field 'oracle': unknown keys {sorted(bad)}")
    out_format = doc.get("format", "csv")
    if out_format not in ("csv", "json"):
        raise ValueError("field 'format': must be 'csv' or 'json'")
    units = doc.get("units", "nats")
    if units not in ("nats", "bits"):
        raise ValueError("field 'units': must be 'nats' or 'bits'")
    return ScenarioSpec(
        pair=_parse_channel(doc["channel"], rank_tol),
        grid=_parse_grid(doc["power_grid"]),
        solvers=_parse_solvers(doc.get("solver")),
        oracle_cfg=OracleConfig(**oracle_doc),
        out_format=out_format,
        units=units,
    )


def _weak_row(pair, snr_db, p_t) -> Row:
    bounds = weak_eavesdropper.capacity_bounds_weak(pair, p_t)
    res = weak_eavesdropper.solve_weak(pair, p_t)
    return Row(snr_db, p_t, "weak", res.capacity_nats, bounds.lower_nats,
               bounds.upper_nats, res.lagrange_lambda, res.active_modes,
               res.status.value, res.covariance.entries)


def _iso_row(pair, snr_db, p_t) -> Row:
    cls = omnidirectional.classify_omni(pair.w2)
    if cls.is_omni and cls.r2 == pair.m:
        gains = np.clip(pair.w1.eigenvalues(), 0.0, None)
        res = solve_isotropic(IsotropicProblem(gains, cls.epsilon, p_t))
        return Row(snr_db, p_t, "isotropic", res.capacity_nats,
                   res.capacity_nats, res.capacity_nats, res.lagrange_lambda,
                   res.active_modes, res.status.value)
    bounds = capacity_bounds_isotropic(pair, p_t)
    return Row(snr_db, p_t, "isotropic", bounds.mid_nats, bounds.lower_nats,
               bounds.upper_nats, None, None, SolveStatus.BOUNDS_ONLY.value)


def _omni_row(pair, snr_db, p_t) -> Row:
    res = omnidirectional.solve_omni(pair, p_t)
    lower = upper = None
    if res.bounds is not None:
        lower, upper = res.bounds.lower_nats, res.bounds.upper_nats
    return Row(snr_db, p_t, "omni", res.capacity_nats, lower, upper,
               res.lagrange_lambda, res.active_modes, res.status.value,
               res.covariance.entries)


def _rsv_row(pair, snr_db, p_t) -> Row:
    channel = common_rsv.detect_common_rsv(pair)
    res = common_rsv.solve_common_rsv(channel, p_t)
    return Row(snr_db, p_t, "rsv", res.capacity_nats, None, None,
               res.lagrange_lambda, res.active_modes, res.status.value,
               res.covariance.entries)


def _oracle_row(pair, snr_db, p_t, cfg) -> Row:
    best, best_r = mc_capacity(pair, p_t, Objective.EXACT, cfg)
    return Row(snr_db, p_t, "oracle", best, None, None, None, None,
               "Solved", best_r.entries)


def _certify_rows(pair, snr_db, p_t) -> list[Row]:
    rows = []
    for name, fn in (("certify:zf", certificates.zf_certify),
                     ("certify:wf", certificates.wf_certify),
                     ("certify:is", certificates.is_certify)):
        report = fn(pair, p_t)
        cov = (report.certified_covariance.entries
               if report.certified_covariance is not None else None)
        rows.append(Row(snr_db, p_t, name, report.certified_capacity,
                        None, None, report.details.get("water_lambda"),
                        None, report.verdict.value, cov))
    return rows


def _auto_rows(pair, snr_db, p_t, want_oracle, cfg) -> list[Row]:
    rows: list[Row] = []
    try:
        common_rsv.detect_common_rsv(pair)
        rows.append(_rsv_row(pair, snr_db, p_t))
    except common_rsv.NotCommutingError:
        cls = omnidirectional.classify_omni(pair.w2)
        contained = cls.is_omni and omnidirectional.range_containment_residual(
            pair.w1, cls.active_basis) <= 1e-8
        if contained:
            rows.append(_omni_row(pair, snr_db, p_t))
        else:
            rows.append(_weak_row(pair, snr_db, p_t))
            try:
                rows.append(_iso_row(pair, snr_db, p_t))
            except ValueError:
                pass  # W2 = 0: the weak row already is the exact solution
    if want_oracle:
        rows.append(_oracle_row(pair, snr_db, p_t, cfg))
    return rows


def run_sweep(spec: ScenarioSpec) -> list[Row]:
    """One row per (power point, solver); solver errors land in the status
    column without aborting the rest of the sweep."""
    rows: list[Row] = []
    want_oracle = "oracle" in spec.solvers
    for snr_db, p_t in spec.grid:
        for name in spec.solvers:
            try:
                if name == "auto":
                    rows.extend(_auto_rows(spec.pair, snr_db, p_t,
                                           want_oracle, spec.oracle_cfg))
                elif name == "weak":
                    rows.append(_weak_row(spec.pair, snr_db, p_t))
                elif name == "isotropic":
                    rows.append(_iso_row(spec.pair, snr_db, p_t))
                elif name == "omni":
                    rows.append(_omni_row(spec.pair, snr_db, p_t))
                elif name == "rsv":
                    rows.append(_rsv_row(spec.pair, snr_db, p_t))
                elif name == "certify":
                    rows.extend(_certify_rows(spec.pair, snr_db, p_t))
                elif name == "oracle" and "auto" not in spec.solvers:
                    rows.append(_oracle_row(spec.pair, snr_db, p_t,
                                            spec.oracle_cfg))
            except ConvergenceError:
                raise
            except (ValueError, common_rsv.NotCommutingError) as err:
                rows.append(Row(snr_db, p_t, name, status=f"error: {err}"))
    return rows


def _fig1_spec(cfg: OracleConfig) -> ScenarioSpec:
    pair = ChannelPair.from_gram(np.diag([2.0, 1.0]),
                                 0.1 * np.array([[2.0, 1.0], [1.0, 1.0]]))
    grid = [(float(db), 10.0 ** (db / 10.0)) for db in range(-10, 21)]
    return ScenarioSpec(pair, grid, ["weak", "oracle"], cfg)


def _fig3_rows(cfg: OracleConfig) -> list[Row]:
    gains = np.array([2.0, 1.0])
    rows = []
    for db in range(-10, 31):
        p_t = 10.0 ** (db / 10.0)
        for eps in (0.0, 0.1, 0.5):
            res = solve_isotropic(IsotropicProblem(gains, eps, p_t))
            rows.append(Row(float(db), p_t, f"isotropic(eps={eps:g})",
                            res.capacity_nats, None, None,
                            res.lagrange_lambda, res.active_modes,
                            res.status.value))
    return rows


def _convert(value, units):
    if value is None or units == "nats":
        return value
    return value / NATS_PER_BIT


def _matrix_to_json(mat: np.ndarray):
    if np.iscomplexobj(mat):
        return [[[float(v.real), float(v.imag)] for v in row] for row in mat]
    return [[float(v) for v in row] for row in mat]


def _emit(rows: list[Row], out_format: str, units: str,
          out_path: str | None, with_covariance: bool = False) -> None:
    rate_fields = ("capacity", "lower", "upper")
    if out_format == "csv":
        lines = [CSV_HEADER]
        for r in rows:
            vals = [f"{r.snr_db:.10g}", f"{r.p_t:.10g}", r.solver]
            for name in rate_fields:
                v = _convert(getattr(r, name), units)
                vals.append("" if v is None else f"{v:.10g}")
            vals.append("" if r.lam is None else f"{r.lam:.10g}")
            vals.append("" if r.active_modes is None else str(r.active_modes))
            vals.append(r.status)
            lines.append(",".join(vals))
        text = "\n".join(lines) + "\n"
    else:
        payload = []
        for r in rows:
            item = {
                "snr_db": r.snr_db, "p_t": r.p_t, "solver": r.solver,
                "capacity": _convert(r.capacity, units),
                "lower": _convert(r.lower, units),
                "upper": _convert(r.upper, units),
                "lambda": r.lam, "active_modes": r.active_modes,
                "status": r.status,
            }
            if with_covariance and r.covariance is not None:
                item["covariance"] = _matrix_to_json(r.covariance)
            payload.append(item)
        text = json.dumps(payload, indent=2) + "\n"
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wiretap-mimo",
        description="Secrecy capacities and optimal signaling for Gaussian "
                    "MIMO wiretap channels.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, needs_input=True):
        if needs_input:
            p.add_argument("--input", required=True, help="scenario JSON file")
        p.add_argument("--out", help="output path (default: stdout)")
        p.add_argument("--format", choices=("csv", "json"), default=None)
        p.add_argument("--units", choices=("nats", "bits"), default=None)
        p.add_argument("--seed", type=int, default=None, help="oracle RNG seed")
        p.add_argument("--samples", type=int, default=None,
                       help="oracle sample count")
        p.add_argument("--tol", type=float, default=1e-10,
                       help="relative rank tolerance for matrix construction")

    for name, desc in (("solve", "solve a single power point"),
                       ("sweep", "solve every point of the power grid"),
                       ("certify", "run ZF/WF/IS optimality certificates"),
                       ("oracle", "Monte-Carlo capacity estimate")):
        common(sub.add_parser(name, help=desc))

    fig = sub.add_parser("figure", help="emit data for the built-in demo sweeps")
    fig.add_argument("which", choices=("fig1", "fig3"))
    common(fig, needs_input=False)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        overrides = {}
        if args.seed is not None:
            overrides["seed"] = args.seed
        if args.samples is not None:
            overrides["samples"] = args.samples

        if args.command == "figure":
            cfg = OracleConfig(**overrides)
            if args.which == "fig1":
                rows = run_sweep(_fig1_spec(cfg))
            else:
                rows = _fig3_rows(cfg)
            _emit(rows, args.format or "csv", args.units or "nats", args.out)
            return 0

        spec = load_scenario(args.input, rank_tol=args.tol,
                             oracle_overrides=overrides)
        out_format = args.format or spec.out_format
        units = args.units or spec.units

        if args.command == "solve":
            if len(spec.grid) != 1:
                raise ValueError("'solve' requires exactly one power point; "
                                 "use 'sweep' for grids")
            rows = run_sweep(spec)
            _emit(rows, out_format, units, args.out, with_covariance=True)
        elif args.command == "sweep":
            rows = run_sweep(spec)
            _emit(rows, out_format, units, args.out)
        elif args.command == "certify":
            rows = []
            for snr_db, p_t in spec.grid:
                rows.extend(_certify_rows(spec.pair, snr_db, p_t))
            _emit(rows, out_format, units, args.out, with_covariance=True)
        else:  # oracle
            rows = [_oracle_row(spec.pair, snr_db, p_t, spec.oracle_cfg)
                    for snr_db, p_t in spec.grid]
            _emit(rows, out_format, units, args.out)
        return 0
    except ConvergenceError as err:
        print(f"error: solver failed to converge: {err}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 1


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
