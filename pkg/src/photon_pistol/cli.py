"""
Command-line interface: ``photon-pistol {emit,sweep,classify,validate}``.

Exit codes: 0 success, 1 numerical or I/O failure, 2 invalid configuration,
3 classification identity violated, 4 oracle deviation above tolerance.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from pathlib import Path
from typing import Sequence

import numpy as np

from .angular import as_half_integer
from .coupling import Geometry, LevelScheme
from .dynamics import DEFAULT_STEPS, PulseSchedule, integrate
from .exceptions import AccuracyError, ConsistencyError, DomainError
from .spectral import TOL_ENV_VAR, default_tol_rel
from .stirap import AtomicState, EmissionResult, classify, emission, sweep_psi

EXIT_OK = 0
EXIT_NUMERICAL = 1
EXIT_CONFIG = 2
EXIT_IDENTITY = 3
EXIT_TOLERANCE = 4

SWEEP_HEADER = ("psi", "w", "xi1", "xi2", "xi3", "P", "defined")


class ConfigError(Exception):
    """Invalid command-line configuration; ``flag`` names the offending option."""

    def __init__(self, flag: str, message: str):
        super().__init__(f"{flag}: {message}")
        self.flag = flag


def fmt(x: float | None) -> str:
    """Nine significant digits, lowercase scientific notation."""
    if x is None or (isinstance(x, float) and math.isnan(x)):
        return "nan"
    return f"{x:.8e}"


def _json_number(x: float | None):
    if x is None or math.isnan(x):
        return None
    return float(fmt(x))


# --- configuration parsing ---------------------------------------------------


def _scheme(args) -> LevelScheme:
    try:
        ja = as_half_integer(args.ja)
    except DomainError as exc:
        raise ConfigError("--ja", str(exc)) from None
    try:
        jb = as_half_integer(args.jb)
    except DomainError as exc:
        raise ConfigError("--jb", str(exc)) from None
    try:
        jc = as_half_integer(args.jc)
    except DomainError as exc:
        raise ConfigError("--jc", str(exc)) from None
    try:
        return LevelScheme(ja, jb, jc)
    except DomainError as exc:
        raise ConfigError("--ja/--jb/--jc", str(exc)) from None


def _load_matrix(path: str, n: int) -> np.ndarray:
    try:
        raw = json.loads(Path(path).read_text())
    except (OSError, ValueError) as exc:
        raise ConfigError("--initial", f"cannot read {path}: {exc}") from None
    arr = np.asarray(raw, dtype=float)
    if arr.shape == (n, n, 2):
        pass
    elif arr.shape == (n * n, 2):
        arr = arr.reshape(n, n, 2)
    else:
        raise ConfigError("--initial", f"{path} must hold {n}x{n} [re, im] pairs, got shape {arr.shape}")
    return arr[..., 0] + 1j * arr[..., 1]


def _initial(args, scheme: LevelScheme) -> AtomicState:
    source = args.initial
    try:
        if source == "equilibrium":
            return AtomicState.equilibrium(scheme)
        if source.startswith("pure:"):
            return AtomicState.pure(scheme, source[len("pure:"):])
        if source.startswith("file:"):
            return AtomicState(_load_matrix(source[len("file:"):], scheme.n_a))
    except DomainError as exc:
        raise ConfigError("--initial", str(exc)) from None
    raise ConfigError("--initial", f"expected equilibrium, pure:m or file:path, got {source!r}")


def _geometry(args) -> Geometry:
    try:
        if args.lc is not None:
            l_c = np.asarray(args.lc, dtype=complex)
            return Geometry(l_c=l_c / np.linalg.norm(l_c))
        if args.psi_deg is not None:
            return Geometry.from_psi(math.radians(args.psi_deg))
        return Geometry.from_psi(args.psi)
    except (DomainError, ZeroDivisionError, FloatingPointError) as exc:
        raise ConfigError("--lc", str(exc)) from None


def _tol(args) -> float:
    if args.tol_rel is not None:
        if not (0.0 < args.tol_rel < 1.0):
            raise ConfigError("--tol-rel", "must lie in (0, 1)")
        return args.tol_rel
    try:
        return default_tol_rel()
    except DomainError as exc:
        raise ConfigError(TOL_ENV_VAR, str(exc)) from None


def _psi_grid(text: str) -> np.ndarray:
    parts = text.split(":")
    if len(parts) != 3:
        raise ConfigError("--psi-grid", "expected start:stop:count")
    try:
        start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise ConfigError("--psi-grid", f"cannot parse {text!r}") from None
    if count < 2:
        raise ConfigError("--psi-grid", "count must be at least 2")
    return np.linspace(start, stop, count)


# --- output -------------------------------------------------------------------


def _emission_record(res: EmissionResult) -> dict:
    xi = res.stokes if res.defined else (None, None, None)
    return {
        "w": _json_number(res.w),
        "xi1": _json_number(xi[0]),
        "xi2": _json_number(xi[1]),
        "xi3": _json_number(xi[2]),
        "P": _json_number(res.P),
        "defined": res.defined,
    }


def _write_csv(rows: Sequence[Sequence[str]], stream) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerows(rows)


def _emission_csv(res: EmissionResult) -> list[list[str]]:
    xi = res.stokes if res.defined else (None, None, None)
    return [
        ["w", "xi1", "xi2", "xi3", "P", "defined"],
        [fmt(res.w), fmt(xi[0]), fmt(xi[1]), fmt(xi[2]), fmt(res.P), str(res.defined).lower()],
    ]


# --- commands -----------------------------------------------------------------


def cmd_emit(args, out) -> int:
    scheme = _scheme(args)
    initial = _initial(args, scheme)
    geometry = _geometry(args)
    res = emission(scheme, geometry, initial, tol_rel=_tol(args))
    if args.format == "csv":
        _write_csv(_emission_csv(res), out)
    else:
        out.write(json.dumps(_emission_record(res)) + "\n")
    return EXIT_OK


def cmd_sweep(args, out) -> int:
    scheme = _scheme(args)
    initial = _initial(args, scheme)
    grid = _psi_grid(args.psi_grid)
    rows = sweep_psi(scheme, initial, grid, tol_rel=_tol(args))
    table = [list(SWEEP_HEADER)]
    for r in rows:
        table.append([fmt(r.psi), fmt(r.w), fmt(r.xi1), fmt(r.xi2), fmt(r.xi3), fmt(r.P), str(r.defined).lower()])
    if args.out is None:
        _write_csv(table, out)
        return EXIT_OK
    buf = io.StringIO()
    _write_csv(table, buf)
    try:
        Path(args.out).write_text(buf.getvalue())
    except OSError as exc:
        print(f"photon-pistol: cannot write {args.out}: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    return EXIT_OK


def cmd_classify(args, out) -> int:
    scheme = _scheme(args)
    geometry = _geometry(args)
    report = classify(scheme, geometry, tol_rel=_tol(args))
    identities = report.identities()
    if args.format == "csv":
        counts = report.as_dict()
        keys = list(counts) + list(identities)
        values = [str(v) for v in counts.values()] + [str(v).lower() for v in identities.values()]
        _write_csv([keys, values], out)
    else:
        record = dict(
            report.as_dict(),
            identities=identities,
            ok=report.ok,
            ground_level_resolved=report.ground_level_resolved,
        )
        out.write(json.dumps(record) + "\n")
    return EXIT_OK if report.ok else EXIT_IDENTITY


def cmd_validate(args, out) -> int:
    scheme = _scheme(args)
    initial = _initial(args, scheme)
    geometry = _geometry(args)
    try:
        schedule = PulseSchedule(args.omega_a0, args.omega_b0, args.duration, args.detuning, args.shape)
    except DomainError as exc:
        raise ConfigError("--omega-a0/--omega-b0/--duration", str(exc)) from None
    if args.steps < 1:
        raise ConfigError("--steps", "must be positive")
    closed = emission(scheme, geometry, initial, tol_rel=_tol(args))
    # with the drive off nothing leaves level a; the adiabatic formula assumes omega_a(T) > 0
    w_expected = closed.w if args.omega_a0 > 0 else 0.0
    traj = integrate(scheme, geometry, initial, schedule, steps=args.steps)
    deviation = abs(traj.w_num - w_expected)
    passed = deviation <= args.tolerance
    record = {
        "w_closed": _json_number(w_expected),
        "w_num": _json_number(traj.w_num),
        "deviation": _json_number(deviation),
        "tolerance": args.tolerance,
        "P_closed": _json_number(closed.P),
        "P_num": _json_number(traj.P_num),
        "leakage": _json_number(traj.leakage),
        "pass": passed,
    }
    if args.format == "csv":
        _write_csv([list(record), [fmt(v) if isinstance(v, float) else str(v).lower() for v in record.values()]], out)
    else:
        out.write(json.dumps(record) + "\n")
    return EXIT_OK if passed else EXIT_TOLERANCE


# --- parser -------------------------------------------------------------------


def _add_scheme(p: argparse.ArgumentParser) -> None:
    p.add_argument("--ja", required=True, help="ground-level momentum J_a, e.g. 3 or 1/2")
    p.add_argument("--jb", required=True, help="final-level momentum J_b")
    p.add_argument("--jc", required=True, help="excited-level momentum J_c")


def _add_geometry(p: argparse.ArgumentParser) -> None:
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--psi", type=float, help="drive angle from the cavity axis in radians")
    g.add_argument("--psi-deg", type=float, help="drive angle in degrees")
    g.add_argument("--lc", type=complex, nargs=3, metavar=("X", "Y", "Z"),
                   help="explicit drive polarization as three Python complex literals")


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--tol-rel", type=float, default=None,
                   help=f"relative rank tolerance (default: ${TOL_ENV_VAR} or 1e-10)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="photon-pistol",
        description="Emission probability and polarization of a vacuum-STIRAP photon.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    emit = sub.add_parser("emit", help="single emission result")
    _add_scheme(emit)
    emit.add_argument("--initial", required=True, help="equilibrium | pure:m | file:path")
    _add_geometry(emit)
    _add_common(emit)

    sweep = sub.add_parser("sweep", help="emission versus drive angle, as CSV")
    _add_scheme(sweep)
    sweep.add_argument("--initial", required=True, help="equilibrium | pure:m | file:path")
    sweep.add_argument("--psi-grid", required=True, help="start:stop:count in radians")
    sweep.add_argument("--out", default=None, help="CSV path (default: standard output)")
    sweep.add_argument("--tol-rel", type=float, default=None)

    cls = sub.add_parser("classify", help="eigenvector family counts")
    _add_scheme(cls)
    _add_geometry(cls)
    _add_common(cls)

    val = sub.add_parser("validate", help="compare with time-domain integration")
    _add_scheme(val)
    val.add_argument("--initial", required=True, help="equilibrium | pure:m | file:path")
    _add_geometry(val)
    _add_common(val)
    val.add_argument("--omega-a0", type=float, default=1.0, help="final drive Rabi frequency")
    val.add_argument("--omega-b0", type=float, default=1.0, help="initial cavity Rabi frequency")
    val.add_argument("--duration", type=float, default=200.0, help="pulse duration T")
    val.add_argument("--detuning", type=float, default=0.0, help="common Raman detuning")
    val.add_argument("--shape", choices=("sine", "smoothstep"), default="sine")
    val.add_argument("--steps", type=int, default=DEFAULT_STEPS)
    val.add_argument("--tolerance", type=float, default=0.02)
    return parser


COMMANDS = {"emit": cmd_emit, "sweep": cmd_sweep, "classify": cmd_classify, "validate": cmd_validate}


def main(argv: Sequence[str] | None = None, out=None) -> int:
    out = sys.stdout if out is None else out
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return COMMANDS[args.command](args, out)
    except ConfigError as exc:
        print(f"photon-pistol {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (DomainError, AccuracyError, ConsistencyError, np.linalg.LinAlgError) as exc:
        print(f"photon-pistol {args.command}: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
