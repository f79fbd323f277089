"""Command-line front end.

Every command writes a table to stdout (CSV by default, JSON with
``--json``) or, with ``--out DIR``, data files plus a ``manifest.json``
listing the command, all parameters, the library version, tolerances and
SHA-256 checksums of the files written. Lengths are in units of the cavity
length ``L = 1``: masses are given as ``M = mu L`` and accelerations as
``h = a L``.

Exit codes: 0 on success, 2 for invalid arguments, 3 when a solver fails.
"""
from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .bogoliubov import (
    QuadratureError,
    apply_maxwell_sign,
    check_identities,
    coefficients_perturbative,
    coefficients_quadrature,
    figure2_scan,
    loglog_slope,
)
from .modes import CavityConfig, RootFindingError, maxwell_reduction, minkowski_spectrum, rindler_spectrum
from .specfun import AccuracyLossError
from .trajectory import AccelerationProfile, evolve_fourier, evolve_segments
from .unitarity import (
    UnitarityReport,
    appendix_constants,
    f_sum,
    g_sum,
    transverse_verdict,
)

DEFAULT_TOL = 1e-12
FIELDS = ("scalar-dirichlet", "scalar-neumann", "dirac-mit", "maxwell")
_BC = {"scalar-dirichlet": "dirichlet", "scalar-neumann": "neumann", "dirac-mit": "dirac_mit"}
DEFAULT_PAIRS = "0,1;1,2;0,3;0,-3;2,-1;1,-4;0,2"

EXIT_USAGE = 2
EXIT_SOLVER = 3


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# Output plumbing


class Output:
    """Collects tables and documents, then writes them to stdout or a directory."""

    def __init__(self, args, command: str):
        self.args = args
        self.command = command
        self.items: list[tuple[str, str, object]] = []

    def table(self, name: str, header: list[str], rows: list[list]):
        self.items.append((name, "table", (header, rows)))

    def document(self, name: str, obj):
        self.items.append((name, "doc", obj))

    def manifest(self, checksums: dict | None = None) -> dict:
        params = {k: v for k, v in sorted(vars(self.args).items()) if k not in ("func",)}
        m = {"command": self.command, "parameters": params, "library": "relcavity",
             "version": __version__, "tolerance": self.args.tol}
        if checksums is not None:
            m["outputs"] = checksums
        return m

    def flush(self):
        if self.args.out:
            self._write_dir(Path(self.args.out))
        elif self.args.json:
            payload = {name: (_table_json(*obj) if kind == "table" else obj) for name, kind, obj in self.items}
            payload["manifest"] = self.manifest()
            sys.stdout.write(_dumps(payload) + "\n")
        else:
            first = True
            for name, kind, obj in self.items:
                if not first:
                    sys.stdout.write("\n")
                first = False
                if len(self.items) > 1:
                    sys.stdout.write(f"# {name}\n")
                if kind == "table":
                    sys.stdout.write(_table_csv(*obj))
                else:
                    sys.stdout.write(_dumps(obj) + "\n")

    def _write_dir(self, out: Path):
        out.mkdir(parents=True, exist_ok=True)
        sums = {}
        for name, kind, obj in self.items:
            if kind == "table":
                if self.args.json:
                    fname, text = f"{name}.json", _dumps(_table_json(*obj)) + "\n"
                else:
                    fname, text = f"{name}.csv", _table_csv(*obj)
            else:
                fname, text = f"{name}.json", _dumps(obj) + "\n"
            data = text.encode()
            (out / fname).write_bytes(data)
            sums[fname] = hashlib.sha256(data).hexdigest()
        (out / "manifest.json").write_text(_dumps(self.manifest(sums)) + "\n")


def _fmt(x):
    if isinstance(x, (float, np.floating)):
        return repr(float(x))
    if isinstance(x, (np.integer,)):
        return str(int(x))
    return str(x)


def _table_csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([_fmt(x) for x in r])
    return buf.getvalue()


def _plain(x):
    if isinstance(x, (np.floating, float)):
        x = float(x)
        return x if math.isfinite(x) else str(x)
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, np.bool_):
        return bool(x)
    if isinstance(x, np.ndarray):
        return [_plain(v) for v in x.tolist()]
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    return x


def _table_json(header, rows):
    return [dict(zip(header, [_plain(v) for v in r])) for r in rows]


def _dumps(obj) -> str:
    return json.dumps(_plain(obj), indent=2, sort_keys=False)


def _matrix_rows(mat, labels):
    header = ["row"] + [f"{c}_{part}" for c in labels for part in ("re", "im")]
    rows = []
    for lab, r in zip(labels, mat):
        vals = []
        for z in r:
            vals += [float(np.real(z)), float(np.imag(z))]
        rows.append([int(lab)] + vals)
    return header, rows


def _emit_set(out: Output, bset):
    if bset.fermionic:
        out.table("A", *_matrix_rows(bset.A, bset.labels))
    else:
        out.table("alpha", *_matrix_rows(bset.alpha, bset.labels))
        out.table("beta", *_matrix_rows(bset.beta, bset.labels))
    rep = check_identities(bset)
    out.document("identities", {"kind": bset.kind, "method": bset.method, "h": bset.h, "M": bset.M,
                                "bc": bset.bc, "N": bset.N, "residuals": rep.residuals,
                                "second_order_budget": rep.second_order_budget,
                                "tail_budget": rep.tail_budget,
                                "maxwell_pol": bset.maxwell_pol})


# ---------------------------------------------------------------------------
# Commands


def _config(args, h: float = 0.0) -> CavityConfig:
    if args.field == "maxwell":
        for name in ("pol", "m", "n"):
            if getattr(args, name) is None:
                raise UsageError(f"--field maxwell needs --{name}")
        return maxwell_reduction(args.Lx, args.Ly, 1.0, args.m, args.n, args.pol, h=h)
    if args.M is None:
        raise UsageError("--M is required")
    return CavityConfig(L=1.0, mass=args.M, h=h, bc=_BC[args.field])


def cmd_spectrum(args):
    out = Output(args, "spectrum")
    if args.frame == "minkowski":
        spec = minkowski_spectrum(_config(args), args.count)
    else:
        if args.h is None or args.h == 0:
            raise UsageError("--frame rindler needs a nonzero --h")
        cfg = _config(args, args.h)
        spec = rindler_spectrum(cfg, args.count, method=args.method)
        ref = minkowski_spectrum(cfg, args.count)
    modes = sorted(spec.modes, key=lambda m: (m.index < 0, abs(m.index)))
    header = ["index", "frequency", "abs_norm", "phase_tag"]
    dirac = spec.config.fermionic
    if dirac and spec.frame == "minkowski":
        header += ["kL", "phi", "C"]
    if spec.frame == "rindler":
        header += ["h_Omega_over_omega"]
    rows = []
    for m in modes:
        r = [m.index, m.frequency, abs(m.normalization), m.phase_tag]
        if dirac and spec.frame == "minkowski":
            r += [m.k, m.phi, m.C]
        if spec.frame == "rindler":
            w = ref.mode(m.index).frequency
            r += [abs(args.h) * m.frequency / w]
        rows.append(r)
    out.table("spectrum", header, rows)
    out.flush()


def _signed_h(args):
    if args.h is None:
        raise UsageError("--h is required")
    h = abs(args.h) if args.direction else args.h
    if args.direction == "left":
        h = -h
    return h


def cmd_bogoliubov(args):
    out = Output(args, "bogoliubov")
    cfg = _config(args, _signed_h(args))
    if args.method == "perturbative":
        bset = coefficients_perturbative(cfg, args.size)
    else:
        bset = coefficients_quadrature(cfg, args.size, tol=args.tol)
    if args.field == "maxwell":
        bset = apply_maxwell_sign(bset, args.pol)
    _emit_set(out, bset)
    out.flush()


def cmd_trajectory(args):
    out = Output(args, "trajectory")
    try:
        with open(args.profile) as fh:
            profile = AccelerationProfile.from_json(json.load(fh))
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read profile: {exc}") from None
    cfg = _config(args)
    if args.method == "fourier":
        res = evolve_fourier(cfg, profile, args.size)
    elif args.method == "segments":
        res = evolve_segments(cfg, profile, args.size)
    else:
        res = evolve_segments(cfg, profile, args.size, method="quadrature")
    bset = res.bogoliubov
    if args.field == "maxwell":
        bset = apply_maxwell_sign(bset, args.pol)
    _emit_set(out, bset)
    out.flush()


def _scan_values(scan):
    start, stop, step = scan
    if step <= 0 or stop < start or start <= 0:
        raise UsageError("--scan needs 0 < START <= STOP and STEP > 0")
    n = int(math.floor((stop - start) / step + 1e-9)) + 1
    return [start + i * step for i in range(n)]


def cmd_unitarity(args):
    out = Output(args, "unitarity")
    report = UnitarityReport(constants={})
    if args.transverse_dim is not None:
        v = transverse_verdict(args.transverse_dim, args.mu0, 1.0, None, args.kcut,
                               field=args.bc, counting=args.counting)
        report.transverse.append(v)
    Ms = []
    if args.scan is not None:
        Ms = _scan_values(args.scan)
    elif args.M is not None:
        Ms = [args.M]
    elif args.transverse_dim is None:
        raise UsageError("give --M, --scan or --transverse-dim")
    for M in Ms:
        if args.bc == "dirac":
            report.sums.append(g_sum(M, cutoff=args.cutoff or 2000))
        else:
            report.sums.append(f_sum(M, args.bc, cutoff=args.cutoff or 400))
    if report.sums:
        report.constants[args.bc] = report.sums[0].constant
        header = ["M", "cutoff", "sum", "M2_sum", "constant", "ratio", "tail_bound"]
        rows = [[s.M, s.cutoff, s.value, s.scaled, s.constant, s.relative_to_constant, s.tail_bound]
                for s in report.sums]
        out.table("scan", header, rows)
    out.document("report", report.to_dict())
    out.flush()


def cmd_asymptotics(args):
    out = Output(args, "asymptotics")
    epsrel = min(max(args.tol, 1e-12), 1e-7)
    res = appendix_constants(epsrel=epsrel)
    header = ["field", "value", "closed_form", "relative_deviation", "error_estimate"]
    rows = [[k, v["value"], v["closed_form"], v["relative_deviation"], v["error_estimate"]] for k, v in res.items()]
    out.table("constants", header, rows)
    out.flush()


def _parse_pairs(text):
    pairs = []
    try:
        for item in text.split(";"):
            if item.strip():
                a, b = item.split(",")
                pairs.append((int(a), int(b)))
    except ValueError:
        raise UsageError(f"cannot parse --pairs {text!r}; expected 'nk,nl;nk,nl;...'") from None
    if not pairs:
        raise UsageError("--pairs is empty")
    return pairs


def cmd_figure2(args):
    out = Output(args, "figure2")
    lo, hi = args.M_range
    if not 0 < lo < hi:
        raise UsageError("--M-range needs 0 < LO < HI")
    pairs = _parse_pairs(args.pairs)
    Ms = np.geomspace(lo, hi, args.points)
    vals = figure2_scan(Ms, pairs)
    names = [f"A_{a}_{b}" for a, b in pairs]
    out.table("figure2", ["M"] + names, [[M] + list(r) for M, r in zip(Ms, vals)])
    Ma = np.geomspace(1e3, 1e4, 9)
    va = figure2_scan(Ma, pairs)
    rows = []
    for j, (a, b) in enumerate(pairs):
        if (a + b) % 2 == 0:
            rows.append([a, b, "parity-forbidden", "nan", "nan"])
            continue
        kind = "same-sign" if (a >= 0) == (b >= 0) else "opposite-sign"
        if np.all(vals[:, j] > 0):
            s = loglog_slope(Ms, vals[:, j])
        else:
            s = float("nan")
        sa = loglog_slope(Ma, va[:, j]) if np.all(va[:, j] > 0) else float("nan")
        rows.append([a, b, kind, s, sa])
    out.table("slopes", ["nk", "nl", "kind", "slope", "slope_M_1e3_1e4"], rows)
    out.flush()


# ---------------------------------------------------------------------------


def _add_common(p):
    fmt = p.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_true", help="emit JSON instead of CSV")
    fmt.add_argument("--csv", action="store_true", help="emit CSV (default)")
    p.add_argument("--tol", type=float, default=None,
                   help="quadrature tolerance (default $CAVITY_TOL or %g)" % DEFAULT_TOL)
    p.add_argument("--out", default=None, help="write files and manifest.json into this directory")


def _add_field(p, with_mass=True):
    p.add_argument("--field", choices=FIELDS, required=True)
    if with_mass:
        p.add_argument("--M", type=float, default=None, help="dimensionless mass mu L")
    p.add_argument("--pol", choices=("I", "II"), default=None, help="Maxwell polarisation class")
    p.add_argument("--m", type=int, default=None, help="Maxwell transverse index m")
    p.add_argument("--n", type=int, default=None, help="Maxwell transverse index n")
    p.add_argument("--Lx", type=float, default=1.0)
    p.add_argument("--Ly", type=float, default=1.0)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="relcavity", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("spectrum", help="eigenfrequencies and normalisations")
    _add_field(p)
    p.add_argument("--frame", choices=("minkowski", "rindler"), default="minkowski")
    p.add_argument("--h", type=float, default=None)
    p.add_argument("--count", type=int, default=4)
    p.add_argument("--method", choices=("auto", "bessel", "ode"), default="auto")
    _add_common(p)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("bogoliubov", help="Bogoliubov matrices for uniform acceleration")
    _add_field(p)
    p.add_argument("--method", choices=("perturbative", "quadrature"), default="perturbative")
    p.add_argument("--h", type=float, default=None)
    p.add_argument("--direction", choices=("right", "left"), default=None)
    p.add_argument("--size", type=int, default=6)
    _add_common(p)
    p.set_defaults(func=cmd_bogoliubov)

    p = sub.add_parser("trajectory", help="Bogoliubov matrices for an acceleration profile")
    _add_field(p)
    p.add_argument("--profile", required=True, help="profile JSON file")
    p.add_argument("--method", choices=("segments", "fourier", "segments-quadrature"), default="segments")
    p.add_argument("--size", type=int, default=6)
    _add_common(p)
    p.set_defaults(func=cmd_trajectory)

    p = sub.add_parser("unitarity", help="Hilbert-Schmidt sums and transverse verdicts")
    p.add_argument("--bc", choices=("dirichlet", "neumann", "dirac"), default="dirichlet")
    p.add_argument("--M", type=float, default=None)
    p.add_argument("--scan", type=float, nargs=3, metavar=("START", "STOP", "STEP"), default=None)
    p.add_argument("--cutoff", type=int, default=None, help="index cutoff (default 400 scalar, 2000 Dirac)")
    p.add_argument("--transverse-dim", type=int, default=None, dest="transverse_dim",
                   help="spatial dimension d for the transverse sum")
    p.add_argument("--mu0", type=float, default=1.0, help="genuine mass times L for the transverse sum")
    p.add_argument("--kcut", type=float, default=400.0, help="transverse momentum cutoff times L")
    p.add_argument("--counting", choices=("pol_I", "pol_II"), default="pol_I")
    _add_common(p)
    p.set_defaults(func=cmd_unitarity)

    p = sub.add_parser("asymptotics", help="large-M constants by two-dimensional quadrature")
    _add_common(p)
    p.set_defaults(func=cmd_asymptotics)

    p = sub.add_parser("figure2", help="|A_hat| against M with fitted log-log slopes")
    p.add_argument("--M-range", type=float, nargs=2, metavar=("LO", "HI"), default=(10.0, 100.0), dest="M_range")
    p.add_argument("--points", type=int, default=19)
    p.add_argument("--pairs", default=DEFAULT_PAIRS, help="label pairs 'nk,nl;nk,nl;...'")
    _add_common(p)
    p.set_defaults(func=cmd_figure2)
    return parser


def _resolve_tol(args, parser):
    if args.tol is None:
        env = os.environ.get("CAVITY_TOL")
        if env is not None:
            try:
                args.tol = float(env)
            except ValueError:
                parser.error(f"CAVITY_TOL is not a number: {env!r}")
        else:
            args.tol = DEFAULT_TOL
    if not args.tol > 0:
        parser.error("--tol must be positive")


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    _resolve_tol(args, parser)
    try:
        args.func(args)
    except (UsageError, ValueError) as exc:
        print(f"relcavity {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (RootFindingError, QuadratureError, AccuracyLossError, ZeroDivisionError, ArithmeticError) as exc:
        print(f"relcavity {args.command}: solver failure: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    return 0


if __name__ == "__main__":
    sys.exit(main())
