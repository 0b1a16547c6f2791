"""Command line front end.

Subcommands: ``spectrum``, ``kappa``, ``asymptotics``, ``pseudospectrum``,
``semigroup``, ``verify``.  All commands share the same flags; an optional
TOML config file overrides flags when provided.  Angles are radians only.
Outputs are deterministic (no timestamps) and floating CSV fields carry
17 significant digits.

Exit codes: 0 success, 1 domain/configuration error, 2 numerical-accuracy
error (including acceptance failures under ``verify``).
"""

import argparse
import csv
import json
import math
import os
import sys
from dataclasses import dataclass

import numpy as np

from . import acceptance
from .asymptotics import OscillatorParams, asymptotic_report, growth_rate
from .errors import (AccuracyError, DomainError, RefusalError,
                     SpectralInstabilityError)
from .pseudospectra import (GridSpec, resolvent_grid, write_grid_csv,
                            write_grid_json)
from .semigroup import (semigroup_report, write_report_json,
                        write_term_norms_csv)
from .spectral import DiscretizationConfig, rate_fit, solve_spectrum

__all__ = ["RunConfig", "run", "main", "read_spectrum_csv", "read_kappa_csv"]

COMMANDS = ("spectrum", "kappa", "asymptotics", "pseudospectrum",
            "semigroup", "verify")


@dataclass
class RunConfig:
    command: str
    params: OscillatorParams | None
    discretization: DiscretizationConfig
    grid: GridSpec | None = None
    t_values: list[float] | None = None
    output_dir: str = "out"
    format: str = "both"
    full_verify: bool = False


def _fmt(x) -> str:
    return format(float(x), ".17g")


def _write_json(path, payload) -> None:
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=1)
        fh.write("\n")


# ----------------------------------------------------------------------
# Command implementations
# ----------------------------------------------------------------------

def _cmd_spectrum(cfg: RunConfig) -> list[str]:
    result = solve_spectrum(cfg.params, cfg.discretization)
    written = []
    rows = [(p.index, p.eigenvalue.real, p.eigenvalue.imag, r)
            for p, r in zip(result.pairs, result.residuals)]
    if cfg.format in ("csv", "both"):
        path = os.path.join(cfg.output_dir, "spectrum.csv")
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["n", "re_lambda", "im_lambda", "residual"])
            for n, re, im, res in rows:
                writer.writerow([n, _fmt(re), _fmt(im), _fmt(res)])
        written.append(path)
    if cfg.format in ("json", "both"):
        path = os.path.join(cfg.output_dir, "spectrum.json")
        _write_json(path, {
            "k": cfg.params.k, "theta": cfg.params.theta,
            "basis_size": cfg.discretization.basis_size,
            "n_max": cfg.discretization.n_max,
            "scale": cfg.discretization.effective_scale(cfg.params.k),
            "pairs": [{"n": n, "re_lambda": re, "im_lambda": im,
                       "residual": res} for n, re, im, res in rows],
        })
        written.append(path)
    return written


def _cmd_kappa(cfg: RunConfig) -> list[str]:
    result = solve_spectrum(cfg.params, cfg.discretization)
    n_max = cfg.discretization.n_max
    window = (max(1, n_max - 15), n_max)
    fit = rate_fit(result, window)
    rate = growth_rate(cfg.params)
    gap = abs(fit.slope - rate) / rate if rate > 0 else None
    fit_block = dict(fit.to_dict(), rate=rate, relative_gap=gap)
    rows = [(p.index, abs(p.eigenvalue), p.kappa,
             math.log(p.kappa) if math.isfinite(p.kappa) else None,
             p.kappa_flag) for p in result.pairs]
    written = []
    if cfg.format in ("csv", "both"):
        path = os.path.join(cfg.output_dir, "kappa.csv")
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["n", "modulus", "kappa", "log_kappa", "flag"])
            for n, mod, kap, logk, flag in rows:
                writer.writerow([n, _fmt(mod), _fmt(kap),
                                 "" if logk is None else _fmt(logk), flag])
        written.append(path)
    if cfg.format in ("json", "both"):
        path = os.path.join(cfg.output_dir, "kappa.json")
        _write_json(path, {
            "k": cfg.params.k, "theta": cfg.params.theta,
            "basis_size": cfg.discretization.basis_size,
            "n_max": n_max,
            "rows": [{"n": n, "modulus": mod,
                      "kappa": None if math.isinf(kap) else kap,
                      "log_kappa": logk, "flag": flag}
                     for n, mod, kap, logk, flag in rows],
            "rate_fit": fit_block,
        })
        written.append(path)
    return written


def _cmd_asymptotics(cfg: RunConfig) -> list[str]:
    report = asymptotic_report(cfg.params).to_dict()
    written = []
    if cfg.format in ("json", "both"):
        path = os.path.join(cfg.output_dir, "asymptotics.json")
        _write_json(path, report)
        written.append(path)
    if cfg.format in ("csv", "both"):
        path = os.path.join(cfg.output_dir, "asymptotics.csv")
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["field", "value"])
            for key, value in report.items():
                if isinstance(value, float):
                    value = _fmt(value)
                writer.writerow([key, "" if value is None else value])
        written.append(path)
    return written


def _cmd_pseudospectrum(cfg: RunConfig) -> list[str]:
    if cfg.grid is None:
        raise DomainError("pseudospectrum requires --grid re0,re1,im0,im1,nx,ny")
    grid = resolvent_grid(cfg.params, cfg.discretization, cfg.grid)
    written = []
    if cfg.format in ("csv", "both"):
        path = os.path.join(cfg.output_dir, "pseudospectrum.csv")
        write_grid_csv(grid, path)
        written.append(path)
    if cfg.format in ("json", "both"):
        path = os.path.join(cfg.output_dir, "pseudospectrum.json")
        write_grid_json(grid, path)
        written.append(path)
    if "warning" in grid.metadata:
        print(f"warning: {grid.metadata['warning']}", file=sys.stderr)
    return written


def _cmd_semigroup(cfg: RunConfig) -> list[str]:
    if not cfg.t_values:
        raise DomainError("semigroup requires --t t1,t2,...")
    written = []
    spectrum = solve_spectrum(cfg.params, cfg.discretization)
    for i, t in enumerate(cfg.t_values):
        report = semigroup_report(cfg.params, cfg.discretization, t,
                                  spectrum=spectrum)
        if cfg.format in ("json", "both"):
            path = os.path.join(cfg.output_dir, f"semigroup_{i}.json")
            write_report_json(report, path)
            written.append(path)
        if cfg.format in ("csv", "both"):
            path = os.path.join(cfg.output_dir, f"term_norms_{i}.csv")
            write_term_norms_csv(report, path)
            written.append(path)
    return written


def _cmd_verify(cfg: RunConfig) -> tuple[list[str], bool]:
    if cfg.params is not None and not cfg.full_verify:
        results = acceptance.parameter_checks(cfg.params, cfg.discretization)
        scope = {"k": cfg.params.k, "theta": cfg.params.theta}
    else:
        results = acceptance.run_all()
        scope = "full"
    payload = {
        "scope": scope,
        "passed": all(r.passed for r in results),
        "results": [{"criterion": r.criterion, "passed": r.passed,
                     "detail": r.detail} for r in results],
    }
    path = os.path.join(cfg.output_dir, "verify.json")
    _write_json(path, payload)
    return [path], payload["passed"]


# ----------------------------------------------------------------------
# Readers (round-trip counterparts of the CSV writers above)
# ----------------------------------------------------------------------

def read_spectrum_csv(path) -> np.ndarray:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        if next(reader) != ["n", "re_lambda", "im_lambda", "residual"]:
            raise DomainError("unexpected spectrum CSV header")
        return np.array([[float(c) for c in row] for row in reader])


def read_kappa_csv(path) -> list[dict]:
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        rows = []
        for row in reader:
            rows.append({
                "n": int(row["n"]), "modulus": float(row["modulus"]),
                "kappa": float(row["kappa"]),
                "log_kappa": float(row["log_kappa"]) if row["log_kappa"] else None,
                "flag": row["flag"],
            })
        return rows


# ----------------------------------------------------------------------
# Argument handling
# ----------------------------------------------------------------------

def _load_toml(path) -> dict:
    try:
        import tomllib as toml_reader  # Python >= 3.11
    except ModuleNotFoundError:
        import tomli as toml_reader
    with open(path, "rb") as fh:
        return toml_reader.load(fh)


def _parse_grid(text: str) -> GridSpec:
    parts = text.split(",")
    if len(parts) != 6:
        raise DomainError("--grid needs exactly re0,re1,im0,im1,nx,ny")
    re0, re1, im0, im1 = (float(p) for p in parts[:4])
    nx, ny = int(parts[4]), int(parts[5])
    return GridSpec(re_min=re0, re_max=re1, im_min=im0, im_max=im1,
                    nx=nx, ny=ny)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spectral-instability",
        description="Spectra, instability indices, pseudospectra and "
                    "semigroup series of rotated anharmonic oscillators.")
    sub = parser.add_subparsers(dest="command", metavar="command")
    for name, helptext in (
            ("spectrum", "eigenvalues and residuals of the trusted window"),
            ("kappa", "instability indices and exponential rate fit"),
            ("asymptotics", "closed-form asymptotic constants"),
            ("pseudospectrum", "resolvent-norm grid over a complex rectangle"),
            ("semigroup", "projection-series report at given times"),
            ("verify", "acceptance suite (full) or per-parameter checks")):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("--k", type=int, default=None,
                       help="potential half-degree (potential x^{2k})")
        p.add_argument("--theta", type=float, default=None,
                       help="rotation angle in radians (|theta| < (k+1)pi/2k)")
        p.add_argument("--basis-size", type=int, default=300)
        p.add_argument("--n-max", type=int, default=25)
        p.add_argument("--scale", type=float, default=None,
                       help="basis dilation (default: balanced heuristic)")
        p.add_argument("--grid", type=str, default=None,
                       metavar="re0,re1,im0,im1,nx,ny")
        p.add_argument("--t", type=str, default=None,
                       help="comma-separated times for the semigroup series")
        p.add_argument("--out", type=str, default="out")
        p.add_argument("--format", choices=("json", "csv", "both"),
                       default="both")
        p.add_argument("--config", type=str, default=None,
                       help="TOML file whose keys override the flags")
        if name == "verify":
            p.add_argument("--full", action="store_true",
                           help="run the full acceptance suite even with "
                                "--k/--theta given")
    return parser


def parse_config(argv) -> RunConfig:
    parser = build_parser()
    ns = parser.parse_args(argv)
    if ns.command is None:
        parser.print_usage(sys.stderr)
        raise DomainError("missing command")
    overrides = _load_toml(ns.config) if ns.config else {}

    def pick(flag, key, cast=None):
        value = overrides.get(key, flag)
        if value is not None and cast is not None:
            value = cast(value)
        return value

    k = pick(ns.k, "k", int)
    theta = pick(ns.theta, "theta", float)
    params = None
    if theta is not None or ns.command != "verify":
        if k is None:
            k = 1
        if theta is None:
            raise DomainError(f"{ns.command} requires --theta (radians)")
        params = OscillatorParams(k, theta)
    discretization = DiscretizationConfig(
        basis_size=pick(ns.basis_size, "basis_size", int),
        n_max=pick(ns.n_max, "n_max", int),
        scale=pick(ns.scale, "scale", float))
    grid_text = pick(ns.grid, "grid")
    t_text = pick(ns.t, "t")
    if isinstance(t_text, str):
        t_values = [float(s) for s in t_text.split(",") if s]
    elif t_text is None:
        t_values = None
    else:
        t_values = [float(x) for x in t_text]
    return RunConfig(
        command=ns.command,
        params=params,
        discretization=discretization,
        grid=_parse_grid(grid_text) if isinstance(grid_text, str) else grid_text,
        t_values=t_values,
        output_dir=pick(ns.out, "out"),
        format=pick(ns.format, "format"),
        full_verify=getattr(ns, "full", False),
    )


def run(cfg: RunConfig) -> int:
    """Execute one command; returns the process exit status."""
    os.makedirs(cfg.output_dir, exist_ok=True)
    verify_ok = True
    if cfg.command == "spectrum":
        written = _cmd_spectrum(cfg)
    elif cfg.command == "kappa":
        written = _cmd_kappa(cfg)
    elif cfg.command == "asymptotics":
        written = _cmd_asymptotics(cfg)
    elif cfg.command == "pseudospectrum":
        written = _cmd_pseudospectrum(cfg)
    elif cfg.command == "semigroup":
        written = _cmd_semigroup(cfg)
    elif cfg.command == "verify":
        written, verify_ok = _cmd_verify(cfg)
    else:
        raise DomainError(f"unknown command {cfg.command!r}")
    for path in written:
        print(f"wrote {path}")
    return 0 if verify_ok else 2


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        cfg = parse_config(argv)
        return run(cfg)
    except (RefusalError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (AccuracyError, SpectralInstabilityError) as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
