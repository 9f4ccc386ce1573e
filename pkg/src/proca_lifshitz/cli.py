"""Command-line front end.

Commands: ``energy``, ``force``, ``sweep``, ``asym``, ``rs`` and ``check``.
Options may also come from a ``--config`` file of ``key = value`` lines
(``#`` starts a comment); keys are the long option names with dashes or
underscores. Command-line flags take precedence over the file.

Exit codes: 0 success, 1 numerical failure, 2 usage error.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .asymptotics import Regime, asym_energy, asym_force
from .constants import C, HBAR, K_B, GeometryField, ReducedPoint
from .engine import SolverConfig, System, casimir_force, free_energy
from .materials import PerfectConductor, Plasma, Vacuum, parse_material
from .quadrature import ConvergenceError

CSV_HEADER = "# proca-lifshitz v1"
COLUMNS = ("d", "T", "mass", "omega_p", "lambda", "alpha", "theta",
           "E_J", "E_per_area", "F_N", "F_per_area", "err_est", "n_terms")
COMMANDS = ("energy", "force", "sweep", "asym", "rs", "check")
SWEEP_AXES = ("d", "T", "mass", "lambda", "theta", "alpha", "omega_p")


class UsageError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    command: str
    left: str = "pec"
    gap: str = "vacuum"
    right: str | None = None
    d: float = 1e-6
    A: float = 1.0
    mass: float | None = None
    lam: float | None = None
    T: float | None = None
    theta: float | None = None
    alpha: float | None = None
    axis: str | None = None
    start: float | None = None
    stop: float | None = None
    count: int | None = None
    scale: str = "linear"
    rel_tol: float = 1e-10
    fd_step: float = 1e-4
    max_matsubara: int = 10**6
    kappa: float = 1e8
    kR: float = 12.0
    j_max: int = 10
    output: str | None = None
    fmt: str = "csv"

    @property
    def solver(self) -> SolverConfig:
        return SolverConfig(rel_tol=self.rel_tol, max_matsubara=self.max_matsubara,
                            fd_rel_step=self.fd_step)


# option name -> (RunConfig field, type)
_OPTIONS = {
    "left": ("left", str), "gap": ("gap", str), "right": ("right", str),
    "d": ("d", float), "A": ("A", float), "mass": ("mass", float),
    "lambda": ("lam", float), "T": ("T", float), "theta": ("theta", float),
    "alpha": ("alpha", float), "axis": ("axis", str), "from": ("start", float),
    "to": ("stop", float), "count": ("count", int), "scale": ("scale", str),
    "rel-tol": ("rel_tol", float), "fd-step": ("fd_step", float),
    "max-matsubara": ("max_matsubara", int), "kappa": ("kappa", float),
    "kR": ("kR", float), "j-max": ("j_max", int), "output": ("output", str),
    "format": ("fmt", str),
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="proca-lifshitz", description="Casimir energy and force of a Proca field.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--config", help="key = value file; flags override it")
    for name, (_, typ) in _OPTIONS.items():
        p.add_argument(f"--{name}", dest=name, type=typ, default=argparse.SUPPRESS)
    p.add_argument("--json", dest="json", action="store_true", default=argparse.SUPPRESS,
                   help="shorthand for --format json")
    return p


def parse_config_text(text: str) -> dict:
    """``key = value`` lines into a dict keyed by option name."""
    out = {}
    lookup = {k.replace("-", "_").lower(): k for k in _OPTIONS}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"config line {lineno}: expected 'key = value'")
        key, value = (s.strip() for s in line.split("=", 1))
        name = lookup.get(key.replace("-", "_").lower())
        if name is None:
            raise UsageError(f"config line {lineno}: unknown key {key!r}")
        typ = _OPTIONS[name][1]
        try:
            out[name] = typ(value)
        except ValueError:
            raise UsageError(f"config line {lineno}: bad value for {key!r}: {value!r}") from None
    return out


def parse_config(argv, config_text: str | None = None) -> RunConfig:
    """Build a validated :class:`RunConfig` from flags and optional file text."""
    ns = vars(_build_parser().parse_args(argv))
    command = ns.pop("command")
    path = ns.pop("config", None)
    as_json = ns.pop("json", False)
    values = {}
    if path is not None and config_text is None:
        try:
            with open(path, encoding="utf-8") as fh:
                config_text = fh.read()
        except OSError as exc:
            raise UsageError(f"cannot read config file: {exc}") from None
    if config_text is not None:
        values.update(parse_config_text(config_text))
    values.update(ns)
    if as_json:
        values["format"] = "json"
    kwargs = {_OPTIONS[k][0]: v for k, v in values.items()}
    cfg = RunConfig(command=command, **kwargs)
    _validate(cfg)
    return cfg


def _validate(cfg: RunConfig):
    def positive(name, v):
        if v is not None and not (v > 0 and math.isfinite(v)):
            raise UsageError(f"--{name} must be positive and finite, got {v!r}")

    def nonneg(name, v):
        if v is not None and not (v >= 0 and math.isfinite(v)):
            raise UsageError(f"--{name} must be non-negative and finite, got {v!r}")

    positive("d", cfg.d)
    positive("A", cfg.A)
    positive("kappa", cfg.kappa)
    positive("kR", cfg.kR)
    for name, v in (("mass", cfg.mass), ("lambda", cfg.lam), ("T", cfg.T),
                    ("theta", cfg.theta), ("alpha", cfg.alpha)):
        nonneg(name, v)
    if cfg.mass is not None and cfg.lam is not None:
        raise UsageError("give either --mass or --lambda, not both")
    if cfg.T is not None and cfg.theta is not None:
        raise UsageError("give either --T or --theta, not both")
    if not 0 < cfg.rel_tol < 1:
        raise UsageError("--rel-tol must lie in (0, 1)")
    if not 0 < cfg.fd_step < 0.1:
        raise UsageError("--fd-step must lie in (0, 0.1)")
    if cfg.max_matsubara < 1:
        raise UsageError("--max-matsubara must be >= 1")
    if cfg.j_max < 0:
        raise UsageError("--j-max must be >= 0")
    if cfg.fmt not in ("csv", "json"):
        raise UsageError("--format must be csv or json")
    if cfg.scale not in ("linear", "log"):
        raise UsageError("--scale must be linear or log")
    for name in ("left", "gap", "right"):
        spec = getattr(cfg, name)
        if spec is not None:
            try:
                parse_material(spec)
            except ValueError as exc:
                raise UsageError(f"--{name}: {exc}") from None
    if cfg.command == "sweep":
        if cfg.axis not in SWEEP_AXES:
            raise UsageError(f"--axis must be one of {', '.join(SWEEP_AXES)}")
        if cfg.start is None or cfg.stop is None or cfg.count is None:
            raise UsageError("sweep needs --from, --to and --count")
        if cfg.count < 2:
            raise UsageError("--count must be >= 2")
        if cfg.scale == "log" and not (cfg.start > 0 and cfg.stop > 0):
            raise UsageError("log sweeps need positive --from and --to")
        for end in (cfg.start, cfg.stop):
            _validate(replace(_sweep_point(cfg, end), command="energy"))
    try:
        _system(cfg)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


# --- evaluation ------------------------------------------------------------

def _system(cfg: RunConfig) -> System:
    if cfg.alpha is not None:
        slab = parse_material("pec") if cfg.alpha == 0 else Plasma(C / (cfg.alpha * cfg.d))
        return System(slab, parse_material(cfg.gap), slab)
    left = parse_material(cfg.left)
    right = parse_material(cfg.right) if cfg.right is not None else left
    return System(left, parse_material(cfg.gap), right)


def _geometry(cfg: RunConfig) -> GeometryField:
    d = cfg.d
    mass = cfg.mass if cfg.mass is not None else 0.0
    if cfg.lam is not None:
        mass = cfg.lam * HBAR / (C * d)
    T = cfg.T if cfg.T is not None else 0.0
    if cfg.theta is not None:
        T = cfg.theta * HBAR * C / (2 * math.pi * K_B * d)
    return GeometryField(d=d, A=cfg.A, m_mass=mass, T_temp=T)


def _omega_alpha(system: System, d: float):
    left = system.left
    if system.left != system.right:
        return None, None
    if isinstance(left, PerfectConductor):
        return math.inf, 0.0
    if isinstance(left, Plasma):
        return left.omega_p, C / (left.omega_p * d)
    return None, None


def evaluate_point(cfg: RunConfig, want_force: bool = True) -> dict:
    system = _system(cfg)
    geom = _geometry(cfg)
    solver = cfg.solver
    omega_p, alpha = _omega_alpha(system, geom.d)
    if want_force:
        fr = casimir_force(system, geom, solver)
        er = fr.energy
        F_N, F_pa, err = fr.force, fr.per_area, fr.est_abs_error
    else:
        er = free_energy(system, geom, solver)
        F_N = F_pa = None
        err = er.est_abs_error
    return {
        "d": geom.d, "T": geom.T_temp, "mass": geom.m_mass, "omega_p": omega_p,
        "lambda": geom.m_mass * C * geom.d / HBAR, "alpha": alpha,
        "theta": 2 * math.pi * K_B * geom.T_temp * geom.d / (HBAR * C),
        "E_J": er.value_joule, "E_per_area": er.per_area, "F_N": F_N, "F_per_area": F_pa,
        "err_est": err, "n_terms": er.matsubara_terms,
    }


def _fmt_value(v) -> str:
    if v is None:
        return ""
    if isinstance(v, (int, np.integer)) and not isinstance(v, bool):
        return str(int(v))
    return repr(float(v))


def _csv_line(*fields) -> str:
    return ",".join(f if isinstance(f, str) else _fmt_value(f) for f in fields) + "\n"


def format_row(row: dict, fmt: str) -> str:
    if fmt == "json":
        obj = {}
        for k in COLUMNS:
            v = row[k]
            if isinstance(v, float) and not math.isfinite(v):
                v = repr(v)
            obj[k] = v
        return json.dumps(obj)
    return ",".join(_fmt_value(row[k]) for k in COLUMNS)


def _sweep_values(cfg: RunConfig):
    if cfg.scale == "log":
        return np.geomspace(cfg.start, cfg.stop, cfg.count)
    return np.linspace(cfg.start, cfg.stop, cfg.count)


def _sweep_point(cfg: RunConfig, value: float) -> RunConfig:
    field_name = {"lambda": "lam", "omega_p": None}.get(cfg.axis, cfg.axis)
    if cfg.axis == "omega_p":
        spec = f"plasma:{value!r}"
        return replace(cfg, left=spec, right=spec, alpha=None)
    return replace(cfg, **{field_name: float(value)})


def _sweep_job(args):
    cfg, value = args
    return evaluate_point(_sweep_point(cfg, value))


def _workers() -> int:
    env = os.environ.get("PROCA_THREADS")
    if env:
        try:
            n = int(env)
        except ValueError:
            raise UsageError("PROCA_THREADS must be an integer") from None
        if n < 1:
            raise UsageError("PROCA_THREADS must be >= 1")
        return n
    return os.cpu_count() or 1


def iter_sweep(cfg: RunConfig):
    """Rows of a sweep, in input order, evaluated concurrently."""
    jobs = [(cfg, v) for v in _sweep_values(cfg)]
    n = min(_workers(), len(jobs))
    if n <= 1:
        for job in jobs:
            yield _sweep_job(job)
        return
    with ProcessPoolExecutor(max_workers=n) as pool:
        yield from pool.map(_sweep_job, jobs)


# --- commands --------------------------------------------------------------

def _emit_rows(cfg: RunConfig, rows, out):
    if cfg.fmt == "csv":
        out.write(CSV_HEADER + "\n" + ",".join(COLUMNS) + "\n")
    for row in rows:
        out.write(format_row(row, cfg.fmt) + "\n")
        out.flush()


def _cmd_asym(cfg: RunConfig, out):
    system = _system(cfg)
    geom = _geometry(cfg)
    omega_p, alpha = _omega_alpha(system, geom.d)
    if alpha is None or not isinstance(system.gap, Vacuum):
        raise UsageError("asym needs identical plasma or pec slabs across vacuum")
    lam = geom.m_mass * C * geom.d / HBAR
    theta = 2 * math.pi * K_B * geom.T_temp * geom.d / (HBAR * C)
    point = ReducedPoint(lam, alpha, theta)
    fr = casimir_force(system, geom, cfg.solver)
    E, F = fr.energy.value_joule, fr.force
    out.write(f"# point lambda={_fmt_value(lam)} alpha={_fmt_value(alpha)} "
              f"theta={_fmt_value(theta)} d={_fmt_value(geom.d)}\n")
    out.write(f"engine,E_J={_fmt_value(E)},F_N={_fmt_value(F)}\n")
    out.write("regime,E_asym,E_rel_dev,F_asym,F_rel_dev,note\n")
    for regime in Regime:
        ea = asym_energy(point, geom, regime)
        fa = asym_force(point, geom, regime)
        note = ea.validity_warning or "in regime"
        vals = (ea.value, (ea.value - E) / E, fa.value, (fa.value - F) / F)
        out.write(_csv_line(regime.name, *vals, note))


def _cmd_rs(cfg: RunConfig, out):
    from .rs_tower import kappa_to_inverse_m, kk_mass_approx, kk_masses, rs_force_terms

    kappa_m = kappa_to_inverse_m(cfg.kappa)
    R = cfg.kR / kappa_m
    geom = _geometry(cfg)
    alpha = cfg.alpha if cfg.alpha is not None else 0.0
    out.write(f"# kappa_GeV={_fmt_value(cfg.kappa)} kR={_fmt_value(cfg.kR)} R_m={_fmt_value(R)}\n")
    out.write("j,mass_inv_m,approx_inv_m,lambda,residual\n")
    if cfg.j_max:
        spec = kk_masses(cfg.kappa, R, cfg.j_max)
        for j, (m, res) in enumerate(zip(spec.masses, spec.residuals), 1):
            out.write(_csv_line(j, m, kk_mass_approx(cfg.kappa, R, j), m * geom.d, res))
    massless, terms = rs_force_terms(cfg.kappa, R, geom.d, geom.T_temp, alpha, cfg.j_max, cfg.solver)
    total = math.fsum([massless, *terms])
    out.write(_csv_line("massless_F_per_area", massless))
    out.write(_csv_line("tower_F_per_area", math.fsum(terms)))
    out.write(_csv_line("total_F_per_area", total))


def run(cfg: RunConfig, out=None) -> int:
    """Execute ``cfg``; returns the process exit code."""
    close = False
    if out is None:
        if cfg.output:
            out = open(cfg.output, "w", encoding="utf-8", newline="\n")
            close = True
        else:
            out = sys.stdout
    try:
        if cfg.command in ("energy", "force"):
            _emit_rows(cfg, [evaluate_point(cfg, cfg.command == "force")], out)
        elif cfg.command == "sweep":
            _emit_rows(cfg, iter_sweep(cfg), out)
        elif cfg.command == "asym":
            _cmd_asym(cfg, out)
        elif cfg.command == "rs":
            _cmd_rs(cfg, out)
        elif cfg.command == "check":
            from .acceptance import run_all
            results = run_all(out)
            return 0 if all(r.passed for r in results) else 1
        return 0
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except (ConvergenceError, ArithmeticError, FloatingPointError) as exc:
        diag = getattr(exc, "diagnostics", None)
        print(f"numerical failure: {exc}" + (f" {diag}" if diag else ""), file=sys.stderr)
        return 1
    finally:
        if close:
            out.close()


def main(argv=None) -> int:
    try:
        cfg = parse_config(sys.argv[1:] if argv is None else argv)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
