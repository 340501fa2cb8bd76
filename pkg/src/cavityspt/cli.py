"""Config-driven experiment runner.

Usage:

    cavity-spt --config experiment.toml --out results/run1 [--threads N]
               [--overwrite] [--seed S]

The TOML config names one experiment and supplies its physical parameters in
laboratory units (keys carry a unit suffix: ``_per_s``, ``_K``, ``_T``,
``_per_cm3``, ``_deg``).  Parsing is strict — unknown sections or keys are
rejected.  Each run emits CSV files (single header row, 17 significant
digits, LF line endings) plus a JSON manifest that echoes the config, lists
every file with its SHA-256 checksum, and records the unit conversions, so a
plotting layer never has to guess.
"""

import argparse
import hashlib
import json
import math
import os
import sys
import time

import numpy as np

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from . import __version__, meanfield, phase, response, transmission
from .constants import CONSTANTS, kelvin_to_angular, tesla_to_angular
from .models import (ALL_TO_ALL, NEAREST_NEIGHBOR_PBC, CavitySpec,
                     GiantSpinModel, IsingChainModel, build_chain_hamiltonian)
from .spectra import lanczos

EXIT_OK = 0
EXIT_RUNTIME = 1
EXIT_CONFIG = 2
EXIT_OUTPUT_EXISTS = 3


class ConfigError(ValueError):
    """Invalid or unparseable experiment configuration."""


# --------------------------------------------------------------------------
# config schema and validation
# --------------------------------------------------------------------------

_FLOAT = ("float", (int, float))
_INT = ("int", (int,))
_STR = ("str", (str,))
_BOOL = ("bool", (bool,))
_FLOAT_LIST = ("list of floats", (list,))

_NUMERICS_COMMON = {
    "seed": _INT,
    "bisection_tol": _FLOAT,
    "mf_tol": _FLOAT,
    "mf_max_iter": _INT,
    "damping": _FLOAT,
    "krylov_dim": _INT,
}

SCHEMAS = {
    "dicke-critical": {
        "experiment": {"name": _STR},
        "spins": {"omega_z_per_s": _FLOAT, "S": _FLOAT},
        "cavity": {"Omega_per_s": _FLOAT},
        "temperature": {"T_K": _FLOAT},
        "grid": {"T_min_K": _FLOAT, "T_max_K": _FLOAT, "n_T": _INT,
                 "log_T": _BOOL},
        "numerics": _NUMERICS_COMMON,
    },
    "lambda-bar": {
        "experiment": {"name": _STR},
        "cavity": {"Omega_per_s": _FLOAT, "rho_per_cm3": _FLOAT, "nu": _FLOAT},
        "numerics": _NUMERICS_COMMON,
    },
    "ising-phase-diagram": {
        "experiment": {"name": _STR},
        "spins": {"omega_z_per_s": _FLOAT, "sublattices": _STR},
        "cavity": {"Omega_per_s": _FLOAT},
        "temperature": {"T_K": _FLOAT},
        "grid": {"J_min_per_s": _FLOAT, "J_max_per_s": _FLOAT, "n_J": _INT,
                 "lambda_min_per_s": _FLOAT, "lambda_max_per_s": _FLOAT,
                 "n_lambda": _INT},
        "numerics": _NUMERICS_COMMON,
    },
    "ed-boundary": {
        "experiment": {"name": _STR},
        "spins": {"n_sites": _INT, "omega_z_per_s": _FLOAT, "geometry": _STR},
        "cavity": {"Omega_per_s": _FLOAT},
        "grid": {"J_values_per_s": _FLOAT_LIST,
                 "J_min_per_s": _FLOAT, "J_max_per_s": _FLOAT, "n_J": _INT,
                 "lambda_min_per_s": _FLOAT, "lambda_max_per_s": _FLOAT},
        "numerics": _NUMERICS_COMMON,
    },
    "fe8-boundary": {
        "experiment": {"name": _STR},
        "spins": {"S": _FLOAT, "D_K": _FLOAT, "E_K": _FLOAT, "J_K": _FLOAT,
                  "phi_deg": _FLOAT},
        "cavity": {"Omega_per_s": _FLOAT, "rho_per_cm3": _FLOAT,
                   "nu_values": _FLOAT_LIST},
        "grid": {"T_values_K": _FLOAT_LIST,
                 "T_min_K": _FLOAT, "T_max_K": _FLOAT, "n_T": _INT,
                 "B_max_T": _FLOAT, "Tc_max_K": _FLOAT},
        "numerics": _NUMERICS_COMMON,
    },
    "transmission-map": {
        "experiment": {"name": _STR},
        "cavity": {"Omega_per_s": _FLOAT, "rho_per_cm3": _FLOAT, "nu": _FLOAT},
        "drive": {"kappa_per_s": _FLOAT, "gamma_per_s": _FLOAT},
        "temperature": {"T_K": _FLOAT},
        "grid": {"omega_min_per_s": _FLOAT, "omega_max_per_s": _FLOAT,
                 "n_omega": _INT,
                 "omega_z_min_per_s": _FLOAT, "omega_z_max_per_s": _FLOAT,
                 "n_omega_z": _INT, "log_omega_z": _BOOL},
        "numerics": _NUMERICS_COMMON,
    },
}


def load_config(path):
    """Parse the TOML file at `path` and validate it against its schema."""
    try:
        with open(path, "rb") as fh:
            raw = tomllib.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path!r}: {exc}") from exc
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"config {path!r} is not valid TOML: {exc}") from exc

    name = raw.get("experiment", {}).get("name")
    if name is None:
        raise ConfigError("config is missing the [experiment] name key")
    if name not in SCHEMAS:
        known = ", ".join(sorted(SCHEMAS))
        raise ConfigError(f"unknown experiment {name!r}; known: {known}")
    schema = SCHEMAS[name]
    for section, entries in raw.items():
        if section not in schema:
            raise ConfigError(
                f"unknown section [{section}] for experiment {name!r}")
        if not isinstance(entries, dict):
            raise ConfigError(f"[{section}] must be a table of keys")
        for key, value in entries.items():
            if key not in schema[section]:
                raise ConfigError(
                    f"unknown key {key!r} in section [{section}] "
                    f"for experiment {name!r}")
            type_name, pytypes = schema[section][key]
            ok = isinstance(value, pytypes) and not (
                type_name in ("float", "int") and isinstance(value, bool))
            if ok and type_name == "list of floats":
                ok = all(isinstance(v, (int, float)) and not isinstance(v, bool)
                         for v in value)
            if not ok:
                raise ConfigError(
                    f"key {key!r} in [{section}] must be a {type_name}, "
                    f"got {value!r}")
    return raw


def _require(cfg, section, key):
    try:
        return cfg[section][key]
    except KeyError:
        raise ConfigError(f"missing required key {key!r} in section "
                          f"[{section}]") from None


def _optional(cfg, section, key, default=None):
    return cfg.get(section, {}).get(key, default)


def _grid(cfg, section, base, unit, required=True):
    """Grid values from `{base}_values{unit}` or `{base}_min/max{unit}` + `n_{base}`."""
    sec = cfg.get(section, {})
    values = sec.get(f"{base}_values{unit}")
    if values is not None:
        a = np.asarray(values, dtype=float)
        if a.size == 0:
            raise ConfigError(f"{base}_values{unit} must be non-empty")
        return a
    lo = sec.get(f"{base}_min{unit}")
    hi = sec.get(f"{base}_max{unit}")
    n = sec.get(f"n_{base}")
    if lo is None and hi is None and n is None:
        if required:
            raise ConfigError(
                f"section [{section}] needs {base}_values{unit} or "
                f"{base}_min{unit}/{base}_max{unit}/n_{base}")
        return None
    if lo is None or hi is None or n is None:
        raise ConfigError(
            f"{base}_min{unit}, {base}_max{unit} and n_{base} must be "
            f"given together in [{section}]")
    if n < 1 or hi <= lo:
        raise ConfigError(f"need n_{base} >= 1 and an increasing {base} range")
    if sec.get(f"log_{base}", False):
        if lo <= 0:
            raise ConfigError(f"log-spaced {base} grid needs {base}_min > 0")
        return np.geomspace(lo, hi, n)
    return np.linspace(lo, hi, n)


# --------------------------------------------------------------------------
# unit bookkeeping
# --------------------------------------------------------------------------

class UnitLog:
    """Records every conversion from laboratory units to internal rad/s."""

    def __init__(self):
        self.entries = []

    def kelvin(self, key, value):
        out = kelvin_to_angular(value)
        self.entries.append({"key": key, "input": value, "unit": "K",
                             "internal_rad_per_s": out,
                             "factor": CONSTANTS.k_B / CONSTANTS.hbar})
        return out

    def tesla(self, key, value):
        out = tesla_to_angular(value)
        self.entries.append({
            "key": key, "input": value, "unit": "T",
            "internal_rad_per_s": out,
            "factor": CONSTANTS.g_e * CONSTANTS.mu_B / CONSTANTS.hbar})
        return out

    def degrees(self, key, value):
        out = math.radians(value)
        self.entries.append({"key": key, "input": value, "unit": "deg",
                             "internal_rad": out,
                             "factor": math.pi / 180.0})
        return out

    def per_cm3(self, key, value):
        out = value * 1e6
        self.entries.append({"key": key, "input": value, "unit": "cm^-3",
                             "internal_per_m3": out, "factor": 1e6})
        return out


# --------------------------------------------------------------------------
# serialization
# --------------------------------------------------------------------------

def _fmt(x):
    if isinstance(x, (bool, np.bool_)):
        return "1" if x else "0"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, str):
        return x
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return format(x, ".17g")


def write_csv(path, header, rows):
    with open(path, "w", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(x) for x in row) + "\n")


def sha256_of(path):
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            h.update(chunk)
    return h.hexdigest()


class RunContext:
    """Collects files, scalar results and warnings during one experiment."""

    def __init__(self, prefix, threads, seed, overwrite):
        self.prefix = prefix
        self.threads = threads
        self.seed = seed
        self.overwrite = overwrite
        self.files = []
        self.results = {}
        self.warnings = []
        self.unit_log = UnitLog()

    def path(self, suffix):
        return f"{self.prefix}_{suffix}"

    def check_collisions(self, suffixes):
        targets = [self.path(s) for s in suffixes] + [self.path("manifest.json")]
        if self.overwrite:
            return
        existing = [t for t in targets if os.path.exists(t)]
        if existing:
            raise FileExistsError(
                f"output files exist (use --overwrite): {', '.join(existing)}")

    def emit_csv(self, suffix, header, rows, units):
        path = self.path(suffix)
        write_csv(path, header, rows)
        self.files.append({"path": os.path.basename(path),
                           "sha256": sha256_of(path),
                           "columns": dict(zip(header, units)),
                           "rows": len(rows)})

    def result(self, name, value, unit, provenance="computed"):
        self.results[name] = {"value": value, "unit": unit,
                              "provenance": provenance}


# --------------------------------------------------------------------------
# experiment runners
# --------------------------------------------------------------------------

def _mf_problem_kwargs(cfg):
    kwargs = {}
    tol = _optional(cfg, "numerics", "mf_tol")
    if tol is not None:
        kwargs["tol"] = tol
    max_iter = _optional(cfg, "numerics", "mf_max_iter")
    if max_iter is not None:
        kwargs["max_iter"] = max_iter
    damping = _optional(cfg, "numerics", "damping")
    if damping is not None:
        kwargs["damping"] = damping
    return kwargs


def run_dicke_critical(cfg, ctx):
    omega_z = _require(cfg, "spins", "omega_z_per_s")
    S = _require(cfg, "spins", "S")
    Omega = _require(cfg, "cavity", "Omega_per_s")
    T = _require(cfg, "temperature", "T_K")
    ctx.check_collisions(["boundary.csv"])
    lam_c = response.dicke_critical_coupling(omega_z, Omega, S, T)
    ctx.result("lambda_bar_c_per_s", lam_c, "rad/s")
    t_grid = _grid(cfg, "grid", "T", "_K", required=False)
    if t_grid is not None:
        rows = [(t, response.dicke_critical_coupling(omega_z, Omega, S, t))
                for t in t_grid]
        ctx.emit_csv("boundary.csv", ["T_K", "lambda_bar_c_per_s"],
                     rows, ["K", "rad/s"])


def run_lambda_bar(cfg, ctx):
    Omega = _require(cfg, "cavity", "Omega_per_s")
    rho_cm3 = _require(cfg, "cavity", "rho_per_cm3")
    nu = _require(cfg, "cavity", "nu")
    ctx.check_collisions([])
    rho = ctx.unit_log.per_cm3("cavity.rho_per_cm3", rho_cm3)
    lam = response.lambda_bar_from_material(rho, nu, Omega)
    ctx.result("lambda_bar_per_s", lam, "rad/s")
    ctx.result("lambda_bar_squared_per_s2", lam ** 2, "rad^2/s^2")


def run_ising_phase_diagram(cfg, ctx):
    omega_z = _require(cfg, "spins", "omega_z_per_s")
    sublattices = _optional(cfg, "spins", "sublattices", "one")
    Omega = _require(cfg, "cavity", "Omega_per_s")
    T = _require(cfg, "temperature", "T_K")
    j_grid = _grid(cfg, "grid", "J", "_per_s")
    lam_grid = _grid(cfg, "grid", "lambda", "_per_s")
    bisection_tol = _optional(cfg, "numerics", "bisection_tol", 1e-3)
    mf_kwargs = _mf_problem_kwargs(cfg)
    ctx.check_collisions(["grid.csv", "boundary.csv"])

    def problem(J, lam):
        model = IsingChainModel.uniform(2, omega_z, J, lam, geometry=ALL_TO_ALL)
        cavity = CavitySpec(Omega=Omega, lambda_bar=lam)
        return meanfield.MeanFieldProblem(model=model, cavity=cavity, T=T,
                                          sublattices=sublattices, **mf_kwargs)

    rows = []
    n_unconverged = 0
    for J in j_grid:
        for lam in lam_grid:
            sol = meanfield.solve_selfconsistent(problem(J, lam))
            n_unconverged += not sol.converged
            rows.append((J, lam, sol.m_uniform, sol.m_stag, sol.sz,
                         sol.photons_per_spin, sol.free_energy_per_spin,
                         sol.converged))
    if n_unconverged:
        ctx.warnings.append(
            f"{n_unconverged} grid points did not reach the mean-field "
            f"tolerance; last iterates reported")
    ctx.emit_csv(
        "grid.csv",
        ["J_per_s", "lambda_bar_per_s", "m_uniform", "m_staggered",
         "sigma_z", "photons_per_spin", "free_energy_per_spin_per_s",
         "converged"],
        rows,
        ["rad/s", "rad/s", "hbar", "hbar", "1", "1", "rad/s", "bool"])

    lam_lo = max(float(lam_grid[0]), 1e-6 * float(lam_grid[-1]))
    sweep = phase.SweepSpec(
        plane="J_vs_lambda", axis1_values=tuple(float(j) for j in j_grid),
        axis2_min=lam_lo, axis2_max=float(lam_grid[-1]),
        detector="mean_field_order_parameter",
        bisection_tol=bisection_tol,
        fixed={"omega_z_per_s": omega_z, "Omega_per_s": Omega, "T_K": T})
    detector = phase.mean_field_detector(problem, quantity="any")
    boundary = phase.trace_boundary(sweep, detector, threads=ctx.threads)
    ctx.emit_csv(
        "boundary.csv",
        ["J_per_s", "lambda_c_per_s", "bracket_width_per_s", "flag"],
        [(p.axis1, p.critical if p.critical is not None else float("nan"),
          p.bracket_width, p.flag) for p in boundary.points],
        ["rad/s", "rad/s", "rad/s", "flag"])


def run_ed_boundary(cfg, ctx):
    n_sites = _require(cfg, "spins", "n_sites")
    omega_z = _require(cfg, "spins", "omega_z_per_s")
    geometry = _optional(cfg, "spins", "geometry", NEAREST_NEIGHBOR_PBC)
    Omega = _require(cfg, "cavity", "Omega_per_s")
    j_grid = _grid(cfg, "grid", "J", "_per_s")
    lam_lo = _require(cfg, "grid", "lambda_min_per_s")
    lam_hi = _require(cfg, "grid", "lambda_max_per_s")
    if lam_lo <= 0:
        raise ConfigError("lambda_min_per_s must be positive (the response "
                          "scales as lambda^2, so 0 is never a bracket end)")
    krylov_dim = _optional(cfg, "numerics", "krylov_dim", 60)
    bisection_tol = _optional(cfg, "numerics", "bisection_tol", 1e-3)
    ctx.check_collisions(["boundary.csv"])

    memo = {}

    def r_unit(J):
        if J not in memo:
            model = IsingChainModel.uniform(n_sites, omega_z, J, 1.0,
                                            geometry=geometry)
            H, O = build_chain_hamiltonian(model)
            spec = lanczos(H, 2, krylov_dim, seed=ctx.seed)
            if not np.all(spec.converged):
                ctx.warnings.append(
                    f"ground-state Lanczos unconverged at J={J:g} rad/s")
            evals = spec.eigenvalues
            spread = max(abs(evals[0]), abs(evals[-1]), 1e-300)
            n_ground = int(np.sum(evals - evals[0] <= 1e-10 * spread))
            ground = [np.ascontiguousarray(spec.eigenvectors[:, i])
                      for i in range(n_ground)]
            res = response.zero_temperature_response_krylov(
                H, O, ground, evals[0], Omega, krylov_dim=krylov_dim)
            memo[J] = abs(res.R)
        return memo[J]

    sweep = phase.SweepSpec(
        plane="J_vs_lambda", axis1_values=tuple(float(j) for j in j_grid),
        axis2_min=lam_lo, axis2_max=lam_hi,
        detector="response_criterion", bisection_tol=bisection_tol,
        fixed={"n_sites": n_sites, "omega_z_per_s": omega_z,
               "Omega_per_s": Omega, "krylov_dim": krylov_dim,
               "geometry": geometry})
    detector = phase.response_criterion_detector(r_unit, Omega)
    boundary = phase.trace_boundary(sweep, detector, threads=ctx.threads)
    ctx.emit_csv(
        "boundary.csv",
        ["J_per_s", "lambda_c_per_s", "bracket_width_per_s", "flag"],
        [(p.axis1, p.critical if p.critical is not None else float("nan"),
          p.bracket_width, p.flag) for p in boundary.points],
        ["rad/s", "rad/s", "rad/s", "flag"])


def run_fe8_boundary(cfg, ctx):
    S = _require(cfg, "spins", "S")
    D = ctx.unit_log.kelvin("spins.D_K", _require(cfg, "spins", "D_K"))
    E = ctx.unit_log.kelvin("spins.E_K", _require(cfg, "spins", "E_K"))
    J = ctx.unit_log.kelvin("spins.J_K", _require(cfg, "spins", "J_K"))
    phi = ctx.unit_log.degrees("spins.phi_deg",
                               _require(cfg, "spins", "phi_deg"))
    Omega = _require(cfg, "cavity", "Omega_per_s")
    rho = ctx.unit_log.per_cm3("cavity.rho_per_cm3",
                               _require(cfg, "cavity", "rho_per_cm3"))
    nu_values = _require(cfg, "cavity", "nu_values")
    t_grid = _grid(cfg, "grid", "T", "_K")
    b_max = _require(cfg, "grid", "B_max_T")
    tc_max = _optional(cfg, "grid", "Tc_max_K", 2.0 * float(np.max(t_grid)))
    bisection_tol = _optional(cfg, "numerics", "bisection_tol", 1e-3)
    mf_kwargs = _mf_problem_kwargs(cfg)
    ctx.check_collisions(["boundary.csv", "tc.csv"])

    boundary_rows = []
    tc_rows = []
    for nu in nu_values:
        lam = response.lambda_bar_from_material(rho, nu, Omega) if nu > 0 else 0.0
        cavity = CavitySpec(Omega=Omega, lambda_bar=lam)

        def problem(T, B):
            model = GiantSpinModel(S=S, D=D, E=E, B_mag=B, phi=phi, J=J)
            return meanfield.MeanFieldProblem(model=model, cavity=cavity,
                                              T=T, **mf_kwargs)

        detector = phase.mean_field_detector(problem, quantity="uniform")
        sweep = phase.SweepSpec(
            plane="B_vs_T", axis1_values=tuple(float(t) for t in t_grid),
            axis2_min=0.0, axis2_max=b_max,
            detector="mean_field_order_parameter",
            bisection_tol=bisection_tol,
            fixed={"nu": nu, "lambda_bar_per_s": lam})
        for p in phase.trace_boundary(sweep, detector,
                                      threads=ctx.threads).points:
            boundary_rows.append(
                (nu, p.axis1,
                 p.critical if p.critical is not None else float("nan"),
                 p.bracket_width, p.flag))

        tc_sweep = phase.SweepSpec(
            plane="T_at_B0", axis1_values=(nu,),
            axis2_min=1e-3, axis2_max=tc_max,
            detector="mean_field_order_parameter",
            bisection_tol=bisection_tol,
            fixed={"lambda_bar_per_s": lam})
        tc_point = phase.trace_boundary(
            tc_sweep, lambda _nu, T: detector(T, 0.0), threads=1).points[0]
        tc_rows.append(
            (nu, tc_point.critical if tc_point.critical is not None
             else float("nan"), lam, tc_point.flag))

    ctx.emit_csv(
        "boundary.csv",
        ["nu", "T_K", "B_c_T", "bracket_width_T", "flag"],
        boundary_rows, ["1", "K", "T", "T", "flag"])
    ctx.emit_csv(
        "tc.csv",
        ["nu", "T_c_K", "lambda_bar_per_s", "flag"],
        tc_rows, ["1", "K", "rad/s", "flag"])


def run_transmission_map(cfg, ctx):
    Omega = _require(cfg, "cavity", "Omega_per_s")
    rho = ctx.unit_log.per_cm3("cavity.rho_per_cm3",
                               _require(cfg, "cavity", "rho_per_cm3"))
    nu = _require(cfg, "cavity", "nu")
    kappa = _require(cfg, "drive", "kappa_per_s")
    gamma = _require(cfg, "drive", "gamma_per_s")
    T = _require(cfg, "temperature", "T_K")
    omega_grid = _grid(cfg, "grid", "omega", "_per_s")
    omega_z_grid = _grid(cfg, "grid", "omega_z", "_per_s")
    mf_kwargs = _mf_problem_kwargs(cfg)
    ctx.check_collisions(["grid.csv", "columns.csv"])

    lam = response.lambda_bar_from_material(rho, nu, Omega) if nu > 0 else 0.0
    cavity = CavitySpec(Omega=Omega, lambda_bar=lam)
    grid = transmission.transmission_map(
        omega_grid, omega_z_grid, T, cavity, kappa, gamma,
        mf_tol=mf_kwargs.get("tol"),
        mf_max_iter=mf_kwargs.get("max_iter", 10000))
    ctx.warnings.extend(grid.warnings)

    rows = []
    for i, wz in enumerate(grid.omega_z_grid):
        for j, w in enumerate(grid.omega_grid):
            t = grid.t[i, j]
            rows.append((wz, w, abs(t), t.real, t.imag))
    ctx.emit_csv(
        "grid.csv",
        ["omega_z_per_s", "omega_per_s", "abs_t", "re_t", "im_t"],
        rows, ["rad/s", "rad/s", "1", "1", "1"])
    ctx.emit_csv(
        "columns.csv",
        ["omega_z_per_s", "sigma_z_0", "sigma_x_0", "superradiant"],
        list(zip(grid.omega_z_grid, grid.sz0, grid.sx0, grid.superradiant)),
        ["rad/s", "1", "1", "bool"])
    ctx.result("lambda_bar_per_s", lam, "rad/s")
    ctx.result("omega_z_c_per_s", grid.omega_z_c, "rad/s")
    ctx.result("T_K", T, "K")
    ctx.result("Omega_per_s", Omega, "rad/s")


RUNNERS = {
    "dicke-critical": run_dicke_critical,
    "lambda-bar": run_lambda_bar,
    "ising-phase-diagram": run_ising_phase_diagram,
    "ed-boundary": run_ed_boundary,
    "fe8-boundary": run_fe8_boundary,
    "transmission-map": run_transmission_map,
}


# --------------------------------------------------------------------------
# entry point
# --------------------------------------------------------------------------

def _resolve_threads(arg):
    if arg is not None:
        return max(1, arg)
    env = os.environ.get("CAVITY_SPT_THREADS")
    if env is not None:
        try:
            return max(1, int(env))
        except ValueError:
            raise ConfigError(
                f"CAVITY_SPT_THREADS must be an integer, got {env!r}") from None
    return 1


def _json_default(obj):
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    raise TypeError(f"not JSON serializable: {type(obj).__name__}")


def run(config_path, out_prefix, threads=1, seed=0, overwrite=False):
    """Execute one experiment and write its CSVs and manifest.

    Returns the manifest dictionary.
    """
    start = time.monotonic()
    cfg = load_config(config_path)
    name = cfg["experiment"]["name"]
    seed = _optional(cfg, "numerics", "seed", seed)

    out_dir = os.path.dirname(out_prefix)
    if out_dir:
        os.makedirs(out_dir, exist_ok=True)
    ctx = RunContext(out_prefix, threads, seed, overwrite)
    RUNNERS[name](cfg, ctx)

    manifest = {
        "experiment": name,
        "package": {"name": "cavityspt", "version": __version__},
        "versions": {
            "python": sys.version.split()[0],
            "numpy": np.__version__,
        },
        "config_path": os.path.abspath(config_path),
        "config": cfg,
        "seed": seed,
        "threads": threads,
        "unit_conversions": ctx.unit_log.entries,
        "results": ctx.results,
        "files": ctx.files,
        "warnings": ctx.warnings,
        "timings": {"total_s": time.monotonic() - start},
    }
    import scipy
    manifest["versions"]["scipy"] = scipy.__version__
    manifest_path = f"{out_prefix}_manifest.json"
    if os.path.exists(manifest_path) and not overwrite:
        raise FileExistsError(
            f"output file exists (use --overwrite): {manifest_path}")
    with open(manifest_path, "w", newline="\n") as fh:
        json.dump(manifest, fh, indent=2, default=_json_default)
        fh.write("\n")
    return manifest


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="cavity-spt",
        description="Run a configured superradiance experiment.")
    parser.add_argument("--config", required=True, help="TOML config path")
    parser.add_argument("--out", required=True,
                        help="output path prefix for CSVs and the manifest")
    parser.add_argument("--threads", type=int, default=None,
                        help="sweep parallelism (default: CAVITY_SPT_THREADS "
                             "or 1)")
    parser.add_argument("--overwrite", action="store_true",
                        help="replace existing output files")
    parser.add_argument("--seed", type=int, default=0,
                        help="seed for stochastic eigensolvers")
    args = parser.parse_args(argv)

    def fail(kind, message, code):
        record = {"error": {"type": kind, "message": message}}
        print(json.dumps(record), file=sys.stderr)
        return code

    try:
        threads = _resolve_threads(args.threads)
        manifest = run(args.config, args.out, threads=threads,
                       seed=args.seed, overwrite=args.overwrite)
    except ConfigError as exc:
        return fail("config", str(exc), EXIT_CONFIG)
    except FileExistsError as exc:
        return fail("output-exists", str(exc), EXIT_OUTPUT_EXISTS)
    except Exception as exc:  # noqa: BLE001 - boundary of the CLI
        return fail("runtime", f"{type(exc).__name__}: {exc}", EXIT_RUNTIME)
    for warning in manifest["warnings"]:
        print(f"warning: {warning}", file=sys.stderr)
    print(f"wrote {len(manifest['files'])} data file(s) and "
          f"{args.out}_manifest.json")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
