"""Configuration-driven command-line entry point.

Verbs:

* ``solve``   — run one scenario (``--mode linear|nonlinear|reduced|oracle|
                compare``) and write field.csv (+ JSON header), norms.csv and
                diagnostics.json into the output directory.
* ``compare`` — shorthand for ``solve --mode compare``.
* ``verify``  — run a seeded property suite and write/print its JSON report.
* ``norms``   — evaluate the data-norm table for a scenario without solving.

Exit codes: 0 success, 2 configuration/validation failure, 3 solver error.

Scenario files are YAML (JSON is a subset) with sections ``dispersion``,
``geometry``, ``data``, ``nonlinearity``, ``solver`` and ``outputs``; see
configs/ for annotated examples.  Outputs are deterministic for a fixed
config and seed; the only run-dependent values (timestamp, wall times) are
confined to the field.csv.json header.
"""

from __future__ import annotations

import datetime
import json
import sys
import time
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path

import click
import numpy as np
import yaml

from .dispersion import DispersionParams
from .errors import ConfigInvalid, SolverError
from .fields import Field
from .linear import (ProblemData, QuadratureBudget, evaluate_traces,
                     global_relation_residual, solve_full, solve_reduced)
from .nonlinear import (apply_nonlinearity, check_compatibility,
                        _combined_forcing, data_norm_sum, default_proxies,
                        lifespan_indicator, picard_solve)
from .norms import NormKind, NormSpec, ct_l2_norm, mixed_norm, sobolev_norm
from .oracle import BcMode, OracleConfig, oracle_solve
from .presets import plane_wave_data, profile_from_spec, series_from_spec
from .transforms import SpatialProfile
from .verify import SUITES, run_suite

MODES = ("linear", "nonlinear", "reduced", "oracle", "compare")


@dataclass
class ScenarioConfig:
    params: DispersionParams
    ell: float
    horizon: float
    data: ProblemData
    s: float = 1.0
    proxies: dict = field(default_factory=dict)
    grid: tuple = (129, 65)
    budget: QuadratureBudget = field(default_factory=QuadratureBudget)
    oracle: OracleConfig = field(default_factory=OracleConfig)
    max_iter: int = 12
    tol: float = 1e-6
    out_dir: str = "out"
    raw: dict = field(default_factory=dict)


def _need(doc: dict, section: str, key: str = None):
    if section not in doc or doc[section] is None:
        raise ConfigInvalid("missing required section %r" % section)
    if key is None:
        return doc[section]
    if key not in doc[section]:
        raise ConfigInvalid("missing required field %r" % (section + "." + key))
    return doc[section][key]


def _number(value, name):
    try:
        return float(value)
    except (TypeError, ValueError):
        raise ConfigInvalid("field %r must be a number, got %r" % (name, value))


def load_scenario(path) -> ScenarioConfig:
    """Parse and validate a scenario file; raises ConfigInvalid."""
    try:
        with open(path) as fh:
            doc = yaml.safe_load(fh)
    except OSError as exc:
        raise ConfigInvalid("cannot read config %r: %s" % (str(path), exc))
    except yaml.YAMLError as exc:
        raise ConfigInvalid("config %r is not valid YAML: %s" % (str(path), exc))
    if not isinstance(doc, dict):
        raise ConfigInvalid("config root must be a mapping of sections")

    beta = _number(_need(doc, "dispersion", "beta"), "dispersion.beta")
    alpha = _number(doc["dispersion"].get("alpha", 0.0), "dispersion.alpha")
    delta = _number(doc["dispersion"].get("delta", 0.0), "dispersion.delta")
    try:
        params = DispersionParams(beta, alpha, delta)
    except ValueError as exc:
        raise ConfigInvalid("dispersion: %s" % exc)

    ell = _number(_need(doc, "geometry", "ell"), "geometry.ell")
    horizon = _number(_need(doc, "geometry", "horizon"), "geometry.horizon")
    if ell <= 0 or horizon <= 0:
        raise ConfigInvalid("geometry.ell and geometry.horizon must be positive")

    non = doc.get("nonlinearity") or {}
    kappa = complex(_number(non.get("kappa_re", 0.0), "nonlinearity.kappa_re"),
                    _number(non.get("kappa_im", 0.0), "nonlinearity.kappa_im"))
    lam = _number(non.get("lambda", 3.0), "nonlinearity.lambda")
    if not lam > 1:
        raise ConfigInvalid("nonlinearity.lambda must exceed 1")

    dsec = _need(doc, "data")
    try:
        if dsec.get("preset") == "plane_wave":
            data = plane_wave_data(params, ell, horizon,
                                   _number(dsec.get("a", 2.0), "data.a"))
            data = replace(data, kappa=kappa, lam=lam)
        else:
            forcing = _forcing_from_spec(dsec.get("forcing"), ell, horizon)
            data = ProblemData(
                params, ell, horizon,
                profile_from_spec(dsec.get("u0"), ell),
                series_from_spec(dsec.get("g0"), horizon),
                series_from_spec(dsec.get("h0"), horizon),
                series_from_spec(dsec.get("h1"), horizon),
                forcing=forcing, kappa=kappa, lam=lam)
    except (ValueError, KeyError) as exc:
        raise ConfigInvalid("data: %s" % exc)

    sol = doc.get("solver") or {}
    grid = tuple(int(v) for v in sol.get("grid", (129, 65)))
    if len(grid) != 2 or min(grid) < 4:
        raise ConfigInvalid("solver.grid must be two sizes of at least 4")
    try:
        budget = QuadratureBudget(**(sol.get("budget") or {}))
    except (TypeError, ValueError) as exc:
        raise ConfigInvalid("solver.budget: %s" % exc)
    osec = dict(sol.get("oracle") or {})
    if "bc_mode" in osec:
        osec["bc_mode"] = BcMode(osec["bc_mode"])
    try:
        oracle = OracleConfig(**osec)
    except (TypeError, ValueError) as exc:
        raise ConfigInvalid("solver.oracle: %s" % exc)
    s = _number(sol.get("s", 1.0), "solver.s")
    proxies = {str(k): float(v) for k, v in (sol.get("proxies") or {}).items()}
    max_iter = int(sol.get("max_iter", 12))
    tol = _number(sol.get("tol", 1e-6), "solver.tol")
    if max_iter < 1 or tol <= 0:
        raise ConfigInvalid("solver.max_iter must be >= 1 and solver.tol > 0")

    out_dir = (doc.get("outputs") or {}).get("directory", "out")
    return ScenarioConfig(params, ell, horizon, data, s, proxies, grid,
                          budget, oracle, max_iter, tol, str(out_dir), doc)


def _forcing_from_spec(spec, ell, horizon):
    """Separable forcing preset {x: profile-spec, t: series-spec}."""
    if spec is None:
        return None
    if not isinstance(spec, dict) or "x" not in spec or "t" not in spec:
        raise ConfigInvalid("data.forcing must give separable 'x' and 't' specs")
    prof = profile_from_spec(spec["x"], ell)
    ser = series_from_spec(spec["t"], horizon)
    x = np.linspace(0.0, ell, 129)
    t = np.linspace(0.0, horizon, 129)
    return Field(x, t, np.outer(prof(x), ser(t)))


# --------------------------------------------------------------------------
# artifact writers
# --------------------------------------------------------------------------

def _write_norms(path, cfg: ScenarioConfig, field_obj: Field):
    s = cfg.s
    rows = [
        ("field_l2_xt", 0.0, 2.0, 2.0, field_obj.l2_norm_xt()),
        ("field_ct_l2", 0.0, 2.0, float("inf"), ct_l2_norm(field_obj)),
        ("field_ct_hs", s, 2.0, float("inf"),
         mixed_norm(field_obj, float("inf"),
                    NormSpec(s, 2.0, float("inf"), NormKind.SOBOLEV_INTERVAL))),
        ("u0_hs", s, 2.0, 2.0, sobolev_norm(cfg.data.u0, s)),
        ("data_norm_sum", s, 2.0, 2.0, data_norm_sum(cfg.data, s)),
    ]
    with open(path, "w", newline="\n") as fh:
        fh.write("quantity,s,p,q,value\n")
        for name, sv, pv, qv, val in rows:
            fh.write("%s,%.17g,%.17g,%.17g,%.17g\n" % (name, sv, pv, qv, val))


def _trace_gaps(field_obj: Field, data: ProblemData) -> dict:
    traces = evaluate_traces(field_obj)
    t = field_obj.t_grid
    scale = max(float(np.max(np.abs(field_obj.values))), 1e-30)
    return {
        "left_dirichlet": float(np.max(np.abs(
            traces["left_dirichlet"].samples - data.g0(t)))) / scale,
        "right_dirichlet": float(np.max(np.abs(
            traces["right_dirichlet"].samples - data.h0(t)))) / scale,
        "right_neumann": float(np.max(np.abs(
            traces["right_neumann"].samples - data.h1(t)))) / scale,
    }


def _json_dump(path, payload):
    with open(path, "w", newline="\n") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _refined(cfg: ScenarioConfig, level: int) -> ScenarioConfig:
    if level <= 0:
        return cfg
    f = 2 ** level
    budget = replace(cfg.budget, contour_nodes=cfg.budget.contour_nodes * f,
                     real_axis_nodes=cfg.budget.real_axis_nodes * f)
    oracle = replace(cfg.oracle, nx=cfg.oracle.nx * f, nt=cfg.oracle.nt * f)
    return replace(cfg, budget=budget, oracle=oracle)


def run_scenario(config_path, mode: str, out_dir=None, refine: int = 0) -> int:
    """Execute one scenario; returns the process exit code (0/2/3)."""
    try:
        if mode not in MODES:
            raise ConfigInvalid("unknown mode %r; choose from %s"
                                % (mode, ", ".join(MODES)))
        cfg = _refined(load_scenario(config_path), refine)
    except ConfigInvalid as exc:
        click.echo("config error: %s" % exc, err=True)
        return 2

    out = Path(out_dir if out_dir is not None else cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    data = cfg.data
    diagnostics = {"mode": mode, "refine_level": int(refine)}
    t_start = time.time()
    try:
        if mode == "linear":
            field_obj = solve_full(data, cfg.grid, cfg.budget)
            diagnostics["global_relation_residual"] = global_relation_residual(
                field_obj, data, _diag_k_samples(cfg))
            diagnostics["trace_recovery_gaps"] = _trace_gaps(field_obj, data)
            diagnostics["compatibility"] = check_compatibility(data, cfg.s)
        elif mode == "nonlinear":
            field_obj, report = picard_solve(data, cfg.grid, cfg.budget,
                                             max_iter=cfg.max_iter, tol=cfg.tol)
            diagnostics["picard"] = report.to_dict()
            diagnostics["compatibility"] = check_compatibility(data, cfg.s)
            proxies = dict(default_proxies(), **cfg.proxies)
            try:
                ind = lifespan_indicator(data, cfg.s, proxies)
                diagnostics["lifespan"] = {"regime": ind.regime.value,
                                           "lhs_value": ind.lhs_value,
                                           "satisfied": ind.satisfied}
            except ValueError as exc:
                diagnostics["lifespan"] = {"error": str(exc)}
            effective = replace(data, forcing=_combined_forcing(
                data, apply_nonlinearity(field_obj, data.kappa, data.lam)))
            diagnostics["global_relation_residual"] = global_relation_residual(
                field_obj, effective, _diag_k_samples(cfg))
        elif mode == "reduced":
            field_obj = solve_reduced(cfg.params, cfg.ell, data.h0, data.h1,
                                      cfg.grid, cfg.budget)
            diagnostics["trace_recovery_gaps"] = _trace_gaps(field_obj, data)
        elif mode == "oracle":
            field_obj = oracle_solve(data, cfg.oracle)
        else:  # compare
            field_obj = solve_full(data, (cfg.oracle.nx, cfg.oracle.nt),
                                   cfg.budget)
            oracle_field = oracle_solve(data, cfg.oracle)
            diagnostics["ut_vs_oracle_relative_l2"] = field_obj.relative_l2_gap(
                oracle_field)
    except SolverError as exc:
        click.echo("solver error (%s): %s" % (type(exc).__name__, exc),
                   err=True)
        _json_dump(out / "diagnostics.json",
                   dict(diagnostics, error=type(exc).__name__,
                        message=str(exc)))
        return 3

    header = {
        "params": {"beta": cfg.params.beta, "alpha": cfg.params.alpha,
                   "delta": cfg.params.delta},
        "ell": cfg.ell, "horizon": cfg.horizon, "mode": mode,
        "grid": [len(field_obj.x_grid), len(field_obj.t_grid)],
        "budget": asdict(cfg.budget),
        "timestamp": datetime.datetime.now(datetime.timezone.utc).isoformat(),
        "wall_seconds": time.time() - t_start,
    }
    field_obj.to_csv(out / "field.csv", header=header)
    _write_norms(out / "norms.csv", cfg, field_obj)
    _json_dump(out / "diagnostics.json", diagnostics)
    click.echo("wrote %s" % out)
    return 0


def _diag_k_samples(cfg: ScenarioConfig):
    base = max(1.0, 4.0 / cfg.ell)
    return [complex(v * base) for v in (-1.7, -0.9, 0.45, 1.1, 1.9)] + \
        [base * (0.6 + 0.3j), base * (-1.2 - 0.2j)]


# --------------------------------------------------------------------------
# click wiring
# --------------------------------------------------------------------------

@click.group()
def main():
    """Unified-transform interval solver and verification suites."""


@main.command()
@click.option("--config", "config_path", required=True, type=click.Path())
@click.option("--mode", default="linear",
              type=click.Choice(MODES, case_sensitive=False))
@click.option("--out", "out_dir", default=None, type=click.Path())
@click.option("--refine", default=0, type=int,
              help="joint refinement level (doubles budgets per level)")
def solve(config_path, mode, out_dir, refine):
    """Run one scenario and write field/norms/diagnostics artifacts."""
    sys.exit(run_scenario(config_path, mode.lower(), out_dir, refine))


@main.command()
@click.option("--config", "config_path", required=True, type=click.Path())
@click.option("--out", "out_dir", default=None, type=click.Path())
@click.option("--refine", default=0, type=int)
def compare(config_path, out_dir, refine):
    """Solve with both routes and report their relative L2 gap."""
    sys.exit(run_scenario(config_path, "compare", out_dir, refine))


@main.command()
@click.option("--suite", default="all",
              type=click.Choice(sorted(SUITES) + ["all"]))
@click.option("--seed", default=0, type=int)
@click.option("--out", "out_dir", default=None, type=click.Path())
def verify(suite, seed, out_dir):
    """Run a seeded property suite; exit 0 iff every property passes."""
    report = run_suite(suite, seed)
    text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    if out_dir is not None:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        with open(out / ("verify_%s.json" % suite), "w", newline="\n") as fh:
            fh.write(text)
    click.echo(text, nl=False)
    sys.exit(0 if report["passed"] else 1)


@main.command()
@click.option("--config", "config_path", required=True, type=click.Path())
@click.option("--out", "out_dir", default=None, type=click.Path())
def norms(config_path, out_dir):
    """Evaluate the data-norm table for a scenario without solving."""
    try:
        cfg = load_scenario(config_path)
    except ConfigInvalid as exc:
        click.echo("config error: %s" % exc, err=True)
        sys.exit(2)
    s = cfg.s
    rows = [
        ("u0_hs", s, 2.0, 2.0, sobolev_norm(cfg.data.u0, s)),
        ("g0_h(s+1)/3", (s + 1) / 3, 2.0, 2.0,
         _series_norm(cfg.data.g0, (s + 1) / 3)),
        ("h0_h(s+1)/3", (s + 1) / 3, 2.0, 2.0,
         _series_norm(cfg.data.h0, (s + 1) / 3)),
        ("h1_hs/3", s / 3, 2.0, 2.0, _series_norm(cfg.data.h1, s / 3)),
        ("data_norm_sum", s, 2.0, 2.0, data_norm_sum(cfg.data, s)),
    ]
    lines = ["quantity,s,p,q,value"]
    lines += ["%s,%.17g,%.17g,%.17g,%.17g" % row for row in rows]
    text = "\n".join(lines) + "\n"
    if out_dir is not None:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        with open(out / "norms.csv", "w", newline="\n") as fh:
            fh.write(text)
    click.echo(text, nl=False)
    sys.exit(0)


def _series_norm(series, s):
    prof = SpatialProfile(series.horizon, series.samples, func=series.func)
    return sobolev_norm(prof, s)


if __name__ == "__main__":
    main()
