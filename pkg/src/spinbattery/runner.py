"""Parameter sweeps, derived-quantity searches and result files."""
from __future__ import annotations

import csv
import json
import math
import platform
import time
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Optional, Sequence

import numpy as np
from scipy.optimize import minimize_scalar

from . import __version__
from .config import ScenarioConfig
from .disorder import DisorderSpec, default_workers, quenched_average_pmax
from .dynamics import work_spectrum
from .errors import SearchWindowWarning
from .model import BatteryModel


@dataclass
class Table:
    columns: List[str]
    rows: List[dict] = field(default_factory=list)

    def column(self, name):
        return [r[name] for r in self.rows]

    def where(self, **match) -> List[dict]:
        return [r for r in self.rows if all(r.get(k) == v for k, v in match.items())]


@dataclass(frozen=True)
class DerivedQuantity:
    kind: str
    value: Optional[float]
    status: str = "found"
    inputs: dict = field(default_factory=dict)
    detail: dict = field(default_factory=dict)


def model_from_config(cfg: ScenarioConfig, two_j: int, **changes) -> BatteryModel:
    params = dict(model=cfg.model, n_sites=cfg.n, two_j=two_j, gamma=cfg.gamma, phi=cfg.phi, h=cfg.h,
                  omega=cfg.omega, beta=cfg.beta, spin_scale=cfg.spin_scale,
                  thermal_on_raw=cfg.thermal_on_raw, bbh_charger_omega_scope=cfg.bbh_charger_omega_scope,
                  t_max=cfg.t_max, coarse_step=cfg.coarse_step, refine_tol=cfg.refine_tol,
                  max_dim=cfg.max_dim)
    params.update(changes)
    return BatteryModel(**params)


# -- derived quantities -------------------------------------------------------

def find_lambda_max(model: BatteryModel, lambda_grid: Sequence[float], refine_tol: float = 1e-3) -> DerivedQuantity:
    """Coupling that maximizes P_max: grid argmax refined by bounded Brent search."""
    grid = np.asarray(lambda_grid, dtype=float)
    p = np.array([model.max_power(model.uniform(x)).p_max for x in grid])
    i = int(np.argmax(p))
    status = "found"
    value, best = float(grid[i]), float(p[i])
    if grid.size > 1:
        lo, hi = grid[max(i - 1, 0)], grid[min(i + 1, grid.size - 1)]
        res = minimize_scalar(lambda x: -model.max_power(model.uniform(x)).p_max, bounds=(lo, hi),
                              method="bounded", options={"xatol": refine_tol})
        if -res.fun > best:
            value, best = float(res.x), float(-res.fun)
    if i in (0, grid.size - 1):
        status = "boundary"
        warnings.warn(f"lambda_max for two_j={model.two_j} sits at the grid edge {grid[i]}",
                      SearchWindowWarning, stacklevel=2)
    return DerivedQuantity("lambda_max", value, status, model.tag(),
                           {"p_max": best, "grid_argmax": float(grid[i])})


def find_beta_critical(model: BatteryModel, couplings: Sequence[float], beta_grid: Sequence[float],
                       tol: float = 0.05) -> DerivedQuantity:
    """Inverse temperature above which spin j + 1/2 outperforms spin j for good.

    The smallest grid point from which ``P^{j+1/2} > P^{j}`` holds at every
    larger grid point, bisected down to ``tol`` against the preceding point.
    """
    grid = np.asarray(beta_grid, dtype=float)
    lo_model = model
    hi_model = model.replace(two_j=model.two_j + 1)

    def gap(beta):
        a = lo_model.replace(beta=float(beta)).max_power(couplings).p_max
        b = hi_model.replace(beta=float(beta)).max_power(couplings).p_max
        return b - a

    d = np.array([gap(b) for b in grid])
    bad = np.flatnonzero(d <= 0)
    inputs = dict(model.tag(), couplings=[float(c) for c in couplings])
    if bad.size == 0:
        return DerivedQuantity("beta_critical", None, "no_crossing", inputs,
                               {"note": "advantage at every scanned beta", "min_gap": float(d.min())})
    if bad[-1] == grid.size - 1:
        return DerivedQuantity("beta_critical", None, "not_found", inputs,
                               {"note": "no persistent advantage inside the grid"})
    a, b = grid[bad[-1]], grid[bad[-1] + 1]
    while b - a > tol:
        mid = 0.5 * (a + b)
        if gap(mid) > 0:
            b = mid
        else:
            a = mid
    return DerivedQuantity("beta_critical", 0.5 * (a + b), "found", inputs,
                           {"bracket": [float(a), float(b)], "grid_first": float(grid[bad[-1] + 1])})


def find_gamma_critical(model: BatteryModel, lam: float, two_js: Sequence[int],
                        gamma_grid: Sequence[float], tol: float = 1e-9) -> DerivedQuantity:
    """Anisotropy up to which P_max strictly increases across ``two_js`` at fixed coupling.

    Scans the grid upward and reports the first gamma where the strict ordering
    fails; the advantage holds on every grid point below it.  The value is 0
    when the ordering already fails at the first grid point and the last grid
    value when it never fails.  Gaps below ``tol`` count as ties.
    """
    grid = np.asarray(gamma_grid, dtype=float)
    last_ok = None
    for g in grid:
        p = [model.replace(two_j=tj, gamma=float(g)).max_power(model.uniform(lam)).p_max for tj in two_js]
        if all(b - a > tol for a, b in zip(p, p[1:])):
            last_ok = float(g)
            continue
        value = 0.0 if last_ok is None else float(g)
        return DerivedQuantity("gamma_critical", value, "found",
                               dict(model.tag(), lam=lam, two_js=list(two_js)),
                               {"last_advantage": last_ok, "p_max": p})
    return DerivedQuantity("gamma_critical", float(grid[-1]), "no_loss",
                           dict(model.tag(), lam=lam, two_js=list(two_js)), {"last_advantage": last_ok})


# -- scenarios ------------------------------------------------------------------

def _series(cfg):
    return list(cfg.series_values) if cfg.series else [None]


def _apply(cfg: ScenarioConfig, key: str, value):
    """Config with ``key`` pinned to ``value`` (``lambda`` maps to ``lam``)."""
    if key is None:
        return cfg
    return cfg.replace(**{"lam" if key == "lambda" else key: value})


def _sweep_item(args):
    cfg, two_j = args
    model = model_from_config(cfg, two_j)
    model.check_dimension()
    ordered = model.max_power(model.uniform(cfg.lam))
    row = {"p_max": ordered.p_max, "t_star": ordered.t_star, "w_star": ordered.w_at_tstar}
    if cfg.disordered:
        spec = DisorderSpec(cfg.lam, cfg.sigma, cfg.realizations, cfg.seed)
        q = quenched_average_pmax(model, spec, workers=1)
        row.update(mean_pmax=q.mean_pmax, stderr=q.stderr, realizations=q.realizations_used)
    return row


def _run_items(fn, items, workers):
    if workers > 1 and len(items) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(fn, items))
    return [fn(it) for it in items]


def run_sweep(cfg: ScenarioConfig, workers: int = 1) -> Table:
    cols = [cfg.axis] + ([cfg.series] if cfg.series else []) + ["j_times_2", "p_max", "t_star", "w_star"]
    if cfg.disordered:
        cols += ["mean_pmax", "stderr", "realizations"]
    keys, items = [], []
    for s in _series(cfg):
        for x in cfg.grid:
            point = _apply(_apply(cfg, cfg.series, s), cfg.axis, x)
            for tj in cfg.two_j:
                keys.append((x, s, tj))
                items.append((point, tj))
    results = _run_items(_sweep_item, items, workers)
    table = Table(cols)
    for (x, s, tj), res in zip(keys, results):
        row = {cfg.axis: x, "j_times_2": tj, **res}
        if cfg.series:
            row[cfg.series] = s
        table.rows.append(row)
    return table


def run_work(cfg: ScenarioConfig) -> Table:
    """Stored work and ergotropy either along time (fixed lambda) or along lambda (fixed time)."""
    cols = [cfg.axis] + ([cfg.series] if cfg.series else []) + ["j_times_2", "work", "ergotropy"]
    table = Table(cols)
    for s in _series(cfg):
        c = _apply(cfg, cfg.series, s)
        for tj in cfg.two_j:
            model = model_from_config(c, tj)
            model.check_dimension()
            charger = model.charger()
            if cfg.axis == "time":
                points = [(None, c.lam, np.asarray(cfg.grid))]
            else:
                points = [(x, x, np.array([cfg.time])) for x in cfg.grid]
            for x, lam, times in points:
                H = model.battery(model.uniform(lam))
                rho0 = model.initial_state(H)
                spec = work_spectrum(H, rho0, charger)
                w = spec.work(times)
                r = np.linalg.eigvalsh(rho0.matrix)[::-1]
                passive = float(np.dot(r, H.energies))
                erg = spec.initial_energy + w - passive
                for t, wi, ei in zip(times, w, erg):
                    row = {cfg.axis: float(t) if cfg.axis == "time" else x, "j_times_2": tj,
                           "work": float(wi), "ergotropy": float(ei)}
                    if cfg.series:
                        row[cfg.series] = s
                    table.rows.append(row)
    return table


def run_derived(cfg: ScenarioConfig) -> Table:
    key_cols = {"gamma_critical": ["lambda"], "beta_critical": ["j_times_2", "upper_j_times_2"]}
    table = Table(["kind"] + ([cfg.series] if cfg.series else []) +
                  key_cols.get(cfg.task, ["j_times_2"]) + ["value", "status", "p_max"])
    for s in _series(cfg):
        c = _apply(cfg, cfg.series, s)
        if cfg.task == "gamma_critical":
            model = model_from_config(c, cfg.two_j[0])
            for lam in cfg.grid:
                dq = find_gamma_critical(model, lam, cfg.two_j, cfg.gamma_grid)
                table.rows.append(_derived_row(cfg, s, {"lambda": lam}, dq, None))
            continue
        for tj in cfg.two_j:
            model = model_from_config(c, tj)
            model.check_dimension()
            if cfg.task == "lambda_max":
                dq = find_lambda_max(model, cfg.lambda_grid)
                p = dq.detail["p_max"]
            else:
                model.replace(two_j=tj + 1).check_dimension()
                dq = find_beta_critical(model, model.uniform(c.lam), cfg.beta_grid)
                p = None
            key = {"j_times_2": tj}
            if cfg.task == "beta_critical":
                key["upper_j_times_2"] = tj + 1
            table.rows.append(_derived_row(cfg, s, key, dq, p))
    return table


def _derived_row(cfg, s, key, dq, p):
    row = {"kind": dq.kind, **key, "value": dq.value, "status": dq.status, "p_max": p}
    if cfg.series:
        row[cfg.series] = s
    return row


def run_scenario(cfg: ScenarioConfig, workers: Optional[int] = None) -> Table:
    """Evaluate a validated scenario; rows come back in a fixed, config-determined order."""
    cfg.validate()
    for tj in cfg.two_j:
        model_from_config(cfg, tj).check_dimension()
    workers = default_workers() if workers is None else workers
    if cfg.task == "sweep":
        return run_sweep(cfg, workers)
    if cfg.task == "work":
        return run_work(cfg)
    return run_derived(cfg)


# -- output -------------------------------------------------------------------------

def _fmt(v):
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        v = float(v)
        if math.isnan(v):
            return "nan"
        return format(v, ".10g")
    return str(v)


def write_csv(table: Table, path) -> Path:
    path = Path(path)
    with path.open("w", newline="", encoding="ascii") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(table.columns)
        for row in table.rows:
            writer.writerow([_fmt(row.get(c)) for c in table.columns])
    return path


def emit_results(table: Table, out_dir, cfg: Optional[ScenarioConfig] = None,
                 wall_time: Optional[float] = None) -> dict:
    """Write ``results.csv`` and ``manifest.json`` into ``out_dir``."""
    out = Path(out_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
        csv_path = write_csv(table, out / "results.csv")
        manifest = {
            "engine": "spinbattery",
            "engine_version": __version__,
            "config": cfg.to_dict() if cfg is not None else None,
            "seed": cfg.seed if cfg is not None else None,
            "columns": table.columns,
            "rows": len(table.rows),
            "wall_time_s": wall_time,
            "created": time.strftime("%Y-%m-%dT%H:%M:%S%z"),
            "python": platform.python_version(),
            "numpy": np.__version__,
        }
        man_path = out / "manifest.json"
        man_path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    except OSError as exc:
        raise OSError(f"cannot write results to {out}: {exc}") from exc
    return {"csv": csv_path, "manifest": man_path}
