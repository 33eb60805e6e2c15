"""Gaussian bond disorder and quenched averages of the maximum power."""
from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from .errors import ConfigError, RealizationError
from .model import BatteryModel

WORKERS_ENV = "SPINBATTERY_WORKERS"
CONVERGENCE_TOL = 0.01


def default_workers() -> int:
    try:
        return max(1, int(os.environ.get(WORKERS_ENV, "1")))
    except ValueError as exc:
        raise ConfigError(f"{WORKERS_ENV} must be an integer", field=WORKERS_ENV) from exc


@dataclass(frozen=True)
class DisorderSpec:
    mean: float
    sigma: float
    realizations: int = 2000
    seed: int = 0

    def __post_init__(self):
        if not self.sigma >= 0:
            raise ConfigError(f"sigma must be >= 0, got {self.sigma}", field="sigma")
        if self.realizations < 1:
            raise ConfigError("need at least one realization", field="realizations")
        if not 0 <= self.seed < 2 ** 64:
            raise ConfigError("seed must fit in an unsigned 64-bit integer", field="seed")


@dataclass(frozen=True)
class QuenchedResult:
    mean_pmax: float
    stderr: float
    running_means: List[float]
    checkpoints: List[int]
    realizations_used: int
    converged: bool
    values: np.ndarray = field(repr=False)
    failed: tuple = ()


def sample_couplings(spec: DisorderSpec, n_bonds: int, realization_index: int) -> np.ndarray:
    """Untruncated i.i.d. normal couplings for one realization.

    Draws come from a Philox stream keyed by ``(seed, realization_index)`` so a
    realization never depends on which others were computed or in which order.
    """
    if n_bonds < 1:
        raise ValueError("n_bonds must be >= 1")
    seq = np.random.SeedSequence(spec.seed, spawn_key=(int(realization_index),))
    rng = np.random.Generator(np.random.Philox(seq))
    return spec.mean + spec.sigma * rng.standard_normal(n_bonds)


def _one(args):
    model, spec, index = args
    try:
        return index, model.max_power(sample_couplings(spec, model.n_bonds, index)).p_max, None
    except Exception as exc:  # reported per realization below
        return index, math.nan, f"{type(exc).__name__}: {exc}"


def _stable_mean(x: np.ndarray) -> float:
    # shifting by the first sample makes identical samples average exactly
    return float(x[0] + math.fsum(x - x[0]) / x.size)


def _stats(x: np.ndarray):
    m = _stable_mean(x)
    if x.size < 2:
        return m, 0.0
    var = math.fsum((x - m) ** 2) / (x.size - 1)
    return m, math.sqrt(var / x.size)


def quenched_average_pmax(model: BatteryModel, spec: DisorderSpec, workers: Optional[int] = None,
                          checkpoint_every: int = 100) -> QuenchedResult:
    """Average P_max over ``spec.realizations`` independent coupling draws.

    A running mean is recorded every ``checkpoint_every`` realizations and the
    result counts as converged once the last two checkpoints differ by less
    than 0.01.  More than 1% failed realizations aborts the run.
    """
    model.check_dimension()
    workers = default_workers() if workers is None else workers
    items = [(model, spec, i) for i in range(spec.realizations)]
    if workers > 1 and spec.realizations > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            out = list(pool.map(_one, items, chunksize=max(1, len(items) // (4 * workers))))
    else:
        out = [_one(it) for it in items]
    out.sort(key=lambda r: r[0])
    values = np.array([r[1] for r in out])
    failed = [(r[0], r[2]) for r in out if r[2] is not None]
    if len(failed) > 0.01 * spec.realizations:
        first = failed[0]
        raise RealizationError(f"{len(failed)} of {spec.realizations} realizations failed; "
                               f"first at index {first[0]}: {first[1]}", [f[0] for f in failed])
    ok = values[~np.isnan(values)]
    if ok.size == 0:
        raise RealizationError("every realization failed", [f[0] for f in failed])

    checkpoints = list(range(checkpoint_every, ok.size + 1, checkpoint_every))
    if not checkpoints or checkpoints[-1] != ok.size:
        checkpoints.append(ok.size)
    running = [_stable_mean(ok[:n]) for n in checkpoints]
    converged = len(running) >= 2 and abs(running[-1] - running[-2]) < CONVERGENCE_TOL
    mean, stderr = _stats(ok)
    return QuenchedResult(mean, stderr, running, checkpoints, int(ok.size), converged, values,
                          tuple(f[0] for f in failed))
