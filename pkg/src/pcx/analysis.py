"""Spacetime grids, equilibrium statistics and collision-peak ratios."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .chain import ChainConfig, pair_index
from .errors import ConfigError, PeakNotFoundError, StatsError
from .horizon import (
    HorizonSpec,
    SiteSeries,
    classify_pairs,
    time_grid,
    two_level_entropy_bits,
)

MIN_WINDOW_SAMPLES = 100


@dataclass(frozen=True)
class SpacetimeGrid:
    """Per-site, per-time values in bits; kind 'S' or 'C' with its r_h."""

    kind: str
    r_h: int | None
    times: np.ndarray
    values: np.ndarray  # shape (N, n_times), site-major

    @property
    def label(self) -> str:
        return self.kind if self.r_h is None else f"{self.kind}_rh{self.r_h}"

    def site_row(self, j: int) -> np.ndarray:
        return self.values[j - 1]


@dataclass(frozen=True)
class EquilibriumStats:
    """Late-window mean and population standard deviation."""

    mean: float
    std: float
    n_samples: int
    window: tuple[float, float]


def spacetime_scan(cfg: ChainConfig, flips: tuple[int, int], r_h_list,
                   dt: float, t_max: float, engine, threads: int = 1) -> list[SpacetimeGrid]:
    """One entropy grid plus one complexity grid per horizon radius.

    Every (site, time) cell is computed independently with a fixed
    reduction order, so results are bit-identical for any thread count.
    """
    if cfg.dim > 4000:
        raise ConfigError(f"sector dimension {cfg.dim} exceeds the dense-eigensolver budget")
    r_h_list = tuple(r_h_list)
    times = time_grid(dt, t_max)
    N = cfg.N
    n1, n2 = min(flips), max(flips)
    pair_index(n1, n2, N)  # validates the flip pair
    focus_idx = {
        j: np.array([pair_index(min(j, n), max(j, n), N) for n in range(1, N + 1) if n != j])
        for j in range(1, N + 1)
    }
    classifications = {
        (j, r): classify_pairs(HorizonSpec(j=j, r_h=r, N=N))
        for j in range(1, N + 1) for r in r_h_list
    }
    s_values = np.empty((N, len(times)))
    c_values = {r: np.empty((N, len(times))) for r in r_h_list}

    def fill(k: int):
        b = engine.pair_amplitudes(n1, n2, float(times[k]))
        prob = np.abs(b) ** 2
        for j in range(1, N + 1):
            p_down = float(prob[focus_idx[j]].sum())
            s_values[j - 1, k] = two_level_entropy_bits(p_down)
            for r in r_h_list:
                cls = classifications[(j, r)]
                mag = np.sqrt(prob[cls.type_i].sum() * prob[cls.focus_out].sum())
                c_values[r][j - 1, k] = two_level_entropy_bits(p_down, mag)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            list(pool.map(fill, range(len(times))))
    else:
        for k in range(len(times)):
            fill(k)

    grids = [SpacetimeGrid(kind="S", r_h=None, times=times, values=s_values)]
    for r in r_h_list:
        grids.append(SpacetimeGrid(kind="C", r_h=r, times=times, values=c_values[r]))
    return grids


def series_from_scan(grids: list[SpacetimeGrid], j: int) -> SiteSeries:
    """Site row view of a scan, matching site_series output exactly."""
    s_grid = next(g for g in grids if g.kind == "S")
    complexity = {g.r_h: g.site_row(j) for g in grids if g.kind == "C"}
    return SiteSeries(j=j, times=s_grid.times, entropy=s_grid.site_row(j), complexity=complexity)


def equilibrium_stats(times: np.ndarray, values: np.ndarray,
                      window: tuple[float, float]) -> EquilibriumStats:
    """Arithmetic mean and population std over samples with t in [t0, t1]."""
    t0, t1 = window
    if t0 > t1 or t0 < times[0] - 1e-12 or t1 > times[-1] + 1e-12:
        raise StatsError(f"window {window} not contained in the time grid")
    mask = (times >= t0 - 1e-12) & (times <= t1 + 1e-12)
    n = int(mask.sum())
    if n < MIN_WINDOW_SAMPLES:
        raise StatsError(f"window holds {n} samples; need at least {MIN_WINDOW_SAMPLES}")
    sel = values[mask]
    if sel.min() == sel.max():  # constant series: avoid round-off in the mean
        return EquilibriumStats(mean=float(sel[0]), std=0.0,
                                n_samples=n, window=(float(t0), float(t1)))
    mean = float(sel.mean())
    return EquilibriumStats(mean=mean, std=float(np.sqrt(np.mean((sel - mean) ** 2))),
                            n_samples=n, window=(float(t0), float(t1)))


def nearest_peak(times: np.ndarray, values: np.ndarray, t_hint: float,
                 radius: float = 1.0) -> int:
    """Index of the local maximum nearest t_hint (plateaus count; ties earlier)."""
    candidates = [
        i for i in range(1, len(times) - 1)
        if values[i] >= values[i - 1] and values[i] >= values[i + 1]
        and abs(times[i] - t_hint) <= radius
    ]
    if not candidates:
        raise PeakNotFoundError(f"no local maximum within {radius} of t={t_hint}")
    return min(candidates, key=lambda i: (abs(times[i] - t_hint), times[i]))


def peak_ratio(times: np.ndarray, values: np.ndarray, t_hint: float,
               stats: EquilibriumStats) -> float:
    """Value at the local maximum nearest t_hint over the equilibrium mean."""
    i = nearest_peak(times, values, t_hint)
    return float(values[i] / stats.mean)
