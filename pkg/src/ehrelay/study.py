"""Parameter sweeps, relay-power optimization, and figure datasets.

Sweeps and figure bundles produce flat row dicts (axis value, protocol,
mode, tau, stderr) that serialize to CSV with a fixed column order.
Optimization maximizes throughput over the preset relay power on a dB
grid (1 dB coarse scan plus golden-section refinement to 0.01 dB), using
common random numbers across candidates in simulation mode.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, replace
from typing import Callable, Sequence

import numpy as np

from . import analytic, sim
from .params import SystemParams, dbm_to_watts, db_to_linear
from .protocols import Protocol

__all__ = [
    "SweepSpec",
    "sweep",
    "optimize_pr",
    "optimize_baseline_alpha",
    "figure_bundle",
    "write_csv",
    "FIGURE_IDS",
    "CSV_COLUMNS",
]

CSV_COLUMNS = ("axis", "protocol", "mode", "tau", "stderr")

_AXES: dict[str, Callable[[SystemParams, float], SystemParams]] = {
    "pr_dbm": lambda p, v: replace(p, pr=dbm_to_watts(v)),
    "sigma_nr_dbm": lambda p, v: replace(p, sigma_nr=dbm_to_watts(v)),
    "sigma_nd_dbm": lambda p, v: replace(p, sigma_nd=dbm_to_watts(v)),
    "gamma_o_db": lambda p, v: replace(p, gamma_o=db_to_linear(v)),
}

_SIM_PROTOCOLS = (Protocol.AF_CONT, Protocol.AF_DISC,
                  Protocol.DF_CONT, Protocol.DF_DISC)


@dataclass(frozen=True)
class SweepSpec:
    """One sweep: an axis in dB/dBm, its grid, protocols, and the mode."""

    axis: str
    grid: tuple[float, ...]
    protocols: tuple[Protocol, ...]
    mode: str = "both"  # analytic | simulate | both
    n_blocks: int = 100_000
    seed: int = 1
    truncation_n: int = 10
    quad_tol: float = 1e-9

    def __post_init__(self) -> None:
        if self.axis not in _AXES:
            raise ValueError(f"unknown sweep axis {self.axis!r}; "
                             f"choose from {sorted(_AXES)}")
        if len(self.grid) == 0:
            raise ValueError("sweep grid must be non-empty")
        if any(b <= a for a, b in zip(self.grid, self.grid[1:])):
            raise ValueError("sweep grid must be strictly increasing")
        if self.mode not in ("analytic", "simulate", "both"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.mode != "analytic" and self.n_blocks < 1000:
            raise ValueError("simulated sweeps need n_blocks >= 1000")
        bad = [p.value for p in self.protocols if p not in _SIM_PROTOCOLS]
        if bad:
            raise ValueError(f"sweep supports {[q.value for q in _SIM_PROTOCOLS]}, "
                             f"got {bad}")


def sweep(spec: SweepSpec, base: SystemParams) -> list[dict]:
    """Evaluate every (grid point, protocol) cell; deterministic in seed."""
    set_axis = _AXES[spec.axis]
    rows: list[dict] = []
    for i, value in enumerate(spec.grid):
        p = set_axis(base, value)
        for j, proto in enumerate(spec.protocols):
            if spec.mode in ("analytic", "both"):
                tau = analytic.evaluate(
                    proto, analytic.inputs_for(p, spec.truncation_n,
                                               spec.quad_tol))
                rows.append({"axis": value, "protocol": proto.value,
                             "mode": "analytic", "tau": tau, "stderr": None})
            if spec.mode in ("simulate", "both"):
                cell_seed = spec.seed + i * len(spec.protocols) + j
                res = sim.run(p, proto, spec.n_blocks, cell_seed)
                rows.append({"axis": value, "protocol": proto.value,
                             "mode": "sim", "tau": res.mean_tau,
                             "stderr": res.std_error})
    return rows


def _golden_max(f: Callable[[float], float], lo: float, hi: float,
                tol: float) -> None:
    """Golden-section refinement; relies on f caching its evaluations."""
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    while hi - lo > tol:
        c = hi - invphi * (hi - lo)
        d = lo + invphi * (hi - lo)
        # ties shrink toward the lower end
        if f(c) >= f(d):
            hi = d
        else:
            lo = c
    f((lo + hi) / 2.0)


def _is_unimodal(vals: Sequence[float]) -> bool:
    """True when the sequence rises (or stays) then falls (or stays)."""
    scale = max(abs(v) for v in vals) or 1.0
    tol = 1e-12 * scale
    seen_fall = False
    for a, b in zip(vals, vals[1:]):
        if b - a < -tol:
            seen_fall = True
        elif b - a > tol and seen_fall:
            return False
    return True


def optimize_pr(base: SystemParams, protocol_id: Protocol,
                search_range_dbm: tuple[float, float] = (-40.0, 40.0),
                mode: str = "analytic", n_blocks: int = 100_000,
                seed: int = 1, truncation_n: int = 10,
                quad_tol: float = 1e-9) -> dict:
    """Maximize throughput over the preset relay power.

    Coarse 1 dB scan of the range, then golden-section refinement to
    0.01 dB around the best point when the scan looks unimodal; a fine
    0.1 dB scan of the whole range otherwise.  Exact ties resolve to
    the lowest power.  Simulation mode reuses one seed for every
    candidate (common random numbers).
    """
    lo, hi = search_range_dbm
    if not (math.isfinite(lo) and math.isfinite(hi) and lo < hi):
        raise ValueError(f"bad search range {search_range_dbm!r}")
    if mode not in ("analytic", "simulate"):
        raise ValueError(f"unknown mode {mode!r}")

    cache: dict[float, float] = {}

    def f(x_dbm: float) -> float:
        if x_dbm not in cache:
            p = replace(base, pr=dbm_to_watts(x_dbm))
            if mode == "analytic":
                tau = analytic.evaluate(
                    protocol_id, analytic.inputs_for(p, truncation_n, quad_tol))
            else:
                tau = sim.run(p, protocol_id, n_blocks, seed).mean_tau
            cache[x_dbm] = tau
        return cache[x_dbm]

    coarse = [lo + k for k in range(int(math.floor(hi - lo)) + 1)]
    if coarse[-1] < hi:
        coarse.append(hi)
    vals = [f(x) for x in coarse]

    if _is_unimodal(vals):
        i = int(np.argmax(vals))
        _golden_max(f, coarse[max(0, i - 1)],
                    coarse[min(len(coarse) - 1, i + 1)], 0.01)
    else:
        fine = [lo + 0.1 * k for k in range(int(math.floor((hi - lo) * 10)) + 1)]
        fvals = [f(x) for x in fine]
        i = int(np.argmax(fvals))
        _golden_max(f, fine[max(0, i - 1)],
                    fine[min(len(fine) - 1, i + 1)], 0.01)

    best = max(cache.values())
    tol = 1e-12 * abs(best)
    pr_opt = min(x for x, v in cache.items() if v >= best - tol)
    return {"pr_opt_dbm": pr_opt, "pr_opt_w": dbm_to_watts(pr_opt),
            "tau_opt": cache[pr_opt], "mode": mode}


def optimize_baseline_alpha(base: SystemParams,
                            search_grid: Sequence[float] | None = None,
                            n_blocks: int = 100_000,
                            seed: int = 1) -> dict:
    """Best fixed EH fraction for the variable-power reference scheme.

    Simulation only (the scheme has no closed form here); ties resolve
    to the lowest alpha.
    """
    if search_grid is None:
        search_grid = [round(0.05 * k, 2) for k in range(1, 20)]
    grid = [float(a) for a in search_grid]
    if not grid:
        raise ValueError("alpha grid must be non-empty")
    if any(not 0.0 < a < 1.0 for a in grid):
        raise ValueError("alpha grid values must lie in (0, 1)")
    best: tuple[float, float, float] | None = None
    for alpha in grid:
        res = sim.run(base, Protocol.BASELINE_FIXED, n_blocks, seed,
                      fixed_alpha=alpha)
        if best is None or res.mean_tau > best[1] + 1e-12 * abs(best[1]):
            best = (alpha, res.mean_tau, res.std_error)
    return {"alpha_opt": best[0], "tau_opt": best[1], "stderr": best[2]}


FIGURE_IDS = ("fig1", "fig2", "fig3", "fig4", "fig6")

_PR_GRID = tuple(float(x) for x in range(0, 41))
_ALL4 = (Protocol.AF_CONT, Protocol.AF_DISC, Protocol.DF_CONT,
         Protocol.DF_DISC)


def _optimal_rows(axis: str, grid: tuple[float, ...],
                  protocols: tuple[Protocol, ...], base: SystemParams,
                  n_blocks: int, seed: int,
                  with_baseline: bool) -> list[dict]:
    """Optimal-throughput rows: analytic optimum plus a simulation at the
    optimizing power (per grid point, per protocol)."""
    set_axis = _AXES[axis]
    rows: list[dict] = []
    for i, value in enumerate(grid):
        p = set_axis(base, value)
        for j, proto in enumerate(protocols):
            opt = optimize_pr(p, proto)
            rows.append({"axis": value, "protocol": proto.value,
                         "mode": "analytic", "tau": opt["tau_opt"],
                         "stderr": None})
            p_at = replace(p, pr=opt["pr_opt_w"])
            res = sim.run(p_at, proto, n_blocks,
                          seed + i * (len(protocols) + 1) + j)
            rows.append({"axis": value, "protocol": proto.value,
                         "mode": "sim", "tau": res.mean_tau,
                         "stderr": res.std_error})
        if with_baseline:
            opt = optimize_baseline_alpha(
                p, n_blocks=n_blocks,
                seed=seed + i * (len(protocols) + 1) + len(protocols))
            rows.append({"axis": value, "protocol": Protocol.BASELINE_FIXED.value,
                         "mode": "sim", "tau": opt["tau_opt"],
                         "stderr": opt["stderr"]})
    return rows


def figure_bundle(fig_id: str, base: SystemParams, n_blocks: int = 100_000,
                  seed: int = 1) -> list[dict]:
    """Dataset behind one report figure.

    fig1/fig2: throughput vs preset relay power (AF pair / DF pair),
    analytic and simulated.  fig3/fig4: optimal throughput vs relay /
    destination noise power for all four protocols.  fig6: optimal
    throughput vs threshold SNR for all four protocols plus the
    fixed-EH-fraction reference scheme.
    """
    if fig_id == "fig1":
        spec = SweepSpec(axis="pr_dbm", grid=_PR_GRID,
                         protocols=(Protocol.AF_CONT, Protocol.AF_DISC),
                         mode="both", n_blocks=n_blocks, seed=seed)
        return sweep(spec, base)
    if fig_id == "fig2":
        spec = SweepSpec(axis="pr_dbm", grid=_PR_GRID,
                         protocols=(Protocol.DF_CONT, Protocol.DF_DISC),
                         mode="both", n_blocks=n_blocks, seed=seed)
        return sweep(spec, base)
    if fig_id == "fig3":
        grid = tuple(float(x) for x in range(-100, -39, 5))
        return _optimal_rows("sigma_nr_dbm", grid, _ALL4, base, n_blocks,
                             seed, with_baseline=False)
    if fig_id == "fig4":
        grid = tuple(float(x) for x in range(-120, -59, 5))
        return _optimal_rows("sigma_nd_dbm", grid, _ALL4, base, n_blocks,
                             seed, with_baseline=False)
    if fig_id == "fig6":
        grid = tuple(float(x) for x in range(10, 81, 5))
        return _optimal_rows("gamma_o_db", grid, _ALL4, base, n_blocks,
                             seed, with_baseline=True)
    raise ValueError(f"unknown figure id {fig_id!r}; choose from {FIGURE_IDS}")


def write_csv(rows: list[dict], path: str) -> None:
    """Serialize rows with the fixed column order (axis, protocol, mode,
    tau, stderr); '.' decimal separator, empty stderr for analytic rows."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for r in rows:
            stderr = r["stderr"]
            writer.writerow([repr(float(r["axis"])), r["protocol"], r["mode"],
                             repr(float(r["tau"])),
                             "" if stderr is None else repr(float(stderr))])
