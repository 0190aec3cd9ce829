"""Monte Carlo engine: run a protocol over many fading blocks.

Each run averages the per-block throughput tau_i and reports the standard
error of the mean, plus the pattern tallies needed to validate the
battery-level and block-count distributions (starting energy samples,
charging-run lengths X, outage-run lengths Y).

Blocks within an EH-IT pattern are dependent, so consumers should apply
generous sigma margins (4 sigma for exact comparisons) rather than treat
the standard error as i.i.d.-grade.

Parallel runs split the generator into per-worker substreams, so a
parallel result is statistically equivalent (not bit-identical) to the
serial one; workers=1 reproduces run() exactly.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .channel import ChannelBlock, draw_blocks, split_stream
from .params import SystemParams, derive_constants
from .protocols import Protocol, af_snr

__all__ = ["SimTallies", "SimResult", "run", "run_parallel"]


@dataclass(frozen=True)
class SimTallies:
    """Event counts and pattern samples collected during a run.

    eo_samples holds the battery level at every EH-IT pattern start;
    x_samples the number of charging blocks per completed pattern;
    y_samples the number of full-battery relay-outage blocks per
    completed pattern (DF discrete only).
    """

    n_blocks: int
    n_it_blocks: int
    n_relay_outage_blocks: int
    n_dest_outages: int
    n_patterns: int
    x_samples: np.ndarray
    y_samples: np.ndarray
    eo_samples: np.ndarray

    @property
    def it_block_fraction(self) -> float:
        return self.n_it_blocks / self.n_blocks if self.n_blocks else 0.0

    @property
    def relay_outage_rate(self) -> float:
        return self.n_relay_outage_blocks / self.n_blocks if self.n_blocks else 0.0

    @property
    def dest_outage_rate(self) -> float:
        """Outage fraction among blocks that attempted IT."""
        return self.n_dest_outages / self.n_it_blocks if self.n_it_blocks else 0.0

    @property
    def mean_x(self) -> float:
        return float(self.x_samples.mean()) if self.x_samples.size else 0.0

    @property
    def mean_y(self) -> float:
        return float(self.y_samples.mean()) if self.y_samples.size else 0.0


@dataclass(frozen=True)
class SimResult:
    mean_tau: float
    std_error: float
    n_blocks: int
    tallies: SimTallies


def _kernel_af_cont(p: SystemParams, h2: np.ndarray,
                    g2: np.ndarray) -> tuple[np.ndarray, SimTallies]:
    alpha = p.d1m * p.pr / (2.0 * p.eta * p.ps * h2 + p.d1m * p.pr)
    ok = af_snr(p, ChannelBlock(h2=h2, g2=g2)) >= p.gamma_o
    taus = np.where(ok, (1.0 - alpha) / 2.0, 0.0)
    n = h2.size
    empty = np.empty(0)
    tallies = SimTallies(
        n_blocks=n, n_it_blocks=int((alpha < 1.0).sum()),
        n_relay_outage_blocks=0, n_dest_outages=int((~ok).sum()),
        n_patterns=n, x_samples=empty, y_samples=empty, eo_samples=empty)
    return taus, tallies


def _kernel_baseline(p: SystemParams, h2: np.ndarray, g2: np.ndarray,
                     fixed_alpha: float) -> tuple[np.ndarray, SimTallies]:
    if not 0.0 < fixed_alpha < 1.0:
        raise ValueError(f"fixed_alpha must lie in (0, 1), got {fixed_alpha!r}")
    pr_i = (2.0 * p.eta * p.ps * h2 * fixed_alpha
            / (p.d1m * (1.0 - fixed_alpha)))
    num = p.ps * pr_i * h2 * g2
    den = (pr_i * g2 * p.d1m * p.sigma_nr
           + p.d2m * p.sigma_nd * (p.ps * h2 + p.d1m * p.sigma_nr))
    ok = num / den >= p.gamma_o
    taus = np.where(ok, (1.0 - fixed_alpha) / 2.0, 0.0)
    n = h2.size
    empty = np.empty(0)
    tallies = SimTallies(
        n_blocks=n, n_it_blocks=n, n_relay_outage_blocks=0,
        n_dest_outages=int((~ok).sum()), n_patterns=n,
        x_samples=empty, y_samples=empty, eo_samples=empty)
    return taus, tallies


def _kernel_af_disc(p: SystemParams, h2: np.ndarray,
                    g2: np.ndarray) -> tuple[np.ndarray, SimTallies]:
    n = h2.size
    taus = np.zeros(n)
    ok = af_snr(p, ChannelBlock(h2=h2, g2=g2)) >= p.gamma_o
    e_req = p.energy_per_it
    gain_to_energy = p.eta * p.ps * p.t / p.d1m
    battery = 0.0
    x = 0
    xs: list[int] = []
    eos: list[float] = []
    at_pattern_start = True
    n_it = 0
    n_dest_out = 0
    for i in range(n):
        if at_pattern_start:
            eos.append(battery)
            at_pattern_start = False
        if battery >= e_req:
            battery -= e_req
            n_it += 1
            if ok[i]:
                taus[i] = 0.5
            else:
                n_dest_out += 1
            xs.append(x)
            x = 0
            at_pattern_start = True
        else:
            battery += gain_to_energy * h2[i]
            x += 1
    tallies = SimTallies(
        n_blocks=n, n_it_blocks=n_it, n_relay_outage_blocks=0,
        n_dest_outages=n_dest_out, n_patterns=len(xs),
        x_samples=np.asarray(xs, dtype=float), y_samples=np.empty(0),
        eo_samples=np.asarray(eos, dtype=float))
    return taus, tallies


def _kernel_df_cont(p: SystemParams, h2: np.ndarray,
                    g2: np.ndarray) -> tuple[np.ndarray, SimTallies]:
    dc = derive_constants(p)
    n = h2.size
    taus = np.zeros(n)
    relay_out = h2 < dc.a_bar
    dest_ok = g2 >= dc.b_bar
    e_req = p.energy_per_it
    gain_to_energy = p.eta * p.ps * p.t / p.d1m
    d1m = p.d1m
    battery = 0.0
    eos: list[float] = []
    at_pattern_start = True
    n_patterns = 0
    n_it = 0
    n_dest_out = 0
    for i in range(n):
        if at_pattern_start:
            eos.append(battery)
            at_pattern_start = False
        if relay_out[i]:
            battery += gain_to_energy * h2[i]
        elif battery > e_req:
            battery -= e_req
            n_it += 1
            if dest_ok[i]:
                taus[i] = 0.5
            else:
                n_dest_out += 1
            n_patterns += 1
            at_pattern_start = True
        else:
            alpha = ((d1m * p.pr * p.t - 2.0 * battery * d1m)
                     / (2.0 * p.eta * p.ps * h2[i] * p.t + d1m * p.pr * p.t))
            battery = 0.0
            n_it += 1
            if dest_ok[i]:
                taus[i] = (1.0 - alpha) / 2.0
            else:
                n_dest_out += 1
            n_patterns += 1
            at_pattern_start = True
    tallies = SimTallies(
        n_blocks=n, n_it_blocks=n_it,
        n_relay_outage_blocks=int(relay_out.sum()),
        n_dest_outages=n_dest_out, n_patterns=n_patterns,
        x_samples=np.empty(0), y_samples=np.empty(0),
        eo_samples=np.asarray(eos, dtype=float))
    return taus, tallies


def _kernel_df_disc(p: SystemParams, h2: np.ndarray,
                    g2: np.ndarray) -> tuple[np.ndarray, SimTallies]:
    dc = derive_constants(p)
    n = h2.size
    taus = np.zeros(n)
    relay_out = h2 < dc.a_bar
    dest_ok = g2 >= dc.b_bar
    e_req = p.energy_per_it
    gain_to_energy = p.eta * p.ps * p.t / p.d1m
    battery = 0.0
    x = 0
    y = 0
    xs: list[int] = []
    ys: list[int] = []
    eos: list[float] = []
    at_pattern_start = True
    n_it = 0
    n_dest_out = 0
    for i in range(n):
        if at_pattern_start:
            eos.append(battery)
            at_pattern_start = False
        if battery < e_req:
            battery += gain_to_energy * h2[i]
            x += 1
        elif relay_out[i]:
            battery += gain_to_energy * h2[i]
            y += 1
        else:
            battery -= e_req
            n_it += 1
            if dest_ok[i]:
                taus[i] = 0.5
            else:
                n_dest_out += 1
            xs.append(x)
            ys.append(y)
            x = 0
            y = 0
            at_pattern_start = True
    tallies = SimTallies(
        n_blocks=n, n_it_blocks=n_it,
        n_relay_outage_blocks=int(relay_out.sum()),
        n_dest_outages=n_dest_out, n_patterns=len(xs),
        x_samples=np.asarray(xs, dtype=float),
        y_samples=np.asarray(ys, dtype=float),
        eo_samples=np.asarray(eos, dtype=float))
    return taus, tallies


def _simulate_chunk(p: SystemParams, protocol_id: Protocol, n_blocks: int,
                    seed: int, worker: int,
                    fixed_alpha: float | None) -> tuple[np.ndarray, SimTallies]:
    rng = split_stream(seed, worker)
    h2, g2 = draw_blocks(rng, n_blocks)
    if protocol_id is Protocol.AF_CONT:
        return _kernel_af_cont(p, h2, g2)
    if protocol_id is Protocol.AF_DISC:
        return _kernel_af_disc(p, h2, g2)
    if protocol_id is Protocol.DF_CONT:
        return _kernel_df_cont(p, h2, g2)
    if protocol_id is Protocol.DF_DISC:
        return _kernel_df_disc(p, h2, g2)
    if protocol_id is Protocol.BASELINE_FIXED:
        if fixed_alpha is None:
            raise ValueError("BASELINE_FIXED requires fixed_alpha")
        return _kernel_baseline(p, h2, g2, fixed_alpha)
    raise ValueError(f"unhandled protocol {protocol_id!r}")


def _chunk_worker(args) -> tuple[np.ndarray, SimTallies]:
    return _simulate_chunk(*args)


def _finalize(chunks: list[tuple[np.ndarray, SimTallies]]) -> SimResult:
    taus = np.concatenate([c[0] for c in chunks])
    n = taus.size
    mean = float(taus.mean())
    std_error = float(taus.std(ddof=1) / math.sqrt(n)) if n > 1 else 0.0
    tl = [c[1] for c in chunks]
    tallies = SimTallies(
        n_blocks=sum(t.n_blocks for t in tl),
        n_it_blocks=sum(t.n_it_blocks for t in tl),
        n_relay_outage_blocks=sum(t.n_relay_outage_blocks for t in tl),
        n_dest_outages=sum(t.n_dest_outages for t in tl),
        n_patterns=sum(t.n_patterns for t in tl),
        x_samples=np.concatenate([t.x_samples for t in tl]),
        y_samples=np.concatenate([t.y_samples for t in tl]),
        eo_samples=np.concatenate([t.eo_samples for t in tl]))
    return SimResult(mean_tau=mean, std_error=std_error, n_blocks=n,
                     tallies=tallies)


def run(p: SystemParams, protocol_id: Protocol, n_blocks: int = 100_000,
        seed: int = 1, fixed_alpha: float | None = None) -> SimResult:
    """Simulate n_blocks fading blocks; deterministic in (p, seed)."""
    if n_blocks < 1:
        raise ValueError("n_blocks must be >= 1")
    return _finalize([_simulate_chunk(p, protocol_id, n_blocks, seed, 0,
                                      fixed_alpha)])


def run_parallel(p: SystemParams, protocol_id: Protocol,
                 n_blocks: int = 100_000, seed: int = 1, workers: int = 1,
                 fixed_alpha: float | None = None) -> SimResult:
    """Pooled simulation over per-worker substreams.

    workers=1 is bit-identical to run(); more workers change the stream
    layout (chunk k uses substream k, remainder blocks go to the last
    worker) but not the statistics.
    """
    if workers < 1:
        raise ValueError("workers must be >= 1")
    if n_blocks < 1:
        raise ValueError("n_blocks must be >= 1")
    base = n_blocks // workers
    sizes = [base] * workers
    sizes[-1] += n_blocks - base * workers
    jobs = [(p, protocol_id, size, seed, k, fixed_alpha)
            for k, size in enumerate(sizes) if size > 0]
    if len(jobs) == 1:
        chunks = [_simulate_chunk(*jobs[0])]
    else:
        with ProcessPoolExecutor(max_workers=len(jobs)) as pool:
            chunks = list(pool.map(_chunk_worker, jobs))
    return _finalize(chunks)
