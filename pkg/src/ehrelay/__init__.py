"""Wireless-powered relay link simulator and analytic evaluator.

Time-switching energy-harvesting/information-transmission protocols for
AF and DF relaying (continuous and discrete EH) over Rayleigh block
fading: per-block state machines, a Monte Carlo engine, closed-form
throughput expressions, and experiment sweeps that cross-validate the
two.
"""

from .analytic import (
    AnalyticInputs,
    evaluate,
    inputs_for,
    pattern_distributions,
    throughput_af_continuous,
    throughput_af_discrete,
    throughput_df_continuous_lb,
    throughput_df_discrete_lb,
)
from .channel import ChannelBlock, draw_block, draw_blocks, split_stream
from .params import (
    DEFAULT_CONFIG,
    DerivedConstants,
    SystemParams,
    default_params,
    derive_constants,
    from_db_config,
    to_db_config,
)
from .protocols import (
    BlockOutcome,
    Protocol,
    RelayState,
    af_snr,
    df_snrs,
    step,
    step_af_continuous,
    step_af_discrete,
    step_baseline_fixed,
    step_df_continuous,
    step_df_discrete,
)
from .sim import SimResult, SimTallies, run, run_parallel
from .study import (
    SweepSpec,
    figure_bundle,
    optimize_baseline_alpha,
    optimize_pr,
    sweep,
    write_csv,
)

__version__ = "0.1.0"

__all__ = [
    "AnalyticInputs",
    "BlockOutcome",
    "ChannelBlock",
    "DEFAULT_CONFIG",
    "DerivedConstants",
    "Protocol",
    "RelayState",
    "SimResult",
    "SimTallies",
    "SweepSpec",
    "SystemParams",
    "af_snr",
    "default_params",
    "derive_constants",
    "df_snrs",
    "draw_block",
    "draw_blocks",
    "evaluate",
    "figure_bundle",
    "from_db_config",
    "inputs_for",
    "optimize_baseline_alpha",
    "optimize_pr",
    "pattern_distributions",
    "run",
    "run_parallel",
    "split_stream",
    "step",
    "step_af_continuous",
    "step_af_discrete",
    "step_baseline_fixed",
    "step_df_continuous",
    "step_df_discrete",
    "sweep",
    "throughput_af_continuous",
    "throughput_af_discrete",
    "throughput_df_continuous_lb",
    "throughput_df_discrete_lb",
    "to_db_config",
    "write_csv",
]
