"""Per-block state machines of the relaying protocols.

Each step function consumes one fading block and the relay battery state
and produces a BlockOutcome; stateful protocols also return the updated
RelayState (value semantics, inputs are never mutated).

Protocol taxonomy:

* AF_CONT: amplify-and-forward, continuous EH.  The relay harvests within
  every block exactly the energy one transmission needs, so the battery
  is always empty at block boundaries.
* AF_DISC: amplify-and-forward, discrete EH.  Whole blocks are either EH
  (battery below pr*t/2) or IT (battery is drained by pr*t/2).
* DF_CONT: decode-and-forward, continuous EH.  A block whose source-relay
  gain falls below the decoding threshold (relay outage) is spent wholly
  on EH; otherwise the harvest time tops the battery up to pr*t/2.
* DF_DISC: decode-and-forward, discrete EH.  As AF_DISC, but a full
  battery still defers IT while the relay is in outage.
* BASELINE_FIXED: fixed EH fraction alpha in every block; the relay
  spends whatever it harvested, so its transmit power varies per block.

Battery sufficiency is tested with >= at exactly pr*t/2 (the boundary has
probability zero under continuous fading).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .channel import ChannelBlock
from .params import DerivedConstants, SystemParams

__all__ = [
    "Protocol",
    "RelayState",
    "BlockOutcome",
    "af_snr",
    "df_snrs",
    "step_af_continuous",
    "step_af_discrete",
    "step_df_continuous",
    "step_df_discrete",
    "step_baseline_fixed",
    "step",
]


class Protocol(enum.Enum):
    AF_CONT = "af_cont"
    AF_DISC = "af_disc"
    DF_CONT = "df_cont"
    DF_DISC = "df_disc"
    BASELINE_FIXED = "baseline"

    @classmethod
    def from_name(cls, name: str) -> "Protocol":
        for proto in cls:
            if proto.value == name:
                return proto
        raise ValueError(f"unknown protocol {name!r}; "
                         f"choose from {[p.value for p in cls]}")


@dataclass(frozen=True)
class RelayState:
    """Battery energy (J) carried across blocks."""

    battery: float
    protocol_id: Protocol

    def __post_init__(self) -> None:
        if self.battery < 0.0:
            raise ValueError(f"battery must be >= 0, got {self.battery!r}")


@dataclass(frozen=True)
class BlockOutcome:
    """Record of one simulated block.

    tau satisfies tau == (1 - outage) * (1 - alpha) / 2 exactly;
    energy_in/energy_out are the battery levels at the block boundaries.
    """

    alpha: float
    outage: bool
    tau: float
    energy_in: float
    energy_out: float
    relay_outage: bool = False


def af_snr(p: SystemParams, blk: ChannelBlock):
    """End-to-end SNR of the amplify-and-forward two-hop link.

    Accepts scalars or numpy arrays in place of the block gains.
    """
    h2, g2 = blk.h2, blk.g2
    num = p.ps * p.pr * h2 * g2
    den = (p.pr * g2 * p.d1m * p.sigma_nr
           + p.d2m * p.sigma_nd * (p.ps * h2 + p.d1m * p.sigma_nr))
    return num / den


def df_snrs(p: SystemParams, blk: ChannelBlock):
    """Per-hop SNRs (relay, destination) of decode-and-forward relaying."""
    gamma_r = p.ps * blk.h2 / (p.d1m * p.sigma_nr)
    gamma_d = p.pr * blk.g2 / (p.d2m * p.sigma_nd)
    return gamma_r, gamma_d


def _harvest(p: SystemParams, h2: float) -> float:
    # energy harvested over a full block, eta*ps*t/d1^m per unit gain
    return (p.eta * p.ps * p.t / p.d1m) * h2


def step_af_continuous(p: SystemParams, dc: DerivedConstants,
                       blk: ChannelBlock, state: RelayState) -> BlockOutcome:
    """AF with continuous EH: harvest exactly one transmission's worth.

    alpha solves the in-block energy balance
    eta*ps*h2*alpha*t/d1^m == pr*(1-alpha)*t/2, which always has a
    solution in (0, 1] so the battery never accumulates.
    """
    if state.battery != 0.0:
        raise ValueError("AF_CONT requires an empty battery at block start")
    alpha = p.d1m * p.pr / (2.0 * p.eta * p.ps * blk.h2 + p.d1m * p.pr)
    outage = bool(af_snr(p, blk) < p.gamma_o)
    tau = 0.0 if outage else (1.0 - alpha) / 2.0
    return BlockOutcome(alpha=alpha, outage=outage, tau=tau,
                        energy_in=0.0, energy_out=0.0)


def step_af_discrete(p: SystemParams, dc: DerivedConstants,
                     blk: ChannelBlock,
                     state: RelayState) -> tuple[BlockOutcome, RelayState]:
    """AF with discrete EH: charge until pr*t/2 is banked, then transmit."""
    e_req = p.energy_per_it
    if state.battery >= e_req:
        battery = state.battery - e_req
        outage = bool(af_snr(p, blk) < p.gamma_o)
        out = BlockOutcome(alpha=0.0, outage=outage,
                           tau=0.0 if outage else 0.5,
                           energy_in=state.battery, energy_out=battery)
    else:
        battery = state.battery + _harvest(p, blk.h2)
        out = BlockOutcome(alpha=1.0, outage=False, tau=0.0,
                           energy_in=state.battery, energy_out=battery)
    return out, RelayState(battery=battery, protocol_id=state.protocol_id)


def step_df_continuous(p: SystemParams, dc: DerivedConstants,
                       blk: ChannelBlock,
                       state: RelayState) -> tuple[BlockOutcome, RelayState]:
    """DF with continuous EH.

    Relay outage (h2 < a_bar) turns the whole block into EH.  Otherwise
    the EH fraction tops the battery up to pr*t/2 and the rest of the
    block carries IT; a battery already past pr*t/2 transmits
    immediately (alpha = 0).
    """
    e_req = p.energy_per_it
    if blk.h2 < dc.a_bar:
        battery = state.battery + _harvest(p, blk.h2)
        out = BlockOutcome(alpha=1.0, outage=False, tau=0.0,
                           energy_in=state.battery, energy_out=battery,
                           relay_outage=True)
    elif state.battery > e_req:
        battery = state.battery - e_req
        outage = bool(blk.g2 < dc.b_bar)
        out = BlockOutcome(alpha=0.0, outage=outage,
                           tau=0.0 if outage else 0.5,
                           energy_in=state.battery, energy_out=battery)
    else:
        alpha = ((p.d1m * p.pr * p.t - 2.0 * state.battery * p.d1m)
                 / (2.0 * p.eta * p.ps * blk.h2 * p.t + p.d1m * p.pr * p.t))
        battery = 0.0
        outage = bool(blk.g2 < dc.b_bar)
        tau = 0.0 if outage else (1.0 - alpha) / 2.0
        out = BlockOutcome(alpha=alpha, outage=outage, tau=tau,
                           energy_in=state.battery, energy_out=0.0)
    return out, RelayState(battery=battery, protocol_id=state.protocol_id)


def step_df_discrete(p: SystemParams, dc: DerivedConstants,
                     blk: ChannelBlock,
                     state: RelayState) -> tuple[BlockOutcome, RelayState]:
    """DF with discrete EH.

    EH when the battery is short of pr*t/2, and also (battery full) while
    the relay is in outage; IT only with a full battery and a decodable
    source-relay link.  The outage flag of the source-relay hop is
    recorded on every block, including charging ones.
    """
    e_req = p.energy_per_it
    relay_out = bool(blk.h2 < dc.a_bar)
    if state.battery < e_req or relay_out:
        battery = state.battery + _harvest(p, blk.h2)
        out = BlockOutcome(alpha=1.0, outage=False, tau=0.0,
                           energy_in=state.battery, energy_out=battery,
                           relay_outage=relay_out)
    else:
        battery = state.battery - e_req
        outage = bool(blk.g2 < dc.b_bar)
        out = BlockOutcome(alpha=0.0, outage=outage,
                           tau=0.0 if outage else 0.5,
                           energy_in=state.battery, energy_out=battery)
    return out, RelayState(battery=battery, protocol_id=state.protocol_id)


def step_baseline_fixed(p: SystemParams, blk: ChannelBlock,
                        fixed_alpha: float) -> BlockOutcome:
    """Fixed EH fraction in every block, variable relay transmit power.

    The relay spends the block's harvest in the same block, so its power
    follows from the energy balance: pr_i = 2*eta*ps*h2*alpha /
    (d1^m*(1-alpha)).  No energy is carried across blocks.
    """
    if not 0.0 < fixed_alpha < 1.0:
        raise ValueError(f"fixed_alpha must lie in (0, 1), got {fixed_alpha!r}")
    pr_i = (2.0 * p.eta * p.ps * blk.h2 * fixed_alpha
            / (p.d1m * (1.0 - fixed_alpha)))
    if pr_i > 0.0:
        num = p.ps * pr_i * blk.h2 * blk.g2
        den = (pr_i * blk.g2 * p.d1m * p.sigma_nr
               + p.d2m * p.sigma_nd * (p.ps * blk.h2 + p.d1m * p.sigma_nr))
        outage = bool(num / den < p.gamma_o)
    else:
        outage = True
    tau = 0.0 if outage else (1.0 - fixed_alpha) / 2.0
    return BlockOutcome(alpha=fixed_alpha, outage=outage, tau=tau,
                        energy_in=0.0, energy_out=0.0)


def step(p: SystemParams, dc: DerivedConstants, blk: ChannelBlock,
         state: RelayState,
         fixed_alpha: float | None = None) -> tuple[BlockOutcome, RelayState]:
    """Dispatch one block through the state machine of state.protocol_id."""
    proto = state.protocol_id
    if proto is Protocol.AF_CONT:
        return step_af_continuous(p, dc, blk, state), state
    if proto is Protocol.AF_DISC:
        return step_af_discrete(p, dc, blk, state)
    if proto is Protocol.DF_CONT:
        return step_df_continuous(p, dc, blk, state)
    if proto is Protocol.DF_DISC:
        return step_df_discrete(p, dc, blk, state)
    if proto is Protocol.BASELINE_FIXED:
        if fixed_alpha is None:
            raise ValueError("BASELINE_FIXED requires fixed_alpha")
        return step_baseline_fixed(p, blk, fixed_alpha), state
    raise ValueError(f"unhandled protocol {proto!r}")
