"""System parameters, dB/dBm ingestion, and derived link constants.

All internal computation is carried out in linear units (watts, meters,
dimensionless SNR).  Decibel values exist only at the configuration and
reporting boundary.  The block duration ``t`` is normalized to one second,
so per-block energies are numerically equal to average powers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, asdict

__all__ = [
    "SystemParams",
    "DerivedConstants",
    "DEFAULT_CONFIG",
    "CONFIG_KEYS",
    "dbm_to_watts",
    "watts_to_dbm",
    "db_to_linear",
    "linear_to_db",
    "from_db_config",
    "to_db_config",
    "derive_constants",
]


def dbm_to_watts(x_dbm: float) -> float:
    return 10.0 ** ((x_dbm - 30.0) / 10.0)


def watts_to_dbm(x_w: float) -> float:
    return 10.0 * math.log10(x_w) + 30.0


def db_to_linear(x_db: float) -> float:
    return 10.0 ** (x_db / 10.0)


def linear_to_db(x: float) -> float:
    return 10.0 * math.log10(x)


@dataclass(frozen=True)
class SystemParams:
    """Physical link parameters in linear units.

    Attributes
    ----------
    ps : source transmit power, W
    pr : preset relay transmit power, W
    eta : RF-to-DC energy conversion efficiency, in (0, 1)
    m : path loss exponent, >= 2
    d1 : source-to-relay distance, m
    d2 : relay-to-destination distance, m
    sigma_nr : noise power at the relay, W
    sigma_nd : noise power at the destination, W
    gamma_o : detection threshold SNR, linear
    t : block duration, s (normalized to 1)
    """

    ps: float
    pr: float
    eta: float
    m: float
    d1: float
    d2: float
    sigma_nr: float
    sigma_nd: float
    gamma_o: float
    t: float = 1.0

    def __post_init__(self) -> None:
        checks = [
            ("ps", self.ps > 0.0),
            ("pr", self.pr > 0.0),
            ("eta", 0.0 < self.eta < 1.0),
            ("m", self.m >= 2.0),
            ("d1", self.d1 > 0.0),
            ("d2", self.d2 > 0.0),
            ("sigma_nr", self.sigma_nr > 0.0),
            ("sigma_nd", self.sigma_nd > 0.0),
            ("gamma_o", self.gamma_o > 0.0),
            ("t", self.t > 0.0),
        ]
        for name, ok in checks:
            value = getattr(self, name)
            if not (ok and math.isfinite(value)):
                raise ValueError(f"invalid SystemParams field {name}={value!r}")

    @property
    def d1m(self) -> float:
        """Path loss factor d1**m of the source-to-relay link."""
        return self.d1 ** self.m

    @property
    def d2m(self) -> float:
        """Path loss factor d2**m of the relay-to-destination link."""
        return self.d2 ** self.m

    @property
    def energy_per_it(self) -> float:
        """Battery energy drained by one relay transmission, pr*t/2 (J)."""
        return self.pr * self.t / 2.0


@dataclass(frozen=True)
class DerivedConstants:
    """Shorthand constants used by the closed-form throughput expressions.

    a = ps*d2^m*sigma_nd*gamma_o, b = d1^m*d2^m*sigma_nr*sigma_nd*gamma_o,
    c = ps*pr and d = pr*d1^m*sigma_nr*gamma_o combine into the AF outage
    ratio; u = sqrt(4(ad+bc)/c^2) is the Bessel argument of its Rayleigh
    expectation.  a_bar and b_bar are the per-hop outage thresholds on
    |h|^2 and |g|^2, and rho = eta*ps*t/d1^m is the mean energy harvested
    per block (J per unit channel gain).
    """

    a: float
    b: float
    c: float
    d: float
    u: float
    a_bar: float
    b_bar: float
    rho: float

    def __post_init__(self) -> None:
        for name, value in asdict(self).items():
            if not (math.isfinite(value) and value > 0.0):
                raise ValueError(
                    f"derived constant {name}={value!r} is not finite and positive; "
                    "parameter scales are pathological"
                )


def derive_constants(p: SystemParams) -> DerivedConstants:
    """Compute the derived constants for a given parameter set."""
    a = p.ps * p.d2m * p.sigma_nd * p.gamma_o
    b = p.d1m * p.d2m * p.sigma_nr * p.sigma_nd * p.gamma_o
    c = p.ps * p.pr
    d = p.pr * p.d1m * p.sigma_nr * p.gamma_o
    u = math.sqrt(4.0 * (a * d + b * c) / c**2)
    a_bar = p.gamma_o * p.d1m * p.sigma_nr / p.ps
    b_bar = p.gamma_o * p.d2m * p.sigma_nd / p.pr
    rho = p.eta * p.ps * p.t / p.d1m
    return DerivedConstants(a=a, b=b, c=c, d=d, u=u, a_bar=a_bar, b_bar=b_bar, rho=rho)


# Reference configuration: 46 dBm source power, path loss exponent 3,
# 35 m / 10 m hops, 50% conversion efficiency, -70/-100 dBm noise floors,
# 60 dB detection threshold.
DEFAULT_CONFIG: dict[str, float | int] = {
    "ps_dbm": 46.0,
    "pr_dbm": 20.0,
    "eta": 0.5,
    "m": 3.0,
    "d1_m": 35.0,
    "d2_m": 10.0,
    "sigma_nr_dbm": -70.0,
    "sigma_nd_dbm": -100.0,
    "gamma_o_db": 60.0,
    "seed": 1,
}

CONFIG_KEYS = tuple(k for k in DEFAULT_CONFIG if k != "seed")


def from_db_config(config: dict) -> SystemParams:
    """Build SystemParams from a flat config with dBm/dB power fields.

    Required keys: ps_dbm, pr_dbm, eta, m, d1_m, d2_m, sigma_nr_dbm,
    sigma_nd_dbm, gamma_o_db.  A ``seed`` key is permitted and ignored
    here (it belongs to the simulation layer).
    """
    missing = [k for k in CONFIG_KEYS if k not in config]
    if missing:
        raise ValueError(f"config is missing required keys: {', '.join(missing)}")
    unknown = [k for k in config if k not in DEFAULT_CONFIG]
    if unknown:
        raise ValueError(f"config has unknown keys: {', '.join(unknown)}")
    for k in CONFIG_KEYS:
        v = config[k]
        if not (isinstance(v, (int, float)) and math.isfinite(v)):
            raise ValueError(f"config value {k}={v!r} is not a finite number")
    return SystemParams(
        ps=dbm_to_watts(config["ps_dbm"]),
        pr=dbm_to_watts(config["pr_dbm"]),
        eta=float(config["eta"]),
        m=float(config["m"]),
        d1=float(config["d1_m"]),
        d2=float(config["d2_m"]),
        sigma_nr=dbm_to_watts(config["sigma_nr_dbm"]),
        sigma_nd=dbm_to_watts(config["sigma_nd_dbm"]),
        gamma_o=db_to_linear(config["gamma_o_db"]),
    )


def to_db_config(p: SystemParams) -> dict[str, float]:
    """Inverse of from_db_config (up to floating point round-trip)."""
    return {
        "ps_dbm": watts_to_dbm(p.ps),
        "pr_dbm": watts_to_dbm(p.pr),
        "eta": p.eta,
        "m": p.m,
        "d1_m": p.d1,
        "d2_m": p.d2,
        "sigma_nr_dbm": watts_to_dbm(p.sigma_nr),
        "sigma_nd_dbm": watts_to_dbm(p.sigma_nd),
        "gamma_o_db": linear_to_db(p.gamma_o),
    }


def default_params() -> SystemParams:
    """SystemParams for the reference configuration."""
    return from_db_config({k: v for k, v in DEFAULT_CONFIG.items() if k != "seed"})
