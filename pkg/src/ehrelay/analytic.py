"""Closed-form throughput of the four protocols under Rayleigh fading.

The AF expressions are exact expectations of the per-block throughput;
the DF expressions are lower bounds obtained by assuming an empty battery
at the start of every EH-IT pattern (the neglected leftover energy is the
one harvested during relay-outage runs, which is small whenever outage
runs are short).

The AF continuous-EH result needs one semi-infinite integral with no
closed form (the expectation of the harvesting fraction against the
no-outage kernel); it is always evaluated numerically.

The DF continuous-EH bound is an expansion over the number n of
consecutive relay-outage blocks preceding a transmission.  Writing
A = pr*d1^m/(2*eta*ps) for the required-energy-to-harvest-rate ratio
(in units of channel gain), the n-th term is the exact (n+1)-fold
integral

    I_n = int_{[0,a_bar]^n} dh' int_{a_bar}^inf dh e^{-h-sum h'}
          * min(1, (h + sum h')/(h + A)),

which reduces to

    I_0 = e^-a_bar * (1 - A * e1s(a_bar + A)),
    I_n = e^-a_bar * ((1 - e^-a_bar)^n - e1s(a_bar + A) * J_n),
    J_n = int_{[0,a_bar]^n} max(0, A - sum h') e^{-sum h'} d^n h',

with e1s(x) = e^x E1(x).  J_n is elementary when A >= n*a_bar and is
otherwise an inclusion-exclusion sum of lower incomplete gamma terms.
Every term is non-negative, so truncating the series preserves the
lower-bound property.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .params import DerivedConstants, SystemParams, derive_constants
from .protocols import Protocol
from .specfun import (
    bessel_k1,
    exp_integral_e1_scaled,
    integrate_semi_infinite,
    reg_lower_gamma,
)

__all__ = [
    "AnalyticInputs",
    "inputs_for",
    "throughput_af_continuous",
    "throughput_af_discrete",
    "throughput_df_continuous_lb",
    "throughput_df_discrete_lb",
    "evaluate",
    "PatternDistributions",
    "pattern_distributions",
]


@dataclass(frozen=True)
class AnalyticInputs:
    """Everything the evaluators need: parameters, derived constants,
    series truncation (DF continuous only) and quadrature tolerance."""

    params: SystemParams
    dc: DerivedConstants
    truncation_n: int = 10
    quad_tol: float = 1e-9

    def __post_init__(self) -> None:
        if self.truncation_n < 1:
            raise ValueError("truncation_n must be >= 1")
        if not (1e-14 < self.quad_tol < 1e-2):
            raise ValueError("quad_tol must lie in (1e-14, 1e-2)")


def inputs_for(p: SystemParams, truncation_n: int = 10,
               quad_tol: float = 1e-9) -> AnalyticInputs:
    return AnalyticInputs(params=p, dc=derive_constants(p),
                          truncation_n=truncation_n, quad_tol=quad_tol)


def throughput_af_continuous(inputs: AnalyticInputs) -> float:
    """Exact mean throughput of AF with continuous EH.

    tau = e^{-(a+d)/c}/2 * (u K1(u) - c d1^m pr nu) with nu evaluated by
    adaptive quadrature.
    """
    p, dc = inputs.params, inputs.dc
    prefactor = math.exp(-(dc.a + dc.d) / dc.c)
    if prefactor == 0.0:
        return 0.0
    peak = (dc.a * dc.d + dc.b * dc.c) / dc.c**2  # equals (u/2)^2
    den_lin = 2.0 * dc.c * p.eta * p.ps
    den_const = 2.0 * p.eta * p.ps * dc.d + dc.c * p.d1m * p.pr

    def integrand(x: float) -> float:
        return math.exp(-(x + peak / x)) / (den_lin * x + den_const)

    nu = integrate_semi_infinite(integrand, tol_rel=inputs.quad_tol)
    tau = prefactor / 2.0 * (dc.u * bessel_k1(dc.u)
                             - dc.c * p.d1m * p.pr * nu.value)
    return max(0.0, tau)  # guard round-off when tau ~ 0


def throughput_af_discrete(inputs: AnalyticInputs) -> float:
    """Exact mean throughput of AF with discrete EH.

    The no-outage probability e^{-(a+d)/c} u K1(u) multiplies the
    long-run IT-block fraction 1/(1 + pr d1^m/(2 eta ps)).
    """
    p, dc = inputs.params, inputs.dc
    prefactor = math.exp(-(dc.a + dc.d) / dc.c)
    it_fraction = 1.0 / (1.0 + p.pr * p.d1m / (2.0 * p.eta * p.ps))
    return prefactor * dc.u * bessel_k1(dc.u) * it_fraction / 2.0


def _outage_run_term(n: int, a_bar: float, big_a: float, e1s: float) -> float:
    """Exact n-th term I_n of the DF continuous-EH expansion (n >= 1)."""
    s0 = reg_lower_gamma(1, a_bar)          # 1 - e^-a_bar
    if big_a >= n * a_bar:
        # no clipping: max(0, A - s) = A - s over the whole box
        s1 = reg_lower_gamma(2, a_bar)      # 1 - (1 + a_bar) e^-a_bar
        j_n = big_a * s0**n - n * s1 * s0 ** (n - 1)
    else:
        j_n = 0.0
        j = 0
        while j * a_bar < big_a:
            lj = big_a - j * a_bar
            piece = ((big_a - j * a_bar) * reg_lower_gamma(n, lj)
                     - n * reg_lower_gamma(n + 1, lj))
            j_n += (-1.0) ** j * math.comb(n, j) * math.exp(-j * a_bar) * piece
            j += 1
    return math.exp(-a_bar) * (s0**n - e1s * j_n)


def throughput_df_continuous_lb(inputs: AnalyticInputs) -> float:
    """Lower bound on the mean throughput of DF with continuous EH.

    Series over the relay-outage run length, truncated at truncation_n;
    all terms are non-negative so the truncation stays a lower bound.
    """
    p, dc = inputs.params, inputs.dc
    prefactor = math.exp(-(dc.a_bar + dc.b_bar)) / 2.0
    if prefactor == 0.0:
        return 0.0
    big_a = p.d1m * p.pr / (2.0 * p.eta * p.ps)
    e1s = exp_integral_e1_scaled(dc.a_bar + big_a)
    total = math.exp(-dc.a_bar) * (1.0 - big_a * e1s)
    if not math.isfinite(total):
        raise ArithmeticError("DF continuous bound: term n=0 is not finite")
    total = max(0.0, total)
    for n in range(1, inputs.truncation_n + 1):
        term = _outage_run_term(n, dc.a_bar, big_a, e1s)
        if not math.isfinite(term):
            raise ArithmeticError(
                f"DF continuous bound: term n={n} is not finite")
        total += max(0.0, term)  # terms are >= 0 up to round-off
    return prefactor * total


def throughput_df_discrete_lb(inputs: AnalyticInputs) -> float:
    """Lower bound on the mean throughput of DF with discrete EH.

    tau >= eta ps e^{-(a_bar+b_bar)} / (pr d1^m e^{-a_bar} + 2 eta ps).
    """
    p, dc = inputs.params, inputs.dc
    num = p.eta * p.ps * math.exp(-(dc.a_bar + dc.b_bar))
    den = p.pr * p.d1m * math.exp(-dc.a_bar) + 2.0 * p.eta * p.ps
    return num / den


_EVALUATORS = {
    Protocol.AF_CONT: throughput_af_continuous,
    Protocol.AF_DISC: throughput_af_discrete,
    Protocol.DF_CONT: throughput_df_continuous_lb,
    Protocol.DF_DISC: throughput_df_discrete_lb,
}


def evaluate(protocol: Protocol, inputs: AnalyticInputs) -> float:
    """Dispatch to the protocol's evaluator (exact for AF, bound for DF)."""
    try:
        return _EVALUATORS[protocol](inputs)
    except KeyError:
        raise ValueError(
            f"no closed-form throughput for protocol {protocol.value!r}"
        ) from None


@dataclass(frozen=True)
class PatternDistributions:
    """Distributions of the EH-IT pattern statistics.

    eo_pdf: density of the battery level at a pattern start (Exp with
      mean rho).
    xbar_pmf(k, e_o): conditional pmf of X-1 given the starting level,
      Poisson with mean (pr t/2 - e_o)/rho; when e_o >= pr t/2 the
      pattern has no charging blocks (X = 0), so the mass sits at k = -1.
    y_pmf: pmf of the relay-outage run length after the battery is full,
      geometric with success probability e^{-a_bar}.
    """

    eo_pdf: object
    xbar_pmf: object
    y_pmf: object
    rho: float
    p_or: float


def pattern_distributions(inputs: AnalyticInputs) -> PatternDistributions:
    p, dc = inputs.params, inputs.dc
    rho = dc.rho
    e_req = p.energy_per_it
    p_or = -math.expm1(-dc.a_bar)  # 1 - e^-a_bar

    def eo_pdf(eps: float) -> float:
        if eps < 0.0:
            raise ValueError(f"battery level must be >= 0, got {eps!r}")
        return math.exp(-eps / rho) / rho

    def xbar_pmf(k: int, e_o: float) -> float:
        if e_o < 0.0:
            raise ValueError(f"battery level must be >= 0, got {e_o!r}")
        if e_o >= e_req:
            return 1.0 if k == -1 else 0.0
        if k < 0:
            return 0.0
        lam = (e_req - e_o) / rho
        # log-space Poisson pmf; lam can reach the thousands
        return math.exp(k * math.log(lam) - lam - math.lgamma(k + 1.0))

    def y_pmf(y: int) -> float:
        if y < 0:
            raise ValueError(f"run length must be >= 0, got {y!r}")
        return (1.0 - p_or) * p_or**y

    return PatternDistributions(eo_pdf=eo_pdf, xbar_pmf=xbar_pmf,
                                y_pmf=y_pmf, rho=rho, p_or=p_or)
