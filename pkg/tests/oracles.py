"""Independent reference implementations used as test oracles.

Everything here is deliberately written from the defining integrals and
decision rules, not by calling the library code paths under test.
"""

from __future__ import annotations

import math

import numpy as np

from ehrelay.specfun import integrate_semi_infinite


def quad_k1_scaled(x: float, tol: float = 1e-11) -> float:
    """e^x K1(x) from the integral identity
    x e^x K1(x) = int_0^inf exp(x - x^2/(4w) - w) dw."""
    def f(w: float) -> float:
        return math.exp(x - x * x / (4.0 * w) - w)
    return integrate_semi_infinite(f, tol_rel=tol).value / x


def quad_e1_scaled(x: float, tol: float = 1e-11) -> float:
    """e^x E1(x) from e^x E1(x) = int_0^inf e^-s/(s+x) ds."""
    def f(s: float) -> float:
        return math.exp(-s) / (s + x)
    return integrate_semi_infinite(f, tol_rel=tol).value


def mc_outage_run_term(n: int, a_bar: float, big_a: float, nsamp: int,
                       seed: int) -> tuple[float, float]:
    """Monte Carlo value of the (n+1)-fold DF continuous-EH term

    I_n = E[min(1, (h + s)/(h + A)); h >= a_bar, all n previous < a_bar]

    over i.i.d. Exp(1) gains.  Returns (estimate, standard error).
    """
    rng = np.random.default_rng(seed)
    h = rng.exponential(size=nsamp)
    keep = h >= a_bar
    if n > 0:
        prev = rng.exponential(size=(nsamp, n))
        keep &= (prev < a_bar).all(axis=1)
        s = prev.sum(axis=1)
    else:
        s = np.zeros(nsamp)
    chi = np.where(keep, np.minimum(1.0, (h + s) / (h + big_a)), 0.0)
    return float(chi.mean()), float(chi.std(ddof=1) / math.sqrt(nsamp))


def reference_af_cont_block(p, h2: float, g2: float) -> tuple[float, float]:
    """Literal transliteration of the AF continuous-EH block rules;
    returns (alpha, tau)."""
    d1m = p.d1 ** p.m
    d2m = p.d2 ** p.m
    alpha = d1m * p.pr / (2 * p.eta * p.ps * h2 + d1m * p.pr)
    snr = (p.ps * p.pr * h2 * g2
           / (p.pr * g2 * d1m * p.sigma_nr
              + d2m * p.sigma_nd * (p.ps * h2 + d1m * p.sigma_nr)))
    tau = (1 - alpha) / 2 if snr >= p.gamma_o else 0.0
    return alpha, tau


def reference_af_disc_run(p, h2: np.ndarray, g2: np.ndarray) -> np.ndarray:
    """Literal battery walk of the AF discrete-EH protocol."""
    d1m = p.d1 ** p.m
    d2m = p.d2 ** p.m
    e_req = p.pr * p.t / 2
    battery = 0.0
    taus = np.zeros(h2.size)
    for i in range(h2.size):
        if battery >= e_req:
            battery -= e_req
            snr = (p.ps * p.pr * h2[i] * g2[i]
                   / (p.pr * g2[i] * d1m * p.sigma_nr
                      + d2m * p.sigma_nd * (p.ps * h2[i] + d1m * p.sigma_nr)))
            if snr >= p.gamma_o:
                taus[i] = 0.5
        else:
            battery += p.eta * p.ps * p.t / d1m * h2[i]
    return taus


def reference_df_cont_run(p, h2: np.ndarray, g2: np.ndarray) -> np.ndarray:
    """Literal battery walk of the DF continuous-EH protocol."""
    d1m = p.d1 ** p.m
    d2m = p.d2 ** p.m
    a_bar = p.gamma_o * d1m * p.sigma_nr / p.ps
    b_bar = p.gamma_o * d2m * p.sigma_nd / p.pr
    e_req = p.pr * p.t / 2
    battery = 0.0
    taus = np.zeros(h2.size)
    for i in range(h2.size):
        if h2[i] < a_bar:
            battery += p.eta * p.ps * p.t / d1m * h2[i]
        elif battery > e_req:
            battery -= e_req
            if g2[i] >= b_bar:
                taus[i] = 0.5
        else:
            alpha = ((d1m * p.pr * p.t - 2 * battery * d1m)
                     / (2 * p.eta * p.ps * h2[i] * p.t + d1m * p.pr * p.t))
            battery = 0.0
            if g2[i] >= b_bar:
                taus[i] = (1 - alpha) / 2
    return taus


def reference_df_disc_run(p, h2: np.ndarray, g2: np.ndarray) -> np.ndarray:
    """Literal battery walk of the DF discrete-EH protocol."""
    d1m = p.d1 ** p.m
    d2m = p.d2 ** p.m
    a_bar = p.gamma_o * d1m * p.sigma_nr / p.ps
    b_bar = p.gamma_o * d2m * p.sigma_nd / p.pr
    e_req = p.pr * p.t / 2
    battery = 0.0
    taus = np.zeros(h2.size)
    for i in range(h2.size):
        if battery < e_req or h2[i] < a_bar:
            battery += p.eta * p.ps * p.t / d1m * h2[i]
        else:
            battery -= e_req
            if g2[i] >= b_bar:
                taus[i] = 0.5
    return taus
