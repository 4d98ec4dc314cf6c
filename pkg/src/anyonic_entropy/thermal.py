"""Closed-form Gamma for thermal states of the planar code.

In the anyon basis the thermal state is a product of independent plaquette
occupations, so the syndrome of region B tells nothing about the net
occupation of region A and Gamma reduces to ``2 - S(pi_s) - S(pi_p)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import expit

from .entropy import GammaValue, shannon_binary

#: Default code sizes (total plaquette counts) for curve families.
DEFAULT_SIZES = (16, 64, 256, 1024)


@dataclass(frozen=True)
class ThermalParams:
    beta: float
    n_total: int
    j_s: float = 1.0
    j_p: float = 1.0

    def __post_init__(self):
        if not self.beta >= 0:
            raise ValueError(f"beta must be >= 0, got {self.beta!r}")
        if self.n_total < 4 or self.n_total % 4:
            raise ValueError(f"n_total must be a positive multiple of 4, got {self.n_total!r}")


def occupation_probability(j: float, beta: float) -> float:
    """Probability ``1 / (1 + exp(2 j beta))`` that a plaquette holds an anyon."""
    if not beta >= 0:
        raise ValueError(f"beta must be >= 0, got {beta!r}")
    if beta == 0:
        return 0.5
    return float(expit(-2.0 * j * beta))


def vacuum_parity_probability(p: float, n: int) -> float:
    """Probability that ``n`` independent sites with occupation ``p`` hold an even count."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p={p!r} is not a probability")
    if n < 1:
        raise ValueError("n must be >= 1")
    return 0.5 * (1.0 + (1.0 - 2.0 * p) ** n)


def thermal_gamma(params: ThermalParams) -> GammaValue:
    n_region = params.n_total // 4
    pi_s = vacuum_parity_probability(occupation_probability(params.j_s, params.beta), n_region)
    pi_p = vacuum_parity_probability(occupation_probability(params.j_p, params.beta), n_region)
    raw = 2.0 - shannon_binary(pi_s) - shannon_binary(pi_p)
    return GammaValue(min(max(raw, 0.0), 2.0), 2.0, raw)


def thermal_curve(beta_grid, sizes=DEFAULT_SIZES, j_s: float = 1.0, j_p: float = 1.0) -> list[dict]:
    """Rows ``(T, beta, N, j_s, j_p, gamma_bits)`` for every size and inverse temperature.

    Rows are grouped by N, each group in the order of ``beta_grid``.
    ``T`` is ``inf`` at ``beta = 0``.
    """
    betas, ns = list(beta_grid), list(sizes)
    if not betas or not ns:
        raise ValueError("beta grid and sizes must be non-empty")
    rows = []
    for n in ns:
        for beta in betas:
            g = thermal_gamma(ThermalParams(beta=float(beta), n_total=int(n), j_s=j_s, j_p=j_p))
            temperature = np.inf if beta == 0 else 1.0 / beta
            rows.append(
                {"T": temperature, "beta": float(beta), "N": int(n), "j_s": j_s, "j_p": j_p, "gamma_bits": g.value}
            )
    return rows
