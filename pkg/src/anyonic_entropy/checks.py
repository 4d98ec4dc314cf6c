"""Cross-module consistency checks run by ``anyonic-entropy verify``.

Each check is deterministic and finishes in seconds. A check returns
``(passed, detail)``.
"""

from __future__ import annotations

import itertools
from typing import Callable

import numpy as np

from .entropy import JointClassDistribution, gamma_from_joint
from .noise import NoiseModel
from .planar import build_layout
from .planar_gamma import gamma_bound_exact, gamma_exact_enum
from .thermal import ThermalParams, occupation_probability, thermal_gamma, vacuum_parity_probability
from .tfim import ChainSpec, build_ising_hamiltonian, dense_pseudo_hamiltonian, gamma_tfim

P_GRID = (0.02, 0.05, 0.10, 0.15, 0.30)


def parity_enumeration(max_n: int = 16, n_probs: int = 50, seed: int = 0) -> tuple[bool, str]:
    """Closed-form even-parity probability vs. summing over all 2**n patterns."""
    rng = np.random.default_rng(seed)
    probs = rng.random(n_probs)
    worst = 0.0
    for n in range(1, max_n + 1):
        patterns = (np.arange(2**n)[:, None] >> np.arange(n)) & 1
        weights = patterns.sum(axis=1)
        even = weights % 2 == 0
        for p in probs:
            brute = float(np.sum(p**weights[even] * (1 - p) ** (n - weights[even])))
            worst = max(worst, abs(brute - vacuum_parity_probability(float(p), n)))
    return worst < 1e-12, f"max abs error {worst:.3e} over n<= {max_n}, {n_probs} p values"


def isospectrality(max_n: int = 8, mus=(0.0, 0.3, 0.5, 1.0)) -> tuple[bool, str]:
    worst = 0.0
    for n in range(2, max_n + 1):
        for mu in mus:
            e_i = np.linalg.eigvalsh(build_ising_hamiltonian(n, mu))
            e_p = np.linalg.eigvalsh(dense_pseudo_hamiltonian(n, mu))
            worst = max(worst, float(np.max(np.abs(e_i - e_p))))
    return worst < 1e-9, f"max eigenvalue mismatch {worst:.3e} for N=2..{max_n}"


def bound_below_oracle(sizes=(2, 3), p_grid=P_GRID, confusion: bool = False) -> tuple[bool, str]:
    """Exact (sampling-free) decoder bound with the ML decoder vs. exact Gamma."""
    violations = []
    for L, p in itertools.product(sizes, p_grid):
        layout, model = build_layout(L), NoiseModel.symmetric(p)
        exact = gamma_exact_enum(layout, model).value
        b = gamma_bound_exact(layout, model, "ml")
        bound = b.gamma_lb_confusion if confusion else b.gamma_lb
        if bound > exact + 1e-9:
            violations.append(f"L={L} p={p}: {bound:.6f} > {exact:.6f}")
    return not violations, "; ".join(violations) or "bound <= exact at every point"


def ml_dominates_matching(sizes=(2, 3), p_grid=P_GRID) -> tuple[bool, str]:
    violations = []
    for L, p in itertools.product(sizes, p_grid):
        layout, model = build_layout(L), NoiseModel.symmetric(p)
        for sector_attr in ("p_success_e", "p_success_m"):
            ml = getattr(gamma_bound_exact(layout, model, "ml"), sector_attr)
            mwpm = getattr(gamma_bound_exact(layout, model, "matching"), sector_attr)
            if ml < mwpm - 1e-12:
                violations.append(f"L={L} p={p} {sector_attr}: {ml:.6f} < {mwpm:.6f}")
    return not violations, "; ".join(violations) or "ML success >= matching success everywhere"


def thermal_joint(n_total: int, beta: float, n_b: int = 4, j: float = 1.0) -> JointClassDistribution:
    """Enumerated joint of (class of A, configuration of B) for independent plaquettes.

    A holds ``n_total / 4`` s-plaquettes and as many p-plaquettes; B is a
    disjoint set of ``n_b`` further plaquettes. Every configuration of
    A and B is listed with its product probability.
    """
    n_a = n_total // 4
    p = occupation_probability(j, beta)
    n_sites = 2 * n_a + n_b
    configs = (np.arange(2**n_sites)[:, None] >> np.arange(n_sites)) & 1
    probs = np.prod(np.where(configs == 1, p, 1.0 - p), axis=1)
    e_class = configs[:, :n_a].sum(axis=1) % 2
    m_class = configs[:, n_a : 2 * n_a].sum(axis=1) % 2
    b_index = configs[:, 2 * n_a :] @ (1 << np.arange(n_b))
    table = np.zeros((4, 2**n_b))
    np.add.at(table, (e_class + 2 * m_class, b_index), probs)
    return JointClassDistribution(table / table.sum())


def thermal_matches_joint(n_total: int = 24, betas=(0.1, 0.5, 1.0, 2.0)) -> tuple[bool, str]:
    """Closed-form thermal Gamma vs. Gamma of the enumerated product joint."""
    worst = 0.0
    for beta in betas:
        enumerated = gamma_from_joint(thermal_joint(n_total, beta)).value
        worst = max(worst, abs(enumerated - thermal_gamma(ThermalParams(beta, n_total)).value))
    return worst < 1e-12, f"max abs difference {worst:.3e} at N={n_total}"


def tfim_ordered_limit(sizes=(5, 10, 15)) -> tuple[bool, str]:
    values = [gamma_tfim(ChainSpec(n, 0.0)).value for n in sizes]
    return all(v == 1.0 for v in values), f"Gamma(mu=0) = {values}"


CHECKS: dict[str, Callable[[], tuple[bool, str]]] = {
    "parity_formula_enumeration": parity_enumeration,
    "isospectrality_HI_HP": isospectrality,
    "bound_le_oracle_ml": bound_below_oracle,
    "confusion_bound_le_oracle_ml": lambda: bound_below_oracle(confusion=True),
    "ml_success_ge_matching": ml_dominates_matching,
    "thermal_closed_form_vs_joint": thermal_matches_joint,
    "tfim_gamma_mu0": tfim_ordered_limit,
}


def run_checks(names=None) -> list[dict]:
    rows = []
    for name in names or CHECKS:
        passed, detail = CHECKS[name]()
        rows.append({"check": name, "status": "pass" if passed else "fail", "detail": detail.replace(",", ";")})
    return rows
