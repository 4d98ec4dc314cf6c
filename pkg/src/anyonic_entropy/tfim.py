"""Transverse-field Ising chain in the domain-wall pseudo-spin picture.

Pseudo-spin ``j`` (1-based) is stored in bit ``j - 1`` of a basis index.
Pseudo-spins ``1 .. N-1`` flag a domain wall between Ising spins ``j`` and
``j + 1``; pseudo-spin ``N`` records the orientation of Ising spin ``N``.
In these variables

    H_P = -w sum_{j<N} Z_j + (mu/2) [X_1 + X_{N-1} X_N + sum_{j<=N-2} X_j X_{j+1}]

which is unitarily equivalent to the Ising form
``H_I = -w sum X_j X_{j+1} + (mu/2) sum Z_j``.

``H_P`` commutes with ``X_N`` (global spin flip), so the ground state is
found separately in each ``X_N = +/-1`` sector on ``2**(N-1)`` wall
configurations, where ``X_{N-1} X_N`` becomes ``+/- X_{N-1}``.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import reduce

import numpy as np
from scipy.sparse.linalg import ArpackNoConvergence, LinearOperator, eigsh

from .entropy import GammaValue, JointClassDistribution, gamma_from_joint

#: Default Ising coupling. With the field written as (mu/2) sum Z the chain is
#: critical at mu = 2w, so w = 1/4 puts the transition at mu = 1/2.
DEFAULT_W = 0.25
DENSE_MAX_N = 12
SOLVER_MAX_N = 20
RESIDUAL_TOL = 1e-8
MAX_SOLVER_ITERATIONS = 10_000


class EigensolverError(RuntimeError):
    """Raised when the ground-state solver fails to converge."""


@dataclass(frozen=True)
class ChainSpec:
    n: int
    mu: float
    w: float = DEFAULT_W

    def __post_init__(self):
        if self.n < 5 or self.n % 5:
            raise ValueError(f"chain length must be a positive multiple of 5, got {self.n!r}")
        if not self.w > 0:
            raise ValueError(f"w must be > 0, got {self.w!r}")
        if not self.mu >= 0:
            raise ValueError(f"mu must be >= 0, got {self.mu!r}")


@dataclass(frozen=True)
class FifthsPartition:
    a_indices: tuple[int, ...]
    b_indices: tuple[int, ...]
    c_indices: tuple[int, ...]

    @classmethod
    def for_chain(cls, n: int) -> "FifthsPartition":
        if n < 5 or n % 5:
            raise ValueError(f"chain length must be a positive multiple of 5, got {n!r}")
        k = n // 5
        fifths = [tuple(range(i * k + 1, (i + 1) * k + 1)) for i in range(5)]
        return cls(fifths[2], fifths[1] + fifths[3], fifths[0] + fifths[4])


@dataclass(frozen=True)
class GroundStateDistribution:
    """Dephased ground state: squared amplitudes over all ``2**N`` pseudo-spin configurations."""

    spec: ChainSpec
    pmf: np.ndarray
    energy: float
    residual: float
    iterations: int
    sector: int


# --- Hamiltonians --------------------------------------------------------------

class PseudoHamiltonian:
    """Matrix-free ``H_P`` (optionally restricted to an ``X_N`` sector).

    With ``sector=None`` it acts on all ``2**N`` pseudo-spin configurations.
    With ``sector=+1`` or ``-1`` it acts on the ``2**(N-1)`` wall
    configurations of that symmetry sector.
    """

    def __init__(
        self,
        spec: ChainSpec | None = None,
        sector: int | None = None,
        *,
        n: int | None = None,
        mu: float | None = None,
        w: float = DEFAULT_W,
    ):
        if spec is not None:
            n, mu, w = spec.n, spec.mu, spec.w
        if n is None or mu is None:
            raise TypeError("need a ChainSpec or explicit n and mu")
        if sector not in (None, 1, -1):
            raise ValueError("sector must be None, +1 or -1")
        self.n, self.mu, self.w, self.sector = int(n), float(mu), float(w), sector
        n_bits = self.n if sector is None else self.n - 1
        self.dim = 1 << n_bits
        idx = np.arange(self.dim, dtype=np.int64)

        walls = (idx[:, None] >> np.arange(self.n - 1)) & 1
        self.diagonal = -self.w * (1 - 2 * walls).sum(axis=1).astype(float)

        # Each off-diagonal term flips a fixed bit mask with amplitude mu/2 (times the sector sign).
        masks = [1]  # X_1
        masks += [(1 << j) | (1 << (j + 1)) for j in range(self.n - 2)]  # X_j X_{j+1}, j = 1..N-2
        signs = [1.0] * len(masks)
        last = 1 << (self.n - 2)
        if sector is None:
            masks.append(last | (1 << (self.n - 1)))
            signs.append(1.0)
        else:
            masks.append(last)
            signs.append(float(sector))
        self.flip_targets = [idx ^ m for m in masks]
        self.flip_amplitudes = [0.5 * self.mu * s for s in signs]

    def matvec(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x).reshape(-1)
        y = self.diagonal * x
        if self.mu != 0.0:
            for target, amp in zip(self.flip_targets, self.flip_amplitudes):
                y += amp * x[target]
        return y

    def as_linear_operator(self) -> LinearOperator:
        return LinearOperator((self.dim, self.dim), matvec=self.matvec, dtype=float)


def build_pseudo_hamiltonian(spec: ChainSpec) -> PseudoHamiltonian:
    return PseudoHamiltonian(spec)


_X = np.array([[0.0, 1.0], [1.0, 0.0]])
_Z = np.array([[1.0, 0.0], [0.0, -1.0]])
_I = np.eye(2)


def _site_operator(n: int, ops: dict[int, np.ndarray]) -> np.ndarray:
    """Kronecker product with ``ops[j]`` on 1-based site ``j`` (stored in bit ``j - 1``)."""
    # np.kron puts its first factor on the most significant bit.
    factors = [ops.get(j, _I) for j in range(n, 0, -1)]
    return reduce(np.kron, factors)


def _check_dense(n: int) -> None:
    if n > DENSE_MAX_N:
        raise ValueError(f"dense construction limited to N <= {DENSE_MAX_N}, got {n}")


def build_ising_hamiltonian(n: int, mu: float, w: float = DEFAULT_W) -> np.ndarray:
    """Dense ``H_I`` in the sigma-x product basis of the Ising spins (``N <= 12``)."""
    _check_dense(n)
    h = np.zeros((1 << n, 1 << n))
    for j in range(1, n):
        h -= w * _site_operator(n, {j: _X, j + 1: _X})
    for j in range(1, n + 1):
        h += 0.5 * mu * _site_operator(n, {j: _Z})
    return h


def dense_pseudo_hamiltonian(n: int, mu: float, w: float = DEFAULT_W) -> np.ndarray:
    """Dense ``H_P`` from Kronecker products, for cross-checks (``N <= 12``)."""
    _check_dense(n)
    h = np.zeros((1 << n, 1 << n))
    for j in range(1, n):
        h -= w * _site_operator(n, {j: _Z})
    terms = [{1: _X}, {n - 1: _X, n: _X}] + [{j: _X, j + 1: _X} for j in range(1, n - 1)]
    for ops in terms:
        h += 0.5 * mu * _site_operator(n, ops)
    return h


# --- ground state ----------------------------------------------------------------

def _no_wall_distribution(spec: ChainSpec) -> GroundStateDistribution:
    pmf = np.zeros(1 << spec.n)
    pmf[0] = pmf[1 << (spec.n - 1)] = 0.5
    return GroundStateDistribution(spec, pmf, -spec.w * (spec.n - 1), 0.0, 0, 1)


def _sector_ground_state(spec: ChainSpec, sector: int):
    op = PseudoHamiltonian(spec, sector)
    # Fixed start vector so repeated runs are bitwise identical.
    v0 = np.random.default_rng(12345).standard_normal(op.dim)
    if op.dim <= 2:
        h = np.column_stack([op.matvec(e) for e in np.eye(op.dim)])
        vals, vecs = np.linalg.eigh(h)
        return vals[0], vecs[:, 0], 1, op
    counter = {"n": 0}

    def counted(x):
        counter["n"] += 1
        return op.matvec(x)

    lin = LinearOperator((op.dim, op.dim), matvec=counted, dtype=float)
    try:
        vals, vecs = eigsh(
            lin, k=1, which="SA", v0=v0, tol=1e-14, maxiter=MAX_SOLVER_ITERATIONS, ncv=min(op.dim, 40)
        )
    except ArpackNoConvergence as exc:
        raise EigensolverError(f"ground state for N={spec.n}, mu={spec.mu} did not converge") from exc
    return vals[0], vecs[:, 0], counter["n"], op


def ground_state(spec: ChainSpec) -> GroundStateDistribution:
    """Ground state of ``H_P`` with its off-diagonal terms dropped.

    ``mu = 0`` is degenerate in the orientation spin and is returned
    analytically as the no-wall configuration with both orientations equally
    weighted. For ``mu > 0`` the lowest state of each ``X_N`` sector is
    computed with Lanczos on the matrix-free Hamiltonian and the lower one
    is kept (ties go to the ``+1`` sector).
    """
    if spec.n > SOLVER_MAX_N:
        raise ValueError(f"ground-state solver limited to N <= {SOLVER_MAX_N}")
    if spec.mu == 0.0:
        return _no_wall_distribution(spec)

    best = None
    for sector in (1, -1):
        energy, vec, iterations, op = _sector_ground_state(spec, sector)
        if best is None or energy < best[0]:
            best = (energy, vec, iterations, op, sector)
    energy, vec, iterations, op, sector = best
    vec = vec / np.linalg.norm(vec)
    residual = float(np.linalg.norm(op.matvec(vec) - energy * vec))
    if residual >= RESIDUAL_TOL:
        raise EigensolverError(f"residual {residual:.3e} above {RESIDUAL_TOL} for N={spec.n}, mu={spec.mu}")
    walls = vec**2
    # Orientation spin in (|0> + sector |1>)/sqrt(2): both halves carry half the weight.
    pmf = 0.5 * np.concatenate([walls, walls])
    pmf /= pmf.sum()
    return GroundStateDistribution(spec, pmf, float(energy), residual, iterations, sector)


def wall_marginal(dist: GroundStateDistribution) -> np.ndarray:
    """Marginal over the ``N - 1`` wall pseudo-spins (orientation summed out)."""
    half = dist.pmf.size // 2
    return dist.pmf[:half] + dist.pmf[half:]


def class_joint(pmf: np.ndarray, n: int, partition: FifthsPartition | None = None) -> JointClassDistribution:
    """Joint of (wall parity in A, configuration of B) from a pmf over ``2**n`` configurations."""
    partition = partition or FifthsPartition.for_chain(n)
    idx = np.arange(pmf.size, dtype=np.int64)
    a_parity = np.zeros(pmf.size, dtype=np.int64)
    for site in partition.a_indices:
        a_parity ^= (idx >> (site - 1)) & 1
    b_index = np.zeros(pmf.size, dtype=np.int64)
    for k, site in enumerate(partition.b_indices):
        b_index |= ((idx >> (site - 1)) & 1) << k
    table = np.zeros((2, 1 << len(partition.b_indices)))
    np.add.at(table, (a_parity, b_index), pmf)
    return JointClassDistribution(table)


def gamma_from_ground_state(dist: GroundStateDistribution) -> GammaValue:
    return gamma_from_joint(class_joint(dist.pmf, dist.spec.n))


def gamma_tfim(spec: ChainSpec) -> GammaValue:
    """Gamma in bits (maximum 1) for the ground state of the chain.

    Domain walls are used as the quasiparticles at every ``mu``; for
    ``mu > 0`` they need not be the optimal choice, so a positive value
    witnesses order while zero does not prove its absence.
    """
    return gamma_from_ground_state(ground_state(spec))


def tfim_curve(n_list, mu_grid, w: float = DEFAULT_W, workers: int = 1) -> list[dict]:
    """Rows ``(N, w, mu, gamma_bits, ground_energy, residual, solver_iterations)``.

    Grid points are independent; ``workers > 1`` spreads them over processes
    without changing any value.
    """
    ns, mus = list(n_list), list(mu_grid)
    if not ns or not mus:
        raise ValueError("n_list and mu_grid must be non-empty")
    specs = [ChainSpec(int(n), float(mu), w) for n in ns for mu in mus]
    if workers > 1 and len(specs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(tfim_point, specs))
    return [tfim_point(spec) for spec in specs]


def tfim_point(spec: ChainSpec) -> dict:
    dist = ground_state(spec)
    return {
        "N": spec.n,
        "w": spec.w,
        "mu": spec.mu,
        "gamma_bits": gamma_from_ground_state(dist).value,
        "ground_energy": dist.energy,
        "residual": dist.residual,
        "solver_iterations": dist.iterations,
    }


def curve_crossings(mu_grid, gamma_a, gamma_b, atol: float = 1e-9) -> list[float]:
    """Linear-interpolated ``mu`` values where two Gamma curves change order.

    Differences below ``atol`` count as touching, not crossing (both curves
    sit at exactly 1 bit at ``mu = 0``).
    """
    mu = np.asarray(mu_grid, dtype=float)
    diff = np.asarray(gamma_a, dtype=float) - np.asarray(gamma_b, dtype=float)
    out = []
    last = None
    for i, d in enumerate(diff):
        if abs(d) <= atol:
            continue
        if last is not None and np.sign(d) != np.sign(diff[last]):
            d0, d1 = diff[last], d
            out.append(float(mu[last] - d0 * (mu[i] - mu[last]) / (d1 - d0)))
        last = i
    return out
