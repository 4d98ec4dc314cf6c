import numpy as np
import pytest

from anyonic_entropy.tfim import (
    DEFAULT_W,
    ChainSpec,
    FifthsPartition,
    PseudoHamiltonian,
    build_ising_hamiltonian,
    build_pseudo_hamiltonian,
    class_joint,
    curve_crossings,
    dense_pseudo_hamiltonian,
    gamma_tfim,
    ground_state,
    tfim_curve,
    tfim_point,
    wall_marginal,
)

from oracles import entropy_bits


class TestChainSpec:
    @pytest.mark.parametrize("bad", [dict(n=4, mu=0.1), dict(n=7, mu=0.1), dict(n=5, mu=-1), dict(n=5, mu=0.1, w=0)])
    def test_rejects(self, bad):
        with pytest.raises(ValueError):
            ChainSpec(**bad)

    def test_fifths(self):
        part = FifthsPartition.for_chain(10)
        assert part.a_indices == (5, 6)
        assert part.b_indices == (3, 4, 7, 8)
        assert part.c_indices == (1, 2, 9, 10)
        assert sorted(part.a_indices + part.b_indices + part.c_indices) == list(range(1, 11))


class TestPseudoHamiltonian:
    def test_vacuum_images_n5(self):
        mu, w = 0.7, 0.3
        op = build_pseudo_hamiltonian(ChainSpec(5, mu, w))
        e0 = np.zeros(32)
        e0[0] = 1.0
        y = op.matvec(e0)
        assert y[0] == pytest.approx(-4 * w)
        images = {int(i) for i in np.flatnonzero(y) if i != 0}
        # X_1, X_1X_2, X_2X_3, X_3X_4 and X_4X_5 in bit order (site j on bit j-1)
        assert images == {0b00001, 0b00011, 0b00110, 0b01100, 0b11000}
        assert np.allclose(y[list(images)], mu / 2)

    def test_diagonal_at_zero_field(self):
        op = build_pseudo_hamiltonian(ChainSpec(10, 0.0, 1.0))
        assert np.min(op.diagonal) == -9.0
        assert np.sum(op.diagonal == -9.0) == 2

    @pytest.mark.parametrize("n", [3, 5, 8, 10])
    @pytest.mark.parametrize("mu", [0.0, 0.4, 1.3])
    def test_matvec_matches_dense(self, n, mu):
        op = PseudoHamiltonian(n=n, mu=mu, w=0.6)
        dense = dense_pseudo_hamiltonian(n, mu, 0.6)
        x = np.random.default_rng(n).standard_normal(1 << n)
        assert np.allclose(op.matvec(x), dense @ x, atol=1e-12)

    @pytest.mark.parametrize("sector", [1, -1])
    def test_sector_blocks(self, sector):
        n, mu = 6, 0.8
        dense = dense_pseudo_hamiltonian(n, mu)
        half = 1 << (n - 1)
        # Orientation spin sits on the top bit; X_N eigenstates are (|0> + s|1>)/sqrt2.
        basis = np.vstack([np.eye(half), sector * np.eye(half)]) / np.sqrt(2)
        block = basis.T @ dense @ basis
        op = PseudoHamiltonian(n=n, mu=mu, sector=sector)
        x = np.random.default_rng(0).standard_normal(half)
        assert np.allclose(op.matvec(x), block @ x, atol=1e-12)

    def test_symmetric(self):
        h = dense_pseudo_hamiltonian(6, 0.9)
        assert np.array_equal(h, h.T)

    def test_bad_sector(self):
        with pytest.raises(ValueError):
            PseudoHamiltonian(n=5, mu=0.1, sector=2)


class TestIsing:
    def test_two_sites(self):
        vals = np.linalg.eigvalsh(build_ising_hamiltonian(2, 0.0, 1.0))
        assert np.allclose(vals, [-1, -1, 1, 1])

    def test_symmetric(self):
        h = build_ising_hamiltonian(6, 0.7)
        assert np.array_equal(h, h.T)

    def test_strong_field(self):
        n, mu = 6, 200.0
        e0 = np.linalg.eigvalsh(build_ising_hamiltonian(n, mu, 1.0))[0]
        assert abs(e0 + mu * n / 2) < 2 * n

    @pytest.mark.parametrize("n", range(2, 9))
    @pytest.mark.parametrize("mu", [0.0, 0.3, 0.5, 1.0])
    def test_isospectral(self, n, mu):
        a = np.linalg.eigvalsh(build_ising_hamiltonian(n, mu))
        b = np.linalg.eigvalsh(dense_pseudo_hamiltonian(n, mu))
        assert np.max(np.abs(a - b)) < 1e-9

    def test_size_limit(self):
        with pytest.raises(ValueError):
            build_ising_hamiltonian(13, 0.1)


class TestGroundState:
    @pytest.mark.parametrize("n", [5, 10, 15])
    def test_zero_field(self, n):
        d = ground_state(ChainSpec(n, 0.0))
        assert d.energy == -DEFAULT_W * (n - 1)
        assert wall_marginal(d)[0] == 1.0

    def test_perturbative_regime(self):
        # w = 1: the no-wall weight check is stated for unit coupling
        d = ground_state(ChainSpec(5, 0.2, 1.0))
        assert wall_marginal(d)[0] > 0.9
        dense = np.linalg.eigh(dense_pseudo_hamiltonian(5, 0.2, 1.0))[1][:, 0] ** 2
        assert dense[0] + dense[16] == pytest.approx(wall_marginal(d)[0], abs=1e-8)

    @pytest.mark.parametrize("n", [5, 10, 15])
    @pytest.mark.parametrize("mu", [0.1, 0.5, 1.5])
    def test_normalised_and_converged(self, n, mu):
        d = ground_state(ChainSpec(n, mu))
        assert abs(d.pmf.sum() - 1) < 1e-10
        assert d.residual < 1e-8

    @pytest.mark.parametrize("n", [5, 10])
    @pytest.mark.parametrize("mu", [0.3, 0.5, 1.0, 2.0])
    def test_matches_dense(self, n, mu):
        vals, vecs = np.linalg.eigh(dense_pseudo_hamiltonian(n, mu))
        d = ground_state(ChainSpec(n, mu))
        assert d.energy == pytest.approx(vals[0], abs=1e-10)
        assert 0.5 * np.abs(vecs[:, 0] ** 2 - d.pmf).sum() < 1e-8

    def test_deterministic(self):
        a, b = ground_state(ChainSpec(10, 0.45)), ground_state(ChainSpec(10, 0.45))
        assert np.array_equal(a.pmf, b.pmf) and a.energy == b.energy

    def test_size_limit(self):
        with pytest.raises(ValueError):
            ground_state(ChainSpec(25, 0.3))


class TestGamma:
    @pytest.mark.parametrize("n", [5, 10, 15])
    def test_ordered_limit(self, n):
        assert gamma_tfim(ChainSpec(n, 0.0)).value == 1.0

    def test_disordered(self):
        assert gamma_tfim(ChainSpec(10, 2.0)).value < 0.1

    @pytest.mark.parametrize("mu", [0.05, 0.4, 0.8, 3.0])
    def test_range(self, mu):
        assert 0.0 <= gamma_tfim(ChainSpec(10, mu)).value <= 1.0

    def test_joint_by_hand(self):
        # N=5: A = site 3, B = sites 2 and 4
        rng = np.random.default_rng(4)
        pmf = rng.random(32)
        pmf /= pmf.sum()
        joint = {}
        for idx, prob in enumerate(pmf):
            bits = [(idx >> k) & 1 for k in range(5)]
            key = (bits[2], bits[1], bits[3])
            joint[key] = joint.get(key, 0.0) + prob
        b_marg = {}
        for (a, *b), prob in joint.items():
            b_marg[tuple(b)] = b_marg.get(tuple(b), 0.0) + prob
        expected = 1 + entropy_bits(b_marg.values()) - entropy_bits(joint.values())
        table = class_joint(pmf, 5)
        ours = 1 + entropy_bits(table.table.sum(axis=0)) - entropy_bits(table.table.ravel())
        assert ours == pytest.approx(expected, abs=1e-12)


class TestCurve:
    def test_single_point(self):
        row = tfim_curve([5], [0.4])[0]
        assert row == tfim_point(ChainSpec(5, 0.4))
        assert row["gamma_bits"] == gamma_tfim(ChainSpec(5, 0.4)).value

    def test_monotone_n5(self):
        rows = tfim_curve([5], np.linspace(0, 2, 81))
        gammas = [r["gamma_bits"] for r in rows]
        assert gammas[0] == 1.0
        assert all(b <= a + 1e-9 for a, b in zip(gammas, gammas[1:]))

    def test_deterministic_and_worker_independent(self):
        a = tfim_curve([5, 10], [0.2, 0.6, 1.1])
        b = tfim_curve([5, 10], [0.2, 0.6, 1.1], workers=2)
        assert a == b

    def test_crossings_in_band(self):
        mus = np.linspace(0, 2, 81)
        rows = tfim_curve([5, 10], mus)
        g5 = [r["gamma_bits"] for r in rows if r["N"] == 5]
        g10 = [r["gamma_bits"] for r in rows if r["N"] == 10]
        crossings = curve_crossings(mus, g5, g10)
        assert len(crossings) == 1 and 0.35 <= crossings[0] <= 0.60

    def test_crossing_helper(self):
        mu = [0.0, 1.0, 2.0, 3.0]
        assert curve_crossings(mu, [1, 1, 0, 0], [1, 0.5, 0.5, 0.25]) == [1.5]
        assert curve_crossings(mu, [1, 2, 3, 4], [0, 0, 0, 0]) == []
