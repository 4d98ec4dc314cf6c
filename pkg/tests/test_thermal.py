import math
from math import comb

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from anyonic_entropy.checks import thermal_joint
from anyonic_entropy.entropy import gamma_from_joint
from anyonic_entropy.thermal import (
    DEFAULT_SIZES,
    ThermalParams,
    occupation_probability,
    thermal_curve,
    thermal_gamma,
    vacuum_parity_probability,
)

from oracles import binary_entropy


class TestOccupation:
    def test_infinite_temperature(self):
        assert occupation_probability(1.0, 0.0) == 0.5

    def test_zero_temperature(self):
        assert occupation_probability(1.0, 1e6) == 0.0

    def test_unit_coupling(self):
        assert occupation_probability(1.0, 1.0) == pytest.approx(1 / (1 + math.e**2), abs=1e-15)
        assert occupation_probability(1.0, 1.0) == pytest.approx(0.1192029220, abs=1e-10)

    def test_rejects_negative_beta(self):
        with pytest.raises(ValueError):
            occupation_probability(1.0, -0.1)


class TestParity:
    def test_noiseless(self):
        assert vacuum_parity_probability(0.0, 7) == 1.0

    @pytest.mark.parametrize("n", [1, 2, 5, 100])
    def test_half(self, n):
        assert vacuum_parity_probability(0.5, n) == 0.5

    def test_example(self):
        brute = sum(
            0.1 ** bin(k).count("1") * 0.9 ** (4 - bin(k).count("1")) for k in range(16) if bin(k).count("1") % 2 == 0
        )
        assert vacuum_parity_probability(0.1, 4) == pytest.approx(0.7048, abs=1e-15)
        assert vacuum_parity_probability(0.1, 4) == pytest.approx(brute, abs=1e-15)

    def test_binomial_sum(self):
        rng = np.random.default_rng(8)
        for n in range(1, 21):
            for p in rng.random(20):
                even = sum(comb(n, k) * p**k * (1 - p) ** (n - k) for k in range(0, n + 1, 2))
                assert abs(vacuum_parity_probability(float(p), n) - even) < 1e-12

    def test_rejects(self):
        with pytest.raises(ValueError):
            vacuum_parity_probability(1.1, 3)
        with pytest.raises(ValueError):
            vacuum_parity_probability(0.1, 0)


class TestThermalGamma:
    def test_zero_temperature(self):
        assert thermal_gamma(ThermalParams(1e4, 64)).value == 2.0

    def test_infinite_temperature(self):
        assert thermal_gamma(ThermalParams(0.0, 64)).value == 0.0

    def test_worked_example(self):
        p = 1 / (1 + math.e**4)
        pi = (1 + (1 - 2 * p) ** 16) / 2
        assert p == pytest.approx(0.01799, abs=1e-5)
        assert pi == pytest.approx(0.778228, abs=1e-6)
        g = thermal_gamma(ThermalParams(2.0, 64)).value
        assert g == pytest.approx(2 - 2 * binary_entropy(pi), abs=1e-12)
        assert g == pytest.approx(0.47, abs=0.005)

    def test_worked_example_by_enumeration(self):
        p = occupation_probability(1.0, 2.0)
        configs = (np.arange(2**16)[:, None] >> np.arange(16)) & 1
        weights = configs.sum(axis=1)
        pi = float(np.sum(np.where(weights % 2 == 0, p**weights * (1 - p) ** (16 - weights), 0.0)))
        assert thermal_gamma(ThermalParams(2.0, 64)).value == pytest.approx(2 - 2 * binary_entropy(pi), abs=1e-12)

    def test_worked_example_by_sampling(self):
        rng = np.random.default_rng(2)
        p = occupation_probability(1.0, 2.0)
        n = 200_000
        parity = (rng.random((n, 2, 16)) < p).sum(axis=2) % 2
        pi_s, pi_p = 1 - parity.mean(axis=0)
        estimate = 2 - binary_entropy(pi_s) - binary_entropy(pi_p)
        # |dGamma/dpi| = log2(pi / (1 - pi)) per species, about 1.81 here
        sigma = math.sqrt(2) * 1.81 * math.sqrt(0.7782 * 0.2218 / n)
        assert abs(estimate - thermal_gamma(ThermalParams(2.0, 64)).value) < 4 * sigma

    @pytest.mark.parametrize("n_total", [4, 8, 12, 16, 20, 24])
    @pytest.mark.parametrize("beta", [0.0, 0.2, 0.7, 1.5])
    def test_matches_enumerated_joint(self, n_total, beta):
        enumerated = gamma_from_joint(thermal_joint(n_total, beta)).value
        assert abs(enumerated - thermal_gamma(ThermalParams(beta, n_total)).value) < 1e-12

    def test_asymmetric_couplings(self):
        g = thermal_gamma(ThermalParams(1.0, 16, j_s=2.0, j_p=0.5)).value
        pi_s = vacuum_parity_probability(occupation_probability(2.0, 1.0), 4)
        pi_p = vacuum_parity_probability(occupation_probability(0.5, 1.0), 4)
        assert g == pytest.approx(2 - binary_entropy(pi_s) - binary_entropy(pi_p), abs=1e-14)

    def test_thermodynamic_limit(self):
        assert thermal_gamma(ThermalParams(1 / 0.2, 2**20)).value < 1e-6

    @given(st.floats(0.01, 10), st.sampled_from([4, 16, 64, 256, 1024]))
    def test_in_range(self, beta, n):
        assert 0.0 <= thermal_gamma(ThermalParams(beta, n)).value <= 2.0

    @pytest.mark.parametrize("bad", [dict(beta=-1, n_total=16), dict(beta=1, n_total=6), dict(beta=1, n_total=0)])
    def test_rejects(self, bad):
        with pytest.raises(ValueError):
            ThermalParams(**bad)


class TestCurve:
    def test_shape_and_order(self):
        rows = thermal_curve(np.linspace(0.1, 5, 50), DEFAULT_SIZES)
        assert len(rows) == 200
        assert [r["N"] for r in rows[:2]] == [16, 16]
        assert rows[0]["T"] == pytest.approx(10.0)

    def test_zero_beta_row(self):
        assert thermal_curve([0.0], [16])[0]["T"] == math.inf

    def test_monotone_in_temperature_and_size(self):
        betas = np.linspace(0.05, 8, 200)
        rows = thermal_curve(betas, DEFAULT_SIZES)
        table = np.array([r["gamma_bits"] for r in rows]).reshape(len(DEFAULT_SIZES), len(betas))
        assert np.all(np.diff(table, axis=1) >= 0)  # increasing beta = decreasing T
        assert np.all(np.diff(table, axis=0) <= 0)

    def test_low_temperature_limit(self):
        rows = thermal_curve([200.0], DEFAULT_SIZES)
        assert all(r["gamma_bits"] == pytest.approx(2.0, abs=1e-12) for r in rows)

    def test_empty(self):
        with pytest.raises(ValueError):
            thermal_curve([], [16])
