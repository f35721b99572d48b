import math

import numpy as np
import pytest

from lensmimo.arrays import LensArrayConfig
from lensmimo.channel import PathSet, narrowband_matrix
from lensmimo.errors import IdealAngleError
from lensmimo.opdm import opdm_capacity, opdm_decompose
from lensmimo.upa import eigenmode_capacity


def ideal_paths(gains=(1.0, 0.5j, 0.25)):
    return PathSet(
        gains=np.asarray(gains, complex),
        delays_s=np.zeros(len(gains)),
        aoa_spatial_freqs=np.array([0.0, 0.2, -0.2]),
        aod_spatial_freqs=np.array([0.0, 0.2, -0.2]),
    )


TX = LensArrayConfig(20.0, 10.0)
RX = LensArrayConfig(20.0, 10.0)


class TestDecompose:
    def test_gains_and_mapping(self):
        ch = opdm_decompose(ideal_paths(), TX, RX)
        assert np.allclose(ch.gains, np.array([1.0, 0.25, 0.0625]) * 400.0)
        assert ch.mapping == ((0, 0), (2, 2), (-2, -2))

    def test_misaligned_angles_rejected(self):
        paths = PathSet(
            gains=np.ones(2, complex),
            delays_s=np.zeros(2),
            aoa_spatial_freqs=np.array([0.0, 0.25]),
            aod_spatial_freqs=np.array([0.0, 0.2]),
        )
        with pytest.raises(IdealAngleError):
            opdm_decompose(paths, TX, RX)

    def test_duplicate_indices_rejected(self):
        paths = PathSet(
            gains=np.ones(2, complex),
            delays_s=np.zeros(2),
            aoa_spatial_freqs=np.array([0.2, 0.2]),
            aod_spatial_freqs=np.array([0.0, 0.2]),
        )
        with pytest.raises(IdealAngleError):
            opdm_decompose(paths, TX, RX)

    def test_delay_quantization_passthrough(self):
        paths = PathSet(
            gains=np.ones(3, complex),
            delays_s=np.array([0.0, 10e-9, 50e-9]),
            aoa_spatial_freqs=np.array([0.0, 0.2, -0.2]),
            aod_spatial_freqs=np.array([0.0, 0.2, -0.2]),
        )
        ch = opdm_decompose(paths, TX, RX, sample_rate_hz=500e6)
        assert list(ch.delays_samples) == [0, 5, 25]


class TestCapacity:
    def test_equal_gains_closed_form(self):
        paths = ideal_paths(gains=(1.0, 1.0, 1.0))
        ch = opdm_decompose(paths, TX, RX)
        c = opdm_capacity(ch, power=3.0, noise=1.0)
        assert c == pytest.approx(3 * math.log2(1 + 1.0 * 400.0), rel=1e-12)

    def test_matches_full_matrix_eigenmode(self):
        # With ideal angles the rank-1 path terms are orthogonal, so the
        # full-matrix eigenmode capacity equals the decoupled WF capacity.
        rng = np.random.default_rng(0)
        for _ in range(10):
            gains = rng.standard_normal(3) + 1j * rng.standard_normal(3)
            paths = ideal_paths(gains)
            h = narrowband_matrix(paths, TX, RX)
            direct = eigenmode_capacity(h, 2.0, 1.0)
            decoupled = opdm_capacity(opdm_decompose(paths, TX, RX), 2.0, 1.0)
            assert direct == pytest.approx(decoupled, rel=1e-9)

    def test_capacity_monotone_in_power(self):
        ch = opdm_decompose(ideal_paths(), TX, RX)
        caps = [opdm_capacity(ch, p, 1.0) for p in (0.1, 1.0, 10.0)]
        assert caps[0] < caps[1] < caps[2]
