import math

import numpy as np
import pytest

from lensmimo.arrays import (
    LensArrayConfig,
    LensOracleConfig,
    UpaConfig,
    lens_response,
    lens_response_oracle,
    lens_response_spatial,
    spatial_decompose,
    upa_response,
)
from lensmimo.errors import AccuracyError, InvalidInputError


class TestLensArrayConfig:
    def test_element_count(self):
        cfg = LensArrayConfig(aperture=20.0, azimuth_dim=10.0)
        assert cfg.element_count == 21
        assert cfg.element_indices[0] == -10
        assert cfg.element_indices[-1] == 10

    def test_even_count_rejected(self):
        with pytest.raises(InvalidInputError):
            LensArrayConfig(aperture=10.0, azimuth_dim=9.5)

    def test_positive_required(self):
        with pytest.raises(InvalidInputError):
            LensArrayConfig(aperture=-1.0, azimuth_dim=10.0)


class TestLensResponse:
    def test_focused_angle_is_one_hot(self):
        cfg = LensArrayConfig(aperture=20.0, azimuth_dim=10.0)
        resp = lens_response_spatial(cfg, 0.3)  # focuses exactly on m = 3
        expected = np.zeros(21)
        expected[13] = math.sqrt(20.0)
        assert np.allclose(resp, expected)

    def test_sinc_profile(self):
        cfg = LensArrayConfig(aperture=10.0, azimuth_dim=10.0)
        phi = 0.123
        resp = lens_response_spatial(cfg, phi)
        m = cfg.element_indices
        assert np.allclose(resp, math.sqrt(10.0) * np.sinc(m - 10.0 * phi))

    def test_radian_wrapper(self):
        cfg = LensArrayConfig(aperture=10.0, azimuth_dim=10.0)
        aoa = 0.4
        assert np.allclose(lens_response(cfg, aoa), lens_response_spatial(cfg, math.sin(aoa)))

    def test_range_validation(self):
        cfg = LensArrayConfig(aperture=10.0, azimuth_dim=10.0)
        with pytest.raises(InvalidInputError):
            lens_response_spatial(cfg, 1.2)
        with pytest.raises(InvalidInputError):
            lens_response(cfg, 2.0)

    def test_energy_mostly_on_two_nearest_elements(self):
        # Worst case misalignment 1/2: the two flanking antennas hold
        # 2*sinc(1/2)^2 of the (normalized) energy, about 0.81.
        cfg = LensArrayConfig(aperture=10.0, azimuth_dim=10.0)
        resp = lens_response_spatial(cfg, 0.25)  # focusing point 2.5
        top2 = np.sort(np.abs(resp) ** 2)[-2:].sum()
        assert top2 / cfg.aperture >= 0.81


class TestSpatialDecompose:
    def test_examples(self):
        assert spatial_decompose(0.3, 10.0) == (3, pytest.approx(0.0))
        idx, eps = spatial_decompose(0.25, 10.0)
        assert idx == 3 and eps == pytest.approx(-0.5)
        idx, eps = spatial_decompose(-0.26, 10.0)
        assert idx == -3 and eps == pytest.approx(0.4)

    def test_misalignment_range(self):
        rng = np.random.default_rng(0)
        for phi in rng.uniform(-1, 1, 200):
            idx, eps = spatial_decompose(phi, 17.0)
            assert -0.5 <= eps <= 0.5
            assert idx + eps == pytest.approx(17.0 * phi)


class TestUpa:
    def test_config_grid(self):
        cfg = UpaConfig(aperture=20.0, azimuth_dim=10.0)
        assert cfg.element_count == 80
        assert cfg.grid_shape == (20, 4)

    def test_config_validation(self):
        with pytest.raises(InvalidInputError):
            UpaConfig(aperture=20.3, azimuth_dim=10.0)
        with pytest.raises(InvalidInputError):
            UpaConfig(aperture=20.0, azimuth_dim=10.3)

    def test_response_norm_is_aperture(self):
        cfg = UpaConfig(aperture=20.0, azimuth_dim=10.0)
        for aoa in (-1.0, 0.0, 0.7):
            resp = upa_response(cfg, aoa)
            assert np.linalg.norm(resp) ** 2 == pytest.approx(cfg.aperture)

    def test_phase_ramp(self):
        cfg = UpaConfig(aperture=20.0, azimuth_dim=10.0)
        aoa = 0.3
        resp = upa_response(cfg, aoa)
        n_y, n_z = cfg.grid_shape
        grid = resp.reshape(n_y, n_z)
        assert np.allclose(grid, grid[:, :1])  # flat along elevation
        ratio = grid[1:, 0] / grid[:-1, 0]
        assert np.allclose(ratio, np.exp(1j * math.pi * math.sin(aoa)))

    def test_side_validation(self):
        cfg = UpaConfig(aperture=20.0, azimuth_dim=10.0)
        with pytest.raises(InvalidInputError):
            upa_response(cfg, 0.0, side="middle")


class TestOracle:
    def test_first_order_matches_closed_form(self):
        cfg = LensArrayConfig(aperture=10.0, azimuth_dim=10.0)
        oracle = LensOracleConfig(quad_points=2048, phase_mode="first-order")
        for phi, theta in ((0.0, 0.0), (0.2, 0.35), (-0.5, 0.5)):
            val = lens_response_oracle(cfg, oracle, math.asin(phi), theta)
            closed = math.sqrt(10.0) * np.sinc(10.0 * (theta - phi))
            assert abs(val - closed) < 1e-6

    def test_exact_mode_error_shrinks_with_focal_ratio(self):
        cfg = LensArrayConfig(aperture=10.0, azimuth_dim=10.0)
        phi, theta = 0.1, 0.15
        closed = math.sqrt(10.0) * np.sinc(10.0 * (theta - phi))
        errs = []
        for fr in (5.0, 20.0, 80.0):
            oracle = LensOracleConfig(focal_ratio=fr, quad_points=128, phase_mode="exact")
            errs.append(abs(lens_response_oracle(cfg, oracle, math.asin(phi), theta) - closed))
        assert errs[0] > errs[1] > errs[2]

    def test_unconverged_quadrature_raises(self):
        # A large aperture with the minimum point count leaves the midpoint
        # rule visibly unconverged under Richardson doubling.
        cfg = LensArrayConfig(aperture=200.0, azimuth_dim=200.0)
        oracle = LensOracleConfig(quad_points=64, phase_mode="exact", focal_ratio=2.0)
        with pytest.raises(AccuracyError):
            lens_response_oracle(cfg, oracle, math.asin(0.9), -0.85)

    def test_oracle_config_validation(self):
        with pytest.raises(InvalidInputError):
            LensOracleConfig(focal_ratio=0.5)
        with pytest.raises(InvalidInputError):
            LensOracleConfig(quad_points=10)
        with pytest.raises(InvalidInputError):
            LensOracleConfig(phase_mode="quadratic")
