import numpy as np
import pytest

from lensmimo.arrays import LensArrayConfig, lens_response_spatial
from lensmimo.channel import PathSet
from lensmimo.errors import InvalidInputError
from lensmimo.selection import reduce_channel, support_sets


def make_paths(aoa, aod):
    n = len(aoa)
    return PathSet(
        gains=np.ones(n, complex),
        delays_s=np.zeros(n),
        aoa_spatial_freqs=np.asarray(aoa, float),
        aod_spatial_freqs=np.asarray(aod, float),
    )


class TestSupportSets:
    def test_three_path_reference_instance(self):
        tx = LensArrayConfig(10.0, 10.0)
        rx = LensArrayConfig(10.0, 10.0)
        paths = make_paths([0.36, -0.27, 0.08], [-0.2, 0.12, 0.24])
        sets = support_sets(paths, tx, rx, delta=1)
        assert sets.rx_sets == ((3, 4), (-3, -2), (0, 1))
        assert sets.tx_sets == ((-2,), (1, 2), (2, 3))
        assert sets.rx_union == (-3, -2, 0, 1, 3, 4)
        assert sets.tx_union == (-2, 1, 2, 3)

    def test_exact_focus_gives_singleton(self):
        cfg = LensArrayConfig(10.0, 10.0)
        sets = support_sets(make_paths([0.3], [0.3]), cfg, cfg, delta=1)
        assert sets.rx_sets == ((3,),)

    def test_sets_contain_focusing_index_and_are_nonempty(self):
        cfg = LensArrayConfig(10.0, 10.0)
        rng = np.random.default_rng(0)
        for phi in rng.uniform(-1, 1, 100):
            sets = support_sets(make_paths([phi], [phi]), cfg, cfg, delta=1)
            assert len(sets.rx_sets[0]) >= 1
            nearest = int(np.clip(round(10.0 * phi), -10, 10))
            assert nearest in sets.rx_sets[0]

    def test_edge_angles_clip_to_array(self):
        cfg = LensArrayConfig(10.0, 10.0)
        sets = support_sets(make_paths([0.999], [0.999]), cfg, cfg, delta=1)
        assert all(-10 <= m <= 10 for m in sets.rx_sets[0])

    def test_larger_delta_grows_sets(self):
        cfg = LensArrayConfig(10.0, 10.0)
        paths = make_paths([0.123], [0.123])
        small = support_sets(paths, cfg, cfg, delta=1)
        big = support_sets(paths, cfg, cfg, delta=3)
        assert set(small.rx_sets[0]) < set(big.rx_sets[0])

    def test_delta_validation(self):
        cfg = LensArrayConfig(10.0, 10.0)
        with pytest.raises(InvalidInputError):
            support_sets(make_paths([0.0], [0.0]), cfg, cfg, delta=0)


class TestReduceChannel:
    def test_shapes_and_values(self):
        tx = LensArrayConfig(100.0, 20.0)
        rx = LensArrayConfig(50.0, 10.0)
        paths = make_paths([0.36, -0.27], [0.12, 0.52])
        sets = support_sets(paths, tx, rx, delta=1)
        rx_resp, tx_resp = reduce_channel(paths, sets, tx, rx)
        assert rx_resp.shape == (2, len(sets.rx_union))
        assert tx_resp.shape == (2, len(sets.tx_union))
        full = lens_response_spatial(rx, 0.36)
        positions = np.asarray(sets.rx_union) + 10
        assert np.allclose(rx_resp[0], full[positions])

    def test_captures_most_energy(self):
        # Even at the worst half-integer misalignment the delta=1 subset
        # retains at least 2*sinc(1/2)^2 = 81% of the response energy.
        cfg = LensArrayConfig(10.0, 10.0)
        rng = np.random.default_rng(1)
        for phi in rng.uniform(-0.9, 0.9, 50):
            paths = make_paths([phi], [phi])
            sets = support_sets(paths, cfg, cfg, delta=1)
            rx_resp, _ = reduce_channel(paths, sets, cfg, cfg)
            assert np.linalg.norm(rx_resp[0]) ** 2 / cfg.aperture >= 0.81
