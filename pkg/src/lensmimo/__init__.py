"""Link-level simulator for millimeter-wave MIMO with lens antenna arrays.

Core pieces: sinc-profile lens array responses with an aperture-integration
oracle, a sparse multipath channel generator, path division multiplexing
transceivers (orthogonal ideal-angle form, MRC/MMSE combining, path
grouping), a conventional uniform-planar-array benchmark, and a Monte Carlo
experiment harness with CLI and CSV output.
"""
from .arrays import (
    LensArrayConfig,
    LensOracleConfig,
    UpaConfig,
    lens_response,
    lens_response_oracle,
    lens_response_spatial,
    spatial_decompose,
    upa_response,
)
from .channel import (
    ChannelStats,
    PathSet,
    TappedChannel,
    narrowband_matrix,
    sample_paths,
    tapped_channel,
)
from .errors import (
    AccuracyError,
    ConfigError,
    DegenerateInputError,
    IdealAngleError,
    InvalidInputError,
    LensMimoError,
    NumericalError,
    StatisticalValidityError,
    UnsupportedConfigurationError,
)
from .experiments import (
    ExperimentConfig,
    ResultRow,
    preset,
    preset_names,
    run_experiment,
    sweep,
)
from .grouping import (
    GroupPartition,
    check_separation,
    group_channels,
    group_paths,
    grouped_capacity,
)
from .numerics import PowerAllocation, hermitian_solve, svd, water_fill, waterfill_capacity
from .opdm import ParallelChannels, opdm_capacity, opdm_decompose
from .pdm import (
    IpcMatrix,
    LinkDesign,
    SinrReport,
    ipc_coefficients,
    mmse_combiners,
    mrc_combiners,
    mrt_precoders,
    pdm_sinr,
    simulate_symbols,
    two_term_sinr_approx,
)
from .selection import SupportSets, reduce_channel, support_sets
from .upa import (
    OfdmConfig,
    eigenmode_capacity,
    mimo_ofdm_capacity,
    narrowband_upa_matrix,
    ofdm_subchannels,
    power_select_antennas,
    restrict_taps,
    upa_tapped_channel,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
