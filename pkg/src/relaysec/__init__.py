"""Monte Carlo BER simulation of secure transmission through an untrusted relay.

A multi-antenna source talks to a single-antenna destination, optionally
through a single-antenna relay that must not learn the message. The
imbalanced-beamforming scheme sends the real symbol component on the
destination-MRT beam and the imaginary component in the relay's nullspace;
combined with a balanced constellation labeling (E-map), the relay's
bitwise error rate is pinned at 1/2 at any SNR while the destination still
benefits from relaying. Baselines: generalized eigenvector beamforming,
artificial noise, and destination jamming.
"""

from .channel import ChannelRealization, awgn, crandn, draw_channel, make_rng, substream
from .constellation import (
    KINDS,
    MAPPINGS,
    BitSubsets,
    Constellation,
    RealProjection,
    bit_subsets,
    build_constellation,
    demap_point,
    export_text,
    label_lut,
    map_bits,
    project,
    search_emap,
    validate_emap,
)
from .destination import (
    BitErrorCounter,
    DetectionResult,
    count_bit_errors,
    detect_slot1_ibf,
    receive_an_af,
    receive_an_df,
    receive_dj_af,
    receive_dj_df,
    receive_gebf,
    receive_ibf_af,
    receive_ibf_df,
)
from .harness import (
    CSV_HEADER,
    BerRecord,
    ConfigError,
    ExperimentConfig,
    append_records,
    ci_halfwidth,
    load_config,
    parse_config,
    preset_configs,
    run_point,
    run_sweep,
)
from .numerics import NumericalError, max_generalized_eigvec, mmse_solve, nullspace_basis
from .relaynode import (
    RelayObservation,
    RelayOutput,
    eavesdrop_llr_1d,
    eavesdrop_llr_2d,
    forward_af,
    forward_df,
    relay_observe,
)
from .txschemes import (
    SCHEMES,
    SchemeConfig,
    SlotOneOutput,
    an_transmit,
    dj_jam,
    dj_transmit,
    gebf_transmit,
    ibf_transmit,
    mrt_beam,
    scheme_config,
)

__version__ = "0.1.0"
