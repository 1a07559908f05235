"""Polar codes, successive decoders and length/rate-preserving outer repetition blocks."""

from .channel import (
    ChannelParams,
    RngStream,
    awgn_apply,
    bpsk_modulate,
    ebn0_to_esn0,
    esn0_to_ebn0,
    llr_bi_awgn,
)
from .decoders import (
    DecodeResult,
    ResourceLimitError,
    codeword_metric,
    decode_batch,
    ml_decode_bruteforce,
    rep_list_decode,
    rep_sc_decode,
    sc_decode,
    sc_list_decode,
)
from .design import (
    CodeSpec,
    ConcatenatedCodeSpec,
    SearchParams,
    design_concatenated,
    scheme_predicted_wer,
    select_information_set,
    validate_scheme,
)
from .reliability import (
    DesignChannel,
    EquivalentBlockChannel,
    ReliabilityProfile,
    UnsupportedMethodError,
    awgn_reliability_ga,
    bec_reliability,
    equivalent_block_reliability,
    genie_mc_reliability,
    predicted_wer,
)
from .sim import SweepConfig, WerEstimate, simulate
from .specio import load_spec, save_spec
from .transform import PolarParams, encode_concatenated, encode_polar, transform

__version__ = "0.1.0"
