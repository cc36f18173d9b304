"""Soft-output weighted-minimum-distance detection for one-bit massive MIMO.

The uplink with one-bit ADCs turns each multiuser message into a binary
spatial-domain codeword observed through per-position binary channels; this
package builds that code, decodes it exactly or through a pruned hierarchical
partition, produces soft output for an outer LDPC code, and measures BER/FER
in a reproducible Monte Carlo harness.
"""

from .channel import (
    NOISE_STD,
    FrameStructure,
    estimate_channel_zf,
    generate_pilots,
    quantize,
    sample_rayleigh,
    transmit,
    transmit_pilots,
)
from .config import (
    CSV_HEADER,
    SWEEP_CSV_HEADER,
    ResultRow,
    SimConfig,
    SweepRow,
    parse_partition,
)
from .core import (
    Constellation,
    all_message_digits,
    bit_table,
    bits_to_message,
    m_ary_compose,
    m_ary_expansion,
    message_to_bits,
    modulate,
    q_function,
    qam_constellation,
    real_channel_matrix,
    real_decompose,
    real_stack,
)
from .detector import (
    LLR_CLAMP,
    compute_app,
    compute_llrs,
    md_decode,
    ml_decode,
    weighted_hamming,
    wmd_decode,
    zf_detect,
)
from .errors import CodeConstructionError, ConfigurationError, DegeneratePosteriorError
from .ldpc import (
    LdpcCode,
    code_from_parity_check,
    construct_code,
    decode_bit_flipping,
    decode_bp,
    encode,
    load_alist,
    parse_alist,
    save_alist,
    syndrome,
    write_alist,
)
from .partition import (
    PartitionParams,
    PartitionTree,
    build_partition_tree,
    centroid_weights,
    estimate_complexity,
    kmeans_hamming,
    preprocess,
    tree_stats,
    validate_params,
)
from .sim import (
    partition_report,
    render_csv,
    run_coded,
    run_partition_sweep,
    run_uncoded,
    write_results,
)
from .spatial_code import SpatialCode, build_code, dump_code, exact_likelihood, subcode

__version__ = "0.1.0"

__all__ = [
    "NOISE_STD",
    "LLR_CLAMP",
    "CSV_HEADER",
    "SWEEP_CSV_HEADER",
    "Constellation",
    "FrameStructure",
    "SpatialCode",
    "PartitionParams",
    "PartitionTree",
    "LdpcCode",
    "SimConfig",
    "ResultRow",
    "SweepRow",
    "ConfigurationError",
    "DegeneratePosteriorError",
    "CodeConstructionError",
    "m_ary_expansion",
    "m_ary_compose",
    "all_message_digits",
    "bits_to_message",
    "message_to_bits",
    "bit_table",
    "qam_constellation",
    "modulate",
    "real_stack",
    "real_channel_matrix",
    "real_decompose",
    "q_function",
    "sample_rayleigh",
    "quantize",
    "transmit",
    "generate_pilots",
    "transmit_pilots",
    "estimate_channel_zf",
    "build_code",
    "exact_likelihood",
    "subcode",
    "dump_code",
    "weighted_hamming",
    "wmd_decode",
    "md_decode",
    "ml_decode",
    "zf_detect",
    "compute_app",
    "compute_llrs",
    "validate_params",
    "kmeans_hamming",
    "centroid_weights",
    "build_partition_tree",
    "preprocess",
    "estimate_complexity",
    "tree_stats",
    "construct_code",
    "code_from_parity_check",
    "encode",
    "syndrome",
    "decode_bp",
    "decode_bit_flipping",
    "write_alist",
    "parse_alist",
    "save_alist",
    "load_alist",
    "parse_partition",
    "run_uncoded",
    "run_coded",
    "run_partition_sweep",
    "partition_report",
    "render_csv",
    "write_results",
]
