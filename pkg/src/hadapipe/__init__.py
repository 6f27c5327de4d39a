"""hadapipe: streaming Hadamard-derived illumination patterns, optimized
orderings, and computational ghost imaging simulation."""

from .counting import AllocationCounter, measure_allocations
from .errors import (
    ContractError,
    FormatError,
    HadapipeError,
    IndexRangeError,
    InternalInconsistencyError,
    ResourceLimitError,
    ShapeError,
)
from .estimator import GhostImagingTransformer
from .io import (
    read_patterns,
    read_pgm,
    read_pgm_array,
    write_patterns,
    write_pbm,
    write_pgm,
)
from .memory import (
    BenchRow,
    CostBreakdown,
    bench_table,
    measure_generate,
    measure_thdc_search,
    nhpc_cost,
    thdc_cost,
)
from .ordering import (
    OrderingScheme,
    PatternSequence,
    Provenance,
    RowPermutation,
    index_ordering,
    match_rows,
    mpcgi_sequence,
    natural_sequence,
    odd_row_extract,
    rd_sequence,
    scheme_milestones,
    thdc_mpcgi_order,
    thdc_permutation,
    thdc_rd_order,
)
from .pipeline import (
    LevelBatch,
    Traversal,
    apply_rule,
    canonical_position,
    count_level,
    count_total,
    expand_level,
    generate,
    natural_row_index,
    seed_pattern,
)
from .signmatrix import (
    DEFAULT_ENTRY_LIMIT,
    Convention,
    HadamardMatrix,
    Pattern,
    SignMatrix,
    build_hadamard,
    kron,
    reshape_row,
    stretch_columns,
    upscale,
    verify_hadamard,
)
from .simulate import (
    GaussianNoise,
    MeasurementRecord,
    ObjectImage,
    QualityMetrics,
    Reconstruction,
    acquire,
    block_average,
    bucket,
    bucket_binary_pair,
    correlation_first_term,
    metrics,
    progressive,
    reconstruct,
)

__version__ = "0.1.0"

__all__ = [
    "AllocationCounter", "measure_allocations",
    "ContractError", "FormatError", "HadapipeError", "IndexRangeError",
    "InternalInconsistencyError", "ResourceLimitError", "ShapeError",
    "GhostImagingTransformer",
    "read_patterns", "read_pgm", "read_pgm_array",
    "write_patterns", "write_pbm", "write_pgm",
    "BenchRow", "CostBreakdown", "bench_table",
    "measure_generate", "measure_thdc_search", "nhpc_cost", "thdc_cost",
    "OrderingScheme", "PatternSequence", "Provenance", "RowPermutation",
    "index_ordering", "match_rows", "mpcgi_sequence", "natural_sequence",
    "odd_row_extract", "rd_sequence", "scheme_milestones",
    "thdc_mpcgi_order", "thdc_permutation", "thdc_rd_order",
    "LevelBatch", "Traversal", "apply_rule", "canonical_position",
    "count_level", "count_total", "expand_level", "generate",
    "natural_row_index", "seed_pattern",
    "DEFAULT_ENTRY_LIMIT", "Convention", "HadamardMatrix", "Pattern",
    "SignMatrix", "build_hadamard", "kron", "reshape_row", "stretch_columns",
    "upscale", "verify_hadamard",
    "GaussianNoise", "MeasurementRecord", "ObjectImage", "QualityMetrics",
    "Reconstruction", "acquire", "block_average", "bucket",
    "bucket_binary_pair", "correlation_first_term", "metrics", "progressive",
    "reconstruct",
    "__version__",
]
