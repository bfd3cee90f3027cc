"""Texture-as-descriptor toolkit for writer identification.

Pipeline: per-radius thresholded LBP transforms of a page image,
histogram pooling into a block-normalized descriptor, PCA projection
with Hellinger + L2 normalization, and nearest-neighbor evaluation.
"""

from .descriptor import (
    PageDescriptor,
    build_baseline_descriptor,
    build_descriptor,
    pool_histogram,
)
from .embedding import PcaModel, embed, fit_pca, hellinger_l2, project
from .errors import (
    DataError,
    DecodeError,
    InvalidInputError,
    ManifestError,
    StoreError,
    UsageError,
)
from .evaluation import (
    EvalConfig,
    EvalReport,
    RankedList,
    SampleRecord,
    leave_one_out_rankings,
    rank,
    run_l1out,
    run_metric,
    sweep_components,
    sweep_radii,
    sweep_rotation,
    topn_hard,
    topn_soft,
)
from .imaging import load_image, rotate_image, sample_bilinear
from .lbp import (
    CodeImage,
    CodeMapping,
    RadialConfig,
    build_mapping,
    compute_difference_histogram,
    lbp_3x3_transform,
    lbp_transform,
    otsu_threshold,
    srs_lbp_transform,
)
from .manifest import ManifestRow, filter_by_tag, load_manifest
from .synthetic import SyntheticSample, generate_synthetic_corpus

__version__ = "0.1.0"
