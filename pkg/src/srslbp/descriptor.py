"""Pooling of code images into block-normalized page descriptors."""

from dataclasses import dataclass

import numpy as np

from .errors import InvalidInputError
from .imaging import require_gray_image
from .lbp import (
    CodeImage,
    CodeMapping,
    RadialConfig,
    build_mapping,
    lbp_3x3_transform,
    lbp_transform,
    srs_lbp_transform,
)

BLOCK_SIZE = 256

BASELINE_VARIANTS = ("lbp3x3", "lbp8-1", "lbp16-2", "concat8-1_16-2")


@dataclass(frozen=True, eq=False)
class PageDescriptor:
    """Concatenated block-normalized code histograms for one page.

    For the standard pipeline (P=8) each 256-entry block has slot 0
    pinned to zero and L1 norm 1, or is all-zero for blank content.
    """

    values: np.ndarray
    sample_id: str = ""
    radii: tuple = ()
    block_size: int = BLOCK_SIZE

    def __post_init__(self):
        object.__setattr__(self, "values", np.asarray(self.values, dtype=np.float64))
        object.__setattr__(self, "radii", tuple(self.radii))
        if self.values.ndim != 1:
            raise InvalidInputError("descriptor values must be a flat vector")
        if self.radii and self.values.size != self.block_size * len(self.radii):
            raise InvalidInputError(
                f"descriptor length {self.values.size} != "
                f"{self.block_size} x {len(self.radii)} radii"
            )

    @property
    def dim(self) -> int:
        return self.values.size


def pool_histogram(code_img: CodeImage, mapping: CodeMapping | None = None) -> np.ndarray:
    """Normalized code histogram with the zero pattern discarded.

    Counts codes over the valid region (through ``mapping`` when given),
    zeroes the bin that code 0 lands in, and L1-normalizes the remaining
    mass.  An image of only zero patterns yields the all-zero vector.
    """
    codes = code_img.codes.ravel()
    if mapping is None:
        bins = 1 << code_img.samples
        zero_bin = 0
    else:
        if mapping.samples != code_img.samples:
            raise InvalidInputError(
                f"mapping for P={mapping.samples} applied to P={code_img.samples} codes"
            )
        codes = mapping.table[codes]
        bins = mapping.bin_count
        zero_bin = int(mapping.table[0])
    hist = np.bincount(codes, minlength=bins).astype(np.float64)
    hist[zero_bin] = 0.0
    total = hist.sum()
    if total > 0:
        hist /= total
    return hist


def build_descriptor(img: np.ndarray, cfg: RadialConfig, sample_id: str = "") -> PageDescriptor:
    """Transform, pool, and concatenate histograms in ascending-radius order."""
    if cfg.samples != 8:
        raise InvalidInputError("page descriptors are defined for P=8 (256-entry blocks)")
    img = require_gray_image(img)
    blocks = [pool_histogram(ci) for ci in srs_lbp_transform(img, cfg)]
    return PageDescriptor(np.concatenate(blocks), sample_id, cfg.radii, BLOCK_SIZE)


def build_baseline_descriptor(
    img: np.ndarray,
    variant: str,
    compression: str = "none",
    sample_id: str = "",
) -> PageDescriptor:
    """Descriptor for one of the classical LBP baselines.

    Each constituent transform contributes one block, pooled with the
    same discard-the-zero-pattern rule (applied to the bin code 0 maps
    to when a compression mapping is active).
    """
    img = require_gray_image(img)
    if variant == "lbp3x3":
        code_images = [lbp_3x3_transform(img)]
    elif variant == "lbp8-1":
        code_images = [lbp_transform(img, 8, 1, 0.0)]
    elif variant == "lbp16-2":
        code_images = [lbp_transform(img, 16, 2, 0.0)]
    elif variant == "concat8-1_16-2":
        code_images = [lbp_transform(img, 8, 1, 0.0), lbp_transform(img, 16, 2, 0.0)]
    else:
        raise InvalidInputError(
            f"unknown baseline {variant!r}; expected one of {BASELINE_VARIANTS}"
        )
    blocks = []
    for ci in code_images:
        mapping = None if compression == "none" else build_mapping(ci.samples, compression)
        blocks.append(pool_histogram(ci, mapping))
    return PageDescriptor(np.concatenate(blocks), sample_id)
