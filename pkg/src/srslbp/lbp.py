"""The LBP transform family.

Sampling convention, shared by every operation here and by the test
oracles: sample p of P sits at angle ``2*pi*p/P`` from the positive x
axis, offsets ``(dx, dy) = (R*cos, R*sin)`` applied in (col, row)
coordinates with y growing downward.  Bit p of a code is set iff the
real-valued difference ``g_p - g_c`` is >= the threshold t.  Pixels
closer than R to any border are excluded from histograms and codes.

Thresholds come either from Otsu's criterion on the 256-bin histogram of
rounded absolute differences (one threshold per image and radius) or are
fixed by the caller.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidInputError
from .imaging import require_gray_image

HISTOGRAM_BINS = 256

DEFAULT_SAMPLES = 8
DEFAULT_RADII = tuple(range(1, 13))


@dataclass(frozen=True)
class RadialConfig:
    """Sampling plan for the multi-radius transform.

    ``threshold`` of None selects per-radius Otsu estimation; a number
    fixes the binarization threshold for every radius.
    """

    samples: int = DEFAULT_SAMPLES
    radii: tuple = DEFAULT_RADII
    threshold: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "radii", tuple(int(r) for r in self.radii))
        if self.samples < 3:
            raise InvalidInputError(f"need at least 3 samples per radius, got {self.samples}")
        if not self.radii:
            raise InvalidInputError("radii list is empty")
        if self.radii[0] < 1 or any(b <= a for a, b in zip(self.radii, self.radii[1:])):
            raise InvalidInputError(f"radii must be strictly increasing and >= 1: {self.radii}")


@dataclass(frozen=True, eq=False)
class CodeImage:
    """Integer code raster for one radius, covering the valid region only."""

    codes: np.ndarray  # (height-2R, width-2R) int32
    radius: int
    samples: int

    @property
    def margin(self) -> int:
        return self.radius

    @property
    def valid_height(self) -> int:
        return self.codes.shape[0]

    @property
    def valid_width(self) -> int:
        return self.codes.shape[1]


@dataclass(frozen=True, eq=False)
class CodeMapping:
    """Many-to-one code relabeling (vocabulary compression)."""

    table: np.ndarray  # (2**samples,) int32, entries in [0, bin_count)
    bin_count: int
    mode: str
    samples: int


def sample_offsets(samples: int, radius: float) -> list[tuple[float, float]]:
    """(dx, dy) offsets of the P circle samples, p = 0 .. P-1."""
    out = []
    for p in range(samples):
        theta = 2.0 * math.pi * p / samples
        out.append((radius * math.cos(theta), radius * math.sin(theta)))
    return out


def _check_radius(img: np.ndarray, radius: int) -> None:
    h, w = img.shape
    if radius < 1:
        raise InvalidInputError(f"radius must be >= 1, got {radius}")
    if w <= 2 * radius or h <= 2 * radius:
        raise InvalidInputError(
            f"image {w}x{h} too small for radius {radius} (needs both sides > {2 * radius})"
        )


def difference_planes(img: np.ndarray, samples: int, radius: int) -> np.ndarray:
    """Stack of P planes of ``g_p - g_c`` over the valid region, float64.

    The sample position for plane p at center (x, y) is the absolute
    coordinate (x + dx_p, y + dy_p); because the offset is constant the
    fractional parts depend only on the row or the column, so each plane
    is four outer-indexed gathers blended with 1-d weight vectors.  The
    arithmetic matches ``imaging.sample_bilinear`` bit for bit.
    """
    img = require_gray_image(img)
    _check_radius(img, radius)
    h, w = img.shape
    r = radius
    px = img.astype(np.float64)
    center = px[r : h - r, r : w - r]
    cols = np.arange(r, w - r, dtype=np.float64)
    rows = np.arange(r, h - r, dtype=np.float64)
    planes = np.empty((samples, h - 2 * r, w - 2 * r))
    for p, (dx, dy) in enumerate(sample_offsets(samples, radius)):
        xs = cols + dx
        ys = rows + dy
        x0 = np.minimum(np.floor(xs).astype(np.intp), w - 2)
        y0 = np.minimum(np.floor(ys).astype(np.intp), h - 2)
        fx = xs - x0
        fy = ys - y0
        x1 = np.minimum(x0 + 1, w - 1)
        y1 = np.minimum(y0 + 1, h - 1)
        v00 = px[np.ix_(y0, x0)]
        v01 = px[np.ix_(y0, x1)]
        v10 = px[np.ix_(y1, x0)]
        v11 = px[np.ix_(y1, x1)]
        top = (1.0 - fx) * v00 + fx * v01
        bot = (1.0 - fx) * v10 + fx * v11
        planes[p] = (1.0 - fy)[:, None] * top + fy[:, None] * bot - center
    return planes


def compute_difference_histogram(img: np.ndarray, samples: int = 8, radius: int = 1) -> np.ndarray:
    """256-bin histogram of rounded absolute center-to-sample differences.

    Counts sum to (valid pixels) * P.
    """
    planes = difference_planes(img, samples, radius)
    d = np.rint(np.abs(planes)).astype(np.int64)
    return np.bincount(d.ravel(), minlength=HISTOGRAM_BINS)


def otsu_threshold(hist: np.ndarray) -> int:
    """Threshold minimizing the within-class variance of the difference
    distribution, split into low = {d < t} and high = {d >= t}.

    Returns the smallest minimizing t in 1..255 with both classes
    nonempty; a single-valued distribution at bin v returns the sentinel
    v+1 (everything classified low).
    """
    hist = np.asarray(hist)
    if hist.shape != (HISTOGRAM_BINS,):
        raise InvalidInputError(f"expected a 256-bin histogram, got shape {hist.shape}")
    if np.any(hist < 0):
        raise InvalidInputError("histogram has negative counts")
    counts = hist.astype(np.float64)
    total = counts.sum()
    if total <= 0:
        raise InvalidInputError("histogram is empty")
    occupied = np.nonzero(counts)[0]
    lo, hi = int(occupied[0]), int(occupied[-1])
    if lo == hi:
        return lo + 1
    idx = np.arange(HISTOGRAM_BINS, dtype=np.float64)
    w_cum = np.cumsum(counts)
    s_cum = np.cumsum(counts * idx)
    q_cum = np.cumsum(counts * idx * idx)
    # Candidates with both classes nonempty.
    t = np.arange(lo + 1, hi + 1)
    w1 = w_cum[t - 1]
    s1 = s_cum[t - 1]
    q1 = q_cum[t - 1]
    w2 = total - w1
    s2 = s_cum[-1] - s1
    q2 = q_cum[-1] - q1
    var1 = q1 / w1 - (s1 / w1) ** 2
    var2 = q2 / w2 - (s2 / w2) ** 2
    objective = (w1 * var1 + w2 * var2) / total
    return int(t[int(np.argmin(objective))])


def _codes_from_planes(planes: np.ndarray, threshold: float) -> np.ndarray:
    samples = planes.shape[0]
    codes = np.zeros(planes.shape[1:], dtype=np.int32)
    for p in range(samples):
        codes |= (planes[p] >= threshold).astype(np.int32) << p
    return codes


def lbp_transform(img: np.ndarray, samples: int, radius: int, threshold: float) -> CodeImage:
    """Generic circular LBP with an explicit binarization threshold."""
    planes = difference_planes(img, samples, radius)
    return CodeImage(_codes_from_planes(planes, threshold), radius, samples)


def srs_lbp_transform(img: np.ndarray, cfg: RadialConfig) -> list[CodeImage]:
    """One code image per configured radius.

    With ``cfg.threshold`` unset, each radius gets its own Otsu threshold
    estimated from that radius's difference histogram, so the result for
    radius R equals ``lbp_transform(img, P, R, otsu_threshold(hist_R))``.
    """
    img = require_gray_image(img)
    out = []
    for radius in cfg.radii:
        planes = difference_planes(img, cfg.samples, radius)
        if cfg.threshold is None:
            d = np.rint(np.abs(planes)).astype(np.int64)
            hist = np.bincount(d.ravel(), minlength=HISTOGRAM_BINS)
            t = float(otsu_threshold(hist))
        else:
            t = float(cfg.threshold)
        out.append(CodeImage(_codes_from_planes(planes, t), radius, cfg.samples))
    return out


_LATTICE_3X3 = ((1, 0), (1, 1), (0, 1), (-1, 1), (-1, 0), (-1, -1), (0, -1), (1, -1))


def lbp_3x3_transform(img: np.ndarray) -> CodeImage:
    """Original 3x3 LBP: the 8 lattice neighbors, no interpolation, t = 0.

    Bit order follows the circular convention (p=0 east, then through the
    south-east diagonal), margin 1.
    """
    img = require_gray_image(img)
    h, w = img.shape
    if h < 3 or w < 3:
        raise InvalidInputError(f"image {w}x{h} too small for the 3x3 transform")
    center = img[1 : h - 1, 1 : w - 1]
    codes = np.zeros((h - 2, w - 2), dtype=np.int32)
    for p, (dx, dy) in enumerate(_LATTICE_3X3):
        nb = img[1 + dy : h - 1 + dy, 1 + dx : w - 1 + dx]
        codes |= (nb >= center).astype(np.int32) << p
    return CodeImage(codes, 1, 8)


_MODE_ALIASES = {
    "none": "none",
    "uniform": "uniform",
    "u2": "uniform",
    "rotation-invariant": "rotation-invariant",
    "ri": "rotation-invariant",
    "riu2": "riu2",
}


def build_mapping(samples: int, mode: str) -> CodeMapping:
    """Vocabulary-compression table for P in {8, 16}.

    Modes: ``none`` (identity), ``uniform``/``u2`` (codes with at most two
    circular transitions keep distinct bins, the rest share one),
    ``rotation-invariant``/``ri`` (one bin per rotation class), ``riu2``
    (uniform codes binned by popcount plus one catch-all).
    """
    if samples not in (8, 16):
        raise InvalidInputError(f"mappings are defined for P in {{8, 16}}, got {samples}")
    try:
        mode = _MODE_ALIASES[mode]
    except KeyError:
        raise InvalidInputError(f"unknown mapping mode: {mode!r}") from None
    n = 1 << samples
    codes = np.arange(n, dtype=np.int64)
    bits = (codes[:, None] >> np.arange(samples)) & 1
    transitions = (bits != np.roll(bits, -1, axis=1)).sum(axis=1)
    uniform = transitions <= 2
    if mode == "none":
        table = codes.astype(np.int32)
        bin_count = n
    elif mode == "uniform":
        # Uniform codes keep distinct bins in ascending code order.
        table = np.full(n, int(uniform.sum()), dtype=np.int32)
        table[uniform] = np.arange(int(uniform.sum()), dtype=np.int32)
        bin_count = int(uniform.sum()) + 1
    elif mode == "rotation-invariant":
        canon = codes.copy()
        for k in range(1, samples):
            rotated = ((codes >> k) | (codes << (samples - k))) & (n - 1)
            canon = np.minimum(canon, rotated)
        reps, table_idx = np.unique(canon, return_inverse=True)
        table = table_idx.astype(np.int32)
        bin_count = int(reps.size)
    else:  # riu2
        popcount = bits.sum(axis=1)
        table = np.where(uniform, popcount, samples + 1).astype(np.int32)
        bin_count = samples + 2
    return CodeMapping(table, bin_count, mode, samples)
