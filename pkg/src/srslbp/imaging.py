"""Grayscale raster substrate: decoding, bilinear sampling, rotation.

Images are plain 2-d uint8 numpy arrays, row-major (height x width).
Pixel (row r, col c) sits at coordinates (x=c, y=r): x grows rightward,
y grows downward.  All sampling code in this package uses the nested
bilinear blend

    top = (1-fx)*v00 + fx*v01
    bot = (1-fx)*v10 + fx*v11
    val = (1-fy)*top + fy*bot

evaluated in float64, so exact lattice coordinates reproduce stored
pixels bit-for-bit.
"""

import math

import numpy as np
from PIL import Image, UnidentifiedImageError

from .errors import DecodeError, InvalidInputError

# ITU-R 601 luma weights for color-to-gray conversion.
LUMA_R, LUMA_G, LUMA_B = 0.299, 0.587, 0.114

# Document background is white; uncovered pixels after rotation get this value.
BACKGROUND = 255


def require_gray_image(img: np.ndarray) -> np.ndarray:
    """Check that ``img`` is a valid 2-d uint8 raster and return it."""
    img = np.asarray(img)
    if img.ndim != 2:
        raise InvalidInputError(f"expected a 2-d grayscale array, got shape {img.shape}")
    if img.dtype != np.uint8:
        raise InvalidInputError(f"expected uint8 pixels, got dtype {img.dtype}")
    if img.shape[0] < 1 or img.shape[1] < 1:
        raise InvalidInputError(f"image has a zero dimension: {img.shape}")
    return img


def load_image(path) -> np.ndarray:
    """Decode a PNG/TIFF/JPEG file into a 2-d uint8 grayscale array.

    Color inputs are converted with luma weights 0.299/0.587/0.114 and
    rounded to the nearest integer; bilevel inputs map to {0, 255}.
    """
    try:
        with Image.open(path) as im:
            im.load()
            mode = im.mode
            if mode == "1":
                arr = np.asarray(im, dtype=bool)
                gray = np.where(arr, 255, 0).astype(np.uint8)
            elif mode == "L":
                gray = np.asarray(im, dtype=np.uint8)
            elif mode in ("I;16", "I;16L", "I;16B", "I;16N"):
                # 16-bit grayscale: rescale to 8 bits.
                arr = np.asarray(im, dtype=np.float64)
                gray = np.rint(arr / 257.0).astype(np.uint8)
            else:
                rgb = np.asarray(im.convert("RGB"), dtype=np.float64)
                luma = LUMA_R * rgb[..., 0] + LUMA_G * rgb[..., 1] + LUMA_B * rgb[..., 2]
                gray = np.rint(luma).astype(np.uint8)
    except FileNotFoundError:
        raise DecodeError(f"image file not found: {path}") from None
    except (UnidentifiedImageError, OSError, SyntaxError) as exc:
        raise DecodeError(f"cannot decode image {path}: {exc}") from exc
    if gray.ndim != 2 or gray.shape[0] < 1 or gray.shape[1] < 1:
        raise InvalidInputError(f"image {path} has invalid dimensions {gray.shape}")
    return gray


def sample_bilinear(img: np.ndarray, x: float, y: float) -> float:
    """Bilinear intensity at fractional coordinates (x, y).

    Callers must keep 0 <= x <= width-1 and 0 <= y <= height-1; going
    outside is a contract violation, never silently clamped.
    """
    h, w = img.shape
    assert 0.0 <= x <= w - 1 and 0.0 <= y <= h - 1, f"sample ({x}, {y}) outside {w}x{h} image"
    x0 = int(math.floor(x))
    y0 = int(math.floor(y))
    if x0 >= w - 1:
        x0 = max(w - 2, 0)
    if y0 >= h - 1:
        y0 = max(h - 2, 0)
    x1 = min(x0 + 1, w - 1)
    y1 = min(y0 + 1, h - 1)
    fx = x - x0
    fy = y - y0
    v00 = float(img[y0, x0])
    v01 = float(img[y0, x1])
    v10 = float(img[y1, x0])
    v11 = float(img[y1, x1])
    top = (1.0 - fx) * v00 + fx * v01
    bot = (1.0 - fx) * v10 + fx * v11
    return (1.0 - fy) * top + fy * bot


def _bilinear_grid(px: np.ndarray, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
    """Vectorized bilinear sampling; coordinates must already be in range."""
    h, w = px.shape
    x0 = np.clip(np.floor(xs).astype(np.intp), 0, max(w - 2, 0))
    y0 = np.clip(np.floor(ys).astype(np.intp), 0, max(h - 2, 0))
    x1 = np.minimum(x0 + 1, w - 1)
    y1 = np.minimum(y0 + 1, h - 1)
    fx = xs - x0
    fy = ys - y0
    v00 = px[y0, x0]
    v01 = px[y0, x1]
    v10 = px[y1, x0]
    v11 = px[y1, x1]
    top = (1.0 - fx) * v00 + fx * v01
    bot = (1.0 - fx) * v10 + fx * v11
    return (1.0 - fy) * top + fy * bot


def rotate_image(img: np.ndarray, angle: float) -> np.ndarray:
    """Rotate about the image center by ``angle`` degrees (counter-clockwise
    positive on screen), bilinear resampling, output dimensions unchanged.

    Pixels not covered by the source are filled with the background value
    255.  Angle 0 returns a pixel-identical copy.
    """
    img = require_gray_image(img)
    if not -180.0 <= angle <= 180.0:
        raise InvalidInputError(f"rotation angle {angle} outside [-180, 180]")
    if angle == 0.0:
        return img.copy()
    h, w = img.shape
    theta = math.radians(angle)
    c, s = math.cos(theta), math.sin(theta)
    cx = (w - 1) / 2.0
    cy = (h - 1) / 2.0
    yy, xx = np.mgrid[0:h, 0:w]
    dx = xx - cx
    dy = yy - cy
    # Inverse map: where does each output pixel come from in the source.
    src_x = cx + dx * c - dy * s
    src_y = cy + dx * s + dy * c
    # FP fuzz guard: coordinates within eps of the border count as inside.
    eps = 1e-6
    inside = (src_x >= -eps) & (src_x <= w - 1 + eps) & (src_y >= -eps) & (src_y <= h - 1 + eps)
    src_x = np.clip(src_x, 0.0, w - 1)
    src_y = np.clip(src_y, 0.0, h - 1)
    px = img.astype(np.float64)
    values = _bilinear_grid(px, src_x, src_y)
    out = np.full((h, w), float(BACKGROUND))
    out[inside] = values[inside]
    return np.rint(out).astype(np.uint8)


def save_png(img: np.ndarray, path) -> None:
    """Write a grayscale raster as PNG (synthetic corpora, debug dumps)."""
    Image.fromarray(require_gray_image(img), mode="L").save(path, format="PNG")
