"""Independent reference implementations used only by the test suite.

Everything here is deliberately written the slow, obvious way (scalar
loops, per-candidate scans, string manipulation) so it shares no code
with the package internals it checks.
"""

import math

import numpy as np


def bilinear_reference(pixels, x, y):
    """Scalar bilinear blend on a nested-list image; contract formula."""
    h = len(pixels)
    w = len(pixels[0])
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
    v00 = pixels[y0][x0]
    v01 = pixels[y0][x1]
    v10 = pixels[y1][x0]
    v11 = pixels[y1][x1]
    top = (1.0 - fx) * v00 + fx * v01
    bot = (1.0 - fx) * v10 + fx * v11
    return (1.0 - fy) * top + fy * bot


def naive_differences(img, samples, radius):
    """Per-pixel list of lists of signed differences g_p - g_c."""
    h, w = img.shape
    pixels = img.astype(np.float64).tolist()
    offsets = []
    for p in range(samples):
        theta = 2.0 * math.pi * p / samples
        offsets.append((radius * math.cos(theta), radius * math.sin(theta)))
    rows = []
    for y in range(radius, h - radius):
        row = []
        for x in range(radius, w - radius):
            gc = pixels[y][x]
            diffs = []
            for dx, dy in offsets:
                gp = bilinear_reference(pixels, x + dx, y + dy)
                diffs.append(gp - gc)
            row.append(diffs)
        rows.append(row)
    return rows


def naive_lbp_codes(img, samples, radius, threshold):
    """Code raster computed with scalar loops; bit p set iff diff >= t."""
    diffs = naive_differences(img, samples, radius)
    out = np.zeros((len(diffs), len(diffs[0])), dtype=np.int64)
    for i, row in enumerate(diffs):
        for j, ds in enumerate(row):
            code = 0
            for p, d in enumerate(ds):
                if d >= threshold:
                    code |= 1 << p
            out[i, j] = code
    return out


def naive_difference_histogram(img, samples, radius):
    """256-bin histogram of round(|g_p - g_c|), scalar accumulation."""
    hist = np.zeros(256, dtype=np.int64)
    for row in naive_differences(img, samples, radius):
        for ds in row:
            for d in ds:
                hist[round(abs(d))] += 1
    return hist


def exhaustive_otsu(hist):
    """Smallest t in 1..255 minimizing the weighted within-class variance,
    recomputing both class statistics from scratch per candidate."""
    hist = np.asarray(hist, dtype=np.float64)
    total = hist.sum()
    values = np.arange(256, dtype=np.float64)
    occupied = np.nonzero(hist)[0]
    if occupied[0] == occupied[-1]:
        return int(occupied[0]) + 1
    best_t = None
    best_obj = None
    for t in range(1, 256):
        w_low = hist[:t].sum()
        w_high = hist[t:].sum()
        if w_low == 0 or w_high == 0:
            continue
        mu_low = (values[:t] * hist[:t]).sum() / w_low
        mu_high = (values[t:] * hist[t:]).sum() / w_high
        var_low = (((values[:t] - mu_low) ** 2) * hist[:t]).sum() / w_low
        var_high = (((values[t:] - mu_high) ** 2) * hist[t:]).sum() / w_high
        obj = (w_low / total) * var_low + (w_high / total) * var_high
        if best_obj is None or obj < best_obj:
            best_obj = obj
            best_t = t
    return best_t


def otsu_partition(hist, t):
    """The set of occupied bins classified low by threshold t."""
    occupied = np.nonzero(np.asarray(hist))[0]
    return frozenset(int(b) for b in occupied if b < t)


def circular_transitions(code, bits):
    s = format(code, f"0{bits}b")
    return sum(1 for i in range(bits) if s[i] != s[(i + 1) % bits])


def rotation_class(code, bits):
    s = format(code, f"0{bits}b")
    return min(int(s[k:] + s[:k], 2) for k in range(bits))


def pca_reference(x, n_components):
    """Mean + leading eigenvectors of the dense covariance matrix,
    sign-fixed so the largest-magnitude entry of each row is positive."""
    x = np.asarray(x, dtype=np.float64)
    n, dim = x.shape
    mean = x.mean(axis=0)
    xc = x - mean
    cov = (xc.T @ xc) / (n - 1)
    evals, evecs = np.linalg.eigh(cov)
    order = np.argsort(evals)[::-1][:n_components]
    comps = evecs[:, order].T.copy()
    for row in comps:
        j = int(np.argmax(np.abs(row)))
        if row[j] < 0:
            row *= -1.0
    return mean, comps, evals[order]


def brute_force_ranking(query, vectors):
    """Indices sorted by (euclidean distance, input position)."""
    scored = []
    for i, v in enumerate(vectors):
        d = math.sqrt(sum((a - b) ** 2 for a, b in zip(v, query)))
        scored.append((d, i))
    scored.sort()
    return [i for _, i in scored]
