"""PCA projection and Hellinger + L2 normalization of page descriptors."""

from dataclasses import dataclass

import numpy as np

from .errors import InvalidInputError

DEFAULT_COMPONENTS = 200

# Eigenvalues below max * this are treated as numerically zero rank.
_RANK_RTOL = 1e-12


@dataclass(frozen=True, eq=False)
class PcaModel:
    """Mean vector plus orthonormal principal directions (rows).

    Rows are ordered by descending explained variance and sign-fixed so
    the largest-magnitude entry of each row is positive.
    """

    mean: np.ndarray
    components: np.ndarray
    explained_variance: np.ndarray

    @property
    def input_dim(self) -> int:
        return self.mean.size

    @property
    def n_components(self) -> int:
        return self.components.shape[0]


def _as_matrix(descriptors) -> np.ndarray:
    rows = [np.asarray(getattr(d, "values", d), dtype=np.float64) for d in descriptors]
    if len(rows) < 2:
        raise InvalidInputError(f"PCA needs at least 2 samples, got {len(rows)}")
    dims = {r.shape for r in rows}
    if len(dims) != 1 or rows[0].ndim != 1:
        raise InvalidInputError(f"descriptors disagree in dimension: {sorted(dims)}")
    return np.vstack(rows)


def _fix_signs(components: np.ndarray) -> np.ndarray:
    for row in components:
        j = int(np.argmax(np.abs(row)))
        if row[j] < 0:
            np.negative(row, out=row)
    return components


def fit_pca(descriptors, n_components: int = DEFAULT_COMPONENTS) -> PcaModel:
    """Principal components of a descriptor list, deterministic given order.

    The effective component count is min(requested, dim, samples-1),
    further capped by the numerical rank of the centered data.  When
    there are fewer samples than dimensions the decomposition runs on
    the samples x samples Gram matrix; both routes agree within 1e-6.
    """
    if n_components < 1:
        raise InvalidInputError(f"n_components must be >= 1, got {n_components}")
    x = _as_matrix(descriptors)
    n, dim = x.shape
    mean = x.mean(axis=0)
    xc = x - mean
    limit = min(n_components, dim, n - 1)
    if n <= dim:
        gram = xc @ xc.T
        evals, evecs = np.linalg.eigh(gram)
        order = np.argsort(evals, kind="stable")[::-1]
        evals = evals[order]
        evecs = evecs[:, order]
        keep = _positive_rank(evals, limit)
        scale = np.sqrt(evals[:keep])
        components = (xc.T @ evecs[:, :keep]).T / scale[:, None]
        variance = evals[:keep] / (n - 1)
    else:
        cov = (xc.T @ xc) / (n - 1)
        evals, evecs = np.linalg.eigh(cov)
        order = np.argsort(evals, kind="stable")[::-1]
        evals = evals[order]
        evecs = evecs[:, order]
        keep = _positive_rank(evals, limit)
        components = evecs[:, :keep].T.copy()
        variance = evals[:keep]
    return PcaModel(mean, _fix_signs(components), np.maximum(variance, 0.0))


def _positive_rank(evals_desc: np.ndarray, limit: int) -> int:
    if evals_desc.size == 0 or evals_desc[0] <= 0:
        return 0
    cutoff = evals_desc[0] * _RANK_RTOL
    return int(min(limit, np.count_nonzero(evals_desc > cutoff)))


def project(model: PcaModel, descriptor) -> np.ndarray:
    """Coordinates of one descriptor in the principal subspace."""
    v = np.asarray(getattr(descriptor, "values", descriptor), dtype=np.float64)
    if v.shape != (model.input_dim,):
        raise InvalidInputError(
            f"descriptor dimension {v.shape} does not match model input_dim {model.input_dim}"
        )
    return model.components @ (v - model.mean)


def hellinger_l2(v: np.ndarray) -> np.ndarray:
    """Signed elementwise square root followed by L2 normalization.

    All-zero input maps to all-zero output.
    """
    v = np.asarray(v, dtype=np.float64)
    h = np.sign(v) * np.sqrt(np.abs(v))
    norm = np.linalg.norm(h)
    if norm > 0:
        h /= norm
    return h


def embed(model: PcaModel, descriptor) -> np.ndarray:
    """Full embedding step: project, then Hellinger + L2 normalize."""
    return hellinger_l2(project(model, descriptor))
