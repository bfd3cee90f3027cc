"""On-disk stores: one JSON header line + raw little-endian float64 body.

The header is a single line of JSON; the body is ``count x dim`` 64-bit
floats, row-major.  Descriptor stores keep sample ids, writer ids, and
tags aligned with the rows so evaluation never needs to touch pixels
again.  Model stores keep the mean as row 0 followed by the component
rows.
"""

import json
from dataclasses import dataclass

import numpy as np

from .embedding import PcaModel
from .errors import StoreError

FORMAT_VERSION = 1

_DESCRIPTOR_KIND = "descriptors"
_MODEL_KIND = "pca-model"


@dataclass(eq=False)
class DescriptorStore:
    """In-memory image of a descriptor store file."""

    sample_ids: list
    writer_ids: list
    tags: list  # list of lists of tag strings
    vectors: np.ndarray  # (count, dim) float64
    radii: tuple | None = None
    block_size: int | None = None
    extra: dict | None = None  # extraction settings echo

    @property
    def count(self) -> int:
        return self.vectors.shape[0]

    @property
    def dim(self) -> int:
        return self.vectors.shape[1]


def _write(path, header: dict, body: np.ndarray) -> None:
    header = dict(header)
    header["format"] = FORMAT_VERSION
    with open(path, "wb") as fh:
        fh.write(json.dumps(header, sort_keys=True).encode("utf-8"))
        fh.write(b"\n")
        fh.write(np.ascontiguousarray(body, dtype="<f8").tobytes())


def _read(path, kind: str):
    try:
        with open(path, "rb") as fh:
            line = fh.readline()
            blob = fh.read()
    except OSError as exc:
        raise StoreError(f"cannot open store {path}: {exc}") from exc
    try:
        header = json.loads(line.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise StoreError(f"{path}: bad store header: {exc}") from exc
    if header.get("format") != FORMAT_VERSION:
        raise StoreError(f"{path}: unsupported format {header.get('format')!r}")
    if header.get("kind") != kind:
        raise StoreError(f"{path}: expected a {kind} store, got {header.get('kind')!r}")
    count, dim = header.get("count"), header.get("dim")
    if not isinstance(count, int) or not isinstance(dim, int) or count < 0 or dim < 1:
        raise StoreError(f"{path}: invalid count/dim in header")
    expected = count * dim * 8
    if len(blob) != expected:
        raise StoreError(
            f"{path}: body is {len(blob)} bytes, header implies {expected}"
        )
    body = np.frombuffer(blob, dtype="<f8").reshape(count, dim).copy()
    return header, body


def write_descriptor_store(path, store: DescriptorStore) -> None:
    count, dim = store.vectors.shape
    if not (len(store.sample_ids) == len(store.writer_ids) == len(store.tags) == count):
        raise StoreError("store metadata columns disagree with the vector count")
    radii = list(store.radii) if store.radii is not None else None
    if radii is not None:
        block = store.block_size or 256
        if dim != block * len(radii):
            raise StoreError(
                f"descriptor dim {dim} inconsistent with {block} x {len(radii)} radii"
            )
    header = {
        "kind": _DESCRIPTOR_KIND,
        "count": count,
        "dim": dim,
        "radii": radii,
        "block_size": store.block_size,
        "sample_ids": list(store.sample_ids),
        "writer_ids": list(store.writer_ids),
        "tags": [sorted(t) for t in store.tags],
        "extra": store.extra or {},
    }
    _write(path, header, store.vectors)


def read_descriptor_store(path) -> DescriptorStore:
    header, body = _read(path, _DESCRIPTOR_KIND)
    ids = header.get("sample_ids")
    writers = header.get("writer_ids")
    tags = header.get("tags")
    if not (isinstance(ids, list) and isinstance(writers, list) and isinstance(tags, list)):
        raise StoreError(f"{path}: missing id/writer/tag columns")
    if not (len(ids) == len(writers) == len(tags) == body.shape[0]):
        raise StoreError(f"{path}: metadata length disagrees with row count")
    if len(set(ids)) != len(ids):
        raise StoreError(f"{path}: duplicate sample ids in store")
    radii = header.get("radii")
    block = header.get("block_size")
    if radii is not None:
        if body.shape[1] != (block or 256) * len(radii):
            raise StoreError(f"{path}: dim inconsistent with radii in header")
        radii = tuple(radii)
    return DescriptorStore(
        sample_ids=list(ids),
        writer_ids=list(writers),
        tags=[list(t) for t in tags],
        vectors=body,
        radii=radii,
        block_size=block,
        extra=header.get("extra") or {},
    )


def write_model_store(path, model: PcaModel, training_sample_ids=()) -> None:
    body = np.vstack([model.mean[None, :], model.components])
    header = {
        "kind": _MODEL_KIND,
        "count": body.shape[0],
        "dim": model.input_dim,
        "n_components": model.n_components,
        "explained_variance": [float(v) for v in model.explained_variance],
        "training_sample_ids": list(training_sample_ids),
    }
    _write(path, header, body)


def read_model_store(path):
    """Returns (PcaModel, training_sample_ids)."""
    header, body = _read(path, _MODEL_KIND)
    n_components = header.get("n_components")
    if not isinstance(n_components, int) or n_components != body.shape[0] - 1:
        raise StoreError(f"{path}: n_components disagrees with body rows")
    variance = np.asarray(header.get("explained_variance", []), dtype=np.float64)
    if variance.size != n_components:
        raise StoreError(f"{path}: explained_variance length mismatch")
    model = PcaModel(body[0], body[1:], variance)
    return model, list(header.get("training_sample_ids", []))
