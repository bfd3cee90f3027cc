"""Nearest-neighbor ranking, top-n metrics, and the evaluation protocols.

Two protocols: ``l1out`` fits the PCA embedding on the evaluation corpus
itself; ``metric`` fits it on an independent corpus and treats each
evaluation sample in isolation.  Both then rank every sample against all
others by Euclidean distance between embedded vectors.
"""

from dataclasses import dataclass

import numpy as np

from .descriptor import PageDescriptor, build_descriptor, pool_histogram
from .embedding import DEFAULT_COMPONENTS, PcaModel, embed, fit_pca
from .errors import InvalidInputError
from .imaging import rotate_image
from .lbp import RadialConfig, build_mapping, srs_lbp_transform


@dataclass(frozen=True, eq=False)
class SampleRecord:
    """One embedded page with its authorship label."""

    sample_id: str
    writer_id: str
    embedded: np.ndarray


@dataclass(frozen=True, eq=False)
class RankedList:
    """Gallery ids sorted by ascending distance to one query."""

    query_id: str
    sample_ids: tuple
    distances: np.ndarray


@dataclass(frozen=True)
class EvalConfig:
    n_components: int = DEFAULT_COMPONENTS
    soft_ns: tuple = (1, 2, 5, 10)
    hard_ns: tuple = (2, 3, 4)


@dataclass(eq=False)
class EvalReport:
    protocol: str
    soft_top: dict
    hard_top: dict
    hard_excluded: dict
    rankings: list
    config: dict
    num_queries: int
    num_writers: int


def rank(query: np.ndarray, gallery, query_id: str = "") -> RankedList:
    """Rank gallery records by Euclidean distance to the query vector.

    Ties keep gallery input order (stable sort).
    """
    if not gallery:
        raise InvalidInputError("gallery is empty")
    query = np.asarray(query, dtype=np.float64)
    matrix = np.vstack([np.asarray(g.embedded, dtype=np.float64) for g in gallery])
    if matrix.shape[1] != query.size:
        raise InvalidInputError(
            f"query dimension {query.size} != gallery dimension {matrix.shape[1]}"
        )
    dist = np.sqrt(((matrix - query) ** 2).sum(axis=1))
    order = np.argsort(dist, kind="stable")
    ids = tuple(gallery[i].sample_id for i in order)
    return RankedList(query_id, ids, dist[order])


def leave_one_out_rankings(records) -> list:
    """One RankedList per record, ranked against all the others."""
    matrix = np.vstack([np.asarray(r.embedded, dtype=np.float64) for r in records])
    ids = [r.sample_id for r in records]
    out = []
    n = len(records)
    for i in range(n):
        dist = np.sqrt(((matrix - matrix[i]) ** 2).sum(axis=1))
        keep = np.arange(n) != i
        dist_i = dist[keep]
        order = np.argsort(dist_i, kind="stable")
        kept_ids = [ids[j] for j in range(n) if j != i]
        out.append(RankedList(ids[i], tuple(kept_ids[j] for j in order), dist_i[order]))
    return out


def _same_class_counts(ranking: RankedList, labels, query_label: str) -> int:
    return sum(1 for s in ranking.sample_ids if labels[s] == query_label)


def topn_soft(rankings, labels, n: int) -> float:
    """Fraction of queries with at least one same-class hit in the first n."""
    if n < 1:
        raise InvalidInputError(f"n must be >= 1, got {n}")
    hits = 0
    for r in rankings:
        query_label = labels[r.query_id]
        if _same_class_counts(r, labels, query_label) < 1:
            raise InvalidInputError(
                f"query {r.query_id!r} has no same-class gallery sample"
            )
        if any(labels[s] == query_label for s in r.sample_ids[:n]):
            hits += 1
    return hits / len(rankings)


def _hard_with_excluded(rankings, labels, n: int):
    if n < 1:
        raise InvalidInputError(f"n must be >= 1, got {n}")
    hits = 0
    eligible = 0
    for r in rankings:
        query_label = labels[r.query_id]
        if _same_class_counts(r, labels, query_label) < n:
            continue
        eligible += 1
        if all(labels[s] == query_label for s in r.sample_ids[:n]):
            hits += 1
    accuracy = hits / eligible if eligible else 0.0
    return accuracy, len(rankings) - eligible


def topn_hard(rankings, labels, n: int) -> float:
    """Fraction of queries whose first n results are all same-class.

    Queries whose class has fewer than n same-class gallery samples are
    excluded from the average.
    """
    return _hard_with_excluded(rankings, labels, n)[0]


def _validate_corpus(sample_ids, writers) -> dict:
    seen = set()
    for sid in sample_ids:
        if sid in seen:
            raise InvalidInputError(f"duplicate sample_id in corpus: {sid!r}")
        seen.add(sid)
        if sid not in writers:
            raise InvalidInputError(f"sample {sid!r} missing from the writer map")
    by_writer = {}
    for sid in sample_ids:
        by_writer.setdefault(writers[sid], []).append(sid)
    if len(by_writer) < 2:
        raise InvalidInputError(
            "leave-one-out evaluation needs at least 2 writers "
            f"(got {len(by_writer)})"
        )
    thin = sorted(w for w, s in by_writer.items() if len(s) < 2)
    if thin:
        raise InvalidInputError(
            "leave-one-out evaluation needs at least 2 samples per writer; "
            f"writers with fewer: {thin}"
        )
    return by_writer


def _build_report(records, protocol, cfg, config_echo) -> EvalReport:
    labels = {r.sample_id: r.writer_id for r in records}
    rankings = leave_one_out_rankings(records)
    soft = {n: topn_soft(rankings, labels, n) for n in cfg.soft_ns}
    hard = {}
    excluded = {}
    for n in cfg.hard_ns:
        hard[n], excluded[n] = _hard_with_excluded(rankings, labels, n)
    return EvalReport(
        protocol=protocol,
        soft_top=soft,
        hard_top=hard,
        hard_excluded=excluded,
        rankings=rankings,
        config=config_echo,
        num_queries=len(records),
        num_writers=len({r.writer_id for r in records}),
    )


def _embed_records(descriptors, writers, model) -> list:
    return [
        SampleRecord(d.sample_id, writers[d.sample_id], embed(model, d))
        for d in descriptors
    ]


def run_l1out(descriptors, writers, cfg: EvalConfig = EvalConfig()) -> EvalReport:
    """Leave-one-out protocol: PCA is fitted on the evaluation corpus itself."""
    descriptors = list(descriptors)
    _validate_corpus([d.sample_id for d in descriptors], writers)
    model = fit_pca(descriptors, cfg.n_components)
    records = _embed_records(descriptors, writers, model)
    echo = _config_echo("l1out", cfg, model, len(records))
    return _build_report(records, "l1out", cfg, echo)


def run_metric(
    eval_descriptors,
    eval_writers,
    pca_descriptors,
    cfg: EvalConfig = EvalConfig(),
) -> EvalReport:
    """Metric protocol: PCA fitted on an independent, disjoint corpus."""
    eval_descriptors = list(eval_descriptors)
    pca_descriptors = list(pca_descriptors)
    overlap = sorted(
        {d.sample_id for d in eval_descriptors} & {d.sample_id for d in pca_descriptors}
    )
    if overlap:
        raise InvalidInputError(
            f"PCA corpus overlaps the evaluation corpus: {overlap}"
        )
    model = fit_pca(pca_descriptors, cfg.n_components)
    return evaluate_with_model(eval_descriptors, eval_writers, model, cfg)


def evaluate_with_model(
    descriptors,
    writers,
    model: PcaModel,
    cfg: EvalConfig = EvalConfig(),
    training_sample_ids=None,
) -> EvalReport:
    """Metric-protocol evaluation with an already fitted embedding model."""
    descriptors = list(descriptors)
    _validate_corpus([d.sample_id for d in descriptors], writers)
    if training_sample_ids is not None:
        overlap = sorted({d.sample_id for d in descriptors} & set(training_sample_ids))
        if overlap:
            raise InvalidInputError(
                f"PCA model was trained on evaluation samples: {overlap}"
            )
    records = _embed_records(descriptors, writers, model)
    echo = _config_echo("metric", cfg, model, len(records))
    return _build_report(records, "metric", cfg, echo)


def _config_echo(protocol, cfg, model, n_samples) -> dict:
    return {
        "protocol": protocol,
        "n_components_requested": cfg.n_components,
        "n_components": model.n_components,
        "soft_ns": list(cfg.soft_ns),
        "hard_ns": list(cfg.hard_ns),
        "num_samples": n_samples,
    }


def _top1_cfg(cfg: EvalConfig) -> EvalConfig:
    return EvalConfig(n_components=cfg.n_components, soft_ns=(1,), hard_ns=())


def sweep_radii(samples, max_radius: int, cfg: EvalConfig = EvalConfig()) -> dict:
    """Per-radius individual and cumulative top-1 curves.

    ``samples`` is a sequence of (sample_id, writer_id, image).  Besides
    the plain histograms, a uniform-compressed cumulative curve is
    produced for the compression comparison.
    """
    radii = tuple(range(1, max_radius + 1))
    rcfg = RadialConfig(radii=radii)
    u2 = build_mapping(8, "uniform")
    writers = {}
    full_blocks = []
    u2_blocks = []
    ids = []
    for sample_id, writer_id, img in samples:
        writers[sample_id] = writer_id
        ids.append(sample_id)
        code_images = srs_lbp_transform(img, rcfg)
        full_blocks.append([pool_histogram(ci) for ci in code_images])
        u2_blocks.append([pool_histogram(ci, u2) for ci in code_images])
    sweep_cfg = _top1_cfg(cfg)
    individual = []
    cumulative = []
    cumulative_u2 = []
    for k, r in enumerate(radii):
        solo = [
            PageDescriptor(blocks[k], sid, (r,))
            for sid, blocks in zip(ids, full_blocks)
        ]
        individual.append(run_l1out(solo, writers, sweep_cfg).soft_top[1])
        accum = [
            PageDescriptor(np.concatenate(blocks[: k + 1]), sid, radii[: k + 1])
            for sid, blocks in zip(ids, full_blocks)
        ]
        cumulative.append(run_l1out(accum, writers, sweep_cfg).soft_top[1])
        accum_u2 = [
            PageDescriptor(
                np.concatenate(blocks[: k + 1]), sid, radii[: k + 1], u2.bin_count
            )
            for sid, blocks in zip(ids, u2_blocks)
        ]
        cumulative_u2.append(run_l1out(accum_u2, writers, sweep_cfg).soft_top[1])
    return {
        "radius": list(radii),
        "individual": individual,
        "cumulative": cumulative,
        "cumulative_uniform": cumulative_u2,
    }


def sweep_components(descriptors, writers, n_list, cfg: EvalConfig = EvalConfig()) -> dict:
    """Top-1 accuracy as a function of the number of principal components."""
    descriptors = list(descriptors)
    top1 = []
    for n in n_list:
        run_cfg = EvalConfig(n_components=int(n), soft_ns=(1,), hard_ns=())
        top1.append(run_l1out(descriptors, writers, run_cfg).soft_top[1])
    return {"n_components": [int(n) for n in n_list], "top1": top1}


def sweep_rotation(
    samples,
    angles,
    radial_cfg: RadialConfig = RadialConfig(),
    cfg: EvalConfig = EvalConfig(),
) -> dict:
    """Top-1 accuracy of unrotated queries against a rotated gallery.

    The embedding model is fitted once on the unrotated corpus; rotated
    galleries are re-extracted per angle and embedded with that model.
    A query never competes against its own rotated counterpart.
    """
    samples = list(samples)
    ids = [s[0] for s in samples]
    writers = {sid: wid for sid, wid, _ in samples}
    _validate_corpus(ids, writers)
    base = [build_descriptor(img, radial_cfg, sid) for sid, _, img in samples]
    model = fit_pca(base, cfg.n_components)
    queries = np.vstack([embed(model, d) for d in base])
    writer_arr = np.array([writers[sid] for sid in ids])
    n = len(samples)
    top1 = []
    for angle in angles:
        gallery_desc = [
            build_descriptor(rotate_image(img, float(angle)), radial_cfg, sid)
            for sid, _, img in samples
        ]
        gallery = np.vstack([embed(model, d) for d in gallery_desc])
        hits = 0
        for i in range(n):
            dist = np.sqrt(((gallery - queries[i]) ** 2).sum(axis=1))
            keep = np.arange(n) != i
            dist_i = dist[keep]
            nearest = int(np.argsort(dist_i, kind="stable")[0])
            if writer_arr[keep][nearest] == writer_arr[i]:
                hits += 1
        top1.append(hits / n)
    return {"angle": [float(a) for a in angles], "top1": top1}
