"""Command-line surface: extraction, PCA fitting, evaluation, sweeps, synth.

Exit codes: 0 success, 1 usage error, 2 data error.
"""

import argparse
import csv
import datetime
import json
import re
import sys
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from .descriptor import (
    BASELINE_VARIANTS,
    BLOCK_SIZE,
    PageDescriptor,
    build_baseline_descriptor,
    build_descriptor,
)
from .embedding import fit_pca
from .errors import DataError, UsageError
from .evaluation import (
    EvalConfig,
    evaluate_with_model,
    run_l1out,
    run_metric,
    sweep_components,
    sweep_radii,
    sweep_rotation,
)
from .imaging import load_image
from .lbp import RadialConfig
from .manifest import load_manifest
from .store import (
    DescriptorStore,
    read_descriptor_store,
    read_model_store,
    write_descriptor_store,
    write_model_store,
)
from .synthetic import generate_synthetic_corpus, write_corpus


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on bad usage; this tool reserves 2 for
    # data errors, so remap all usage problems to exit code 1.
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)

    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        # Accept comma lists of negative numbers ('-20,-10,0') as values.
        self._negative_number_matcher = re.compile(r"^-\d+(\.\d+)?(,-?\d+(\.\d+)?)*$")


def _parse_radii(text: str) -> tuple:
    text = text.strip()
    try:
        if "-" in text and not text.startswith("-"):
            lo, hi = text.split("-", 1)
            radii = tuple(range(int(lo), int(hi) + 1))
        else:
            radii = tuple(int(tok) for tok in text.split(",") if tok.strip())
    except ValueError:
        raise UsageError(f"cannot parse radii spec {text!r} (use '1-12' or '1,2,4')") from None
    if not radii:
        raise UsageError(f"radii spec {text!r} is empty")
    return radii


def _parse_int_list(text: str) -> tuple:
    try:
        return tuple(int(tok) for tok in text.split(",") if tok.strip())
    except ValueError:
        raise UsageError(f"cannot parse integer list {text!r}") from None


def _parse_float_list(text: str) -> tuple:
    try:
        return tuple(float(tok) for tok in text.split(",") if tok.strip())
    except ValueError:
        raise UsageError(f"cannot parse number list {text!r}") from None


def _parse_threshold(text: str):
    if text == "otsu":
        return None
    if text.startswith("fixed:"):
        try:
            return float(text.split(":", 1)[1])
        except ValueError:
            raise UsageError(f"bad fixed threshold in {text!r}") from None
    raise UsageError(f"--threshold must be 'otsu' or 'fixed:T', got {text!r}")


def _timestamp() -> str:
    return datetime.datetime.now(datetime.timezone.utc).isoformat(timespec="seconds")


# ---------------------------------------------------------------------------
# extract


def _extract_one(task):
    path, baseline, compression, samples, radii, threshold = task
    img = load_image(path)
    if baseline:
        return build_baseline_descriptor(img, baseline, compression).values
    cfg = RadialConfig(samples, radii, threshold)
    return build_descriptor(img, cfg).values


def _cmd_extract(args) -> int:
    if args.baseline is None and args.p != 8:
        raise UsageError("page descriptors use 256-entry blocks; only --p 8 is supported")
    rows = load_manifest(args.manifest)
    radii = _parse_radii(args.radii)
    threshold = _parse_threshold(args.threshold)
    tasks = [
        (str(r.path), args.baseline, args.compression, args.p, radii, threshold)
        for r in rows
    ]
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            vectors = list(pool.map(_extract_one, tasks))
    else:
        vectors = [_extract_one(t) for t in tasks]
    store = DescriptorStore(
        sample_ids=[r.sample_id for r in rows],
        writer_ids=[r.writer_id for r in rows],
        tags=[sorted(r.tags) for r in rows],
        vectors=np.vstack(vectors),
        radii=None if args.baseline else radii,
        block_size=None if args.baseline else BLOCK_SIZE,
        extra={
            "samples_per_radius": args.p,
            "threshold": args.threshold,
            "baseline": args.baseline,
            "compression": args.compression,
        },
    )
    write_descriptor_store(args.out, store)
    print(f"extracted {store.count} descriptors of dim {store.dim} -> {args.out}")
    return 0


# ---------------------------------------------------------------------------
# fit-pca


def _cmd_fit_pca(args) -> int:
    store = read_descriptor_store(args.descriptors)
    model = fit_pca(list(store.vectors), args.components)
    write_model_store(args.out, model, store.sample_ids)
    print(
        f"fitted {model.n_components} components on {store.count} samples "
        f"of dim {store.dim} -> {args.out}"
    )
    return 0


# ---------------------------------------------------------------------------
# evaluate


def _store_descriptors(store: DescriptorStore) -> list:
    radii = store.radii or ()
    block = store.block_size or BLOCK_SIZE
    return [
        PageDescriptor(vec, sid, radii, block)
        for sid, vec in zip(store.sample_ids, store.vectors)
    ]


def _apply_filter(store: DescriptorStore, tag: str) -> DescriptorStore:
    keep = [i for i, tags in enumerate(store.tags) if tag in tags]
    if not keep:
        raise DataError(f"no store rows carry tag {tag!r}")
    return DescriptorStore(
        sample_ids=[store.sample_ids[i] for i in keep],
        writer_ids=[store.writer_ids[i] for i in keep],
        tags=[store.tags[i] for i in keep],
        vectors=store.vectors[keep],
        radii=store.radii,
        block_size=store.block_size,
        extra=store.extra,
    )


def _report_payload(report, rank_depth: int) -> dict:
    return {
        "format": 1,
        "generated_at": _timestamp(),
        "protocol": report.protocol,
        "config": report.config,
        "num_queries": report.num_queries,
        "num_writers": report.num_writers,
        "soft_top": {str(n): v for n, v in report.soft_top.items()},
        "hard_top": {str(n): v for n, v in report.hard_top.items()},
        "hard_excluded": {str(n): v for n, v in report.hard_excluded.items()},
        "rankings_depth": rank_depth,
        "rankings": [
            {
                "query_id": r.query_id,
                "neighbors": [
                    [sid, float(d)]
                    for sid, d in zip(r.sample_ids[:rank_depth], r.distances[:rank_depth])
                ],
            }
            for r in report.rankings
        ],
    }


def _cmd_evaluate(args) -> int:
    store = read_descriptor_store(args.descriptors)
    if args.filter:
        store = _apply_filter(store, args.filter)
    descriptors = _store_descriptors(store)
    writers = dict(zip(store.sample_ids, store.writer_ids))
    cfg = EvalConfig(
        n_components=args.components,
        soft_ns=_parse_int_list(args.soft),
        hard_ns=_parse_int_list(args.hard),
    )
    if args.protocol == "l1out":
        report = run_l1out(descriptors, writers, cfg)
    else:
        if args.pca_model:
            model, train_ids = read_model_store(args.pca_model)
            report = evaluate_with_model(
                descriptors, writers, model, cfg, training_sample_ids=train_ids
            )
        elif args.pca_descriptors:
            pca_store = read_descriptor_store(args.pca_descriptors)
            report = run_metric(descriptors, writers, _store_descriptors(pca_store), cfg)
        else:
            raise UsageError(
                "metric protocol needs --pca-model or --pca-descriptors"
            )
    depth = max((*cfg.soft_ns, *cfg.hard_ns, 10))
    payload = _report_payload(report, depth)
    with open(args.out, "w") as fh:
        json.dump(payload, fh, sort_keys=True, indent=2)
        fh.write("\n")
    for n in cfg.soft_ns:
        print(f"soft top-{n}: {report.soft_top[n]:.4f}")
    for n in cfg.hard_ns:
        print(f"hard top-{n}: {report.hard_top[n]:.4f} "
              f"(excluded {report.hard_excluded[n]})")
    print(f"report -> {args.out}")
    return 0


# ---------------------------------------------------------------------------
# sweep


def _write_curve(path, xs, values, extra=None) -> None:
    extra = extra or {}
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["x", "value", *extra.keys()])
        for i, (x, v) in enumerate(zip(xs, values)):
            writer.writerow([x, v, *[col[i] for col in extra.values()]])


def _load_samples(manifest_path):
    rows = load_manifest(manifest_path)
    return [(r.sample_id, r.writer_id, load_image(r.path)) for r in rows]


def _cmd_sweep(args) -> int:
    cfg = EvalConfig(n_components=args.components)
    if args.kind == "radii":
        samples = _load_samples(args.manifest)
        curves = sweep_radii(samples, args.max_radius, cfg)
        _write_curve(
            args.out,
            curves["radius"],
            curves["cumulative"],
            {
                "individual": curves["individual"],
                "cumulative_uniform": curves["cumulative_uniform"],
            },
        )
    elif args.kind == "components":
        samples = _load_samples(args.manifest)
        rcfg = RadialConfig(args.p, _parse_radii(args.radii), None)
        descriptors = [build_descriptor(img, rcfg, sid) for sid, _, img in samples]
        writers = {sid: wid for sid, wid, _ in samples}
        n_list = _parse_int_list(args.n_list)
        if not n_list:
            raise UsageError("--n-list is empty")
        curves = sweep_components(descriptors, writers, n_list, cfg)
        _write_curve(args.out, curves["n_components"], curves["top1"])
    else:  # rotation
        samples = _load_samples(args.manifest)
        rcfg = RadialConfig(args.p, _parse_radii(args.radii), None)
        angles = _parse_float_list(args.angles)
        if not angles:
            raise UsageError("--angles is empty")
        curves = sweep_rotation(samples, angles, rcfg, cfg)
        _write_curve(args.out, curves["angle"], curves["top1"])
    print(f"curve -> {args.out}")
    return 0


# ---------------------------------------------------------------------------
# synth


def _cmd_synth(args) -> int:
    samples = generate_synthetic_corpus(
        args.writers, args.samples, args.seed, size=args.size, noise_sigma=args.noise
    )
    manifest_path = write_corpus(samples, args.out)
    print(f"wrote {len(samples)} images and {manifest_path}")
    return 0


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="srslbp", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("extract", help="compute page descriptors for a manifest")
    p.add_argument("--manifest", required=True)
    p.add_argument("--radii", default="1-12")
    p.add_argument("--p", type=int, default=8)
    p.add_argument("--threshold", default="otsu")
    p.add_argument("--baseline", choices=BASELINE_VARIANTS, default=None)
    p.add_argument("--compression", choices=("none", "u2", "ri", "riu2"), default="none")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_extract)

    p = sub.add_parser("fit-pca", help="fit a PCA model on a descriptor store")
    p.add_argument("--descriptors", required=True)
    p.add_argument("--components", type=int, default=200)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_fit_pca)

    p = sub.add_parser("evaluate", help="rank and score a descriptor store")
    p.add_argument("--descriptors", required=True)
    p.add_argument("--protocol", choices=("l1out", "metric"), required=True)
    p.add_argument("--pca-model", default=None)
    p.add_argument("--pca-descriptors", default=None)
    p.add_argument("--components", type=int, default=200)
    p.add_argument("--soft", default="1,2,5,10")
    p.add_argument("--hard", default="2,3,4")
    p.add_argument("--filter", default=None, metavar="TAG")
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_evaluate)

    p = sub.add_parser("sweep", help="accuracy curves over radii/components/rotation")
    p.add_argument("--kind", choices=("radii", "components", "rotation"), required=True)
    p.add_argument("--manifest", required=True)
    p.add_argument("--max-radius", type=int, default=12)
    p.add_argument("--n-list", default="10,25,50,100,200")
    p.add_argument("--angles", default="-20,-15,-10,-5,0,5,10,15,20")
    p.add_argument("--radii", default="1-12")
    p.add_argument("--p", type=int, default=8)
    p.add_argument("--components", type=int, default=200)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("synth", help="generate a synthetic stroke-texture corpus")
    p.add_argument("--writers", type=int, required=True)
    p.add_argument("--samples", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--size", type=int, default=192)
    p.add_argument("--noise", type=float, default=6.0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_synth)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except DataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
