"""Dataset manifests: one CSV row per page image.

Format: header ``sample_id,writer_id,path`` with an optional fourth
``tags`` column holding semicolon- or space-separated tokens such as
``language=greek``.  Paths are resolved relative to the manifest's
directory.
"""

import csv
from dataclasses import dataclass
from pathlib import Path

from .errors import ManifestError

_REQUIRED = ("sample_id", "writer_id", "path")


@dataclass(frozen=True)
class ManifestRow:
    sample_id: str
    writer_id: str
    path: Path
    tags: frozenset
    line: int


def _split_tags(raw: str) -> frozenset:
    return frozenset(raw.replace(";", " ").split())


def load_manifest(path, check_files: bool = True) -> list:
    """Parse and validate a manifest CSV; errors carry line numbers."""
    path = Path(path)
    base = path.parent
    try:
        fh = open(path, newline="")
    except OSError as exc:
        raise ManifestError(f"cannot open manifest {path}: {exc}") from exc
    with fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ManifestError(f"{path}: manifest is empty") from None
        header = [h.strip() for h in header]
        if tuple(header[:3]) != _REQUIRED or len(header) > 4 or (
            len(header) == 4 and header[3] != "tags"
        ):
            raise ManifestError(
                f"{path}: line 1: header must be 'sample_id,writer_id,path[,tags]', "
                f"got {','.join(header)!r}"
            )
        width = len(header)
        rows = []
        seen = {}
        for line_no, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) < 3 or len(row) > width:
                raise ManifestError(
                    f"{path}: line {line_no}: expected {width} fields, got {len(row)}"
                )
            sample_id, writer_id, rel = (f.strip() for f in row[:3])
            if not sample_id or not writer_id or not rel:
                raise ManifestError(f"{path}: line {line_no}: empty required field")
            if sample_id in seen:
                raise ManifestError(
                    f"{path}: line {line_no}: duplicate sample_id {sample_id!r} "
                    f"(first seen on line {seen[sample_id]})"
                )
            seen[sample_id] = line_no
            img_path = (base / rel).resolve() if not Path(rel).is_absolute() else Path(rel)
            if check_files and not img_path.is_file():
                raise ManifestError(
                    f"{path}: line {line_no}: image file not found: {img_path}"
                )
            tags = _split_tags(row[3]) if len(row) == 4 else frozenset()
            rows.append(ManifestRow(sample_id, writer_id, img_path, tags, line_no))
    if not rows:
        raise ManifestError(f"{path}: manifest has no data rows")
    return rows


def filter_by_tag(rows, tag: str) -> list:
    """Keep only rows carrying the given tag token (e.g. 'language=greek')."""
    return [r for r in rows if tag in r.tags]
