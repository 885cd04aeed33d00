"""Canonical sparse label format, fold JSON serialization and path helpers.

The canonical text format is a header line ``n_samples n_labels`` followed by
one line per sample holding its label indices (blank line = no labels). Fold
files are single JSON objects with fixed key order so that equal assignments
serialize to identical bytes.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import IO, Union

from .arff import Source, _as_lines, load_arff
from .dataset import FoldAssignment, MultiLabelDataset
from .errors import FoldValidationError, ParseError


def parse_canonical(source: Source) -> MultiLabelDataset:
    """Parse the canonical sparse label format."""
    lines = _as_lines(source)
    if not lines:
        raise ParseError("empty input, expected 'n_samples n_labels' header")
    header = lines[0].split()
    if len(header) != 2:
        raise ParseError(f"header must be 'n_samples n_labels', got {lines[0]!r}", 1)
    try:
        n_samples, n_labels = int(header[0]), int(header[1])
    except ValueError:
        raise ParseError(f"non-integer header fields in {lines[0]!r}", 1) from None
    if n_samples < 0 or n_labels < 0:
        raise ParseError("header counts must be nonnegative", 1)
    body = lines[1:]
    if len(body) != n_samples:
        raise ParseError(
            f"expected {n_samples} sample lines, found {len(body)}"
        )
    labels_of = []
    for offset, line in enumerate(body):
        line_no = offset + 2
        labels = []
        for token in line.split():
            try:
                idx = int(token)
            except ValueError:
                raise ParseError(f"non-integer label token {token!r}", line_no) from None
            if not 0 <= idx < n_labels:
                raise ParseError(f"label {idx} outside [0, {n_labels})", line_no)
            labels.append(idx)
        if len(set(labels)) != len(labels):
            raise ParseError(f"duplicate label in {line!r}", line_no)
        labels_of.append(sorted(labels))
    return MultiLabelDataset(n_labels, labels_of)


def write_canonical(d: MultiLabelDataset) -> str:
    """Serialize to the canonical format (newline-terminated)."""
    lines = [f"{d.n_samples} {d.n_labels}"]
    lines.extend(" ".join(str(i) for i in labels) for labels in d.labels_of)
    return "\n".join(lines) + "\n"


def folds_to_json(a: FoldAssignment) -> str:
    """Fold JSON with fixed key order and ascending sample lists."""
    payload = {
        "method": a.method,
        "seed": a.seed,
        "k": a.k,
        "proportions": list(a.proportions),
        "folds": a.folds(),
    }
    return json.dumps(payload, indent=2) + "\n"


def write_folds(a: FoldAssignment, sink: Union[str, Path, IO[str]]) -> None:
    """Write the fold JSON to a path or text stream (UTF-8)."""
    text = folds_to_json(a)
    if isinstance(sink, (str, Path)):
        Path(sink).write_text(text, encoding="utf-8")
    else:
        sink.write(text)


def folds_from_json(text: str) -> FoldAssignment:
    """Parse and validate fold JSON; the folds must partition 0..n-1."""
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"malformed fold JSON: {exc}") from None
    if not isinstance(payload, dict):
        raise ParseError("fold JSON must be a single object")
    missing = {"method", "seed", "k", "proportions", "folds"} - set(payload)
    if missing:
        raise ParseError(f"fold JSON missing keys: {sorted(missing)}")
    method = payload["method"]
    seed = payload["seed"]
    k = payload["k"]
    proportions = payload["proportions"]
    folds = payload["folds"]
    if not isinstance(method, str):
        raise ParseError("'method' must be a string")
    if not isinstance(seed, int) or isinstance(seed, bool) or seed < 0:
        raise ParseError("'seed' must be a nonnegative integer")
    if not isinstance(k, int) or isinstance(k, bool):
        raise ParseError("'k' must be an integer")
    if not isinstance(folds, list) or not isinstance(proportions, list):
        raise ParseError("'folds' and 'proportions' must be lists")
    if len(folds) != k:
        raise FoldValidationError(f"{len(folds)} folds listed for k={k}")

    seen: dict[int, int] = {}
    for j, members in enumerate(folds):
        if not isinstance(members, list):
            raise ParseError(f"fold {j} is not a list")
        for x in members:
            if not isinstance(x, int) or isinstance(x, bool) or x < 0:
                raise ParseError(f"fold {j} holds non-index value {x!r}")
            if x in seen:
                raise FoldValidationError(
                    f"sample {x} appears in folds {seen[x]} and {j}"
                )
            seen[x] = j
    n = len(seen)
    gaps = [x for x in range(n) if x not in seen]
    if gaps:
        raise FoldValidationError(
            f"folds do not cover samples {gaps[:5]} (n inferred as {n})"
        )
    fold_of = [0] * n
    for x, j in seen.items():
        fold_of[x] = j
    try:
        return FoldAssignment(
            k, tuple(fold_of), method, seed, tuple(float(p) for p in proportions)
        )
    except (TypeError, ValueError) as exc:
        raise FoldValidationError(str(exc)) from None


def read_folds(source: Union[str, Path, IO[str]]) -> FoldAssignment:
    """Read fold JSON from a path or text stream."""
    if isinstance(source, (str, Path)):
        text = Path(source).read_text(encoding="utf-8")
    else:
        text = source.read()
    return folds_from_json(text)


def read_dataset(
    path: str | Path,
    fmt: str,
    *,
    label_count: int | None = None,
    labels_at_end: bool = True,
    label_names: list[str] | None = None,
) -> MultiLabelDataset:
    """Load a dataset by format name ("arff" or "canonical")."""
    if fmt == "arff":
        if label_count is None and label_names is None:
            raise ParseError("ARFF input needs a label count or label names")
        return load_arff(
            path, label_count or 0, labels_at_end, label_names=label_names
        )
    if fmt == "canonical":
        return parse_canonical(Path(path).read_text(encoding="utf-8"))
    raise ParseError(f"unknown dataset format {fmt!r}")
