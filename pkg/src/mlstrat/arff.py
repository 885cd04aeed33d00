"""ARFF ingestion for MULAN-style multi-label datasets.

Covers the subset of ARFF those datasets use: numeric / nominal / string
attributes, dense CSV rows and sparse ``{index value, ...}`` rows, ``%``
comments and case-insensitive keywords. Label attributes must be nominal over
{0, 1}; everything else is validated and discarded.
"""

from __future__ import annotations

import io
from dataclasses import dataclass
from pathlib import Path
from typing import IO, Iterable, Sequence, Union

from .dataset import MultiLabelDataset
from .errors import ParseError

Source = Union[str, bytes, IO[str], IO[bytes], Path]

_NUMERIC_KINDS = {"numeric", "real", "integer"}


@dataclass(frozen=True)
class ArffAttribute:
    name: str
    kind: str  # "numeric" | "nominal" | "string"
    domain: tuple[str, ...] | None = None  # nominal values, declaration order


@dataclass(frozen=True)
class ArffDocument:
    """A parsed ARFF file: header plus raw (still textual) instance rows.

    Dense rows are value tuples matching the attribute order; sparse rows are
    {attribute index -> value} dicts with unspecified entries meaning "0".
    """

    relation: str
    attributes: tuple[ArffAttribute, ...]
    rows: tuple[Union[tuple[str, ...], dict[int, str]], ...]
    row_lines: tuple[int, ...]  # 1-based source line of each row


def _as_lines(source: Source) -> list[str]:
    if isinstance(source, Path):
        return source.read_text(encoding="utf-8").splitlines()
    if isinstance(source, bytes):
        return source.decode("utf-8").splitlines()
    if isinstance(source, str):
        return source.splitlines()
    data = source.read()
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    return data.splitlines()


def _unquote(token: str) -> str:
    token = token.strip()
    if len(token) >= 2 and token[0] == token[-1] and token[0] in "'\"":
        return token[1:-1]
    return token


def _split_commas(text: str, line: int) -> list[str]:
    """Split on commas outside single/double quotes."""
    parts: list[str] = []
    buf: list[str] = []
    quote: str | None = None
    for ch in text:
        if quote:
            buf.append(ch)
            if ch == quote:
                quote = None
        elif ch in "'\"":
            quote = ch
            buf.append(ch)
        elif ch == ",":
            parts.append("".join(buf))
            buf = []
        else:
            buf.append(ch)
    if quote:
        raise ParseError(f"unterminated quote {quote}", line)
    parts.append("".join(buf))
    return parts


def _parse_attribute(rest: str, line: int) -> ArffAttribute:
    rest = rest.strip()
    if not rest:
        raise ParseError("@attribute without a name", line)
    if rest[0] in "'\"":
        quote = rest[0]
        end = rest.find(quote, 1)
        if end < 0:
            raise ParseError(f"unterminated quote {quote}", line)
        name = rest[1:end]
        spec = rest[end + 1 :].strip()
    else:
        fields = rest.split(None, 1)
        if len(fields) < 2:
            raise ParseError("@attribute needs a name and a type", line)
        name, spec = fields[0], fields[1].strip()
    if not spec:
        raise ParseError(f"attribute {name!r} has no type", line)
    if spec.startswith("{"):
        if not spec.endswith("}"):
            raise ParseError(f"attribute {name!r}: unclosed nominal domain", line)
        values = [_unquote(v) for v in _split_commas(spec[1:-1], line)]
        values = [v.strip() for v in values]
        if any(not v for v in values):
            raise ParseError(f"attribute {name!r}: empty nominal value", line)
        return ArffAttribute(name, "nominal", tuple(values))
    kind = spec.split()[0].lower()
    if kind in _NUMERIC_KINDS:
        return ArffAttribute(name, "numeric")
    if kind == "string":
        return ArffAttribute(name, "string")
    raise ParseError(f"attribute {name!r}: unsupported type {spec!r}", line)


def _check_value(attr: ArffAttribute, value: str, line: int) -> None:
    if value == "?":
        return
    if attr.kind == "numeric":
        try:
            float(value)
        except ValueError:
            raise ParseError(
                f"attribute {attr.name!r}: {value!r} is not numeric", line
            ) from None
    elif attr.kind == "nominal":
        if value not in attr.domain:
            raise ParseError(
                f"attribute {attr.name!r}: {value!r} not in domain {attr.domain}",
                line,
            )


def _parse_sparse_row(
    body: str, attributes: Sequence[ArffAttribute], line: int
) -> dict[int, str]:
    body = body.strip()
    if not body.endswith("}"):
        raise ParseError("sparse row missing closing '}'", line)
    inner = body[1:-1].strip()
    row: dict[int, str] = {}
    if not inner:
        return row
    for chunk in _split_commas(inner, line):
        chunk = chunk.strip()
        if not chunk:
            raise ParseError("empty entry in sparse row", line)
        fields = chunk.split(None, 1)
        if len(fields) != 2:
            raise ParseError(f"sparse entry {chunk!r} is not 'index value'", line)
        try:
            idx = int(fields[0])
        except ValueError:
            raise ParseError(f"sparse index {fields[0]!r} is not an integer", line) from None
        if not 0 <= idx < len(attributes):
            raise ParseError(
                f"sparse index {idx} outside [0, {len(attributes)})", line
            )
        if idx in row:
            raise ParseError(f"sparse index {idx} given twice", line)
        value = _unquote(fields[1])
        _check_value(attributes[idx], value, line)
        row[idx] = value
    return row


def parse_arff_document(source: Source) -> ArffDocument:
    """Parse ARFF text into its header and raw instance rows."""
    relation: str | None = None
    attributes: list[ArffAttribute] = []
    rows: list[Union[tuple[str, ...], dict[int, str]]] = []
    row_lines: list[int] = []
    in_data = False

    for line_no, raw in enumerate(_as_lines(source), start=1):
        stripped = raw.strip()
        if not stripped or stripped.startswith("%"):
            continue
        if not in_data and stripped.startswith("@"):
            keyword = stripped.split(None, 1)[0].lower()
            rest = stripped[len(keyword) :].strip()
            if keyword == "@relation":
                if relation is not None:
                    raise ParseError("duplicate @relation", line_no)
                if not rest:
                    raise ParseError("@relation without a name", line_no)
                relation = _unquote(rest)
            elif keyword == "@attribute":
                attributes.append(_parse_attribute(rest, line_no))
            elif keyword == "@data":
                if relation is None:
                    raise ParseError("@data before @relation", line_no)
                if not attributes:
                    raise ParseError("@data with no attributes declared", line_no)
                in_data = True
            else:
                raise ParseError(f"unknown keyword {keyword!r}", line_no)
            continue
        if not in_data:
            raise ParseError(f"unexpected content before @data: {stripped!r}", line_no)
        if stripped.startswith("{"):
            rows.append(_parse_sparse_row(stripped, attributes, line_no))
        else:
            values = [_unquote(v) for v in _split_commas(stripped, line_no)]
            if len(values) != len(attributes):
                raise ParseError(
                    f"row has {len(values)} values for {len(attributes)} attributes",
                    line_no,
                )
            for attr, value in zip(attributes, values):
                _check_value(attr, value, line_no)
            rows.append(tuple(values))
        row_lines.append(line_no)

    if relation is None:
        raise ParseError("no @relation header found")
    if not in_data:
        raise ParseError("no @data section found")
    return ArffDocument(relation, tuple(attributes), tuple(rows), tuple(row_lines))


def _label_indices(
    attributes: Sequence[ArffAttribute],
    label_count: int,
    labels_at_end: bool,
    label_names: Iterable[str] | None,
) -> list[int]:
    if label_names is not None:
        wanted = list(label_names)
        by_name: dict[str, int] = {}
        for idx, attr in enumerate(attributes):
            by_name.setdefault(attr.name, idx)
        missing = [name for name in wanted if name not in by_name]
        if missing:
            raise ParseError(f"label attributes not found: {missing}")
        return sorted(by_name[name] for name in wanted)
    if label_count < 1:
        raise ParseError(f"label_count must be >= 1, got {label_count}")
    if label_count > len(attributes):
        raise ParseError(
            f"label_count {label_count} exceeds {len(attributes)} attributes"
        )
    if labels_at_end:
        return list(range(len(attributes) - label_count, len(attributes)))
    return list(range(label_count))


def parse_arff(
    source: Source,
    label_count: int,
    labels_at_end: bool = True,
    *,
    label_names: Iterable[str] | None = None,
) -> MultiLabelDataset:
    """Extract the binary label space of a MULAN-style ARFF file.

    The label attributes are the last (or first, with `labels_at_end=False`)
    `label_count` attributes, or the ones named in `label_names`. They must be
    nominal over {0, 1}; feature values are validated against their declared
    types and then dropped.
    """
    doc = parse_arff_document(source)
    indices = _label_indices(doc.attributes, label_count, labels_at_end, label_names)
    for idx in indices:
        attr = doc.attributes[idx]
        if attr.kind != "nominal" or set(attr.domain) != {"0", "1"}:
            raise ParseError(
                f"label attribute {attr.name!r} must be nominal over {{0,1}}, "
                f"got {attr.kind} {attr.domain or ''}"
            )
    position = {attr_idx: j for j, attr_idx in enumerate(indices)}

    labels_of: list[list[int]] = []
    for row, line in zip(doc.rows, doc.row_lines):
        labels: list[int] = []
        for attr_idx, j in position.items():
            if isinstance(row, dict):
                value = row.get(attr_idx, "0")
            else:
                value = row[attr_idx]
            if value == "1":
                labels.append(j)
            elif value != "0":
                raise ParseError(
                    f"label attribute {doc.attributes[attr_idx].name!r} "
                    f"has non-binary value {value!r}",
                    line,
                )
        labels_of.append(sorted(labels))
    return MultiLabelDataset(len(indices), labels_of)


def load_arff(
    path: str | Path,
    label_count: int,
    labels_at_end: bool = True,
    *,
    label_names: Iterable[str] | None = None,
) -> MultiLabelDataset:
    """:func:`parse_arff` for a file on disk."""
    with io.open(path, "r", encoding="utf-8") as handle:
        return parse_arff(
            handle, label_count, labels_at_end, label_names=label_names
        )
