"""Article update files: parsing and pending-file tracking.

Two input formats are accepted and auto-detected by the first
non-whitespace byte: the canonical JSONL format

    {"id": "100001", "title": "...", "abstract": "...",
     "pub_date": "2021-03-04", "citation": "..."}

and a minimal XML subset

    <articles><article><id>100001</id><title>...</title>
    <abstract>...</abstract><pub_date>2021-03-04</pub_date>
    <citation>...</citation></article>...</articles>

Malformed records are skipped and counted; they are only fatal when a
non-empty file yields no records at all.
"""

from __future__ import annotations

import io
import json
import os
import xml.etree.ElementTree as ET
from dataclasses import dataclass, field
from datetime import date
from typing import Iterable, Optional

from .errors import CorpusFormatError


@dataclass(frozen=True)
class ArticleRecord:
    article_id: str
    title: str
    abstract: str
    pub_date: date
    citation: str = ""
    source_file: str = ""
    fetch_date: Optional[date] = None


@dataclass
class UpdateBatch:
    file_name: str
    records: list[ArticleRecord]
    skipped_count: int = 0

    @property
    def record_count(self) -> int:
        return len(self.records)


def parse_pub_date(value: str) -> date:
    """Parse YYYY[-MM[-DD]]; a missing month/day becomes the period start."""
    parts = value.strip().split("-")
    if not 1 <= len(parts) <= 3:
        raise ValueError(f"bad date {value!r}")
    if len(parts[0]) != 4:
        raise ValueError(f"year must be 4 digits in {value!r}")
    year = int(parts[0])
    month = int(parts[1]) if len(parts) > 1 else 1
    day = int(parts[2]) if len(parts) > 2 else 1
    return date(year, month, day)


def _record_from_fields(obj: dict, file_name: str, today: date) -> ArticleRecord:
    article_id = str(obj.get("id") or "").strip()
    title = (obj.get("title") or "").strip()
    if not article_id:
        raise ValueError("missing article id")
    if not title:
        raise ValueError("missing title")
    pub = obj.get("pub_date")
    if not pub:
        raise ValueError("missing pub_date")
    return ArticleRecord(
        article_id=article_id,
        title=title,
        abstract=(obj.get("abstract") or "").strip(),
        pub_date=parse_pub_date(str(pub)),
        citation=(obj.get("citation") or "").strip(),
        source_file=file_name,
        fetch_date=today,
    )


def _parse_jsonl(text: str, file_name: str, today: date) -> UpdateBatch:
    records = []
    skipped = 0
    for line in text.splitlines():
        line = line.strip()
        if not line:
            continue
        try:
            obj = json.loads(line)
            if not isinstance(obj, dict):
                raise ValueError("record is not an object")
            records.append(_record_from_fields(obj, file_name, today))
        except (ValueError, TypeError):
            skipped += 1
    return UpdateBatch(file_name=file_name, records=records, skipped_count=skipped)


def _parse_xml(text: str, file_name: str, today: date) -> UpdateBatch:
    try:
        root = ET.fromstring(text)
    except ET.ParseError as exc:
        raise CorpusFormatError(f"{file_name}: invalid XML: {exc}") from exc
    records = []
    skipped = 0
    for elem in root.iter("article"):
        obj = {child.tag: (child.text or "") for child in elem}
        try:
            records.append(_record_from_fields(obj, file_name, today))
        except (ValueError, TypeError):
            skipped += 1
    return UpdateBatch(file_name=file_name, records=records, skipped_count=skipped)


def parse_article_file(stream, file_name: str, today: date) -> UpdateBatch:
    """Parse one update file (JSONL or XML subset, auto-detected)."""
    data = stream.read()
    if isinstance(data, bytes):
        text = data.decode("utf-8")
    else:
        text = data
    stripped = text.lstrip()
    if not stripped:
        return UpdateBatch(file_name=file_name, records=[])
    if stripped[0] == "<":
        batch = _parse_xml(text, file_name, today)
    else:
        batch = _parse_jsonl(text, file_name, today)
    if not batch.records:
        raise CorpusFormatError(
            f"{file_name}: no well-formed article records "
            f"({batch.skipped_count} malformed)")
    return batch


def emit_jsonl(records: Iterable[ArticleRecord]) -> str:
    """Serialize records back to the canonical JSONL format."""
    lines = []
    for r in records:
        lines.append(json.dumps({
            "id": r.article_id,
            "title": r.title,
            "abstract": r.abstract,
            "pub_date": r.pub_date.isoformat(),
            "citation": r.citation,
        }, ensure_ascii=False, sort_keys=True))
    return "\n".join(lines) + ("\n" if lines else "")


def pending_update_files(directory, processed: set[str]) -> list[str]:
    """File names in ``directory`` not yet in the processed ledger, sorted."""
    names = []
    for name in os.listdir(directory):
        if os.path.isfile(os.path.join(directory, name)) and name not in processed:
            names.append(name)
    return sorted(names)


def read_ledger(path) -> set[str]:
    """Processed-file ledger: one file name per line, append-only."""
    if not os.path.exists(path):
        return set()
    with open(path, "r", encoding="utf-8") as fh:
        return {line.strip() for line in fh if line.strip()}


def append_ledger(path, file_name: str) -> None:
    with open(path, "a", encoding="utf-8") as fh:
        fh.write(file_name + "\n")
        fh.flush()
        os.fsync(fh.fileno())
