"""Loading documents and CVE feeds, and writing classification results."""
from __future__ import annotations

import datetime as dt
import json
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Optional, Sequence

from .errors import FormatError, IngestError

__all__ = [
    "Document",
    "CveEntry",
    "CVE_ID_PATTERN",
    "load_jsonl",
    "load_cve_feed",
    "filter_by_date",
    "write_results",
    "read_results",
    "write_jsonl",
]

POSITIVE = "positive"
NEGATIVE = "negative"
NORMAL = "normal"
ANOMALOUS = "anomalous"

CVE_ID_PATTERN = re.compile(r"CVE-\d{4}-\d{4,}")
_PLACEHOLDER_PREFIXES = ("** RESERVED **", "** REJECT **")


@dataclass(frozen=True)
class Document:
    id: str
    text: str
    label: Optional[str] = None
    timestamp: Optional[dt.date] = None
    source: Optional[str] = None


@dataclass(frozen=True)
class CveEntry:
    cve_id: str
    description: str
    published: dt.date

    def __post_init__(self):
        if not CVE_ID_PATTERN.fullmatch(self.cve_id):
            raise FormatError(f"invalid CVE identifier: {self.cve_id!r}")


def _parse_date(value, where: str) -> dt.date:
    if isinstance(value, dt.date):
        return value
    if not isinstance(value, str):
        raise FormatError(f"{where}: expected a date string, got {value!r}")
    try:
        # NVD timestamps look like 2018-01-29T17:29Z; only the calendar date matters.
        return dt.date.fromisoformat(value[:10])
    except ValueError:
        raise FormatError(f"{where}: invalid date {value!r}") from None


def _iter_json_lines(path: Path):
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise FormatError(f"line {lineno}: invalid JSON ({exc.msg})") from None
            if not isinstance(obj, dict):
                raise FormatError(f"line {lineno}: expected a JSON object")
            yield lineno, obj


def load_jsonl(path: str | Path) -> list[Document]:
    """Read a document corpus from JSONL, one object per line.

    Each object needs ``id`` and ``text``; ``label`` (positive/negative),
    ``timestamp`` (YYYY-MM-DD) and ``source`` are optional. Other fields
    are ignored.
    """
    docs = []
    seen = set()
    for lineno, obj in _iter_json_lines(Path(path)):
        for field in ("id", "text"):
            if field not in obj:
                raise IngestError(f"line {lineno}: missing field {field}")
        doc_id, text = obj["id"], obj["text"]
        if not isinstance(doc_id, str) or not doc_id:
            raise IngestError(f"line {lineno}: id must be a non-empty string")
        if not isinstance(text, str):
            raise IngestError(f"line {lineno}: text must be a string")
        if doc_id in seen:
            raise IngestError(f"line {lineno}: duplicate id {doc_id!r}")
        seen.add(doc_id)

        label = obj.get("label")
        if label is not None and label not in (POSITIVE, NEGATIVE):
            raise IngestError(f"line {lineno}: label must be 'positive' or 'negative', got {label!r}")
        ts = obj.get("timestamp")
        if ts is not None:
            ts = _parse_date(ts, f"line {lineno}")
        docs.append(Document(doc_id, text, label, ts, obj.get("source")))
    return docs


def _is_placeholder(description: str) -> bool:
    d = description.strip()
    return not d or d.startswith(_PLACEHOLDER_PREFIXES)


def _make_entry(cve_id, description, published, where) -> CveEntry:
    if not isinstance(cve_id, str) or not CVE_ID_PATTERN.fullmatch(cve_id):
        raise FormatError(f"{where}: invalid CVE identifier {cve_id!r}")
    return CveEntry(cve_id, description, _parse_date(published, f"{where} ({cve_id})"))


def _english_description(descriptions) -> str:
    for d in descriptions or ():
        if str(d.get("lang", "")).lower().startswith("en"):
            return d.get("value", "") or ""
    return ""


def _nvd_records(data):
    """Yield (cve_id, description, published) from an NVD JSON document.

    Both the 1.1 data feeds (``CVE_Items``) and the 2.0 API layout
    (``vulnerabilities``) are understood.
    """
    if "CVE_Items" in data:
        for item in data["CVE_Items"]:
            cve = item.get("cve", {})
            cve_id = cve.get("CVE_data_meta", {}).get("ID")
            desc = _english_description(cve.get("description", {}).get("description_data"))
            yield cve_id, desc, item.get("publishedDate")
    elif "vulnerabilities" in data:
        for item in data["vulnerabilities"]:
            cve = item.get("cve", {})
            yield cve.get("id"), _english_description(cve.get("descriptions")), cve.get("published")
    else:
        raise FormatError("NVD JSON: expected a 'CVE_Items' or 'vulnerabilities' array")


def load_cve_feed(path: str | Path, format: str = "jsonl") -> tuple[list[CveEntry], int]:
    """Load CVE entries from an NVD JSON feed or a CVE JSONL file.

    Returns ``(entries, dropped)`` where ``dropped`` counts entries whose
    description was empty or a ``** RESERVED **``/``** REJECT **`` placeholder.
    """
    path = Path(path)
    if format == "jsonl":
        records = []
        for lineno, obj in _iter_json_lines(path):
            for field in ("cve_id", "description", "published"):
                if field not in obj:
                    raise FormatError(f"line {lineno}: missing field {field}")
            records.append((f"line {lineno}", obj["cve_id"], obj["description"], obj["published"]))
    elif format == "nvd-json":
        with open(path, encoding="utf-8") as fh:
            try:
                data = json.load(fh)
            except json.JSONDecodeError as exc:
                raise FormatError(f"{path}: invalid JSON ({exc.msg})") from None
        if not isinstance(data, dict):
            raise FormatError(f"{path}: expected a JSON object")
        records = [(f"item {i}", *rec) for i, rec in enumerate(_nvd_records(data))]
    else:
        raise ValueError(f"unknown CVE feed format {format!r} (expected 'nvd-json' or 'jsonl')")

    entries, dropped = [], 0
    for where, cve_id, description, published in records:
        description = description if isinstance(description, str) else ""
        entry = _make_entry(cve_id, description, published, where)
        if _is_placeholder(description):
            dropped += 1
            continue
        entries.append(entry)
    return entries, dropped


def filter_by_date(entries: Sequence[CveEntry], start: dt.date, end: dt.date) -> list[CveEntry]:
    """Keep entries published within ``[start, end]`` (inclusive), in order."""
    if start > end:
        raise ValueError(f"empty date range: {start} > {end}")
    return [e for e in entries if start <= e.published <= end]


def write_jsonl(records: Iterable[dict], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for rec in records:
            fh.write(json.dumps(rec, ensure_ascii=False))
            fh.write("\n")


def write_results(results: Iterable[tuple], path: str | Path) -> None:
    """Write ``(document, verdict, score)`` triples as results JSONL."""
    def records():
        for doc, verdict, score in results:
            if verdict not in (NORMAL, ANOMALOUS):
                raise ValueError(f"verdict must be 'normal' or 'anomalous', got {verdict!r}")
            doc_id = doc.id if isinstance(doc, Document) else doc
            yield {"id": doc_id, "verdict": verdict, "score": float(score)}

    write_jsonl(records(), path)


def read_results(path: str | Path) -> list[tuple[str, str, float]]:
    """Parse a results JSONL file back into ``(id, verdict, score)`` triples."""
    out = []
    for lineno, obj in _iter_json_lines(Path(path)):
        try:
            triple = (obj["id"], obj["verdict"], float(obj["score"]))
        except KeyError as exc:
            raise FormatError(f"line {lineno}: missing field {exc.args[0]}") from None
        if triple[1] not in (NORMAL, ANOMALOUS):
            raise FormatError(f"line {lineno}: unknown verdict {triple[1]!r}")
        out.append(triple)
    return out
