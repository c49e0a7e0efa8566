"""Loading, validation, deduplication and link partitioning of captured frames."""
from __future__ import annotations

import enum
import hashlib
import json
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator, Sequence

log = logging.getLogger(__name__)

DEFAULT_DEDUP_WINDOW_S = 30.0
MAX_MALFORMED_FRACTION = 0.5
FREQ_RANGE_MHZ = (0.1, 10000.0)


class Link(str, enum.Enum):
    VHF_POA = "VHF_POA"
    VDLM2 = "VDLM2"
    SATCOM_UPLINK = "SATCOM_UPLINK"
    SATCOM_DOWNLINK = "SATCOM_DOWNLINK"
    HF = "HF"

    @property
    def is_satcom(self) -> bool:
        return self in (Link.SATCOM_UPLINK, Link.SATCOM_DOWNLINK)


class Direction(str, enum.Enum):
    UPLINK = "uplink"
    DOWNLINK = "downlink"
    UNKNOWN = "unknown"


class IngestError(Exception):
    pass


class CorpusIOError(IngestError):
    pass


class CorpusRejected(IngestError):
    """More than half the non-blank lines of a corpus file were malformed."""

    def __init__(self, path, first_bad_line, reason, malformed, total):
        self.path = str(path)
        self.first_bad_line = first_bad_line
        self.reason = reason
        self.malformed = malformed
        self.total = total
        super().__init__(
            f"{self.path}: corpus rejected, {malformed}/{total} lines malformed "
            f"(first bad line {first_bad_line}: {reason})"
        )


@dataclass(frozen=True)
class AcarsRecord:
    record_id: str
    timestamp: float
    link: Link
    raw_frame: str
    frequency_mhz: float | None = None
    direction: Direction = Direction.UNKNOWN
    capture_errors: int = 0

    def __post_init__(self):
        validate_record(self)

    @property
    def flagged(self) -> bool:
        """HF is accepted but outside the collection scope; damaged frames too."""
        return self.link is Link.HF or self.capture_errors > 0


def validate_record(rec: AcarsRecord) -> None:
    if not isinstance(rec.record_id, str) or not rec.record_id:
        raise ValueError("record_id must be a non-empty string")
    if not isinstance(rec.link, Link):
        raise ValueError(f"link must be a Link, got {rec.link!r}")
    if not isinstance(rec.direction, Direction):
        raise ValueError(f"direction must be a Direction, got {rec.direction!r}")
    ts = rec.timestamp
    if isinstance(ts, bool) or not isinstance(ts, (int, float)) or not math.isfinite(ts) or ts <= 0:
        raise ValueError(f"timestamp must be a positive number, got {ts!r}")
    f = rec.frequency_mhz
    if f is not None:
        if isinstance(f, bool) or not isinstance(f, (int, float)) or not math.isfinite(f):
            raise ValueError(f"frequency must be numeric, got {f!r}")
        lo, hi = FREQ_RANGE_MHZ
        if not lo <= f <= hi:
            raise ValueError(f"frequency {f} MHz outside [{lo}, {hi}]")
    if not isinstance(rec.raw_frame, str):
        raise ValueError("frame must be a string")
    if isinstance(rec.capture_errors, bool) or not isinstance(rec.capture_errors, int) or rec.capture_errors < 0:
        raise ValueError(f"capture error count must be a non-negative integer, got {rec.capture_errors!r}")


@dataclass
class LoadSummary:
    path: str
    records: int = 0
    skipped: int = 0
    blank: int = 0
    flagged: int = 0
    skipped_lines: list = field(default_factory=list)  # (line_no, reason)

    def __str__(self):
        return (f"{self.path}: {self.records} records, {self.skipped} skipped, "
                f"{self.flagged} flagged")


class Corpus(Sequence):
    """Records loaded from one file, plus the load summary."""

    def __init__(self, records: list[AcarsRecord], summary: LoadSummary):
        self.records = records
        self.summary = summary

    def __getitem__(self, i):
        return self.records[i]

    def __len__(self):
        return len(self.records)

    def __repr__(self):
        return f"Corpus({self.summary})"


def _parse_jsonl_line(line: str, record_id: str) -> AcarsRecord:
    try:
        obj = json.loads(line)
    except json.JSONDecodeError as exc:
        raise ValueError(f"invalid JSON ({exc.msg})") from None
    if not isinstance(obj, dict):
        raise ValueError("line is not a JSON object")
    for key in ("ts", "link", "frame"):
        if key not in obj:
            raise ValueError(f"missing field {key!r}")
    try:
        link = Link(obj["link"])
    except ValueError:
        raise ValueError(f"unknown link {obj['link']!r}") from None
    try:
        direction = Direction(obj.get("dir") or "unknown")
    except ValueError:
        raise ValueError(f"unknown direction {obj.get('dir')!r}") from None
    rid = obj.get("id", record_id)
    return AcarsRecord(
        record_id=str(rid),
        timestamp=obj["ts"],
        link=link,
        raw_frame=obj["frame"],
        frequency_mhz=obj.get("freq"),
        direction=direction,
        capture_errors=obj.get("err", 0),
    )


def _parse_rawlog_line(line: str, record_id: str, link: Link) -> AcarsRecord:
    head, sep, frame = line.partition(" : ")
    if not sep:
        raise ValueError("missing ' : ' separator")
    parts = head.split()
    if len(parts) != 2:
        raise ValueError("expected '<epoch-seconds> <freq-mhz>' before ':'")
    try:
        ts = float(parts[0])
        freq = float(parts[1])
    except ValueError:
        raise ValueError("non-numeric timestamp or frequency") from None
    return AcarsRecord(record_id=record_id, timestamp=ts, link=link, raw_frame=frame,
                       frequency_mhz=freq)


def load_corpus(path, format: str = "jsonl", *, link: Link = Link.VHF_POA) -> Corpus:
    """Load one corpus file in file order.

    ``link`` only applies to ``rawlog`` input, which carries no link field.
    Malformed lines are skipped and counted in ``Corpus.summary``; if more
    than half of the non-blank lines are malformed the whole file is
    rejected with :class:`CorpusRejected`.
    """
    path = Path(path)
    if format not in ("jsonl", "rawlog"):
        raise ValueError(f"unknown corpus format {format!r}")
    try:
        text = path.read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise CorpusIOError(f"{path}: cannot read corpus ({exc})") from exc

    summary = LoadSummary(path=str(path))
    records: list[AcarsRecord] = []
    seen_ids: set[str] = set()
    stem = path.stem
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.rstrip("\r")
        if not line.strip():
            summary.blank += 1
            continue
        rid = f"{stem}:{lineno}"
        try:
            if format == "jsonl":
                rec = _parse_jsonl_line(line, rid)
            else:
                rec = _parse_rawlog_line(line, rid, link)
            if rec.record_id in seen_ids:
                raise ValueError(f"duplicate record id {rec.record_id!r}")
        except (ValueError, TypeError) as exc:
            summary.skipped += 1
            summary.skipped_lines.append((lineno, str(exc)))
            log.debug("%s:%d skipped: %s", path, lineno, exc)
            continue
        seen_ids.add(rec.record_id)
        records.append(rec)
        if rec.flagged:
            summary.flagged += 1

    summary.records = len(records)
    total = summary.records + summary.skipped
    if total and summary.skipped / total > MAX_MALFORMED_FRACTION:
        first, reason = summary.skipped_lines[0]
        raise CorpusRejected(path, first, reason, summary.skipped, total)
    return Corpus(records, summary)


def load_many(specs: Iterable[tuple[str, str]]) -> tuple[list[AcarsRecord], list[LoadSummary]]:
    """Load several ``(path, format)`` files and merge them by timestamp (stable)."""
    merged: list[AcarsRecord] = []
    summaries = []
    for path, fmt in specs:
        corpus = load_corpus(path, fmt)
        merged.extend(corpus.records)
        summaries.append(corpus.summary)
    merged.sort(key=lambda r: r.timestamp)
    return merged, summaries


def _dedup_key(rec: AcarsRecord) -> tuple:
    # Imported here: frames depends on this module for AcarsRecord.
    from .frames import ParseFailure, parse_frame

    try:
        msg = parse_frame(rec)
    except ParseFailure:
        return ("raw", hashlib.sha256(rec.raw_frame.encode("utf-8", "surrogatepass")).hexdigest())
    text_hash = hashlib.sha256(msg.text.encode("utf-8", "surrogatepass")).hexdigest()
    return ("msg", msg.registration, msg.label, msg.msg_no, text_hash)


def dedupe(records: Iterable[AcarsRecord], window_s: float = DEFAULT_DEDUP_WINDOW_S) -> list[AcarsRecord]:
    """Drop records repeating an earlier survivor's key within ``window_s`` seconds.

    The key is (registration, label, message number, text hash). Comparing
    against survivors only keeps the operation idempotent and lets a
    periodically repeated frame reappear once per window.
    """
    if window_s < 0:
        raise ValueError("window_s must be >= 0")
    last_kept: dict[tuple, float] = {}
    out = []
    for rec in records:
        key = _dedup_key(rec)
        prev = last_kept.get(key)
        if prev is not None and abs(rec.timestamp - prev) <= window_s:
            continue
        last_kept[key] = rec.timestamp
        out.append(rec)
    return out


def partition_by_link(records: Iterable[AcarsRecord]) -> dict[Link, list[AcarsRecord]]:
    buckets: dict[Link, list[AcarsRecord]] = {}
    for rec in records:
        buckets.setdefault(rec.link, []).append(rec)
    return buckets


def link_shares(counts: dict[Link, int]) -> dict[Link, float]:
    """Percentage share of each link (unrounded)."""
    total = sum(counts.values())
    if total == 0:
        return {k: 0.0 for k in counts}
    return {k: 100.0 * v / total for k, v in counts.items()}


def iter_records(corpora: Iterable[Corpus]) -> Iterator[AcarsRecord]:
    for c in corpora:
        yield from c.records
