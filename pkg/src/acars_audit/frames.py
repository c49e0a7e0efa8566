"""ACARS frame parsing, serialization and label-to-service lookup.

Frame layout (over-the-air order, as text; the SOH/STX/ETX control bytes are
not part of captured frame text)::

    offset  width  field
    0       1      mode
    1       7      registration, left-padded with '.'
    8       1      technical acknowledgement
    9       2      label
    11      1      block id (' ' when absent)
    12      4      message number   } downlink blocks only (block id 0-9)
    16      6      flight id        } flight id right-padded with spaces
    22/12   ...    text

Uplink blocks (block id A-Z, a-z) and frames without a block id carry no
message number or flight id; the text starts at offset 12.
"""
from __future__ import annotations

import csv
import enum
import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Iterable

from .ingest import AcarsRecord

REG_WIDTH = 7
FLIGHT_WIDTH = 6
HEADER_LEN = 12
DOWNLINK_HEADER_LEN = HEADER_LEN + 4 + FLIGHT_WIDTH

_REG_RE = re.compile(r"[A-Z0-9-]{1,7}")
_LABEL_RE = re.compile(r"[A-Za-z0-9_]{2}")
_MSG_NO_RE = re.compile(r"[A-Z][0-9]{2}[A-Z0-9]")
_FLIGHT_RE = re.compile(r"[A-Z0-9]{1,6}")


def _printable(ch: str) -> bool:
    return "!" <= ch <= "~"


class ParseFailure(ValueError):
    """Frame text could not be parsed; ``reason`` is a short machine tag."""

    def __init__(self, reason: str, position: int, detail: str = "", record_id: str | None = None):
        self.reason = reason
        self.position = position
        self.record_id = record_id
        msg = f"{reason} at offset {position}"
        if detail:
            msg += f": {detail}"
        super().__init__(msg)


@dataclass(frozen=True)
class AcarsMessage:
    mode: str
    registration: str
    tech_ack: str
    label: str
    block_id: str | None = None
    msg_no: str | None = None
    flight_id: str | None = None
    text: str = ""
    source: AcarsRecord | None = field(default=None, compare=False, repr=False)

    @property
    def is_downlink_block(self) -> bool:
        return self.block_id is not None and self.block_id.isdigit()


def validate_message(m: AcarsMessage) -> None:
    """Raise ValueError if ``m`` cannot be serialized to a frame."""
    if len(m.mode) != 1 or not _printable(m.mode):
        raise ValueError(f"mode must be one printable character, got {m.mode!r}")
    if not _REG_RE.fullmatch(m.registration or ""):
        raise ValueError(f"bad registration {m.registration!r}")
    if len(m.tech_ack) != 1 or not _printable(m.tech_ack):
        raise ValueError(f"ack must be one printable character, got {m.tech_ack!r}")
    if not _LABEL_RE.fullmatch(m.label or ""):
        raise ValueError(f"bad label {m.label!r}")
    if m.block_id is not None and (len(m.block_id) != 1 or not m.block_id.isascii() or not m.block_id.isalnum()):
        raise ValueError(f"bad block id {m.block_id!r}")
    if m.is_downlink_block:
        if m.msg_no is None or not _MSG_NO_RE.fullmatch(m.msg_no):
            raise ValueError(f"downlink block needs a message number, got {m.msg_no!r}")
        if m.flight_id is not None and not _FLIGHT_RE.fullmatch(m.flight_id):
            raise ValueError(f"bad flight id {m.flight_id!r}")
    elif m.msg_no is not None or m.flight_id is not None:
        raise ValueError("message number / flight id only allowed on downlink blocks (block id 0-9)")


def serialize_frame(m: AcarsMessage) -> str:
    validate_message(m)
    parts = [m.mode, m.registration.rjust(REG_WIDTH, "."), m.tech_ack, m.label,
             m.block_id if m.block_id is not None else " "]
    if m.is_downlink_block:
        parts.append(m.msg_no)
        parts.append((m.flight_id or "").ljust(FLIGHT_WIDTH))
    parts.append(m.text)
    return "".join(parts)


def parse_text(frame: str, source: AcarsRecord | None = None) -> AcarsMessage:
    """Parse frame text. Raises :class:`ParseFailure`."""
    rid = source.record_id if source is not None else None

    def fail(reason, pos, detail=""):
        return ParseFailure(reason, pos, detail, rid)

    if not isinstance(frame, str):
        raise fail("not_text", 0)
    if len(frame) < HEADER_LEN - 1:
        raise fail("too_short", len(frame), f"need at least {HEADER_LEN - 1} characters")
    mode = frame[0]
    if not _printable(mode):
        raise fail("bad_mode", 0)
    reg = frame[1:1 + REG_WIDTH].lstrip(".")
    if not _REG_RE.fullmatch(reg):
        raise fail("bad_registration", 1, repr(frame[1:1 + REG_WIDTH]))
    ack = frame[8]
    if not _printable(ack):
        raise fail("bad_ack", 8)
    label = frame[9:11]
    if not _LABEL_RE.fullmatch(label):
        raise fail("bad_label", 9, repr(label))
    if len(frame) == HEADER_LEN - 1:
        return AcarsMessage(mode, reg, ack, label, source=source)
    blk = frame[11]
    if blk == " ":
        return AcarsMessage(mode, reg, ack, label, None, text=frame[12:], source=source)
    if not (blk.isascii() and blk.isalnum()):
        raise fail("bad_block_id", 11, repr(blk))
    if not blk.isdigit():
        return AcarsMessage(mode, reg, ack, label, blk, text=frame[12:], source=source)
    if len(frame) < DOWNLINK_HEADER_LEN:
        raise fail("too_short", len(frame), "downlink header truncated")
    msg_no = frame[12:16]
    if not _MSG_NO_RE.fullmatch(msg_no):
        raise fail("bad_msg_no", 12, repr(msg_no))
    raw_flight = frame[16:22]
    flight = raw_flight.rstrip(" ")
    if flight and not _FLIGHT_RE.fullmatch(flight):
        raise fail("bad_flight_id", 16, repr(raw_flight))
    return AcarsMessage(mode, reg, ack, label, blk, msg_no, flight or None,
                        frame[DOWNLINK_HEADER_LEN:], source=source)


def parse_frame(record: AcarsRecord) -> AcarsMessage:
    return parse_text(record.raw_frame, source=record)


def reassemble(messages: Iterable[AcarsMessage]) -> list[AcarsMessage]:
    """Join consecutive blocks of one multi-block downlink.

    Blocks belong together when registration and label match and their
    message numbers share the first three characters (the fourth is the
    block sequence letter). Text is concatenated; the first block's header
    is kept.
    """
    out: list[AcarsMessage] = []
    for m in messages:
        if out and m.msg_no and out[-1].msg_no:
            prev = out[-1]
            if (prev.registration, prev.label, prev.msg_no[:3]) == (m.registration, m.label, m.msg_no[:3]) \
                    and m.msg_no[3] > prev.msg_no[3]:
                out[-1] = AcarsMessage(prev.mode, prev.registration, prev.tech_ack, prev.label,
                                       prev.block_id, m.msg_no, prev.flight_id,
                                       prev.text + m.text, source=prev.source)
                continue
        out.append(m)
    return out


# -- label registry ---------------------------------------------------------

class LabelCategory(str, enum.Enum):
    POSITION = "POSITION"
    CLEARANCE = "CLEARANCE"
    ATIS_REQUEST = "ATIS_REQUEST"
    FLIGHT_PLAN = "FLIGHT_PLAN"
    WEATHER = "WEATHER"
    FREE_TEXT = "FREE_TEXT"
    MAINTENANCE = "MAINTENANCE"
    LOADSHEET = "LOADSHEET"
    MEDIA_ADVISORY = "MEDIA_ADVISORY"
    NETWORK_MGMT = "NETWORK_MGMT"
    OTHER = "OTHER"


@dataclass(frozen=True)
class LabelEntry:
    label: str
    category: LabelCategory
    description: str = ""


OTHER_ENTRY = LabelEntry("??", LabelCategory.OTHER, "unregistered label")


class LabelRegistry:
    def __init__(self, entries: Iterable[LabelEntry] = ()):
        self._entries: dict[str, LabelEntry] = {}
        for e in entries:
            if e.label in self._entries:
                raise ValueError(f"duplicate label {e.label!r}")
            self._entries[e.label] = e

    def __contains__(self, label):
        return label in self._entries

    def __len__(self):
        return len(self._entries)

    def __iter__(self):
        return iter(self._entries.values())

    def get(self, label):
        return self._entries.get(label)


def load_labels(path=None) -> LabelRegistry:
    """Read a ``label,category,description`` table; '#' starts a comment line."""
    if path is None:
        text = resources.files("acars_audit").joinpath("data/labels.csv").read_text(encoding="utf-8")
        where = "labels.csv"
    else:
        text = Path(path).read_text(encoding="utf-8")
        where = str(path)
    entries = []
    rows = (ln for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#"))
    for i, row in enumerate(csv.reader(rows)):
        if i == 0 and [c.strip() for c in row] == ["label", "category", "description"]:
            continue
        if len(row) < 2:
            raise ValueError(f"{where}: malformed label row {row!r}")
        label = row[0].strip()
        if not _LABEL_RE.fullmatch(label):
            raise ValueError(f"{where}: bad label {label!r}")
        try:
            cat = LabelCategory(row[1].strip())
        except ValueError:
            raise ValueError(f"{where}: unknown category {row[1]!r} for label {label}") from None
        desc = row[2].strip() if len(row) > 2 else ""
        entries.append(LabelEntry(label, cat, desc))
    return LabelRegistry(entries)


_default_labels: LabelRegistry | None = None


def default_labels() -> LabelRegistry:
    global _default_labels
    if _default_labels is None:
        _default_labels = load_labels()
    return _default_labels


def lookup_label(label: str, registry: LabelRegistry | None = None) -> LabelEntry:
    """Registry entry for ``label``, or the OTHER fallback. Never raises."""
    reg = registry if registry is not None else default_labels()
    entry = reg.get(label)
    return entry if entry is not None else OTHER_ENTRY
