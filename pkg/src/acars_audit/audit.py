"""Privacy-concept grading of findings and aggregation into audit reports.

Grades and requirement levels are kept apart: a cell's breach grade is the
maximum over the findings that touch it, and the stakeholder's requirement
level only changes how the cell is rendered (N/A where nothing is expected
to be private).
"""
from __future__ import annotations

import csv
import enum
from collections import defaultdict
from dataclasses import dataclass, field
from decimal import ROUND_HALF_UP, Decimal
from pathlib import Path
from typing import Iterable, Mapping

from .content import INTENTION_CATEGORIES, Category, Finding
from .ingest import Direction, Link
from .registry import IDENTIFIED, StakeholderClass


class PrivacyConcept(str, enum.Enum):
    EXISTENCE = "EXISTENCE"
    INTENTION = "INTENTION"
    STATUS = "STATUS"
    PASSENGER_CARGO = "PASSENGER_CARGO"


CONCEPTS = tuple(PrivacyConcept)


class RequirementLevel(str, enum.Enum):
    NONE = "NONE"
    LOW = "LOW"
    HIGH = "HIGH"


class BreachGrade(enum.IntEnum):
    NO_EVIDENCE = 0
    EVIDENCE = 1
    EXPLICIT = 2

    @property
    def letter(self) -> str:
        return "NVX"[self]


# -- requirement matrix -----------------------------------------------------

_L, _H, _N = RequirementLevel.LOW, RequirementLevel.HIGH, RequirementLevel.NONE
DEFAULT_REQUIREMENTS = {
    StakeholderClass.BUSINESS: (_L, _H, _H, _H),
    StakeholderClass.COMMERCIAL: (_N, _N, _N, _H),
    StakeholderClass.MILITARY: (_H, _H, _H, _H),
    StakeholderClass.STATE: (_L, _H, _H, _H),
}


@dataclass(frozen=True)
class RequirementMatrix:
    levels: Mapping[tuple[StakeholderClass, PrivacyConcept], RequirementLevel]
    # Military existence is only "high" for operational flights, not training.
    military_operational_assumption: bool = True

    @classmethod
    def default(cls) -> "RequirementMatrix":
        return cls({(s, c): lvl for s, row in DEFAULT_REQUIREMENTS.items() for c, lvl in zip(CONCEPTS, row)})

    def level(self, stakeholder: StakeholderClass, concept: PrivacyConcept) -> RequirementLevel:
        return self.levels.get((stakeholder, concept), RequirementLevel.NONE)

    def with_overrides(self, rows: Iterable[tuple[str, str, str]]) -> "RequirementMatrix":
        levels = dict(self.levels)
        for s, c, lvl in rows:
            levels[(StakeholderClass(s.strip().upper()), PrivacyConcept(_concept_name(c)))] = \
                RequirementLevel(lvl.strip().upper())
        return RequirementMatrix(levels, self.military_operational_assumption)


def _concept_name(c: str) -> str:
    c = c.strip().upper().replace("/", "_").replace(" ", "_")
    return "PASSENGER_CARGO" if c in ("PASSENGER", "PASSENGER_CARGO", "CARGO") else c


def load_requirement_matrix(path=None) -> RequirementMatrix:
    """Default matrix, optionally overridden by a ``stakeholder,concept,level`` CSV."""
    base = RequirementMatrix.default()
    if path is None:
        return base
    rows = []
    with open(path, newline="", encoding="utf-8") as fh:
        lines = [ln for ln in fh if ln.strip() and not ln.lstrip().startswith("#")]
    for n, row in enumerate(csv.reader(lines)):
        if n == 0 and [c.strip().lower() for c in row] == ["stakeholder", "concept", "level"]:
            continue
        if len(row) != 3:
            raise ValueError(f"{path}: expected stakeholder,concept,level; got {row!r}")
        rows.append(tuple(row))
    try:
        return base.with_overrides(rows)
    except ValueError as exc:
        raise ValueError(f"{path}: {exc}") from None


# -- concept mapping --------------------------------------------------------

_PASSENGER_EXPLICIT_KINDS = ("name", "pan", "masked_pan")


def infer_direction(link: Link, direction: Direction = Direction.UNKNOWN) -> Direction:
    """Explicit direction wins; SATCOM defaults by link name, VHF to downlink."""
    if direction is not Direction.UNKNOWN:
        return direction
    if link is Link.SATCOM_DOWNLINK:
        return Direction.DOWNLINK
    if link is Link.SATCOM_UPLINK:
        return Direction.UPLINK
    if link in (Link.VHF_POA, Link.VDLM2):
        return Direction.DOWNLINK
    return Direction.UNKNOWN


def finding_direction(f: Finding) -> Direction:
    src = f.message.source
    if src is None:
        return Direction.UNKNOWN
    return infer_direction(src.link, src.direction)


def concept_of(finding: Finding, direction: Direction | str | None = None) -> frozenset[tuple[PrivacyConcept, BreachGrade]]:
    if direction is None:
        direction = finding_direction(finding)
    direction = Direction(direction)
    out = {(PrivacyConcept.EXISTENCE, BreachGrade.EXPLICIT)}
    cat = finding.category
    if cat is Category.POSITION_REPORT:
        grade = BreachGrade.EVIDENCE if direction is Direction.UPLINK else BreachGrade.EXPLICIT
        out.add((PrivacyConcept.STATUS, grade))
    elif cat in INTENTION_CATEGORIES:
        endpoints = finding.has("origin", "destination", "aerodrome")
        out.add((PrivacyConcept.INTENTION, BreachGrade.EXPLICIT if endpoints else BreachGrade.EVIDENCE))
    elif cat in (Category.CARD_FULL, Category.CARD_PARTIAL, Category.MEDICAL_FULL,
                 Category.PASSENGER_MANIFEST):
        explicit = finding.has(*_PASSENGER_EXPLICIT_KINDS)
        out.add((PrivacyConcept.PASSENGER_CARGO, BreachGrade.EXPLICIT if explicit else BreachGrade.EVIDENCE))
    elif cat in (Category.CARD_CONTEXT, Category.MEDICAL_CONTEXT, Category.EMAIL_ADDRESS):
        out.add((PrivacyConcept.PASSENGER_CARGO, BreachGrade.EVIDENCE))
    elif cat is Category.ENCRYPTED_WEAK:
        if finding.derived:
            for d in finding.derived:
                out |= concept_of(d, direction)
        else:
            out.add((PrivacyConcept.STATUS, BreachGrade.EVIDENCE))
    return frozenset(out)


# -- graded rows ------------------------------------------------------------

@dataclass(frozen=True)
class GradedRow:
    """One (finding, concept) pair with the context needed for aggregation."""

    record_id: str
    ts: float
    link: Link
    registration: str
    stakeholder: StakeholderClass
    blocked: bool
    category: Category
    concept: PrivacyConcept
    grade: BreachGrade
    entities_json: str = "[]"


def grade_rows(findings: Iterable[Finding], stakeholders: Mapping[str, StakeholderClass],
               blocked: Iterable[str] | Mapping = ()) -> list[GradedRow]:
    from .registry import norm_reg
    from .report import entities_to_json

    blocked_keys = {norm_reg(b) for b in blocked}
    rows = []
    for f in findings:
        src = f.message.source
        if src is None:
            raise ValueError("finding has no source record")
        reg = f.message.registration
        key = norm_reg(reg)
        sh = stakeholders.get(key, StakeholderClass.UNKNOWN)
        ents = entities_to_json(f.entities)
        for concept, grade in sorted(concept_of(f), key=lambda cg: (CONCEPTS.index(cg[0]), cg[1])):
            rows.append(GradedRow(src.record_id, src.timestamp, src.link, reg, sh, key in blocked_keys,
                                  f.category, concept, grade, ents))
    return rows


# -- report -----------------------------------------------------------------

@dataclass
class CounterCell:
    """Distinct aircraft and messages behind one table cell.

    Sets rather than integers so partial reports merge exactly even when
    the same aircraft or message shows up in several shards.
    """

    aircraft: set = field(default_factory=set)
    blocked_aircraft: set = field(default_factory=set)
    messages: set = field(default_factory=set)
    blocked_messages: set = field(default_factory=set)

    def add(self, registration, record_id, blocked):
        self.aircraft.add(registration)
        self.messages.add(record_id)
        if blocked:
            self.blocked_aircraft.add(registration)
            self.blocked_messages.add(record_id)

    def merge(self, other: "CounterCell") -> "CounterCell":
        return CounterCell(self.aircraft | other.aircraft, self.blocked_aircraft | other.blocked_aircraft,
                           self.messages | other.messages, self.blocked_messages | other.blocked_messages)

    def counts(self) -> tuple[int, int, int, int]:
        return (len(self.aircraft), len(self.blocked_aircraft), len(self.messages), len(self.blocked_messages))


@dataclass
class AuditReport:
    requirements: RequirementMatrix = field(default_factory=RequirementMatrix.default)
    grades: dict = field(default_factory=dict)      # (stakeholder, concept) -> BreachGrade
    counters: dict = field(default_factory=dict)    # (stakeholder, category, link) -> CounterCell
    offshore: dict = field(default_factory=dict)    # territory -> set of registrations
    provenance: dict = field(default_factory=dict)  # name -> sha256
    offshore_threshold: int = 5

    def grade(self, stakeholder: StakeholderClass, concept: PrivacyConcept) -> BreachGrade:
        return self.grades.get((stakeholder, concept), BreachGrade.NO_EVIDENCE)

    def cell(self, stakeholder: StakeholderClass, concept: PrivacyConcept) -> str:
        if self.requirements.level(stakeholder, concept) is RequirementLevel.NONE:
            return "N/A"
        return self.grade(stakeholder, concept).letter

    def severity(self, stakeholder, concept) -> tuple[RequirementLevel, BreachGrade]:
        return self.requirements.level(stakeholder, concept), self.grade(stakeholder, concept)

    def add_row(self, row: GradedRow) -> None:
        if row.stakeholder in IDENTIFIED:
            key = (row.stakeholder, row.concept)
            if row.grade > self.grades.get(key, BreachGrade.NO_EVIDENCE):
                self.grades[key] = row.grade
        ckey = (row.stakeholder, row.category, row.link)
        cell = self.counters.get(ckey)
        if cell is None:
            cell = self.counters[ckey] = CounterCell()
        cell.add(row.registration, row.record_id, row.blocked)

    def merge(self, other: "AuditReport") -> "AuditReport":
        if self.requirements != other.requirements:
            raise ValueError("cannot merge reports graded against different requirement matrices")
        grades = dict(self.grades)
        for k, g in other.grades.items():
            if g > grades.get(k, BreachGrade.NO_EVIDENCE):
                grades[k] = g
        counters = {k: CounterCell().merge(v) for k, v in self.counters.items()}
        for k, v in other.counters.items():
            counters[k] = counters[k].merge(v) if k in counters else CounterCell().merge(v)
        offshore = {k: set(v) for k, v in self.offshore.items()}
        for k, v in other.offshore.items():
            offshore.setdefault(k, set()).update(v)
        prov = dict(self.provenance)
        for k, v in other.provenance.items():
            if prov.setdefault(k, v) != v:
                raise ValueError(f"provenance mismatch for {k}")
        return AuditReport(self.requirements, grades, counters, offshore, prov, self.offshore_threshold)

    # -- derived tables -------------------------------------------------

    def matrix_equal(self, other: "AuditReport") -> bool:
        return self.grades == other.grades and self.summary_counts() == other.summary_counts()

    def summary_counts(self) -> dict:
        return {k: v.counts() for k, v in sorted(self.counters.items(), key=lambda kv: _ckey(kv[0]))}

    def _collect(self, pred) -> CounterCell:
        acc = CounterCell()
        for k, v in self.counters.items():
            if pred(*k):
                acc = acc.merge(v)
        return acc

    def totals(self, link: Link | None = None) -> CounterCell:
        return self._collect(lambda s, c, l: link is None or l is link)

    def stakeholder_totals(self, stakeholder: StakeholderClass, link: Link | None = None) -> CounterCell:
        return self._collect(lambda s, c, l: s is stakeholder and (link is None or l is link))

    def category_cell(self, stakeholder, categories, link=None) -> CounterCell:
        cats = {categories} if isinstance(categories, Category) else set(categories)
        return self._collect(lambda s, c, l: s is stakeholder and c in cats and (link is None or l is link))

    def links(self) -> list[Link]:
        return sorted({k[2] for k in self.counters}, key=lambda l: list(Link).index(l))

    def identifiable_aircraft(self) -> dict[StakeholderClass, int]:
        return {s: len(self.stakeholder_totals(s).aircraft) for s in IDENTIFIED}

    def blocked_aircraft(self) -> dict[StakeholderClass, int]:
        return {s: len(self.stakeholder_totals(s).blocked_aircraft) for s in IDENTIFIED}

    def offshore_table(self, threshold: int | None = None) -> list[tuple[str, int]]:
        if threshold is None:
            threshold = self.offshore_threshold
        return offshore_rows({k: len(v) for k, v in self.offshore.items()}, threshold)


def _ckey(k):
    s, c, l = k
    return (s.value, c.value, l.value)


def grade_matrix(findings: Iterable[Finding], stakeholders: Mapping[str, StakeholderClass],
                 matrix: RequirementMatrix | None = None, blocked: Iterable[str] | Mapping = ()) -> AuditReport:
    """Grade every finding and fold the rows into a fresh report.

    ``stakeholders`` maps normalised registrations to their class;
    ``blocked`` holds registrations with any public-display block.
    """
    report = AuditReport(matrix or RequirementMatrix.default())
    for row in grade_rows(findings, stakeholders, blocked):
        report.add_row(row)
    return report


def report_from_rows(rows: Iterable[GradedRow], matrix: RequirementMatrix | None = None) -> AuditReport:
    report = AuditReport(matrix or RequirementMatrix.default())
    for row in rows:
        report.add_row(row)
    return report


# -- table arithmetic -------------------------------------------------------

UNDEFINED = "—"


def percent_value(numerator: int, denominator: int) -> Decimal | None:
    if denominator == 0:
        return None
    return (Decimal(numerator) * 100 / Decimal(denominator)).quantize(Decimal("0.01"), rounding=ROUND_HALF_UP)


def percent(numerator: int, denominator: int) -> str:
    """``"95.06%"`` style, half-up to two decimals; an em dash for 0/0-style denominators."""
    v = percent_value(numerator, denominator)
    return UNDEFINED if v is None else f"{v}%"


def count_pct(numerator: int, denominator: int) -> str:
    return f"{numerator:,} ({percent(numerator, denominator)})"


def offshore_rows(counts: Mapping[str, int], threshold: int = 5) -> list[tuple[str, int]]:
    rows = [(t, n) for t, n in counts.items() if n > threshold]
    rows.sort(key=lambda r: (-r[1], r[0]))
    return rows


def offshore_summary(aircraft: Iterable, threshold: int = 5) -> list[tuple[str, int]]:
    """Off-shore-shell business aircraft per territory, descending, above ``threshold``.

    ``aircraft`` yields ``(registration, stakeholder, registrant_kind, territory)``.
    """
    from .registry import RegistrantKind

    seen: dict[str, set] = defaultdict(set)
    for reg, stakeholder, kind, territory in aircraft:
        if stakeholder is StakeholderClass.BUSINESS and kind is RegistrantKind.OFFSHORE_SHELL and territory:
            seen[territory].add(reg)
    return offshore_rows({t: len(r) for t, r in seen.items()}, threshold)


def file_digest(path) -> str:
    import hashlib

    return hashlib.sha256(Path(path).read_bytes()).hexdigest()
