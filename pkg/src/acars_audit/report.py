"""Rendering of audit reports and findings exports, plus PII redaction."""
from __future__ import annotations

import csv
import enum
import hashlib
import hmac
import io
import json
from dataclasses import dataclass, field, replace
from typing import Iterable, Mapping

from .audit import (CONCEPTS, AuditReport, BreachGrade, GradedRow, PrivacyConcept, RequirementMatrix,
                    count_pct, percent, report_from_rows)
from .content import Category, Entity, Finding, Position
from .ingest import Link
from .registry import IDENTIFIED, StakeholderClass

FORMATS = ("text", "csv", "json")
FINDINGS_COLUMNS = ["record_id", "ts", "link", "registration", "stakeholder", "blocked",
                    "category", "concept", "grade", "entities_json"]
CONCEPT_HEADINGS = {
    PrivacyConcept.EXISTENCE: "Existence",
    PrivacyConcept.INTENTION: "Intention",
    PrivacyConcept.STATUS: "Status",
    PrivacyConcept.PASSENGER_CARGO: "Passenger/Cargo",
}
# Row groups of the per-link leak tables.
CATEGORY_GROUPS = [
    ("Position", (Category.POSITION_REPORT,)),
    ("Intention", (Category.CLEARANCE, Category.ATIS_REQUEST, Category.FLIGHT_PLAN, Category.WEATHER_REPORT)),
    ("Card data", (Category.CARD_FULL, Category.CARD_PARTIAL, Category.CARD_CONTEXT)),
    ("Medical", (Category.MEDICAL_FULL, Category.MEDICAL_CONTEXT)),
    ("Passenger manifest", (Category.PASSENGER_MANIFEST,)),
    ("Email", (Category.EMAIL_ADDRESS,)),
    ("Weak encryption", (Category.ENCRYPTED_WEAK,)),
    ("Existence only", (Category.EXISTENCE_ONLY,)),
]


class UsageError(ValueError):
    pass


class ConfigError(ValueError):
    pass


# -- entity (de)serialisation ----------------------------------------------

def _entity_value(v):
    if isinstance(v, Position):
        return [v.lat, v.lon]
    return v


def entities_to_json(entities: Iterable[Entity]) -> str:
    items = []
    for e in entities:
        d = {"kind": e.kind, "value": _entity_value(e.value), "span": list(e.span)}
        if e.group is not None:
            d["group"] = e.group
        if e.redacted:
            d["redacted"] = True
        items.append(d)
    return json.dumps(items, sort_keys=True, separators=(",", ":"))


def entities_from_json(text: str) -> tuple[Entity, ...]:
    out = []
    for d in json.loads(text or "[]"):
        v = d["value"]
        if d["kind"] == "position" and isinstance(v, list):
            v = Position(*v)
        out.append(Entity(d["kind"], v, tuple(d["span"]), d.get("group"), d.get("redacted", False)))
    return tuple(out)


# -- findings CSV -----------------------------------------------------------

def findings_csv(rows: Iterable[GradedRow]) -> bytes:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(FINDINGS_COLUMNS)
    for r in rows:
        w.writerow([r.record_id, repr(float(r.ts)), r.link.value, r.registration, r.stakeholder.value,
                    int(r.blocked), r.category.value, r.concept.value, r.grade.name, r.entities_json])
    return buf.getvalue().encode("utf-8")


def read_findings_csv(path_or_text) -> list[GradedRow]:
    """Inverse of :func:`findings_csv`. Accepts a path or the CSV text itself."""
    if isinstance(path_or_text, str) and "\n" in path_or_text:
        text, where = path_or_text, "<text>"
    else:
        with open(path_or_text, encoding="utf-8", newline="") as fh:
            text, where = fh.read(), str(path_or_text)
    reader = csv.reader(io.StringIO(text))
    header = next(reader, None)
    if header != FINDINGS_COLUMNS:
        raise ValueError(f"{where}: line 1: expected header {','.join(FINDINGS_COLUMNS)}")
    rows = []
    for lineno, r in enumerate(reader, start=2):
        if not r:
            continue
        try:
            rid, ts, link, reg, sh, blocked, cat, concept, grade, ents = r
            rows.append(GradedRow(rid, float(ts), Link(link), reg, StakeholderClass(sh), blocked == "1",
                                  Category(cat), PrivacyConcept(concept), BreachGrade[grade], ents))
        except (ValueError, KeyError) as exc:
            raise ValueError(f"{where}: line {lineno}: {exc}") from None
    return rows


def rows_from_findings_csv(path, matrix: RequirementMatrix | None = None) -> AuditReport:
    return report_from_rows(read_findings_csv(path), matrix)


# -- rendering --------------------------------------------------------------

def render(report: AuditReport, format: str = "text") -> bytes:
    if format not in FORMATS:
        raise UsageError(f"unknown output format {format!r}; choose one of {', '.join(FORMATS)}")
    if format == "text":
        return render_text(report).encode("utf-8")
    if format == "csv":
        return render_csv(report).encode("utf-8")
    return (json.dumps(report_to_dict(report), indent=2, sort_keys=True) + "\n").encode("utf-8")


def _grid(header: list[str], rows: list[list[str]]) -> list[str]:
    widths = [max(len(str(r[i])) for r in [header] + rows) for i in range(len(header))]
    fmt = lambda r: "  ".join(str(c).ljust(w) if i == 0 else str(c).rjust(w) for i, (c, w) in enumerate(zip(r, widths)))
    return [fmt(header).rstrip(), "-" * (sum(widths) + 2 * (len(widths) - 1))] + [fmt(r).rstrip() for r in rows]


def _label(s: StakeholderClass) -> str:
    return s.value.capitalize()


def grade_matrix_rows(report: AuditReport) -> list[list[str]]:
    return [[_label(s)] + [report.cell(s, c) for c in CONCEPTS] for s in sorted(IDENTIFIED, key=lambda s: s.value)]


def render_text(report: AuditReport) -> str:
    out: list[str] = []
    stakeholders = sorted(IDENTIFIED, key=lambda s: s.value)

    out.append("Privacy requirements vs. observed breaches (N none, V evidence, X explicit)")
    out += _grid(["Stakeholder"] + [CONCEPT_HEADINGS[c] for c in CONCEPTS], grade_matrix_rows(report))
    if report.requirements.military_operational_assumption:
        out.append("Military existence requirement assumes operational flights.")
    out.append("")

    out.append("Severity (requirement/grade)")
    out += _grid(["Stakeholder"] + [CONCEPT_HEADINGS[c] for c in CONCEPTS],
                 [[_label(s)] + ["{}/{}".format(*(x.name for x in report.severity(s, c))) for c in CONCEPTS]
                  for s in stakeholders])
    out.append("")

    ident = report.identifiable_aircraft()
    blocked = report.blocked_aircraft()
    total = sum(ident.values())
    out.append("Identifiable aircraft")
    out += _grid(["Stakeholder", "Aircraft"],
                 [[_label(s), count_pct(ident[s], total)] for s in stakeholders] + [["All", f"{total:,}"]])
    out.append("")

    out.append("Blocked aircraft")
    out += _grid(["Stakeholder", "Blocked"],
                 [[_label(s), count_pct(blocked[s], ident[s])] for s in stakeholders]
                 + [["All", count_pct(sum(blocked.values()), total)]])
    out.append("")

    for link in report.links():
        out.append(f"Leaks on {link.value}")
        rows = []
        for s in stakeholders:
            base_link = report.stakeholder_totals(s, link)
            base_all = report.stakeholder_totals(s)
            for name, cats in CATEGORY_GROUPS:
                c = report.category_cell(s, cats, link)
                if not c.messages:
                    continue
                n_ac, n_bac, n_msg, n_bmsg = c.counts()
                rows.append([_label(s), name,
                             count_pct(n_ac, len(base_link.aircraft)), percent(n_ac, len(base_all.aircraft)),
                             count_pct(n_bac, n_ac), count_pct(n_msg, len(base_link.messages)),
                             count_pct(n_bmsg, n_msg)])
        out += _grid(["Stakeholder", "Category", "Aircraft (link)", "Aircraft (all)", "Blocked aircraft",
                      "Messages", "Blocked messages"], rows)
        out.append("")

    off = report.offshore_table()
    out.append("Business aircraft registered in off-shore financial centres (more than 5)")
    out += _grid(["Territory", "Aircraft"], [[t, f"{n:,}"] for t, n in off])
    out.append("")

    if report.provenance:
        out.append("Inputs (sha256)")
        out += [f"  {k}: {v}" for k, v in sorted(report.provenance.items())]
    return "\n".join(out).rstrip("\n") + "\n"


def render_csv(report: AuditReport) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["table", "stakeholder", "key", "link", "aircraft", "blocked_aircraft", "messages",
                "blocked_messages", "value"])
    for s in sorted(IDENTIFIED, key=lambda s: s.value):
        for c in CONCEPTS:
            w.writerow(["grade", s.value, c.value, "", "", "", "", "", report.cell(s, c)])
    for (s, cat, link), cell in sorted(report.counters.items(), key=lambda kv: (kv[0][0].value, kv[0][1].value, kv[0][2].value)):
        w.writerow(["counter", s.value, cat.value, link.value, *cell.counts(), ""])
    for t, n in report.offshore_table():
        w.writerow(["offshore", StakeholderClass.BUSINESS.value, t, "", n, "", "", "", ""])
    return buf.getvalue()


def report_to_dict(report: AuditReport) -> dict:
    stakeholders = sorted(IDENTIFIED, key=lambda s: s.value)
    return {
        "grades": {s.value: {c.value: report.cell(s, c) for c in CONCEPTS} for s in stakeholders},
        "severity": {s.value: {c.value: [x.name for x in report.severity(s, c)] for c in CONCEPTS}
                     for s in stakeholders},
        "military_operational_assumption": report.requirements.military_operational_assumption,
        "counters": [
            {"stakeholder": s.value, "category": cat.value, "link": link.value,
             "aircraft": a, "blocked_aircraft": ba, "messages": m, "blocked_messages": bm}
            for (s, cat, link), (a, ba, m, bm) in
            ((k, v.counts()) for k, v in sorted(report.counters.items(),
                                                 key=lambda kv: (kv[0][0].value, kv[0][1].value, kv[0][2].value)))
        ],
        "identifiable_aircraft": {s.value: n for s, n in report.identifiable_aircraft().items()},
        "blocked_aircraft": {s.value: n for s, n in report.blocked_aircraft().items()},
        "offshore": [[t, n] for t, n in report.offshore_table()],
        "provenance": dict(sorted(report.provenance.items())),
    }


# -- redaction --------------------------------------------------------------

class RedactAction(str, enum.Enum):
    KEEP = "KEEP"
    MASK = "MASK"
    PSEUDONYM = "PSEUDONYM"


PAN_KINDS = frozenset({"pan", "masked_pan"})
DEFAULT_RULES = {
    "name": RedactAction.PSEUDONYM,
    "pan": RedactAction.MASK,
    "masked_pan": RedactAction.MASK,
    "cvv": RedactAction.MASK,
    "email": RedactAction.PSEUDONYM,
}


@dataclass(frozen=True)
class RedactionPolicy:
    key: bytes | None = None
    rules: Mapping[str, RedactAction] = field(default_factory=dict)
    default: RedactAction = RedactAction.KEEP

    def action(self, kind: str) -> RedactAction:
        return self.rules.get(kind, self.default)

    def validate(self) -> None:
        needs_key = self.default is RedactAction.PSEUDONYM or RedactAction.PSEUDONYM in self.rules.values()
        if needs_key and not self.key:
            raise ConfigError("redaction policy uses PSEUDONYM but no key was supplied "
                              "(--key-file or ACARS_AUDIT_KEY)")


def parse_policy(text: str, key: bytes | None = None, where: str = "<policy>") -> RedactionPolicy:
    """``kind=ACTION`` per line; ``*`` sets the default action; '#' comments."""
    rules: dict[str, RedactAction] = {}
    default = RedactAction.KEEP
    for n, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{where}: line {n}: expected kind=ACTION")
        kind, act = (p.strip() for p in line.split("=", 1))
        try:
            action = RedactAction(act.upper())
        except ValueError:
            raise ConfigError(f"{where}: line {n}: unknown action {act!r}") from None
        if kind == "*":
            default = action
        else:
            rules[kind] = action
    return RedactionPolicy(key, rules, default)


def mask_value(kind: str, value: str) -> str:
    if kind in PAN_KINDS:
        digits = value.replace(" ", "").replace("-", "")
        return "*" * (len(digits) - 4) + digits[-4:]
    return "*" * len(value)


def pseudonym(key: bytes, kind: str, value: str) -> str:
    return hmac.new(key, f"{kind}\0{value}".encode("utf-8"), hashlib.sha256).hexdigest()[:8]


def redact_entity(e: Entity, policy: RedactionPolicy) -> Entity:
    if e.redacted:
        return e
    act = policy.action(e.kind)
    if act is RedactAction.KEEP:
        return e
    value = str(e.value)
    new = mask_value(e.kind, value) if act is RedactAction.MASK else pseudonym(policy.key, e.kind, value)
    return replace(e, value=new, redacted=True)


def redact_finding(f: Finding, policy: RedactionPolicy) -> Finding:
    return replace(f, entities=tuple(redact_entity(e, policy) for e in f.entities),
                   derived=tuple(redact_finding(d, policy) for d in f.derived))


def redact(findings: Iterable[Finding], policy: RedactionPolicy) -> list[Finding]:
    """Transform entity values per policy; structure, spans and counts are untouched."""
    policy.validate()
    return [redact_finding(f, policy) for f in findings]


def redact_rows(rows: Iterable[GradedRow], policy: RedactionPolicy) -> list[GradedRow]:
    policy.validate()
    out = []
    for r in rows:
        ents = tuple(redact_entity(e, policy) for e in entities_from_json(r.entities_json))
        out.append(replace(r, entities_json=entities_to_json(ents)))
    return out


def redact_text(text: str, entities: Iterable[Entity], policy: RedactionPolicy) -> str:
    """Rewrite ``text`` with redacted entity values placed at their spans."""
    pieces = []
    pos = 0
    for e in sorted(entities, key=lambda e: e.span):
        s, t = e.span
        if s < pos:
            continue
        r = redact_entity(e, policy)
        pieces.append(text[pos:s])
        pieces.append(str(r.value) if r.redacted else text[s:t])
        pos = t
    pieces.append(text[pos:])
    return "".join(pieces)
