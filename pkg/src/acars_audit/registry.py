"""Aircraft metadata, public-display block lists and stakeholder classification."""
from __future__ import annotations

import csv
import enum
import io
import logging
import re
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Iterable

log = logging.getLogger(__name__)

REGISTRY_COLUMNS = ["icao24", "registration", "type", "operator", "owner", "country", "source"]
BLOCKLIST_COLUMNS = ["registration", "level"]
RULE_COLUMNS = ["tier", "field", "pattern", "class", "rule_id"]
RULE_FIELDS = {"icao24", "registration", "type", "operator", "owner", "country"}

_ICAO_RE = re.compile(r"[0-9a-fA-F]{6}")


class RegistryError(Exception):
    def __init__(self, where, line, message):
        self.where = str(where)
        self.line = line
        super().__init__(f"{where}:{line}: {message}")


class StakeholderClass(str, enum.Enum):
    BUSINESS = "BUSINESS"
    COMMERCIAL = "COMMERCIAL"
    MILITARY = "MILITARY"
    STATE = "STATE"
    UNKNOWN = "UNKNOWN"


# Evaluation order of rule classes.
PRECEDENCE = (StakeholderClass.MILITARY, StakeholderClass.STATE,
              StakeholderClass.COMMERCIAL, StakeholderClass.BUSINESS)
IDENTIFIED = PRECEDENCE


class RegistrantKind(str, enum.Enum):
    DIRECT = "DIRECT"
    LLC_SCHEME = "LLC_SCHEME"
    TRUST_SERVICE = "TRUST_SERVICE"
    OFFSHORE_SHELL = "OFFSHORE_SHELL"
    UNKNOWN = "UNKNOWN"


class BlockLevel(str, enum.Enum):
    AGENCY = "AGENCY"
    SUBSCRIBER = "SUBSCRIBER"

    @property
    def rank(self) -> int:
        return 2 if self is BlockLevel.AGENCY else 1


def norm_reg(registration: str) -> str:
    """Join key for registrations: uppercase, no hyphens or padding dots."""
    return registration.strip().lstrip(".").replace("-", "").upper()


def _data_text(name: str) -> str:
    return resources.files("acars_audit").joinpath(f"data/{name}").read_text(encoding="utf-8")


def _content_lines(text: str):
    """Yield (line_no, line) skipping blanks and '#' comments."""
    for n, line in enumerate(text.splitlines(), start=1):
        if line.strip() and not line.lstrip().startswith("#"):
            yield n, line


# -- countries --------------------------------------------------------------

class Gazetteer:
    """Closed list of country / territory names with aliases."""

    def __init__(self, entries: Iterable[tuple[str, Iterable[str]]]):
        self._canon: dict[str, str] = {}
        for canonical, aliases in entries:
            for name in (canonical, *aliases):
                self._canon[name.strip().casefold()] = canonical

    def canonical(self, name: str) -> str | None:
        return self._canon.get(name.strip().casefold())

    def __contains__(self, name):
        return self.canonical(name) is not None


def load_countries(path=None) -> Gazetteer:
    text = Path(path).read_text(encoding="utf-8") if path else _data_text("countries.txt")
    entries = []
    for _, line in _content_lines(text):
        names = [p.strip() for p in line.split("|") if p.strip()]
        entries.append((names[0], names[1:]))
    return Gazetteer(entries)


_countries: Gazetteer | None = None


def default_countries() -> Gazetteer:
    global _countries
    if _countries is None:
        _countries = load_countries()
    return _countries


def load_ofc_list(path=None) -> list[str]:
    """Off-shore territories, one per line, in file order."""
    text = Path(path).read_text(encoding="utf-8") if path else _data_text("ofc.txt")
    return [line.strip() for _, line in _content_lines(text)]


# -- aircraft registry ------------------------------------------------------

@dataclass(frozen=True)
class AircraftRecord:
    icao24: str | None = None
    registration: str | None = None
    ac_type: str = ""
    operator: str = ""
    owner: str = ""
    country: str = ""
    source: str = ""

    def field(self, name: str) -> str:
        if name == "type":
            return self.ac_type
        return getattr(self, name) or ""


class RegistryIndex:
    def __init__(self):
        self._by_reg: dict[str, AircraftRecord] = {}
        self._by_icao: dict[str, AircraftRecord] = {}

    def add(self, rec: AircraftRecord) -> None:
        if rec.registration:
            old = self._by_reg.get(norm_reg(rec.registration))
            if old is not None and old.icao24 and self._by_icao.get(old.icao24) is old:
                del self._by_icao[old.icao24]
            self._by_reg[norm_reg(rec.registration)] = rec
        if rec.icao24:
            self._by_icao[rec.icao24] = rec

    def lookup(self, registration: str | None = None, icao24: str | None = None) -> AircraftRecord | None:
        if registration:
            hit = self._by_reg.get(norm_reg(registration))
            if hit is not None:
                return hit
        if icao24:
            return self._by_icao.get(icao24.lower())
        return None

    def __len__(self):
        return len(self._by_reg) + sum(1 for r in self._by_icao.values() if not r.registration)

    def __iter__(self):
        yield from self._by_reg.values()
        yield from (r for r in self._by_icao.values() if not r.registration)

    def registrations(self) -> set[str]:
        return set(self._by_reg)


def _read_csv(text: str, where: str, columns: list[str]):
    lines = [(n, ln) for n, ln in _content_lines(text)]
    if not lines:
        return
    header_no, header = lines[0]
    got = [c.strip() for c in next(csv.reader([header]))]
    if got != columns:
        raise RegistryError(where, header_no, f"expected columns {','.join(columns)}, got {','.join(got)}")
    for n, line in lines[1:]:
        row = next(csv.reader([line]))
        if len(row) != len(columns):
            raise RegistryError(where, n, f"expected {len(columns)} fields, got {len(row)}")
        yield n, dict(zip(columns, (c.strip() for c in row)))


def load_registry(paths: Iterable, countries: Gazetteer | None = None) -> RegistryIndex:
    """Merge registry CSV files; later files override earlier ones per registration."""
    countries = countries or default_countries()
    index = RegistryIndex()
    for path in paths:
        where = str(path)
        try:
            text = Path(path).read_text(encoding="utf-8")
        except OSError as exc:
            raise RegistryError(where, 0, f"cannot read ({exc})") from exc
        seen: dict[str, int] = {}
        for n, row in _read_csv(text, where, REGISTRY_COLUMNS):
            icao = row["icao24"] or None
            reg = row["registration"] or None
            if icao is None and reg is None:
                raise RegistryError(where, n, "row has neither icao24 nor registration")
            if icao is not None:
                if not _ICAO_RE.fullmatch(icao):
                    raise RegistryError(where, n, f"bad icao24 {icao!r}")
                icao = icao.lower()
            country = row["country"]
            if country:
                canon = countries.canonical(country)
                if canon is None:
                    raise RegistryError(where, n, f"country {country!r} not in gazetteer")
                country = canon
            key = norm_reg(reg) if reg else f"icao:{icao}"
            if key in seen:
                log.warning("%s:%d: duplicate of line %d for %s, last row wins", where, n, seen[key], reg or icao)
            seen[key] = n
            index.add(AircraftRecord(icao, reg, row["type"], row["operator"], row["owner"], country,
                                     row["source"]))
    return index


# -- block list -------------------------------------------------------------

@dataclass(frozen=True)
class BlockEntry:
    registration: str
    level: BlockLevel


class Blocklist:
    def __init__(self, entries: Iterable[BlockEntry] = ()):
        self._entries: dict[str, BlockEntry] = {}
        for e in entries:
            self.add(e)

    def add(self, entry: BlockEntry) -> None:
        key = norm_reg(entry.registration)
        old = self._entries.get(key)
        if old is None or entry.level.rank > old.level.rank:
            self._entries[key] = entry

    def get(self, registration: str) -> BlockEntry | None:
        return self._entries.get(norm_reg(registration))

    def __contains__(self, registration):
        return self.get(registration) is not None

    def __len__(self):
        return len(self._entries)

    def __iter__(self):
        return iter(self._entries.values())


def load_blocklist(path) -> Blocklist:
    where = str(path)
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise RegistryError(where, 0, f"cannot read ({exc})") from exc
    bl = Blocklist()
    for n, row in _read_csv(text, where, BLOCKLIST_COLUMNS):
        if not row["registration"]:
            raise RegistryError(where, n, "empty registration")
        try:
            level = BlockLevel(row["level"].upper())
        except ValueError:
            raise RegistryError(where, n, f"unknown block level {row['level']!r}") from None
        bl.add(BlockEntry(row["registration"], level))
    return bl


def lookup_block(registration: str, blocklist: Blocklist) -> BlockEntry | None:
    return blocklist.get(registration)


# -- stakeholder rules ------------------------------------------------------

@dataclass(frozen=True)
class Rule:
    tier: int
    field: str
    pattern: re.Pattern
    stakeholder: StakeholderClass
    rule_id: str
    order: int = 0

    def matches(self, rec: AircraftRecord) -> bool:
        value = rec.field(self.field)
        return bool(value) and self.pattern.search(value) is not None


class RuleTable:
    def __init__(self, rules: Iterable[Rule]):
        by_class: dict[StakeholderClass, list[Rule]] = {c: [] for c in PRECEDENCE}
        for r in rules:
            by_class[r.stakeholder].append(r)
        self.rules = [r for c in PRECEDENCE for r in sorted(by_class[c], key=lambda r: (r.tier, r.order))]

    def __iter__(self):
        return iter(self.rules)

    def __len__(self):
        return len(self.rules)


def parse_rules(text: str, where: str = "<rules>") -> RuleTable:
    rules = []
    ids = set()
    for i, (n, row) in enumerate(_read_csv(text, where, RULE_COLUMNS)):
        try:
            tier = int(row["tier"])
        except ValueError:
            raise RegistryError(where, n, f"tier must be an integer, got {row['tier']!r}") from None
        if row["field"] not in RULE_FIELDS:
            raise RegistryError(where, n, f"unknown field {row['field']!r}")
        try:
            cls = StakeholderClass(row["class"].upper())
        except ValueError:
            raise RegistryError(where, n, f"unknown class {row['class']!r}") from None
        if cls is StakeholderClass.UNKNOWN:
            raise RegistryError(where, n, "UNKNOWN is the fallback, not a rule class")
        try:
            pat = re.compile(row["pattern"], re.IGNORECASE)
        except re.error as exc:
            raise RegistryError(where, n, f"bad pattern: {exc}") from None
        if row["rule_id"] in ids:
            raise RegistryError(where, n, f"duplicate rule id {row['rule_id']!r}")
        ids.add(row["rule_id"])
        rules.append(Rule(tier, row["field"], pat, cls, row["rule_id"], i))
    return RuleTable(rules)


def load_rules(path=None) -> RuleTable:
    if path is None:
        return parse_rules(_data_text("rules.csv"), "rules.csv")
    return parse_rules(Path(path).read_text(encoding="utf-8"), str(path))


@dataclass(frozen=True)
class Classification:
    stakeholder: StakeholderClass
    rule_id: str | None


def classify_stakeholder(rec: AircraftRecord | None, rules: RuleTable) -> Classification:
    if rec is not None:
        for rule in rules:
            if rule.matches(rec):
                return Classification(rule.stakeholder, rule.rule_id)
    return Classification(StakeholderClass.UNKNOWN, None)


# -- registrant kind --------------------------------------------------------

_CORPORATE_RE = re.compile(
    r"\b(ltd|limited|llc|inc|incorporated|corp|corporation|holdings?|plc|s\.?a\.?|a\.?g\.?|gmbh|"
    r"b\.?v\.?|n\.?v\.?|co|company|group|investments?|enterprises?|ventures?|capital|"
    r"aviation|leasing|fze|fzco|fzc)\b\.?",
    re.IGNORECASE,
)
_TRUST_RE = re.compile(
    r"\b(trust|trustee|trustees|trust company|owner trust|registration services?|"
    r"aircraft guaranty|fiduciary)\b",
    re.IGNORECASE,
)
_LLC_SCHEME_RE = re.compile(r"^\s*(N[0-9A-Z]{1,5})\s+LLC\.?\s*$", re.IGNORECASE)


def detect_registrant_kind(rec: AircraftRecord, ofc_list: Iterable[str] | None = None,
                           countries: Gazetteer | None = None) -> RegistrantKind:
    """Classify how the registered owner relates to the aircraft.

    Checked in order: off-shore shell (corporate owner in an OFC territory),
    N-number LLC mirroring the registration, trust or registration service,
    otherwise direct.
    """
    owner = (rec.owner or "").strip()
    if not owner:
        return RegistrantKind.UNKNOWN
    countries = countries or default_countries()
    if ofc_list is None:
        ofc_list = load_ofc_list()
    if rec.country and _in_ofc(rec.country, ofc_list, countries) is not None \
            and _CORPORATE_RE.search(owner):
        return RegistrantKind.OFFSHORE_SHELL
    m = _LLC_SCHEME_RE.match(owner)
    if m and (not rec.registration or norm_reg(m.group(1)) == norm_reg(rec.registration)):
        return RegistrantKind.LLC_SCHEME
    if _TRUST_RE.search(owner):
        return RegistrantKind.TRUST_SERVICE
    return RegistrantKind.DIRECT


def _in_ofc(country: str, ofc_list: Iterable[str], countries: Gazetteer) -> str | None:
    """Return the OFC list's own spelling of ``country`` if it is listed."""
    canon = countries.canonical(country) or country
    for entry in ofc_list:
        if (countries.canonical(entry) or entry).casefold() == canon.casefold():
            return entry
    return None


def ofc_territory(rec: AircraftRecord, ofc_list: Iterable[str], countries: Gazetteer | None = None) -> str | None:
    if not rec.country:
        return None
    return _in_ofc(rec.country, ofc_list, countries or default_countries())


def registry_to_csv(records: Iterable[AircraftRecord]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(REGISTRY_COLUMNS)
    for r in records:
        w.writerow([r.icao24 or "", r.registration or "", r.ac_type, r.operator, r.owner, r.country, r.source])
    return buf.getvalue()
