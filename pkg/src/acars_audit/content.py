"""Detection of privacy-relevant content in ACARS message text.

Every detector is a pure function of the message and the shared
:class:`ContentRules` resources; :meth:`ContentScanner.scan` runs them all
and adds the fallback ENCRYPTED_WEAK / EXISTENCE_ONLY findings.
"""
from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field, replace
from importlib import resources
from pathlib import Path
from typing import Any, Iterable

from . import kernels
from .frames import AcarsMessage, LabelCategory, LabelRegistry, default_labels, lookup_label

CARD_WINDOW = 80
PAN_LENGTHS = (12, 19)


class Category(str, enum.Enum):
    POSITION_REPORT = "POSITION_REPORT"
    CLEARANCE = "CLEARANCE"
    ATIS_REQUEST = "ATIS_REQUEST"
    FLIGHT_PLAN = "FLIGHT_PLAN"
    WEATHER_REPORT = "WEATHER_REPORT"
    CARD_FULL = "CARD_FULL"
    CARD_PARTIAL = "CARD_PARTIAL"
    CARD_CONTEXT = "CARD_CONTEXT"
    MEDICAL_FULL = "MEDICAL_FULL"
    MEDICAL_CONTEXT = "MEDICAL_CONTEXT"
    PASSENGER_MANIFEST = "PASSENGER_MANIFEST"
    EMAIL_ADDRESS = "EMAIL_ADDRESS"
    ENCRYPTED_WEAK = "ENCRYPTED_WEAK"
    EXISTENCE_ONLY = "EXISTENCE_ONLY"


INTENTION_CATEGORIES = frozenset({Category.CLEARANCE, Category.ATIS_REQUEST,
                                  Category.FLIGHT_PLAN, Category.WEATHER_REPORT})


class Confidence(str, enum.Enum):
    HIGH = "high"
    MEDIUM = "medium"
    LOW = "low"

    def demoted(self) -> "Confidence":
        return {Confidence.HIGH: Confidence.MEDIUM}.get(self, Confidence.LOW)


@dataclass(frozen=True)
class Position:
    lat: float
    lon: float

    def __post_init__(self):
        if not -90.0 <= self.lat <= 90.0:
            raise ValueError(f"latitude {self.lat} out of range")
        if not -180.0 <= self.lon <= 180.0:
            raise ValueError(f"longitude {self.lon} out of range")

    def __str__(self):
        return f"{self.lat:.6f},{self.lon:.6f}"


@dataclass(frozen=True)
class Entity:
    kind: str
    value: Any
    span: tuple[int, int]
    group: int | None = None  # manifest tuple index
    redacted: bool = False


@dataclass(frozen=True)
class Finding:
    message: AcarsMessage = field(compare=False, repr=False)
    category: Category
    entities: tuple[Entity, ...] = ()
    confidence: Confidence = Confidence.HIGH
    derived: tuple["Finding", ...] = ()  # findings in recovered plaintext

    @property
    def record_id(self) -> str | None:
        src = self.message.source
        return src.record_id if src is not None else None

    def values(self, kind: str) -> list:
        return [e.value for e in self.entities if e.kind == kind]

    def has(self, *kinds: str) -> bool:
        return any(e.kind in kinds for e in self.entities)


# -- resources --------------------------------------------------------------

def _read_list(name: str, directory: Path | None = None) -> list[str]:
    if directory is not None and (directory / name).exists():
        text = (directory / name).read_text(encoding="utf-8")
    else:
        text = resources.files("acars_audit").joinpath(f"data/{name}").read_text(encoding="utf-8")
    out = []
    for line in text.splitlines():
        s = line.strip()
        if s and not s.startswith("#"):
            out.append(s.upper())
    return out


def _phrase_re(phrases: Iterable[str]) -> re.Pattern:
    alts = sorted({p for p in phrases}, key=len, reverse=True)
    if not alts:
        return re.compile(r"(?!x)x")
    body = "|".join(r"\s+".join(map(re.escape, p.split())) for p in alts)
    return re.compile(rf"(?<![A-Z0-9])(?:{body})(?![A-Z0-9])")


@dataclass
class ContentRules:
    labels: LabelRegistry
    aerodromes: frozenset[str]
    surnames: frozenset[str]
    conditions: list[str]
    logistics: list[str]
    solicit: list[str]
    card_window: int = CARD_WINDOW

    def __post_init__(self):
        self.conditions_re = _phrase_re(self.conditions)
        self.logistics_re = _phrase_re(self.logistics)
        self.solicit_re = _phrase_re(self.solicit)

    @classmethod
    def load(cls, labels: LabelRegistry | None = None, gazetteer=None, keywords_dir=None) -> "ContentRules":
        """Default data files, optionally overridden.

        ``gazetteer`` is an aerodrome list file; ``keywords_dir`` a directory
        holding any of surnames.txt, conditions.txt, logistics.txt and
        solicit.txt.
        """
        kdir = Path(keywords_dir) if keywords_dir else None
        if gazetteer:
            aero = [ln.strip().upper() for ln in Path(gazetteer).read_text(encoding="utf-8").splitlines()
                    if ln.strip() and not ln.strip().startswith("#")]
        else:
            aero = _read_list("aerodromes.txt")
        return cls(
            labels=labels if labels is not None else default_labels(),
            aerodromes=frozenset(aero),
            surnames=frozenset(_read_list("surnames.txt", kdir)),
            conditions=_read_list("conditions.txt", kdir),
            logistics=_read_list("logistics.txt", kdir),
            solicit=_read_list("solicit.txt", kdir),
        )


# -- position ---------------------------------------------------------------

_NUM = r"[0-9]+(?:\.[0-9]+)?"
_POS_DM_RE = re.compile(
    rf"(?<![A-Z0-9])([NS])\s?([0-9]{{1,2}})\s([0-9]{{1,2}}(?:\.[0-9]+)?)[\s,]*"
    rf"([EW])\s?([0-9]{{1,3}})\s([0-9]{{1,2}}(?:\.[0-9]+)?)(?![0-9.])"
)
_POS_DEC_RE = re.compile(
    rf"(?<![A-Z0-9])([NS])\s?([0-9]{{1,2}}(?:\.[0-9]+)?)[\s,]*([EW])\s?([0-9]{{1,3}}(?:\.[0-9]+)?)(?![0-9.])"
)


def _signed(hemi: str, value: float) -> float:
    return -value if hemi in "SW" and value != 0 else value


def find_positions(text: str) -> list[tuple[Position, tuple[int, int]]]:
    """All coordinate pairs in ``text`` (degrees+minutes form takes priority)."""
    found = []
    taken: list[tuple[int, int]] = []

    def free(a, b):
        return all(b <= s or a >= e for s, e in taken)

    for m in _POS_DM_RE.finditer(text):
        lat_d, lat_m, lon_d, lon_m = int(m[2]), float(m[3]), int(m[5]), float(m[6])
        if lat_m >= 60 or lon_m >= 60:
            continue
        lat, lon = lat_d + lat_m / 60.0, lon_d + lon_m / 60.0
        if lat > 90 or lon > 180:
            continue
        found.append((Position(_signed(m[1], lat), _signed(m[4], lon)), m.span()))
        taken.append(m.span())
    for m in _POS_DEC_RE.finditer(text):
        if not free(*m.span()):
            continue
        lat, lon = float(m[2]), float(m[4])
        if lat > 90 or lon > 180:
            continue
        found.append((Position(_signed(m[1], lat), _signed(m[3], lon)), m.span()))
    found.sort(key=lambda p: p[1])
    return found


def format_position_decimal(p: Position, places: int = 7) -> str:
    ns = "S" if p.lat < 0 else "N"
    ew = "W" if p.lon < 0 else "E"
    return f"{ns}{abs(p.lat):0{3 + places}.{places}f} {ew}{abs(p.lon):0{4 + places}.{places}f}"


def _dm(value: float, deg_width: int, places: int) -> str:
    v = abs(value)
    deg = int(v)
    minutes = round((v - deg) * 60.0, places)
    if minutes >= 60.0:
        deg += 1
        minutes = 0.0
    return f"{deg:0{deg_width}d} {minutes:0{3 + places}.{places}f}"


def format_position_dm(p: Position, places: int = 6) -> str:
    ns = "S" if p.lat < 0 else "N"
    ew = "W" if p.lon < 0 else "E"
    return f"{ns} {_dm(p.lat, 2, places)} {ew} {_dm(p.lon, 3, places)}"


# -- names ------------------------------------------------------------------

_STOPWORDS = frozenset("""
PAX SEAT SEATS MR MRS MS MISS MSTR DR FOR THE AND TO FROM WITH IN ON AT OF NAME NAMES
ATIS REQ DEP ARR ETA ETD POS FL CONNECTING CNX GATE FLT FLIGHT TOTAL INFO DEST ORIG
PLS PLEASE ADV SEND REPLY MEDICAL MEDICS CHEST PAIN CARD AUTH EXP CVV USD EUR GBP
""".split())
_TITLES = frozenset({"MR", "MRS", "MS", "MISS", "MSTR", "DR", "PAX"})
_SLASH_NAME_RE = re.compile(r"(?<![A-Z0-9/])([A-Z]{2,20})/([A-Z]{1,12})(?: (MR|MRS|MS|MISS|MSTR|DR))?(?![A-Z0-9/])")
_WORD_RE = re.compile(r"[A-Z]+")


def find_names(text: str, rules: ContentRules) -> list[tuple[str, tuple[int, int]]]:
    """Person names: airline ``SURNAME/INITIAL`` form, or a listed surname
    preceded by a given name or title."""
    out = []
    taken = []
    for m in _SLASH_NAME_RE.finditer(text):
        surname, given = m[1], m[2]
        if surname in rules.surnames or (len(given) <= 2 and surname not in _STOPWORDS
                                         and given not in _STOPWORDS):
            out.append((m[0], m.span()))
            taken.append(m.span())
    words = list(_WORD_RE.finditer(text))
    for i, w in enumerate(words):
        if w[0] not in rules.surnames or any(s <= w.start() < e for s, e in taken):
            continue
        if text[w.end():w.end() + 1] == "/":
            continue
        start = w.start()
        if i > 0:
            prev = words[i - 1]
            gap = text[prev.end():w.start()]
            if gap == " " and not any(s <= prev.start() < e for s, e in taken):
                if prev[0] in _TITLES:
                    out.append((w[0], w.span()))
                    taken.append(w.span())
                    continue
                if len(prev[0]) >= 2 and prev[0] not in _STOPWORDS:
                    start = prev.start()
                    out.append((text[start:w.end()], (start, w.end())))
                    taken.append((start, w.end()))
                    continue
    out.sort(key=lambda n: n[1])
    return out


# -- cards ------------------------------------------------------------------

_PAN_GROUPED_RE = re.compile(r"(?<![0-9A-Z])([0-9]{4}(?:[ -][0-9]{4}){2}[ -][0-9]{1,7}|[0-9]{4}[ -][0-9]{6}[ -][0-9]{5})(?![0-9A-Z])")
_MASKED_PAN_RE = re.compile(r"(?<![0-9A-Z*])([0-9]{0,6}[X*]{4,13}[0-9]{4})(?![0-9A-Z*])")
_CVV_RE = re.compile(r"\b(?:CVV2?|CVC2?|CSC|CID)\s*:?\s*([0-9]{3,4})\b")
_EXP_RE = re.compile(r"(?:\b(?:EXP(?:IRY|IRES)?|VALID(?: THRU)?)\s*:?\s*)?(?<![0-9/])((?:0[1-9]|1[0-2])\s?/\s?(?:20)?[0-9]{2})(?![0-9/])")
_AMOUNT_RE = re.compile(r"(?:\b(?:USD|EUR|GBP|CHF|AMT|AMOUNT)\s*:?\s*|[$€£]\s?)([0-9]{1,6}(?:[.,][0-9]{2})?)(?![0-9])")
_HOLDER_RE = re.compile(r"\b(?:NAME|CARDHOLDER|HOLDER)\s*:?\s*([A-Z]{2,}(?:[ /][A-Z]{1,})?)")
_AUTH_RE = re.compile(r"\bAUTH(?:ORI[SZ]ATION)?(?:\s*(?:CODE|NO|NR|#))?\s*:?\s*([A-Z0-9]{5,6})(?![A-Z0-9])")
_OUTCOME_RE = re.compile(r"\b(NOT AUTHORI[SZ]ED|APPROVED|AUTHORI[SZ]ED|DECLINED|DENIED|REJECTED|REFUSED)\b")
_CARD_WORD_RE = re.compile(r"\b(CARD|CC|VISA|MASTERCARD|AMEX|DINERS|CREDIT|DEBIT)\b")


def luhn_valid(digits: str) -> bool:
    """Mod-10 checksum of a 12-19 digit string."""
    if not isinstance(digits, str) or not digits.isascii() or not digits.isdigit():
        raise ValueError(f"luhn_valid expects a digit string, got {digits!r}")
    lo, hi = PAN_LENGTHS
    if not lo <= len(digits) <= hi:
        raise ValueError(f"card numbers have {lo}-{hi} digits, got {len(digits)}")
    return kernels.luhn_ok(digits)


def find_pans(text: str) -> list[tuple[str, tuple[int, int]]]:
    """Luhn-valid primary account numbers, contiguous or in 4-digit groups."""
    lo, hi = PAN_LENGTHS
    out = []
    for s, e in kernels.digit_runs(text, lo, hi):
        d = text[s:e]
        if kernels.luhn_ok(d):
            out.append((d, (s, e)))
    for m in _PAN_GROUPED_RE.finditer(text):
        d = re.sub(r"[ -]", "", m[1])
        if lo <= len(d) <= hi and kernels.luhn_ok(d):
            out.append((d, m.span(1)))
    out.sort(key=lambda p: p[1])
    return out


# -- email ------------------------------------------------------------------

_EMAIL_RE = re.compile(r"(?<![A-Z0-9._%+-])[A-Z0-9._%+-]+@[A-Z0-9-]+(?:\.[A-Z0-9-]+)*\.[A-Z]{2,}(?![A-Z0-9-])",
                       re.IGNORECASE)

# -- intention --------------------------------------------------------------

_LABEL_TO_CATEGORY = {
    LabelCategory.CLEARANCE: Category.CLEARANCE,
    LabelCategory.ATIS_REQUEST: Category.ATIS_REQUEST,
    LabelCategory.FLIGHT_PLAN: Category.FLIGHT_PLAN,
    LabelCategory.WEATHER: Category.WEATHER_REPORT,
}
_INTENT_KEYWORDS = [
    (Category.ATIS_REQUEST, re.compile(r"\bATIS\b")),
    (Category.CLEARANCE, re.compile(r"\b(?:CLRNC|CLEARANCE|CLRD|PDC|DCL)\b")),
    (Category.FLIGHT_PLAN, re.compile(r"\b(?:FPN|FPL|FLIGHT PLAN|FLT PLAN)\b")),
    (Category.WEATHER_REPORT, re.compile(r"\b(?:METAR|TAF|WX|WEATHER|SIGMET)\b")),
]
_ORIGIN_MARK = frozenset({"FROM", "DEP", "ORIG", "ORIGIN", "DEPT"})
_DEST_MARK = frozenset({"TO", "DEST", "DES", "ARR", "DSTN"})
_ICAO4_RE = re.compile(r"(?<![A-Z0-9])[A-Z]{4}(?![A-Z0-9])")

# -- manifest ---------------------------------------------------------------

_SEAT_RE = re.compile(r"(?<![A-Z0-9/])([1-9][0-9]?[A-K])(?![A-Z0-9/])")
_FLIGHTNO_RE = re.compile(r"(?<![A-Z0-9/])(?!FL[0-9])([A-Z]{2}[0-9]{1,4}[A-Z]?)(?![A-Z0-9/])")
_IATA_RE = re.compile(r"[A-Z]{3}")


class ContentScanner:
    def __init__(self, rules: ContentRules | None = None, cipher_key=None, cipher_config=None):
        self.rules = rules if rules is not None else ContentRules.load()
        self.cipher_key = cipher_key
        self.cipher_config = cipher_config

    def _finding(self, msg, category, entities, confidence=Confidence.HIGH):
        src = msg.source
        if src is not None and src.capture_errors > 0:
            confidence = confidence.demoted()
        return Finding(msg, category, tuple(entities), confidence)

    # -- detectors ------------------------------------------------------

    def detect_position(self, msg: AcarsMessage) -> Finding | None:
        hits = find_positions(msg.text)
        if not hits:
            return None
        return self._finding(msg, Category.POSITION_REPORT,
                             [Entity("position", p, span) for p, span in hits])

    def _aerodromes(self, text: str):
        return [(m[0], m.span()) for m in _ICAO4_RE.finditer(text) if m[0] in self.rules.aerodromes]

    def detect_intention(self, msg: AcarsMessage) -> Finding | None:
        text = msg.text
        category = _LABEL_TO_CATEGORY.get(lookup_label(msg.label, self.rules.labels).category)
        confidence = Confidence.HIGH
        aeros = self._aerodromes(text)
        if category is None:
            for cat, pat in _INTENT_KEYWORDS:
                if pat.search(text):
                    category = cat
                    break
            if category is None or not aeros:
                return None
            confidence = Confidence.MEDIUM
        entities = [Entity(role, code, span) for code, span, role in self._roles(text, aeros, category)]
        return self._finding(msg, category, entities, confidence)

    @staticmethod
    def _roles(text, aeros, category):
        words = [(m[0], m.span()) for m in re.finditer(r"[A-Z]+", text)]
        starts = {span[0]: i for i, (_, span) in enumerate(words)}
        roles = []
        for code, span in aeros:
            i = starts.get(span[0])
            before = words[i - 1][0] if i is not None and i > 0 else ""
            after = words[i + 1][0] if i is not None and i + 1 < len(words) else ""
            if before in _ORIGIN_MARK or after in ("DEP", "DEPT"):
                roles.append("origin")
            elif before in _DEST_MARK or after in ("ARR", "DEST"):
                roles.append("destination")
            else:
                roles.append(None)
        if None in roles:
            free = [k for k, r in enumerate(roles) if r is None]
            if len(aeros) == 1:
                dep = category is Category.ATIS_REQUEST and re.search(r"\bDEP\b", text)
                roles[0] = "origin" if dep else "destination"
            else:
                have = set(roles)
                if "origin" not in have:
                    roles[free[0]] = "origin"
                    free = free[1:]
                if free and "destination" not in have:
                    roles[free[-1]] = "destination"
                    free = free[:-1]
                for k in free:
                    roles[k] = "aerodrome"
        return [(code, span, role) for (code, span), role in zip(aeros, roles)]

    def detect_card(self, msg: AcarsMessage) -> Finding | None:
        text = msg.text
        win = self.rules.card_window
        pans = find_pans(text)
        masked = [(m[1], m.span(1)) for m in _MASKED_PAN_RE.finditer(text)
                  if PAN_LENGTHS[0] <= len(m[1]) <= PAN_LENGTHS[1]]
        corro = []
        corro += [("cvv", m[1], m.span(1)) for m in _CVV_RE.finditer(text)]
        corro += [("expiry", m[1].replace(" ", ""), m.span(1)) for m in _EXP_RE.finditer(text)]
        corro += [("amount", m[1].replace(",", "."), m.span(1)) for m in _AMOUNT_RE.finditer(text)]
        corro += [("name", m[1], m.span(1)) for m in _HOLDER_RE.finditer(text)]
        held = {c[2] for c in corro}
        corro += [("name", n, span) for n, span in find_names(text, self.rules) if span not in held]
        auth = [(m[1], m.span(1)) for m in _AUTH_RE.finditer(text)]
        outcome = [(m[1], m.span(1)) for m in _OUTCOME_RE.finditer(text)]
        card_word = _CARD_WORD_RE.search(text) is not None

        def near(span, items):
            s, e = span
            return [c for c in items if c[2][0] < e + win and c[2][1] > s - win]

        def ents(items):
            return [Entity(k, v, sp) for k, v, sp in items]

        for pan, span in pans:
            close = near(span, corro)
            kinds = {c[0] for c in close}
            if len(kinds & {"cvv", "expiry", "amount", "name"}) >= 2:
                extra = [Entity("auth_code", v, sp) for v, sp in auth]
                return self._finding(msg, Category.CARD_FULL,
                                     [Entity("pan", pan, span)] + ents(close) + extra)
        money = [c for c in corro if c[0] in ("expiry", "amount")]
        for pan, span in pans:
            close = near(span, corro)
            if close or card_word:
                return self._finding(msg, Category.CARD_PARTIAL, [Entity("pan", pan, span)] + ents(close),
                                     Confidence.MEDIUM)
        if masked:
            span = masked[0][1]
            return self._finding(msg, Category.CARD_PARTIAL,
                                 [Entity("masked_pan", v, sp) for v, sp in masked] + ents(near(span, corro))
                                 + [Entity("auth_code", v, sp) for v, sp in auth])
        if auth and money:
            return self._finding(msg, Category.CARD_PARTIAL,
                                 [Entity("auth_code", v, sp) for v, sp in auth] + ents(money))
        if auth and outcome:
            return self._finding(msg, Category.CARD_CONTEXT,
                                 [Entity("auth_code", v, sp) for v, sp in auth]
                                 + [Entity("outcome", v, sp) for v, sp in outcome])
        return None

    def detect_medical(self, msg: AcarsMessage) -> Finding | None:
        text = msg.text
        conditions = [Entity("condition", m[0], m.span()) for m in self.rules.conditions_re.finditer(text)]
        logistics = [Entity("logistics", m[0], m.span()) for m in self.rules.logistics_re.finditer(text)]
        if not conditions and not logistics:
            return None
        names = [Entity("name", n, span) for n, span in find_names(text, self.rules)]
        seats = [Entity("seat", m[1], m.span(1)) for m in _SEAT_RE.finditer(text)]
        if names and conditions:
            return self._finding(msg, Category.MEDICAL_FULL, names + conditions + logistics + seats)
        return self._finding(msg, Category.MEDICAL_CONTEXT, names + conditions + logistics + seats,
                             Confidence.MEDIUM)

    def detect_passenger_manifest(self, msg: AcarsMessage) -> Finding | None:
        text = msg.text
        names = find_names(text, self.rules)
        entities: list[Entity] = []
        group = 0
        for k, (name, (s, e)) in enumerate(names):
            stop = names[k + 1][1][0] if k + 1 < len(names) else len(text)
            nl = text.find("\n", e)
            if nl != -1:
                stop = min(stop, nl)
            seg = text[e:stop]
            attrs = []
            seat = _SEAT_RE.search(seg)
            if seat:
                attrs.append(Entity("seat", seat[1], (e + seat.start(1), e + seat.end(1)), group))
            flight = _FLIGHTNO_RE.search(seg)
            if flight:
                attrs.append(Entity("flight", flight[1], (e + flight.start(1), e + flight.end(1)), group))
                rest = seg[flight.end():]
                dm = re.match(r"\s+([A-Z]{3,4})(?![A-Z0-9])", rest)
                if dm and (len(dm[1]) == 3 or dm[1] in self.rules.aerodromes):
                    off = e + flight.end() + dm.start(1)
                    attrs.append(Entity("destination", dm[1], (off, off + len(dm[1])), group))
            if not any(a.kind == "destination" for a in attrs):
                for code, (cs, ce) in self._aerodromes(seg):
                    attrs.append(Entity("destination", code, (e + cs, e + ce), group))
                    break
            if attrs:
                entities.append(Entity("name", name, (s, e), group))
                entities.extend(attrs)
                group += 1
        if group:
            return self._finding(msg, Category.PASSENGER_MANIFEST, entities)
        asks = [Entity("request", m[0], m.span()) for m in self.rules.solicit_re.finditer(text)]
        if asks:
            return self._finding(msg, Category.PASSENGER_MANIFEST, asks, Confidence.MEDIUM)
        return None

    def detect_email(self, msg: AcarsMessage) -> Finding | None:
        hits = [Entity("email", m[0], m.span()) for m in _EMAIL_RE.finditer(msg.text)]
        if not hits:
            return None
        return self._finding(msg, Category.EMAIL_ADDRESS, hits)

    # -- driver ---------------------------------------------------------

    def content_findings(self, msg: AcarsMessage) -> list[Finding]:
        out = []
        for det in (self.detect_position, self.detect_intention, self.detect_card,
                    self.detect_medical, self.detect_passenger_manifest, self.detect_email):
            f = det(msg)
            if f is not None:
                out.append(f)
        return out

    def scan(self, msg: AcarsMessage) -> list[Finding]:
        """All findings for one message; never empty."""
        from . import cipher

        found = self.content_findings(msg)
        if found:
            return found
        verdict = cipher.classify_encrypted(msg.text, detector_hit=False, config=self.cipher_config)
        if verdict.is_encrypted:
            derived: tuple[Finding, ...] = ()
            if self.cipher_key is not None:
                plain = cipher.decrypt(msg.text, self.cipher_key)
                pmsg = replace(msg, text=plain)
                derived = tuple(self.content_findings(pmsg))
            f = self._finding(msg, Category.ENCRYPTED_WEAK, [], Confidence.MEDIUM)
            return [replace(f, derived=derived)]
        return [self._finding(msg, Category.EXISTENCE_ONLY, [])]


_default: ContentScanner | None = None


def default_scanner() -> ContentScanner:
    global _default
    if _default is None:
        _default = ContentScanner()
    return _default


def detect_position(msg):
    return default_scanner().detect_position(msg)


def detect_intention(msg):
    return default_scanner().detect_intention(msg)


def detect_card(msg):
    return default_scanner().detect_card(msg)


def detect_medical(msg):
    return default_scanner().detect_medical(msg)


def detect_passenger_manifest(msg):
    return default_scanner().detect_passenger_manifest(msg)


def detect_email(msg):
    return default_scanner().detect_email(msg)


def scan(msg):
    return default_scanner().scan(msg)
