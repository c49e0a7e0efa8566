"""Deterministic synthetic fixtures: registry, block list, corpus, labeled set.

The aircraft population mirrors the reference collection's published class
sizes, blocking rates and off-shore territories; message content is
engineered so each stakeholder class shows a known breach pattern. Nothing
here is real traffic, every PAN is synthetic and every name is drawn from
the shipped surname list.

    python3 -m acars_audit.demo --out DIR
"""
from __future__ import annotations

import argparse
import json
import random
import string
from dataclasses import dataclass
from pathlib import Path

from . import cipher
from .content import Category, default_scanner
from .frames import AcarsMessage, serialize_frame
from .registry import REGISTRY_COLUMNS, StakeholderClass

SEED = 20181
T0 = 1_530_000_000.0

CLASS_SIZES = {
    StakeholderClass.BUSINESS: 1701,
    StakeholderClass.COMMERCIAL: 6645,
    StakeholderClass.MILITARY: 438,
    StakeholderClass.STATE: 143,
}
BLOCKED = {
    StakeholderClass.BUSINESS: 1617,
    StakeholderClass.COMMERCIAL: 171,
    StakeholderClass.MILITARY: 418,
    StakeholderClass.STATE: 81,
}
# territory, business aircraft, registration prefix
OFFSHORE = [
    ("Isle of Man", 118, "M-"),
    ("Malta", 61, "9H-"),
    ("Bermuda", 56, "VP-B"),
    ("Cayman Islands", 49, "VP-C"),
    ("Aruba", 22, "P4-"),
    ("UAE", 17, "A6-"),
    ("Hong Kong", 6, "B-"),
]
UNREGISTERED = 25
N_ENCRYPTED = 120

AIRLINES = [
    ("British Airways", "United Kingdom", "G-", "BAW"),
    ("Lufthansa", "Germany", "D-A", "DLH"),
    ("Swiss", "Switzerland", "HB-", "SWR"),
    ("Air France", "France", "F-G", "AFR"),
    ("KLM", "Netherlands", "PH-", "KLM"),
    ("easyJet", "United Kingdom", "G-E", "EZY"),
    ("Ryanair", "Ireland", "EI-", "RYR"),
    ("Emirates", "United Arab Emirates", "A6-E", "UAE"),
    ("Turkish Airlines", "Turkey", "TC-", "THY"),
    ("Delta", "United States", "N", "DAL"),
    ("Cargolux", "Luxembourg", "LX-", "CLX"),
    ("Aer Lingus", "Ireland", "EI-D", "EIN"),
]
AIR_FORCES = [
    ("US Air Force", "United States", "ae"),
    ("US Navy", "United States", "ae"),
    ("Royal Air Force", "United Kingdom", "43c"),
    ("Luftwaffe", "Germany", "3f"),
    ("Armee de l'Air", "France", "3b"),
]
STATE_OPERATORS = [
    ("Federal Police", "Germany", "D-H"),
    ("Swiss Government", "Switzerland", "HB-F"),
    ("Presidential Flight", "France", "F-R"),
    ("Coast Guard", "Italy", "I-C"),
    ("Ministry of Interior", "Spain", "EC-"),
]
BIZ_TYPES = ["Gulfstream G650", "Gulfstream G550", "Citation X", "Challenger 350", "Global 6000",
             "Falcon 7X", "Learjet 75", "Phenom 300", "Legacy 600"]
BIZ_OPERATORS = ["", "", "NetJets", "VistaJet", "Executive Jet Management", "Flexjet"]
SHELL_WORDS = ["Aurora", "Blue Sky", "Cedar", "Falcon Crest", "Harbour", "Meridian", "Northstar", "Orion",
               "Pinnacle", "Sapphire", "Silverline", "Summit", "Triton", "Zenith"]
SHELL_SUFFIX = ["Holdings Ltd", "Aviation Ltd", "Investments Limited", "Capital Inc", "Leasing Ltd"]
DIRECT_COUNTRIES = ["United States", "Switzerland", "Germany", "United Kingdom", "France", "Austria",
                    "Italy", "British Virgin Islands", "Guernsey", "Monaco"]
TYPES_COM = ["A320", "A321", "A330-300", "A350-900", "B737-800", "B777-300ER", "B787-9", "E190"]

AERODROMES_EU = ["EGLL", "LSZH", "EDDF", "EDDM", "LFPG", "EHAM", "LOWW", "LIRF", "LEMD", "EKCH", "EIDW",
                 "LSGG", "EBBR", "LPPT", "ESSA", "EFHK"]
AERODROMES_BIZ = ["LFMN", "LSGG", "EGGW", "LFPB", "KTEB", "EGLC", "LIML", "LEPA", "OMDW", "TNCA"]
AERODROMES_MIL = ["ETAR", "KADW", "EGVN", "ETNL", "LERT", "ETSI", "EGUN"]
SURNAMES = ["SMITH", "MUELLER", "JONES", "ROSSI", "GARCIA", "MARTIN", "SCHMIDT", "DUBOIS", "NOVAK",
            "JANSSEN", "MURPHY", "WEBER", "LOPEZ", "FISCHER", "TAYLOR", "NIELSEN", "WAGNER", "KELLER"]
GIVEN = ["JOHN", "ANNA", "PETER", "MARIA", "THOMAS", "LAURA", "DAVID", "SARAH", "MARC", "ELENA", "J", "A", "M"]
TITLES = ["MR", "MRS", "MS", "DR"]
CONDITIONS = ["CHEST PAIN", "STROKE", "SEIZURE", "DIABETIC", "UNCONSCIOUS", "ASTHMA ATTACK",
              "ALLERGIC REACTION", "BROKEN ARM", "HIGH FEVER", "FAINTED"]
LOGISTICS = ["MEDICS", "AMBULANCE", "WHEELCHAIR", "STRETCHER", "MEDICAL ASSISTANCE"]
IATA = ["ZRH", "GVA", "FRA", "MUC", "LHR", "CDG", "AMS", "VIE", "FCO", "MAD", "CPH", "DUB", "JFK", "BOS"]


def _letters(i: int, width: int) -> str:
    out = []
    for _ in range(width):
        out.append(string.ascii_uppercase[i % 26])
        i //= 26
    return "".join(reversed(out))


# -- synthetic card numbers -------------------------------------------------

def luhn_complete(prefix: str) -> str:
    """Append the check digit that makes ``prefix`` Luhn-valid."""
    total = 0
    for i, ch in enumerate(reversed(prefix)):
        d = int(ch)
        if i % 2 == 0:
            d *= 2
            if d > 9:
                d -= 9
        total += d
    return prefix + str((10 - total % 10) % 10)


def synthetic_pan(rng: random.Random) -> str:
    iin = rng.choice(["4", "51", "52", "55", "37"])
    length = 15 if iin == "37" else 16
    body = iin + "".join(rng.choice(string.digits) for _ in range(length - len(iin) - 1))
    return luhn_complete(body)


def group_pan(pan: str) -> str:
    if len(pan) == 15:
        return f"{pan[:4]} {pan[4:10]} {pan[10:]}"
    return " ".join(pan[i:i + 4] for i in range(0, len(pan), 4))


# -- registry ---------------------------------------------------------------

@dataclass
class Aircraft:
    registration: str
    icao24: str
    stakeholder: StakeholderClass
    row: dict
    flight: str = ""


def build_fleet(rng: random.Random) -> list[Aircraft]:
    fleet: list[Aircraft] = []
    used_icao: set[str] = set()
    used_reg: set[str] = set()

    def icao(prefix: str = "") -> str:
        # civil airframes must stay clear of the military address blocks
        while True:
            h = prefix + "".join(rng.choice("0123456789abcdef") for _ in range(6 - len(prefix)))
            if h in used_icao or (not prefix and h.startswith(("ae", "af", "43c"))):
                continue
            used_icao.add(h)
            return h

    def add(reg, icao24, cls, ac_type, operator, owner, country, flight=""):
        key = reg.replace("-", "")
        assert key not in used_reg, reg
        used_reg.add(key)
        row = dict(zip(REGISTRY_COLUMNS, [icao24, reg, ac_type, operator, owner, country, "synthetic"]))
        fleet.append(Aircraft(reg, icao24, cls, row, flight))

    # business: off-shore shells first, then N-number LLCs, trusts, direct owners
    n_biz = CLASS_SIZES[StakeholderClass.BUSINESS]
    k = 0
    for territory, count, prefix in OFFSHORE:
        for j in range(count):
            reg = prefix + _letters(j + 26 * 26, 4 if prefix == "M-" else 3)
            owner = f"{rng.choice(SHELL_WORDS)} {rng.choice(SHELL_SUFFIX)}"
            add(reg, icao(), StakeholderClass.BUSINESS, rng.choice(BIZ_TYPES), rng.choice(BIZ_OPERATORS),
                owner, territory)
            k += 1
    i = 0
    while k < n_biz:
        reg = f"N{100 + i // 676}{_letters(i % 676, 2)}"
        i += 1
        kind = rng.random()
        country = "United States"
        if kind < 0.35:
            owner = f"{reg} LLC"
        elif kind < 0.55:
            owner = rng.choice(["Wells Fargo Trust Co Trustee", "Aircraft Guaranty Trustee",
                                "Bank of Utah Trustee"])
        else:
            owner = f"{rng.choice(GIVEN).title()} {rng.choice(SURNAMES).title()}"
            country = rng.choice(DIRECT_COUNTRIES)
        add(reg, icao(), StakeholderClass.BUSINESS, rng.choice(BIZ_TYPES), rng.choice(BIZ_OPERATORS),
            owner, country)
        k += 1

    for j in range(CLASS_SIZES[StakeholderClass.COMMERCIAL]):
        name, country, prefix, icao_code = AIRLINES[j % len(AIRLINES)]
        reg = prefix + _letters(j, 3) if not prefix == "N" else f"N{200 + j // 26}{_letters(j, 1)}A"
        flight = f"{icao_code[:2]}{rng.randint(1, 9999)}"
        add(reg, icao(), StakeholderClass.COMMERCIAL, rng.choice(TYPES_COM), name, name, country, flight)

    for j in range(CLASS_SIZES[StakeholderClass.MILITARY]):
        name, country, prefix = AIR_FORCES[j % len(AIR_FORCES)]
        reg = f"MIL{j:04d}"
        add(reg, icao(prefix), StakeholderClass.MILITARY, rng.choice(["C-17A", "A400M", "KC-135R", "C-130J"]),
            name, "Ministry of Defence" if country != "United States" else "Department of Defense", country)

    for j in range(CLASS_SIZES[StakeholderClass.STATE]):
        name, country, prefix = STATE_OPERATORS[j % len(STATE_OPERATORS)]
        reg = prefix + _letters(j + 1000, 3)
        add(reg, icao(), StakeholderClass.STATE, rng.choice(["A319CJ", "Falcon 900", "EC135", "Global 6000"]),
            name, f"Government of {country}", country)
    return fleet


def registry_csv(fleet: list[Aircraft]) -> str:
    lines = [",".join(REGISTRY_COLUMNS)]
    for a in fleet:
        lines.append(",".join(_csv_cell(a.row[c]) for c in REGISTRY_COLUMNS))
    return "\n".join(lines) + "\n"


def _csv_cell(v: str) -> str:
    return f'"{v}"' if ("," in v or "'" in v) else v


def blocklist_csv(fleet: list[Aircraft], rng: random.Random) -> str:
    lines = ["registration,level"]
    for cls, n in BLOCKED.items():
        members = [a for a in fleet if a.stakeholder is cls]
        chosen = rng.sample(members, n)
        for a in sorted(chosen, key=lambda a: a.registration):
            level = "AGENCY" if rng.random() < 0.3 else "SUBSCRIBER"
            lines.append(f"{a.registration},{level}")
    return "\n".join(lines) + "\n"


# -- message text -----------------------------------------------------------

def _pos_text(rng: random.Random) -> str:
    lat, lon = rng.uniform(35, 60), rng.uniform(-10, 25)
    ns, ew = "N", ("E" if lon >= 0 else "W")
    fl = rng.randrange(280, 430, 10)
    if rng.random() < 0.5:
        return f"POS {ns}{lat:06.3f} {ew}{abs(lon):07.3f} FL{fl} TAS{rng.randint(420, 490)} HDG{rng.randint(0, 359):03d}"
    lat_m, lon_m = (lat % 1) * 60, (abs(lon) % 1) * 60
    return (f"POSRPT {ns} {int(lat):02d} {lat_m:04.1f} {ew} {int(abs(lon)):03d} {lon_m:04.1f} "
            f"ALT {fl * 100} GS {rng.randint(400, 520)}")


def _atis_text(rng, aeros):
    a = rng.choice(aeros)
    return rng.choice([f"REQ ATIS {a}", f"ATIS REQ {a} ARR", f"/{a} ATIS INFO REQ"])


def _fpl_text(rng, aeros):
    a, b = rng.sample(aeros, 2)
    return f"FPN DEP {a} DEST {b} RTE {rng.choice(['UMBAG', 'KONAN', 'RESIA', 'GIPOL'])} {rng.choice(['UN871', 'UL607', 'UZ660'])}"


def _wx_text(rng, aeros):
    a = rng.choice(aeros)
    return rng.choice([f"REQ WX {a}", f"REQ METAR TAF {a}"])


def _clx_text(rng, aeros):
    a, b = rng.sample(aeros, 2)
    return f"REQ DEP CLRNC FROM {a} TO {b} STAND {rng.randint(1, 99)}"


def _solicit_text(rng):
    return rng.choice([
        "PLS SEND PAX NAMES FOR CONNECTING FLIGHTS",
        "PLS ADV PAX LIST AND SPECIAL MEALS",
        "REQ PASSENGER DETAILS FOR CUSTOMS",
        "PLS SEND MANIFEST BEFORE ARR",
    ])


def _email_text(rng):
    user = rng.choice(["OPS", "CREW.DESK", "DISPATCH", "HANDLING", "FBO.DESK", "PROTOCOL"])
    dom = rng.choice(["EXAMPLE-JETS.COM", "FLIGHTDESK.EXAMPLE.ORG", "OPS-MAIL.EXAMPLE.NET"])
    return rng.choice([f"PLS FWD CREW SCHEDULE TO {user}@{dom}",
                       f"CONTACT {user}@{dom} RE HANDLING",
                       f"INVOICE COPY TO {user}@{dom} THX"])


def _card_full_text(rng):
    pan = synthetic_pan(rng)
    body = group_pan(pan) if rng.random() < 0.6 else pan
    exp = f"{rng.randint(1, 12):02d}/{rng.randint(24, 30)}"
    amt = f"{rng.randint(20, 900)}.{rng.randint(0, 99):02d}"
    cvv = f"{rng.randint(100, 999)}"
    if rng.random() < 0.5:
        return f"DUTY FREE SALE CC {body} EXP {exp} CVV {cvv} AMT USD {amt}"
    return f"CARD PYMT {body} EXP {exp} EUR {amt} CARDHOLDER {rng.choice(SURNAMES)}/{rng.choice('ABCDJMP')}"


def _card_partial_text(rng):
    pan = synthetic_pan(rng)
    if rng.random() < 0.5:
        return f"CARD {'X' * (len(pan) - 4)}{pan[-4:]} AUTH {_auth_code(rng)} APPROVED"
    return f"VISA {pan} DECLINED PLS RETRY"


def _auth_code(rng):
    return "".join(rng.choice(string.ascii_uppercase + string.digits) for _ in range(6))


def _card_context_text(rng):
    return rng.choice([f"AUTH CODE {_auth_code(rng)} DECLINED", f"TRANSACTION AUTH {_auth_code(rng)} APPROVED",
                       f"AUTHORIZATION {_auth_code(rng)} REFUSED CALL BANK"])


def _medical_full_text(rng):
    return rng.choice([
        f"PAX {rng.choice(SURNAMES)} {rng.choice(CONDITIONS)} REQ {rng.choice(LOGISTICS)} ON ARR",
        f"{rng.choice(['MR', 'MRS'])} {rng.choice(SURNAMES)} {rng.choice(CONDITIONS)} PLS ARRANGE {rng.choice(LOGISTICS)}",
    ])


def _medical_context_text(rng):
    return rng.choice([
        f"REQ {rng.choice(LOGISTICS)} AT GATE ON ARR",
        "PLS ADV DETAILS ON UNWELL PASSENGERS",
        f"{rng.choice(CONDITIONS)} ON BOARD REQ {rng.choice(LOGISTICS)}",
    ])


def _manifest_line(rng):
    surname, given = rng.choice(SURNAMES), rng.choice(GIVEN)
    seat = f"{rng.randint(1, 45)}{rng.choice('ABCDEFHJK')}"
    return f"{surname}/{given} {rng.choice(TITLES)} {seat} {rng.choice(['LX', 'LH', 'BA', 'AF'])}{rng.randint(10, 999)} {rng.choice(IATA)}"


def manifest_text(rng, n):
    return "CNX PAX\n" + "\n".join(_manifest_line(rng) for _ in range(n))


def _existence_text(rng):
    return rng.choice(["", "", "OK", "ENG1 EGT 612 N2 95.1", "CABIN TEMP 22 FWD 23 AFT", "LINK TEST",
                       "DOORS CLOSED 1214", "OFF 1327 ON 1458", "REQ GATE"])


# -- frames -----------------------------------------------------------------

_LINK_FREQ = {"VHF_POA": (131.725, 131.525, 131.825), "VDLM2": (136.975, 136.875), "HF": (8.927, 11.384),
              "SATCOM_UPLINK": (1545.0, 1546.0), "SATCOM_DOWNLINK": (1646.5, 1647.0)}


class _Clock:
    def __init__(self, rng):
        self.rng = rng
        self.t = T0
        self.seq = 0

    def tick(self) -> float:
        self.t += round(self.rng.uniform(1.0, 90.0), 3)
        return round(self.t, 3)


def _frame(rng, reg, label, text, uplink, flight="", seq=0):
    if uplink:
        msg = AcarsMessage("2", reg, "!", label, rng.choice("ABCDEFG"), text=text)
    else:
        msg_no = f"{rng.choice('MDFS')}{seq % 100:02d}A"
        msg = AcarsMessage("2", reg, "!", label, str(rng.randint(1, 9)), msg_no, flight or None, text)
    return serialize_frame(msg)


def _record(clock, rng, reg, label, text, link, *, uplink=False, flight="", err=0, rid=None):
    clock.seq += 1
    obj = {"ts": clock.tick(), "link": link, "freq": rng.choice(_LINK_FREQ[link]),
           "dir": "uplink" if uplink else "downlink", "frame": _frame(rng, reg, label, text, uplink, flight, clock.seq),
           "err": err}
    if rid is not None:
        obj["id"] = rid
    return obj


def _downlink_link(rng):
    return rng.choices(["VHF_POA", "VDLM2", "SATCOM_DOWNLINK"], weights=[6, 1, 3])[0]


def demo_key() -> cipher.SubstitutionKey:
    return cipher.random_key(random.Random(SEED + 7))


def encrypted_texts(rng, key, n, template=None):
    """``n`` enciphered template reports that screen as encrypted and hit no detector."""
    template = template or cipher.load_template()
    scanner = default_scanner()
    out = []
    while len(out) < n:
        c = cipher.encrypt(template.generate(rng), key)
        probe = AcarsMessage("2", "X", "!", "H1", text=c)
        if scanner.content_findings(probe):
            continue
        if not cipher.classify_encrypted(c, detector_hit=False).is_encrypted:
            continue
        out.append(c)
    return out


def build_corpus(fleet: list[Aircraft], rng: random.Random) -> list[dict]:
    """Operational corpus with the engineered per-class breach pattern.

    Business: position downlinks, ATIS requests, manifest-soliciting uplinks,
    e-mail, weakly enciphered position reports. Commercial: full card data
    plus ordinary traffic. Military: flight plans, positions, soliciting
    uplinks. State: positions, weather and ATIS, e-mail as the only
    passenger-side data.
    """
    clock = _Clock(rng)
    out: list[dict] = []
    B, C, M, S = (StakeholderClass.BUSINESS, StakeholderClass.COMMERCIAL, StakeholderClass.MILITARY,
                  StakeholderClass.STATE)
    key = demo_key()
    enc = iter(encrypted_texts(rng, key, N_ENCRYPTED))
    enc_left = N_ENCRYPTED

    for a in fleet:
        reg, cls, fl = a.registration, a.stakeholder, a.flight
        msgs = []  # (label, text, uplink, link)
        if cls is B:
            choices = ["pos", "atis", "solicit", "email", "exist", "enc"]
            picks = rng.choices(choices, weights=[5, 3, 2, 1, 4, 1], k=rng.randint(1, 3))
        elif cls is C:
            choices = ["pos", "atis", "wx", "clx", "card", "cardp", "cardc", "med", "medc", "manifest",
                       "solicit", "email", "exist"]
            picks = rng.choices(choices, weights=[6, 3, 2, 2, 1, 1, 1, 1, 1, 1, 1, 1, 6], k=rng.randint(1, 2))
        elif cls is M:
            picks = rng.choices(["pos", "fpl", "solicit", "exist"], weights=[4, 3, 1, 3], k=rng.randint(1, 3))
        else:
            picks = rng.choices(["pos", "wx", "atis", "email", "exist"], weights=[4, 2, 2, 1, 3], k=rng.randint(1, 3))
        aeros = {B: AERODROMES_BIZ, M: AERODROMES_MIL}.get(cls, AERODROMES_EU)
        for p in picks:
            if p == "enc" and enc_left == 0:
                p = "pos"
            if p == "pos":
                msgs.append((rng.choice(["15", "16", "H1"]), _pos_text(rng), False, _downlink_link(rng)))
            elif p == "atis":
                msgs.append(("B9", _atis_text(rng, aeros), False, _downlink_link(rng)))
            elif p == "wx":
                msgs.append(("5U", _wx_text(rng, aeros), False, _downlink_link(rng)))
            elif p == "clx":
                msgs.append(("B3", _clx_text(rng, aeros), False, _downlink_link(rng)))
            elif p == "fpl":
                msgs.append(("FP", _fpl_text(rng, aeros), False, _downlink_link(rng)))
            elif p == "solicit":
                msgs.append(("RA", _solicit_text(rng), True, "SATCOM_UPLINK"))
            elif p == "email":
                msgs.append(("H1", _email_text(rng), False, _downlink_link(rng)))
            elif p == "card":
                msgs.append(("H1", _card_full_text(rng), False, rng.choice(["VHF_POA", "SATCOM_DOWNLINK"])))
            elif p == "cardp":
                msgs.append(("H1", _card_partial_text(rng), False, "SATCOM_DOWNLINK"))
            elif p == "cardc":
                msgs.append(("RA", _card_context_text(rng), True, "SATCOM_UPLINK"))
            elif p == "med":
                msgs.append(("H1", _medical_full_text(rng), False, _downlink_link(rng)))
            elif p == "medc":
                msgs.append(("RA", _medical_context_text(rng), True, "SATCOM_UPLINK"))
            elif p == "manifest":
                msgs.append(("H1", manifest_text(rng, rng.randint(2, 6)), False, "SATCOM_DOWNLINK"))
            elif p == "enc":
                enc_left -= 1
                msgs.append(("H1", next(enc), False, "SATCOM_DOWNLINK"))
            else:
                msgs.append((rng.choice(["SQ", "_d", "Q0", "5Z", "MA"]), _existence_text(rng), False,
                             _downlink_link(rng)))
        for label, text, up, link in msgs:
            out.append(_record(clock, rng, reg, label, text, link, uplink=up, flight=fl))

    # ground-station squitters from unregistered airframes, HF traffic, capture damage
    for j in range(UNREGISTERED):
        out.append(_record(clock, rng, f"C-G{_letters(j, 3)}", "SQ", "", "VHF_POA"))
    for a in rng.sample(fleet, 15):
        out.append(_record(clock, rng, a.registration, "H1", _pos_text(rng), "HF", flight=a.flight))
    for a in rng.sample(fleet, 10):
        out.append(_record(clock, rng, a.registration, "5Z", _existence_text(rng), "VHF_POA", err=2))

    # shuffle into time order, then repeat a few frames inside the dedup window
    rng.shuffle(out)
    ts = sorted(r["ts"] for r in out)
    for r, t in zip(out, ts):
        r["ts"] = t
    dupes = []
    for r in rng.sample(out, 40):
        d = dict(r)
        d["ts"] = round(r["ts"] + rng.uniform(0.5, 10.0), 3)
        dupes.append(d)
    out.extend(dupes)
    out.sort(key=lambda r: r["ts"])
    return out


def corpus_jsonl(records: list[dict]) -> str:
    lines = [json.dumps(r, sort_keys=True) for r in records]
    # two lines of capture garbage, skipped (and counted) at load time
    lines.insert(len(lines) // 3, '{"ts": 1530000000.5, "link": "VHF_POA", "frame": ')
    lines.insert(2 * len(lines) // 3, "#### receiver restarted ####")
    return "\n".join(lines) + "\n"


# -- labeled set --------------------------------------------------------------

LABELED_PER_CATEGORY = 40


def build_labeled(rng: random.Random) -> list[dict]:
    """Messages with the exact category set a correct scan must return."""
    clock = _Clock(rng)
    key = demo_key()
    rows = []

    def add(label, text, expect, uplink=False, link=None):
        link = link or ("SATCOM_UPLINK" if uplink else _downlink_link(rng))
        rec = _record(clock, rng, rng.choice(["N512GA", "HB-JNA", "D-AIMA", "G-EUPT", "9H-VJA"]), label, text,
                      link, uplink=uplink, rid=f"labeled:{len(rows) + 1}")
        rec["expect"] = sorted(expect)
        rows.append(rec)

    P, CL, AT, FP, WX = (Category.POSITION_REPORT, Category.CLEARANCE, Category.ATIS_REQUEST,
                         Category.FLIGHT_PLAN, Category.WEATHER_REPORT)
    n = LABELED_PER_CATEGORY
    for _ in range(n):
        add(rng.choice(["15", "16", "20", "H1"]), _pos_text(rng), [P.value])
        add(rng.choice(["B3", "B1"]), _clx_text(rng, AERODROMES_EU), [CL.value])
        add("B9", _atis_text(rng, AERODROMES_EU), [AT.value])
        add(rng.choice(["FP", "H3"]), _fpl_text(rng, AERODROMES_EU + AERODROMES_MIL), [FP.value])
        add("5U", _wx_text(rng, AERODROMES_EU), [WX.value])
        add("H1", _card_full_text(rng), [Category.CARD_FULL.value])
        add("H1", _card_partial_text(rng), [Category.CARD_PARTIAL.value])
        add("RA", _card_context_text(rng), [Category.CARD_CONTEXT.value], uplink=True)
        add("H1", _medical_full_text(rng), [Category.MEDICAL_FULL.value])
        add("RA", _medical_context_text(rng), [Category.MEDICAL_CONTEXT.value], uplink=True)
        if rng.random() < 0.5:
            add("H1", manifest_text(rng, rng.randint(1, 8)), [Category.PASSENGER_MANIFEST.value])
        else:
            add("RA", _solicit_text(rng), [Category.PASSENGER_MANIFEST.value], uplink=True)
        add("H1", _email_text(rng), [Category.EMAIL_ADDRESS.value])
        add(rng.choice(["SQ", "_d", "Q0", "5Z", "MA"]), _existence_text(rng), [Category.EXISTENCE_ONLY.value])
    for c in encrypted_texts(rng, key, n):
        add("H1", c, [Category.ENCRYPTED_WEAK.value], link="SATCOM_DOWNLINK")
    # keyword-only intention (free-text label) and mixed messages
    for _ in range(10):
        add("H1", f"PDC REQ {rng.choice(AERODROMES_EU)} TO {rng.choice(AERODROMES_EU)}", [CL.value])
        add("H1", f"{_pos_text(rng)} {_email_text(rng)}", [P.value, Category.EMAIL_ADDRESS.value])
    add("H1", manifest_text(rng, 210), [Category.PASSENGER_MANIFEST.value])
    rng.shuffle(rows)
    return rows


def write_demo(out_dir) -> dict[str, Path]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    rng = random.Random(SEED)
    fleet = build_fleet(rng)
    files = {
        "registry": out / "registry.csv",
        "blocklist": out / "blocklist.csv",
        "corpus": out / "corpus.jsonl",
        "labeled": out / "labeled.jsonl",
        "cipher_key": out / "cipher_key.json",
    }
    files["registry"].write_text(registry_csv(fleet), encoding="utf-8")
    files["blocklist"].write_text(blocklist_csv(fleet, rng), encoding="utf-8")
    files["corpus"].write_text(corpus_jsonl(build_corpus(fleet, rng)), encoding="utf-8")
    labeled = build_labeled(random.Random(SEED + 1))
    files["labeled"].write_text("\n".join(json.dumps(r, sort_keys=True) for r in labeled) + "\n",
                                encoding="utf-8")
    key = demo_key()
    files["cipher_key"].write_text(json.dumps({"mapping": dict(sorted(key.mapping.items()))}, indent=2,
                                              sort_keys=True) + "\n", encoding="utf-8")
    return files


def demo_dir() -> Path:
    from importlib import resources

    return Path(str(resources.files("acars_audit").joinpath("data/demo")))


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(prog="python3 -m acars_audit.demo")
    ap.add_argument("--out", default=None, help="target directory (default: the packaged data/demo)")
    args = ap.parse_args(argv)
    for name, path in write_demo(args.out or demo_dir()).items():
        print(f"{name}: {path}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
