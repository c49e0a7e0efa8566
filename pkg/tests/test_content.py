import pytest
from hypothesis import given
from hypothesis import strategies as st

from acars_audit.cipher import encrypt, load_template, random_key
from acars_audit.content import (Category, Confidence, ContentScanner, Position, detect_card,
                                 detect_email, detect_intention, detect_medical, detect_passenger_manifest,
                                 detect_position, find_pans, find_positions, format_position_decimal,
                                 format_position_dm, luhn_valid, scan)
from acars_audit.ingest import AcarsRecord, Link
from acars_audit.frames import AcarsMessage

from conftest import make_msg


def mod10_oracle(digits: str) -> bool:
    # textbook form: double every second digit from the right, sum decimal digits
    total = 0
    for i, ch in enumerate(reversed(digits)):
        d = int(ch) * (2 if i % 2 else 1)
        total += d // 10 + d % 10
    return total % 10 == 0


def test_luhn_known():
    assert luhn_valid("4111111111111111")
    assert not luhn_valid("4111111111111112")
    assert luhn_valid("378282246310005")


@pytest.mark.parametrize("bad", ["", "41111", "4111-1111-1111-1111", "4" * 20, "４１１１１１１１１１１１"])
def test_luhn_rejects(bad):
    with pytest.raises(ValueError):
        luhn_valid(bad)


@given(st.text(alphabet="0123456789", min_size=12, max_size=19))
def test_luhn_matches_oracle(d):
    assert luhn_valid(d) == mod10_oracle(d)


@given(st.floats(-90, 90, allow_nan=False), st.floats(-180, 180, allow_nan=False))
def test_position_round_trip_decimal(lat, lon):
    p = Position(lat, lon)
    (got, _), = find_positions("POS " + format_position_decimal(p) + " FL350")
    assert got.lat == pytest.approx(lat, abs=1e-6) and got.lon == pytest.approx(lon, abs=1e-6)


@given(st.floats(-89.9, 89.9, allow_nan=False), st.floats(-179.9, 179.9, allow_nan=False))
def test_position_round_trip_dm(lat, lon):
    p = Position(lat, lon)
    (got, _), = find_positions(format_position_dm(p))
    assert got.lat == pytest.approx(lat, abs=1e-6) and got.lon == pytest.approx(lon, abs=1e-6)


def test_position_examples():
    f = detect_position(make_msg("POS N47.458 E008.555 FL410"))
    assert f.category is Category.POSITION_REPORT
    assert f.values("position") == [Position(47.458, 8.555)]
    assert detect_position(make_msg("N95.000 E008.000")) is None
    assert detect_position(make_msg("NO POSITION HERE")) is None


def test_intention_label_and_roles():
    f = detect_intention(make_msg("REQ ATIS LSZH", label="B9"))
    assert f.category is Category.ATIS_REQUEST
    assert f.values("destination") == ["LSZH"]
    f = detect_intention(make_msg("REQ DEP CLRNC FROM EGLL TO LSZH", label="B3"))
    assert (f.values("origin"), f.values("destination")) == (["EGLL"], ["LSZH"])


def test_intention_keyword_needs_aerodrome():
    assert detect_intention(make_msg("PDC REQ EGLL TO LSZH")).confidence is Confidence.MEDIUM
    assert detect_intention(make_msg("PDC REQ")) is None
    assert detect_intention(make_msg("ALL GOOD EGLL")) is None


def test_card_full():
    f = detect_card(make_msg("CC 4111 1111 1111 1111 EXP 09/27 CVV 123"))
    assert f.category is Category.CARD_FULL
    assert f.values("pan") == ["4111111111111111"]


def test_card_levels():
    assert detect_card(make_msg("CARD XXXXXXXXXXXX1111 AUTH 4F7K21 APPROVED")).category is Category.CARD_PARTIAL
    assert detect_card(make_msg("VISA 4111111111111111 DECLINED")).category is Category.CARD_PARTIAL
    assert detect_card(make_msg("AUTH CODE 4F7K21 DECLINED")).category is Category.CARD_CONTEXT
    # a bare Luhn-valid number is just a number
    assert detect_card(make_msg("REF 4111111111111111")) is None
    assert detect_card(make_msg("CC 4111111111111112 EXP 09/27 CVV 123")) is None


def test_card_corroborators_must_be_near():
    far = "CC 4111111111111111 " + "X" * 100 + " EXP 09/27 CVV 123"
    assert detect_card(make_msg(far)).category is Category.CARD_PARTIAL


def test_find_pans_grouped():
    assert [p for p, _ in find_pans("PAN 3782 822463 10005 OK")] == ["378282246310005"]


def test_medical():
    assert detect_medical(make_msg("PAX SMITH CHEST PAIN REQ MEDICS")).category is Category.MEDICAL_FULL
    f = detect_medical(make_msg("PLS ADV DETAILS ON UNWELL PASSENGERS", block="A"))
    assert f.category is Category.MEDICAL_CONTEXT
    assert detect_medical(make_msg("ALL PAX FINE")) is None


def test_manifest_tuples():
    text = "CNX PAX\nSMITH/JOHN MR 12A LX318 ZRH\nJONES/A MRS 3C BA45 LHR"
    f = detect_passenger_manifest(make_msg(text))
    assert f.category is Category.PASSENGER_MANIFEST and f.confidence is Confidence.HIGH
    assert len(f.values("name")) == 2
    assert f.values("seat") == ["12A", "3C"]
    assert f.values("destination") == ["ZRH", "LHR"]


def test_manifest_solicit():
    f = detect_passenger_manifest(make_msg("PLS SEND PAX NAMES FOR CONNECTING FLIGHTS", block="A"))
    assert f.confidence is Confidence.MEDIUM and f.has("request") and not f.has("name")


def test_email():
    f = detect_email(make_msg("PLS FWD TO OPS.DESK@EXAMPLE.COM THX"))
    assert f.values("email") == ["OPS.DESK@EXAMPLE.COM"]


def test_scan_never_empty_and_existence_fallback():
    fs = scan(make_msg("", label="SQ"))
    assert [f.category for f in fs] == [Category.EXISTENCE_ONLY]


def test_scan_encrypted_and_derived():
    import random
    rng = random.Random(3)
    key = random_key(rng)
    c = encrypt(load_template().generate(rng), key)
    assert [f.category for f in scan(make_msg(c))] == [Category.ENCRYPTED_WEAK]
    f, = ContentScanner(cipher_key=key).scan(make_msg(c))
    assert f.category is Category.ENCRYPTED_WEAK
    assert [d.category for d in f.derived] == [Category.POSITION_REPORT]


def test_capture_errors_demote_confidence():
    src = AcarsRecord("e:1", 1.0, Link.VHF_POA, "", capture_errors=3)
    m = AcarsMessage("2", "N1", "!", "H1", text="POS N47.458 E008.555", source=src)
    assert detect_position(m).confidence is Confidence.MEDIUM


@given(st.text(max_size=120))
def test_scan_total(text):
    assert scan(make_msg(text))
