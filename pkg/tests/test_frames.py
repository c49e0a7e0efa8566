import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from acars_audit.frames import (AcarsMessage, LabelCategory, ParseFailure, load_labels, lookup_label,
                                parse_text, reassemble, serialize_frame)

UP = "ABCDEFGHIJKLMNOPQRSTUVWXYZ"
DIG = "0123456789"
PRINT = "".join(chr(c) for c in range(0x21, 0x7F))


@st.composite
def messages(draw):
    mode = draw(st.sampled_from(PRINT))
    reg = draw(st.text(alphabet=UP + DIG + "-", min_size=1, max_size=7))
    ack = draw(st.sampled_from(PRINT))
    label = draw(st.text(alphabet=UP + DIG + "_abcdefghijklmnopqrstuvwxyz", min_size=2, max_size=2))
    kind = draw(st.sampled_from(["down", "up", "none"]))
    text = draw(st.text(alphabet=st.characters(min_codepoint=0x20, max_codepoint=0x7E), max_size=60))
    if kind == "down":
        msg_no = draw(st.sampled_from(UP)) + draw(st.text(DIG, min_size=2, max_size=2)) \
            + draw(st.sampled_from(UP + DIG))
        flight = draw(st.none() | st.text(UP + DIG, min_size=1, max_size=6))
        return AcarsMessage(mode, reg, ack, label, draw(st.sampled_from(DIG)), msg_no, flight, text)
    if kind == "up":
        return AcarsMessage(mode, reg, ack, label, draw(st.sampled_from(UP + UP.lower())), text=text)
    return AcarsMessage(mode, reg, ack, label, None, text=text)


@settings(max_examples=300)
@given(messages())
def test_round_trip(m):
    assert parse_text(serialize_frame(m)) == m


@given(st.text(max_size=80))
def test_parse_total(s):
    try:
        parse_text(s)
    except ParseFailure as exc:
        assert exc.reason and exc.position >= 0


def test_layout_example():
    m = AcarsMessage("2", "N123AB", "!", "5Z", "2", "M01A", "AB123", "POS N47.5 E008.5")
    frame = serialize_frame(m)
    assert frame == "2.N123AB!5Z2M01AAB123 POS N47.5 E008.5"
    assert parse_text(frame).flight_id == "AB123"


def test_uplink_has_no_msg_no():
    m = parse_text("2.N123AB!RAAPLS SEND PAX NAMES")
    assert m.block_id == "A" and m.msg_no is None and m.text == "PLS SEND PAX NAMES"


@pytest.mark.parametrize("frame,reason", [
    ("2.N12", "too_short"),
    ("2.N1 3AB!5Z2M01A", "bad_registration"),
    ("2.N123AB!5Z2X1AA      T", "bad_msg_no"),
    ("2.N123AB!5Z%", "bad_block_id"),
    ("2.N123AB!?!2M01A", "bad_label"),
])
def test_failures(frame, reason):
    with pytest.raises(ParseFailure) as ei:
        parse_text(frame)
    assert ei.value.reason == reason


def test_serialize_rejects_msg_no_on_uplink():
    with pytest.raises(ValueError):
        serialize_frame(AcarsMessage("2", "N1", "!", "H1", "A", "M01A"))


def test_reassemble_blocks():
    a = AcarsMessage("2", "N1", "!", "H1", "1", "M01A", None, "PART ONE ")
    b = AcarsMessage("2", "N1", "!", "H1", "2", "M01B", None, "PART TWO")
    c = AcarsMessage("2", "N2", "!", "H1", "1", "M01A", None, "OTHER")
    out = reassemble([a, b, c])
    assert [m.text for m in out] == ["PART ONE PART TWO", "OTHER"]


def test_labels():
    assert lookup_label("B9").category is LabelCategory.ATIS_REQUEST
    assert lookup_label("SQ").category is LabelCategory.NETWORK_MGMT
    assert lookup_label("ZZ").category is LabelCategory.OTHER


def test_label_file_errors(tmp_path):
    p = tmp_path / "l.csv"
    p.write_text("label,category,description\nB9,NOPE,x\n")
    with pytest.raises(ValueError, match="unknown category"):
        load_labels(p)
    p.write_text("B9,ATIS_REQUEST,a\nB9,WEATHER,b\n")
    with pytest.raises(ValueError, match="duplicate"):
        load_labels(p)
