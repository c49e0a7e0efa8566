import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from acars_audit.audit import grade_matrix, grade_rows, report_from_rows
from acars_audit.content import Category, Entity, Finding, scan
from acars_audit.ingest import Link
from acars_audit.registry import StakeholderClass as S
from acars_audit.report import (FINDINGS_COLUMNS, ConfigError, RedactAction, RedactionPolicy, UsageError,
                                entities_from_json, entities_to_json, findings_csv, mask_value, parse_policy,
                                read_findings_csv, redact, redact_rows, redact_text, render)

from conftest import make_msg

KEY = b"test-key"


def sample_findings():
    fs = []
    texts = [("POS N47.458 E008.555", "N1"), ("CC 4111 1111 1111 1111 EXP 09/27 CVV 123", "GABC"),
             ("CNX PAX\nSMITH/J MR 12A LX318 ZRH", "GABC"), ("PLS SEND PAX NAMES", "N1")]
    for i, (t, reg) in enumerate(texts):
        fs += scan(make_msg(t, reg=reg, rid=f"s{i}"))
    return fs


SH = {"N1": S.BUSINESS, "GABC": S.COMMERCIAL}


@pytest.mark.parametrize("fmt", ["text", "csv", "json"])
def test_render_deterministic(fmt):
    r = grade_matrix(sample_findings(), SH)
    assert render(r, fmt) == render(grade_matrix(sample_findings(), SH), fmt)


def test_render_unknown_format():
    with pytest.raises(UsageError):
        render(grade_matrix([], {}), "xml")


def test_empty_report_headers_only():
    text = render(grade_matrix([], {}), "text").decode()
    assert "Stakeholder  Existence" in text
    assert "Leaks on" not in text
    rows = render(grade_matrix([], {}), "csv").decode().splitlines()
    assert rows[0].startswith("table,stakeholder")
    assert {r.split(",")[0] for r in rows[1:]} == {"grade"}


def test_distinct_matrices_render_distinct():
    a = grade_matrix(sample_findings(), SH)
    b = grade_matrix(sample_findings()[:1], SH)
    for fmt in ("text", "csv", "json"):
        assert render(a, fmt) != render(b, fmt)


def test_json_structure():
    doc = json.loads(render(grade_matrix(sample_findings(), SH), "json"))
    assert doc["grades"]["COMMERCIAL"]["PASSENGER_CARGO"] == "X"
    assert doc["grades"]["COMMERCIAL"]["EXISTENCE"] == "N/A"
    assert doc["grades"]["BUSINESS"]["STATUS"] == "X"


def test_findings_csv_round_trip(tmp_path):
    rows = grade_rows(sample_findings(), SH, blocked={"N1"})
    data = findings_csv(rows)
    assert data.decode().splitlines()[0] == ",".join(FINDINGS_COLUMNS)
    p = tmp_path / "f.csv"
    p.write_bytes(data)
    back = read_findings_csv(p)
    assert back == rows
    assert render(report_from_rows(back)) == render(report_from_rows(rows))


def test_findings_csv_bad_header(tmp_path):
    p = tmp_path / "f.csv"
    p.write_text("a,b\n1,2\n")
    with pytest.raises(ValueError, match="line 1"):
        read_findings_csv(p)


def test_entities_json_round_trip():
    f = scan(make_msg("POS N47.458 E008.555"))[0]
    assert entities_from_json(entities_to_json(f.entities)) == f.entities


def test_mask_pan():
    assert mask_value("pan", "4111111111111111") == "************1111"
    assert mask_value("name", "SMITH/J") == "*******"


def test_redact_rules():
    policy = RedactionPolicy(KEY, {"pan": RedactAction.MASK, "name": RedactAction.PSEUDONYM})
    fs = sample_findings()
    out = redact(fs, policy)
    assert len(out) == len(fs)
    assert [f.category for f in out] == [f.category for f in fs]
    card = next(f for f in out if f.category is Category.CARD_FULL)
    assert card.values("pan") == ["************1111"]
    assert card.values("cvv") == ["123"]  # KEEP by default
    name = next(f for f in out if f.category is Category.PASSENGER_MANIFEST and f.has("name"))
    token, = name.values("name")
    assert len(token) == 8 and int(token, 16) >= 0
    assert [e.span for e in name.entities] == [e.span for e in fs[2].entities]


def test_pseudonym_deterministic():
    policy = RedactionPolicy(KEY, {"name": RedactAction.PSEUDONYM})
    e = (Entity("name", "SMITH/J", (0, 7)),)
    f = Finding(make_msg("SMITH/J"), Category.PASSENGER_MANIFEST, e)
    a, = redact([f], policy)
    b, = redact([f], policy)
    assert a.entities == b.entities
    other, = redact([f], RedactionPolicy(b"other", {"name": RedactAction.PSEUDONYM}))
    assert other.entities != a.entities


def test_pseudonym_without_key():
    with pytest.raises(ConfigError):
        redact([], RedactionPolicy(None, {"name": RedactAction.PSEUDONYM}))


@given(st.sampled_from(list(RedactAction)), st.sampled_from(list(RedactAction)))
def test_redact_idempotent(a1, a2):
    policy = RedactionPolicy(KEY, {"pan": a1, "name": a2, "email": a1})
    once = redact(sample_findings(), policy)
    assert redact(once, policy) == once
    assert [f.entities for f in redact(once, policy)] == [f.entities for f in once]


def test_redact_rows_and_text():
    policy = RedactionPolicy(KEY, {"pan": RedactAction.MASK})
    rows = grade_rows(sample_findings(), SH)
    out = redact_rows(rows, policy)
    assert len(out) == len(rows)
    assert "4111111111111111" not in "".join(r.entities_json for r in out)
    text = "CC 4111 1111 1111 1111 EXP 09/27 CVV 123"
    f = scan(make_msg(text))[0]
    assert redact_text(text, f.entities, policy) == "CC ************1111 EXP 09/27 CVV 123"


def test_parse_policy():
    p = parse_policy("# comment\npan = mask\n* = pseudonym\n", KEY)
    assert p.action("pan") is RedactAction.MASK
    assert p.action("email") is RedactAction.PSEUDONYM
    with pytest.raises(ConfigError, match="line 1"):
        parse_policy("pan = shred\n")
