import random
from decimal import Decimal

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from acars_audit.audit import (AuditReport, BreachGrade, PrivacyConcept, RequirementLevel, RequirementMatrix,
                               concept_of, grade_matrix, infer_direction, load_requirement_matrix,
                               offshore_summary, percent, percent_value)
from acars_audit.content import Category, Entity, Finding, scan
from acars_audit.ingest import Direction, Link
from acars_audit.registry import RegistrantKind, StakeholderClass as S

from conftest import make_msg

E, I, ST, PC = (PrivacyConcept.EXISTENCE, PrivacyConcept.INTENTION, PrivacyConcept.STATUS,
                PrivacyConcept.PASSENGER_CARGO)
X, V, N = BreachGrade.EXPLICIT, BreachGrade.EVIDENCE, BreachGrade.NO_EVIDENCE


def only(text, **kw):
    f, = scan(make_msg(text, **kw))
    return f


def test_position_downlink():
    f = only("POS N47.458 E008.555 FL410")
    assert concept_of(f, Direction.DOWNLINK) == {(E, X), (ST, X)}


def test_position_uplink_is_evidence():
    assert (ST, V) in concept_of(only("POS N47.458 E008.555"), Direction.UPLINK)


def test_medical_context_uplink():
    f = only("PLS ADV DETAILS ON UNWELL PASSENGERS", block="A")
    assert concept_of(f, Direction.UPLINK) == {(E, X), (PC, V)}


def test_existence_only():
    assert concept_of(only("", label="SQ"), "downlink") == {(E, X)}


def test_intention_grades():
    assert (I, X) in concept_of(only("REQ ATIS LSZH", label="B9"))
    assert (I, V) in concept_of(only("REQ ATIS", label="B9"))


def test_passenger_grades():
    assert (PC, X) in concept_of(only("CC 4111 1111 1111 1111 EXP 09/27 CVV 123"))
    assert (PC, V) in concept_of(only("PLS SEND PAX NAMES", block="A"))
    assert (PC, V) in concept_of(only("CONTACT OPS@EXAMPLE.COM"))


def test_encrypted_without_plaintext():
    f = Finding(make_msg("x"), Category.ENCRYPTED_WEAK)
    assert concept_of(f) == {(E, X), (ST, V)}


def test_direction_inference():
    assert infer_direction(Link.SATCOM_UPLINK) is Direction.UPLINK
    assert infer_direction(Link.SATCOM_DOWNLINK) is Direction.DOWNLINK
    assert infer_direction(Link.VHF_POA) is Direction.DOWNLINK
    assert infer_direction(Link.HF) is Direction.UNKNOWN
    assert infer_direction(Link.VHF_POA, Direction.UPLINK) is Direction.UPLINK


def test_percent_examples():
    assert percent(1617, 1701) == "95.06%"
    assert percent(2287, 8927) == "25.62%"
    assert percent(0, 5) == "0.00%"
    assert percent(1, 0) == "—"
    assert percent(1, 8) == "12.50%"
    assert percent(1, 200) == "0.50%"


@given(st.integers(0, 10**6), st.integers(1, 10**6))
def test_percent_half_up(n, d):
    exact = Decimal(n) * 100 / Decimal(d)
    got = percent_value(n, d)
    assert abs(got - exact) <= Decimal("0.005")


def test_default_matrix():
    m = RequirementMatrix.default()
    L, H, NN = RequirementLevel.LOW, RequirementLevel.HIGH, RequirementLevel.NONE
    assert [m.level(S.BUSINESS, c) for c in (E, I, ST, PC)] == [L, H, H, H]
    assert [m.level(S.COMMERCIAL, c) for c in (E, I, ST, PC)] == [NN, NN, NN, H]
    assert m.military_operational_assumption


def test_matrix_override(tmp_path):
    p = tmp_path / "m.csv"
    p.write_text("stakeholder,concept,level\ncommercial,existence,low\n")
    m = load_requirement_matrix(p)
    assert m.level(S.COMMERCIAL, E) is RequirementLevel.LOW
    p.write_text("commercial,existence\n")
    with pytest.raises(ValueError):
        load_requirement_matrix(p)


def test_empty_corpus_all_n():
    r = grade_matrix([], {})
    assert all(r.grade(s, c) is N for s in S if s is not S.UNKNOWN for c in (E, I, ST, PC))
    assert r.cell(S.BUSINESS, E) == "N"
    assert r.cell(S.COMMERCIAL, E) == "N/A"


def test_single_atis_uplink():
    m = make_msg("REQ ATIS LSZH", label="B9", block="A", link=Link.SATCOM_UPLINK, reg="N512GA")
    r = grade_matrix(scan(m), {"N512GA": S.BUSINESS})
    assert r.grade(S.BUSINESS, I) is X
    assert all(r.grade(S.BUSINESS, c) <= V for c in (ST, PC))


def test_requirement_does_not_change_grade():
    fs = scan(make_msg("POS N47.458 E008.555", reg="G-ABCD"))
    sh = {"GABCD": S.COMMERCIAL}
    a = grade_matrix(fs, sh)
    b = grade_matrix(fs, sh, RequirementMatrix.default().with_overrides([("commercial", "status", "high")]))
    assert a.grades == b.grades
    assert a.cell(S.COMMERCIAL, ST) == "N/A" and b.cell(S.COMMERCIAL, ST) == "X"


def test_counters_blocked_le_total():
    fs = []
    for i, reg in enumerate(["N1", "N2", "N3"]):
        fs += scan(make_msg("POS N47.458 E008.555", reg=reg, rid=f"r{i}"))
    r = grade_matrix(fs, {"N1": S.BUSINESS, "N2": S.BUSINESS, "N3": S.BUSINESS}, blocked={"N2"})
    a, ba, m, bm = r.category_cell(S.BUSINESS, Category.POSITION_REPORT).counts()
    assert (a, ba, m, bm) == (3, 1, 3, 1)


def test_offshore_summary_order_and_threshold():
    rows = []
    for terr, n in [("Malta", 61), ("Isle of Man", 118), ("Jersey", 5)]:
        rows += [(f"{terr}{i}", S.BUSINESS, RegistrantKind.OFFSHORE_SHELL, terr) for i in range(n)]
    rows.append(("X1", S.COMMERCIAL, RegistrantKind.OFFSHORE_SHELL, "Malta"))
    rows.append(("X2", S.BUSINESS, RegistrantKind.DIRECT, "Malta"))
    assert offshore_summary(rows) == [("Isle of Man", 118), ("Malta", 61)]
    assert offshore_summary(rows, threshold=4)[-1] == ("Jersey", 5)
    assert offshore_summary([("N1", S.BUSINESS, RegistrantKind.DIRECT, None)]) == []


# -- merge laws ---------------------------------------------------------------

TEXTS = ["POS N47.458 E008.555", "REQ ATIS LSZH", "PLS SEND PAX NAMES", "", "CONTACT OPS@EXAMPLE.COM",
         "CC 4111 1111 1111 1111 EXP 09/27 CVV 123", "REQ WHEELCHAIR ON ARR"]
REGS = ["N1", "N2", "GABC", "MIL1", "ST1", "UNK"]
SH = {"N1": S.BUSINESS, "N2": S.BUSINESS, "GABC": S.COMMERCIAL, "MIL1": S.MILITARY, "ST1": S.STATE}
LINKS = list(Link)


def random_findings(rng, n):
    out = []
    for i in range(n):
        link = rng.choice(LINKS)
        up = link is Link.SATCOM_UPLINK
        m = make_msg(rng.choice(TEXTS), reg=rng.choice(REGS), link=link, rid=f"m{i}",
                     block="A" if up else "2", label=rng.choice(["H1", "B9", "SQ"]))
        out += scan(m)
    return out


@settings(max_examples=1000, deadline=None)
@given(st.integers(0, 2**32))
def test_merge_equals_whole(seed):
    rng = random.Random(seed)
    fs = random_findings(rng, rng.randint(0, 12))
    cut = rng.randint(0, len(fs))
    shuffled = fs[:]
    rng.shuffle(shuffled)
    blocked = {"N2", "MIL1"}
    whole = grade_matrix(fs, SH, blocked=blocked)
    a = grade_matrix(shuffled[:cut], SH, blocked=blocked)
    b = grade_matrix(shuffled[cut:], SH, blocked=blocked)
    assert a.merge(b).matrix_equal(whole)
    assert b.merge(a).matrix_equal(whole)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32))
def test_merge_associative_and_monotone(seed):
    rng = random.Random(seed)
    parts = [grade_matrix(random_findings(rng, rng.randint(0, 5)), SH) for _ in range(3)]
    left = parts[0].merge(parts[1]).merge(parts[2])
    right = parts[0].merge(parts[1].merge(parts[2]))
    assert left.matrix_equal(right)
    for k, g in parts[0].grades.items():
        assert left.grades[k] >= g


def test_merge_identity():
    r = grade_matrix(random_findings(random.Random(1), 8), SH)
    assert r.merge(AuditReport()).matrix_equal(r)


def test_merge_rejects_different_matrices():
    other = RequirementMatrix.default().with_overrides([("state", "existence", "high")])
    with pytest.raises(ValueError):
        AuditReport().merge(AuditReport(other))
