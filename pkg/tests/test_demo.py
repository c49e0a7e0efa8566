import json
from collections import Counter

from acars_audit import demo

from conftest import DEMO


def test_regeneration_matches_shipped(tmp_path):
    written = demo.write_demo(tmp_path)
    assert written
    for name, path in written.items():
        assert path.read_bytes() == (DEMO / path.name).read_bytes(), name


def test_luhn_complete_valid():
    from acars_audit.content import luhn_valid
    for prefix in ("411111111111111", "52000000000", "3714496353984"):
        assert luhn_valid(demo.luhn_complete(prefix))


def test_labeled_balance():
    rows = [json.loads(l) for l in (DEMO / "labeled.jsonl").read_text().splitlines()]
    counts = Counter(c for r in rows for c in r["expect"])
    assert min(counts.values()) >= 40
