import json
from pathlib import Path

import pytest

from acars_audit.demo import demo_dir
from acars_audit.frames import AcarsMessage
from acars_audit.ingest import AcarsRecord, Direction, Link

DEMO = demo_dir()


def make_msg(text, label="H1", reg="N512GA", link=Link.VHF_POA, direction=Direction.UNKNOWN, rid="t:1",
             block="2", msg_no="M01A"):
    src = AcarsRecord(rid, 1_530_000_000.0, link, "", direction=direction)
    if block is not None and not block.isdigit():
        msg_no = None
    return AcarsMessage("2", reg, "!", label, block, msg_no, None, text, source=src)


@pytest.fixture
def msg():
    return make_msg


@pytest.fixture(scope="session")
def demo():
    return DEMO


@pytest.fixture
def write_jsonl(tmp_path):
    def _write(rows, name="c.jsonl"):
        p = tmp_path / name
        p.write_text("\n".join(r if isinstance(r, str) else json.dumps(r) for r in rows) + "\n")
        return p
    return _write
