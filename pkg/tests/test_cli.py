import json
import shutil

import pytest

from acars_audit import cli, pipeline

from conftest import DEMO


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture(scope="module")
def small(tmp_path_factory):
    """The first 600 demo corpus lines; enough to exercise every stage quickly."""
    d = tmp_path_factory.mktemp("small")
    lines = (DEMO / "corpus.jsonl").read_text().splitlines()[:600]
    (d / "corpus.jsonl").write_text("\n".join(lines) + "\n")
    return d


def demo_args(corpus):
    return ["--input", str(corpus), "--registry", str(DEMO / "registry.csv"),
            "--blocklist", str(DEMO / "blocklist.csv")]


def test_ingest(capsys, small, tmp_path):
    out = tmp_path / "clean.jsonl"
    code, _, err = run(capsys, "ingest", "--input", str(small / "corpus.jsonl"), "--out", str(out))
    assert code == 0
    assert "records" in err and "dedup removed" in err
    rows = [json.loads(l) for l in out.read_text().splitlines()]
    assert rows and {"id", "ts", "link", "frame"} <= set(rows[0])


def test_audit_text_and_findings(capsys, small, tmp_path):
    rep, fcsv = tmp_path / "r.txt", tmp_path / "f.csv"
    code, _, err = run(capsys, "audit", *demo_args(small / "corpus.jsonl"), "--out", str(rep),
                       "--findings-out", str(fcsv))
    assert code == 0, err
    assert rep.read_text().startswith("Privacy requirements")
    assert fcsv.read_text().splitlines()[0] == "record_id,ts,link,registration,stakeholder,blocked,category,concept,grade,entities_json"

    # report re-renders the saved findings into the same grade matrix
    code, out, _ = run(capsys, "report", "--input", str(fcsv), "--out-format", "json")
    assert code == 0
    code, out2, _ = run(capsys, "audit", *demo_args(small / "corpus.jsonl"), "--out-format", "json")
    assert json.loads(out)["grades"] == json.loads(out2)["grades"]


def test_audit_workers_same_output(capsys, small):
    _, one, _ = run(capsys, "audit", *demo_args(small / "corpus.jsonl"), "--out-format", "csv")
    code, two, _ = run(capsys, "audit", *demo_args(small / "corpus.jsonl"), "--out-format", "csv",
                       "--workers", "2")
    assert code == 0 and one == two


def test_missing_registry_exit_1(capsys, small):
    code, _, err = run(capsys, "audit", "--input", str(small / "corpus.jsonl"), "--registry", "/nonexistent.csv")
    assert code == 1 and "--registry" in err


def test_no_registry_exit_1(capsys, small):
    code, _, err = run(capsys, "audit", "--input", str(small / "corpus.jsonl"))
    assert code == 1 and "--registry" in err


def test_malformed_corpus_exit_2(capsys, tmp_path):
    p = tmp_path / "bad.jsonl"
    p.write_text("nope\n{also bad\n")
    code, _, err = run(capsys, "audit", *demo_args(p))
    assert code == 2 and "bad.jsonl" in err


def test_bad_rules_file_names_line(capsys, small, tmp_path):
    p = tmp_path / "rules.csv"
    p.write_text("tier,field,pattern,class,rule_id\n1,wing,x,BUSINESS,R\n")
    code, _, err = run(capsys, "audit", *demo_args(small / "corpus.jsonl"), "--rules", str(p))
    assert code == 1 and "rules.csv:2" in err


def test_config_file_precedence(capsys, small, tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text(f"input = {small / 'corpus.jsonl'}\nregistry = {DEMO / 'registry.csv'}\n"
                   "out-format = json\ndedup_window_s = 5\n")
    code, out, _ = run(capsys, "audit", "--config", str(cfg))
    assert code == 0 and json.loads(out)["grades"]
    code, out, _ = run(capsys, "audit", "--config", str(cfg), "--out-format", "csv")
    assert code == 0 and out.startswith("table,")
    cfg.write_text("colour = blue\n")
    assert run(capsys, "audit", "--config", str(cfg))[0] == 1


def test_build_config_layers():
    c = pipeline.build_config({"dedup_window_s": "10", "registry": "a.csv,b.csv"}, {"dedup_window_s": 3.0})
    assert c.dedup_window_s == 3.0 and c.registry == ["a.csv", "b.csv"]


def test_dedup_window_range(capsys, small):
    code, _, err = run(capsys, "ingest", "--input", str(small / "corpus.jsonl"), "--dedup-window-s", "-1")
    assert code == 1 and "--dedup-window-s" in err


def test_crack_demo(capsys, tmp_path):
    key_out = tmp_path / "key.json"
    code, out, _ = run(capsys, "crack", "--input", str(DEMO / "corpus.jsonl"), "--reference-key",
                       str(DEMO / "cipher_key.json"), "--out", str(key_out), "--samples", "2")
    assert code == 0
    agreement = float(out.split("key agreement: ")[1].split("%")[0])
    assert agreement >= 95.0
    assert json.loads(key_out.read_text())["mapping"]


def test_crack_plaintext_exit_3(capsys, tmp_path):
    plain = tmp_path / "plain.jsonl"
    lines = [l for l in (DEMO / "labeled.jsonl").read_text().splitlines() if "ENCRYPTED" not in l]
    plain.write_text("\n".join(lines) + "\n")
    code, _, err = run(capsys, "crack", "--input", str(plain))
    assert code == 3 and "no messages" in err


def test_crack_unreadable_template_exit_1(capsys):
    code, _, _ = run(capsys, "crack", "--input", str(DEMO / "corpus.jsonl"),
                     "--crib-template", "/nonexistent.txt")
    assert code == 1


def test_crack_template_mismatch_exit_2(capsys, tmp_path):
    t = tmp_path / "t.txt"
    t.write_text("POS N00.000 E000.000\nLLLLLVVLVVVLLVVVLVVV\n")
    code, _, err = run(capsys, "crack", "--input", str(DEMO / "corpus.jsonl"), "--crib-template", str(t))
    assert code == 2 and "template" in err


def test_crack_redacts_samples(capsys, tmp_path, monkeypatch):
    pol = tmp_path / "p.txt"
    pol.write_text("position = mask\n")
    code, out, _ = run(capsys, "crack", "--input", str(DEMO / "corpus.jsonl"), "--redact-policy", str(pol),
                       "--samples", "1")
    assert code == 0
    sample = out.strip().splitlines()[-1]
    assert "POS ****" in sample


def test_redact_command(capsys, small, tmp_path, monkeypatch):
    fcsv, pol = tmp_path / "f.csv", tmp_path / "p.txt"
    lines = (DEMO / "corpus.jsonl").read_text().splitlines()
    card = [l for l in lines if "EXP" in l and "CVV" in l][:5]
    corpus = tmp_path / "cards.jsonl"
    corpus.write_text("\n".join(card) + "\n")
    assert run(capsys, "audit", *demo_args(corpus), "--out", str(tmp_path / "r.txt"),
               "--findings-out", str(fcsv))[0] == 0
    pol.write_text("pan = MASK\nname = PSEUDONYM\n")
    monkeypatch.delenv("ACARS_AUDIT_KEY", raising=False)
    code, _, err = run(capsys, "redact", "--input", str(fcsv), "--redact-policy", str(pol))
    assert code == 1 and "key" in err
    monkeypatch.setenv("ACARS_AUDIT_KEY", "s3cret")
    code, out, _ = run(capsys, "redact", "--input", str(fcsv), "--redact-policy", str(pol))
    assert code == 0
    assert '""redacted"":true' in out and "4111111111111111" not in out
    keyf = tmp_path / "k"
    keyf.write_text("s3cret\n")
    code, out2, _ = run(capsys, "redact", "--input", str(fcsv), "--redact-policy", str(pol), "--key-file", str(keyf))
    assert out2 == out


def test_version(capsys):
    with pytest.raises(SystemExit):
        cli.main(["--version"])
    assert "acars-audit" in capsys.readouterr().out
