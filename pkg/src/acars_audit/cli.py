"""``acars-audit`` command line.

Exit codes: 0 success, 1 configuration error, 2 corpus rejected or crib
alignment failure, 3 no encrypted messages to attack.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import __version__
from . import cipher, pipeline
from .audit import load_requirement_matrix, report_from_rows
from .frames import ParseFailure
from .ingest import CorpusIOError, CorpusRejected
from .registry import RegistryError
from .report import (ConfigError, UsageError, findings_csv, read_findings_csv, redact_rows, redact_text,
                     render)

EXIT_OK, EXIT_CONFIG, EXIT_REJECTED, EXIT_NO_ENCRYPTED = 0, 1, 2, 3
log = logging.getLogger("acars_audit")


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="flat key=value file; flags override it")
    p.add_argument("--input", action="append", default=[], help="corpus file (repeatable)")
    p.add_argument("--input-format", action="append", default=[], choices=pipeline.INPUT_FORMATS,
                   help="jsonl or rawlog; once for all inputs or once per --input")
    p.add_argument("--out", help="output path (default stdout)")
    p.add_argument("--out-format", choices=("text", "csv", "json"))
    p.add_argument("--dedup-window-s", type=float)
    p.add_argument("-v", "--verbose", action="store_true")


def _add_enrich(p: argparse.ArgumentParser) -> None:
    p.add_argument("--registry", action="append", default=[], help="registry CSV (repeatable, later wins)")
    p.add_argument("--blocklist")
    p.add_argument("--rules", help="stakeholder rule table CSV")
    p.add_argument("--ofc-list", help="off-shore territory list")
    p.add_argument("--countries", help="country gazetteer (name|alias per line)")
    p.add_argument("--gazetteer", help="aerodrome ICAO code list")
    p.add_argument("--keywords", help="directory of keyword lists")
    p.add_argument("--requirements", help="requirement matrix override CSV")
    p.add_argument("--cipher-key", help="recovered key JSON; decrypts weakly enciphered traffic")
    p.add_argument("--offshore-threshold", type=int)
    p.add_argument("--findings-out", help="also write the per-finding CSV here")
    p.add_argument("--redact-policy")
    p.add_argument("--key-file")
    p.add_argument("--workers", type=int)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="acars-audit", description="Privacy audit of captured ACARS traffic.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="validate and deduplicate corpora")
    _add_common(p)

    p = sub.add_parser("audit", help="run the full pipeline and write the audit report")
    _add_common(p)
    _add_enrich(p)

    p = sub.add_parser("report", help="re-render a saved findings CSV")
    _add_common(p)
    _add_enrich(p)

    p = sub.add_parser("crack", help="recover a substitution key from enciphered traffic")
    _add_common(p)
    _add_enrich(p)
    p.add_argument("--crib-template")
    p.add_argument("--reference-key", help="true key JSON, to report agreement")
    p.add_argument("--samples", type=int, default=5)

    p = sub.add_parser("redact", help="redact entity values in a findings CSV")
    _add_common(p)
    p.add_argument("--redact-policy")
    p.add_argument("--key-file")
    return ap


_NON_CONFIG = {"command", "config", "verbose", "samples"}


def config_from_args(args: argparse.Namespace) -> pipeline.RunConfig:
    file_values = pipeline.read_config_file(args.config) if args.config else {}
    flags = {k: v for k, v in vars(args).items() if k not in _NON_CONFIG}
    return pipeline.build_config(file_values, flags)


def _write(cfg: pipeline.RunConfig, data: bytes) -> None:
    if cfg.out:
        Path(cfg.out).write_bytes(data)
    else:
        sys.stdout.buffer.write(data)
        sys.stdout.flush()


def _summarise(summaries, removed, failures=()) -> None:
    for s in summaries:
        print(str(s), file=sys.stderr)
    print(f"dedup removed {removed} records", file=sys.stderr)
    if failures:
        print(f"{len(failures)} frames failed to parse", file=sys.stderr)


# -- subcommands --------------------------------------------------------------

def cmd_ingest(cfg: pipeline.RunConfig) -> int:
    cfg.validate()
    records, summaries, removed = pipeline.load_records(cfg)
    _summarise(summaries, removed)
    lines = [json.dumps({"id": r.record_id, "ts": r.timestamp, "link": r.link.value, "freq": r.frequency_mhz,
                         "dir": r.direction.value, "err": r.capture_errors, "frame": r.raw_frame},
                        sort_keys=True) for r in records]
    _write(cfg, ("\n".join(lines) + ("\n" if lines else "")).encode("utf-8"))
    return EXIT_OK


def cmd_audit(cfg: pipeline.RunConfig) -> int:
    cfg.validate(need_registry=True)
    policy = cfg.policy()
    result = pipeline.run_audit(cfg)
    _summarise(result.summaries, result.dedup_removed, result.parse_failures)
    _write(cfg, render(result.report, cfg.out_format))
    if cfg.findings_out:
        rows = redact_rows(result.rows, policy) if policy else result.rows
        Path(cfg.findings_out).write_bytes(findings_csv(rows))
    return EXIT_OK


def cmd_report(cfg: pipeline.RunConfig) -> int:
    if not cfg.input:
        raise ConfigError("--input: a findings CSV is required")
    for p in cfg.input:
        pipeline._must_exist("--input", p)
    rows = [r for p in cfg.input for r in read_findings_csv(p)]
    report = report_from_rows(rows, load_requirement_matrix(cfg.requirements))
    report.offshore_threshold = cfg.offshore_threshold
    if cfg.registry:
        report.offshore = pipeline.enrich({r.registration for r in rows}, cfg).offshore
    _write(cfg, render(report, cfg.out_format))
    return EXIT_OK


def cmd_redact(cfg: pipeline.RunConfig) -> int:
    if not cfg.input:
        raise ConfigError("--input: a findings CSV is required")
    if not cfg.redact_policy:
        raise ConfigError("--redact-policy: required for redact")
    for p in cfg.input:
        pipeline._must_exist("--input", p)
    pipeline._must_exist("--redact-policy", cfg.redact_policy)
    policy = cfg.policy()
    rows = [r for p in cfg.input for r in read_findings_csv(p)]
    _write(cfg, findings_csv(redact_rows(rows, policy)))
    return EXIT_OK


def cmd_crack(cfg: pipeline.RunConfig, template_path: str | None = None, samples: int = 5) -> int:
    cfg.validate()
    template_path = template_path or cfg.crib_template
    template = cipher.load_template(template_path)
    policy = cfg.policy()
    records, summaries, removed = pipeline.load_records(cfg)
    messages, failures = pipeline.parse_records(records)
    _summarise(summaries, removed, failures)
    scanner = pipeline.make_scanner(cfg)
    encrypted = [m for m in messages
                 if not scanner.content_findings(m)
                 and cipher.classify_encrypted(m.text, detector_hit=False).is_encrypted]
    if not encrypted:
        print("error: no messages were classified as weakly encrypted; nothing to attack", file=sys.stderr)
        return EXIT_NO_ENCRYPTED
    texts = [m.text for m in encrypted]
    key = cipher.crack_with_crib(texts, template)
    aligned = sum(template.matches_shape(t) for t in texts)
    lines = [f"encrypted messages: {len(encrypted)}", f"aligned with template: {aligned}",
             f"key coverage: {key.coverage:.2%}"]
    if cfg.reference_key:
        ref = pipeline.load_key(cfg.reference_key)
        lines.append(f"key agreement: {cipher.key_agreement(key, ref, texts):.2%}")
    for m in encrypted[:samples]:
        plain = cipher.decrypt(m.text, key, missing="?")
        if policy is not None:
            from dataclasses import replace

            ents = [e for f in scanner.content_findings(replace(m, text=plain)) for e in f.entities]
            plain = redact_text(plain, ents, policy)
        rid = m.source.record_id if m.source else "-"
        lines.append(f"{rid}: {plain}")
    print("\n".join(lines))
    if cfg.out:
        doc = {"coverage": key.coverage, "mapping": dict(sorted(key.mapping.items()))}
        Path(cfg.out).write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    try:
        cfg = config_from_args(args)
        if cfg.out_format not in ("text", "csv", "json"):
            raise ConfigError(f"--out-format: unknown format {cfg.out_format!r}")
        if args.command == "ingest":
            return cmd_ingest(cfg)
        if args.command == "audit":
            return cmd_audit(cfg)
        if args.command == "report":
            return cmd_report(cfg)
        if args.command == "redact":
            return cmd_redact(cfg)
        return cmd_crack(cfg, args.crib_template, args.samples)
    except CorpusRejected as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_REJECTED
    except cipher.CribAlignmentError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_REJECTED
    except (ConfigError, UsageError, RegistryError, CorpusIOError, ParseFailure) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (ValueError, OSError) as exc:
        # Malformed rule tables, requirement files, keys and templates.
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
