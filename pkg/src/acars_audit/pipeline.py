"""Run configuration and the ingest -> parse -> enrich -> detect -> audit pipeline."""
from __future__ import annotations

import json
import logging
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, fields
from pathlib import Path

from . import audit as audit_mod
from .cipher import SubstitutionKey
from .content import ContentRules, ContentScanner, Finding
from .frames import ParseFailure, parse_frame
from .ingest import DEFAULT_DEDUP_WINDOW_S, AcarsRecord, LoadSummary, dedupe, load_corpus
from .registry import (Blocklist, RegistrantKind, StakeholderClass, classify_stakeholder,
                       detect_registrant_kind, load_blocklist, load_countries, load_ofc_list, load_registry,
                       load_rules, norm_reg, ofc_territory)
from .report import ConfigError, RedactionPolicy, parse_policy

log = logging.getLogger(__name__)

KEY_ENV = "ACARS_AUDIT_KEY"
INPUT_FORMATS = ("jsonl", "rawlog")
MAX_DEDUP_WINDOW_S = 86400.0


@dataclass
class RunConfig:
    input: list = field(default_factory=list)
    input_format: list = field(default_factory=list)
    registry: list = field(default_factory=list)
    blocklist: str | None = None
    rules: str | None = None
    ofc_list: str | None = None
    gazetteer: str | None = None
    countries: str | None = None
    keywords: str | None = None
    requirements: str | None = None
    crib_template: str | None = None
    cipher_key: str | None = None
    reference_key: str | None = None
    dedup_window_s: float = DEFAULT_DEDUP_WINDOW_S
    offshore_threshold: int = 5
    out: str | None = None
    out_format: str = "text"
    findings_out: str | None = None
    redact_policy: str | None = None
    key_file: str | None = None
    workers: int = 1

    LIST_FIELDS = ("input", "input_format", "registry")
    FLOAT_FIELDS = ("dedup_window_s",)
    INT_FIELDS = ("offshore_threshold", "workers")

    def formats(self) -> list[str]:
        fmts = list(self.input_format) or ["jsonl"]
        if len(fmts) == 1:
            return fmts * len(self.input)
        if len(fmts) != len(self.input):
            raise ConfigError("--input-format: give one format, or one per --input")
        return fmts

    def validate(self, need_registry: bool = False) -> None:
        if not self.input:
            raise ConfigError("--input: at least one input file is required")
        for f in self.formats():
            if f not in INPUT_FORMATS:
                raise ConfigError(f"--input-format: unknown format {f!r} (expected jsonl or rawlog)")
        for p in self.input:
            _must_exist("--input", p)
        if need_registry and not self.registry:
            raise ConfigError("--registry: at least one registry file is required")
        for p in self.registry:
            _must_exist("--registry", p)
        for flag in ("blocklist", "rules", "ofc_list", "gazetteer", "countries", "requirements",
                     "crib_template", "cipher_key", "reference_key", "redact_policy", "key_file"):
            value = getattr(self, flag)
            if value is not None:
                _must_exist("--" + flag.replace("_", "-"), value)
        if self.keywords is not None and not Path(self.keywords).is_dir():
            raise ConfigError(f"--keywords: {self.keywords} is not a directory")
        if not 0 <= self.dedup_window_s <= MAX_DEDUP_WINDOW_S:
            raise ConfigError(f"--dedup-window-s: must be within [0, {MAX_DEDUP_WINDOW_S:g}]")
        if self.offshore_threshold < 0:
            raise ConfigError("--offshore-threshold: must be >= 0")
        if self.workers < 1:
            raise ConfigError("--workers: must be >= 1")

    def key(self) -> bytes | None:
        if self.key_file:
            return Path(self.key_file).read_bytes().strip()
        env = os.environ.get(KEY_ENV)
        return env.encode("utf-8") if env else None

    def policy(self) -> RedactionPolicy | None:
        if not self.redact_policy:
            return None
        text = Path(self.redact_policy).read_text(encoding="utf-8")
        pol = parse_policy(text, self.key(), self.redact_policy)
        pol.validate()
        return pol


def _must_exist(flag: str, path) -> None:
    if not Path(path).exists():
        raise ConfigError(f"{flag}: {path} does not exist")


def read_config_file(path) -> dict:
    """Flat ``key = value`` file; list-valued keys take comma-separated values."""
    out: dict = {}
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"--config: cannot read {path} ({exc})") from None
    names = {f.name for f in fields(RunConfig)}
    for n, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"{path}: line {n}: expected key = value")
        k, v = (s.strip() for s in line.split("=", 1))
        k = k.lstrip("-").replace("-", "_")
        if k not in names:
            raise ConfigError(f"{path}: line {n}: unknown key {k!r}")
        out[k] = v
    return out


def build_config(file_values: dict, flag_values: dict) -> RunConfig:
    """Defaults, then config file values, then explicit flags."""
    cfg = RunConfig()
    for source in (file_values, flag_values):
        for k, v in source.items():
            if v is None or (k in RunConfig.LIST_FIELDS and v == []):
                continue
            try:
                if k in RunConfig.LIST_FIELDS and isinstance(v, str):
                    v = [p.strip() for p in v.split(",") if p.strip()]
                elif k in RunConfig.FLOAT_FIELDS:
                    v = float(v)
                elif k in RunConfig.INT_FIELDS:
                    v = int(v)
            except ValueError:
                raise ConfigError(f"--{k.replace('_', '-')}: invalid value {v!r}") from None
            setattr(cfg, k, v)
    return cfg


# -- stages -----------------------------------------------------------------

def load_records(cfg: RunConfig) -> tuple[list[AcarsRecord], list[LoadSummary], int]:
    """Load every input, merge by timestamp, dedupe. Returns (records, summaries, removed)."""
    merged: list[AcarsRecord] = []
    summaries = []
    for path, fmt in zip(cfg.input, cfg.formats()):
        corpus = load_corpus(path, fmt)
        merged.extend(corpus.records)
        summaries.append(corpus.summary)
    merged.sort(key=lambda r: r.timestamp)
    kept = dedupe(merged, cfg.dedup_window_s)
    return kept, summaries, len(merged) - len(kept)


def load_key(path) -> SubstitutionKey:
    obj = json.loads(Path(path).read_text(encoding="utf-8"))
    return SubstitutionKey(dict(obj["mapping"]))


@dataclass
class Enrichment:
    stakeholders: dict
    blocked: set
    offshore: dict  # territory -> set of registrations


def enrich(registrations, cfg: RunConfig) -> Enrichment:
    countries = load_countries(cfg.countries) if cfg.countries else None
    index = load_registry(cfg.registry, countries) if cfg.registry else None
    rules = load_rules(cfg.rules)
    ofc = load_ofc_list(cfg.ofc_list)
    blocklist = load_blocklist(cfg.blocklist) if cfg.blocklist else Blocklist()
    stakeholders, offshore = {}, {}
    for reg in sorted(registrations):
        rec = index.lookup(registration=reg) if index is not None else None
        cls = classify_stakeholder(rec, rules).stakeholder
        stakeholders[reg] = cls
        if rec is not None and cls is StakeholderClass.BUSINESS \
                and detect_registrant_kind(rec, ofc, countries) is RegistrantKind.OFFSHORE_SHELL:
            terr = ofc_territory(rec, ofc, countries)
            if terr:
                offshore.setdefault(terr, set()).add(reg)
    blocked = {reg for reg in registrations if reg in blocklist}
    return Enrichment(stakeholders, blocked, offshore)


def make_scanner(cfg: RunConfig) -> ContentScanner:
    rules = ContentRules.load(gazetteer=cfg.gazetteer, keywords_dir=cfg.keywords)
    key = load_key(cfg.cipher_key) if cfg.cipher_key else None
    return ContentScanner(rules, cipher_key=key)


def parse_records(records):
    messages, failures = [], []
    for rec in records:
        try:
            messages.append(parse_frame(rec))
        except ParseFailure as exc:
            failures.append(exc)
    return messages, failures


def _scan_shard(args):
    cfg, messages = args
    scanner = make_scanner(cfg)
    out: list[Finding] = []
    for m in messages:
        out.extend(scanner.scan(m))
    return out


def detect(messages, cfg: RunConfig) -> list[Finding]:
    """Scan messages, sharded by aircraft across ``cfg.workers`` processes."""
    if cfg.workers <= 1 or len(messages) < 2:
        return _scan_shard((cfg, messages))
    shards: list[list] = [[] for _ in range(cfg.workers)]
    order = {}
    for m in messages:
        reg = norm_reg(m.registration)
        shards[order.setdefault(reg, len(order)) % cfg.workers].append(m)
    with ProcessPoolExecutor(cfg.workers) as pool:
        parts = list(pool.map(_scan_shard, [(cfg, s) for s in shards if s]))
    # Restore corpus order so downstream output is independent of sharding.
    findings = [f for part in parts for f in part]
    pos = {(m.source.record_id if m.source else None): i for i, m in enumerate(messages)}
    findings.sort(key=lambda f: pos.get(f.record_id, len(pos)))
    return findings


@dataclass
class AuditResult:
    report: audit_mod.AuditReport
    rows: list
    findings: list
    summaries: list
    dedup_removed: int
    parse_failures: list


def provenance(cfg: RunConfig) -> dict:
    prov = {}
    named = [("input", p) for p in cfg.input] + [("registry", p) for p in cfg.registry]
    for flag in ("blocklist", "rules", "ofc_list", "gazetteer", "countries", "requirements", "cipher_key"):
        if getattr(cfg, flag):
            named.append((flag, getattr(cfg, flag)))
    for kind, p in named:
        prov[f"{kind}:{Path(p).name}"] = audit_mod.file_digest(p)
    return prov


def run_audit(cfg: RunConfig) -> AuditResult:
    records, summaries, removed = load_records(cfg)
    messages, failures = parse_records(records)
    enr = enrich({norm_reg(m.registration) for m in messages}, cfg)
    findings = detect(messages, cfg)
    matrix = audit_mod.load_requirement_matrix(cfg.requirements)
    rows = audit_mod.grade_rows(findings, enr.stakeholders, enr.blocked)
    report = audit_mod.report_from_rows(rows, matrix)
    report.offshore = enr.offshore
    report.offshore_threshold = cfg.offshore_threshold
    report.provenance = provenance(cfg)
    return AuditResult(report, rows, findings, summaries, removed, failures)
