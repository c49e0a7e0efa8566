"""Weak-encryption screening and known-plaintext recovery of substitution keys.

Some operators "protect" position reports with a monoalphabetic substitution
over the ACARS character set. The reports follow a fixed layout, so a crib
template (literal characters at known offsets, variable fields elsewhere)
pins most of the key; the remaining cipher characters are assigned by
maximising the likelihood of the template's per-position digit statistics.
"""
from __future__ import annotations

import math
import random
import string
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np
from scipy.optimize import linear_sum_assignment

from . import kernels

ALPHABET = string.ascii_uppercase + string.digits + " .,-/:+()'?=*#"
_ALPHA_SET = frozenset(ALPHABET)
_IMPOSSIBLE = -50.0  # log-probability charged per occurrence outside a field's support


class CribAlignmentError(ValueError):
    pass


class CribInconsistencyError(ValueError):
    def __init__(self, collisions):
        self.collisions = collisions
        desc = "; ".join(f"{c!r} -> {a!r} vs {b!r}" for c, a, b in collisions)
        super().__init__(f"contradictory crib constraints: {desc}")


@dataclass(frozen=True)
class CipherConfig:
    min_length: int = 40
    min_printable: float = 0.9
    ioc_floor: float = 0.035
    max_mean_token: float = 12.0


@dataclass(frozen=True)
class CipherVerdict:
    is_encrypted: bool
    index_of_coincidence: float
    printable_ratio: float
    mean_token_length: float = 0.0


@dataclass
class SubstitutionKey:
    """``mapping`` sends cipher characters to plaintext characters."""

    mapping: dict[str, str]
    alphabet: str = ALPHABET
    coverage: float = field(init=False)

    def __post_init__(self):
        plains = list(self.mapping.values())
        if len(set(plains)) != len(plains):
            raise ValueError("substitution key is not injective")
        self.coverage = len(self.mapping) / len(self.alphabet)

    def inverse(self) -> dict[str, str]:
        return {p: c for c, p in self.mapping.items()}


def random_key(rng: random.Random | None = None, alphabet: str = ALPHABET) -> SubstitutionKey:
    rng = rng or random.Random()
    shuffled = list(alphabet)
    rng.shuffle(shuffled)
    return SubstitutionKey(dict(zip(shuffled, alphabet)), alphabet)


def identity_key(alphabet: str = ALPHABET) -> SubstitutionKey:
    return SubstitutionKey({c: c for c in alphabet}, alphabet)


def encrypt(plaintext: str, key: SubstitutionKey) -> str:
    table = str.maketrans(key.inverse())
    return plaintext.translate(table)


def decrypt(ciphertext: str, key: SubstitutionKey, missing: str | None = None) -> str:
    """Apply the key; alphabet characters the key lacks become ``missing``
    (or pass through when ``missing`` is None)."""
    table = dict(key.mapping)
    if missing is not None:
        for ch in key.alphabet:
            table.setdefault(ch, missing)
    return ciphertext.translate(str.maketrans(table))


# -- screening --------------------------------------------------------------

def text_stats(text: str, alphabet: str = ALPHABET) -> tuple[float, float, float]:
    """(index of coincidence, printable ratio, mean whitespace-token length)."""
    ioc, _, n_print = kernels.char_stats(text, _ALPHA_SET if alphabet == ALPHABET else frozenset(alphabet))
    printable = n_print / len(text) if text else 0.0
    tokens = text.split()
    mean_tok = sum(map(len, tokens)) / len(tokens) if tokens else 0.0
    return ioc, printable, mean_tok


def classify_encrypted(msg, *, detector_hit: bool | None = None, config: CipherConfig | None = None) -> CipherVerdict:
    """Flag printable text whose statistics do not look like plaintext.

    Plaintext ACARS traffic is short space-separated tokens; enciphered
    reports map the separators away, leaving long mixed tokens, and random
    data drives the coincidence index towards 1/|alphabet|. Texts that hit
    any content detector are never flagged.
    """
    cfg = config or CipherConfig()
    text = msg if isinstance(msg, str) else msg.text
    ioc, printable, mean_tok = text_stats(text)
    if detector_hit is None:
        detector_hit = _content_hit(msg)
    implausible = ioc < cfg.ioc_floor or mean_tok > cfg.max_mean_token
    flagged = (len(text) >= cfg.min_length and printable >= cfg.min_printable
               and not detector_hit and implausible)
    return CipherVerdict(flagged, ioc, printable, mean_tok)


def _content_hit(msg) -> bool:
    from .content import default_scanner
    from .frames import AcarsMessage

    if isinstance(msg, str):
        msg = AcarsMessage("2", "UNKNOWN", "!", "H1", text=msg)
    return bool(default_scanner().content_findings(msg))


# -- crib template ----------------------------------------------------------

def _hint_support(hint: str, alphabet: str) -> dict[str, float]:
    """Distribution of a variable position from its hint character.

    A digit d means digits 0..d with weight (d + 1 - x), so small digits
    dominate the way leading digits of telemetry values do; 'A' is any
    letter, 'X' any letter or digit, anything else any alphabet character.
    """
    if hint.isdigit():
        d = int(hint)
        weights = {str(x): float(d + 1 - x) for x in range(d + 1)}
    elif hint == "A":
        weights = {c: 1.0 for c in string.ascii_uppercase}
    elif hint == "X":
        weights = {c: 1.0 for c in string.ascii_uppercase + string.digits}
    else:
        weights = {c: 1.0 for c in alphabet}
    total = sum(weights.values())
    return {c: w / total for c, w in weights.items() if c in alphabet}


@dataclass(frozen=True)
class CribTemplate:
    literals: str
    mask: str
    alphabet: str = ALPHABET

    def __post_init__(self):
        if len(self.literals) != len(self.mask):
            raise ValueError("template lines differ in length")
        if set(self.mask) - {"L", "V"}:
            raise ValueError("mask may only contain 'L' and 'V'")
        bad = [c for c, m in zip(self.literals, self.mask) if m == "L" and c not in self.alphabet]
        if bad:
            raise ValueError(f"literal characters outside the alphabet: {bad!r}")

    def __len__(self):
        return len(self.mask)

    @property
    def literal_positions(self) -> list[int]:
        return [i for i, m in enumerate(self.mask) if m == "L"]

    @property
    def variable_positions(self) -> list[int]:
        return [i for i, m in enumerate(self.mask) if m == "V"]

    def distributions(self) -> dict[int, dict[str, float]]:
        return {i: _hint_support(self.literals[i], self.alphabet) for i in self.variable_positions}

    def generate(self, rng: random.Random) -> str:
        out = list(self.literals)
        for i, dist in self.distributions().items():
            chars = list(dist)
            out[i] = rng.choices(chars, weights=[dist[c] for c in chars])[0]
        return "".join(out)

    def matches_shape(self, ciphertext: str) -> bool:
        """Length matches and equal/unequal literal characters stay equal/unequal."""
        if len(ciphertext) != len(self.mask):
            return False
        fwd: dict[str, str] = {}
        back: dict[str, str] = {}
        for i in self.literal_positions:
            p, c = self.literals[i], ciphertext[i]
            if c not in self.alphabet:
                return False
            if fwd.setdefault(c, p) != p or back.setdefault(p, c) != c:
                return False
        dists = self.distributions()
        for i in self.variable_positions:
            c = ciphertext[i]
            if c in fwd and fwd[c] not in dists[i]:
                return False
        return True


def parse_template(text: str, alphabet: str = ALPHABET) -> CribTemplate:
    lines = [ln.rstrip("\n\r") for ln in text.splitlines() if not ln.startswith("#") and ln.strip()]
    if len(lines) != 2:
        raise ValueError(f"template needs exactly two lines (literals, mask), got {len(lines)}")
    return CribTemplate(lines[0], lines[1], alphabet)


def load_template(path=None) -> CribTemplate:
    if path is None:
        text = resources.files("acars_audit").joinpath("data/crib_template.txt").read_text(encoding="utf-8")
    else:
        text = Path(path).read_text(encoding="utf-8")
    return parse_template(text)


# -- attack -----------------------------------------------------------------

def crack_with_crib(ciphertexts: Iterable[str], template: CribTemplate) -> SubstitutionKey:
    """Recover a (partial) decryption key from ciphertexts of ``template``."""
    texts = list(ciphertexts)
    aligned = [c for c in texts if template.matches_shape(c)]
    if not aligned:
        raise CribAlignmentError(
            f"none of {len(texts)} ciphertexts matches the template shape (length {len(template)})")

    mapping: dict[str, str] = {}
    owner: dict[str, str] = {}
    collisions = []
    for c_text in aligned:
        for i in template.literal_positions:
            c, p = c_text[i], template.literals[i]
            prev = mapping.get(c)
            if prev is not None and prev != p:
                collisions.append((c, prev, p))
                continue
            other = owner.get(p)
            if other is not None and other != c:
                collisions.append((p, other, c))
                continue
            mapping[c] = p
            owner[p] = c
    if collisions:
        raise CribInconsistencyError(sorted(set(collisions)))

    dists = template.distributions()
    var_pos = template.variable_positions
    candidates = sorted({ch for d in dists.values() for ch in d} - set(owner))
    cipher_chars = sorted({t[i] for t in aligned for i in var_pos} - set(mapping))
    if candidates and cipher_chars:
        row_of = {c: r for r, c in enumerate(cipher_chars)}
        pos_index = {p: k for k, p in enumerate(var_pos)}
        logp = []
        for p in var_pos:
            d = dists[p]
            logp.append([math.log(d[ch]) if d.get(ch, 0.0) > 0 else _IMPOSSIBLE for ch in candidates])
        occurrences = [(row_of[t[i]], pos_index[i]) for t in aligned for i in var_pos if t[i] in row_of]
        table = np.asarray(kernels.position_loglik(occurrences, logp, len(candidates)))
        rows, cols = linear_sum_assignment(-table)
        for r, k in zip(rows, cols):
            mapping[cipher_chars[r]] = candidates[k]
    return SubstitutionKey(mapping, template.alphabet)


def key_agreement(recovered: SubstitutionKey, true_key: SubstitutionKey, ciphertexts: Sequence[str],
                  min_count: int = 3) -> float:
    """Fraction of cipher characters seen at least ``min_count`` times that
    the recovered key decrypts correctly."""
    counts: dict[str, int] = {}
    for t in ciphertexts:
        for ch in t:
            if ch in _ALPHA_SET:
                counts[ch] = counts.get(ch, 0) + 1
    frequent = [c for c, n in counts.items() if n >= min_count]
    if not frequent:
        return 1.0
    good = sum(1 for c in frequent if recovered.mapping.get(c) == true_key.mapping.get(c))
    return good / len(frequent)
