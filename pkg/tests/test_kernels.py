import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from acars_audit import _pykernels as py
from acars_audit import kernels
from acars_audit.cipher import ALPHABET

try:
    from acars_audit import _kernels as cy
except ImportError:  # extension not built
    cy = None

needs_ext = pytest.mark.skipif(cy is None, reason="compiled kernels not built")
ALPHA = frozenset(ALPHABET)


def test_dispatch_exports():
    assert kernels.BACKEND in ("cython", "python")
    for name in ("luhn_ok", "char_stats", "digit_runs", "position_loglik"):
        assert callable(getattr(kernels, name))


@needs_ext
@given(st.text(alphabet="0123456789", min_size=1, max_size=25))
def test_luhn_parity(d):
    assert cy.luhn_ok(d) == py.luhn_ok(d)


@needs_ext
@given(st.text(max_size=200))
def test_char_stats_parity(t):
    a, b = cy.char_stats(t, ALPHA), py.char_stats(t, ALPHA)
    assert a[1:] == b[1:]
    assert a[0] == pytest.approx(b[0], abs=1e-12)


@needs_ext
@given(st.text(alphabet="0123456789 AB-/x", max_size=80), st.integers(1, 6), st.integers(6, 20))
def test_digit_runs_parity(t, lo, hi):
    assert list(cy.digit_runs(t, lo, hi)) == list(py.digit_runs(t, lo, hi))


@needs_ext
@settings(max_examples=50)
@given(st.integers(0, 2**32))
def test_position_loglik_parity(seed):
    rng = random.Random(seed)
    n_rows, n_pos, n_plain = rng.randint(1, 6), rng.randint(1, 5), rng.randint(1, 7)
    logp = [[rng.uniform(-9, 0) for _ in range(n_plain)] for _ in range(n_pos)]
    occ = [(rng.randrange(n_rows), rng.randrange(n_pos)) for _ in range(rng.randint(0, 30))]
    occ.append((n_rows - 1, 0))
    a = cy.position_loglik(occ, logp, n_plain)
    b = py.position_loglik(occ, logp, n_plain)
    assert len(a) == len(b)
    for ra, rb in zip(a, b):
        assert ra == pytest.approx(rb)


def test_digit_runs_boundaries():
    t = "AB1234567890123 4111111111111111 x12"
    spans = py.digit_runs(t, 12, 19)
    assert [t[s:e] for s, e in spans] == ["4111111111111111"]


def test_char_stats_uniform_text():
    ioc, n, n_print = py.char_stats("ABCDABCD", ALPHA)
    assert n == n_print == 8
    assert ioc == pytest.approx(4 * 2 / (8 * 7))
