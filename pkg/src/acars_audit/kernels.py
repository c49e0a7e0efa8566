"""Kernel dispatch: compiled extension when available, pure Python otherwise.

Set ``ACARS_AUDIT_PURE_PYTHON=1`` to force the fallback.
"""
import os

from . import _pykernels

BACKEND = "python"

if os.environ.get("ACARS_AUDIT_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels as _impl
        BACKEND = "cython"
    except ImportError:
        _impl = _pykernels
else:
    _impl = _pykernels

luhn_ok = _impl.luhn_ok
char_stats = _impl.char_stats
digit_runs = _impl.digit_runs
position_loglik = _impl.position_loglik

__all__ = ["BACKEND", "luhn_ok", "char_stats", "digit_runs", "position_loglik"]
