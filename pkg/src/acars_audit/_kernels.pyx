# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled versions of the hot kernels in ``_pykernels``."""


def luhn_ok(str digits):
    cdef Py_ssize_t i, n = len(digits)
    cdef int total = 0, d
    cdef int parity = n % 2
    cdef Py_UCS4 ch
    for i in range(n):
        ch = digits[i]
        d = <int>ch - 48
        if i % 2 == parity:
            d *= 2
            if d > 9:
                d -= 9
        total += d
    return total % 10 == 0


def char_stats(str text, alphabet):
    cdef dict counts = {}
    cdef Py_ssize_t n_print = 0, n = 0, pairs = 0, c
    cdef Py_UCS4 ch
    for ch in text:
        if 32 <= <int>ch <= 126:
            n_print += 1
        if ch in alphabet:
            counts[ch] = counts.get(ch, 0) + 1
    for c in counts.values():
        n += c
        pairs += c * (c - 1)
    if n < 2:
        return 0.0, n, n_print
    return pairs / <double>(n * (n - 1)), n, n_print


cdef inline bint _is_digit(Py_UCS4 ch):
    return 48 <= <int>ch <= 57


def digit_runs(str text, Py_ssize_t min_len, Py_ssize_t max_len):
    cdef list out = []
    cdef Py_ssize_t n = len(text), i = 0, j
    cdef bint left_ok, right_ok
    while i < n:
        if _is_digit(text[i]):
            j = i
            while j < n and _is_digit(text[j]):
                j += 1
            left_ok = i == 0 or not text[i - 1].isalnum()
            right_ok = j == n or not text[j].isalnum()
            if left_ok and right_ok and min_len <= j - i <= max_len:
                out.append((i, j))
            i = j
        else:
            i += 1
    return out


def position_loglik(list cipher_rows, list position_logp, Py_ssize_t n_plain):
    cdef Py_ssize_t n_rows = 0, row, pos, k
    cdef list table, acc, logp
    for row, pos in cipher_rows:
        if row + 1 > n_rows:
            n_rows = row + 1
    cdef double[:, :] buf
    import numpy as np
    arr = np.zeros((n_rows, n_plain), dtype=np.float64)
    buf = arr
    cdef double[:] lp
    lps = [np.asarray(p, dtype=np.float64) for p in position_logp]
    for row, pos in cipher_rows:
        lp = lps[pos]
        for k in range(n_plain):
            buf[row, k] += lp[k]
    return arr.tolist()
