"""Pure-Python versions of the hot kernels.

These are the reference implementations; ``_kernels.pyx`` must agree with
them exactly (see tests/test_kernels.py).
"""


def luhn_ok(digits):
    """Mod-10 check on a string of ASCII digits. No input validation."""
    total = 0
    parity = len(digits) % 2
    for i, ch in enumerate(digits):
        d = ord(ch) - 48
        if i % 2 == parity:
            d *= 2
            if d > 9:
                d -= 9
        total += d
    return total % 10 == 0


def char_stats(text, alphabet):
    """Return (index_of_coincidence, n_in_alphabet, n_printable) for ``text``.

    Only characters in ``alphabet`` contribute to the coincidence index.
    """
    counts = {}
    n_print = 0
    for ch in text:
        if " " <= ch <= "~":
            n_print += 1
        if ch in alphabet:
            counts[ch] = counts.get(ch, 0) + 1
    n = sum(counts.values())
    if n < 2:
        return 0.0, n, n_print
    pairs = sum(c * (c - 1) for c in counts.values())
    return pairs / (n * (n - 1)), n, n_print


def digit_runs(text, min_len, max_len):
    """Maximal runs of ASCII digits not touching an alphanumeric neighbour.

    Returns a list of ``(start, end)`` spans whose length is within
    ``[min_len, max_len]``.
    """
    out = []
    n = len(text)
    i = 0
    while i < n:
        ch = text[i]
        if "0" <= ch <= "9":
            j = i
            while j < n and "0" <= text[j] <= "9":
                j += 1
            left_ok = i == 0 or not text[i - 1].isalnum()
            right_ok = j == n or not text[j].isalnum()
            if left_ok and right_ok and min_len <= j - i <= max_len:
                out.append((i, j))
            i = j
        else:
            i += 1
    return out


def position_loglik(cipher_rows, position_logp, n_plain):
    """Accumulate a cipher-char x plain-char log-likelihood table.

    ``cipher_rows`` is a list of ``(row, position)`` occurrence pairs and
    ``position_logp[position]`` a list of ``n_plain`` log-probabilities.
    Returns a list of lists ``table[row][plain]``.
    """
    n_rows = 1 + max((r for r, _ in cipher_rows), default=-1)
    table = [[0.0] * n_plain for _ in range(n_rows)]
    for row, pos in cipher_rows:
        logp = position_logp[pos]
        acc = table[row]
        for k in range(n_plain):
            acc[k] += logp[k]
    return table
