"""Brute-force reference implementations.

Everything here is deliberately simple and allocation-unconstrained, and
shares no code with the index: equivalence tests compare the two sides.
Inputs are capped at 10^4 characters because several oracles are quadratic.
"""

ORACLE_CAP = 10_000


class OracleText:
    """Immutable plain copy of a text, stored as bytes when the alphabet allows."""

    def __init__(self, chars):
        if len(chars) > ORACLE_CAP:
            raise ValueError(f"oracle inputs are capped at {ORACLE_CAP} characters")
        if all(0 <= c < 256 for c in chars):
            self.chars = bytes(chars)
        else:
            self.chars = tuple(chars)
        self.n = len(chars)


def bigint_fp(bits: str, q: int) -> int:
    """Fingerprint of a '0'/'1' string: its value as a binary number mod q."""
    if not bits:
        return 0
    return int(bits, 2) % q


def stream_bits(seed: int, tau: int, pad_bits: int, chars, char_bits: int) -> str:
    """The seed-prefixed padded bit stream as a '0'/'1' string."""
    out = [format(seed, f"0{tau}b"), "0" * pad_bits]
    out += [format(c, f"0{char_bits}b") for c in chars]
    return "".join(out)


def naive_lce(t: OracleText, i: int, j: int) -> int:
    """Length of the longest common prefix of suffixes i and j, by direct scan."""
    if not (0 <= i < t.n and 0 <= j < t.n):
        raise IndexError(f"positions ({i}, {j}) out of range for n={t.n}")
    s = t.chars
    ell = 0
    limit = t.n - max(i, j)
    # chunked slice equality keeps the scan linear-time at C speed
    chunk = 64
    while ell + chunk <= limit and s[i + ell : i + ell + chunk] == s[j + ell : j + ell + chunk]:
        ell += chunk
    while ell < limit and s[i + ell] == s[j + ell]:
        ell += 1
    return ell


def naive_compare_suffixes(t: OracleText, i: int, j: int) -> int:
    """-1, 0, or 1; the exhausted (shorter) suffix sorts first."""
    a, b = t.chars[i:], t.chars[j:]
    return -1 if a < b else (0 if a == b else 1)


def naive_sorted_suffixes(t: OracleText, positions) -> list:
    """Positions reordered so their suffixes are in lexicographic order."""
    return sorted(positions, key=lambda p: t.chars[p:])


def naive_lcp(t: OracleText) -> list:
    """Full LCP array: entry 0 is 0, entry k is the LCE of SA[k-1] and SA[k]."""
    sa = naive_sorted_suffixes(t, range(t.n))
    out = [0] * t.n
    for k in range(1, t.n):
        out[k] = naive_lce(t, sa[k - 1], sa[k])
    return out


def naive_suffix_array(t: OracleText) -> list:
    return naive_sorted_suffixes(t, range(t.n))
