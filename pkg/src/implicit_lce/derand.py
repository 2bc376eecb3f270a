"""Collision checkers and the deterministic build loop.

A Monte Carlo index can only err when two equal-length text substrings share
a fingerprint.  The checkers certify, one power-of-two window length per
level, that no such pair exists.  Level e > 0 leans on level e - 1: two
windows whose fingerprints agree are equal exactly when both half-window
fingerprint pairs agree, so each candidate pair costs O(1).  Levels always
run in increasing order; a deterministic index therefore restricts queries
to power-of-two window comparisons, which is what the certificate covers.
"""

from dataclasses import dataclass
from typing import Optional

from . import audit
from .errors import BuildError
from .index import (
    FingerprintIndex,
    _windows_eq,
    build_in_place,
    char_at,
    extract,
    restore_in_place,
    substring_fp_with_exp,
    _char_bit,
    _require_encoded,
)
from .modmath import Rng
from .sorting import binary_radix_sort, in_place_merge


@dataclass
class CollisionReport:
    ok: bool
    failing_level: Optional[int] = None
    witness: Optional[tuple] = None


def _levels(idx):
    """Yield (e, exponent, half exponent) for window lengths 2^e <= n.

    Only the current exponent pair is kept; each is the square of the last.
    """
    n = idx.n_chars
    e = 0
    exp = idx.char_pow
    exp_half = None
    while (1 << e) <= n:
        yield e, exp, exp_half
        exp_half = exp
        exp = exp * exp % idx.q
        e += 1


def _window_fp(idx, pos, e, exp):
    a = _char_bit(idx, pos)
    return substring_fp_with_exp(idx, a, a + (1 << e) * idx.char_bits - 1, exp)


def _level_fps(idx, e, exp):
    cnt = idx.n_chars - (1 << e) + 1
    audit.record(cnt)
    if idx.overflow_blocks:
        from . import _pykernels

        return _pykernels.level_fingerprints_g(
            idx.text.buf,
            idx.tau,
            idx.q,
            idx.two_tau,
            _char_bit(idx, 0),
            idx.char_bits,
            1 << e,
            cnt,
            exp,
            idx.overflow_blocks,
        )
    return idx._kern.level_fingerprints(
        idx.text.buf,
        idx.tau,
        idx.q,
        idx.two_tau,
        _char_bit(idx, 0),
        idx.char_bits,
        1 << e,
        cnt,
        exp,
    )


def _pair_equal(idx, i1, i2, e, exp_half):
    """True iff the length-2^e windows at i1 and i2 are equal strings.

    Exact given that level e - 1 is already certified: at e = 0 characters
    are compared directly, above that the two half fingerprints decide.
    """
    if e == 0:
        return char_at(idx, i1) == char_at(idx, i2)
    half = 1 << (e - 1)
    return _windows_eq(idx, i1, i2, half, exp_half) and _windows_eq(
        idx, i1 + half, i2 + half, half, exp_half
    )


def verify_witness(idx, report: CollisionReport) -> bool:
    """Check a reported witness: equal fingerprints, unequal substrings."""
    if report.ok:
        return False
    i1, i2 = report.witness
    e = report.failing_level
    exp = pow(idx.char_pow, 1 << e, idx.q)
    k = 1 << e
    return (
        _window_fp(idx, i1, e, exp) == _window_fp(idx, i2, e, exp)
        and extract(idx, i1, k) != extract(idx, i2, k)
    )


def check_collisions_hashed(idx: FingerprintIndex) -> CollisionReport:
    """Level-by-level check with an open-addressing table, linear probing.

    Capacity is the smallest power of two holding twice the window count;
    positions with equal fingerprints chain per slot and consecutive chain
    members are verified pairwise.
    """
    _require_encoded(idx)
    n = idx.n_chars
    if n <= 1:
        return CollisionReport(True)
    cap = 1 << (2 * n - 1).bit_length()
    mask = cap - 1
    nxt = [0] * n
    audit.record(3 * cap + n)
    for e, exp, exp_half in _levels(idx):
        cnt = n - (1 << e) + 1
        fps = _level_fps(idx, e, exp)
        slot_key = [-1] * cap
        head = [-1] * cap
        for i in range(cnt):
            fp = fps[i]
            h = fp & mask
            while slot_key[h] != -1 and slot_key[h] != fp:
                h = (h + 1) & mask
            if slot_key[h] == -1:
                slot_key[h] = fp
                head[h] = i
                nxt[i] = -1
            else:
                if not _pair_equal(idx, head[h], i, e, exp_half):
                    return CollisionReport(False, e, (head[h], i))
                nxt[i] = head[h]
                head[h] = i
        audit.release(cnt)
    audit.release(3 * cap + n)
    return CollisionReport(True)


def check_collisions_sorted(idx: FingerprintIndex) -> CollisionReport:
    """Same decision via per-level sorting of positions keyed by fingerprint."""
    _require_encoded(idx)
    n = idx.n_chars
    if n <= 1:
        return CollisionReport(True)
    for e, exp, exp_half in _levels(idx):
        cnt = n - (1 << e) + 1
        fps = _level_fps(idx, e, exp)
        order = sorted(range(cnt), key=fps.__getitem__)
        audit.record(cnt)
        for t in range(1, cnt):
            i1, i2 = order[t - 1], order[t]
            if fps[i1] == fps[i2] and not _pair_equal(idx, i1, i2, e, exp_half):
                return CollisionReport(False, e, (i1, i2))
        audit.release(2 * cnt)
    return CollisionReport(True)


def check_collisions_compact(idx: FingerprintIndex) -> CollisionReport:
    """Same decision with packed (fingerprint, position) keys in one array.

    Geometrically shrinking position ranges are packed into the array's free
    space, radix-sorted in place, and compacted back to bare positions; the
    sorted runs are then merged in place right to left before the usual
    adjacent-pair verification.
    """
    _require_encoded(idx)
    n = idx.n_chars
    if n <= 1:
        return CollisionReport(True)
    pos_bits = max((n - 1).bit_length(), 1)
    pos_mask = (1 << pos_bits) - 1
    cprime = max(1, -(-idx.tau // pos_bits))
    key_bits = idx.tau + pos_bits
    a = [0] * n
    audit.record(n)
    for e, exp, exp_half in _levels(idx):
        cnt = n - (1 << e) + 1

        def fp_of(p):
            return _window_fp(idx, p, e, exp)

        def fp_less(p1, p2):
            return fp_of(p1) < fp_of(p2)

        for t in range(cnt):
            a[t] = t
        runs = []
        lo = 0
        while lo < cnt:
            remaining = cnt - lo
            m = remaining // (cprime + 1)
            if m == 0:
                m = remaining
            for t in range(lo, lo + m):
                a[t] = (fp_of(a[t]) << pos_bits) | a[t]
            binary_radix_sort(a, lo, lo + m, key_bits)
            for t in range(lo, lo + m):
                a[t] &= pos_mask
            runs.append((lo, lo + m))
            lo += m
        while len(runs) > 1:
            left = runs.pop(-2)
            right = runs.pop()
            in_place_merge(a, left[1], fp_less, lo=left[0], hi=right[1])
            runs.append((left[0], right[1]))
        prev_fp = fp_of(a[0])
        for t in range(1, cnt):
            cur_fp = fp_of(a[t])
            assert prev_fp <= cur_fp, "merged positions not sorted by fingerprint"
            if prev_fp == cur_fp and not _pair_equal(idx, a[t - 1], a[t], e, exp_half):
                return CollisionReport(False, e, (a[t - 1], a[t]))
            prev_fp = cur_fp
    audit.release(n)
    return CollisionReport(True)


CHECKERS = {
    "hash": check_collisions_hashed,
    "sort": check_collisions_sorted,
    "compact": check_collisions_compact,
}


def build_deterministic(
    t,
    tau: int = 63,
    rng: Rng = None,
    checker=check_collisions_sorted,
    max_retries: int = 64,
    *,
    backend: str = None,
) -> FingerprintIndex:
    """Rebuild with fresh (modulus, seed) pairs until the encoding fits and
    the fingerprint is certified collision-free on power-of-two windows.

    Queries on the returned index are exact, not just w.h.p.: they compare
    only power-of-two windows, all certified.  build_retries counts every
    pair tried across rounds.
    """
    if rng is None:
        rng = Rng(0)
    total = 0
    while total < max_retries:
        idx = build_in_place(t, tau, rng, max_retries - total, backend=backend)
        total += idx.build_retries
        report = checker(idx)
        if report.ok:
            idx.build_retries = total
            idx.deterministic = True
            return idx
        restore_in_place(idx)
    raise BuildError(f"no collision-free (q, seed) pair in {max_retries} draws")
