"""In-place suffix algorithms over the fingerprint index.

Sorting works through suffix comparisons (one LCE query plus one character
access each); the position array being sorted is the only O(n)-sized memory
in play, and the strict sparse-sort path borrows even its z-table space from
a compressed prefix of that array.
"""

from . import audit, seqcompress
from .derand import build_deterministic, check_collisions_sorted
from .errors import CapacityError
from .index import (
    GREATER,
    LESS,
    FingerprintIndex,
    build_in_place,
    build_ztable,
    compare_suffixes,
    lce_fast,
    lce_slow,
    restore_in_place,
)
from .modmath import Rng
from .sorting import heapsort, in_place_merge


def _slow_less(idx):
    return lambda x, y: compare_suffixes(idx, x, y) == LESS


def _fast_less(idx, zt):
    return lambda x, y: compare_suffixes(idx, x, y, "fast", zt) == LESS


def _check_positions(idx, positions):
    n = idx.n_chars
    for p in positions:
        if not 0 <= p < n:
            raise IndexError(f"position {p} out of range for n={n}")


def sparse_suffix_sort(idx: FingerprintIndex, s, strict_in_place: bool = False) -> None:
    """Reorder s so its entries are in lexicographic suffix order, in place.

    Default mode allocates a heap z-table (O(log n) words) and fast-sorts the
    whole array.  Strict mode compresses a prefix of s, lends its freed bits
    to the z-table, fast-sorts the remainder, then decompresses, slow-sorts
    the prefix, and merges; when the array is too small to lend enough bits
    it falls back to slow queries throughout, keeping O(1) auxiliary words.
    """
    _check_positions(idx, s)
    b_count = len(s)
    if b_count <= 1:
        return
    if not strict_in_place:
        zt = build_ztable(idx, "heap")
        heapsort(s, 0, b_count, _fast_less(idx, zt))
        return
    n = idx.n_chars
    needed_bits = idx.tau * max(n, 1).bit_length()
    log_n = max((n - 1).bit_length(), 1)
    k = min(b_count // 2, max(n // log_n**3, needed_bits))
    if k < needed_bits:
        heapsort(s, 0, b_count, _slow_less(idx))
        return
    width = max((n - 1).bit_length(), 1)
    cs = seqcompress.compress(s, 0, k, width)
    try:
        lease = cs.lease(needed_bits)
        zt = build_ztable(idx, "borrowed", lease)
        heapsort(s, k, b_count, _fast_less(idx, zt))
        cs.release()
    except CapacityError:
        # The lease cannot fail after the k >= needed_bits check, but make
        # sure a surprise leaves the caller with decodable positions.
        seqcompress.decompress(cs)
        raise
    seqcompress.decompress(cs)
    heapsort(s, 0, k, _slow_less(idx))
    in_place_merge(s, k, _slow_less(idx))


def sparse_lcp(idx: FingerprintIndex, s, verify_sorted: bool = False) -> None:
    """Overwrite a suffix-sorted position array with its sparse LCP array.

    Entry 0 becomes 0; entry t the LCE of the suffixes at entries t-1 and t.
    Runs right to left with slow queries so every entry is read before it is
    overwritten, O(1) auxiliary words.
    """
    b_count = len(s)
    if b_count == 0:
        return
    if verify_sorted:
        for t in range(1, b_count):
            if compare_suffixes(idx, s[t - 1], s[t]) != LESS:
                raise ValueError(f"positions not suffix-sorted at entry {t}: {s[t-1]}, {s[t]}")
    for t in range(b_count - 1, 0, -1):
        s[t] = lce_slow(idx, s[t - 1], s[t]).result
    s[0] = 0


def lcp_array(
    t,
    variant: str = "general",
    tau: int = 63,
    rng: Rng = None,
    checker=check_collisions_sorted,
    backend: str = None,
) -> list:
    """Full LCP array of a plain text, always exact.

    Pipeline: derandomize the index (keeping the accepted modulus and seed),
    restore the text, re-encode with the accepted pair, heap-sort all
    positions into the output array, convert it to LCP values right to left,
    and restore the text.  The "small_alphabet" variant compresses a prefix
    of the suffix array to lend z-table bits so most of the conversion runs
    on fast queries, then re-sorts and converts that prefix with slow ones.
    """
    if variant not in ("general", "small_alphabet"):
        raise ValueError(f"unknown variant {variant!r}")
    n = t.n_chars
    if n == 0:
        return []
    idx = build_deterministic(t, tau, rng, checker, backend=backend)
    q, seed = idx.q, idx.seed
    restore_in_place(idx)
    idx = build_in_place(t, tau, q=q, seed=seed, backend=backend)
    idx.deterministic = True
    out = list(range(n))
    audit.record(n)  # the LCP output array (also holds the SA intermediate)
    heapsort(out, 0, n, _slow_less(idx))
    needed_bits = idx.tau * max(n, 1).bit_length()
    log_n = max((n - 1).bit_length(), 1)
    m = min(n // 2, max(n // log_n**2, needed_bits))
    if variant == "small_alphabet" and m >= needed_bits and n - m >= 1:
        stash = out[m - 1]
        width = max((n - 1).bit_length(), 1)
        cs = seqcompress.compress(out, 0, m, width)
        lease = cs.lease(needed_bits)
        zt = build_ztable(idx, "borrowed", lease)
        for k in range(n - 1, m, -1):
            out[k] = lce_fast(idx, zt, out[k - 1], out[k]).result
        out[m] = lce_fast(idx, zt, stash, out[m]).result
        cs.release()
        seqcompress.decompress(cs)
        heapsort(out, 0, m, _slow_less(idx))
        for k in range(m - 1, 0, -1):
            out[k] = lce_slow(idx, out[k - 1], out[k]).result
    else:
        for k in range(n - 1, 0, -1):
            out[k] = lce_slow(idx, out[k - 1], out[k]).result
    out[0] = 0
    restore_in_place(idx)
    return out


def suffix_select(idx: FingerprintIndex, rank: int, rng: Rng = None, stats: dict = None) -> int:
    """Text position whose suffix has exactly `rank` smaller suffixes.

    Quick-select over the lexicographic order: keep a suffix range, pick a
    uniform in-range pivot by scanning, and recurse on the side holding the
    target, redrawing the pivot until that side has at most 3/4 of the range.
    O(1) words of workspace; all comparisons use slow queries.
    """
    n = idx.n_chars
    if not 0 <= rank < n:
        raise IndexError(f"rank {rank} out of range for n={n}")
    if rng is None:
        rng = Rng(0)
    if n == 1:
        return 0

    def cmp(x, y):
        return compare_suffixes(idx, x, y)

    if cmp(0, 1) == LESS:
        lo_pos, hi_pos = 0, 1
    else:
        lo_pos, hi_pos = 1, 0
    for p in range(2, n):
        if cmp(p, lo_pos) == LESS:
            lo_pos = p
        elif cmp(p, hi_pos) == GREATER:
            hi_pos = p
    below = 0
    m = n
    levels = 0
    redraws = 0
    while True:
        if m == 1 or rank == below:
            break
        if rank == below + m - 1:
            lo_pos = hi_pos
            break
        levels += 1
        draws = 0
        while True:
            draws += 1
            if draws > 64 + 4 * m:
                raise RuntimeError("pivot redraw cap exceeded; range is not shrinking")
            r = rng.randint(1, m)
            pivot = -1
            seen = 0
            for p in range(n):
                if cmp(p, lo_pos) != LESS and cmp(p, hi_pos) != GREATER:
                    seen += 1
                    if seen == r:
                        pivot = p
                        break
            m_left = 0
            for p in range(n):
                if cmp(p, lo_pos) != LESS and cmp(p, pivot) != GREATER:
                    m_left += 1
            if rank == below + m_left - 1:
                if stats is not None:
                    stats["levels"] = levels
                    stats["redraws"] = redraws
                return pivot
            if rank < below + m_left - 1:
                side_m = m_left
                if side_m <= 3 * m // 4:
                    hi_pos = pivot
                    m = side_m
                    break
            else:
                side_m = m - m_left + 1
                if side_m <= 3 * m // 4:
                    lo_pos = pivot
                    below += m_left - 1
                    m = side_m
                    break
            redraws += 1
    if stats is not None:
        stats["levels"] = levels
        stats["redraws"] = redraws
    return lo_pos
