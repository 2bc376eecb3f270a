"""The in-place fingerprint index.

Construction overwrites each block of a seed-prefixed bit-packed text with a
quotient bit and the low bits of the fingerprint of the stream prefix ending
at that block.  If any prefix fingerprint has its top bit set, the partial
encoding is reverted and a fresh (modulus, seed) pair is drawn, so the
accepted structure occupies exactly the original buffer.  The encoded buffer
answers prefix/substring fingerprints, slow and fast longest-common-extension
queries, and substring extraction, and decodes back to the original text.

An encoded index is immutable for readers; construction and restore need
exclusive access.
"""

import math
import struct
from dataclasses import dataclass

from . import _pykernels, audit, bittext, kernels
from .errors import BuildError, CapacityError, SamplingError, StateError
from .modmath import (
    MIN_PRODUCTION_TAU,
    MIN_TAU,
    Rng,
    modulus_interval,
    sample_prime,
    sample_seed,
)

PLAIN = "plain"
ENCODED = "encoded"

LESS, EQUAL, GREATER = -1, 0, 1

# Step-count envelopes, in fingerprint-window evaluations per query.
SLOW_STEP_FACTOR = 8
FAST_STEP_FACTOR = 8


def slow_step_budget(ell: int) -> int:
    return int(SLOW_STEP_FACTOR * (math.log2(ell + 2) + 2) ** 2)


def fast_step_budget(ell: int) -> int:
    return int(FAST_STEP_FACTOR * (math.log2(ell + 2) + 2))


@dataclass
class LcePair:
    i: int
    j: int
    result: int
    steps: int


class FingerprintIndex:
    __slots__ = (
        "text",
        "q",
        "tau",
        "seed",
        "char_bits",
        "n_chars",
        "pad_bits",
        "mode",
        "char_pow",
        "two_tau",
        "n_blocks",
        "total_bits",
        "build_retries",
        "deterministic",
        "overflow_blocks",
        "_kern",
    )

    def __init__(self, text, q, tau, seed, build_retries, kern, overflow_blocks=()):
        self.text = text
        self.q = q
        self.tau = tau
        self.seed = seed
        self.char_bits = text.char_bits
        self.n_chars = text.n_chars
        self.pad_bits = text.pad_bits
        self.mode = ENCODED
        self.char_pow = pow(2, text.char_bits, q)
        self.two_tau = pow(2, tau, q)
        self.n_blocks = text.n_blocks
        self.total_bits = text.total_bits
        self.build_retries = build_retries
        self.deterministic = False
        self.overflow_blocks = frozenset(overflow_blocks)
        self._kern = kern

    @property
    def in_place(self) -> bool:
        """True when every stored fingerprint fits beside its quotient bit."""
        return not self.overflow_blocks


class ZTable:
    """Powers 2^(char_bits * 2^e) mod q for constant-time power-of-two windows."""

    __slots__ = ("kind", "count", "check", "_values", "_lease", "_tau")

    def __init__(self, kind, count, check, values=None, lease=None, tau=None):
        self.kind = kind
        self.count = count
        self.check = check
        self._values = values
        self._lease = lease
        self._tau = tau

    def get(self, e: int) -> int:
        if not 0 <= e < self.count:
            raise IndexError(f"z-table entry {e} out of range (have {self.count})")
        if self.kind == "heap":
            return self._values[e]
        return self._lease.read(e * self._tau, self._tau)


def _retarget_tau(t: bittext.BitText, tau: int) -> None:
    if t.tau == tau:
        return
    if t.has_seed_block:
        bittext.detach_seed_block(t)
    t.tau = tau
    t.pad_bits = (tau - t.text_bits % tau) % tau
    t._k = kernels.select(max(tau, t.char_bits, 1))


def build_in_place(
    t: bittext.BitText,
    tau: int = 63,
    rng: Rng = None,
    max_retries: int = 64,
    *,
    test_mode: bool = False,
    keep_overflow: bool = False,
    q: int = None,
    seed: int = None,
    backend: str = None,
) -> FingerprintIndex:
    """Replace the text's buffer with the fingerprint encoding.

    Draws (modulus, seed) pairs until no prefix fingerprint overflows its
    tau - 1 bits, reverting the partial encoding before each redraw.  With
    keep_overflow (test mode only) the first pair is accepted and overflowing
    block indices are kept on a side list instead.
    """
    if t.encoded:
        raise StateError("text is already encoded")
    if tau < MIN_TAU:
        raise ValueError(f"tau must be >= {MIN_TAU}, got {tau}")
    if tau < MIN_PRODUCTION_TAU and not test_mode:
        raise ValueError(f"tau < {MIN_PRODUCTION_TAU} requires test_mode")
    if keep_overflow and not test_mode:
        raise ValueError("keep_overflow requires test_mode")
    if (q is None) != (seed is None):
        raise ValueError("q and seed must be supplied together")
    _retarget_tau(t, tau)
    kern = kernels.select(tau, prefer=backend)
    if rng is None:
        rng = Rng(0)

    fixed = q is not None
    if not fixed:
        lo, hi = modulus_interval(max(t.text_bits, 2), tau)
    widened = False
    retries = 0
    while retries < max_retries:
        retries += 1
        if fixed:
            q_val, seed_val = q, seed
        else:
            if not widened:
                try:
                    q_val = sample_prime(lo, hi, rng).q
                except SamplingError:
                    # Tiny tau can make the interval prime-free; only test
                    # builds may fall back to the full tau-bit range.
                    if not test_mode:
                        raise
                    widened = True
            if widened:
                q_val = sample_prime(1 << (tau - 1), (1 << tau) - 1, rng).q
            seed_val = rng.randrange(q_val)
        if t.has_seed_block:
            t._k.block_write(t.buf, tau, 0, seed_val)
        else:
            bittext.attach_seed_block(t, seed_val)
        if keep_overflow:
            overflow = _pykernels.encode_blocks_tolerant(t.buf, tau, q_val, t.n_blocks)
            t.encoded = True
            return FingerprintIndex(t, q_val, tau, seed_val, retries, kern, overflow)
        r = kern.encode_blocks(t.buf, tau, q_val, t.n_blocks)
        if r < 0:
            t.encoded = True
            return FingerprintIndex(t, q_val, tau, seed_val, retries, kern)
        if fixed:
            raise BuildError(f"fixed (q, seed) pair overflowed at block {r}")
    raise BuildError(f"no overflow-free (q, seed) pair in {max_retries} draws")


def restore_in_place(idx: FingerprintIndex) -> bittext.BitText:
    """Decode the buffer back to the original text bits in one pass."""
    if idx.mode != ENCODED:
        raise StateError("index is already restored")
    t = idx.text
    if idx.overflow_blocks:
        _pykernels.decode_blocks_tolerant(
            t.buf, idx.tau, idx.q, idx.n_blocks, sorted(idx.overflow_blocks)
        )
    else:
        idx._kern.decode_blocks(t.buf, idx.tau, idx.q, idx.n_blocks)
    idx.mode = PLAIN
    t.encoded = False
    return t


def _require_encoded(idx: FingerprintIndex) -> None:
    if idx.mode != ENCODED:
        raise StateError("operation requires an encoded index")


def prefix_fp(idx: FingerprintIndex, i_bit: int) -> int:
    """Fingerprint of stream bits [0, i_bit], reading at most two blocks."""
    _require_encoded(idx)
    if not 0 <= i_bit < idx.total_bits:
        raise IndexError(f"bit {i_bit} out of range (have {idx.total_bits})")
    if idx.overflow_blocks:
        return _pykernels.prefix_fp_g(
            idx.text.buf, idx.tau, idx.q, idx.two_tau, i_bit, idx.overflow_blocks
        )
    return idx._kern.prefix_fp(idx.text.buf, idx.tau, idx.q, idx.two_tau, i_bit)


def substring_fp(idx: FingerprintIndex, i_bit: int, j_bit: int) -> int:
    """Fingerprint of stream bits [i_bit, j_bit]."""
    if i_bit > j_bit:
        raise IndexError(f"empty bit range [{i_bit}, {j_bit}]")
    exp = pow(2, j_bit - i_bit + 1, idx.q)
    return substring_fp_with_exp(idx, i_bit, j_bit, exp)


def substring_fp_with_exp(idx: FingerprintIndex, i_bit: int, j_bit: int, exp: int) -> int:
    """Same, with 2^(j_bit - i_bit + 1) mod q supplied by the caller."""
    _require_encoded(idx)
    if not 0 <= i_bit <= j_bit < idx.total_bits:
        raise IndexError(f"bit range [{i_bit}, {j_bit}] out of range")
    if idx.overflow_blocks:
        return _pykernels.substring_fp_g(
            idx.text.buf, idx.tau, idx.q, idx.two_tau, i_bit, j_bit, exp, idx.overflow_blocks
        )
    return idx._kern.substring_fp(idx.text.buf, idx.tau, idx.q, idx.two_tau, i_bit, j_bit, exp)


def build_ztable(idx: FingerprintIndex, kind: str = "heap", lease=None) -> ZTable:
    """Table of floor(log2 n) + 1 squared powers, computed by repeated squaring."""
    _require_encoded(idx)
    count = max(idx.n_chars, 1).bit_length()  # floor(log2 n) + 1
    check = (idx.q, idx.seed, idx.n_chars)
    z = idx.char_pow
    if kind == "heap":
        audit.record(count)
        values = []
        for _ in range(count):
            values.append(z)
            z = z * z % idx.q
        return ZTable("heap", count, check, values=values)
    if kind != "borrowed":
        raise ValueError(f"unknown z-table kind {kind!r}")
    if lease is None or lease.bits < idx.tau * count:
        have = 0 if lease is None else lease.bits
        raise CapacityError(f"z-table needs {idx.tau * count} leased bits, have {have}")
    for e in range(count):
        lease.write(e * idx.tau, idx.tau, z)
        z = z * z % idx.q
    return ZTable("borrowed", count, check, lease=lease, tau=idx.tau)


def _char_bit(idx: FingerprintIndex, c: int) -> int:
    return idx.tau + idx.pad_bits + c * idx.char_bits


def _windows_eq(idx, ci, cj, n_chars_win, exp) -> bool:
    width = n_chars_win * idx.char_bits
    a = _char_bit(idx, ci)
    b = _char_bit(idx, cj)
    if idx.overflow_blocks:
        return _pykernels.windows_match_g(
            idx.text.buf, idx.tau, idx.q, idx.two_tau, a, b, width, exp, idx.overflow_blocks
        )
    return idx._kern.windows_match(idx.text.buf, idx.tau, idx.q, idx.two_tau, a, b, width, exp)


def _check_positions(idx, i, j):
    if not (0 <= i < idx.n_chars and 0 <= j < idx.n_chars):
        raise IndexError(f"positions ({i}, {j}) out of range for n={idx.n_chars}")


def _lce_freeform(idx, i, j):
    """Exponential then plain binary search; window lengths are arbitrary."""
    n = idx.n_chars
    maxl = n - max(i, j)
    q = idx.q
    y = idx.char_pow
    steps = 0

    def eq(length):
        nonlocal steps
        steps += 1
        return _windows_eq(idx, i, j, length, pow(y, length, q))

    k = 1
    lo = 0
    hi = None
    while k <= maxl:
        if eq(k):
            lo = k
            k <<= 1
        else:
            hi = k
            break
    if hi is None:
        if lo == maxl:
            return lo, steps
        if eq(maxl):
            return maxl, steps
        hi = maxl
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if eq(mid):
            lo = mid
        else:
            hi = mid
    return lo, steps


def _lce_pow2(idx, i, j, get_exp):
    """Exponential then halving search comparing only power-of-two windows."""
    maxl = idx.n_chars - max(i, j)
    steps = 0

    def eq(off, e):
        nonlocal steps
        steps += 1
        return _windows_eq(idx, i + off, j + off, 1 << e, get_exp(e))

    e = 0
    eqlen = 0
    mismatch = False
    while (1 << e) <= maxl:
        if eq(0, e):
            eqlen = 1 << e
            e += 1
        else:
            mismatch = True
            break
    if not mismatch:
        # No mismatching window fits; fill the tail with descending powers.
        off = eqlen
        s = e - 1
        while off < maxl and s >= 0:
            if off + (1 << s) <= maxl and eq(off, s):
                off += 1 << s
            s -= 1
        return off, steps
    lo = eqlen
    hi = 1 << e
    while hi - lo > 1:
        half = (hi - lo) // 2
        lp = 1 << (half.bit_length() - 1)  # largest power of two <= half
        if eq(lo, lp.bit_length() - 1):
            lo += lp
        else:
            hi = lo + lp
    return lo, steps


def lce_slow(idx: FingerprintIndex, i: int, j: int) -> LcePair:
    """LCE without a z-table; powers are produced by fast exponentiation.

    Deterministic indexes compare only power-of-two windows (the certified
    family); Monte Carlo indexes use the plain exponential/binary search.
    """
    _require_encoded(idx)
    _check_positions(idx, i, j)
    if i == j:
        return LcePair(i, j, idx.n_chars - i, 0)
    if idx.deterministic:
        q = idx.q
        y = idx.char_pow
        ell, steps = _lce_pow2(idx, i, j, lambda e: pow(y, 1 << e, q))
    else:
        ell, steps = _lce_freeform(idx, i, j)
    assert steps <= slow_step_budget(ell), f"slow step envelope exceeded: {steps} for ell={ell}"
    return LcePair(i, j, ell, steps)


def lce_fast(idx: FingerprintIndex, zt: ZTable, i: int, j: int) -> LcePair:
    """LCE with the z-table; every compared window is a power of two."""
    _require_encoded(idx)
    if zt.check != (idx.q, idx.seed, idx.n_chars):
        raise StateError("z-table was built for a different index")
    _check_positions(idx, i, j)
    if i == j:
        return LcePair(i, j, idx.n_chars - i, 0)
    ell, steps = _lce_pow2(idx, i, j, zt.get)
    assert steps <= fast_step_budget(ell), f"fast step envelope exceeded: {steps} for ell={ell}"
    return LcePair(i, j, ell, steps)


def _reconstruct(idx, jb):
    if idx.overflow_blocks:
        return _pykernels.reconstruct_block_g(
            idx.text.buf, idx.tau, idx.q, idx.two_tau, jb, idx.overflow_blocks
        )
    return idx._kern.reconstruct_block(idx.text.buf, idx.tau, idx.q, idx.two_tau, jb)


def extract(idx: FingerprintIndex, i: int, m: int) -> list:
    """Characters T[i .. i+m-1], reconstructing only the blocks they touch."""
    _require_encoded(idx)
    if m < 0 or i < 0 or i + m > idx.n_chars:
        raise IndexError(f"window ({i}, {m}) out of range for n={idx.n_chars}")
    if m == 0:
        return []
    b = idx.char_bits
    tau = idx.tau
    bit_lo = _char_bit(idx, i)
    bit_hi = bit_lo + m * b  # exclusive
    out = []
    acc = 0
    accbits = 0
    for jb in range(bit_lo // tau, (bit_hi - 1) // tau + 1):
        blk = _reconstruct(idx, jb)
        lo_trim = bit_lo - jb * tau
        if lo_trim > 0:
            blk &= (1 << (tau - lo_trim)) - 1
            acc = blk
            accbits = tau - lo_trim
        else:
            acc = (acc << tau) | blk
            accbits += tau
        while accbits >= b and len(out) < m:
            accbits -= b
            out.append((acc >> accbits) & ((1 << b) - 1))
            acc &= (1 << accbits) - 1
    return out


def char_at(idx: FingerprintIndex, i: int) -> int:
    return extract(idx, i, 1)[0]


def compare_suffixes(idx: FingerprintIndex, i: int, j: int, lce_kind: str = "slow", zt: ZTable = None) -> int:
    """Lexicographic order of suffixes i and j; an exhausted suffix sorts first."""
    if i == j:
        return EQUAL
    if lce_kind == "fast":
        ell = lce_fast(idx, zt, i, j).result
    else:
        ell = lce_slow(idx, i, j).result
    n = idx.n_chars
    if i + ell == n:
        return LESS
    if j + ell == n:
        return GREATER
    return LESS if char_at(idx, i + ell) < char_at(idx, j + ell) else GREATER


# ---------------------------------------------------------------------------
# Wire format: eight little-endian 64-bit header fields, then the raw buffer.

MAGIC = 0x494C4345_53534131
VERSION = 1
_HEADER = struct.Struct("<8Q")


def dump_index(idx: FingerprintIndex) -> bytes:
    _require_encoded(idx)
    if idx.overflow_blocks:
        raise ValueError("only in-place (empty overflow list) indexes are serializable")
    if idx.q >= 1 << 64:
        raise ValueError("wire format stores q in a 64-bit field; tau must be <= 64")
    header = _HEADER.pack(
        MAGIC, VERSION, idx.tau, idx.q, idx.seed, idx.char_bits, idx.n_chars, idx.pad_bits
    )
    return header + bytes(idx.text.buf)


def load_index(data: bytes, backend: str = None) -> FingerprintIndex:
    if len(data) < _HEADER.size:
        raise ValueError("index file too short")
    magic, version, tau, q, seed, b, n, pad = _HEADER.unpack_from(data)
    if magic != MAGIC:
        raise ValueError(f"bad magic 0x{magic:016X}")
    if version != VERSION:
        raise ValueError(f"unsupported version {version}")
    total_bits = tau * (1 + -(-n * b // tau)) if n else tau
    expect = (total_bits + 7) >> 3
    buf = bytearray(data[_HEADER.size :])
    if len(buf) != expect:
        raise ValueError(f"buffer length {len(buf)} does not match header ({expect})")
    t = bittext.BitText(buf, n, b, 1 << b, tau, pad, True)
    t.encoded = True
    kern = kernels.select(tau, prefer=backend)
    return FingerprintIndex(t, q, tau, seed, 0, kern)
