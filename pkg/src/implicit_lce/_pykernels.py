"""Pure-Python bit and fingerprint kernels.

Same call surface as the compiled module ``_ckernels``.  Used as the fallback
backend, and always used for block widths above 63 bits (the compiled kernels
keep residues in 64-bit words) and for test-mode indexes that carry a list of
blocks whose prefix hash overflowed.

Buffer convention: a ``bytearray`` holding a big-endian bit stream, bit 0
being the most significant bit of byte 0.  A block is ``tau`` consecutive
stream bits; block ``i`` starts at stream bit ``i * tau``.
"""

BACKEND = "pure"

# Upper bound on tau for this backend (none in practice; Python ints).
MAX_TAU = 1 << 30


def mul_mod(a, b, q):
    return a * b % q


def pow_mod(base, e, q):
    return pow(base, e, q)


def read_bits(buf, pos, width):
    """Value of stream bits [pos, pos + width) as an integer."""
    if width == 0:
        return 0
    lo = pos >> 3
    hi = (pos + width + 7) >> 3
    chunk = int.from_bytes(buf[lo:hi], "big")
    shift = ((hi - lo) << 3) - (pos & 7) - width
    return (chunk >> shift) & ((1 << width) - 1)


def write_bits(buf, pos, width, value):
    """Overwrite stream bits [pos, pos + width) with value; no other bit changes."""
    if width == 0:
        return
    lo = pos >> 3
    hi = (pos + width + 7) >> 3
    span = hi - lo
    chunk = int.from_bytes(buf[lo:hi], "big")
    shift = (span << 3) - (pos & 7) - width
    mask = ((1 << width) - 1) << shift
    chunk = (chunk & ~mask) | ((value << shift) & mask)
    buf[lo:hi] = chunk.to_bytes(span, "big")


def block_read(buf, tau, i):
    return read_bits(buf, i * tau, tau)


def block_write(buf, tau, i, value):
    write_bits(buf, i * tau, tau, value)


def encode_blocks(buf, tau, q, n_blocks):
    """Overwrite blocks 1..n_blocks-1 with (quotient bit, prefix hash) pairs.

    Block 0 holds the seed and is left verbatim.  Returns -1 on success.  If
    some prefix hash does not fit in tau - 1 bits, blocks already written are
    decoded back and the offending block index is returned; the buffer is then
    unchanged.  A seed with its top bit set counts as overflow at index 0.
    """
    two_tau = (1 << tau) % q
    msb = 1 << (tau - 1)
    low = msb - 1
    prev = block_read(buf, tau, 0)
    if prev & msb:
        return 0
    for i in range(1, n_blocks):
        b_val = block_read(buf, tau, i)
        d = 1 if b_val >= q else 0
        cur = (prev * two_tau + b_val) % q
        if cur & msb:
            _decode_range(buf, tau, q, two_tau, i)
            return i
        block_write(buf, tau, i, (d << (tau - 1)) | cur)
        prev = cur
    return -1


def _decode_range(buf, tau, q, two_tau, upto):
    msb = 1 << (tau - 1)
    low = msb - 1
    prev = block_read(buf, tau, 0)
    for k in range(1, upto):
        blk = block_read(buf, tau, k)
        d = blk >> (tau - 1)
        p = blk & low
        b_val = (p - prev * two_tau) % q + d * q
        block_write(buf, tau, k, b_val)
        prev = p


def decode_blocks(buf, tau, q, n_blocks):
    """Invert encode_blocks, restoring the original block values."""
    _decode_range(buf, tau, q, (1 << tau) % q, n_blocks)


def encode_blocks_tolerant(buf, tau, q, n_blocks):
    """Test-mode encode: never aborts; returns indices whose hash lost its top bit.

    The stored low tau - 1 bits must be re-extended with the returned list to
    recover prefix hashes, so the index is no longer self-contained.
    """
    two_tau = (1 << tau) % q
    msb = 1 << (tau - 1)
    low = msb - 1
    overflow = []
    prev = block_read(buf, tau, 0)
    for i in range(1, n_blocks):
        b_val = block_read(buf, tau, i)
        d = 1 if b_val >= q else 0
        cur = (prev * two_tau + b_val) % q
        if cur & msb:
            overflow.append(i)
        block_write(buf, tau, i, (d << (tau - 1)) | (cur & low))
        prev = cur
    return overflow


def decode_blocks_tolerant(buf, tau, q, n_blocks, overflow):
    two_tau = (1 << tau) % q
    msb = 1 << (tau - 1)
    low = msb - 1
    members = frozenset(overflow)
    prev = block_read(buf, tau, 0)
    for k in range(1, n_blocks):
        blk = block_read(buf, tau, k)
        d = blk >> (tau - 1)
        p = blk & low
        if k in members:
            p |= msb
        b_val = (p - prev * two_tau) % q + d * q
        block_write(buf, tau, k, b_val)
        prev = p


def _hash_at(buf, tau, k, members):
    """Prefix hash stored for block k (full seed for k = 0)."""
    if k == 0:
        return block_read(buf, tau, 0)
    p = block_read(buf, tau, k) & ((1 << (tau - 1)) - 1)
    if members and k in members:
        p |= 1 << (tau - 1)
    return p


def reconstruct_block(buf, tau, q, two_tau, j):
    """Original block value at index j of an encoded buffer."""
    return reconstruct_block_g(buf, tau, q, two_tau, j, None)


def reconstruct_block_g(buf, tau, q, two_tau, j, members):
    if j == 0:
        return block_read(buf, tau, 0)
    blk = block_read(buf, tau, j)
    d = blk >> (tau - 1)
    p = blk & ((1 << (tau - 1)) - 1)
    if members and j in members:
        p |= 1 << (tau - 1)
    prev = _hash_at(buf, tau, j - 1, members)
    return (p - prev * two_tau) % q + d * q


def prefix_fp(buf, tau, q, two_tau, i_bit):
    """Fingerprint of stream bits [0, i_bit], reading at most two blocks."""
    return prefix_fp_g(buf, tau, q, two_tau, i_bit, None)


def prefix_fp_g(buf, tau, q, two_tau, i_bit, members):
    j, r = divmod(i_bit, tau)
    if j == 0:
        return (block_read(buf, tau, 0) >> (tau - 1 - r)) % q
    pp = _hash_at(buf, tau, j - 1, members)
    blk = block_read(buf, tau, j)
    d = blk >> (tau - 1)
    p = blk & ((1 << (tau - 1)) - 1)
    if members and j in members:
        p |= 1 << (tau - 1)
    b_val = (p - pp * two_tau) % q + d * q
    top = b_val >> (tau - 1 - r)
    return (pp * ((1 << (r + 1)) % q) + top) % q


def substring_fp(buf, tau, q, two_tau, i_bit, j_bit, exp):
    """Fingerprint of stream bits [i_bit, j_bit]; exp must equal 2^(j-i+1) mod q."""
    return substring_fp_g(buf, tau, q, two_tau, i_bit, j_bit, exp, None)


def substring_fp_g(buf, tau, q, two_tau, i_bit, j_bit, exp, members):
    hi = prefix_fp_g(buf, tau, q, two_tau, j_bit, members)
    lo = prefix_fp_g(buf, tau, q, two_tau, i_bit - 1, members) if i_bit else 0
    return (hi - lo * exp) % q


def windows_match(buf, tau, q, two_tau, a_bit, b_bit, width, exp):
    """True iff the width-bit windows at a_bit and b_bit have equal fingerprints."""
    return windows_match_g(buf, tau, q, two_tau, a_bit, b_bit, width, exp, None)


def windows_match_g(buf, tau, q, two_tau, a_bit, b_bit, width, exp, members):
    fa = substring_fp_g(buf, tau, q, two_tau, a_bit, a_bit + width - 1, exp, members)
    fb = substring_fp_g(buf, tau, q, two_tau, b_bit, b_bit + width - 1, exp, members)
    return fa == fb


def level_fingerprints(buf, tau, q, two_tau, start_bit, char_bits, win_chars, count, exp):
    """Fingerprints of the win_chars-long window at each of count character positions."""
    return level_fingerprints_g(
        buf, tau, q, two_tau, start_bit, char_bits, win_chars, count, exp, None
    )


def level_fingerprints_g(
    buf, tau, q, two_tau, start_bit, char_bits, win_chars, count, exp, members
):
    out = []
    wbits = win_chars * char_bits
    for c in range(count):
        a = start_bit + c * char_bits
        hi = prefix_fp_g(buf, tau, q, two_tau, a + wbits - 1, members)
        lo = prefix_fp_g(buf, tau, q, two_tau, a - 1, members) if a else 0
        out.append((hi - lo * exp) % q)
    return out
