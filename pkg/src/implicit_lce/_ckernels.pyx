# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled bit and fingerprint kernels.

Same strict-path surface as ``_pykernels`` for block widths up to 63 bits
(residues live in 64-bit words, products in 128-bit).  Test-mode paths that
carry an overflow list stay in the pure backend.
"""

ctypedef unsigned long long u64

cdef extern from *:
    ctypedef unsigned long long u128 "__uint128_t"

BACKEND = "c"
MAX_TAU = 63


cdef inline u64 _mulmod(u64 a, u64 b, u64 q):
    return <u64>((<u128>a * b) % q)


cdef u64 _powmod(u64 base, u64 e, u64 q):
    cdef u64 r = 1 % q
    base %= q
    while e:
        if e & 1:
            r = _mulmod(r, base, q)
        base = _mulmod(base, base, q)
        e >>= 1
    return r


def mul_mod(a, b, q):
    return _mulmod(a, b, q)


def pow_mod(base, e, q):
    return _powmod(base, e, q)


cdef inline u64 _read_bits(unsigned char[::1] buf, Py_ssize_t pos, int width):
    cdef Py_ssize_t lo = pos >> 3
    cdef Py_ssize_t hi = (pos + width + 7) >> 3
    cdef u128 acc = 0
    cdef Py_ssize_t t
    cdef int shift
    for t in range(lo, hi):
        acc = (acc << 8) | buf[t]
    shift = <int>(((hi - lo) << 3) - (pos & 7) - width)
    return <u64>((acc >> shift) & ((<u128>1 << width) - 1))


cdef inline void _write_bits(unsigned char[::1] buf, Py_ssize_t pos, int width, u64 value):
    cdef Py_ssize_t lo = pos >> 3
    cdef Py_ssize_t hi = (pos + width + 7) >> 3
    cdef u128 acc = 0
    cdef u128 mask
    cdef Py_ssize_t t
    cdef int shift
    for t in range(lo, hi):
        acc = (acc << 8) | buf[t]
    shift = <int>(((hi - lo) << 3) - (pos & 7) - width)
    mask = ((<u128>1 << width) - 1) << shift
    acc = (acc & ~mask) | ((<u128>value << shift) & mask)
    for t in range(hi - 1, lo - 1, -1):
        buf[t] = <unsigned char>(acc & 0xFF)
        acc >>= 8


def read_bits(buf, pos, width):
    cdef unsigned char[::1] mv = buf
    if width == 0:
        return 0
    return _read_bits(mv, pos, width)


def write_bits(buf, pos, width, value):
    cdef unsigned char[::1] mv = buf
    if width == 0:
        return
    _write_bits(mv, pos, width, value)


def block_read(buf, tau, i):
    cdef unsigned char[::1] mv = buf
    return _read_bits(mv, <Py_ssize_t>i * <int>tau, tau)


def block_write(buf, tau, i, value):
    cdef unsigned char[::1] mv = buf
    _write_bits(mv, <Py_ssize_t>i * <int>tau, tau, value)


cdef void _decode_range(unsigned char[::1] mv, int tau, u64 q, u64 two_tau, Py_ssize_t upto):
    cdef u64 low = (<u64>1 << (tau - 1)) - 1
    cdef u64 prev = _read_bits(mv, 0, tau)
    cdef u64 blk, d, p, b_val
    cdef Py_ssize_t k
    for k in range(1, upto):
        blk = _read_bits(mv, k * tau, tau)
        d = blk >> (tau - 1)
        p = blk & low
        b_val = (p + q - _mulmod(prev, two_tau, q)) % q + d * q
        _write_bits(mv, k * tau, tau, b_val)
        prev = p


def encode_blocks(buf, tau, q, n_blocks):
    cdef unsigned char[::1] mv = buf
    cdef int t = tau
    cdef u64 qq = q
    cdef u64 two_tau = <u64>(((<u128>1) << t) % qq)
    cdef u64 msb = <u64>1 << (t - 1)
    cdef u64 prev = _read_bits(mv, 0, t)
    cdef u64 b_val, cur, d
    cdef Py_ssize_t i
    if prev & msb:
        return 0
    for i in range(1, <Py_ssize_t>n_blocks):
        b_val = _read_bits(mv, i * t, t)
        d = 1 if b_val >= qq else 0
        cur = <u64>(((<u128>prev * two_tau) + b_val) % qq)
        if cur & msb:
            _decode_range(mv, t, qq, two_tau, i)
            return i
        _write_bits(mv, i * t, t, (d << (t - 1)) | cur)
        prev = cur
    return -1


def decode_blocks(buf, tau, q, n_blocks):
    cdef unsigned char[::1] mv = buf
    cdef u64 qq = q
    cdef u64 two_tau = <u64>(((<u128>1) << <int>tau) % qq)
    _decode_range(mv, tau, qq, two_tau, n_blocks)


cdef inline u64 _hash_at(unsigned char[::1] mv, int tau, Py_ssize_t k):
    if k == 0:
        return _read_bits(mv, 0, tau)
    return _read_bits(mv, k * tau, tau) & ((<u64>1 << (tau - 1)) - 1)


cdef u64 _reconstruct(unsigned char[::1] mv, int tau, u64 q, u64 two_tau, Py_ssize_t j):
    cdef u64 blk, d, p, prev
    if j == 0:
        return _read_bits(mv, 0, tau)
    blk = _read_bits(mv, j * tau, tau)
    d = blk >> (tau - 1)
    p = blk & ((<u64>1 << (tau - 1)) - 1)
    prev = _hash_at(mv, tau, j - 1)
    return (p + q - _mulmod(prev, two_tau, q)) % q + d * q


def reconstruct_block(buf, tau, q, two_tau, j):
    cdef unsigned char[::1] mv = buf
    return _reconstruct(mv, tau, q, two_tau, j)


cdef u64 _prefix_fp(unsigned char[::1] mv, int tau, u64 q, u64 two_tau, Py_ssize_t i_bit):
    cdef Py_ssize_t j = i_bit // tau
    cdef int r = <int>(i_bit - j * tau)
    cdef u64 pp, blk, d, p, b_val, top, pw
    if j == 0:
        return (_read_bits(mv, 0, tau) >> (tau - 1 - r)) % q
    pp = _hash_at(mv, tau, j - 1)
    blk = _read_bits(mv, j * tau, tau)
    d = blk >> (tau - 1)
    p = blk & ((<u64>1 << (tau - 1)) - 1)
    b_val = (p + q - _mulmod(pp, two_tau, q)) % q + d * q
    top = b_val >> (tau - 1 - r)
    pw = (<u64>1 << (r + 1)) % q
    return <u64>(((<u128>pp * pw) + top) % q)


def prefix_fp(buf, tau, q, two_tau, i_bit):
    cdef unsigned char[::1] mv = buf
    return _prefix_fp(mv, tau, q, two_tau, i_bit)


cdef inline u64 _substring_fp(unsigned char[::1] mv, int tau, u64 q, u64 two_tau,
                              Py_ssize_t i_bit, Py_ssize_t j_bit, u64 exp):
    cdef u64 hi = _prefix_fp(mv, tau, q, two_tau, j_bit)
    cdef u64 lo = _prefix_fp(mv, tau, q, two_tau, i_bit - 1) if i_bit else 0
    return (hi + q - _mulmod(lo, exp, q)) % q


def substring_fp(buf, tau, q, two_tau, i_bit, j_bit, exp):
    cdef unsigned char[::1] mv = buf
    return _substring_fp(mv, tau, q, two_tau, i_bit, j_bit, exp)


def windows_match(buf, tau, q, two_tau, a_bit, b_bit, width, exp):
    cdef unsigned char[::1] mv = buf
    cdef u64 fa = _substring_fp(mv, tau, q, two_tau, a_bit, a_bit + width - 1, exp)
    cdef u64 fb = _substring_fp(mv, tau, q, two_tau, b_bit, b_bit + width - 1, exp)
    return fa == fb


def level_fingerprints(buf, tau, q, two_tau, start_bit, char_bits, win_chars, count, exp):
    cdef unsigned char[::1] mv = buf
    cdef int t = tau
    cdef u64 qq = q
    cdef u64 tt = two_tau
    cdef u64 ee = exp
    cdef Py_ssize_t wbits = <Py_ssize_t>win_chars * <Py_ssize_t>char_bits
    cdef Py_ssize_t a, c
    cdef u64 hi, lo
    out = []
    for c in range(<Py_ssize_t>count):
        a = <Py_ssize_t>start_bit + c * <Py_ssize_t>char_bits
        hi = _prefix_fp(mv, t, qq, tt, a + wbits - 1)
        lo = _prefix_fp(mv, t, qq, tt, a - 1) if a else 0
        out.append((hi + qq - _mulmod(lo, ee, qq)) % qq)
    return out
