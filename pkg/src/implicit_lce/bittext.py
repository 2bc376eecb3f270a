"""Bit-packed text storage.

Characters are stored most-significant-bit first in a contiguous big-endian
bit stream, ``char_bits`` bits each, so any substring read as an integer is
the integer with that binary representation.  A seed block of ``tau`` bits
plus zero padding can be prepended, after which the stream length is an exact
multiple of the block width and block-granular access is available.
"""

from .errors import StateError
from . import kernels


def char_width(sigma: int) -> int:
    if sigma < 2:
        raise ValueError(f"alphabet size must be >= 2, got {sigma}")
    return (sigma - 1).bit_length()


class BitText:
    __slots__ = (
        "buf",
        "n_chars",
        "char_bits",
        "sigma",
        "tau",
        "pad_bits",
        "has_seed_block",
        "encoded",
        "_k",
    )

    def __init__(self, buf, n_chars, char_bits, sigma, tau, pad_bits, has_seed_block):
        self.buf = buf
        self.n_chars = n_chars
        self.char_bits = char_bits
        self.sigma = sigma
        self.tau = tau
        self.pad_bits = pad_bits
        self.has_seed_block = has_seed_block
        self.encoded = False
        self._k = kernels.select(max(tau, char_bits, 1))

    @property
    def text_bits(self) -> int:
        return self.n_chars * self.char_bits

    @property
    def total_bits(self) -> int:
        if self.has_seed_block:
            return self.tau + self.pad_bits + self.text_bits
        return self.text_bits

    @property
    def n_blocks(self) -> int:
        return self.total_bits // self.tau

    @property
    def text_start_bit(self) -> int:
        """Stream bit where character 0 begins."""
        return self.tau + self.pad_bits if self.has_seed_block else 0

    def clone(self) -> "BitText":
        t = BitText(
            bytearray(self.buf),
            self.n_chars,
            self.char_bits,
            self.sigma,
            self.tau,
            self.pad_bits,
            self.has_seed_block,
        )
        t.encoded = self.encoded
        return t


def pack(chars, sigma: int, tau: int = 63) -> BitText:
    """Pack a sequence of character codes (< sigma) into a fresh bit stream."""
    b = char_width(sigma)
    n = len(chars)
    pad = (tau - (n * b) % tau) % tau
    if sigma == 256 and b == 8:
        if isinstance(chars, (bytes, bytearray)):
            return BitText(bytearray(chars), n, b, sigma, tau, pad, False)
        buf = bytearray(n)
        for i, c in enumerate(chars):
            if not 0 <= c < 256:
                raise ValueError(f"character {c} at index {i} out of range for sigma=256")
            buf[i] = c
        return BitText(buf, n, b, sigma, tau, pad, False)
    out = bytearray()
    acc = 0
    accbits = 0
    for i, c in enumerate(chars):
        if not 0 <= c < sigma:
            raise ValueError(f"character {c} at index {i} out of range for sigma={sigma}")
        acc = (acc << b) | c
        accbits += b
        while accbits >= 8:
            accbits -= 8
            out.append((acc >> accbits) & 0xFF)
            acc &= (1 << accbits) - 1
    if accbits:
        out.append((acc << (8 - accbits)) & 0xFF)
    return BitText(out, n, b, sigma, tau, pad, False)


def attach_seed_block(t: BitText, seed: int) -> BitText:
    """Prepend [seed as tau bits][pad zeros] so the stream is block-aligned.

    Reallocates the buffer once; all later operations are in place.
    """
    if t.has_seed_block:
        raise StateError("seed block already attached")
    nbits = t.text_bits
    nbytes = (nbits + 7) >> 3
    text_val = int.from_bytes(t.buf[:nbytes], "big") >> ((nbytes << 3) - nbits) if nbits else 0
    total = t.tau + t.pad_bits + nbits
    val = (seed << (t.pad_bits + nbits)) | text_val
    total_bytes = (total + 7) >> 3
    val <<= (total_bytes << 3) - total
    t.buf = bytearray(val.to_bytes(total_bytes, "big"))
    t.has_seed_block = True
    return t


def detach_seed_block(t: BitText) -> BitText:
    """Drop the seed block and padding, leaving the bare packed text."""
    if not t.has_seed_block:
        raise StateError("no seed block attached")
    if t.encoded:
        raise StateError("buffer is encoded; restore before detaching")
    nbits = t.text_bits
    start = t.tau + t.pad_bits
    if nbits:
        total_bytes = len(t.buf)
        whole = int.from_bytes(t.buf, "big") >> ((total_bytes << 3) - start - nbits)
        val = whole & ((1 << nbits) - 1)
        nbytes = (nbits + 7) >> 3
        val <<= (nbytes << 3) - nbits
        t.buf = bytearray(val.to_bytes(nbytes, "big"))
    else:
        t.buf = bytearray()
    t.has_seed_block = False
    return t


def block_read(t: BitText, i: int) -> int:
    if not 0 <= i < t.n_blocks:
        raise IndexError(f"block {i} out of range (have {t.n_blocks})")
    return t._k.block_read(t.buf, t.tau, i)


def block_write(t: BitText, i: int, value: int) -> None:
    if not 0 <= i < t.n_blocks:
        raise IndexError(f"block {i} out of range (have {t.n_blocks})")
    if not 0 <= value < (1 << t.tau):
        raise ValueError(f"block value {value} does not fit {t.tau} bits")
    t._k.block_write(t.buf, t.tau, i, value)


def char_read(t: BitText, i: int) -> int:
    if t.encoded:
        raise StateError("buffer is encoded; use index extraction instead")
    if not 0 <= i < t.n_chars:
        raise IndexError(f"character {i} out of range (have {t.n_chars})")
    return t._k.read_bits(t.buf, t.text_start_bit + i * t.char_bits, t.char_bits)


def to_chars(t: BitText) -> list:
    return [char_read(t, i) for i in range(t.n_chars)]
