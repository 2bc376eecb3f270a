"""Sort-and-strip compression of a slice of fixed-width integers.

A slice of k integers, each ``width`` bits, is sorted ascending; because the
values are then grouped by top bit, one stored rank (the first index whose
top bit is 1) replaces all k top bits.  The k-bit tail this frees inside the
slice's own storage can be lent out, e.g. to hold a borrowed-bits z-table.

WARNING: compression destroys the original element order by design.  Callers
that need an ordering must re-establish it after decompression; only the
sorted multiset of values survives the round trip.
"""

from bisect import bisect_left

from . import audit
from .errors import CapacityError, StateError
from .sorting import heapsort


def _read_span(arr, lo, word, pos, width):
    """Bits [pos, pos + width) of the concatenation of word-bit slots."""
    if width == 0:
        return 0
    end = pos + width
    w0 = pos // word
    w1 = (end - 1) // word
    acc = 0
    for w in range(w0, w1 + 1):
        acc = (acc << word) | arr[lo + w]
    acc >>= (w1 + 1) * word - end
    return acc & ((1 << width) - 1)


def _write_span(arr, lo, word, pos, width, value):
    if width == 0:
        return
    end = pos + width
    w0 = pos // word
    w1 = (end - 1) // word
    acc = 0
    for w in range(w0, w1 + 1):
        acc = (acc << word) | arr[lo + w]
    shift = (w1 + 1) * word - end
    mask = ((1 << width) - 1) << shift
    acc = (acc & ~mask) | ((value << shift) & mask)
    for w in range(w1, w0 - 1, -1):
        arr[lo + w] = acc & ((1 << word) - 1)
        acc >>= word


class BitLease:
    """Writable window over the freed bits of a compressed segment."""

    def __init__(self, segment, offset, bits):
        self._seg = segment
        self._offset = offset
        self.bits = bits

    def read(self, pos, width):
        if pos + width > self.bits:
            raise IndexError(f"lease read [{pos}, {pos + width}) beyond {self.bits} bits")
        s = self._seg
        return _read_span(s.arr, s.lo, s.width, self._offset + pos, width)

    def write(self, pos, width, value):
        if pos + width > self.bits:
            raise IndexError(f"lease write [{pos}, {pos + width}) beyond {self.bits} bits")
        s = self._seg
        _write_span(s.arr, s.lo, s.width, self._offset + pos, width, value)


class CompressedSegment:
    def __init__(self, arr, lo, k, width, split_index):
        self.arr = arr
        self.lo = lo
        self.k = k
        self.width = width
        self.split_index = split_index
        self.lease_bits = 0
        self._lease_active = False
        self._consumed = False

    @property
    def free_bits(self) -> int:
        return self.k

    def lease(self, bits: int) -> BitLease:
        if self._consumed:
            raise StateError("segment already decompressed")
        if self._lease_active:
            raise StateError("lease already active")
        if bits > self.k:
            raise CapacityError(f"requested {bits} bits, segment freed only {self.k}")
        self._lease_active = True
        self.lease_bits = bits
        audit.record(4)  # lease handle bookkeeping
        return BitLease(self, self.k * (self.width - 1), bits)

    def release(self) -> None:
        if not self._lease_active:
            raise StateError("no active lease")
        self._lease_active = False
        self.lease_bits = 0
        audit.release(4)


def compress(arr, lo: int, k: int, width: int) -> CompressedSegment:
    """Sort arr[lo:lo+k] ascending, strip top bits, pack payload at the front.

    The slice's slots afterwards hold k*(width-1) payload bits followed by k
    freed (zeroed) bits; O(1) words are used beyond the slice itself.
    """
    if k < 1:
        raise ValueError("cannot compress an empty segment")
    limit = 1 << width
    for t in range(lo, lo + k):
        if not 0 <= arr[t] < limit:
            raise ValueError(f"element {arr[t]} does not fit {width} bits")
    heapsort(arr, lo, lo + k, lambda x, y: x < y)
    split = bisect_left(arr, 1 << (width - 1), lo, lo + k) - lo
    low_mask = (1 << (width - 1)) - 1
    # Left-to-right payload packing never writes past the slot it just read.
    for t in range(k):
        v = arr[lo + t] & low_mask
        _write_span(arr, lo, width, t * (width - 1), width - 1, v)
    _write_span(arr, lo, width, k * (width - 1), k, 0)
    audit.record(8)  # segment handle bookkeeping
    return CompressedSegment(arr, lo, k, width, split)


def decompress(cs: CompressedSegment) -> None:
    """Re-extend the top bits; the slice holds the sorted multiset, full width.

    The lease must have been released; the segment handle is consumed.
    """
    if cs._consumed:
        raise StateError("segment already decompressed")
    if cs._lease_active:
        raise StateError("lease still active; release it before decompressing")
    arr, lo, k, width = cs.arr, cs.lo, cs.k, cs.width
    msb = 1 << (width - 1)
    # Right-to-left so payload bits are consumed before their slot is rewritten.
    for t in range(k - 1, -1, -1):
        v = _read_span(arr, lo, width, t * (width - 1), width - 1)
        if t >= cs.split_index:
            v |= msb
        arr[lo + t] = v
    cs._consumed = True
    audit.release(8)
