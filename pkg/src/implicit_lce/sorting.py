"""In-place array algorithms: heapsort, rotation-based stable merge, binary radix sort.

All take a ``less(x, y)`` ordering callable where relevant and use O(1)
auxiliary words (plus logarithmic recursion in the merge).
"""


def _reverse(a, lo, hi):
    hi -= 1
    while lo < hi:
        a[lo], a[hi] = a[hi], a[lo]
        lo += 1
        hi -= 1


def rotate(a, lo, mid, hi):
    """Left-rotate a[lo:hi] so that a[mid:hi] comes first (triple reversal)."""
    _reverse(a, lo, mid)
    _reverse(a, mid, hi)
    _reverse(a, lo, hi)


def _lower_bound(a, lo, hi, v, less):
    while lo < hi:
        mid = (lo + hi) // 2
        if less(a[mid], v):
            lo = mid + 1
        else:
            hi = mid
    return lo


def _upper_bound(a, lo, hi, v, less):
    while lo < hi:
        mid = (lo + hi) // 2
        if less(v, a[mid]):
            hi = mid
        else:
            lo = mid + 1
    return lo


def _merge(a, lo, mid, hi, less):
    n1 = mid - lo
    n2 = hi - mid
    if n1 == 0 or n2 == 0:
        return
    if n1 == 1:
        j = _lower_bound(a, mid, hi, a[lo], less)
        rotate(a, lo, mid, j)
        return
    if n2 == 1:
        i = _upper_bound(a, lo, mid, a[mid], less)
        rotate(a, i, mid, hi)
        return
    # Split at the middle of the larger run; equal elements keep left-run
    # priority, which makes the merge stable.
    if n1 >= n2:
        i = lo + n1 // 2
        j = _lower_bound(a, mid, hi, a[i], less)
    else:
        j = mid + n2 // 2
        i = _upper_bound(a, lo, mid, a[j], less)
    rotate(a, i, mid, j)
    k = i + (j - mid)
    _merge(a, lo, i, k, less)
    _merge(a, k, k + (mid - i), hi, less)


def in_place_merge(a, mid, less=None, lo=0, hi=None):
    """Merge the sorted runs a[lo:mid] and a[mid:hi] in place, stably.

    O(len log len) comparisons, O(1) auxiliary words beyond O(log len)
    recursion frames.
    """
    if hi is None:
        hi = len(a)
    if less is None:
        less = lambda x, y: x < y
    _merge(a, lo, mid, hi, less)


def heapsort(a, lo, hi, less):
    """Sort a[lo:hi] ascending under less, in place."""
    n = hi - lo

    def sift(root, end):
        while True:
            child = 2 * root + 1
            if child >= end:
                return
            if child + 1 < end and less(a[lo + child], a[lo + child + 1]):
                child += 1
            if less(a[lo + root], a[lo + child]):
                a[lo + root], a[lo + child] = a[lo + child], a[lo + root]
                root = child
            else:
                return

    for r in range(n // 2 - 1, -1, -1):
        sift(r, n)
    for end in range(n - 1, 0, -1):
        a[lo], a[lo + end] = a[lo + end], a[lo]
        sift(0, end)


def binary_radix_sort(a, lo, hi, key_bits):
    """Most-significant-digit binary radix sort of a[lo:hi], in place.

    Keys must be non-negative and fit key_bits bits.  O(len * key_bits) time,
    recursion no deeper than key_bits.
    """
    if hi - lo <= 1 or key_bits == 0:
        return
    bit = key_bits - 1
    i, j = lo, hi - 1
    while i <= j:
        while i <= j and not (a[i] >> bit) & 1:
            i += 1
        while i <= j and (a[j] >> bit) & 1:
            j -= 1
        if i < j:
            a[i], a[j] = a[j], a[i]
            i += 1
            j -= 1
    binary_radix_sort(a, lo, i, bit)
    binary_radix_sort(a, i, hi, bit)
