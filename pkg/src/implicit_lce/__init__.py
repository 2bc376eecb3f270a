"""In-place fingerprint text index and the suffix algorithms built on it.

The text is overwritten, block by block, with a reversible fingerprint
encoding of the same size; the encoded form answers longest-common-extension
queries in logarithmic window comparisons and extracts substrings at full
speed, and it decodes back to the original bits.  On top of this sit
collision checkers that make queries exact, in-place sparse suffix sorting,
sparse and full LCP array construction, and suffix selection.
"""

from .bittext import BitText, attach_seed_block, block_read, block_write, char_read, pack
from .derand import (
    CHECKERS,
    CollisionReport,
    build_deterministic,
    check_collisions_compact,
    check_collisions_hashed,
    check_collisions_sorted,
    verify_witness,
)
from .errors import BuildError, CapacityError, SamplingError, StateError
from .index import (
    ENCODED,
    EQUAL,
    GREATER,
    LESS,
    PLAIN,
    FingerprintIndex,
    LcePair,
    ZTable,
    build_in_place,
    build_ztable,
    char_at,
    compare_suffixes,
    dump_index,
    extract,
    lce_fast,
    lce_slow,
    load_index,
    prefix_fp,
    restore_in_place,
    substring_fp,
    substring_fp_with_exp,
)
from .modmath import (
    Modulus,
    Rng,
    is_prime,
    modulus_interval,
    mul_mod,
    pow_mod,
    sample_prime,
    sample_seed,
)
from .seqcompress import CompressedSegment, compress, decompress
from .sorting import in_place_merge
from .suffixes import lcp_array, sparse_lcp, sparse_suffix_sort, suffix_select

__version__ = "0.1.0"
