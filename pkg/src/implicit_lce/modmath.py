"""Residue arithmetic, primality testing, and prime/seed sampling.

The modulus is always a prime q with exactly ``tau`` significant bits, drawn
from an interval just above 2^(tau-1) sized so that a uniform residue exceeds
tau - 1 bits with probability at most 1/total_bits.
"""

import random
from dataclasses import dataclass

from .errors import SamplingError

# Complete deterministic witness set for Miller-Rabin below 2^64.
_WITNESSES_64 = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
_ROUNDS_ABOVE_64 = 64

#: Smallest block width accepted outside test mode.
MIN_PRODUCTION_TAU = 32
#: Smallest block width accepted at all.
MIN_TAU = 8


class Rng(random.Random):
    """Seeded random source.  Single-owner: not meant to be shared across threads."""

    def __init__(self, seed_value: int = 0):
        self.seed_value = seed_value
        super().__init__(seed_value)


@dataclass(frozen=True)
class Modulus:
    """A prime q of exactly tau significant bits."""

    q: int
    tau: int

    def __post_init__(self):
        if self.q < 2:
            raise ValueError(f"modulus must be >= 2, got {self.q}")
        if self.q.bit_length() != self.tau:
            raise ValueError(f"q = {self.q} does not have exactly {self.tau} bits")

    @classmethod
    def from_value(cls, q: int) -> "Modulus":
        return cls(q, q.bit_length())


def mul_mod(a: int, b: int, m: Modulus) -> int:
    """(a * b) mod q, exact (Python integers never overflow)."""
    return a * b % m.q


def pow_mod(base: int, e: int, m: Modulus) -> int:
    """base^e mod q by fast exponentiation."""
    return pow(base, e, m.q)


def is_prime(x: int) -> bool:
    """Primality test: deterministic below 2^64, 64 strong rounds above."""
    if x < 2:
        return False
    for p in _WITNESSES_64:
        if x == p:
            return True
        if x % p == 0:
            return False
    d = x - 1
    s = 0
    while d & 1 == 0:
        d >>= 1
        s += 1
    if x < 1 << 64:
        witnesses = _WITNESSES_64
    else:
        draw = random.Random(x)
        witnesses = [draw.randrange(2, x - 1) for _ in range(_ROUNDS_ABOVE_64)]
    for a in witnesses:
        v = pow(a, d, x)
        if v == 1 or v == x - 1:
            continue
        for _ in range(s - 1):
            v = v * v % x
            if v == x - 1:
                break
        else:
            return False
    return True


def modulus_interval(total_bits: int, tau: int) -> tuple[int, int]:
    """Sampling interval [lo, hi] for the modulus given the text's bit length.

    Any prime in the interval has exactly tau bits, and a uniform residue
    modulo it has its top bit set with probability at most 1/total_bits.
    """
    if tau < 2:
        raise ValueError(f"tau must be >= 2, got {tau}")
    if total_bits < 2:
        raise ValueError(f"total_bits must be >= 2, got {total_bits}")
    lo = 1 << (tau - 1)
    hi = -(-lo * total_bits // (total_bits - 1))  # ceiling division
    if hi - lo < 1:
        raise ValueError(f"degenerate modulus interval [{lo}, {hi}]: tau too small")
    return lo, hi


def sample_prime(lo: int, hi: int, rng: Rng) -> Modulus:
    """Uniform prime in [lo, hi] by rejection sampling."""
    if lo > hi:
        raise ValueError(f"empty interval [{lo}, {hi}]")
    budget = 64 * max(hi.bit_length(), 1)
    for _ in range(budget):
        x = rng.randint(lo, hi)
        if is_prime(x):
            return Modulus.from_value(x)
    raise SamplingError(
        f"no prime found in [{lo}, {hi}] after {budget} draws; interval may be prime-free"
    )


def sample_seed(m: Modulus, rng: Rng) -> int:
    """Uniform residue in [0, q-1]."""
    return rng.randrange(m.q)
