"""Big-integer helpers: square-and-multiply, prime generation, coprime sampling, DH groups."""

import hashlib
import logging
import random
import secrets
from math import gcd
from typing import List, Optional

import gmpy2

from ..core import config
from ..models.elements import ElementDigest
from ..models.keys import DhGroup
from ..utils.errors import DomainError, KeyGenerationError, ParameterError

logger = logging.getLogger(__name__)

# p = 23 = 2*11 + 1; 4 = 2^2 generates the order-11 subgroup
TOY_GROUP = DhGroup(p=23, q=11, g=4)

MAX_SAFE_PRIME_CANDIDATES = 200_000


def default_rng() -> random.Random:
    """Randomness source used when a caller does not inject one."""
    return secrets.SystemRandom()


def mod_exp(base: int, exponent: int, modulus: int) -> int:
    """Left-to-right square-and-multiply: base^exponent mod modulus."""
    if modulus <= 0:
        raise DomainError(f"modulus must be positive, got {modulus}")
    if exponent < 0:
        raise DomainError("negative exponents are not supported")
    if modulus == 1:
        return 0
    modulus = gmpy2.mpz(modulus)
    exponent = gmpy2.mpz(exponent)
    base = gmpy2.f_mod(gmpy2.mpz(base), modulus)
    result = gmpy2.mpz(1)
    for i in range(gmpy2.bit_length(exponent) - 1, -1, -1):
        result = gmpy2.f_mod(gmpy2.square(result), modulus)
        if gmpy2.bit_test(exponent, i):
            result = gmpy2.f_mod(result * base, modulus)
    return int(result)


def generate_prime(bits: int, rng: Optional[random.Random] = None) -> int:
    """Random prime of exactly `bits` bits."""
    if bits < 2:
        raise ParameterError(f"cannot generate a {bits}-bit prime")
    rng = rng or default_rng()
    for _ in range(config.PRIME_RETRIES):
        candidate = rng.getrandbits(bits) | (1 << (bits - 1)) | 1
        prime = gmpy2.next_prime(candidate)
        if prime.bit_length() == bits:
            return int(prime)
    raise KeyGenerationError(f"no {bits}-bit prime found after {config.PRIME_RETRIES} attempts")


def generate_distinct_primes(bits: int, count: int = 2, rng: Optional[random.Random] = None) -> List[int]:
    rng = rng or default_rng()
    primes: List[int] = []
    for _ in range(config.PRIME_RETRIES):
        prime = generate_prime(bits, rng)
        if prime not in primes:
            primes.append(prime)
        if len(primes) == count:
            return primes
    raise KeyGenerationError(f"could not draw {count} distinct {bits}-bit primes")


def sample_coprime(modulus: int, rng: Optional[random.Random] = None, low: int = 1) -> int:
    """Uniform r in [low, modulus) with gcd(r, modulus) = 1, by rejection sampling."""
    if modulus - low < 1:
        raise ParameterError(f"empty sampling range [{low}, {modulus})")
    rng = rng or default_rng()
    for _ in range(config.COPRIME_RETRIES):
        r = rng.randrange(low, modulus)
        if gcd(r, modulus) == 1:
            return r
    raise ParameterError(f"no value coprime to the modulus after {config.COPRIME_RETRIES} draws")


def generate_dh_group(bits: int, rng: Optional[random.Random] = None) -> DhGroup:
    """Safe prime p = 2q + 1 of `bits` bits with the quadratic-residue subgroup generator 4."""
    if bits < 6:
        raise ParameterError(f"cannot build a {bits}-bit safe-prime group")
    rng = rng or default_rng()
    q = gmpy2.next_prime(rng.getrandbits(bits - 1) | (1 << (bits - 2)))
    for _ in range(MAX_SAFE_PRIME_CANDIDATES):
        p = 2 * q + 1
        if p.bit_length() > bits:
            q = gmpy2.next_prime(rng.getrandbits(bits - 1) | (1 << (bits - 2)))
            continue
        if gmpy2.is_prime(p):
            logger.info(f"Generated {bits}-bit safe-prime group")
            return DhGroup(p=int(p), q=int(q), g=4)
        q = gmpy2.next_prime(q)
    raise KeyGenerationError(f"no {bits}-bit safe prime found")


def hash_to_group(d: ElementDigest, group: DhGroup) -> int:
    """Map a digest to the order-q subgroup by squaring it modulo p."""
    value = d.to_int() % group.p
    counter = 0
    while value == 0:
        counter += 1
        if counter > 0xFF:
            raise DomainError("digest cannot be mapped into the group")
        # Domain-separated re-hash
        value = int.from_bytes(hashlib.sha256(d.bytes + bytes([counter])).digest(), "big") % group.p
    return int(gmpy2.powmod(value, 2, group.p))


def random_exponent(group: DhGroup, rng: Optional[random.Random] = None) -> int:
    """Uniform secret exponent in [1, q)."""
    rng = rng or default_rng()
    return rng.randrange(1, group.q)
