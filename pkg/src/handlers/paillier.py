"""Paillier additive homomorphic encryption with g = u + 1."""

import logging
import random
from math import gcd
from typing import List, Optional, Sequence

import gmpy2

from ..core import config
from ..models.keys import (
    PaillierCiphertext,
    PaillierKeyPair,
    PaillierPrivateKey,
    PaillierPublicKey,
    Polynomial,
)
from ..utils.errors import DecryptionError, DomainError, KeyGenerationError, ParameterError
from .arithmetic import default_rng, generate_distinct_primes, sample_coprime

logger = logging.getLogger(__name__)

MIN_PRIME_BITS = 16


def paillier_keypair_from_primes(p: int, q: int) -> PaillierKeyPair:
    """Build the key pair for two given primes."""
    if p == q:
        raise KeyGenerationError("p and q must be distinct")
    u = p * q
    if gcd(u, (p - 1) * (q - 1)) != 1:
        raise KeyGenerationError("gcd(pq, (p-1)(q-1)) != 1")
    u_squared = u * u
    g = u + 1
    lam = int(gmpy2.lcm(p - 1, q - 1))
    l_value = (int(gmpy2.powmod(g, lam, u_squared)) - 1) // u
    try:
        mu = int(gmpy2.invert(l_value, u))
    except ZeroDivisionError as e:
        raise KeyGenerationError("L(g^lambda mod u^2) is not invertible modulo u") from e
    return PaillierKeyPair(
        public=PaillierPublicKey(u=u, g=g),
        private=PaillierPrivateKey(lam=lam, mu=mu, p=p, q=q),
    )


def paillier_keygen(prime_bits: int, rng: Optional[random.Random] = None) -> PaillierKeyPair:
    """Generate a key pair from two random `prime_bits`-bit primes."""
    if prime_bits < MIN_PRIME_BITS:
        raise ParameterError(f"prime_bits must be at least {MIN_PRIME_BITS}, got {prime_bits}")
    rng = rng or default_rng()
    for attempt in range(1, config.PRIME_RETRIES + 1):
        p, q = generate_distinct_primes(prime_bits, 2, rng)
        try:
            keys = paillier_keypair_from_primes(p, q)
        except KeyGenerationError:
            logger.debug(f"Paillier prime pair rejected on attempt {attempt}")
            continue
        logger.info(f"Generated Paillier key pair with {keys.public.bit_length}-bit modulus")
        return keys
    raise KeyGenerationError(f"no usable Paillier primes after {config.PRIME_RETRIES} attempts")


def paillier_encrypt(
    pk: PaillierPublicKey,
    s: int,
    r: Optional[int] = None,
    rng: Optional[random.Random] = None,
) -> PaillierCiphertext:
    """E(s) = g^s * r^u mod u^2, computed as (1 + s*u) * r^u since g = u + 1."""
    if not 0 <= s < pk.u:
        raise DomainError(f"plaintext must lie in [0, u), got {s}")
    if r is None:
        r = sample_coprime(pk.u, rng)
    elif gcd(r, pk.u) != 1:
        raise ParameterError("randomizer r must be coprime to u")
    u_squared = pk.u_squared
    value = (1 + s * pk.u) * gmpy2.powmod(r, pk.u, u_squared) % u_squared
    return PaillierCiphertext(int(value))


def paillier_decrypt(sk: PaillierPrivateKey, pk: PaillierPublicKey, c: PaillierCiphertext) -> int:
    """D(c) = L(c^lambda mod u^2) * mu mod u."""
    u_squared = pk.u_squared
    if not 0 <= c.value < u_squared or gcd(c.value, pk.u) != 1:
        raise DecryptionError("ciphertext is not an invertible residue modulo u^2")
    l_value = (int(gmpy2.powmod(c.value, sk.lam, u_squared)) - 1) // pk.u
    return l_value * sk.mu % pk.u


def paillier_add(pk: PaillierPublicKey, c1: PaillierCiphertext, c2: PaillierCiphertext) -> PaillierCiphertext:
    """Ciphertext of (s1 + s2) mod u."""
    return PaillierCiphertext(c1.value * c2.value % pk.u_squared)


def paillier_scalar_mul(pk: PaillierPublicKey, c: PaillierCiphertext, k: int) -> PaillierCiphertext:
    """Ciphertext of (k * s) mod u, as c^k mod u^2."""
    if not 0 <= k < pk.u:
        raise DomainError(f"scalar must lie in [0, u), got {k}")
    return PaillierCiphertext(int(gmpy2.powmod(c.value, k, pk.u_squared)))


def encrypt_polynomial(
    pk: PaillierPublicKey, polynomial: Polynomial, rng: Optional[random.Random] = None
) -> List[PaillierCiphertext]:
    """Encrypt a_0..a_gamma; the polynomial must be reduced modulo u."""
    if polynomial.modulus != pk.u:
        raise DomainError("polynomial modulus must equal the Paillier modulus u")
    return [paillier_encrypt(pk, a, rng=rng) for a in polynomial.coefficients]


def encrypted_poly_eval(
    pk: PaillierPublicKey, enc_coeffs: Sequence[PaillierCiphertext], x: int
) -> PaillierCiphertext:
    """Encrypted Horner: acc <- E(a_gamma); acc <- acc^x * E(a_i) for i = gamma-1..0."""
    if not enc_coeffs:
        raise DomainError("cannot evaluate a polynomial without coefficients")
    if not 0 <= x < pk.u:
        raise DomainError(f"evaluation point must lie in [0, u), got {x}")
    acc = enc_coeffs[-1]
    for coefficient in reversed(enc_coeffs[:-1]):
        acc = paillier_add(pk, paillier_scalar_mul(pk, acc, x), coefficient)
    return acc
