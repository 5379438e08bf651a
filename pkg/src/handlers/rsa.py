"""Textbook RSA key generation plus the blinding algebra of blind signatures."""

import logging
import random
from math import gcd
from typing import Optional

import gmpy2

from ..core import config
from ..models.keys import RsaKeyPair, RsaPublicKey
from ..utils.errors import DomainError, KeyGenerationError, ParameterError
from .arithmetic import default_rng, generate_distinct_primes, sample_coprime

logger = logging.getLogger(__name__)

MIN_PRIME_BITS = 16


def rsa_keypair_from_primes(p: int, q: int, e: int = config.RSA_PUBLIC_EXPONENT) -> RsaKeyPair:
    """Key pair with d = e^-1 mod lcm(p-1, q-1)."""
    if p == q:
        raise KeyGenerationError("p and q must be distinct")
    lam = int(gmpy2.lcm(p - 1, q - 1))
    if gcd(e, lam) != 1:
        raise KeyGenerationError(f"e={e} is not coprime to lcm(p-1, q-1)")
    d = int(gmpy2.invert(e, lam))
    return RsaKeyPair(modulus_N=p * q, e=e, d=d, p=p, q=q)


def rsa_keygen(
    prime_bits: int,
    e: int = config.RSA_PUBLIC_EXPONENT,
    rng: Optional[random.Random] = None,
) -> RsaKeyPair:
    """Generate an RSA key pair from two random `prime_bits`-bit primes."""
    if prime_bits < MIN_PRIME_BITS:
        raise ParameterError(f"prime_bits must be at least {MIN_PRIME_BITS}, got {prime_bits}")
    rng = rng or default_rng()
    for attempt in range(1, config.PRIME_RETRIES + 1):
        p, q = generate_distinct_primes(prime_bits, 2, rng)
        try:
            keys = rsa_keypair_from_primes(p, q, e)
        except KeyGenerationError:
            logger.debug(f"RSA prime pair rejected on attempt {attempt}")
            continue
        logger.info(f"Generated RSA key pair with {keys.modulus_N.bit_length()}-bit modulus")
        return keys
    raise KeyGenerationError(f"e={e} not coprime to lcm(p-1, q-1) after {config.PRIME_RETRIES} attempts")


def rsa_sign(keys: RsaKeyPair, m: int) -> int:
    """Raw signature m^d mod N."""
    if not 0 <= m < keys.modulus_N:
        raise DomainError("message must lie in [0, N)")
    return int(gmpy2.powmod(m, keys.d, keys.modulus_N))


def rsa_verify(public: RsaPublicKey, signature: int) -> int:
    """Recover s^e mod N."""
    return int(gmpy2.powmod(signature, public.e, public.modulus_N))


def sample_blinding_factor(public: RsaPublicKey, rng: Optional[random.Random] = None) -> int:
    """Random r in [2, N) invertible modulo N."""
    return sample_coprime(public.modulus_N, rng, low=2)


def rsa_blind(public: RsaPublicKey, m: int, r: int) -> int:
    """m * r^e mod N."""
    return int(m * gmpy2.powmod(r, public.e, public.modulus_N) % public.modulus_N)


def rsa_unblind(public: RsaPublicKey, blinded_signature: int, r: int) -> int:
    """blinded_signature * r^-1 mod N, which equals m^d for an honest signer."""
    try:
        r_inverse = gmpy2.invert(r, public.modulus_N)
    except ZeroDivisionError as e:
        raise ParameterError("blinding factor is not invertible modulo N") from e
    return int(blinded_signature * r_inverse % public.modulus_N)
