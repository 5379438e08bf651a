"""Key material and algebraic value types for the asymmetric schemes."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Tuple


@dataclass(frozen=True)
class PaillierPublicKey:
    """Paillier public key (u, g) with g = u + 1."""
    u: int
    g: int

    @cached_property
    def u_squared(self) -> int:
        return self.u * self.u

    @property
    def bit_length(self) -> int:
        return self.u.bit_length()


@dataclass(frozen=True)
class PaillierPrivateKey:
    """Paillier private key: lam = lcm(p-1, q-1), mu = L(g^lam mod u^2)^-1 mod u."""
    lam: int
    mu: int
    p: int = field(default=0, repr=False)
    q: int = field(default=0, repr=False)


@dataclass(frozen=True)
class PaillierKeyPair:
    public: PaillierPublicKey
    private: PaillierPrivateKey


@dataclass(frozen=True)
class PaillierCiphertext:
    value: int


@dataclass(frozen=True)
class RsaPublicKey:
    modulus_N: int
    e: int

    @property
    def byte_length(self) -> int:
        return (self.modulus_N.bit_length() + 7) // 8


@dataclass(frozen=True)
class RsaKeyPair:
    """RSA key pair with e*d = 1 mod lcm(p-1, q-1)."""
    modulus_N: int
    e: int
    d: int = field(repr=False)
    p: int = field(repr=False)
    q: int = field(repr=False)

    @property
    def public(self) -> RsaPublicKey:
        return RsaPublicKey(self.modulus_N, self.e)


@dataclass(frozen=True)
class DhGroup:
    """Order-q subgroup of quadratic residues modulo the safe prime p = 2q + 1."""
    p: int
    q: int
    g: int

    @property
    def byte_length(self) -> int:
        return (self.p.bit_length() + 7) // 8

    def contains(self, element: int) -> bool:
        return 0 < element < self.p and pow(element, self.q, self.p) == 1


@dataclass(frozen=True)
class Polynomial:
    """Coefficients a_0..a_gamma (lowest degree first) modulo `modulus`."""
    coefficients: Tuple[int, ...]
    modulus: int

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    @property
    def is_monic(self) -> bool:
        return self.coefficients[-1] == 1
