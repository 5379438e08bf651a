"""Bloom filter over element digests, its PSI use and its wire format."""

import logging
import math
import random
import struct
from dataclasses import dataclass, field
from typing import AbstractSet, Iterable, List, NamedTuple, Optional, Tuple

import gmpy2
import mmh3
import numpy as np

from ...models.elements import ElementDigest
from ...models.keys import RsaKeyPair
from ...models.transcript import PsiResult
from ...utils.errors import ParameterError, ProtocolError
from ..arithmetic import default_rng
from ..encoding import signature_digest
from ..rsa import rsa_blind, rsa_unblind, sample_blinding_factor

logger = logging.getLogger(__name__)

BLOOM_MAGIC = b"PSBF"
_BLOOM_HEADER = struct.Struct("<4sIII")


def bloom_indices(x: ElementDigest, num_bits: int, num_hashes: int) -> List[int]:
    """k indices from one keyed 64-bit murmur hash, seeded by index."""
    return [mmh3.hash64(x.bytes, seed=i, signed=False)[0] % num_bits for i in range(num_hashes)]


@dataclass
class BloomFilter:
    num_bits: int
    num_hashes: int
    inserted: int = 0
    bits: np.ndarray = field(default=None, repr=False)

    def __post_init__(self):
        if self.num_bits <= 0 or self.num_hashes < 1:
            raise ParameterError(f"Bloom filter needs b > 0 and k >= 1, got b={self.num_bits}, k={self.num_hashes}")
        if self.bits is None:
            self.bits = np.zeros(self.num_bits, dtype=np.bool_)
        elif self.bits.shape != (self.num_bits,):
            raise ParameterError(f"bit array has shape {self.bits.shape}, expected ({self.num_bits},)")

    @property
    def popcount(self) -> int:
        return int(np.count_nonzero(self.bits))

    def __contains__(self, x: ElementDigest) -> bool:
        return bloom_query(self, x)


def bloom_insert(f: BloomFilter, x: ElementDigest) -> None:
    f.bits[bloom_indices(x, f.num_bits, f.num_hashes)] = True
    f.inserted += 1


def bloom_query(f: BloomFilter, x: ElementDigest) -> bool:
    return bool(f.bits[bloom_indices(x, f.num_bits, f.num_hashes)].all())


def bloom_from_set(elements: Iterable[ElementDigest], num_bits: int, num_hashes: int) -> BloomFilter:
    f = BloomFilter(num_bits, num_hashes)
    for x in elements:
        bloom_insert(f, x)
    return f


def bloom_fpr_estimate(num_bits: int, num_hashes: int, num_inserted: int) -> float:
    """(1 - e^(-kM/b))^k."""
    if num_bits <= 0 or num_hashes < 1 or num_inserted < 0:
        raise ParameterError("b and k must be positive and M non-negative")
    return (1.0 - math.exp(-num_hashes * num_inserted / num_bits)) ** num_hashes


def bloom_optimal_parameters(num_elements: int, target_fpr: float) -> Tuple[int, int]:
    """Smallest (b, k) meeting target_fpr for num_elements insertions."""
    if num_elements <= 0 or not 0.0 < target_fpr < 1.0:
        raise ParameterError("need M > 0 and 0 < target_fpr < 1")
    num_bits = math.ceil(-num_elements * math.log(target_fpr) / math.log(2) ** 2)
    num_hashes = max(1, round(num_bits / num_elements * math.log(2)))
    return num_bits, num_hashes


def bloom_psi(
    server_set: AbstractSet[ElementDigest],
    client_set: AbstractSet[ElementDigest],
    num_bits: int,
    num_hashes: int,
) -> PsiResult:
    """Client elements that hit the server's filter: a superset of the true intersection."""
    f = bloom_from_set(server_set, num_bits, num_hashes)
    return PsiResult(frozenset(y for y in client_set if bloom_query(f, y)))


def blind_rsa_bloom_psi(
    server_set: AbstractSet[ElementDigest],
    client_set: AbstractSet[ElementDigest],
    keys: RsaKeyPair,
    num_bits: int,
    num_hashes: int,
    beta_bits: int = 256,
    rng: Optional[random.Random] = None,
) -> PsiResult:
    """Bloom filter over the server's signed tags K_i, queried with the client's unblinded signatures."""
    rng = rng or default_rng()
    public = keys.public
    N = public.modulus_N

    def tag(signature: int) -> ElementDigest:
        return signature_digest(signature, public.byte_length, beta_bits)

    f = bloom_from_set(
        (tag(int(gmpy2.powmod(x.to_int() % N, keys.d, N))) for x in server_set),
        num_bits,
        num_hashes,
    )
    matched = set()
    for y in client_set:
        r = sample_blinding_factor(public, rng)
        blinded = rsa_blind(public, y.to_int() % N, r)
        signature = rsa_unblind(public, int(gmpy2.powmod(blinded, keys.d, N)), r)
        if bloom_query(f, tag(signature)):
            matched.add(y)
    return PsiResult(frozenset(matched))


class BloomTransfer(NamedTuple):
    setup_bits: int
    online_bits: int
    list_setup_bits: int


def bloom_transfer_bits(num_server: int, num_client: int, num_bits: int, tau: int = 2 ** 12, beta: int = 2 ** 8) -> BloomTransfer:
    """Filter download (b bits) and the 2N tau-bit blind-signing exchange, against publishing M tags."""
    if num_server < 0 or num_client < 0 or num_bits <= 0:
        raise ParameterError("set sizes must be non-negative and b positive")
    return BloomTransfer(
        setup_bits=num_bits,
        online_bits=2 * num_client * tau,
        list_setup_bits=num_server * beta,
    )


def bloom_serialize(f: BloomFilter) -> bytes:
    """16-byte header (magic, b, k, inserted) followed by bits packed little-endian within bytes."""
    header = _BLOOM_HEADER.pack(BLOOM_MAGIC, f.num_bits, f.num_hashes, f.inserted)
    return header + np.packbits(f.bits, bitorder="little").tobytes()


def bloom_deserialize(data: bytes) -> BloomFilter:
    if len(data) < _BLOOM_HEADER.size:
        raise ProtocolError("Bloom filter blob shorter than its header")
    magic, num_bits, num_hashes, inserted = _BLOOM_HEADER.unpack_from(data)
    if magic != BLOOM_MAGIC:
        raise ProtocolError(f"bad Bloom filter magic {magic!r}")
    body = np.frombuffer(data, dtype=np.uint8, offset=_BLOOM_HEADER.size)
    if len(body) != (num_bits + 7) // 8:
        raise ProtocolError(f"Bloom filter body is {len(body)} bytes, expected {(num_bits + 7) // 8}")
    bits = np.unpackbits(body, count=num_bits, bitorder="little").astype(np.bool_)
    return BloomFilter(num_bits, num_hashes, inserted, bits)
