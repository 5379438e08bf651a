"""Wall-clock micro-benchmarks of the primitives and small in-memory PSI runs.

The numbers are reported as-is; they never feed the cost model.
"""

import logging
import random
import time
from typing import Callable, List, Optional

from pydantic import BaseModel

from ..models.elements import ElementDigest
from ..models.transcript import SchemeId
from .arithmetic import generate_dh_group, mod_exp, sample_coprime
from .encoding import hash_bytes
from .paillier import (
    encrypt_polynomial,
    encrypted_poly_eval,
    paillier_add,
    paillier_decrypt,
    paillier_encrypt,
    paillier_keygen,
)
from .polynomial import poly_eval_horner, poly_from_roots
from .protocols.runner import PsiConfig, run_psi
from .rsa import rsa_keygen, rsa_sign

logger = logging.getLogger(__name__)


class BenchTiming(BaseModel):
    name: str
    repeats: int
    mean_s: float
    best_s: float


class BenchReport(BaseModel):
    key_bits: int
    server_size: int
    client_size: int
    timings: List[BenchTiming] = []

    def timing(self, name: str) -> Optional[BenchTiming]:
        return next((t for t in self.timings if t.name == name), None)


def _time(name: str, fn: Callable[[], object], repeats: int) -> BenchTiming:
    samples = []
    for _ in range(repeats):
        started = time.perf_counter()
        fn()
        samples.append(time.perf_counter() - started)
    timing = BenchTiming(name=name, repeats=repeats, mean_s=sum(samples) / repeats, best_s=min(samples))
    logger.debug(f"{name}: best {timing.best_s:.6f}s over {repeats} runs")
    return timing


def _random_digests(count: int, rng: random.Random) -> List[ElementDigest]:
    return [hash_bytes(rng.getrandbits(64).to_bytes(8, "big"), 256) for _ in range(count)]


def run_bench(
    key_bits: int = 256,
    server_size: int = 64,
    client_size: int = 16,
    repeats: int = 5,
    rng: Optional[random.Random] = None,
) -> BenchReport:
    """Time each primitive `repeats` times and every scheme once at the given sizes.

    `key_bits` is the prime size of the RSA and Paillier keys; the DH group
    modulus has twice that many bits.
    """
    rng = rng or random.Random()
    report = BenchReport(key_bits=key_bits, server_size=server_size, client_size=client_size)
    logger.info(f"Benchmarking with {key_bits}-bit primes, m={server_size}, n={client_size}")

    rsa_keys = rsa_keygen(key_bits, rng=rng)
    paillier_keys = paillier_keygen(key_bits, rng=rng)
    group = generate_dh_group(2 * key_bits, rng=rng)
    pk, sk = paillier_keys.public, paillier_keys.private

    base = rng.randrange(2, rsa_keys.modulus_N)
    report.timings.append(_time("mod_exp", lambda: mod_exp(base, rsa_keys.d, rsa_keys.modulus_N), repeats))
    report.timings.append(_time("rsa_sign", lambda: rsa_sign(rsa_keys, base), repeats))

    plaintext = rng.randrange(pk.u)
    ciphertext = paillier_encrypt(pk, plaintext, rng=rng)
    report.timings.append(_time("paillier_encrypt", lambda: paillier_encrypt(pk, plaintext, rng=rng), repeats))
    report.timings.append(_time("paillier_decrypt", lambda: paillier_decrypt(sk, pk, ciphertext), repeats))
    report.timings.append(_time("paillier_add", lambda: paillier_add(pk, ciphertext, ciphertext), repeats))

    roots = [sample_coprime(pk.u, rng) for _ in range(client_size)]
    polynomial = poly_from_roots(roots, pk.u)
    x = rng.randrange(pk.u)
    report.timings.append(_time("poly_from_roots", lambda: poly_from_roots(roots, pk.u), repeats))
    report.timings.append(_time("poly_eval_horner", lambda: poly_eval_horner(polynomial, x, pk.u), repeats))
    encrypted = encrypt_polynomial(pk, polynomial, rng)
    report.timings.append(_time("encrypted_poly_eval", lambda: encrypted_poly_eval(pk, encrypted, x), repeats))

    server_set = frozenset(_random_digests(server_size, rng))
    overlap = rng.sample(sorted(server_set), min(client_size // 2, server_size))
    client_set = frozenset(overlap + _random_digests(client_size - len(overlap), rng))
    psi_config = PsiConfig(group=group, rsa_keys=rsa_keys, paillier_keys=paillier_keys, rng=rng)
    for scheme in SchemeId:
        report.timings.append(
            _time(f"psi:{scheme.value}", lambda: run_psi(scheme, server_set, client_set, psi_config), 1)
        )
    return report
