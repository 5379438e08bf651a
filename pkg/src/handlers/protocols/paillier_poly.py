"""Polynomial PSI: the client's set as roots of an encrypted polynomial evaluated by the server."""

import random
from typing import AbstractSet, Dict, List, Optional, Tuple

from ...core import config
from ...models.elements import ElementDigest
from ...models.keys import PaillierCiphertext, PaillierKeyPair, PaillierPublicKey
from ...models.transcript import PayloadKind, PsiResult, Role, SchemeId, Transcript, TranscriptMessage
from ...utils.errors import ParameterError, ProtocolError
from ..paillier import (
    encrypt_polynomial,
    encrypted_poly_eval,
    paillier_add,
    paillier_decrypt,
    paillier_encrypt,
    paillier_scalar_mul,
)
from ..polynomial import poly_from_roots
from .base import PsiSession, exchange, require_count, require_kind


def plaintext_bits(public: PaillierPublicKey) -> int:
    bits = public.bit_length - config.PAILLIER_PLAINTEXT_MARGIN_BITS
    if bits < 1:
        raise ParameterError(
            f"a {public.bit_length}-bit Paillier modulus leaves no room for digest plaintexts"
        )
    return bits


def digest_to_plaintext(d: ElementDigest, public: PaillierPublicKey) -> int:
    """Leading (modulus bits - margin) bits of the digest, or all of it when it fits."""
    keep = plaintext_bits(public)
    return d.to_int() >> max(0, d.bit_length - keep)


class PolynomialClient(PsiSession):
    """Round 0: E(a_0)..E(a_gamma) of prod (x - y_j). Decrypts the server's round-1 list."""
    scheme = SchemeId.PAILLIER_POLYNOMIAL
    role = Role.CLIENT

    def __init__(
        self,
        client_set: AbstractSet[ElementDigest],
        keys: PaillierKeyPair,
        server_size: Optional[int] = None,
        rng: Optional[random.Random] = None,
    ):
        super().__init__(rng)
        self.keys = keys
        self.server_size = server_size
        self._by_plaintext: Dict[int, ElementDigest] = {
            digest_to_plaintext(y, keys.public): y for y in client_set
        }
        self._expect(1, self._on_evaluations)

    def _on_start(self):
        if not self._by_plaintext:
            self._finish(PsiResult.empty())
            return []
        polynomial = poly_from_roots(sorted(self._by_plaintext), self.keys.public.u)
        coefficients = encrypt_polynomial(self.keys.public, polynomial, self.rng)
        return [self._integers(0, PayloadKind.CIPHERTEXT_LIST, [c.value for c in coefficients])]

    def _on_evaluations(self, message: TranscriptMessage):
        require_kind(message, PayloadKind.CIPHERTEXT_LIST)
        if self.server_size is not None:
            require_count(message, self.server_size)
        matched = set()
        for value in message.integers():
            plaintext = paillier_decrypt(self.keys.private, self.keys.public, PaillierCiphertext(value))
            if plaintext in self._by_plaintext:
                matched.add(self._by_plaintext[plaintext])
        self._finish(PsiResult(frozenset(matched)))
        return []


class PolynomialServer(PsiSession):
    """Round 1: shuffled E(P(x_i) * r_i + x_i) for every server element."""
    scheme = SchemeId.PAILLIER_POLYNOMIAL
    role = Role.SERVER

    def __init__(
        self,
        server_set: AbstractSet[ElementDigest],
        public: PaillierPublicKey,
        rng: Optional[random.Random] = None,
    ):
        super().__init__(rng)
        self.public = public
        self._plaintexts: List[int] = [digest_to_plaintext(x, public) for x in server_set]
        self._expect(0, self._on_coefficients)

    def client_element_count(self, message: TranscriptMessage) -> int:
        return max(0, message.count - 1)

    def _on_coefficients(self, message: TranscriptMessage):
        require_kind(message, PayloadKind.CIPHERTEXT_LIST)
        if message.count < 2:
            raise ProtocolError("encrypted polynomial must have degree at least 1")
        coefficients = []
        for value in message.integers():
            if not 0 < value < self.public.u_squared:
                raise ProtocolError("ciphertext does not lie in [1, u^2)")
            coefficients.append(PaillierCiphertext(value))

        responses = []
        for x in self._plaintexts:
            evaluated = encrypted_poly_eval(self.public, coefficients, x)
            r = self.rng.randrange(1, self.public.u)
            masked = paillier_scalar_mul(self.public, evaluated, r)
            responses.append(paillier_add(self.public, masked, paillier_encrypt(self.public, x, rng=self.rng)))
        self._finish(PsiResult.empty())
        return [self._integers(1, PayloadKind.CIPHERTEXT_LIST, [c.value for c in self._shuffled(responses)])]


def fnp_session(
    server_set: AbstractSet[ElementDigest],
    client_set: AbstractSet[ElementDigest],
    keys: PaillierKeyPair,
    rng: Optional[random.Random] = None,
) -> Tuple[Transcript, PsiResult]:
    return exchange(
        PolynomialServer(server_set, keys.public, rng),
        PolynomialClient(client_set, keys, len(server_set), rng),
    )
