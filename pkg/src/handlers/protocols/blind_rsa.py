"""Blind-RSA PSI: the client obtains signatures on its elements without revealing them."""

import random
from typing import AbstractSet, List, Optional, Sequence, Set, Tuple

import gmpy2

from ...models.elements import ElementDigest
from ...models.keys import RsaKeyPair, RsaPublicKey
from ...models.transcript import PayloadKind, PsiResult, Role, SchemeId, Transcript, TranscriptMessage
from ...utils.errors import ProtocolError
from ..encoding import signature_digest
from ..rsa import rsa_blind, rsa_unblind, sample_blinding_factor
from .base import PsiSession, exchange, require_count, require_kind


def digest_to_message(d: ElementDigest, public: RsaPublicKey) -> int:
    return d.to_int() % public.modulus_N


class BlindRsaServer(PsiSession):
    """Round 0 (offline): shuffled K_i = H2(H(x_i)^d). Round 2: b_j^d in client order."""
    scheme = SchemeId.BLIND_RSA
    role = Role.SERVER

    def __init__(
        self,
        server_set: AbstractSet[ElementDigest],
        keys: RsaKeyPair,
        beta_bits: int = 256,
        rng: Optional[random.Random] = None,
        tags: Optional[Sequence[ElementDigest]] = None,
    ):
        super().__init__(rng)
        self.server_set = frozenset(server_set)
        self.keys = keys
        self.beta_bits = beta_bits
        self._tags = list(tags) if tags is not None else None
        self._expect(1, self._on_blinded)

    def published_tags(self) -> List[ElementDigest]:
        """The offline-publishable K_i list, shuffled; precomputed tags are reused."""
        if self._tags is not None:
            return self._shuffled(self._tags)
        public = self.keys.public
        tags = [
            signature_digest(
                int(gmpy2.powmod(digest_to_message(x, public), self.keys.d, public.modulus_N)),
                public.byte_length,
                self.beta_bits,
            )
            for x in self.server_set
        ]
        return self._shuffled(tags)

    def _on_start(self):
        return [self._digests(0, PayloadKind.DIGEST_LIST, self.published_tags())]

    def _on_blinded(self, message: TranscriptMessage):
        require_kind(message, PayloadKind.BLINDED_LIST)
        N = self.keys.modulus_N
        signed = []
        for blinded in message.integers():
            if blinded == 0 or blinded >= N:
                raise ProtocolError("blinded value must lie in [1, N)")
            signed.append(int(gmpy2.powmod(blinded, self.keys.d, N)))
        self._finish(PsiResult.empty())
        return [self._integers(2, PayloadKind.SIGNED_LIST, signed)]


class BlindRsaClient(PsiSession):
    scheme = SchemeId.BLIND_RSA
    role = Role.CLIENT

    def __init__(
        self,
        client_set: AbstractSet[ElementDigest],
        public: RsaPublicKey,
        beta_bits: int = 256,
        rng: Optional[random.Random] = None,
    ):
        super().__init__(rng)
        self.public = public
        self.beta_bits = beta_bits
        self._order: List[ElementDigest] = list(client_set)
        self._factors: List[int] = []
        self._tags: Optional[Set[ElementDigest]] = None
        self._signatures: Optional[List[int]] = None
        self._expect(0, self._on_tags)
        self._expect(2, self._on_signed)

    def _on_start(self):
        self._factors = [sample_blinding_factor(self.public, self.rng) for _ in self._order]
        blinded = [
            rsa_blind(self.public, digest_to_message(y, self.public), r)
            for y, r in zip(self._order, self._factors)
        ]
        return [self._integers(1, PayloadKind.BLINDED_LIST, blinded)]

    def _on_tags(self, message: TranscriptMessage):
        require_kind(message, PayloadKind.DIGEST_LIST)
        self._tags = set(message.digests())
        return self._try_finish()

    def _on_signed(self, message: TranscriptMessage):
        require_kind(message, PayloadKind.SIGNED_LIST)
        require_count(message, len(self._order))
        self._signatures = [
            rsa_unblind(self.public, signed, r) for signed, r in zip(message.integers(), self._factors)
        ]
        return self._try_finish()

    def _try_finish(self):
        if self._tags is None or self._signatures is None:
            return []
        matched = frozenset(
            y
            for y, s in zip(self._order, self._signatures)
            if signature_digest(s, self.public.byte_length, self.beta_bits) in self._tags
        )
        self._finish(PsiResult(matched))
        return []


def brsa_session(
    server_set: AbstractSet[ElementDigest],
    client_set: AbstractSet[ElementDigest],
    keys: RsaKeyPair,
    beta_bits: int = 256,
    rng: Optional[random.Random] = None,
) -> Tuple[Transcript, PsiResult]:
    return exchange(
        BlindRsaServer(server_set, keys, beta_bits, rng),
        BlindRsaClient(client_set, keys.public, beta_bits, rng),
    )
