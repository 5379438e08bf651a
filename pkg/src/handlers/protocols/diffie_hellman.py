"""DDH-based PSI: both sides mask hashed elements with secret exponents."""

import random
from typing import AbstractSet, List, Optional, Sequence, Tuple

import gmpy2

from ...models.elements import ElementDigest
from ...models.keys import DhGroup
from ...models.transcript import PayloadKind, PsiResult, Role, SchemeId, Transcript, TranscriptMessage
from ...utils.errors import ProtocolError
from ..arithmetic import hash_to_group, random_exponent
from .base import PsiSession, exchange, require_count, require_kind


def check_group_elements(group: DhGroup, values: Sequence[int]) -> List[int]:
    """Reject anything outside the order-q subgroup."""
    for value in values:
        if not 0 < value < group.p or gmpy2.powmod(value, group.q, group.p) != 1:
            raise ProtocolError("received value is not an element of the order-q subgroup")
    return list(values)


def mask(group: DhGroup, values: Sequence[int], exponent: int) -> List[int]:
    return [int(gmpy2.powmod(v, exponent, group.p)) for v in values]


class DhServer(PsiSession):
    """Round 0: shuffled {H(x)^a}. Round 2: {(H(y)^b)^a} in client order."""
    scheme = SchemeId.DIFFIE_HELLMAN
    role = Role.SERVER

    def __init__(
        self,
        server_set: AbstractSet[ElementDigest],
        group: DhGroup,
        secret: Optional[int] = None,
        rng: Optional[random.Random] = None,
    ):
        super().__init__(rng)
        self.server_set = frozenset(server_set)
        self.group = group
        self.secret = secret if secret is not None else random_exponent(group, self.rng)
        self._expect(1, self._on_client_masked)

    def _on_start(self):
        hashed = [hash_to_group(d, self.group) for d in self.server_set]
        masked = mask(self.group, hashed, self.secret)
        return [self._integers(0, PayloadKind.GROUP_ELEMENT_LIST, self._shuffled(masked))]

    def _on_client_masked(self, message: TranscriptMessage):
        require_kind(message, PayloadKind.GROUP_ELEMENT_LIST)
        client_masked = check_group_elements(self.group, message.integers())
        self._finish(PsiResult.empty())
        return [self._integers(2, PayloadKind.GROUP_ELEMENT_LIST, mask(self.group, client_masked, self.secret))]


class DhClient(PsiSession):
    scheme = SchemeId.DIFFIE_HELLMAN
    role = Role.CLIENT

    def __init__(
        self,
        client_set: AbstractSet[ElementDigest],
        group: DhGroup,
        secret: Optional[int] = None,
        rng: Optional[random.Random] = None,
    ):
        super().__init__(rng)
        self.group = group
        self.secret = secret if secret is not None else random_exponent(group, self.rng)
        self._order: List[ElementDigest] = list(client_set)
        self._server_masked: Optional[set] = None
        self._doubly_masked: Optional[List[int]] = None
        self._expect(0, self._on_server_masked)
        self._expect(2, self._on_doubly_masked)

    def _on_start(self):
        hashed = [hash_to_group(d, self.group) for d in self._order]
        return [self._integers(1, PayloadKind.GROUP_ELEMENT_LIST, mask(self.group, hashed, self.secret))]

    def _on_server_masked(self, message: TranscriptMessage):
        require_kind(message, PayloadKind.GROUP_ELEMENT_LIST)
        server_masked = check_group_elements(self.group, message.integers())
        self._server_masked = set(mask(self.group, server_masked, self.secret))
        return self._try_finish()

    def _on_doubly_masked(self, message: TranscriptMessage):
        require_kind(message, PayloadKind.GROUP_ELEMENT_LIST)
        require_count(message, len(self._order))
        self._doubly_masked = check_group_elements(self.group, message.integers())
        return self._try_finish()

    def _try_finish(self):
        if self._server_masked is None or self._doubly_masked is None:
            return []
        matched = frozenset(
            y for y, value in zip(self._order, self._doubly_masked) if value in self._server_masked
        )
        self._finish(PsiResult(matched))
        return []


def dh_session(
    server_set: AbstractSet[ElementDigest],
    client_set: AbstractSet[ElementDigest],
    group: DhGroup,
    a: Optional[int] = None,
    b: Optional[int] = None,
    rng: Optional[random.Random] = None,
) -> Tuple[Transcript, PsiResult]:
    return exchange(DhServer(server_set, group, a, rng), DhClient(client_set, group, b, rng))
