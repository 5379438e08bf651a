"""Hash-based naive PSI in the pull and push models."""

import random
from typing import AbstractSet, FrozenSet, Optional, Tuple

from ...models.elements import ElementDigest
from ...models.transcript import (
    PayloadKind,
    PsiResult,
    Role,
    SchemeId,
    TranscriptMessage,
)
from ...utils.errors import ProtocolError
from .base import PsiSession, require_kind


class NaivePullServer(PsiSession):
    """Publishes every server digest; learns nothing."""
    scheme = SchemeId.NAIVE_PULL
    role = Role.SERVER

    def __init__(self, server_set: AbstractSet[ElementDigest], rng: Optional[random.Random] = None):
        super().__init__(rng)
        self.server_set = frozenset(server_set)

    def _on_start(self):
        message = self._digests(0, PayloadKind.DIGEST_LIST, self._shuffled(self.server_set))
        self._finish(PsiResult.empty())
        return [message]


class NaivePullClient(PsiSession):
    scheme = SchemeId.NAIVE_PULL
    role = Role.CLIENT

    def __init__(self, client_set: AbstractSet[ElementDigest], rng: Optional[random.Random] = None):
        super().__init__(rng)
        self.client_set = frozenset(client_set)
        self._expect(0, self._on_published)

    def _on_published(self, message: TranscriptMessage):
        self._finish(naive_pull_client_intersect(message, self.client_set))
        return []


class NaivePushClient(PsiSession):
    """Uploads its digests and receives the matched subset."""
    scheme = SchemeId.NAIVE_PUSH
    role = Role.CLIENT

    def __init__(self, client_set: AbstractSet[ElementDigest], rng: Optional[random.Random] = None):
        super().__init__(rng)
        self.client_set = frozenset(client_set)
        self._expect(1, self._on_result)

    def _on_start(self):
        return [self._digests(0, PayloadKind.DIGEST_LIST, self._shuffled(self.client_set))]

    def _on_result(self, message: TranscriptMessage):
        require_kind(message, PayloadKind.RESULT_LIST)
        matched = frozenset(message.digests())
        if not matched <= self.client_set:
            raise ProtocolError("server returned digests the client never sent")
        self._finish(PsiResult(matched))
        return []


class NaivePushServer(PsiSession):
    scheme = SchemeId.NAIVE_PUSH
    role = Role.SERVER

    def __init__(self, server_set: AbstractSet[ElementDigest], rng: Optional[random.Random] = None):
        super().__init__(rng)
        self.server_set = frozenset(server_set)
        self.server_view: FrozenSet[ElementDigest] = frozenset()
        self._expect(0, self._on_upload)

    def _on_upload(self, message: TranscriptMessage):
        require_kind(message, PayloadKind.DIGEST_LIST)
        self.server_view = frozenset(message.digests())
        matched = self.server_view & self.server_set
        self._finish(PsiResult(matched))
        return [self._digests(1, PayloadKind.RESULT_LIST, sorted(matched))]


def naive_pull_server_publish(
    server_set: AbstractSet[ElementDigest], rng: Optional[random.Random] = None
) -> TranscriptMessage:
    """The single pull-model message: every server digest, shuffled."""
    return NaivePullServer(server_set, rng).start()[0]


def naive_pull_client_intersect(message: TranscriptMessage, client_set: AbstractSet[ElementDigest]) -> PsiResult:
    require_kind(message, PayloadKind.DIGEST_LIST)
    published = set(message.digests())
    return PsiResult(frozenset(d for d in client_set if d in published))


def naive_push_exchange(
    server_set: AbstractSet[ElementDigest],
    client_set: AbstractSet[ElementDigest],
    rng: Optional[random.Random] = None,
) -> Tuple[FrozenSet[ElementDigest], TranscriptMessage, PsiResult]:
    """Run both push-model messages; returns what the server saw, its reply and the client result."""
    server = NaivePushServer(server_set, rng)
    client = NaivePushClient(client_set, rng)
    server.start()
    (upload,) = client.start()
    (result_message,) = server.receive(upload)
    client.receive(result_message)
    return server.server_view, result_message, client.result()
