"""Two-party PSI sessions as explicit state machines over transcript messages."""

import logging
import random
from abc import ABC
from collections import deque
from typing import Callable, ClassVar, Deque, Dict, Iterable, List, Optional, Sequence, Tuple, TypeVar

from ...models.elements import ElementDigest
from ...models.transcript import (
    Direction,
    PayloadKind,
    PsiResult,
    Role,
    SchemeId,
    Transcript,
    TranscriptMessage,
)
from ...utils.errors import ProtocolError
from ..arithmetic import default_rng

logger = logging.getLogger(__name__)

T = TypeVar("T")

Handler = Callable[[TranscriptMessage], List[TranscriptMessage]]


class PsiSession(ABC):
    """One side of one protocol execution.

    `start()` returns the messages the side sends unprompted; `receive()`
    consumes one peer message and returns the replies. Each call is one step
    and advances `round`. Once finished, `result()` yields the outcome once.
    """
    scheme: ClassVar[SchemeId]
    role: ClassVar[Role]

    def __init__(self, rng: Optional[random.Random] = None):
        self.rng = rng or default_rng()
        self.round = 0
        self._started = False
        self._result: Optional[PsiResult] = None
        self._result_taken = False
        self._pending: Dict[int, Handler] = {}

    @property
    def outgoing(self) -> Direction:
        if self.role is Role.SERVER:
            return Direction.SERVER_TO_CLIENT
        return Direction.CLIENT_TO_SERVER

    @property
    def finished(self) -> bool:
        return self._result is not None

    def start(self) -> List[TranscriptMessage]:
        if self._started:
            raise ProtocolError(f"{self.scheme.value} {self.role.value} session already started")
        self._started = True
        self.round += 1
        return self._on_start()

    def receive(self, message: TranscriptMessage) -> List[TranscriptMessage]:
        if not self._started:
            raise ProtocolError("session received a message before start()")
        if self.finished:
            raise ProtocolError("session already finished")
        if message.direction is self.outgoing:
            raise ProtocolError(f"{self.role.value} received its own direction {message.direction.value}")
        handler = self._pending.pop(message.round, None)
        if handler is None:
            raise ProtocolError(
                f"unexpected round {message.round} for {self.scheme.value} {self.role.value}"
            )
        self.round += 1
        return handler(message)

    def result(self) -> PsiResult:
        if not self.finished:
            raise ProtocolError("session has not finished")
        if self._result_taken:
            raise ProtocolError("session result was already taken")
        self._result_taken = True
        return self._result

    def client_element_count(self, message: TranscriptMessage) -> int:
        """Number of client set elements a client message stands for."""
        return message.count

    def _on_start(self) -> List[TranscriptMessage]:
        return []

    def _expect(self, round: int, handler: Handler) -> None:
        self._pending[round] = handler

    def _finish(self, result: PsiResult) -> None:
        logger.debug(f"{self.scheme.value} {self.role.value} finished with {result.match_count} matches")
        self._result = result

    def _digests(self, round: int, kind: PayloadKind, digests: Sequence[ElementDigest]) -> TranscriptMessage:
        return TranscriptMessage.from_digests(self.outgoing, round, kind, digests)

    def _integers(self, round: int, kind: PayloadKind, values: Sequence[int]) -> TranscriptMessage:
        return TranscriptMessage.from_integers(self.outgoing, round, kind, values)

    def _shuffled(self, items: Iterable[T]) -> List[T]:
        items = list(items)
        self.rng.shuffle(items)
        return items


def require_kind(message: TranscriptMessage, kind: PayloadKind) -> None:
    if message.kind is not kind:
        raise ProtocolError(f"expected {kind.name} in round {message.round}, got {message.kind.name}")


def require_count(message: TranscriptMessage, expected: int) -> None:
    if message.count != expected:
        raise ProtocolError(f"expected {expected} entries in round {message.round}, got {message.count}")


def exchange(server: PsiSession, client: PsiSession) -> Tuple[Transcript, PsiResult]:
    """Drive both sides in memory, delivering messages in send order; returns the client's result."""
    transcript = Transcript()
    queue: Deque[TranscriptMessage] = deque()
    for session in (server, client):
        for message in session.start():
            transcript.append(message)
            queue.append(message)
    while queue:
        message = queue.popleft()
        recipient = client if message.direction is Direction.SERVER_TO_CLIENT else server
        for reply in recipient.receive(message):
            transcript.append(reply)
            queue.append(reply)
    if not client.finished:
        raise ProtocolError(f"{client.scheme.value} exchange ended before the client finished")
    return transcript, client.result()
