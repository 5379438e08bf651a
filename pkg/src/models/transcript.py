"""Protocol identifiers, transcript messages and their binary codec."""

from __future__ import annotations

import enum
import struct
from dataclasses import dataclass, field
from typing import FrozenSet, Iterator, List, Sequence

from .elements import ElementDigest, VALID_DIGEST_LENGTHS
from ..utils.errors import ProtocolError

_HEADER = struct.Struct(">BBI")
_LENGTH = struct.Struct(">I")


class SchemeId(str, enum.Enum):
    NAIVE_PULL = "naive-pull"
    NAIVE_PUSH = "naive-push"
    DIFFIE_HELLMAN = "dh"
    BLIND_RSA = "blind-rsa"
    PAILLIER_POLYNOMIAL = "paillier-poly"

    @property
    def wire_tag(self) -> int:
        return _SCHEME_TAGS[self]

    @classmethod
    def from_wire_tag(cls, tag: int) -> "SchemeId":
        for scheme, value in _SCHEME_TAGS.items():
            if value == tag:
                return scheme
        raise ValueError(f"unknown scheme tag 0x{tag:02x}")


_SCHEME_TAGS = {
    SchemeId.NAIVE_PULL: 0x01,
    SchemeId.NAIVE_PUSH: 0x02,
    SchemeId.DIFFIE_HELLMAN: 0x03,
    SchemeId.BLIND_RSA: 0x04,
    SchemeId.PAILLIER_POLYNOMIAL: 0x05,
}


class TransportModel(str, enum.Enum):
    """Which party moves data: pull (client downloads), push (client uploads) or both."""
    PULL = "pull"
    PUSH = "push"
    HYBRID = "hybrid"

    @property
    def wire_tag(self) -> int:
        return {TransportModel.PULL: 0x01, TransportModel.PUSH: 0x02, TransportModel.HYBRID: 0x03}[self]

    @classmethod
    def from_wire_tag(cls, tag: int) -> "TransportModel":
        for model in cls:
            if model.wire_tag == tag:
                return model
        raise ValueError(f"unknown model tag 0x{tag:02x}")

    @classmethod
    def for_scheme(cls, scheme: SchemeId) -> "TransportModel":
        if scheme is SchemeId.NAIVE_PULL:
            return cls.PULL
        if scheme is SchemeId.NAIVE_PUSH:
            return cls.PUSH
        return cls.HYBRID


class Role(str, enum.Enum):
    SERVER = "server"
    CLIENT = "client"


class Direction(str, enum.Enum):
    CLIENT_TO_SERVER = "client->server"
    SERVER_TO_CLIENT = "server->client"


class PayloadKind(enum.IntEnum):
    DIGEST_LIST = 0x01
    GROUP_ELEMENT_LIST = 0x02
    BLINDED_LIST = 0x03
    SIGNED_LIST = 0x04
    CIPHERTEXT_LIST = 0x05
    RESULT_LIST = 0x06

    @property
    def carries_digests(self) -> bool:
        return self in (PayloadKind.DIGEST_LIST, PayloadKind.RESULT_LIST)


@dataclass(frozen=True)
class TranscriptMessage:
    """One protocol message; `payload` holds the encoded entries only.

    Wire form: kind (1 byte), round (1 byte), entry count (4 bytes, big-endian),
    then the payload. Digest kinds carry fixed-width entries whose width is
    len(payload) / count; integer kinds carry each entry as a 4-byte big-endian
    length followed by the big-endian magnitude.
    """
    direction: Direction
    round: int
    kind: PayloadKind
    count: int
    payload: bytes = field(repr=False)

    @classmethod
    def from_digests(
        cls, direction: Direction, round: int, kind: PayloadKind, digests: Sequence[ElementDigest]
    ) -> "TranscriptMessage":
        if not kind.carries_digests:
            raise ValueError(f"{kind.name} does not carry digests")
        widths = {len(d.bytes) for d in digests}
        if len(widths) > 1:
            raise ValueError(f"mixed digest widths {sorted(widths)}")
        return cls(direction, round, kind, len(digests), b"".join(d.bytes for d in digests))

    @classmethod
    def from_integers(
        cls, direction: Direction, round: int, kind: PayloadKind, values: Sequence[int]
    ) -> "TranscriptMessage":
        if kind.carries_digests:
            raise ValueError(f"{kind.name} does not carry integers")
        parts = []
        for value in values:
            value = int(value)
            if value < 0:
                raise ValueError("negative integers are not encodable")
            raw = value.to_bytes(max(1, (value.bit_length() + 7) // 8), "big")
            parts.append(_LENGTH.pack(len(raw)))
            parts.append(raw)
        return cls(direction, round, kind, len(values), b"".join(parts))

    def digests(self) -> List[ElementDigest]:
        """Parse a digest-carrying payload."""
        if not self.kind.carries_digests:
            raise ProtocolError(f"{self.kind.name} payload does not carry digests")
        if self.count == 0:
            if self.payload:
                raise ProtocolError("empty digest list with trailing payload bytes")
            return []
        width, remainder = divmod(len(self.payload), self.count)
        if remainder or width not in VALID_DIGEST_LENGTHS:
            raise ProtocolError(
                f"payload of {len(self.payload)} bytes does not split into {self.count} digests"
            )
        return [ElementDigest(self.payload[i:i + width]) for i in range(0, len(self.payload), width)]

    def integers(self) -> List[int]:
        """Parse a length-prefixed integer payload."""
        if self.kind.carries_digests:
            raise ProtocolError(f"{self.kind.name} payload does not carry integers")
        values = []
        offset = 0
        end = len(self.payload)
        while offset < end:
            if offset + _LENGTH.size > end:
                raise ProtocolError("truncated integer length prefix")
            (length,) = _LENGTH.unpack_from(self.payload, offset)
            offset += _LENGTH.size
            if length == 0 or offset + length > end:
                raise ProtocolError("truncated integer entry")
            values.append(int.from_bytes(self.payload[offset:offset + length], "big"))
            offset += length
        if len(values) != self.count:
            raise ProtocolError(f"declared {self.count} entries, parsed {len(values)}")
        return values

    @property
    def size_bits(self) -> int:
        return 8 * len(self.payload)

    def to_bytes(self) -> bytes:
        if not 0 <= self.round <= 0xFF:
            raise ValueError(f"round {self.round} does not fit in one byte")
        return _HEADER.pack(int(self.kind), self.round, self.count) + self.payload

    @classmethod
    def from_bytes(cls, data: bytes, direction: Direction) -> "TranscriptMessage":
        if len(data) < _HEADER.size:
            raise ProtocolError("transcript message shorter than its header")
        tag, round_, count = _HEADER.unpack_from(data)
        try:
            kind = PayloadKind(tag)
        except ValueError as e:
            raise ProtocolError(f"unknown payload kind 0x{tag:02x}") from e
        message = cls(direction, round_, kind, count, bytes(data[_HEADER.size:]))
        # Validate eagerly so malformed payloads never reach a session
        if kind.carries_digests:
            message.digests()
        else:
            message.integers()
        return message


class Transcript:
    """Ordered message exchange of one protocol execution."""

    def __init__(self, messages: Sequence[TranscriptMessage] = ()):
        self._messages: List[TranscriptMessage] = []
        for message in messages:
            self.append(message)

    def append(self, message: TranscriptMessage) -> None:
        if self._messages and message.round < self._messages[-1].round:
            raise ProtocolError(
                f"round {message.round} after round {self._messages[-1].round}"
            )
        self._messages.append(message)

    def client_to_server(self) -> List[TranscriptMessage]:
        return [m for m in self._messages if m.direction is Direction.CLIENT_TO_SERVER]

    def server_to_client(self) -> List[TranscriptMessage]:
        return [m for m in self._messages if m.direction is Direction.SERVER_TO_CLIENT]

    @property
    def total_bits(self) -> int:
        return sum(m.size_bits for m in self._messages)

    def __iter__(self) -> Iterator[TranscriptMessage]:
        return iter(self._messages)

    def __len__(self) -> int:
        return len(self._messages)

    def __getitem__(self, index: int) -> TranscriptMessage:
        return self._messages[index]


@dataclass(frozen=True)
class PsiResult:
    """Client-side elements found in the server set."""
    matched: FrozenSet[ElementDigest]

    @property
    def match_count(self) -> int:
        return len(self.matched)

    @classmethod
    def empty(cls) -> "PsiResult":
        return cls(frozenset())
