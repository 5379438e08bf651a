"""Length-prefixed frames and the session handshake carried over TCP.

Frame: 4-byte big-endian length of (type byte + payload), 1-byte frame type, payload.
Handshake payload: version, scheme tag, model tag, town as a 2-byte length plus
UTF-8 bytes, then public parameters as 4-byte-length-prefixed big-endian integers.
"""

import asyncio
import enum
import logging
import struct
from dataclasses import dataclass
from typing import Tuple

from . import config
from ..models.transcript import SchemeId, TransportModel
from ..utils.errors import PsiConnectionError, ProtocolError

logger = logging.getLogger(__name__)

_FRAME_LENGTH = struct.Struct(">I")
_HANDSHAKE_HEADER = struct.Struct(">BBBH")
_PARAM_LENGTH = struct.Struct(">I")
_ERROR_HEADER = struct.Struct(">B")


class FrameType(enum.IntEnum):
    HANDSHAKE = 0x00
    ERROR = 0x01
    TRANSCRIPT = 0x02
    RESULT = 0x03


def encode_frame(frame_type: FrameType, payload: bytes = b"") -> bytes:
    return _FRAME_LENGTH.pack(len(payload) + 1) + bytes([frame_type]) + payload


async def read_frame(
    reader: asyncio.StreamReader, max_frame_bytes: int = config.MAX_FRAME_BYTES
) -> Tuple[FrameType, bytes]:
    try:
        header = await reader.readexactly(_FRAME_LENGTH.size)
        (length,) = _FRAME_LENGTH.unpack(header)
        if length < 1:
            raise ProtocolError("empty frame")
        if length > max_frame_bytes:
            raise ProtocolError(f"frame of {length} bytes exceeds the {max_frame_bytes}-byte limit")
        body = await reader.readexactly(length)
    except asyncio.IncompleteReadError as e:
        raise PsiConnectionError("connection closed mid-frame") from e
    except (ConnectionError, OSError) as e:
        raise PsiConnectionError(f"connection lost: {e}") from e
    try:
        frame_type = FrameType(body[0])
    except ValueError as e:
        raise ProtocolError(f"unknown frame type 0x{body[0]:02x}") from e
    return frame_type, body[1:]


async def write_frame(writer: asyncio.StreamWriter, frame_type: FrameType, payload: bytes = b"") -> None:
    try:
        writer.write(encode_frame(frame_type, payload))
        await writer.drain()
    except (ConnectionError, OSError) as e:
        raise PsiConnectionError(f"connection lost: {e}") from e


def encode_error(code: int, message: str) -> bytes:
    return _ERROR_HEADER.pack(code) + message.encode("utf-8")


def decode_error(payload: bytes) -> Tuple[int, str]:
    if not payload:
        raise ProtocolError("error frame without a code")
    return payload[0], payload[1:].decode("utf-8", errors="replace")


@dataclass(frozen=True)
class Handshake:
    """Session negotiation; tags stay raw so unsupported values can be answered on the wire."""
    version: int
    scheme_tag: int
    model_tag: int
    town: str = config.DEFAULT_TOWN
    params: Tuple[int, ...] = ()

    @classmethod
    def for_scheme(cls, scheme: SchemeId, town: str, params: Tuple[int, ...] = ()) -> "Handshake":
        return cls(
            version=config.PROTOCOL_VERSION,
            scheme_tag=scheme.wire_tag,
            model_tag=TransportModel.for_scheme(scheme).wire_tag,
            town=town,
            params=tuple(params),
        )

    @property
    def scheme(self) -> SchemeId:
        return SchemeId.from_wire_tag(self.scheme_tag)

    @property
    def model(self) -> TransportModel:
        return TransportModel.from_wire_tag(self.model_tag)

    def reply(self, params: Tuple[int, ...]) -> "Handshake":
        return Handshake(self.version, self.scheme_tag, self.model_tag, self.town, tuple(params))

    def to_bytes(self) -> bytes:
        town = self.town.encode("utf-8")
        if len(town) > 0xFFFF:
            raise ValueError("town name too long")
        parts = [_HANDSHAKE_HEADER.pack(self.version, self.scheme_tag, self.model_tag, len(town)), town]
        for value in self.params:
            raw = int(value).to_bytes(max(1, (int(value).bit_length() + 7) // 8), "big")
            parts.append(_PARAM_LENGTH.pack(len(raw)))
            parts.append(raw)
        return b"".join(parts)

    @classmethod
    def from_bytes(cls, data: bytes) -> "Handshake":
        if len(data) < _HANDSHAKE_HEADER.size:
            raise ProtocolError("handshake shorter than its header")
        version, scheme_tag, model_tag, town_length = _HANDSHAKE_HEADER.unpack_from(data)
        offset = _HANDSHAKE_HEADER.size
        if offset + town_length > len(data):
            raise ProtocolError("truncated town name")
        try:
            town = data[offset:offset + town_length].decode("utf-8")
        except UnicodeDecodeError as e:
            raise ProtocolError("town name is not valid UTF-8") from e
        offset += town_length

        params = []
        while offset < len(data):
            if offset + _PARAM_LENGTH.size > len(data):
                raise ProtocolError("truncated parameter length")
            (length,) = _PARAM_LENGTH.unpack_from(data, offset)
            offset += _PARAM_LENGTH.size
            if length == 0 or offset + length > len(data):
                raise ProtocolError("truncated parameter")
            params.append(int.from_bytes(data[offset:offset + length], "big"))
            offset += length
        return cls(version, scheme_tag, model_tag, town, tuple(params))
