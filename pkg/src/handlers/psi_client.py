"""Client role over TCP: encode the trail, negotiate, run the session, score the result."""

import asyncio
import logging
import random
from typing import Iterable, List, Optional, Tuple, Union

from ..core import config
from ..core.config import Settings, parse_address
from ..core.framing import FrameType, Handshake, decode_error, read_frame, write_frame
from ..models.elements import TrailPoint
from ..models.keys import DhGroup, PaillierKeyPair, RsaPublicKey
from ..models.schemas import EncodingParams, RiskReport, SessionConfig
from ..models.transcript import Direction, SchemeId, TranscriptMessage
from ..utils import status_codes
from ..utils.errors import (
    HandshakeRejectedError,
    LimitExceededError,
    PsiConnectionError,
    ProtocolError,
)
from .encoding import encode_trail
from .paillier import paillier_keygen
from .protocols.base import PsiSession
from .protocols.runner import build_client_session
from .risk import risk_score

logger = logging.getLogger(__name__)

Address = Union[str, Tuple[str, int]]


def _raise_for_error(payload: bytes, during_handshake: bool) -> None:
    code, message = decode_error(payload)
    if code == status_codes.ERROR_LIMIT_EXCEEDED:
        raise LimitExceededError(f"server rejected the query: {message}")
    if during_handshake:
        raise HandshakeRejectedError(code, message)
    raise ProtocolError(f"server error 0x{code:02x}: {message}")


def _client_session(
    session_config: SessionConfig,
    reply: Handshake,
    client_set,
    paillier_keys: Optional[PaillierKeyPair],
    beta_bits: int,
    rng: Optional[random.Random],
) -> PsiSession:
    scheme = session_config.scheme
    params = reply.params
    if scheme is SchemeId.DIFFIE_HELLMAN:
        if len(params) != 2:
            raise ProtocolError("DH handshake reply must carry p and g")
        p, g = params
        return build_client_session(scheme, client_set, group=DhGroup(p, (p - 1) // 2, g), rng=rng)
    if scheme is SchemeId.BLIND_RSA:
        if len(params) != 2:
            raise ProtocolError("Blind-RSA handshake reply must carry N and e")
        return build_client_session(
            scheme, client_set, rsa_public=RsaPublicKey(*params), beta_bits=beta_bits, rng=rng
        )
    if scheme is SchemeId.PAILLIER_POLYNOMIAL:
        if len(params) != 1:
            raise ProtocolError("polynomial handshake reply must carry the server set size")
        return build_client_session(
            scheme, client_set, paillier_keys=paillier_keys, server_size=params[0], rng=rng
        )
    return build_client_session(scheme, client_set, beta_bits=beta_bits, rng=rng)


async def _send_all(writer: asyncio.StreamWriter, messages: List[TranscriptMessage]) -> None:
    for message in messages:
        await write_frame(writer, FrameType.TRANSCRIPT, message.to_bytes())


async def query_async(
    address: Address,
    points: Iterable[TrailPoint],
    session_config: SessionConfig,
    encoding: Optional[EncodingParams] = None,
    paillier_keys: Optional[PaillierKeyPair] = None,
    max_frame_bytes: int = config.MAX_FRAME_BYTES,
    timeout_s: float = config.CONNECT_TIMEOUT_S,
    rng: Optional[random.Random] = None,
) -> RiskReport:
    encoding = encoding or EncodingParams()
    host, port = parse_address(address) if isinstance(address, str) else address
    bucket_map = encode_trail(points, encoding)
    client_set = frozenset(bucket_map)
    scheme = session_config.scheme

    params: Tuple[int, ...] = ()
    if scheme is SchemeId.PAILLIER_POLYNOMIAL:
        if paillier_keys is None:
            paillier_keys = await asyncio.to_thread(paillier_keygen, session_config.paillier_prime_bits, rng)
        params = (paillier_keys.public.u,)

    try:
        reader, writer = await asyncio.wait_for(asyncio.open_connection(host, port), timeout_s)
    except (OSError, asyncio.TimeoutError) as e:
        raise PsiConnectionError(f"cannot connect to {host}:{port}: {e}") from e

    sender: Optional[asyncio.Task] = None
    try:
        await write_frame(writer, FrameType.HANDSHAKE, Handshake.for_scheme(scheme, session_config.town, params).to_bytes())
        frame_type, payload = await read_frame(reader, max_frame_bytes)
        if frame_type is FrameType.ERROR:
            _raise_for_error(payload, during_handshake=True)
        if frame_type is not FrameType.HANDSHAKE:
            raise ProtocolError(f"expected a handshake reply, got {frame_type.name}")
        reply = Handshake.from_bytes(payload)

        session = _client_session(session_config, reply, client_set, paillier_keys, encoding.beta_bits, rng)
        outgoing = await asyncio.to_thread(session.start)
        # Frames are read while the sender task drains
        sender = asyncio.create_task(_send_all(writer, outgoing))
        while not session.finished:
            frame_type, payload = await read_frame(reader, max_frame_bytes)
            if frame_type is FrameType.ERROR:
                _raise_for_error(payload, during_handshake=False)
            if frame_type not in (FrameType.TRANSCRIPT, FrameType.RESULT):
                raise ProtocolError(f"unexpected {frame_type.name} frame from server")
            message = TranscriptMessage.from_bytes(payload, Direction.SERVER_TO_CLIENT)
            replies = await asyncio.to_thread(session.receive, message)
            if replies:
                await sender
                sender = asyncio.create_task(_send_all(writer, replies))
        await sender
        result = session.result()
    finally:
        if sender is not None:
            if not sender.done():
                sender.cancel()
            elif not sender.cancelled():
                sender.exception()
        writer.close()
        try:
            await writer.wait_closed()
        except (ConnectionError, OSError):
            pass

    report = risk_score(result.matched, bucket_map)
    logger.info(f"{scheme.value} query against {host}:{port}: {report.match_count} matches")
    return report


def query(
    address: Address,
    points: Iterable[TrailPoint],
    session_config: SessionConfig,
    encoding: Optional[EncodingParams] = None,
    **kwargs,
) -> RiskReport:
    return asyncio.run(query_async(address, points, session_config, encoding, **kwargs))


def session_config_from_settings(settings: Settings, scheme: Optional[SchemeId] = None, town: Optional[str] = None) -> SessionConfig:
    return SessionConfig(
        scheme=scheme or settings.scheme,
        town=town or settings.town,
        rsa_key_path=settings.rsa_key_path,
        dh_group_path=settings.dh_group_path,
        paillier_prime_bits=settings.paillier_prime_bits,
        max_client_elements=settings.max_client_elements,
    )
