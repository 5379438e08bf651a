"""TCP endpoint running the server role of every scheme, one session per connection."""

import asyncio
import logging
import signal
from typing import Dict, List, Optional, Tuple

from ..core import config
from ..core.config import Settings
from ..core.framing import FrameType, Handshake, decode_error, encode_error, read_frame, write_frame
from ..models.elements import ElementDigest
from ..models.keys import DhGroup, PaillierPublicKey, RsaKeyPair
from ..models.transcript import (
    Direction,
    PayloadKind,
    SchemeId,
    TransportModel,
    TranscriptMessage,
)
from ..utils import http_messages, status_codes
from ..utils.errors import LimitExceededError, PsiConnectionError, PsiError, ProtocolError
from .key_files import read_key
from .protocols.base import PsiSession
from .protocols.blind_rsa import BlindRsaServer
from .protocols.runner import build_server_session
from .store import TrailStore

logger = logging.getLogger(__name__)


class HandshakeError(PsiError):
    """Raised while validating a handshake; carries the wire error code."""

    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code
        self.message = message


class PsiServer:
    """Serves one TrailStore; key material is loaded once and shared read-only by all sessions."""

    def __init__(
        self,
        store: TrailStore,
        settings: Settings,
        rsa_keys: Optional[RsaKeyPair] = None,
        dh_group: Optional[DhGroup] = None,
    ):
        self.store = store
        self.settings = settings
        self.rsa_keys = rsa_keys
        self.dh_group = dh_group
        self._server: Optional[asyncio.AbstractServer] = None
        self._status_server = None
        self._status_task: Optional[asyncio.Task] = None
        self._connections: set = set()
        # town → signed tags, computed once per key
        self._rsa_tags: Dict[str, List[ElementDigest]] = {}
        self._rsa_tags_lock = asyncio.Lock()

    @classmethod
    def from_settings(cls, settings: Settings) -> "PsiServer":
        store = TrailStore.load(settings.store_path)
        rsa_keys = read_key(settings.rsa_key_path, RsaKeyPair) if settings.rsa_key_path else None
        dh_group = read_key(settings.dh_group_path, DhGroup) if settings.dh_group_path else None
        return cls(store, settings, rsa_keys, dh_group)

    @property
    def address(self) -> Tuple[str, int]:
        if self._server is None or not self._server.sockets:
            raise PsiConnectionError("server is not listening")
        host, port = self._server.sockets[0].getsockname()[:2]
        return host, port

    async def start(self) -> Tuple[str, int]:
        host, port = self.settings.listen_address
        try:
            self._server = await asyncio.start_server(self._handle_connection, host, port)
        except OSError as e:
            raise PsiConnectionError(f"cannot listen on {host}:{port}: {e}") from e
        if self.settings.http_port:
            await self._start_status_api()
        logger.info(f"PSI server listening on {self.address[0]}:{self.address[1]} "
                    f"(towns: {', '.join(self.store.towns) or 'none'})")
        return self.address

    async def _start_status_api(self) -> None:
        import uvicorn

        from ..core.app_config import create_app

        app = create_app(store=self.store)
        uvicorn_config = uvicorn.Config(
            app,
            host=self.settings.listen_address[0],
            port=self.settings.http_port,
            log_level=self.settings.log_level.lower(),
        )
        self._status_server = uvicorn.Server(uvicorn_config)
        # The PSI listener owns signal handling
        self._status_server.install_signal_handlers = lambda: None
        self._status_task = asyncio.create_task(self._status_server.serve())
        logger.info(f"Status API on port {self.settings.http_port}")

    async def stop(self) -> None:
        if self._server is not None:
            self._server.close()
            await self._server.wait_closed()
        for task in list(self._connections):
            task.cancel()
        if self._connections:
            await asyncio.gather(*self._connections, return_exceptions=True)
        if self._status_server is not None:
            self._status_server.should_exit = True
            await self._status_task
        logger.info("PSI server stopped")

    async def serve_until_signalled(self) -> None:
        """Run until SIGINT or SIGTERM, then shut down gracefully."""
        await self.start()
        stop = asyncio.Event()
        loop = asyncio.get_running_loop()
        for sig in (signal.SIGINT, signal.SIGTERM):
            try:
                loop.add_signal_handler(sig, stop.set)
            except NotImplementedError:
                pass
        await stop.wait()
        logger.info("Shutdown signal received")
        await self.stop()

    async def _handle_connection(self, reader: asyncio.StreamReader, writer: asyncio.StreamWriter) -> None:
        task = asyncio.current_task()
        self._connections.add(task)
        peer = writer.get_extra_info("peername")
        try:
            await self._run_connection(reader, writer, peer)
        finally:
            self._connections.discard(task)
            writer.close()
            try:
                await writer.wait_closed()
            except (ConnectionError, OSError):
                pass

    async def _send_error(self, writer: asyncio.StreamWriter, code: int, message: str) -> None:
        try:
            await write_frame(writer, FrameType.ERROR, encode_error(code, message))
        except PsiConnectionError:
            pass

    async def _run_connection(self, reader, writer, peer) -> None:
        max_frame = self.settings.max_frame_bytes
        try:
            frame_type, payload = await read_frame(reader, max_frame)
            if frame_type is not FrameType.HANDSHAKE:
                raise ProtocolError(f"expected a handshake frame, got {frame_type.name}")
            handshake = Handshake.from_bytes(payload)
            session, reply_params = await self._negotiate(handshake)
        except HandshakeError as e:
            logger.info(f"Rejected handshake from {peer}: {e.message}")
            await self._send_error(writer, e.code, e.message)
            return
        except ProtocolError as e:
            logger.info(f"Protocol error from {peer} during handshake: {e}")
            await self._send_error(writer, status_codes.ERROR_PROTOCOL, str(e))
            return
        except PsiConnectionError as e:
            logger.info(f"Connection from {peer} dropped during handshake: {e}")
            return

        scheme = handshake.scheme
        logger.info(f"Session open: {scheme.value} for town {handshake.town!r} from {peer}")
        try:
            await write_frame(writer, FrameType.HANDSHAKE, handshake.reply(reply_params).to_bytes())
            await self._drive(session, reader, writer, handshake.town)
            logger.info(f"Session closed: {scheme.value} with {peer}")
        except LimitExceededError as e:
            logger.info(f"Client {peer} exceeded the element limit: {e}")
            await self._send_error(writer, status_codes.ERROR_LIMIT_EXCEEDED, http_messages.LIMIT_EXCEEDED_MESSAGE)
        except ProtocolError as e:
            logger.info(f"Protocol error in {scheme.value} session with {peer}: {e}")
            await self._send_error(writer, status_codes.ERROR_PROTOCOL, str(e))
        except PsiConnectionError as e:
            logger.info(f"Connection with {peer} lost: {e}")
        except asyncio.CancelledError:
            raise
        except Exception as e:
            logger.exception(f"Internal error in {scheme.value} session with {peer}")
            await self._send_error(writer, status_codes.ERROR_INTERNAL, f"internal error: {type(e).__name__}")

    async def _negotiate(self, handshake: Handshake) -> Tuple[PsiSession, Tuple[int, ...]]:
        if handshake.version != config.PROTOCOL_VERSION:
            raise HandshakeError(status_codes.ERROR_NEGOTIATION, http_messages.UNSUPPORTED_VERSION_MESSAGE)
        try:
            scheme = handshake.scheme
            model = handshake.model
        except ValueError:
            raise HandshakeError(status_codes.ERROR_NEGOTIATION, http_messages.UNSUPPORTED_SCHEME_MESSAGE) from None
        if model is not TransportModel.for_scheme(scheme):
            raise HandshakeError(status_codes.ERROR_NEGOTIATION, http_messages.MODEL_MISMATCH_MESSAGE)
        if handshake.town not in self.store.partitions:
            raise HandshakeError(status_codes.ERROR_UNKNOWN_TOWN, http_messages.UNKNOWN_TOWN_MESSAGE)

        server_set = self.store.partition(handshake.town)
        beta_bits = self.store.encoding.beta_bits

        if scheme is SchemeId.DIFFIE_HELLMAN:
            if self.dh_group is None:
                raise HandshakeError(status_codes.ERROR_NEGOTIATION, http_messages.MISSING_KEY_MATERIAL_MESSAGE)
            session = build_server_session(scheme, server_set, group=self.dh_group)
            return session, (self.dh_group.p, self.dh_group.g)

        if scheme is SchemeId.BLIND_RSA:
            if self.rsa_keys is None:
                raise HandshakeError(status_codes.ERROR_NEGOTIATION, http_messages.MISSING_KEY_MATERIAL_MESSAGE)
            tags = await self._signed_tags(handshake.town, beta_bits)
            session = BlindRsaServer(server_set, self.rsa_keys, beta_bits, tags=tags)
            return session, (self.rsa_keys.modulus_N, self.rsa_keys.e)

        if scheme is SchemeId.PAILLIER_POLYNOMIAL:
            if len(handshake.params) != 1 or handshake.params[0] < 2:
                raise ProtocolError("polynomial handshake must carry the Paillier modulus")
            u = handshake.params[0]
            session = build_server_session(scheme, server_set, paillier_public=PaillierPublicKey(u, u + 1))
            return session, (len(server_set),)

        return build_server_session(scheme, server_set, beta_bits=beta_bits), ()

    async def _signed_tags(self, town: str, beta_bits: int) -> List[ElementDigest]:
        async with self._rsa_tags_lock:
            if town not in self._rsa_tags:
                signer = BlindRsaServer(self.store.partition(town), self.rsa_keys, beta_bits)
                self._rsa_tags[town] = await asyncio.to_thread(signer.published_tags)
                logger.info(f"Signed {len(self._rsa_tags[town])} digests for town {town!r}")
            return self._rsa_tags[town]

    async def _send_messages(self, writer: asyncio.StreamWriter, messages: List[TranscriptMessage]) -> None:
        for message in messages:
            frame_type = FrameType.RESULT if message.kind is PayloadKind.RESULT_LIST else FrameType.TRANSCRIPT
            await write_frame(writer, frame_type, message.to_bytes())

    async def _drive(self, session: PsiSession, reader, writer, town: str) -> None:
        limit = self.settings.max_client_elements
        await self._send_messages(writer, await asyncio.to_thread(session.start))
        while not session.finished:
            frame_type, payload = await read_frame(reader, self.settings.max_frame_bytes)
            if frame_type is FrameType.ERROR:
                code, text = decode_error(payload)
                raise ProtocolError(f"client aborted with code 0x{code:02x}: {text}")
            if frame_type is not FrameType.TRANSCRIPT:
                raise ProtocolError(f"unexpected {frame_type.name} frame from client")
            message = TranscriptMessage.from_bytes(payload, Direction.CLIENT_TO_SERVER)
            count = session.client_element_count(message)
            if count > limit:
                raise LimitExceededError(f"{count} client elements, limit {limit}")
            replies = await asyncio.to_thread(session.receive, message)
            await self._send_messages(writer, replies)

        if session.scheme is SchemeId.NAIVE_PUSH:
            matched = session.result().matched
            estimate = self.store.cooccurrence_count(town, matched)
            logger.info(f"Push session matched {len(matched)} digests, co-occurrence estimate {estimate}")


def serve(settings: Settings) -> None:
    """Blocking entry point: load the store and keys, then serve until signalled."""
    server = PsiServer.from_settings(settings)
    asyncio.run(server.serve_until_signalled())
