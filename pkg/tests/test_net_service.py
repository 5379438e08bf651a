import asyncio
import random

import pytest

from src.core.config import Settings
from src.core.framing import FrameType, Handshake, read_frame, write_frame, decode_error
from src.handlers.encoding import encode_trail
from src.handlers.psi_client import query_async
from src.handlers.protocols.naive import NaivePullServer
from src.handlers.protocols.runner import build_client_session
from src.handlers.psi_server import PsiServer
from src.handlers.store import TrailStore, read_trail_points, store_ingest
from src.models.elements import TrailPoint
from src.models.schemas import EncodingParams, SessionConfig
from src.models.transcript import Direction, SchemeId, TranscriptMessage
from src.utils import status_codes
from src.utils.errors import HandshakeRejectedError, LimitExceededError, PsiConnectionError

from .conftest import SEED, random_digests, write_ndjson


@pytest.fixture
def store(server_trails, tmp_path):
    return store_ingest(server_trails, EncodingParams(), tmp_path / "store")


def run_with_server(store, rsa_keys, dh_group, client, **settings):
    """Start a server on an ephemeral port, run `client(address)` against it, stop it."""
    async def main():
        server = PsiServer(store, Settings(listen="127.0.0.1:0", **settings), rsa_keys, dh_group)
        address = await server.start()
        try:
            return await client(address)
        finally:
            await server.stop()

    return asyncio.run(main())


@pytest.mark.parametrize("scheme", list(SchemeId))
def test_every_scheme_finds_the_delhi_overlap(scheme, store, client_trail, rsa_keys, dh_group, paillier_keys):
    points = read_trail_points(client_trail)

    async def client(address):
        return await query_async(
            address, points, SessionConfig(scheme=scheme, town="delhi"),
            paillier_keys=paillier_keys, rng=random.Random(SEED),
        )

    report = run_with_server(store, rsa_keys, dh_group, client)
    assert report.match_count == 2
    assert [(b.bucket, b.count) for b in report.matched_buckets] == [(441192, 1), (441193, 1)]


def test_town_without_overlap(store, client_trail, rsa_keys, dh_group):
    points = read_trail_points(client_trail)

    async def client(address):
        return await query_async(address, points, SessionConfig(scheme=SchemeId.DIFFIE_HELLMAN, town="mumbai"))

    assert run_with_server(store, rsa_keys, dh_group, client).match_count == 0


def test_unknown_town_is_rejected(store, client_trail, rsa_keys, dh_group):
    points = read_trail_points(client_trail)

    async def client(address):
        return await query_async(address, points, SessionConfig(scheme=SchemeId.NAIVE_PULL, town="atlantis"))

    with pytest.raises(HandshakeRejectedError) as info:
        run_with_server(store, rsa_keys, dh_group, client)
    assert info.value.code == status_codes.ERROR_UNKNOWN_TOWN


def test_missing_key_material_is_a_negotiation_error(store, client_trail, dh_group):
    points = read_trail_points(client_trail)

    async def client(address):
        return await query_async(address, points, SessionConfig(scheme=SchemeId.BLIND_RSA, town="delhi"))

    with pytest.raises(HandshakeRejectedError) as info:
        run_with_server(store, None, dh_group, client)
    assert info.value.code == status_codes.ERROR_NEGOTIATION


def test_client_element_limit(store, client_trail, rsa_keys, dh_group):
    points = read_trail_points(client_trail)

    async def client(address):
        return await query_async(address, points, SessionConfig(scheme=SchemeId.DIFFIE_HELLMAN, town="delhi"))

    with pytest.raises(LimitExceededError):
        run_with_server(store, rsa_keys, dh_group, client, max_client_elements=2)


def test_unsupported_version_is_rejected(store, rsa_keys, dh_group):
    async def client(address):
        reader, writer = await asyncio.open_connection(*address)
        handshake = Handshake.for_scheme(SchemeId.NAIVE_PULL, "delhi")
        bad = Handshake(handshake.version + 1, handshake.scheme_tag, handshake.model_tag, "delhi")
        await write_frame(writer, FrameType.HANDSHAKE, bad.to_bytes())
        frame = await read_frame(reader)
        writer.close()
        return frame

    frame_type, payload = run_with_server(store, rsa_keys, dh_group, client)
    assert frame_type is FrameType.ERROR
    assert decode_error(payload)[0] == status_codes.ERROR_NEGOTIATION


def test_concurrent_sessions(store, client_trail, rsa_keys, dh_group):
    points = read_trail_points(client_trail)

    async def client(address):
        return await asyncio.gather(
            query_async(address, points, SessionConfig(scheme=SchemeId.BLIND_RSA, town="delhi"), rng=random.Random(1)),
            query_async(address, points, SessionConfig(scheme=SchemeId.DIFFIE_HELLMAN, town="delhi"), rng=random.Random(2)),
            query_async(address, points, SessionConfig(scheme=SchemeId.NAIVE_PUSH, town="mumbai")),
        )

    blind, dh, push = run_with_server(store, rsa_keys, dh_group, client)
    assert blind.match_count == dh.match_count == 2
    assert push.match_count == 0


def test_connection_refused():
    async def client():
        server = await asyncio.start_server(lambda r, w: None, "127.0.0.1", 0)
        address = server.sockets[0].getsockname()[:2]
        server.close()
        await server.wait_closed()
        return await query_async(address, [], SessionConfig(scheme=SchemeId.NAIVE_PULL), timeout_s=2)

    with pytest.raises(PsiConnectionError):
        asyncio.run(client())


@pytest.mark.slow
@pytest.mark.parametrize("scheme", list(SchemeId))
def test_large_server_set_loopback(scheme, tmp_path, rsa_keys, dh_group, paillier_keys):
    params = EncodingParams(window_buckets=1)
    points = [TrailPoint("0028613900", "0077209000", 1588291200 + 3600 * i) for i in range(32)]
    client_digests = set(encode_trail(points, params))
    rng = random.Random(SEED)
    shared = set(rng.sample(sorted(client_digests), 8))
    server = (random_digests(2 ** 16 - len(shared), rng) - client_digests) | shared
    store = TrailStore(
        path=tmp_path,
        encoding=params,
        partitions={"default": frozenset(server)},
        occurrences={"default": {d: 1 for d in server}},
    )

    async def client(address):
        return await query_async(
            address, points, SessionConfig(scheme=scheme), encoding=params,
            paillier_keys=paillier_keys, rng=random.Random(SEED),
        )

    report = run_with_server(store, rsa_keys, dh_group, client)
    assert report.match_count == 8


async def raw_session(address, handshake, messages=()):
    """Send a handshake and transcript frames, then collect every server frame until it hangs up."""
    reader, writer = await asyncio.open_connection(*address)
    try:
        await write_frame(writer, FrameType.HANDSHAKE, handshake.to_bytes())
        for message in messages:
            await write_frame(writer, FrameType.TRANSCRIPT, message.to_bytes())
        frames = []
        while True:
            try:
                frames.append(await read_frame(reader))
            except PsiConnectionError:
                return frames
    finally:
        writer.close()


def test_unknown_scheme_tag_is_a_negotiation_error(store, rsa_keys, dh_group):
    handshake = Handshake.for_scheme(SchemeId.DIFFIE_HELLMAN, "delhi")
    unknown = Handshake(handshake.version, 0xFF, handshake.model_tag, "delhi")

    frames = run_with_server(store, rsa_keys, dh_group, lambda address: raw_session(address, unknown))
    assert [frame_type for frame_type, _ in frames] == [FrameType.ERROR]
    assert decode_error(frames[0][1])[0] == status_codes.ERROR_NEGOTIATION


def test_pull_server_publishes_without_client_frames(store, rsa_keys, dh_group):
    handshake = Handshake.for_scheme(SchemeId.NAIVE_PULL, "delhi")

    frames = run_with_server(store, rsa_keys, dh_group, lambda address: raw_session(address, handshake))
    assert [frame_type for frame_type, _ in frames] == [FrameType.HANDSHAKE, FrameType.TRANSCRIPT]
    published = TranscriptMessage.from_bytes(frames[1][1], Direction.SERVER_TO_CLIENT)
    assert set(published.digests()) == store.partition("delhi")


def test_push_server_answers_with_a_single_result_frame(store, client_trail, rsa_keys, dh_group):
    client_set = frozenset(encode_trail(read_trail_points(client_trail), EncodingParams()))
    upload = build_client_session(SchemeId.NAIVE_PUSH, client_set).start()
    handshake = Handshake.for_scheme(SchemeId.NAIVE_PUSH, "delhi")

    frames = run_with_server(store, rsa_keys, dh_group, lambda address: raw_session(address, handshake, upload))
    assert [frame_type for frame_type, _ in frames] == [FrameType.HANDSHAKE, FrameType.RESULT]
    result = TranscriptMessage.from_bytes(frames[1][1], Direction.SERVER_TO_CLIENT)
    assert set(result.digests()) == client_set & store.partition("delhi")


def test_pull_client_sends_nothing_after_the_handshake(client_trail):
    points = read_trail_points(client_trail)
    client_set = frozenset(encode_trail(points, EncodingParams()))
    published = NaivePullServer(client_set).start()
    trailing = []

    async def fake_server(reader, writer):
        _, payload = await read_frame(reader)
        await write_frame(writer, FrameType.HANDSHAKE, Handshake.from_bytes(payload).reply(()).to_bytes())
        for message in published:
            await write_frame(writer, FrameType.TRANSCRIPT, message.to_bytes())
        trailing.append(await reader.read())
        writer.close()

    async def main():
        server = await asyncio.start_server(fake_server, "127.0.0.1", 0)
        address = server.sockets[0].getsockname()[:2]
        async with server:
            report = await query_async(address, points, SessionConfig(scheme=SchemeId.NAIVE_PULL, town="delhi"))
            while not trailing:
                await asyncio.sleep(0.01)
        return report

    report = asyncio.run(asyncio.wait_for(main(), 10))
    assert trailing == [b""]
    assert report.match_count == len(client_set)


@pytest.mark.parametrize("size, rejected", [(2 ** 10, False), (2 ** 10 + 1, True)])
def test_default_client_element_limit(size, rejected, tmp_path, dh_group):
    params = EncodingParams(window_buckets=1)
    points = [TrailPoint("0028613900", "0077209000", 1588291200 + 3600 * i) for i in range(size)]
    client_digests = encode_trail(points, params)
    assert len(client_digests) == size
    server = frozenset(list(client_digests)[:3])
    store = TrailStore(
        path=tmp_path,
        encoding=params,
        partitions={"default": server},
        occurrences={"default": {d: 1 for d in server}},
    )
    assert Settings().max_client_elements == 2 ** 10

    async def client(address):
        return await query_async(address, points, SessionConfig(scheme=SchemeId.DIFFIE_HELLMAN), encoding=params)

    if rejected:
        with pytest.raises(LimitExceededError):
            run_with_server(store, None, dh_group, client)
    else:
        assert run_with_server(store, None, dh_group, client).match_count == 3


PLACES = [
    ("0028613900", "0077209000"),
    ("0028700000", "0077100000"),
    ("0019076000", "0072877700"),
    ("0012971600", "0077594600"),
]


def random_records(rng, count, towns=None):
    records = []
    for i in range(count):
        lat, lon = rng.choice(PLACES)
        record = {"lat": lat, "lon": lon, "t": 1588291200 + 900 * rng.randrange(48)}
        if towns:
            record["town"] = towns[i % len(towns)]
        records.append(record)
    return records


@pytest.mark.parametrize("trial", range(3))
@pytest.mark.parametrize("scheme", list(SchemeId))
def test_random_trail_files_match_plaintext_intersection(
    scheme, trial, tmp_path, rsa_keys, dh_group, paillier_keys
):
    rng = random.Random(SEED + trial)
    server_file = write_ndjson(tmp_path / "cases.ndjson", random_records(rng, 40, ["delhi", "mumbai"]))
    client_file = write_ndjson(tmp_path / "mine.ndjson", random_records(rng, 6))
    params = EncodingParams()
    store = store_ingest(server_file, params, tmp_path / "store")
    points = read_trail_points(client_file)
    town = rng.choice(["delhi", "mumbai"])
    expected = frozenset(encode_trail(points, params)) & store.partition(town)

    async def client(address):
        return await query_async(
            address, points, SessionConfig(scheme=scheme, town=town),
            paillier_keys=paillier_keys, rng=random.Random(trial),
        )

    report = run_with_server(store, rsa_keys, dh_group, client)
    assert report.match_count == len(expected)
    assert report.score == len(expected)
