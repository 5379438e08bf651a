"""Shared fixtures: seeded randomness, key material and trail files."""

import json
import random

import pytest
from click.testing import CliRunner

from src.handlers.arithmetic import TOY_GROUP, generate_dh_group
from src.handlers.encoding import hash_bytes
from src.handlers.paillier import paillier_keygen, paillier_keypair_from_primes
from src.handlers.rsa import rsa_keygen, rsa_keypair_from_primes
from src.models.elements import TrailPoint

SEED = 20200501


def random_digests(count, rng, beta_bits=256):
    """`count` distinct digests drawn from seeded randomness."""
    digests = set()
    while len(digests) < count:
        digests.add(hash_bytes(rng.getrandbits(64).to_bytes(8, "big"), beta_bits))
    return digests


def overlapping_sets(rng, server_size, client_size, overlap):
    server = random_digests(server_size, rng)
    shared = set(rng.sample(sorted(server), overlap))
    client = shared | random_digests(client_size - overlap, rng)
    return frozenset(server), frozenset(client)


def write_ndjson(path, records):
    path.write_text("".join(json.dumps(r) + "\n" for r in records), encoding="utf-8")
    return path


@pytest.fixture
def rng():
    return random.Random(SEED)


@pytest.fixture
def toy_rsa():
    return rsa_keypair_from_primes(61, 53, 17)


@pytest.fixture
def toy_paillier():
    return paillier_keypair_from_primes(5, 7)


@pytest.fixture
def toy_group():
    return TOY_GROUP


@pytest.fixture(scope="session")
def rsa_keys():
    return rsa_keygen(128, rng=random.Random(SEED + 1))


@pytest.fixture(scope="session")
def paillier_keys():
    return paillier_keygen(128, rng=random.Random(SEED + 2))


@pytest.fixture(scope="session")
def dh_group():
    return generate_dh_group(64, rng=random.Random(SEED + 3))


@pytest.fixture(scope="session")
def rsa_keys_1024():
    return rsa_keygen(512, rng=random.Random(SEED + 4))


@pytest.fixture(scope="session")
def paillier_keys_512():
    return paillier_keygen(256, rng=random.Random(SEED + 5))


@pytest.fixture
def delhi_point():
    return TrailPoint("0028613900", "0077209000", 1588291200)


@pytest.fixture
def server_trails(tmp_path):
    """Two towns; the delhi partition shares two buckets with `client_trail`."""
    return write_ndjson(tmp_path / "cases.ndjson", [
        {"lat": "0028613900", "lon": "0077209000", "t": 1588291200, "town": "delhi"},
        {"lat": "0028613900", "lon": "0077209000", "t": 1588294800, "town": "delhi"},
        {"lat": "0028613900", "lon": "0077209000", "t": 1588294900, "town": "delhi"},
        {"lat": "0028700000", "lon": "0077100000", "t": 1588291200, "town": "delhi"},
        {"lat": "0019076000", "lon": "0072877700", "t": 1588291200, "town": "mumbai"},
        {"lat": "0019076000", "lon": "0072877700", "t": 1588298400},
    ])


@pytest.fixture
def client_trail(tmp_path):
    return write_ndjson(tmp_path / "mine.ndjson", [
        {"lat": "0028613900", "lon": "0077209000", "t": 1588291300},
        {"lat": "0012971600", "lon": "0077594600", "t": 1588291300},
    ])


@pytest.fixture
def runner():
    try:
        return CliRunner(mix_stderr=False)
    except TypeError:
        return CliRunner()
