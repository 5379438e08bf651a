import pytest

from src.handlers.encoding import encode_trail
from src.handlers.risk import risk_score
from src.handlers.store import TrailStore, read_trail_points, store_ingest
from src.models.schemas import EncodingParams
from src.utils.errors import StoreError

from .conftest import write_ndjson


@pytest.fixture
def store(server_trails, tmp_path):
    return store_ingest(server_trails, EncodingParams(), tmp_path / "store")


def test_ingest_partitions_by_town(store):
    manifest = store.manifest
    assert manifest.towns == {"default": 1, "delhi": 3, "mumbai": 1}
    assert manifest.occurrences == {"default": 1, "delhi": 4, "mumbai": 1}
    assert store.towns == ["default", "delhi", "mumbai"]


def test_load_matches_ingest(store, tmp_path):
    loaded = TrailStore.load(tmp_path / "store")
    assert loaded.manifest == store.manifest
    assert loaded.partitions == store.partitions
    assert loaded.buckets == store.buckets


def test_reingest_is_idempotent(server_trails, tmp_path):
    store_ingest(server_trails, EncodingParams(), tmp_path / "store")
    first = (tmp_path / "store" / "manifest.json").read_bytes()
    store_ingest(server_trails, EncodingParams(), tmp_path / "store")
    assert (tmp_path / "store" / "manifest.json").read_bytes() == first
    assert TrailStore.load(tmp_path / "store").manifest.towns["delhi"] == 3


def test_ingest_replaces_previous_contents(server_trails, tmp_path):
    store_ingest(server_trails, EncodingParams(), tmp_path / "store")
    smaller = write_ndjson(tmp_path / "one.ndjson", [
        {"lat": "0028613900", "lon": "0077209000", "t": 1588291200, "town": "pune"},
    ])
    store_ingest(smaller, EncodingParams(), tmp_path / "store")
    assert TrailStore.load(tmp_path / "store").towns == ["pune"]


def test_invalid_json_line_names_the_line(tmp_path):
    path = tmp_path / "bad.ndjson"
    path.write_text(
        '{"lat": "0028613900", "lon": "0077209000", "t": 1588291200}\n\nnot json\n',
        encoding="utf-8",
    )
    with pytest.raises(StoreError, match=r"bad\.ndjson:3"):
        store_ingest(path, EncodingParams(), tmp_path / "store")


def test_invalid_coordinate_names_the_line(tmp_path):
    path = write_ndjson(tmp_path / "bad.ndjson", [
        {"lat": "0028613900", "lon": "0077209000", "t": 1588291200},
        {"lat": "28.6", "lon": "0077209000", "t": 1588291200},
    ])
    with pytest.raises(StoreError, match=r"bad\.ndjson:2"):
        store_ingest(path, EncodingParams(), tmp_path / "store")


def test_undecodable_line_names_the_line(tmp_path):
    path = tmp_path / "bad.ndjson"
    path.write_bytes(b'{"lat": "0028613900", "lon": "0077209000", "t": 1588291200}\n\xff\xfe\n')
    with pytest.raises(StoreError, match=r"bad\.ndjson:2: not valid UTF-8"):
        read_trail_points(path)


def test_missing_trail_file(tmp_path):
    with pytest.raises(StoreError):
        store_ingest(tmp_path / "absent.ndjson", EncodingParams(), tmp_path / "store")


def test_missing_store(tmp_path):
    with pytest.raises(StoreError):
        TrailStore.load(tmp_path / "nowhere")


def test_unknown_town(store):
    with pytest.raises(StoreError):
        store.partition("atlantis")


def test_cooccurrence_count_never_underestimates(store):
    delhi = store.partition("delhi")
    assert store.cooccurrence_count("delhi", delhi) >= 4
    assert store.cooccurrence_count("delhi", []) == 0


def test_risk_score_groups_matches_by_bucket(store, client_trail):
    bucket_map = encode_trail(read_trail_points(client_trail), EncodingParams())
    matched = frozenset(bucket_map) & store.partition("delhi")
    report = risk_score(matched, bucket_map)
    assert report.match_count == 2
    assert report.score == 2
    assert [(b.bucket, b.count) for b in report.matched_buckets] == [(441192, 1), (441193, 1)]


def test_risk_score_empty():
    report = risk_score(frozenset(), {})
    assert report.match_count == 0
    assert report.matched_buckets == []
