import asyncio
import json
import threading

import pytest

from src.cli import cli
from src.core.config import Settings
from src.handlers.key_files import read_key
from src.handlers.psi_server import PsiServer
from src.handlers.store import store_ingest
from src.models.keys import DhGroup, PaillierKeyPair, PaillierPublicKey, RsaKeyPair, RsaPublicKey
from src.models.schemas import EncodingParams


@pytest.fixture
def live_server(server_trails, tmp_path, rsa_keys, dh_group):
    """PSI server on an ephemeral port, driven by an event loop in a background thread."""
    store = store_ingest(server_trails, EncodingParams(), tmp_path / "live_store")
    loop = asyncio.new_event_loop()
    thread = threading.Thread(target=loop.run_forever, daemon=True)
    thread.start()
    server = PsiServer(store, Settings(listen="127.0.0.1:0"), rsa_keys, dh_group)
    host, port = asyncio.run_coroutine_threadsafe(server.start(), loop).result(timeout=30)
    yield f"{host}:{port}"
    asyncio.run_coroutine_threadsafe(server.stop(), loop).result(timeout=30)
    loop.call_soon_threadsafe(loop.stop)
    thread.join(timeout=30)
    loop.close()


def test_no_subcommand_is_a_usage_error(runner):
    result = runner.invoke(cli, [])
    assert result.exit_code == 2


def test_unknown_option_value(runner):
    result = runner.invoke(cli, ["estimate", "--preset", "mars"])
    assert result.exit_code == 2


def test_estimate_csv(runner):
    result = runner.invoke(cli, ["estimate", "--preset", "india", "--format", "csv"])
    assert result.exit_code == 0, result.output
    lines = result.stdout.splitlines()
    assert lines[0] == "scheme,server_ops,client_ops,server_s,client_s,server_bits,client_bits"
    pull = lines[1].split(",")
    assert pull[0] == "naive-pull"
    assert pull[3] == "2111"
    assert len(lines) == 6


def test_estimate_single_scheme_table(runner):
    result = runner.invoke(cli, ["estimate", "--preset", "sparse", "--scheme", "blind-rsa"])
    assert result.exit_code == 0, result.output
    lines = result.stdout.splitlines()
    assert lines[0].split()[0] == "scheme"
    assert lines[2].split()[0] == "blind-rsa"
    assert len(lines) == 3


def test_estimate_rejects_non_positive_sizes(runner):
    assert runner.invoke(cli, ["estimate", "--m", "0"]).exit_code == 2


@pytest.mark.parametrize("kind, bits, expected, public_type", [
    ("rsa", "32", RsaKeyPair, RsaPublicKey),
    ("paillier", "32", PaillierKeyPair, PaillierPublicKey),
])
def test_keygen_writes_private_and_public(runner, tmp_path, kind, bits, expected, public_type):
    out, pub = tmp_path / f"{kind}.key", tmp_path / f"{kind}.pub"
    result = runner.invoke(cli, ["keygen", kind, "--bits", bits, "--out", str(out),
                                 "--public-out", str(pub), "--seed", "7"])
    assert result.exit_code == 0, result.output
    assert result.stdout.strip() == str(out)
    key = read_key(out, expected)
    assert read_key(pub, public_type) == key.public


def test_keygen_dh_is_deterministic_with_seed(runner, tmp_path):
    paths = [tmp_path / "a.group", tmp_path / "b.group"]
    for path in paths:
        result = runner.invoke(cli, ["keygen", "dh", "--bits", "32", "--out", str(path), "--seed", "11"])
        assert result.exit_code == 0, result.output
    group = read_key(paths[0], DhGroup)
    assert group.p == 2 * group.q + 1
    assert paths[0].read_bytes() == paths[1].read_bytes()


def test_keygen_dh_has_no_public_half(runner, tmp_path):
    result = runner.invoke(cli, ["keygen", "dh", "--toy", "--out", str(tmp_path / "dh.group"),
                                 "--public-out", str(tmp_path / "dh.pub")])
    assert result.exit_code == 2
    assert not (tmp_path / "dh.group").exists()


def test_ingest_prints_manifest(runner, server_trails, tmp_path):
    result = runner.invoke(cli, ["ingest", str(server_trails), "--store", str(tmp_path / "store")])
    assert result.exit_code == 0, result.output
    manifest = json.loads(result.stdout)
    assert manifest["towns"] == {"default": 1, "delhi": 3, "mumbai": 1}
    assert (tmp_path / "store" / "manifest.json").is_file()


def test_ingest_bad_file_is_a_one_line_error(runner, tmp_path):
    bad = tmp_path / "bad.ndjson"
    bad.write_text("{\"lat\": 1}\n", encoding="utf-8")
    result = runner.invoke(cli, ["ingest", str(bad), "--store", str(tmp_path / "store")])
    assert result.exit_code == 1
    errors = [line for line in result.stderr.splitlines() if line.startswith("error: ")]
    assert len(errors) == 1
    assert "bad.ndjson:1" in errors[0]


@pytest.mark.parametrize("command", ["ingest", "query"])
def test_undecodable_trail_file_is_a_one_line_error(runner, live_server, tmp_path, command):
    bad = tmp_path / "binary.ndjson"
    bad.write_bytes(b"\xff\xfe")
    if command == "ingest":
        args = ["ingest", str(bad), "--store", str(tmp_path / "store")]
    else:
        args = ["query", str(bad), "--server", live_server, "--scheme", "naive-pull", "--town", "delhi"]
    result = runner.invoke(cli, args)
    assert result.exit_code == 1
    errors = [line for line in result.stderr.splitlines() if line.startswith("error: ")]
    assert len(errors) == 1
    assert "binary.ndjson:1" in errors[0]
    assert "UTF-8" in errors[0]


def test_query_against_live_server(runner, live_server, client_trail):
    result = runner.invoke(cli, ["query", str(client_trail), "--server", live_server,
                                 "--scheme", "dh", "--town", "delhi", "--seed", "5"])
    assert result.exit_code == 0, result.output
    report = json.loads(result.stdout)
    assert report["match_count"] == 2
    assert report["score"] == 2
    assert report["matched_buckets"] == [{"bucket": 441192, "count": 1}, {"bucket": 441193, "count": 1}]


def test_query_unknown_town(runner, live_server, client_trail):
    result = runner.invoke(cli, ["query", str(client_trail), "--server", live_server,
                                 "--scheme", "naive-pull", "--town", "atlantis"])
    assert result.exit_code == 1
    assert "0x04" in result.stderr


def test_query_rejects_even_window(runner, client_trail):
    result = runner.invoke(cli, ["query", str(client_trail), "--window", "2"])
    assert result.exit_code == 1
    assert "window_buckets" in result.stderr


def test_query_unreachable_server(runner, client_trail):
    result = runner.invoke(cli, ["query", str(client_trail), "--server", "127.0.0.1:1", "--scheme", "naive-pull"])
    assert result.exit_code == 1
    assert "error: cannot connect" in result.stderr


def test_bench_prints_json(runner):
    result = runner.invoke(cli, ["bench", "--bits", "64", "--m", "8", "--n", "4", "--repeats", "1", "--seed", "3"])
    assert result.exit_code == 0, result.output
    report = json.loads(result.stdout)
    names = {t["name"] for t in report["timings"]}
    assert {"mod_exp", "paillier_encrypt", "poly_eval_horner", "psi:dh", "psi:paillier-poly"} <= names
