import pytest

from src.core import config
from src.core.config import Settings, load_settings, parse_address
from src.models.transcript import SchemeId
from src.utils.errors import ConfigurationError


def test_defaults():
    settings = load_settings(environ={})
    assert settings == Settings()
    assert settings.listen_address == ("127.0.0.1", 7400)
    assert settings.scheme is SchemeId.DIFFIE_HELLMAN
    assert settings.window_buckets == 3


def test_config_file_then_environment(tmp_path):
    path = tmp_path / "psi.env"
    path.write_text("PSI_SCHEME=blind-rsa\nPSI_TOWN=delhi\nPSI_HTTP_PORT=8000\nUNRELATED=1\n", encoding="utf-8")
    settings = load_settings(path, environ={"PSI_TOWN": "mumbai"})
    assert settings.scheme is SchemeId.BLIND_RSA
    assert settings.town == "mumbai"
    assert settings.http_port == 8000


def test_config_path_from_environment(tmp_path):
    path = tmp_path / "psi.env"
    path.write_text("PSI_MAX_CLIENT_ELEMENTS=16\n", encoding="utf-8")
    assert load_settings(environ={"PSI_CONFIG": str(path)}).max_client_elements == 16


@pytest.mark.parametrize("environ", [
    {"PSI_SCHEME": "rot13"},
    {"PSI_MAX_CLIENT_ELEMENTS": "0"},
    {"PSI_LISTEN": "localhost"},
    {"PSI_LISTEN": "localhost:http"},
])
def test_invalid_values(environ):
    with pytest.raises(ConfigurationError):
        load_settings(environ=environ)


def test_missing_config_file(tmp_path):
    with pytest.raises(ConfigurationError):
        load_settings(tmp_path / "absent.env", environ={})


def test_parse_address_ipv6():
    assert parse_address("[::1]:7400") == ("::1", 7400)


@pytest.mark.parametrize("key, raw", [
    ("PSI_MAX_CLIENT_ELEMENTS", "abc"),
    ("PSI_MAX_CLIENT_ELEMENTS", "-5"),
    ("PSI_WINDOW_BUCKETS", "three"),
    ("PSI_SCHEME", "rot13"),
])
def test_invalid_value_names_the_key(key, raw):
    with pytest.raises(ConfigurationError, match=key):
        load_settings(environ={key: raw})


def test_malformed_module_level_values_name_the_variable(monkeypatch):
    monkeypatch.setenv("PSI_MAX_FRAME_BYTES", "lots")
    monkeypatch.setenv("PSI_CONNECT_TIMEOUT_S", "soon")
    with pytest.raises(ConfigurationError, match="PSI_MAX_FRAME_BYTES"):
        config._get_env_int("PSI_MAX_FRAME_BYTES", 1)
    with pytest.raises(ConfigurationError, match="PSI_CONNECT_TIMEOUT_S"):
        config._get_env_float("PSI_CONNECT_TIMEOUT_S", 1.0)
    monkeypatch.delenv("PSI_MAX_FRAME_BYTES")
    assert config._get_env_int("PSI_MAX_FRAME_BYTES", 7) == 7
