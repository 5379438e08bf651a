"""Core configuration helpers for environment- and file-driven settings."""

from __future__ import annotations

import os
from pathlib import Path
from typing import Dict, Mapping, Optional, Tuple, Union

from dotenv import dotenv_values, load_dotenv
from pydantic import BaseModel, Field, ValidationError

from ..models.transcript import SchemeId
from ..utils.errors import ConfigurationError

if os.getenv('DEPLOYMENT', default="DEVELOPMENT") != "PRODUCTION":
    load_dotenv(override=False)


def _get_env_int(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None:
        return default
    try:
        return int(raw)
    except (TypeError, ValueError) as e:
        raise ConfigurationError(f"{name} must be an integer, got {raw!r}") from e


def _get_env_float(name: str, default: float) -> float:
    raw = os.getenv(name)
    if raw is None:
        return default
    try:
        return float(raw)
    except (TypeError, ValueError) as e:
        raise ConfigurationError(f"{name} must be a number, got {raw!r}") from e


# App Configuration
DEPLOYMENT: str = os.getenv("DEPLOYMENT", "DEVELOPMENT")
LOG_LEVEL: str = os.getenv("PSI_LOG_LEVEL", "INFO")

# Network
PROTOCOL_VERSION: int = 1
DEFAULT_LISTEN: str = "127.0.0.1:7400"
MAX_FRAME_BYTES: int = _get_env_int("PSI_MAX_FRAME_BYTES", 64 * 1024 * 1024)
CONNECT_TIMEOUT_S: float = _get_env_float("PSI_CONNECT_TIMEOUT_S", 10.0)

# Store
STORE_DB_FILENAME: str = "trails.db"
STORE_MANIFEST_FILENAME: str = "manifest.json"
DEFAULT_TOWN: str = "default"

# Crypto presets
DEFAULT_RSA_PRIME_BITS: int = _get_env_int("PSI_RSA_PRIME_BITS", 1024)
DEFAULT_PAILLIER_PRIME_BITS: int = _get_env_int("PSI_PAILLIER_PRIME_BITS", 512)
DEFAULT_DH_GROUP_BITS: int = _get_env_int("PSI_DH_GROUP_BITS", 1024)
RSA_PUBLIC_EXPONENT: int = 65537
PRIME_RETRIES: int = 128
COPRIME_RETRIES: int = 128
# Bits kept from a digest when it becomes a Paillier plaintext: modulus bits - margin
PAILLIER_PLAINTEXT_MARGIN_BITS: int = 64

# Sketches
CUCKOO_MAX_KICKS: int = 500
CUCKOO_STASH_SIZE: int = 8


class Settings(BaseModel):
    """Resolved runtime configuration."""
    listen: str = DEFAULT_LISTEN
    store_path: str = "./psi_store"
    scheme: SchemeId = SchemeId.DIFFIE_HELLMAN
    town: str = DEFAULT_TOWN
    max_client_elements: int = Field(2 ** 10, gt=0)
    time_bucket_s: int = Field(3600, gt=0)
    window_buckets: int = Field(3, ge=1)
    beta_bits: int = 256
    rsa_key_path: Optional[str] = None
    dh_group_path: Optional[str] = None
    paillier_prime_bits: int = Field(DEFAULT_PAILLIER_PRIME_BITS, ge=16)
    http_port: int = Field(0, ge=0)
    max_frame_bytes: int = Field(MAX_FRAME_BYTES, gt=0)
    log_level: str = LOG_LEVEL

    @property
    def listen_address(self) -> Tuple[str, int]:
        return parse_address(self.listen)


# Config-file / environment key → Settings field
SETTINGS_KEYS: Dict[str, str] = {
    "PSI_LISTEN": "listen",
    "PSI_STORE_PATH": "store_path",
    "PSI_SCHEME": "scheme",
    "PSI_TOWN": "town",
    "PSI_MAX_CLIENT_ELEMENTS": "max_client_elements",
    "PSI_TIME_BUCKET_S": "time_bucket_s",
    "PSI_WINDOW_BUCKETS": "window_buckets",
    "PSI_BETA_BITS": "beta_bits",
    "PSI_RSA_KEY": "rsa_key_path",
    "PSI_DH_GROUP": "dh_group_path",
    "PSI_PAILLIER_PRIME_BITS": "paillier_prime_bits",
    "PSI_HTTP_PORT": "http_port",
    "PSI_MAX_FRAME_BYTES": "max_frame_bytes",
    "PSI_LOG_LEVEL": "log_level",
}


def parse_address(address: str) -> Tuple[str, int]:
    """Split "host:port" into its parts."""
    host, sep, port = address.rpartition(":")
    if not sep or not host:
        raise ConfigurationError(f"listen address {address!r} is not host:port")
    try:
        return host.strip("[]"), int(port)
    except ValueError as e:
        raise ConfigurationError(f"listen address {address!r} has a non-numeric port") from e


def load_settings(
    config_path: Optional[Union[str, Path]] = None,
    environ: Optional[Mapping[str, str]] = None,
) -> Settings:
    """Resolve settings: defaults < config file < environment.

    The config file uses dotenv key=value lines with the PSI_* keys of
    SETTINGS_KEYS; unknown keys are ignored.
    """
    environ = os.environ if environ is None else environ
    config_path = config_path or environ.get("PSI_CONFIG")

    values: Dict[str, str] = {}
    if config_path:
        path = Path(config_path)
        if not path.is_file():
            raise ConfigurationError(f"config file {path} does not exist")
        for key, value in dotenv_values(path).items():
            if key in SETTINGS_KEYS and value is not None:
                values[SETTINGS_KEYS[key]] = value

    for key, field_name in SETTINGS_KEYS.items():
        if key in environ:
            values[field_name] = environ[key]

    try:
        settings = Settings(**values)
    except ValidationError as e:
        error = e.errors()[0]
        field_name = error["loc"][0] if error["loc"] else None
        key = next((k for k, f in SETTINGS_KEYS.items() if f == field_name), field_name)
        raise ConfigurationError(f"invalid configuration: {key}: {error['msg']}") from e
    # Fail early on an unusable listen address
    settings.listen_address
    return settings
