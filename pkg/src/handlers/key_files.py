"""Text serialization of key material: a `PSI-KEY <type>` header then `field=decimal` lines."""

import logging
from pathlib import Path
from typing import Dict, Union

from ..models.keys import (
    DhGroup,
    PaillierKeyPair,
    PaillierPrivateKey,
    PaillierPublicKey,
    RsaKeyPair,
    RsaPublicKey,
)
from ..utils.errors import ConfigurationError

logger = logging.getLogger(__name__)

HEADER_PREFIX = "PSI-KEY"

KeyMaterial = Union[RsaKeyPair, RsaPublicKey, PaillierKeyPair, PaillierPublicKey, DhGroup]

# key type → ordered field names
KEY_FIELDS: Dict[str, tuple] = {
    "rsa-private": ("N", "e", "d", "p", "q"),
    "rsa-public": ("N", "e"),
    "paillier-private": ("u", "g", "lambda", "mu", "p", "q"),
    "paillier-public": ("u", "g"),
    "dh-group": ("p", "q", "g"),
}


def _fields_of(key: KeyMaterial):
    if isinstance(key, RsaKeyPair):
        return "rsa-private", (key.modulus_N, key.e, key.d, key.p, key.q)
    if isinstance(key, RsaPublicKey):
        return "rsa-public", (key.modulus_N, key.e)
    if isinstance(key, PaillierKeyPair):
        return "paillier-private", (
            key.public.u, key.public.g, key.private.lam, key.private.mu, key.private.p, key.private.q
        )
    if isinstance(key, PaillierPublicKey):
        return "paillier-public", (key.u, key.g)
    if isinstance(key, DhGroup):
        return "dh-group", (key.p, key.q, key.g)
    raise TypeError(f"cannot serialize {type(key).__name__}")


def format_key(key: KeyMaterial) -> str:
    key_type, values = _fields_of(key)
    lines = [f"{HEADER_PREFIX} {key_type}"]
    lines.extend(f"{name}={int(value)}" for name, value in zip(KEY_FIELDS[key_type], values))
    return "\n".join(lines) + "\n"


def parse_key(text: str) -> KeyMaterial:
    """Inverse of format_key."""
    lines = [line.strip() for line in text.splitlines() if line.strip()]
    if not lines or not lines[0].startswith(HEADER_PREFIX + " "):
        raise ConfigurationError(f"key file must start with '{HEADER_PREFIX} <type>'")
    key_type = lines[0][len(HEADER_PREFIX) + 1:].strip()
    if key_type not in KEY_FIELDS:
        raise ConfigurationError(f"unknown key type {key_type!r}")

    values: Dict[str, int] = {}
    for number, line in enumerate(lines[1:], start=2):
        name, sep, raw = line.partition("=")
        if not sep:
            raise ConfigurationError(f"line {number}: expected field=value")
        try:
            values[name.strip()] = int(raw.strip())
        except ValueError as e:
            raise ConfigurationError(f"line {number}: {name.strip()} is not a decimal integer") from e

    missing = [name for name in KEY_FIELDS[key_type] if name not in values]
    if missing:
        raise ConfigurationError(f"{key_type} key is missing fields: {', '.join(missing)}")

    if key_type == "rsa-private":
        return RsaKeyPair(values["N"], values["e"], values["d"], values["p"], values["q"])
    if key_type == "rsa-public":
        return RsaPublicKey(values["N"], values["e"])
    if key_type == "paillier-private":
        return PaillierKeyPair(
            public=PaillierPublicKey(values["u"], values["g"]),
            private=PaillierPrivateKey(values["lambda"], values["mu"], values["p"], values["q"]),
        )
    if key_type == "paillier-public":
        return PaillierPublicKey(values["u"], values["g"])
    return DhGroup(values["p"], values["q"], values["g"])


def write_key(path: Union[str, Path], key: KeyMaterial) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(format_key(key), encoding="ascii")
    logger.info(f"Wrote {_fields_of(key)[0]} key to {path}")
    return path


def read_key(path: Union[str, Path], expected=None) -> KeyMaterial:
    """Read a key file, optionally checking it holds an instance of `expected`."""
    path = Path(path)
    try:
        text = path.read_text(encoding="ascii")
    except (OSError, UnicodeDecodeError) as e:
        raise ConfigurationError(f"cannot read key file {path}: {e}") from e
    key = parse_key(text)
    if expected is not None and not isinstance(key, expected):
        raise ConfigurationError(
            f"key file {path} holds {type(key).__name__}, expected {expected.__name__}"
        )
    return key
