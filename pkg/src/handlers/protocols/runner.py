"""Uniform driver over every scheme plus the session factories the network service uses."""

import logging
import random
from dataclasses import dataclass
from typing import AbstractSet, Optional, Tuple

from ...models.elements import ElementDigest
from ...models.keys import DhGroup, PaillierKeyPair, PaillierPublicKey, RsaKeyPair, RsaPublicKey
from ...models.transcript import PsiResult, SchemeId, Transcript
from ...utils.errors import ConfigurationError
from .base import PsiSession, exchange
from .blind_rsa import BlindRsaClient, BlindRsaServer
from .diffie_hellman import DhClient, DhServer
from .naive import NaivePullClient, NaivePullServer, NaivePushClient, NaivePushServer
from .paillier_poly import PolynomialClient, PolynomialServer

logger = logging.getLogger(__name__)


@dataclass
class PsiConfig:
    """Key material and parameters shared by both sides of an in-memory run."""
    group: Optional[DhGroup] = None
    rsa_keys: Optional[RsaKeyPair] = None
    paillier_keys: Optional[PaillierKeyPair] = None
    beta_bits: int = 256
    rng: Optional[random.Random] = None


def _require(value, scheme: SchemeId, what: str):
    if value is None:
        raise ConfigurationError(f"scheme {scheme.value} requires {what}")
    return value


def build_server_session(
    scheme: SchemeId,
    server_set: AbstractSet[ElementDigest],
    group: Optional[DhGroup] = None,
    rsa_keys: Optional[RsaKeyPair] = None,
    paillier_public: Optional[PaillierPublicKey] = None,
    beta_bits: int = 256,
    rng: Optional[random.Random] = None,
) -> PsiSession:
    if scheme is SchemeId.NAIVE_PULL:
        return NaivePullServer(server_set, rng)
    if scheme is SchemeId.NAIVE_PUSH:
        return NaivePushServer(server_set, rng)
    if scheme is SchemeId.DIFFIE_HELLMAN:
        return DhServer(server_set, _require(group, scheme, "a DH group"), rng=rng)
    if scheme is SchemeId.BLIND_RSA:
        return BlindRsaServer(server_set, _require(rsa_keys, scheme, "an RSA key pair"), beta_bits, rng)
    if scheme is SchemeId.PAILLIER_POLYNOMIAL:
        return PolynomialServer(server_set, _require(paillier_public, scheme, "a Paillier public key"), rng)
    raise ConfigurationError(f"unsupported scheme {scheme!r}")


def build_client_session(
    scheme: SchemeId,
    client_set: AbstractSet[ElementDigest],
    group: Optional[DhGroup] = None,
    rsa_public: Optional[RsaPublicKey] = None,
    paillier_keys: Optional[PaillierKeyPair] = None,
    server_size: Optional[int] = None,
    beta_bits: int = 256,
    rng: Optional[random.Random] = None,
) -> PsiSession:
    if scheme is SchemeId.NAIVE_PULL:
        return NaivePullClient(client_set, rng)
    if scheme is SchemeId.NAIVE_PUSH:
        return NaivePushClient(client_set, rng)
    if scheme is SchemeId.DIFFIE_HELLMAN:
        return DhClient(client_set, _require(group, scheme, "a DH group"), rng=rng)
    if scheme is SchemeId.BLIND_RSA:
        return BlindRsaClient(client_set, _require(rsa_public, scheme, "an RSA public key"), beta_bits, rng)
    if scheme is SchemeId.PAILLIER_POLYNOMIAL:
        return PolynomialClient(
            client_set, _require(paillier_keys, scheme, "a Paillier key pair"), server_size, rng
        )
    raise ConfigurationError(f"unsupported scheme {scheme!r}")


def run_psi(
    scheme: SchemeId,
    server_set: AbstractSet[ElementDigest],
    client_set: AbstractSet[ElementDigest],
    psi_config: Optional[PsiConfig] = None,
) -> Tuple[Transcript, PsiResult]:
    """Run one scheme end to end in memory."""
    psi_config = psi_config or PsiConfig()
    scheme = SchemeId(scheme)
    paillier_public = psi_config.paillier_keys.public if psi_config.paillier_keys else None
    rsa_public = psi_config.rsa_keys.public if psi_config.rsa_keys else None
    server = build_server_session(
        scheme, server_set,
        group=psi_config.group,
        rsa_keys=psi_config.rsa_keys,
        paillier_public=paillier_public,
        beta_bits=psi_config.beta_bits,
        rng=psi_config.rng,
    )
    client = build_client_session(
        scheme, client_set,
        group=psi_config.group,
        rsa_public=rsa_public,
        paillier_keys=psi_config.paillier_keys,
        server_size=len(server_set),
        beta_bits=psi_config.beta_bits,
        rng=psi_config.rng,
    )
    transcript, result = exchange(server, client)
    logger.debug(f"{scheme.value}: {len(transcript)} messages, {result.match_count} matches")
    return transcript, result
