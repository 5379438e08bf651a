"""PSI scheme sessions and their in-memory driver."""

from .base import PsiSession, exchange
from .naive import (
    NaivePullClient,
    NaivePullServer,
    NaivePushClient,
    NaivePushServer,
    naive_pull_client_intersect,
    naive_pull_server_publish,
    naive_push_exchange,
)
from .diffie_hellman import DhClient, DhServer, dh_session
from .blind_rsa import BlindRsaClient, BlindRsaServer, brsa_session
from .paillier_poly import PolynomialClient, PolynomialServer, digest_to_plaintext, fnp_session
from .runner import PsiConfig, build_client_session, build_server_session, run_psi

__all__ = [
    "PsiSession", "exchange",
    "NaivePullClient", "NaivePullServer", "NaivePushClient", "NaivePushServer",
    "naive_pull_client_intersect", "naive_pull_server_publish", "naive_push_exchange",
    "DhClient", "DhServer", "dh_session",
    "BlindRsaClient", "BlindRsaServer", "brsa_session",
    "PolynomialClient", "PolynomialServer", "digest_to_plaintext", "fnp_session",
    "PsiConfig", "build_client_session", "build_server_session", "run_psi",
]
