"""Handlers package: encoding, crypto primitives, PSI schemes, sketches, cost model and the network service."""

from .encoding import canonicalize, digest, encode_trail, expand_window, time_bucket
from .paillier import paillier_decrypt, paillier_encrypt, paillier_keygen
from .rsa import rsa_blind, rsa_keygen, rsa_sign, rsa_unblind
from .polynomial import poly_eval_horner, poly_from_roots
from .cost_model import render_scenario, scheme_cost
from .store import TrailStore, store_ingest
from .risk import risk_score

__all__ = [
    # Encoding
    "canonicalize", "digest", "encode_trail", "expand_window", "time_bucket",

    # Crypto primitives
    "paillier_decrypt", "paillier_encrypt", "paillier_keygen",
    "rsa_blind", "rsa_keygen", "rsa_sign", "rsa_unblind",
    "poly_eval_horner", "poly_from_roots",

    # Cost model
    "render_scenario", "scheme_cost",

    # Store
    "TrailStore", "store_ingest", "risk_score",
]
