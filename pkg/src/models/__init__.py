"""Data models for the PSI toolkit."""

from .elements import TrailPoint, ElementDigest
from .keys import (
    PaillierPublicKey,
    PaillierPrivateKey,
    PaillierKeyPair,
    PaillierCiphertext,
    RsaPublicKey,
    RsaKeyPair,
    DhGroup,
    Polynomial,
)
from .transcript import (
    SchemeId,
    TransportModel,
    Role,
    Direction,
    PayloadKind,
    TranscriptMessage,
    Transcript,
    PsiResult,
)
from .schemas import (
    EncodingParams,
    TrailRecord,
    CostParams,
    CostReport,
    SessionConfig,
    BucketCount,
    RiskReport,
    StoreManifest,
)

__all__ = [
    # Set elements
    "TrailPoint", "ElementDigest",

    # Keys
    "PaillierPublicKey", "PaillierPrivateKey", "PaillierKeyPair", "PaillierCiphertext",
    "RsaPublicKey", "RsaKeyPair", "DhGroup", "Polynomial",

    # Transcripts
    "SchemeId", "TransportModel", "Role", "Direction", "PayloadKind",
    "TranscriptMessage", "Transcript", "PsiResult",

    # Pydantic schemas
    "EncodingParams", "TrailRecord", "CostParams", "CostReport", "SessionConfig",
    "BucketCount", "RiskReport", "StoreManifest",
]
