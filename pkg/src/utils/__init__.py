"""Utilities module for the PSI toolkit."""

from .status_codes import *
from .http_messages import *
from .errors import (
    PsiError,
    ConfigurationError,
    DomainError,
    ParameterError,
    EncodingError,
    KeyGenerationError,
    DecryptionError,
    ProtocolError,
    StoreError,
    PsiConnectionError,
    HandshakeRejectedError,
    LimitExceededError,
)

__all__ = [
    # Status codes
    "HTTP_OK", "HTTP_BAD_REQUEST", "HTTP_NOT_FOUND", "HTTP_SERVICE_UNAVAILABLE",
    "EXIT_OK", "EXIT_ERROR", "EXIT_USAGE",
    "ERROR_NEGOTIATION", "ERROR_LIMIT_EXCEEDED", "ERROR_PROTOCOL",
    "ERROR_UNKNOWN_TOWN", "ERROR_INTERNAL",

    # Messages
    "HTTP_OK_MESSAGE", "HTTP_BAD_REQUEST_MESSAGE", "HTTP_NOT_FOUND_MESSAGE",
    "HTTP_SERVICE_UNAVAILABLE_MESSAGE", "HTTP_HEALTH_MESSAGE",
    "HTTP_MANIFEST_SUCCESS_MESSAGE", "HTTP_STORE_NOT_LOADED_MESSAGE",
    "HTTP_ESTIMATE_SUCCESS_MESSAGE", "HTTP_ESTIMATE_UNKNOWN_PRESET_MESSAGE",
    "HTTP_ESTIMATE_UNKNOWN_SCHEME_MESSAGE", "LIMIT_EXCEEDED_MESSAGE",
    "UNSUPPORTED_VERSION_MESSAGE", "UNSUPPORTED_SCHEME_MESSAGE",
    "MODEL_MISMATCH_MESSAGE", "UNKNOWN_TOWN_MESSAGE", "MISSING_KEY_MATERIAL_MESSAGE",

    # Errors
    "PsiError", "ConfigurationError", "DomainError", "ParameterError",
    "EncodingError", "KeyGenerationError", "DecryptionError", "ProtocolError",
    "StoreError", "PsiConnectionError", "HandshakeRejectedError", "LimitExceededError",
]
