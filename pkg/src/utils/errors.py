"""Exception hierarchy shared by every PSI module."""


class PsiError(Exception):
    """Base exception for all domain and protocol errors."""
    pass


class ConfigurationError(PsiError):
    """Raised when parameters or settings are unusable."""
    pass


class DomainError(PsiError):
    """Raised when an argument lies outside the domain of an operation."""
    pass


class ParameterError(PsiError):
    """Raised when a caller-supplied parameter violates a precondition."""
    pass


class EncodingError(PsiError):
    """Raised when a trail point cannot be canonicalized."""
    pass


class KeyGenerationError(PsiError):
    """Raised when key material cannot be produced within the retry budget."""
    pass


class DecryptionError(PsiError):
    """Raised when a ciphertext is malformed."""
    pass


class ProtocolError(PsiError):
    """Raised when a peer message violates the protocol."""
    pass


class StoreError(PsiError):
    """Raised when the trail store cannot be read or written."""
    pass


class PsiConnectionError(PsiError):
    """Raised when the server cannot be reached or the connection drops."""
    pass


class HandshakeRejectedError(PsiError):
    """Raised when the server answers the handshake with an error frame."""

    def __init__(self, code: int, message: str):
        super().__init__(f"handshake rejected (code 0x{code:02x}): {message}")
        self.code = code
        self.message = message


class LimitExceededError(ProtocolError):
    """Raised when a client submits more elements than the server accepts."""
    pass
