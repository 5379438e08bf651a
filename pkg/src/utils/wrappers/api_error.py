"""Error envelope for the status API."""

from enum import Enum
from typing import Any, Dict, Optional

from fastapi.responses import JSONResponse

from .. import http_messages, status_codes


class StatusError(str, Enum):
    """Machine-readable reasons the status API refuses a request."""
    STORE_NOT_LOADED = "store-not-loaded"
    UNKNOWN_PRESET = "unknown-preset"
    UNKNOWN_SCHEME = "unknown-scheme"

    @property
    def status_code(self) -> int:
        if self is StatusError.STORE_NOT_LOADED:
            return status_codes.HTTP_SERVICE_UNAVAILABLE
        return status_codes.HTTP_BAD_REQUEST

    @property
    def message(self) -> str:
        return _MESSAGES[self]


_MESSAGES = {
    StatusError.STORE_NOT_LOADED: http_messages.HTTP_STORE_NOT_LOADED_MESSAGE,
    StatusError.UNKNOWN_PRESET: http_messages.HTTP_ESTIMATE_UNKNOWN_PRESET_MESSAGE,
    StatusError.UNKNOWN_SCHEME: http_messages.HTTP_ESTIMATE_UNKNOWN_SCHEME_MESSAGE,
}


class ApiError:
    """A refused status request: HTTP status, reason code and the offending value."""

    def __init__(self, reason: StatusError, value: Optional[str] = None):
        self.reason = reason
        self.value = value

    @property
    def status_code(self) -> int:
        return self.reason.status_code

    def to_dict(self) -> Dict[str, Any]:
        body: Dict[str, Any] = {
            "success": False,
            "status_code": self.status_code,
            "error": self.reason.value,
            "message": self.reason.message,
        }
        if self.value is not None:
            body["value"] = self.value
        return body

    def to_response(self) -> JSONResponse:
        return JSONResponse(content=self.to_dict(), status_code=self.status_code)
