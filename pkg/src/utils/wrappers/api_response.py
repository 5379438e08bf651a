"""FastAPI response envelope for the status API."""

from typing import Any, Dict, Optional
from enum import Enum

from fastapi.responses import JSONResponse


class ApiResponse:
    """Standardized API response wrapper."""

    def __init__(
        self,
        status_code: int,
        data: Optional[Dict[str, Any]] = None,
        message: str = "Success",
    ):
        self.success = status_code < 400
        self.status_code = status_code
        self.data = data if data is not None else {}
        self.message = message

    def format_values(self, obj: Any) -> Any:
        """Recursively convert enums and big integers into JSON-safe values."""
        if isinstance(obj, dict):
            return {key: self.format_values(value) for key, value in obj.items()}
        elif isinstance(obj, (list, tuple)):
            return [self.format_values(item) for item in obj]
        elif isinstance(obj, Enum):
            return obj.value
        elif isinstance(obj, int) and not isinstance(obj, bool) and abs(obj) >= 2 ** 53:
            # JavaScript clients lose precision past 2^53
            return str(obj)
        else:
            return obj

    def to_dict(self) -> Dict[str, Any]:
        """Convert response to dictionary format."""
        return {
            "success": self.success,
            "status_code": self.status_code,
            "data": self.format_values(self.data),
            "message": self.message
        }

    def to_response(self) -> JSONResponse:
        """Convert to FastAPI JSONResponse."""
        return JSONResponse(content=self.to_dict(), status_code=self.status_code)
