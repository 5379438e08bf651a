"""FastAPI dependencies for the status API."""

from typing import Optional

from fastapi import Request

from .handlers.store import TrailStore


def get_store(request: Request) -> Optional[TrailStore]:
    """The trail store loaded by the application lifespan, if any."""
    return getattr(request.app.state, "store", None)
