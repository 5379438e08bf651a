"""FastAPI routers package."""

from . import estimate, store

__all__ = ["estimate", "store"]
