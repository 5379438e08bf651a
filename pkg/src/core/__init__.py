"""Core module: configuration and persistence plumbing."""

from . import config
from .config import Settings, load_settings, parse_address
from .database import Base, create_store_engine, session_scope

__all__ = [
    # Config
    "config", "Settings", "load_settings", "parse_address",

    # Database
    "Base", "create_store_engine", "session_scope",
]
