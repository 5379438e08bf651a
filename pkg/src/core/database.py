"""SQLAlchemy engine and session handling for the trail store."""

import logging
from contextlib import contextmanager
from pathlib import Path
from typing import Iterator, Union

from sqlalchemy import MetaData, create_engine, event, text
from sqlalchemy.engine import Engine
from sqlalchemy.orm import Session, declarative_base, sessionmaker

from . import config

logger = logging.getLogger(__name__)

metadata = MetaData()
Base = declarative_base(metadata=metadata)


def _dsn_for(store_path: Union[str, Path]) -> str:
    """Construct a SQLAlchemy DSN for the store directory."""
    return f"sqlite:///{Path(store_path) / config.STORE_DB_FILENAME}"


def create_store_engine(store_path: Union[str, Path]) -> Engine:
    """Create the engine backing one store directory and make sure its tables exist."""
    Path(store_path).mkdir(parents=True, exist_ok=True)
    engine = create_engine(_dsn_for(store_path), pool_pre_ping=True)

    @event.listens_for(engine, "connect")
    def _set_sqlite_pragma(dbapi_connection, connection_record):
        cursor = dbapi_connection.cursor()
        cursor.execute("PRAGMA journal_mode=WAL")
        cursor.close()

    # Registers the mapped tables on Base.metadata
    from ..models import trail  # noqa: F401

    try:
        Base.metadata.create_all(engine)
        with engine.connect() as conn:
            conn.execute(text("SELECT 1"))
    except Exception:
        logger.exception("[DB] Failed to initialise trail store engine")
        raise
    return engine


@contextmanager
def session_scope(engine: Engine) -> Iterator[Session]:
    """Context manager for sessions with commit on success and rollback on error."""
    session = sessionmaker(bind=engine, autoflush=False, expire_on_commit=False)()
    try:
        yield session
        session.commit()
    except Exception:
        session.rollback()
        logger.error("Trail store session error", exc_info=True)
        raise
    finally:
        session.close()
