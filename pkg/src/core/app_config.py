"""FastAPI application configuration and setup for the read-only status API."""

import logging
from contextlib import asynccontextmanager
from pathlib import Path
from typing import Optional, Union

from fastapi import FastAPI

from . import config
from ..utils import http_messages, status_codes
from ..utils.errors import StoreError
from ..utils.wrappers.api_response import ApiResponse

logger = logging.getLogger(__name__)


def create_app(store=None, store_path: Optional[Union[str, Path]] = None) -> FastAPI:
    """Create the status application over an already-loaded store or a store directory."""
    from ..handlers.store import TrailStore
    from ..routers import estimate, store as store_router

    @asynccontextmanager
    async def lifespan(app: FastAPI):
        # Startup
        logger.info(f"Starting PSI status API in {config.DEPLOYMENT} mode")
        app.state.store = store
        if app.state.store is None and store_path is not None:
            try:
                app.state.store = TrailStore.load(store_path)
            except StoreError:
                logger.exception(f"Failed to load trail store from {store_path}")
        yield
        # Shutdown
        logger.info("Shutting down PSI status API")

    app = FastAPI(
        title="PSI Trail Service",
        description="Status and cost-estimate API of the private set intersection server",
        version="1.0.0",
        lifespan=lifespan,
        docs_url="/api/docs" if config.DEPLOYMENT != "PRODUCTION" else None,
        redoc_url="/api/redoc" if config.DEPLOYMENT != "PRODUCTION" else None,
    )

    @app.get("/api/health")
    async def health_check():
        """Health check endpoint."""
        logger.debug("Health check endpoint accessed")
        return ApiResponse(
            status_code=status_codes.HTTP_OK,
            data={"health": True, "store_loaded": app.state.store is not None},
            message=http_messages.HTTP_HEALTH_MESSAGE,
        ).to_dict()

    app.include_router(store_router.router, prefix="/api")
    app.include_router(estimate.router, prefix="/api")
    return app
