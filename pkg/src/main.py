"""Status API entry point for running under uvicorn directly."""

import logging

from .core import config
from .core.app_config import create_app
from .core.config import load_settings

# Setup logging
logging.basicConfig(
    level=config.LOG_LEVEL,
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
)
logger = logging.getLogger(__name__)

settings = load_settings()
app = create_app(store_path=settings.store_path)

if __name__ == "__main__":
    import uvicorn

    port = settings.http_port or 8000
    logger.info(f"Starting status API on port {port}")

    uvicorn.run(
        "src.main:app",
        host=settings.listen_address[0],
        port=port,
        reload=config.DEPLOYMENT != "PRODUCTION",
        log_level="info"
    )
