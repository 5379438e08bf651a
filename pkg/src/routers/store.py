from typing import Any, Dict, Optional

from fastapi import APIRouter, Depends

from ..dependencies import get_store
from ..handlers.store import TrailStore
from ..utils import http_messages, status_codes
from ..utils.wrappers.api_error import ApiError, StatusError
from ..utils.wrappers.api_response import ApiResponse

router = APIRouter(prefix="/store", tags=["store"])


@router.get("/manifest", response_model=Dict[str, Any])
async def get_manifest(store: Optional[TrailStore] = Depends(get_store)):
    """Per-town digest counts and encoding parameters of the loaded store"""
    if store is None:
        return ApiError(StatusError.STORE_NOT_LOADED).to_response()
    return ApiResponse(
        status_codes.HTTP_OK,
        store.manifest.model_dump(mode="json"),
        http_messages.HTTP_MANIFEST_SUCCESS_MESSAGE,
    ).to_dict()
