from typing import Any, Dict, Optional

from fastapi import APIRouter, Query

from ..handlers.cost_model import CostScheme, PRESETS, TABLE_SCHEMES, format_bits, scenario_reports
from ..utils import http_messages, status_codes
from ..utils.wrappers.api_error import ApiError, StatusError
from ..utils.wrappers.api_response import ApiResponse

router = APIRouter(prefix="/estimate", tags=["estimate"])


@router.get("", response_model=Dict[str, Any])
async def get_estimate(
    preset: str = Query("india"),
    scheme: Optional[str] = Query(None),
):
    """Cost-model rows for a preset, optionally restricted to one scheme"""
    if preset not in PRESETS:
        return ApiError(StatusError.UNKNOWN_PRESET, preset).to_response()
    try:
        schemes = [CostScheme(scheme)] if scheme else list(TABLE_SCHEMES)
    except ValueError:
        return ApiError(StatusError.UNKNOWN_SCHEME, scheme).to_response()

    rows = []
    for report in scenario_reports(preset, schemes):
        row = report.model_dump()
        row["server_bits_display"] = format_bits(report.server_bits)
        row["client_bits_display"] = format_bits(report.client_bits)
        rows.append(row)
    return ApiResponse(
        status_codes.HTTP_OK,
        {"preset": preset, "rows": rows},
        http_messages.HTTP_ESTIMATE_SUCCESS_MESSAGE,
    ).to_dict()
