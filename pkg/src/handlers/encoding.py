"""Trail points to canonical 36-byte strings and beta-bit digests."""

import hashlib
import logging
from decimal import Decimal, InvalidOperation, ROUND_HALF_EVEN
from typing import Dict, Iterable, List, Set, Union

from ..models.elements import ElementDigest, TrailPoint
from ..models.schemas import EncodingParams
from ..utils.errors import ConfigurationError, EncodingError

logger = logging.getLogger(__name__)

COORDINATE_DIGITS = 10
TIMESTAMP_DIGITS = 16
CANONICAL_LENGTH = 2 * COORDINATE_DIGITS + TIMESTAMP_DIGITS
SUPPORTED_BETA_BITS = (128, 160, 256)

# Tag prepended before hashing a signature into the Blind-RSA comparison domain
SIGNATURE_HASH_TAG = b"\x02"

_FRACTION_SCALE = Decimal(10) ** 6
_AXIS_HEMISPHERES = {"lat": ("N", "S", Decimal(90)), "lon": ("E", "W", Decimal(180))}


def _check_beta(beta_bits: int) -> int:
    if beta_bits not in SUPPORTED_BETA_BITS:
        raise ConfigurationError(
            f"beta_bits must be one of {SUPPORTED_BETA_BITS}, got {beta_bits}"
        )
    return beta_bits // 8


def _check_digits(value: str, field: str) -> None:
    if len(value) != COORDINATE_DIGITS or not value.isascii() or not value.isdigit():
        raise EncodingError(f"{field} must be exactly {COORDINATE_DIGITS} ASCII digits, got {value!r}")


def time_bucket(timestamp_s: int, params: EncodingParams) -> int:
    return timestamp_s // params.time_bucket_s


def _render(lat_digits: str, lon_digits: str, bucket: int) -> bytes:
    rendered = f"{bucket:0{TIMESTAMP_DIGITS}d}"
    if len(rendered) != TIMESTAMP_DIGITS:
        raise EncodingError(f"time bucket {bucket} does not fit in {TIMESTAMP_DIGITS} digits")
    return (lat_digits + lon_digits + rendered).encode("ascii")


def canonicalize(point: TrailPoint, params: EncodingParams) -> bytes:
    """lat ‖ lon ‖ zero-padded floor(t / bucket), 36 ASCII bytes."""
    _check_digits(point.lat_digits, "lat")
    _check_digits(point.lon_digits, "lon")
    if point.timestamp_s < 0:
        raise EncodingError(f"timestamp must be non-negative, got {point.timestamp_s}")
    return _render(point.lat_digits, point.lon_digits, time_bucket(point.timestamp_s, params))


def hash_bytes(data: bytes, beta_bits: int, tag: bytes = b"") -> ElementDigest:
    """SHA-256 of tag ‖ data truncated to beta_bits."""
    length = _check_beta(beta_bits)
    return ElementDigest(hashlib.sha256(tag + data).digest()[:length])


def digest(canonical: bytes, params: EncodingParams) -> ElementDigest:
    if len(canonical) != CANONICAL_LENGTH:
        raise EncodingError(f"canonical string must be {CANONICAL_LENGTH} bytes, got {len(canonical)}")
    return hash_bytes(canonical, params.beta_bits)


def signature_digest(signature: int, byte_length: int, beta_bits: int) -> ElementDigest:
    """Second hash over an RSA signature, domain-separated from trail digests."""
    return hash_bytes(signature.to_bytes(byte_length, "big"), beta_bits, SIGNATURE_HASH_TAG)


def expand_window_buckets(point: TrailPoint, params: EncodingParams) -> List[int]:
    """Buckets b - (w-1)/2 .. b + (w-1)/2, clamped at 0."""
    w = params.window_buckets
    if w < 1 or w % 2 == 0:
        raise ConfigurationError(f"window_buckets must be a positive odd integer, got {w}")
    center = time_bucket(point.timestamp_s, params)
    half = (w - 1) // 2
    low = center - half
    if low < 0:
        logger.warning(f"Window around bucket {center} clamped at 0 ({-low} buckets dropped)")
        low = 0
    return list(range(low, center + half + 1))


def expand_window(point: TrailPoint, params: EncodingParams) -> Set[ElementDigest]:
    return set(expand_window_digests(point, params))


def expand_window_digests(point: TrailPoint, params: EncodingParams) -> Dict[ElementDigest, int]:
    """Window digests of one point mapped to their time bucket."""
    _check_digits(point.lat_digits, "lat")
    _check_digits(point.lon_digits, "lon")
    return {
        digest(_render(point.lat_digits, point.lon_digits, bucket), params): bucket
        for bucket in expand_window_buckets(point, params)
    }


def encode_trail(points: Iterable[TrailPoint], params: EncodingParams) -> Dict[ElementDigest, int]:
    """Client-side encoding of a whole trail: every window digest with its bucket."""
    encoded: Dict[ElementDigest, int] = {}
    for point in points:
        encoded.update(expand_window_digests(point, params))
    return encoded


def format_coordinate(value: Union[float, str, Decimal], axis: str) -> str:
    """Decimal degrees to sign digit (0 = N/E, 1 = S/W), 3 integer digits and 6 fractional digits."""
    if axis not in _AXIS_HEMISPHERES:
        raise EncodingError(f"axis must be 'lat' or 'lon', got {axis!r}")
    try:
        degrees = Decimal(str(value))
    except InvalidOperation as e:
        raise EncodingError(f"{axis} {value!r} is not a number") from e
    limit = _AXIS_HEMISPHERES[axis][2]
    if not degrees.is_finite() or abs(degrees) > limit:
        raise EncodingError(f"{axis} {value!r} is outside ±{limit}")
    sign = "1" if degrees < 0 else "0"
    scaled = int((abs(degrees) * _FRACTION_SCALE).quantize(Decimal(1), rounding=ROUND_HALF_EVEN))
    return f"{sign}{scaled:09d}"


def parse_coordinate(digits: str, axis: str = "lat") -> Decimal:
    """Inverse of format_coordinate."""
    _check_digits(digits, axis)
    if digits[0] not in "01":
        raise EncodingError(f"{axis} sign digit must be 0 or 1, got {digits[0]!r}")
    magnitude = Decimal(int(digits[1:])) / _FRACTION_SCALE
    return -magnitude if digits[0] == "1" else magnitude
