"""Trail points and the hashed set elements every PSI scheme operates on."""

from __future__ import annotations

from dataclasses import dataclass

VALID_DIGEST_LENGTHS = (16, 20, 32)


@dataclass(frozen=True)
class TrailPoint:
    """One GPS sample with pre-formatted 10-digit coordinates."""
    lat_digits: str
    lon_digits: str
    timestamp_s: int


@dataclass(frozen=True, order=True)
class ElementDigest:
    """A beta-bit digest of a canonical trail point; equality is byte equality."""
    bytes: bytes

    def __post_init__(self):
        if len(self.bytes) not in VALID_DIGEST_LENGTHS:
            raise ValueError(
                f"digest must be one of {VALID_DIGEST_LENGTHS} bytes long, got {len(self.bytes)}"
            )

    @property
    def bit_length(self) -> int:
        return 8 * len(self.bytes)

    def to_int(self) -> int:
        return int.from_bytes(self.bytes, "big")

    def hex(self) -> str:
        return self.bytes.hex()

    def __repr__(self) -> str:
        return f"ElementDigest({self.bytes.hex()[:16]}…)"
