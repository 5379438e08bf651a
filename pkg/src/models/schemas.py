"""Pydantic models for parameters, reports and file records."""

from typing import Dict, List, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from .transcript import SchemeId, TransportModel

Number = Union[int, float]


class EncodingParams(BaseModel):
    """How trail points become set elements."""
    model_config = ConfigDict(frozen=True)

    alpha_bits: int = Field(512, gt=0)
    beta_bits: int = Field(256, gt=0)
    time_bucket_s: int = Field(3600, gt=0)
    window_buckets: int = Field(3, ge=1)


class TrailRecord(BaseModel):
    """One NDJSON line of a trail ingestion file."""
    lat: str
    lon: str
    t: int = Field(..., ge=0)
    town: Optional[str] = None

    @field_validator('town', mode='before')
    @classmethod
    def validate_town(cls, v: Optional[str]) -> Optional[str]:
        if v is not None:
            v = str(v).strip()
            return v or None
        return v


class CostParams(BaseModel):
    """Inputs of the complexity formulas; defaults are the India scenario."""
    model_config = ConfigDict(frozen=True)

    m: int = Field(2 ** 30, gt=0)
    n: int = Field(2 ** 10, gt=0)
    alpha: int = Field(2 ** 9, gt=0)
    beta: int = Field(2 ** 8, gt=0)
    tau: int = Field(2 ** 8, gt=0)
    sigma: int = Field(2 ** 8, gt=0)
    kappa: int = Field(2 ** 7, gt=0)
    server_hz: float = Field(1e11, gt=0)
    client_hz: float = Field(1e9, gt=0)
    intersection: Optional[int] = Field(None, ge=0, description="|X ∩ Y|; defaults to n")

    @property
    def intersection_size(self) -> int:
        return self.n if self.intersection is None else self.intersection


class CostReport(BaseModel):
    """One modeled scheme: instruction counts, bits on the wire and seconds."""
    scheme: str
    server_ops: Number
    client_ops: Number
    server_bits: int
    client_bits: int
    server_seconds: float
    client_seconds: float


class SessionConfig(BaseModel):
    """Negotiated parameters of one client/server session."""
    scheme: SchemeId
    model: Optional[TransportModel] = None
    town: str = "default"
    rsa_key_path: Optional[str] = None
    dh_group_path: Optional[str] = None
    paillier_prime_bits: int = Field(512, ge=16)
    max_client_elements: int = Field(2 ** 10, gt=0)

    @model_validator(mode='after')
    def validate_model(self) -> 'SessionConfig':
        expected = TransportModel.for_scheme(self.scheme)
        if self.model is None:
            self.model = expected
        elif self.model is not expected:
            raise ValueError(
                f"scheme {self.scheme.value} runs in the {expected.value} model, not {self.model.value}"
            )
        return self


class BucketCount(BaseModel):
    bucket: int
    count: int


class RiskReport(BaseModel):
    """Exposure summary returned to the app user."""
    match_count: int
    matched_buckets: List[BucketCount] = []
    score: int


class StoreManifest(BaseModel):
    """Per-town digest counts plus the encoding they were produced with."""
    encoding: EncodingParams
    towns: Dict[str, int] = {}
    occurrences: Dict[str, int] = {}
