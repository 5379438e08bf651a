"""Risk report from a PSI result."""

from collections import Counter
from typing import AbstractSet, Mapping

from ..models.elements import ElementDigest
from ..models.schemas import BucketCount, RiskReport


def risk_score(matched: AbstractSet[ElementDigest], bucket_map: Mapping[ElementDigest, int]) -> RiskReport:
    """Baseline policy: the score is the number of matched client digests."""
    per_bucket = Counter(bucket_map[d] for d in matched)
    return RiskReport(
        match_count=len(matched),
        matched_buckets=[BucketCount(bucket=b, count=c) for b, c in sorted(per_bucket.items())],
        score=len(matched),
    )
