"""Cuckoo hash table with random-walk insertion and a small stash."""

import enum
import logging
import math
import random
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import mmh3

from ...core import config
from ...models.elements import ElementDigest
from ...utils.errors import ParameterError
from ..arithmetic import default_rng

logger = logging.getLogger(__name__)


class InsertOutcome(str, enum.Enum):
    SUCCESS = "success"
    STASHED = "stashed"
    FAILURE = "failure"


@dataclass
class CuckooTable:
    num_bins: int
    num_hashes: int = 3
    max_kicks: int = config.CUCKOO_MAX_KICKS
    stash_size: int = config.CUCKOO_STASH_SIZE
    seed: int = 0
    rng: Optional[random.Random] = field(default=None, repr=False)
    bins: List[Optional[ElementDigest]] = field(default=None, repr=False)
    stash: List[ElementDigest] = field(default_factory=list)

    def __post_init__(self):
        if self.num_bins <= 0:
            raise ParameterError(f"num_bins must be positive, got {self.num_bins}")
        if self.num_hashes < 2:
            raise ParameterError(f"cuckoo hashing needs at least 2 hash functions, got {self.num_hashes}")
        if self.bins is None:
            self.bins = [None] * self.num_bins
        self.rng = self.rng or default_rng()

    @classmethod
    def for_load(cls, num_elements: int, load_factor: float, **kwargs) -> "CuckooTable":
        if not 0.0 < load_factor <= 1.0:
            raise ParameterError(f"load factor must lie in (0, 1], got {load_factor}")
        return cls(num_bins=max(1, math.ceil(num_elements / load_factor)), **kwargs)

    def candidate_bins(self, x: ElementDigest) -> List[int]:
        return [
            mmh3.hash64(x.bytes, seed=self.seed + i, signed=False)[0] % self.num_bins
            for i in range(self.num_hashes)
        ]

    def __len__(self) -> int:
        return sum(1 for b in self.bins if b is not None) + len(self.stash)

    def __contains__(self, x: ElementDigest) -> bool:
        return cuckoo_query(self, x)


def cuckoo_insert(t: CuckooTable, x: ElementDigest) -> InsertOutcome:
    """Place x, relocating residents for at most max_kicks steps, then stash.

    On failure every relocation is undone, so the table is left as it was.
    """
    if cuckoo_query(t, x):
        return InsertOutcome.SUCCESS
    candidates = t.candidate_bins(x)
    for b in candidates:
        if t.bins[b] is None:
            t.bins[b] = x
            return InsertOutcome.SUCCESS

    path: List[Tuple[int, ElementDigest]] = []
    current = x
    target = t.rng.choice(candidates)
    for _ in range(t.max_kicks):
        evicted = t.bins[target]
        t.bins[target] = current
        path.append((target, evicted))
        current = evicted

        options = [b for b in t.candidate_bins(current) if b != target] or [target]
        for b in options:
            if t.bins[b] is None:
                t.bins[b] = current
                return InsertOutcome.SUCCESS
        target = t.rng.choice(options)

    if len(t.stash) < t.stash_size:
        t.stash.append(current)
        logger.debug(f"Cuckoo insert stashed an element after {t.max_kicks} kicks")
        return InsertOutcome.STASHED

    for b, evicted in reversed(path):
        t.bins[b] = evicted
    logger.warning(f"Cuckoo table of {t.num_bins} bins is full; rebuild with more bins")
    return InsertOutcome.FAILURE


def cuckoo_query(t: CuckooTable, x: ElementDigest) -> bool:
    """At most num_hashes bin probes plus a stash scan."""
    return any(t.bins[b] == x for b in t.candidate_bins(x)) or x in t.stash


def cuckoo_remove(t: CuckooTable, x: ElementDigest) -> bool:
    for b in t.candidate_bins(x):
        if t.bins[b] == x:
            t.bins[b] = None
            return True
    if x in t.stash:
        t.stash.remove(x)
        return True
    return False
