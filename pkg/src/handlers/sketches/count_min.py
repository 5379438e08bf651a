"""Count-Min sketch over element digests."""

import math
from dataclasses import dataclass, field
from typing import Iterable, List, Union

import mmh3
import numpy as np

from ...models.elements import ElementDigest
from ...utils.errors import ParameterError

Item = Union[ElementDigest, bytes]


def _key(x: Item) -> bytes:
    return x.bytes if isinstance(x, ElementDigest) else bytes(x)


@dataclass
class CountMinSketch:
    """width = ceil(e / epsilon) columns, depth = ceil(ln(1 / delta)) rows."""
    epsilon: float
    delta: float
    seed: int = 0
    width: int = field(init=False)
    depth: int = field(init=False)
    counters: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        if not 0.0 < self.epsilon < 1.0 or not 0.0 < self.delta < 1.0:
            raise ParameterError("epsilon and delta must lie in (0, 1)")
        self.width = math.ceil(math.e / self.epsilon)
        self.depth = math.ceil(math.log(1.0 / self.delta))
        self.counters = np.zeros((self.depth, self.width), dtype=np.int64)

    def columns(self, x: Item) -> List[int]:
        key = _key(x)
        return [
            mmh3.hash64(key, seed=self.seed + row, signed=False)[0] % self.width
            for row in range(self.depth)
        ]

    @property
    def total(self) -> int:
        """Sum of all updates; every row sums to it."""
        return int(self.counters[0].sum())


def cm_update(s: CountMinSketch, x: Item, count: int = 1) -> None:
    if count < 1:
        raise ParameterError(f"count must be positive, got {count}")
    s.counters[np.arange(s.depth), s.columns(x)] += count


def cm_query(s: CountMinSketch, x: Item) -> int:
    return int(s.counters[np.arange(s.depth), s.columns(x)].min())


def cm_cooccurrence_count(s: CountMinSketch, matched: Iterable[Item]) -> int:
    """Estimated total server-side frequency of the matched elements."""
    return sum(cm_query(s, x) for x in matched)
