"""Town-partitioned digest store backed by SQLite, plus NDJSON ingestion."""

import json
import logging
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Tuple, Union

from pydantic import ValidationError
from sqlalchemy import delete, select
from sqlalchemy.exc import SQLAlchemyError

from ..core import config
from ..core.database import create_store_engine, session_scope
from ..models.elements import ElementDigest, TrailPoint
from ..models.schemas import EncodingParams, StoreManifest, TrailRecord
from ..models.trail import TrailDigestTable
from ..utils.errors import EncodingError, StoreError
from .encoding import canonicalize, digest, time_bucket
from .sketches.count_min import CountMinSketch, cm_cooccurrence_count, cm_update

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]

# Count-Min error parameters of the per-town co-occurrence sketch
SKETCH_EPSILON = 0.001
SKETCH_DELTA = 0.01


@dataclass
class TrailStore:
    """Immutable-after-load view of the server's digests, one partition per town."""
    path: Path
    encoding: EncodingParams
    partitions: Dict[str, FrozenSet[ElementDigest]] = field(default_factory=dict)
    occurrences: Dict[str, Dict[ElementDigest, int]] = field(default_factory=dict, repr=False)
    buckets: Dict[str, Dict[ElementDigest, int]] = field(default_factory=dict, repr=False)
    _sketches: Dict[str, CountMinSketch] = field(default_factory=dict, init=False, repr=False)

    @property
    def towns(self) -> List[str]:
        return sorted(self.partitions)

    @property
    def manifest(self) -> StoreManifest:
        return StoreManifest(
            encoding=self.encoding,
            towns={town: len(self.partitions[town]) for town in self.towns},
            occurrences={town: sum(self.occurrences.get(town, {}).values()) for town in self.towns},
        )

    def partition(self, town: str) -> FrozenSet[ElementDigest]:
        try:
            return self.partitions[town]
        except KeyError as e:
            raise StoreError(f"unknown town {town!r}") from e

    def sketch(self, town: str) -> CountMinSketch:
        """Count-Min sketch over the town's multiset of raw points, built on first use."""
        if town not in self._sketches:
            self.partition(town)
            sketch = CountMinSketch(SKETCH_EPSILON, SKETCH_DELTA)
            for d, count in self.occurrences.get(town, {}).items():
                cm_update(sketch, d, count)
            self._sketches[town] = sketch
        return self._sketches[town]

    def cooccurrence_count(self, town: str, matched: Iterable[ElementDigest]) -> int:
        return cm_cooccurrence_count(self.sketch(town), matched)

    @classmethod
    def load(cls, path: PathLike) -> "TrailStore":
        path = Path(path)
        manifest_path = path / config.STORE_MANIFEST_FILENAME
        if not manifest_path.is_file():
            raise StoreError(f"no trail store at {path} (missing {config.STORE_MANIFEST_FILENAME})")
        try:
            manifest = StoreManifest.model_validate_json(manifest_path.read_text(encoding="utf-8"))
        except (OSError, ValidationError) as e:
            raise StoreError(f"unreadable manifest {manifest_path}: {e}") from e

        partitions: Dict[str, set] = defaultdict(set)
        occurrences: Dict[str, Dict[ElementDigest, int]] = defaultdict(dict)
        buckets: Dict[str, Dict[ElementDigest, int]] = defaultdict(dict)
        try:
            engine = create_store_engine(path)
            with session_scope(engine) as session:
                for row in session.execute(select(TrailDigestTable)).scalars():
                    d = ElementDigest(bytes(row.digest))
                    partitions[row.town].add(d)
                    occurrences[row.town][d] = row.occurrences
                    buckets[row.town][d] = row.bucket
            engine.dispose()
        except SQLAlchemyError as e:
            raise StoreError(f"cannot read trail store {path}: {e}") from e

        store = cls(
            path=path,
            encoding=manifest.encoding,
            partitions={town: frozenset(ds) for town, ds in partitions.items()},
            occurrences=dict(occurrences),
            buckets=dict(buckets),
        )
        for town in manifest.towns:
            store.partitions.setdefault(town, frozenset())
        if store.manifest.towns != manifest.towns:
            raise StoreError(f"manifest counts disagree with the database in {path}")
        logger.info(f"Loaded trail store {path}: {len(store.towns)} towns, "
                    f"{sum(len(p) for p in store.partitions.values())} digests")
        return store


def read_trail_records(path: PathLike) -> Iterator[Tuple[int, TrailRecord]]:
    """(line number, record) for every non-blank NDJSON line."""
    path = Path(path)
    try:
        with path.open("rb") as handle:
            for number, raw in enumerate(handle, start=1):
                try:
                    line = raw.decode("utf-8")
                except UnicodeDecodeError as e:
                    raise StoreError(f"{path}:{number}: not valid UTF-8") from e
                if not line.strip():
                    continue
                try:
                    yield number, TrailRecord.model_validate_json(line)
                except ValidationError as e:
                    raise StoreError(f"{path}:{number}: {e.errors()[0]['msg']}") from e
    except OSError as e:
        raise StoreError(f"cannot read trail file {path}: {e}") from e


def read_trail_points(path: PathLike) -> List[TrailPoint]:
    return [TrailPoint(r.lat, r.lon, r.t) for _, r in read_trail_records(path)]


def write_manifest(store_path: Path, manifest: StoreManifest) -> Path:
    manifest_path = store_path / config.STORE_MANIFEST_FILENAME
    text = json.dumps(manifest.model_dump(mode="json"), sort_keys=True, indent=2) + "\n"
    manifest_path.write_text(text, encoding="utf-8")
    return manifest_path


def store_ingest(path: PathLike, params: EncodingParams, store_path: Optional[PathLike] = None) -> TrailStore:
    """Digest every record, deduplicate per town and replace the store contents."""
    store_path = Path(store_path or "./psi_store")
    occurrences: Dict[str, Counter] = defaultdict(Counter)
    buckets: Dict[str, Dict[ElementDigest, int]] = defaultdict(dict)

    for number, record in read_trail_records(path):
        town = record.town or config.DEFAULT_TOWN
        point = TrailPoint(record.lat, record.lon, record.t)
        try:
            d = digest(canonicalize(point, params), params)
        except EncodingError as e:
            raise StoreError(f"{path}:{number}: {e}") from e
        occurrences[town][d] += 1
        buckets[town][d] = time_bucket(point.timestamp_s, params)

    try:
        engine = create_store_engine(store_path)
        with session_scope(engine) as session:
            session.execute(delete(TrailDigestTable))
            session.add_all(
                TrailDigestTable(town=town, digest=d.bytes, bucket=buckets[town][d], occurrences=count)
                for town, counter in occurrences.items()
                for d, count in counter.items()
            )
        engine.dispose()
    except SQLAlchemyError as e:
        raise StoreError(f"cannot write trail store {store_path}: {e}") from e

    store = TrailStore(
        path=store_path,
        encoding=params,
        partitions={town: frozenset(counter) for town, counter in occurrences.items()},
        occurrences={town: dict(counter) for town, counter in occurrences.items()},
        buckets=dict(buckets),
    )
    write_manifest(store_path, store.manifest)
    logger.info(f"Ingested {sum(sum(c.values()) for c in occurrences.values())} points into "
                f"{len(store.towns)} towns at {store_path}")
    return store
