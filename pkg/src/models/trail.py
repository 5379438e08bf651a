from sqlalchemy import Column, Integer, LargeBinary, String

from ..core.database import Base


class TrailDigestTable(Base):
    """One deduplicated digest of a town partition."""
    __tablename__ = 'trail_digests'

    town = Column(String(128), primary_key=True)
    digest = Column(LargeBinary(32), primary_key=True)
    bucket = Column(Integer, nullable=False)
    occurrences = Column(Integer, nullable=False, default=1)
