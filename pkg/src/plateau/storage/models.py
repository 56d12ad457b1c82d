from __future__ import annotations

from datetime import datetime

from sqlalchemy import JSON, DateTime, ForeignKey, Integer, String, Text, UniqueConstraint, func
from sqlalchemy.orm import DeclarativeBase, Mapped, mapped_column, relationship


class Base(DeclarativeBase):
    pass


class ExperimentRunRecord(Base):
    """
    One row per CLI command execution.

    Holds the resolved config and its hash, so a run directory can always be traced back to
    the exact parameters and seed that produced it; wall-clock times live only here.
    """

    __tablename__ = "experiment_runs"

    id: Mapped[str] = mapped_column(String, primary_key=True)
    command: Mapped[str] = mapped_column(String, nullable=False)  # simulate|verify|limit-compare|...
    status: Mapped[str] = mapped_column(String, nullable=False)  # running|success|failed|rejected
    seed: Mapped[int] = mapped_column(Integer, nullable=False)
    config_json: Mapped[dict] = mapped_column(JSON, nullable=False)
    config_sha256: Mapped[str] = mapped_column(String, nullable=False)
    run_dir: Mapped[str] = mapped_column(String, nullable=False)
    started_at: Mapped[datetime] = mapped_column(
        DateTime(timezone=True), default=func.now(), nullable=False
    )
    finished_at: Mapped[datetime | None] = mapped_column(DateTime(timezone=True), nullable=True)
    summary_json: Mapped[dict | None] = mapped_column(JSON, nullable=True)
    error_message: Mapped[str | None] = mapped_column(Text, nullable=True)

    artifacts: Mapped[list[ArtifactRecord]] = relationship(
        back_populates="run", cascade="all, delete-orphan", passive_deletes=True
    )


class ArtifactRecord(Base):
    """A file written into a run directory, fingerprinted by sha256."""

    __tablename__ = "artifacts"
    __table_args__ = (UniqueConstraint("run_id", "path", name="uq_artifact_run_path"),)

    id: Mapped[int] = mapped_column(Integer, primary_key=True, autoincrement=True)
    run_id: Mapped[str] = mapped_column(
        ForeignKey("experiment_runs.id", ondelete="CASCADE"), nullable=False
    )
    path: Mapped[str] = mapped_column(String, nullable=False)
    kind: Mapped[str] = mapped_column(String, nullable=False)  # csv|json|yaml|other
    sha256: Mapped[str] = mapped_column(String, nullable=False)
    rows: Mapped[int | None] = mapped_column(Integer, nullable=True)

    run: Mapped[ExperimentRunRecord] = relationship(back_populates="artifacts")
