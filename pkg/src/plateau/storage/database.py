from __future__ import annotations

from pathlib import Path

from sqlalchemy import Engine, create_engine
from sqlalchemy.orm import Session, sessionmaker

from plateau.storage.models import Base


def create_session_factory(database_url: str) -> tuple[sessionmaker[Session], Engine]:
    engine = create_engine(database_url, future=True)
    return sessionmaker(bind=engine, expire_on_commit=False), engine


def init_db(engine: Engine) -> None:
    Base.metadata.create_all(engine)


def default_ledger_url(out_dir: Path) -> str:
    return f"sqlite:///{Path(out_dir) / 'ledger.db'}"
