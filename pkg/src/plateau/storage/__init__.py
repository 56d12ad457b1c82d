from .database import create_session_factory, default_ledger_url, init_db
from .models import ArtifactRecord, Base, ExperimentRunRecord

__all__ = [
    "ArtifactRecord",
    "Base",
    "ExperimentRunRecord",
    "create_session_factory",
    "default_ledger_url",
    "init_db",
]
