from __future__ import annotations

import hashlib
import json
import logging
import uuid
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Callable

from sqlalchemy.orm import sessionmaker

from plateau.config import Settings, config_sha256, write_snapshot
from plateau.errors import AcceptanceFailure, IdentityViolation, PlateauError
from plateau.storage import ArtifactRecord, ExperimentRunRecord

logger = logging.getLogger(__name__)

REPORT_NAME = "report.json"
CONFIG_NAME = "config.yaml"

_KINDS = {".csv": "csv", ".json": "json", ".yaml": "yaml"}


@dataclass
class CommandResult:
    """What a command hands back to the runner: the report body and an optional verdict."""

    report: dict[str, Any]
    failure: PlateauError | None = None


@dataclass
class RunOutcome:
    run_id: str
    run_dir: Path
    status: str
    report: dict[str, Any] = field(default_factory=dict)


CommandFn = Callable[[Settings, Path], CommandResult]


class ExperimentRunner:
    """
    Runs one command inside a deterministic run directory and records it in the ledger.

    The directory name depends only on the command, the seed and the hash of the config
    sections the command reads, so reruns overwrite identical files. Run ids, timings and
    failures go to the ledger only.
    """

    def __init__(self, session_factory: sessionmaker, out_dir: Path) -> None:
        self.session_factory = session_factory
        self.out_dir = Path(out_dir)

    def run(
        self,
        command: str,
        settings: Settings,
        sections: tuple[str, ...],
        fn: CommandFn,
    ) -> RunOutcome:
        snapshot = settings.section_snapshot(*sections)
        digest = config_sha256({"command": command, **snapshot})
        run_dir = self.out_dir / f"{command}-seed{settings.seed}-{digest[:12]}"
        # Same seed and sections map to the same folder, so reruns overwrite in place
        run_dir.mkdir(parents=True, exist_ok=True)
        write_snapshot(snapshot, run_dir / CONFIG_NAME)

        # Ledger row is written first so crashed runs stay visible as "running"
        run_id = str(uuid.uuid4())
        self._start_run_record(run_id, command, settings.seed, snapshot, digest, run_dir)
        logger.info(
            "Starting run",
            extra={"run_id": run_id, "command": command, "run_dir": str(run_dir)},
        )

        status = "success"
        error_message: str | None = None
        report: dict[str, Any] = {}
        try:
            result = fn(settings, run_dir)
            report = result.report
            # Report is written even for rejected runs
            _write_report(run_dir / REPORT_NAME, command, snapshot, report)
            if result.failure is not None:
                status = "rejected"
                error_message = str(result.failure)
                raise result.failure
        except (AcceptanceFailure, IdentityViolation):
            raise
        except Exception as exc:
            status = "failed"
            error_message = str(exc)
            logger.exception("Run failed", extra={"run_id": run_id, "command": command})
            raise
        finally:
            # Archive whatever the command left on disk, then close the ledger row
            self._archive_artifacts(run_id, run_dir)
            self._finish_run_record(run_id, status, report, error_message)
            logger.info("Finished run", extra={"run_id": run_id, "status": status})

        return RunOutcome(run_id=run_id, run_dir=run_dir, status=status, report=report)

    def _start_run_record(
        self,
        run_id: str,
        command: str,
        seed: int,
        snapshot: dict[str, Any],
        digest: str,
        run_dir: Path,
    ) -> None:
        with self.session_factory() as session:
            session.add(
                ExperimentRunRecord(
                    id=run_id,
                    command=command,
                    status="running",
                    seed=seed,
                    config_json=snapshot,
                    config_sha256=digest,
                    run_dir=str(run_dir),
                )
            )
            session.commit()

    def _finish_run_record(
        self,
        run_id: str,
        status: str,
        report: dict[str, Any],
        error_message: str | None,
    ) -> None:
        with self.session_factory() as session:
            run = session.get(ExperimentRunRecord, run_id)
            if not run:
                return
            run.status = status
            run.finished_at = datetime.now(timezone.utc)
            run.summary_json = json.loads(json.dumps(report, default=_json_default)) if report else None
            run.error_message = error_message
            session.commit()

    def _archive_artifacts(self, run_id: str, run_dir: Path) -> None:
        """Fingerprint every file in the run directory by sha256."""
        with self.session_factory() as session:
            for path in sorted(p for p in run_dir.iterdir() if p.is_file()):
                data = path.read_bytes()
                kind = _KINDS.get(path.suffix, "other")
                rows = max(data.count(b"\n") - 1, 0) if kind == "csv" else None
                session.add(
                    ArtifactRecord(
                        run_id=run_id,
                        path=path.name,
                        kind=kind,
                        sha256=hashlib.sha256(data).hexdigest(),
                        rows=rows,
                    )
                )
            session.commit()


def _write_report(path: Path, command: str, snapshot: dict[str, Any], body: dict[str, Any]) -> None:
    payload = {"command": command, "config": snapshot, "result": body}
    path.write_text(json.dumps(payload, indent=2, sort_keys=True, default=_json_default) + "\n")


def _json_default(value: Any) -> Any:
    if hasattr(value, "item"):
        return value.item()
    if hasattr(value, "tolist"):
        return value.tolist()
    if isinstance(value, Path):
        return str(value)
    raise TypeError(f"Object of type {type(value).__name__} is not JSON serializable")
