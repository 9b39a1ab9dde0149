import json
import logging
import os
from datetime import datetime, timezone
from typing import Optional
from uuid import uuid4

from dotenv import load_dotenv
from sqlalchemy import DateTime, Integer, String, Text, create_engine, select
from sqlalchemy.exc import IntegrityError
from sqlalchemy.orm import DeclarativeBase, Mapped, Session, mapped_column, sessionmaker

# Load environment variables from .env file
load_dotenv()

logger = logging.getLogger(__name__)

DEFAULT_URL = "sqlite:///output/runs.db"


class Base(DeclarativeBase):
    pass


class RunRecord(Base):
    __tablename__ = "runs"

    run_id: Mapped[str] = mapped_column(String(64), primary_key=True)
    kind: Mapped[str] = mapped_column(String(64), index=True)
    seed: Mapped[Optional[int]] = mapped_column(Integer, nullable=True)
    created_at: Mapped[datetime] = mapped_column(DateTime(timezone=True))
    status: Mapped[str] = mapped_column(String(32))
    report_json: Mapped[str] = mapped_column(Text)

    def as_dict(self) -> dict:
        return {
            "run_id": self.run_id,
            "kind": self.kind,
            "seed": self.seed,
            "created_at": self.created_at.isoformat(),
            "status": self.status,
            "report": json.loads(self.report_json),
        }


class RunStore:
    """
    Keeps every report the command line produces in a SQL database.

    SQLite works out of the box; a PostgreSQL URL needs the optional
    ``psycopg2-binary`` driver.
    """

    def __init__(self, url: Optional[str] = None):
        self.url = url or os.getenv("SECTOR_VERIFIER_STORE_URL") or DEFAULT_URL
        self.engine = None
        self._sessions: Optional[sessionmaker[Session]] = None

    def connect(self) -> "RunStore":
        """Creates the engine and the tables."""
        try:
            if self.url.startswith("sqlite:///") and self.url != "sqlite:///:memory:":
                folder = os.path.dirname(self.url.removeprefix("sqlite:///"))
                if folder:
                    os.makedirs(folder, exist_ok=True)
            self.engine = create_engine(self.url)
            self._sessions = sessionmaker(self.engine, expire_on_commit=False)
            self.init_db()
            logger.info("connected to run store %s", self.engine.url.render_as_string(hide_password=True))
        except Exception:
            logger.exception("could not connect to run store %s", self.url)
            raise
        return self

    def init_db(self) -> None:
        """Creates the necessary tables if they do not exist."""
        Base.metadata.create_all(self.engine)

    def close(self) -> None:
        if self.engine is not None:
            self.engine.dispose()
            self.engine = None
            self._sessions = None
            logger.info("run store closed")

    def _session(self) -> Session:
        if self._sessions is None:
            raise RuntimeError("run store is not connected")
        return self._sessions()

    def save_run(self, kind: str, seed: Optional[int], report: dict, run_id: Optional[str] = None) -> str:
        """Stores one report and returns its run id.

        Raises:
            ValueError: If a run with the given id already exists.
        """
        run_id = run_id or uuid4().hex
        record = RunRecord(
            run_id=run_id,
            kind=kind,
            seed=seed,
            created_at=datetime.now(timezone.utc),
            status=str(report.get("status", "")),
            report_json=json.dumps(report, sort_keys=True, default=str),
        )
        try:
            with self._session() as session, session.begin():
                session.add(record)
        except IntegrityError:
            raise ValueError(f"Run with id '{run_id}' already exists.")
        logger.debug("stored %s run %s", kind, run_id)
        return run_id

    def get_run(self, run_id: str) -> Optional[dict]:
        """Returns the stored run, or None if not found."""
        with self._session() as session:
            record = session.get(RunRecord, run_id)
            return record.as_dict() if record is not None else None

    def list_runs(self, kind: Optional[str] = None) -> list[dict]:
        """Lists stored runs, oldest first, without their reports."""
        stmt = select(RunRecord).order_by(RunRecord.created_at, RunRecord.run_id)
        if kind is not None:
            stmt = stmt.where(RunRecord.kind == kind)
        with self._session() as session:
            rows = session.scalars(stmt).all()
        return [
            {
                "run_id": r.run_id,
                "kind": r.kind,
                "seed": r.seed,
                "status": r.status,
                "created_at": r.created_at.isoformat(),
            }
            for r in rows
        ]
