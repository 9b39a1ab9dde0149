import logging
import os

from dotenv import load_dotenv
from pydantic import BaseModel, Field, ValidationError, field_validator

from sector_verifier.errors import ConfigError

# Load environment variables from .env file
load_dotenv()

ENV_PREFIX = "SECTOR_VERIFIER_"
LOG_LEVELS = ("CRITICAL", "ERROR", "WARNING", "INFO", "DEBUG")


class Settings(BaseModel):
    """Run-wide settings, read from ``SECTOR_VERIFIER_*`` environment variables."""

    seed: int = 7
    eps: float = 1e-9
    samples: int = 1000
    workers: int = 1
    log_level: str = "INFO"
    store_url: str | None = None
    output_dir: str = Field(default="output")

    @field_validator("eps")
    @classmethod
    def _eps_positive(cls, value: float) -> float:
        if not value > 0:
            raise ValueError("eps must be positive")
        return value

    @field_validator("samples")
    @classmethod
    def _samples_non_negative(cls, value: int) -> int:
        if value < 0:
            raise ValueError("samples must be >= 0")
        return value

    @field_validator("workers")
    @classmethod
    def _workers_positive(cls, value: int) -> int:
        if value < 1:
            raise ValueError("workers must be >= 1")
        return value

    @field_validator("log_level")
    @classmethod
    def _known_level(cls, value: str) -> str:
        level = value.upper()
        if level not in LOG_LEVELS:
            raise ValueError(f"unknown log level {value!r}")
        return level

    def with_overrides(self, **overrides) -> "Settings":
        """Returns a copy with the non-None overrides applied and re-validated."""
        values = self.model_dump()
        values.update({k: v for k, v in overrides.items() if v is not None})
        try:
            return Settings(**values)
        except ValidationError as e:
            raise ConfigError(str(e)) from e

    @property
    def log_level_number(self) -> int:
        return logging.getLevelName(self.log_level)


def load_settings(environ: dict[str, str] | None = None) -> Settings:
    """Builds Settings from the environment.

    Args:
        environ: Mapping to read instead of ``os.environ`` (used by tests).

    Raises:
        ConfigError: If any variable fails validation.
    """
    env = os.environ if environ is None else environ
    values = {}
    for name in Settings.model_fields:
        raw = env.get(ENV_PREFIX + name.upper())
        if raw is not None and raw != "":
            values[name] = raw
    try:
        return Settings(**values)
    except ValidationError as e:
        raise ConfigError(str(e)) from e
