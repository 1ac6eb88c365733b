"""Runtime settings from the environment, an optional .env file and a JSON config."""

import json
import logging
import os
from dataclasses import dataclass, fields, replace
from pathlib import Path

from dotenv import load_dotenv

from errors import PreconditionError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Settings:
    threads: int = 1
    horizon: int = 12
    tail_span: int = 16
    refine_budget: int = 64
    refine_extra: int = 12
    report_dir: str = "reports"

    def __post_init__(self):
        for f in fields(self):
            value = getattr(self, f.name)
            expected = str if f.name == "report_dir" else int
            if not isinstance(value, expected) or isinstance(value, bool):
                raise PreconditionError(f"{f.name} must be {expected.__name__}, got {value!r}")
        if self.threads < 1:
            raise PreconditionError(f"threads must be >= 1, got {self.threads}")
        if self.horizon < 1:
            raise PreconditionError(f"horizon must be >= 1, got {self.horizon}")
        if self.tail_span < 8:
            raise PreconditionError(f"tail_span must be >= 8, got {self.tail_span}")
        if self.refine_budget < 0:
            raise PreconditionError(f"refine_budget must be >= 0, got {self.refine_budget}")
        if self.refine_extra < 0:
            raise PreconditionError(f"refine_extra must be >= 0, got {self.refine_extra}")


def _default_threads() -> int:
    return min(os.cpu_count() or 1, 8)


def _int_env(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None or raw == "":
        return default
    try:
        return int(raw)
    except ValueError:
        raise PreconditionError(f"{name} must be an integer, got {raw!r}") from None


def load_settings(path: str | None = None, **overrides) -> Settings:
    """Build Settings from .env/environment, then a JSON file, then overrides.

    Args:
        path: optional JSON file whose keys are Settings field names
        **overrides: values from CLI flags; None values are ignored

    Returns:
        a validated Settings instance
    """
    load_dotenv()

    settings = Settings(
        threads       = _int_env("COMINIMAL_THREADS",   _default_threads()),
        horizon       = _int_env("COMINIMAL_HORIZON",   12),
        tail_span     = _int_env("COMINIMAL_TAIL_SPAN", 16),
        refine_budget = _int_env("COMINIMAL_BUDGET",    64),
        refine_extra  = _int_env("COMINIMAL_REFINE_EXTRA", 12),
        report_dir    = os.getenv("COMINIMAL_REPORT_DIR", "reports"),
    )

    if path:
        try:
            data = json.loads(Path(path).read_text(encoding="utf-8"))
        except json.JSONDecodeError as e:
            raise PreconditionError(f"config file {path} is not valid JSON: {e}") from e
        if not isinstance(data, dict):
            raise PreconditionError(f"config file {path} must hold a JSON object")
        known = {f.name for f in fields(Settings)}
        unknown = set(data) - known
        if unknown:
            raise PreconditionError(f"unknown config keys: {sorted(unknown)}")
        settings = replace(settings, **data)
        logger.debug(f"Loaded config overrides from {path}")

    cli = {k: v for k, v in overrides.items() if v is not None}
    if cli:
        settings = replace(settings, **cli)
    return settings
