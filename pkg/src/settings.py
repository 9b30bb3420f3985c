from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Dict, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, ValidationError

from .errors import SchemaError

_SETTINGS_CACHE: Dict[str, "Settings"] = {}


class Settings(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    max_ext: int = Field(2, ge=1)
    max_field_degree: int = Field(2, ge=1)
    budget: int = Field(5_000_000, ge=1)
    hilbert_max_degree: int = Field(4, ge=0)
    order_policy: Literal["given", "search"] = "given"
    workers: int = Field(0, ge=0)  # 0 = one per CPU
    max_reported_base_points: int = Field(16, ge=1)

    def merged(self, **overrides: Any) -> "Settings":
        """Return a copy with every non-None override applied."""
        changes = {k: v for k, v in overrides.items() if v is not None}
        if not changes:
            return self
        try:
            return Settings.model_validate({**self.model_dump(), **changes})
        except ValidationError as e:
            raise SchemaError(f"invalid option: {e.errors()[0]['msg']}", pointer=_pointer(e)) from e


def _pointer(e: ValidationError) -> str:
    loc = e.errors()[0].get("loc", ())
    return "/" + "/".join(str(x) for x in loc)


def _default_settings_path() -> Path:
    return Path(__file__).resolve().parent.parent / "config" / "defaults.json"


def load_settings(path: Optional[Path] = None) -> Settings:
    """Load defaults from JSON configuration, once per path."""

    target = Path(path) if path else _default_settings_path()
    key = str(target)
    if key in _SETTINGS_CACHE:
        return _SETTINGS_CACHE[key]

    data: Dict[str, Any] = {}
    if target.is_file():
        with open(target, "r", encoding="utf-8") as fp:
            try:
                data = json.load(fp)
            except json.JSONDecodeError as e:
                raise SchemaError(f"config is not valid JSON: {e.msg}", pointer="") from e
    elif path is not None:
        raise SchemaError(f"config file not found: {target}")

    try:
        settings = Settings.model_validate(data)
    except ValidationError as e:
        raise SchemaError(f"invalid config: {e.errors()[0]['msg']}", pointer=_pointer(e)) from e
    _SETTINGS_CACHE[key] = settings
    return settings
