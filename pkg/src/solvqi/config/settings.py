import json
import os
from fractions import Fraction
from functools import lru_cache
from pathlib import Path
from typing import List

from dotenv import load_dotenv
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from solvqi.exceptions import ConfigError

# Load environment variables from .env file
load_dotenv()

PACKAGE_DIR = Path(__file__).resolve().parent.parent

# Extended catalog directory (only environment variable the tool reads)
EXTENDED_CATALOG_DIR = os.getenv("SOLVQI_EXTENDED_CATALOG_DIR", str(PACKAGE_DIR / "structure" / "extended"))

# Engine tunables
ENGINE_CONFIG_PATH = str(Path(__file__).resolve().parent / "engine_config.json")


def _rationals(values: List[str]) -> List[Fraction]:
    parsed = []
    for value in values:
        if "." in str(value):
            raise ValueError(f"{value!r} is a decimal, write it as p/q")
        parsed.append(Fraction(str(value)))
    return parsed


class ReportSettings(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    max_workers: int = Field(default=4, ge=1, le=64)
    g5_19_betas: List[Fraction] = Field(default_factory=lambda: _rationals(["1/3", "1/2", "2/3", "3/4", "-1/2"]))
    family_g5_19_betas: List[Fraction] = Field(default_factory=lambda: _rationals(["1/3", "1/2", "2/3", "3/4"]))

    @field_validator("g5_19_betas", "family_g5_19_betas", mode="before")
    @classmethod
    def parse_rationals(cls, values):
        if values and all(isinstance(v, Fraction) for v in values):
            return values
        betas = _rationals(values)
        if any(b == 0 for b in betas):
            raise ValueError("beta = 0 is outside the g5_19 family")
        return betas


class TriangularizeSettings(BaseModel):
    max_eigen_combinations: int = Field(default=20000, ge=1)


class EngineConfig(BaseModel):
    reports: ReportSettings = Field(default_factory=ReportSettings)
    triangularize: TriangularizeSettings = Field(default_factory=TriangularizeSettings)


def load_engine_config(path: str = None) -> EngineConfig:
    path = path or ENGINE_CONFIG_PATH
    try:
        with open(path, "r", encoding="utf-8") as handle:
            data = json.load(handle)
        return EngineConfig.model_validate(data)
    except FileNotFoundError as e:
        raise ConfigError(f"engine configuration not found at {path}") from e
    except (json.JSONDecodeError, ValidationError) as e:
        raise ConfigError(f"malformed engine configuration {path}: {e}") from e


@lru_cache(maxsize=1)
def engine_config() -> EngineConfig:
    return load_engine_config()
