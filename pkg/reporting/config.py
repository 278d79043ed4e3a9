from functools import lru_cache
from enum import Enum
from pathlib import Path

from pydantic_settings import BaseSettings, SettingsConfigDict

DEFAULT_WITNESS_CONFIG = Path(__file__).resolve().parent.parent / "data" / "witnesses.cfg"


class OutputFormat(str, Enum):
  """Report serialization"""
  JSON = "json"
  MD = "md"


class Settings(BaseSettings):
  # Brute-force caps
  closure_cap: int = 10 ** 6
  subgroup_search_cap: int = 10 ** 5

  # Witness data for sporadic, unitary and remaining Lie-type groups
  witness_config: str = str(DEFAULT_WITNESS_CONFIG)

  # Recompute involution-class and quaternion facts when building or replaying certificates
  brute_force_facts: bool = True

  # Borel solver enumeration limit
  solution_limit: int = 10 ** 4

  # Output
  log_level: str = "INFO"
  output_format: OutputFormat = OutputFormat.JSON
  emit_timing: bool = False

  model_config = SettingsConfigDict(env_file=".env", env_file_encoding="utf-8", env_prefix="OBSTRUCTION_")


@lru_cache
def get_settings() -> Settings:
  return Settings()
