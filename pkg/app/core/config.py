"""Configuration settings for the polywitt toolkit."""
from typing import List, Optional
from pydantic_settings import BaseSettings, SettingsConfigDict
from pydantic import field_validator

class Settings(BaseSettings):
    """Application settings with environment variable support."""

    model_config = SettingsConfigDict(env_file=".env", env_prefix="POLYWITT_")

    # Application
    app_name: str = "polywitt"
    app_version: str = "1.0.0"
    debug: bool = False
    log_level: str = "WARNING"
    enable_debug_outputs: bool = False
    debug_dir: str = "debug_outputs"

    # Enumeration limits
    enumeration_cap: int = 8

    # Rational fitting
    holdout_window: int = 5
    fit_denominator_degree: Optional[int] = None

    # Command defaults
    default_format: str = "json"
    default_seed: int = 20240229
    char_degree: int = 6
    hilbert_degree: int = 15
    scenario_names: List[str] = [
        "kaehler", "ideal-chain", "adjoint-witness", "wedge2",
        "generation", "end-ring", "unit-iso",
    ]

    @field_validator("scenario_names", mode="before")
    @classmethod
    def parse_scenario_names(cls, v):
        if isinstance(v, str):
            return [name.strip() for name in v.split(",") if name.strip()]
        return v

    @field_validator("default_format", mode="before")
    @classmethod
    def parse_default_format(cls, v):
        if isinstance(v, str):
            v = v.strip().lower()
            if v not in ("json", "csv", "table"):
                raise ValueError("default_format must be json, csv or table")
        return v

    @field_validator("enumeration_cap", "holdout_window")
    @classmethod
    def positive(cls, v):
        if v < 1:
            raise ValueError("must be positive")
        return v


settings = Settings()
