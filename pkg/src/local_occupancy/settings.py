from pathlib import Path
from typing import Optional

from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    model_config = SettingsConfigDict(env_prefix="LOCC_", env_file=".env", case_sensitive=False)

    # Enumeration caps
    POLY_VERTEX_CAP: int = 40
    HALL_RATIO_CAP: int = 24
    INDUCED_DEGREE_CAP: int = 20
    STRONG_EDGE_CAP: int = 25
    MEMO_CAP: int = 2_000_000  # partition-function memo entries per model

    # Verification
    VERIFY_TOLERANCE: float = 1e-9
    EXACT_FALLBACK_BAND: float = 1e-6

    # Sampling
    EXACT_SAMPLE_CAP: int = 48
    GLAUBER_SWEEPS: int = 200

    # Run defaults
    DEFAULT_LAMBDA: float = 1.0
    DEFAULT_ROUNDS: int = 1000
    DEFAULT_SEED: int = 0
    HAXELL_FACTOR: float = 0.125
    RANDOM_REGULAR_MAX_TRIES: int = 10_000
    SPLIT_MAX_TRIES: int = 200
    FRACTIONAL_STEPS_PER_UNIT: int = 64

    # Parameter search
    SEARCH_GAMMA_MIN: float = 1e-6
    SEARCH_GAMMA_MAX: float = 1e6
    SEARCH_GRID_POINTS: int = 241
    CLIQUE_Y0: float = 2.0

    # Logging
    LOG_LEVEL: str = "WARNING"
    LOG_FORMAT: str = "json"

    # OpenTelemetry
    OTEL_SERVICE_NAME: str = "local-occupancy"
    OTEL_EXPORTER_OTLP_ENDPOINT: Optional[str] = None
    ENVIRONMENT: str = "development"
    APP_VERSION: str = "0.1.0"


# Singleton
SETTINGS = Settings()

# Paths
BASE_DIR = Path(__file__).parent
CONFIG_DIR = BASE_DIR / "config"
SWEEPS_DIR = CONFIG_DIR / "sweeps"
