from pydantic_settings import BaseSettings, SettingsConfigDict
from dotenv import load_dotenv

load_dotenv()

# Numerical tolerances shared by every module
HERMITIAN_TOL = 1e-10
PSD_TOL = 1e-9
RANK_TOL = 1e-12
NORM_TOL = 1e-10
PPT_TOL = 1e-9
COMPLETENESS_TOL = 1e-8
MAX_SIDE = 4096
MAX_SLOT_DIM = 8


class Settings(BaseSettings):
    SEED: int = 0
    RESTARTS: int = 16
    MAX_ITER: int = 200
    TOL: float = 1e-9
    TOP_K: int = 3
    MAX_WORKERS: int = 1
    LOG_LEVEL: str = "WARNING"
    RATE_LIMIT: str = "30/minute"

    model_config = SettingsConfigDict(
        env_file=".env",
        env_prefix="SQGAME_",
        extra="allow",  # This allows extra fields
    )


settings = Settings()
