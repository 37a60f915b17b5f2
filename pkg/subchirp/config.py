"""Application configuration"""

import os

from pydantic_settings import BaseSettings


class Settings(BaseSettings):
    """Application settings"""

    # General
    APP_NAME: str = "subchirp"
    DEBUG: bool = False
    LOG_LEVEL: str = "INFO"

    # Parallelism
    BSSC_THREADS: int = 0  # 0 = one worker per CPU

    # Numerics
    ZERO_TOLERANCE: float = 1e-9  # relative to the signal energy
    MAX_DENSE_M: int = 5
    MAX_EXHAUSTIVE_CODEWORDS: int = 2 ** 18
    RANDOM_CHUNK_SAMPLES: int = 2 ** 20  # complex samples per generated block

    # Simulation
    DEFAULT_SEED: int = 2024
    REPORT_TIMING: bool = False

    # Plotting
    SVG_WIDTH: int = 800
    SVG_HEIGHT: int = 600

    class Config:
        env_file = ".env"
        case_sensitive = True

    def worker_count(self) -> int:
        """Number of simulator workers after applying the BSSC_THREADS cap"""
        if self.BSSC_THREADS > 0:
            return self.BSSC_THREADS
        return os.cpu_count() or 1


settings = Settings()
