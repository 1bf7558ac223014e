"""Configuration settings for the pfister-descent toolkit."""

import os

from dotenv import load_dotenv

load_dotenv()


class Settings:
    """Application settings."""

    APP_NAME = "pfister-descent"
    APP_VERSION = "0.1.0"
    SCHEMA_VERSION = 1

    # Search budget defaults
    SEED: int = 0
    BUDGET_DEGREE: int = 2
    BUDGET_TRIALS: int = 2000
    EXHAUSTIVE_LIMIT: int = 1 << 24

    # Residue certificate search
    RESIDUE_NODE_LIMIT = 4000

    # Descent generator bounds
    MAX_QUAD_GENERATORS = 5

    LOG_LEVEL: str = "WARNING"

    def __init__(self):
        """Initialize settings from environment variables."""
        self.SEED = int(os.getenv("PFISTER_SEED", "0"))
        self.BUDGET_DEGREE = int(os.getenv("PFISTER_BUDGET_DEGREE", "2"))
        self.BUDGET_TRIALS = int(os.getenv("PFISTER_BUDGET_TRIALS", "2000"))
        self.EXHAUSTIVE_LIMIT = int(os.getenv("PFISTER_EXHAUSTIVE_LIMIT", str(1 << 24)))
        self.LOG_LEVEL = os.getenv("PFISTER_LOG_LEVEL", "WARNING").upper()


settings = Settings()
