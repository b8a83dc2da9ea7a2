# Configuración global del motor de diseño muestral
import os
from dotenv import load_dotenv

load_dotenv()

class Settings:
    # Aplicación
    APP_NAME: str = "Diseño Muestral para Auditorías"
    APP_VERSION: str = "1.0.0"
    DEBUG: bool = os.getenv("DEBUG", "False").lower() == "true"
    ENVIRONMENT: str = os.getenv("ENVIRONMENT", "development")
    LOG_LEVEL: str = os.getenv("LOG_LEVEL", "WARNING")

    # Planificación
    DEFAULT_CONFIDENCE: float = float(os.getenv("DEFAULT_CONFIDENCE", "0.90"))
    MIN_SAMPLE_SIZE: int = 2
    TIE_REL_TOL: float = 1e-12
    VARIANCE_REL_SLACK: float = float(os.getenv("VARIANCE_REL_SLACK", "1e-9"))

    # Paralelismo y Monte Carlo
    DEFAULT_WORKERS: int = int(os.getenv("DEFAULT_WORKERS", str(os.cpu_count() or 1)))
    MC_BLOCK_SIZE: int = int(os.getenv("MC_BLOCK_SIZE", "500"))
    COVERAGE_SKEW_FACTOR: float = 25.0

    # Oráculos exhaustivos
    ORACLE_REL_TOL: float = float(os.getenv("ORACLE_REL_TOL", "1e-9"))
    ORACLE_MAX_VECTORS: int = 4096
    EXHAUSTIVE_MAX_N: int = 20
    MIN_GROUP_SIZE_NORMAL: int = int(os.getenv("MIN_GROUP_SIZE_NORMAL", "30"))

    # Estratificación
    MAX_BREAKPOINT_CANDIDATES: int = int(os.getenv("MAX_BREAKPOINT_CANDIDATES", "200"))
    DP_GRID_SIZE: int = int(os.getenv("DP_GRID_SIZE", "100"))

settings = Settings()
