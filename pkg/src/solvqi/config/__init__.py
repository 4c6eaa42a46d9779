from solvqi.config.settings import (
    ENGINE_CONFIG_PATH,
    EXTENDED_CATALOG_DIR,
    EngineConfig,
    ReportSettings,
    TriangularizeSettings,
    engine_config,
    load_engine_config,
)

__all__ = [
    "ENGINE_CONFIG_PATH",
    "EXTENDED_CATALOG_DIR",
    "EngineConfig",
    "ReportSettings",
    "TriangularizeSettings",
    "engine_config",
    "load_engine_config",
]
