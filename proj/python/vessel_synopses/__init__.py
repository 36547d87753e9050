"""Streaming AIS trajectory synopses and GA parameter tuning."""

from ._core import (
    ConfigError,
    DataError,
    AisRecord,
    CriticalPoint,
    GaHyperParams,
    Metrics,
    SynopsisConfig,
    VesselState,
    VesselTrack,
    bearing_deg,
    compress_track,
    evaluate_config,
    fitness,
    haversine_m,
    interpolate,
    load_csv,
    run_ga,
    __version__,
)

__all__ = [
    "ConfigError",
    "DataError",
    "AisRecord",
    "CriticalPoint",
    "GaHyperParams",
    "Metrics",
    "SynopsisConfig",
    "VesselState",
    "VesselTrack",
    "bearing_deg",
    "compress_track",
    "evaluate_config",
    "fitness",
    "haversine_m",
    "interpolate",
    "load_csv",
    "run_ga",
]
