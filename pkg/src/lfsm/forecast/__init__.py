from .predictor import ForecastBatch, ForecastResult, InnovationVector, extract_innovations, forecast_path, predict_next

__all__ = [
    "ForecastBatch",
    "ForecastResult",
    "InnovationVector",
    "extract_innovations",
    "forecast_path",
    "predict_next",
]
