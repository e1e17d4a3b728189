from .hierarchical import (
    PROB_FLOOR,
    Indicators,
    LossReport,
    batch_indicators,
    dependence_loss,
    hierarchical_loss,
    indicators,
    layer_loss,
    predicted_class,
    total_loss,
)

__all__ = [
    'PROB_FLOOR',
    'Indicators',
    'LossReport',
    'batch_indicators',
    'dependence_loss',
    'hierarchical_loss',
    'indicators',
    'layer_loss',
    'predicted_class',
    'total_loss',
]
