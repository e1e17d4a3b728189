from .network import (
    DhcModel,
    ForwardTrace,
    build_model,
    fnn_forward,
    heads_forward,
    hen_forward,
    model_backward,
    model_forward,
)

__all__ = [
    'DhcModel',
    'ForwardTrace',
    'build_model',
    'fnn_forward',
    'heads_forward',
    'hen_forward',
    'model_backward',
    'model_forward',
]
