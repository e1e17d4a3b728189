from .gradcheck import finite_difference_grad, relative_error
from .ops import (
    DenseTrace,
    Matrix,
    as_matrix,
    concat_rows,
    dense_backward,
    dense_forward,
    relu,
    relu_backward,
    softmax_backward,
    softmax_rows,
    split_columns,
)
from .optim import Optimizer, adam_step, sgd_step
from .params import ParameterSet, Rng, glorot_uniform

__all__ = [
    'DenseTrace',
    'Matrix',
    'Optimizer',
    'ParameterSet',
    'Rng',
    'adam_step',
    'as_matrix',
    'concat_rows',
    'dense_backward',
    'dense_forward',
    'finite_difference_grad',
    'glorot_uniform',
    'relative_error',
    'relu',
    'relu_backward',
    'sgd_step',
    'softmax_backward',
    'softmax_rows',
    'split_columns',
]
