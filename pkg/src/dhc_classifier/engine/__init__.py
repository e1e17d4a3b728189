from .ablation import VARIANTS, run_ablation
from .checkpoint import (
    FORMAT_VERSION,
    MAGIC,
    Checkpoint,
    load_checkpoint,
    parameter_bytes,
    save_checkpoint,
)
from .evaluation import EvaluationManager, format_prediction, score_dataset
from .gradcheck import check_case, random_case, random_tree, run_gradcheck
from .training import EpochStats, TrainingManager, train

__all__ = [
    'FORMAT_VERSION',
    'MAGIC',
    'VARIANTS',
    'Checkpoint',
    'EpochStats',
    'EvaluationManager',
    'TrainingManager',
    'check_case',
    'format_prediction',
    'load_checkpoint',
    'parameter_bytes',
    'random_case',
    'random_tree',
    'run_ablation',
    'run_gradcheck',
    'save_checkpoint',
    'score_dataset',
    'train',
]
