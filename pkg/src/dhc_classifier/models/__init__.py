from .config import (
    DecoderType,
    FeaturizerConfig,
    LossConfig,
    ModelConfig,
    OptimizerConfig,
    OptimizerType,
    PlossMode,
    ShareMode,
    TrainConfig,
)
from .reports import (
    AblationReport,
    DecodedPath,
    EpochRecord,
    EvalReport,
    GradcheckReport,
    TrainingLog,
    VariantResult,
)

__all__ = [
    'AblationReport',
    'DecodedPath',
    'DecoderType',
    'EpochRecord',
    'EvalReport',
    'FeaturizerConfig',
    'GradcheckReport',
    'LossConfig',
    'ModelConfig',
    'OptimizerConfig',
    'OptimizerType',
    'PlossMode',
    'ShareMode',
    'TrainConfig',
    'TrainingLog',
    'VariantResult',
]
