from .dataset import (
    LabeledDataset,
    LabeledExample,
    load_dataset,
    read_dataset,
    serialize_dataset,
    split,
    split_indices,
)
from .featurize import HashingFeaturizer, fnv1a_64, hash_features, ngrams
from .naive_bayes import NaiveBayesOracle
from .synth import (
    PRESETS,
    SynthCorpus,
    SynthPreset,
    SynthSpec,
    get_preset,
    synth_generate,
    write_preset,
)

__all__ = [
    'PRESETS',
    'HashingFeaturizer',
    'LabeledDataset',
    'LabeledExample',
    'NaiveBayesOracle',
    'SynthCorpus',
    'SynthPreset',
    'SynthSpec',
    'fnv1a_64',
    'get_preset',
    'hash_features',
    'load_dataset',
    'ngrams',
    'read_dataset',
    'serialize_dataset',
    'split',
    'split_indices',
    'synth_generate',
    'write_preset',
]
