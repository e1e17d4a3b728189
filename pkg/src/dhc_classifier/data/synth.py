"""Synthetic hierarchical corpora with planted per-layer signal.

Every node of the tree owns a block of signal tokens. A document for a leaf
draws each token independently: with the layer-l weight from the block of the
leaf's layer-l ancestor, otherwise uniformly from the noise vocabulary.
"""
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Union

import numpy as np

from ..hierarchy import CategoryTree, balanced_tree, leaf_to_path, serialize_taxonomy
from ..nncore import Rng
from ..utils.errors import DataError
from ..utils.logging import setup_logging
from .dataset import split_indices

logger = setup_logging(__name__)

WEIGHT_TOLERANCE = 1e-9


def token(index: int) -> str:
    return f"w{index}"


class SynthSpec:
    """Generator settings.

    ``layer_weights[l]`` and ``block_sizes[l]`` describe the signal of layer
    ``l + 1``; for a two-layer tree they are the parent and leaf signals.
    Blocks are laid out consecutively in layer order unless ``signal_blocks``
    maps node ids to explicit token indices.
    """

    def __init__(
        self,
        tree: CategoryTree,
        vocab_size: int,
        tokens_per_doc: int,
        layer_weights: Sequence[float],
        block_sizes: Sequence[int],
        noise_weight: float,
        samples_per_leaf: int,
        seed: int = 0,
        signal_blocks: Optional[Dict[str, Sequence[int]]] = None,
    ):
        self.tree = tree
        self.vocab_size = vocab_size
        self.tokens_per_doc = tokens_per_doc
        self.layer_weights = [float(w) for w in layer_weights]
        self.block_sizes = [int(s) for s in block_sizes]
        self.noise_weight = float(noise_weight)
        self.samples_per_leaf = samples_per_leaf
        self.seed = seed
        self.signal_blocks = signal_blocks
        self.blocks: Dict[str, np.ndarray] = {}
        self.noise_tokens = np.zeros(0, dtype=np.int64)
        self._validate()

    def _validate(self) -> None:
        depth = self.tree.depth
        if len(self.layer_weights) != depth or len(self.block_sizes) != depth:
            raise DataError(f"Need one signal weight and block size per layer ({depth})")
        weights = self.layer_weights + [self.noise_weight]
        if any(w < 0.0 for w in weights):
            raise DataError(f"Weights must be non-negative, got {weights}")
        if abs(sum(weights) - 1.0) > WEIGHT_TOLERANCE:
            raise DataError(f"Weights must sum to 1, got {sum(weights)}")
        if self.tokens_per_doc < 1 or self.samples_per_leaf < 1:
            raise DataError("tokens_per_doc and samples_per_leaf must be >= 1")
        if any(s < 1 for s in self.block_sizes):
            raise DataError(f"Block sizes must be >= 1, got {self.block_sizes}")

        if self.signal_blocks is None:
            needed = sum(s * n for s, n in zip(self.block_sizes, self.tree.layer_sizes()))
            if needed > self.vocab_size:
                raise DataError(f"V too small: signal blocks need {needed} tokens, V = {self.vocab_size}")
            start = 0
            for layer in range(1, depth + 1):
                size = self.block_sizes[layer - 1]
                for node in self.tree.nodes(layer):
                    self.blocks[node] = np.arange(start, start + size)
                    start += size
        else:
            owner: Dict[int, str] = {}
            for layer in range(1, depth + 1):
                for node in self.tree.nodes(layer):
                    if node not in self.signal_blocks:
                        raise DataError(f"No signal block for node {node}")
                    block = np.asarray(sorted(set(int(t) for t in self.signal_blocks[node])), dtype=np.int64)
                    if block.size == 0:
                        raise DataError(f"Empty signal block for node {node}")
                    for t in block:
                        if not 0 <= t < self.vocab_size:
                            raise DataError(f"V too small: token {t} of node {node} outside vocabulary")
                        if t in owner:
                            raise DataError(f"Signal blocks of {owner[t]} and {node} overlap at token {t}")
                        owner[int(t)] = node
                    self.blocks[node] = block

        used = np.zeros(self.vocab_size, dtype=bool)
        for block in self.blocks.values():
            used[block] = True
        self.noise_tokens = np.flatnonzero(~used)
        if self.noise_weight > 0.0 and self.noise_tokens.size == 0:
            raise DataError("V too small: no tokens left for the noise vocabulary")


class SynthCorpus:
    """Generated taxonomy and dataset lines, both in their file formats."""

    def __init__(self, tree: CategoryTree, lines: List[str]):
        self.tree = tree
        self.lines = lines

    @property
    def taxonomy_text(self) -> str:
        return serialize_taxonomy(self.tree)

    @property
    def dataset_text(self) -> str:
        return "".join(f"{line}\n" for line in self.lines)

    def __len__(self) -> int:
        return len(self.lines)


def synth_generate(spec: SynthSpec) -> SynthCorpus:
    """Generate ``samples_per_leaf`` documents for every leaf, fully determined by the seed.

    Args:
        spec: Validated generator settings

    Returns:
        SynthCorpus: Tree plus ``leaf_id<TAB>text`` lines, grouped by leaf in layer order
    """
    rng = Rng(spec.seed)
    cumulative = np.cumsum(spec.layer_weights + [spec.noise_weight])
    cumulative[-1] = 1.0
    m = spec.tokens_per_doc
    lines = []
    for leaf in spec.tree.leaves:
        pools = [spec.blocks[node] for node in leaf_to_path(spec.tree, leaf)] + [spec.noise_tokens]
        for _ in range(spec.samples_per_leaf):
            components = np.searchsorted(cumulative, rng.random(m), side="right")
            picks = rng.random(m)
            words = []
            for comp, u in zip(components, picks):
                pool = pools[min(int(comp), len(pools) - 1)]
                words.append(token(int(pool[int(u * pool.size)])))
            lines.append(f"{leaf}\t{' '.join(words)}")
    logger.info(f"Generated {len(lines)} documents over {len(spec.tree.leaves)} leaves")
    return SynthCorpus(spec.tree, lines)


class SynthPreset:
    """A named, seeded synthetic benchmark with training settings that suit it."""

    def __init__(
        self,
        name: str,
        description: str,
        branching: Sequence[int],
        vocab_size: int,
        tokens_per_doc: int,
        layer_weights: Sequence[float],
        block_sizes: Sequence[int],
        noise_weight: float,
        samples_per_leaf: int,
        seed: int,
        test_fraction: float = 0.2,
        config_overrides: Optional[Dict[str, str]] = None,
    ):
        self.name = name
        self.description = description
        self.branching = list(branching)
        self.vocab_size = vocab_size
        self.tokens_per_doc = tokens_per_doc
        self.layer_weights = list(layer_weights)
        self.block_sizes = list(block_sizes)
        self.noise_weight = noise_weight
        self.samples_per_leaf = samples_per_leaf
        self.seed = seed
        self.test_fraction = test_fraction
        self.config_overrides = dict(config_overrides or {})

    def spec(self, seed: Optional[int] = None) -> SynthSpec:
        return SynthSpec(
            tree=balanced_tree(self.branching),
            vocab_size=self.vocab_size,
            tokens_per_doc=self.tokens_per_doc,
            layer_weights=self.layer_weights,
            block_sizes=self.block_sizes,
            noise_weight=self.noise_weight,
            samples_per_leaf=self.samples_per_leaf,
            seed=self.seed if seed is None else seed,
        )


_SMALL_NETWORK = {
    "input_dim": "1024",
    "ngram_order": "1",
    "base_hidden_dims": "64",
    "root_dim": "64",
    "layer_dims": "32",
    "batch_size": "32",
    "lr": "0.003",
}

SEPARABLE = SynthPreset(
    name="separable",
    description="4 x 3 tree, strong parent and leaf signal",
    branching=[4, 3],
    vocab_size=200,
    tokens_per_doc=20,
    layer_weights=[0.4, 0.3],
    block_sizes=[5, 5],
    noise_weight=0.3,
    samples_per_leaf=209,
    seed=7,
    config_overrides={**_SMALL_NETWORK, "epochs": "30"},
)

AMBIGUOUS = SynthPreset(
    name="ambiguous",
    description="4 x 3 tree, weak leaf signal that invites cross-branch confusions",
    branching=[4, 3],
    vocab_size=200,
    tokens_per_doc=20,
    layer_weights=[0.45, 0.10],
    block_sizes=[5, 5],
    noise_weight=0.45,
    samples_per_leaf=209,
    seed=11,
    config_overrides={**_SMALL_NETWORK, "epochs": "30"},
)

COARSE_FINE = SynthPreset(
    name="coarse-fine",
    description="20 coarse classes with 5 fine classes each",
    branching=[20, 5],
    vocab_size=1000,
    tokens_per_doc=30,
    layer_weights=[0.35, 0.3],
    block_sizes=[5, 3],
    noise_weight=0.35,
    samples_per_leaf=30,
    seed=13,
    config_overrides={**_SMALL_NETWORK, "input_dim": "2048", "epochs": "40"},
)

DEEP = SynthPreset(
    name="deep",
    description="Three-layer 3 x 3 x 3 tree",
    branching=[3, 3, 3],
    vocab_size=300,
    tokens_per_doc=24,
    layer_weights=[0.3, 0.25, 0.2],
    block_sizes=[4, 4, 4],
    noise_weight=0.25,
    samples_per_leaf=40,
    seed=17,
    config_overrides={**_SMALL_NETWORK, "epochs": "40"},
)

PRESETS: Dict[str, SynthPreset] = {
    preset.name: preset for preset in (SEPARABLE, AMBIGUOUS, COARSE_FINE, DEEP)
}


def get_preset(name: str) -> SynthPreset:
    if name not in PRESETS:
        raise DataError(f"Unknown preset {name!r}; choose from {', '.join(PRESETS)}")
    return PRESETS[name]


def write_preset(
    preset: SynthPreset, out_dir: Union[str, Path], seed: Optional[int] = None
) -> Dict[str, Path]:
    """Write taxonomy, full data, train/test split and a ready-to-run config.

    Returns:
        Dict[str, Path]: Written files keyed by role
    """
    out = Path(out_dir)
    seed = preset.seed if seed is None else seed
    corpus = synth_generate(preset.spec(seed))
    train_idx, test_idx = split_indices(len(corpus), preset.test_fraction, seed)

    settings = {
        "taxonomy": "taxonomy.tsv",
        "train_data": "train.tsv",
        "test_data": "test.tsv",
        "seed": str(seed),
        **preset.config_overrides,
    }
    files = {
        "taxonomy": (out / "taxonomy.tsv", corpus.taxonomy_text),
        "data": (out / "data.tsv", corpus.dataset_text),
        "train": (out / "train.tsv", "".join(f"{corpus.lines[i]}\n" for i in train_idx)),
        "test": (out / "test.tsv", "".join(f"{corpus.lines[i]}\n" for i in test_idx)),
        "config": (
            out / "dhc.conf",
            f"# {preset.name}: {preset.description}\n"
            + "".join(f"{key} = {value}\n" for key, value in settings.items()),
        ),
    }
    try:
        out.mkdir(parents=True, exist_ok=True)
        for path, content in files.values():
            path.write_text(content, encoding="utf-8")
    except OSError as e:
        logger.error(f"Writing preset {preset.name} failed: {str(e)}")
        raise DataError(f"Writing preset {preset.name} failed: {str(e)}")

    logger.info(
        f"Wrote preset {preset.name} to {out} "
        f"({len(train_idx)} train / {len(test_idx)} test, seed {seed})"
    )
    return {role: path for role, (path, _) in files.items()}
