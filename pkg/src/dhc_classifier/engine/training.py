"""The training loop."""
import sys
from typing import List, Optional, Tuple

import numpy as np
from tqdm import tqdm

from ..data import HashingFeaturizer, LabeledDataset, read_dataset, split
from ..hierarchy import CategoryTree, read_taxonomy
from ..loss import LossReport, hierarchical_loss
from ..model import DhcModel, build_model, model_backward, model_forward
from ..models.config import TrainConfig
from ..models.reports import EpochRecord, TrainingLog
from ..nncore import Optimizer, Rng
from ..utils.errors import ConfigurationError, NumericError, ShapeError
from ..utils.logging import setup_logging
from .checkpoint import Checkpoint, save_checkpoint
from .evaluation import score_dataset

logger = setup_logging(__name__)


def _non_finite_term(report: LossReport) -> Optional[str]:
    for l in range(report.lloss.shape[1]):
        if not np.all(np.isfinite(report.lloss[:, l])):
            return f"lloss_{l + 1}"
    for l in range(report.dloss.shape[1]):
        if not np.all(np.isfinite(report.dloss[:, l])):
            return f"dloss_{l + 2}"
    if not np.isfinite(report.J):
        return "J"
    return None


class EpochStats:
    """Running sums over the minibatches of one epoch."""

    def __init__(self, depth: int):
        self.count = 0
        self.J = 0.0
        self.lloss = np.zeros(depth)
        self.dloss = np.zeros(max(depth - 1, 0))
        self.correct = np.zeros(depth)
        self.consistent = 0
        self.violations = 0
        self.pairs = 0

    def add(self, report: LossReport, gold: np.ndarray) -> None:
        batch = gold.shape[0]
        self.count += batch
        self.J += float(np.sum(report.per_sample_J))
        self.lloss += report.lloss.sum(axis=0)
        self.dloss += report.dloss.sum(axis=0)
        self.correct += (report.preds == gold).sum(axis=0)
        self.consistent += int(np.sum(~np.any(report.violations.astype(bool), axis=1)))
        self.violations += int(report.violations.sum())
        self.pairs += report.violations.size

    def record(self, epoch: int, test_accuracy: Optional[List[float]]) -> EpochRecord:
        n = max(self.count, 1)
        return EpochRecord(
            epoch=epoch,
            mean_J=self.J / n,
            mean_lloss=(self.lloss / n).tolist(),
            mean_dloss=(self.dloss / n).tolist(),
            train_accuracy=(self.correct / n).tolist(),
            raw_consistency_rate=self.consistent / n,
            violation_rate=self.violations / self.pairs if self.pairs else 0.0,
            test_accuracy=test_accuracy,
        )


class TrainingManager:
    """Owns the model, data and optimizer of one training run."""

    def __init__(
        self,
        config: TrainConfig,
        tree: Optional[CategoryTree] = None,
        train_set: Optional[LabeledDataset] = None,
        test_set: Optional[LabeledDataset] = None,
    ):
        self.config = config
        self.tree = tree
        self.train_set = train_set
        self.test_set = test_set
        self.model: Optional[DhcModel] = None
        self.log = TrainingLog()

    def load_data(self) -> Tuple[CategoryTree, LabeledDataset, Optional[LabeledDataset]]:
        """Load the taxonomy and datasets named by the configuration (once)."""
        config = self.config
        if self.tree is None:
            if not config.taxonomy:
                raise ConfigurationError("No taxonomy configured")
            self.tree = read_taxonomy(config.taxonomy)
        if self.train_set is None:
            if not config.train_data:
                raise ConfigurationError("No train_data configured")
            featurizer = HashingFeaturizer.from_config(config.featurizer)
            data = read_dataset(config.train_data, self.tree, featurizer)
            if config.test_data:
                self.train_set = data
                self.test_set = read_dataset(config.test_data, self.tree, featurizer)
            else:
                self.train_set, self.test_set = split(data, config.test_fraction, config.split_seed)
                logger.info(
                    f"Split {len(data)} examples into {len(self.train_set)} train / "
                    f"{len(self.test_set)} test"
                )
        return self.tree, self.train_set, self.test_set

    def run(self) -> Tuple[Checkpoint, TrainingLog]:
        """Train for the configured number of epochs.

        Returns:
            (Checkpoint, TrainingLog): Final model and per-epoch records
        """
        config = self.config
        tree, train_set, test_set = self.load_data()
        if len(train_set) == 0:
            raise ConfigurationError("Training set is empty")
        if train_set.input_dim != config.network.input_dim:
            raise ShapeError(
                f"Dataset input_dim {train_set.input_dim} != network input_dim {config.network.input_dim}"
            )

        self.model = build_model(tree, config.network, Rng(config.seed))
        self.log = TrainingLog()
        optimizer = Optimizer(config.optim)
        X = train_set.features()
        gold = train_set.gold_indices()

        progress = tqdm(
            range(1, config.epochs + 1),
            desc="Training",
            unit="epoch",
            file=sys.stderr,
            disable=not config.progress,
        )
        for epoch in progress:
            record = self._run_epoch(epoch, X, gold, optimizer, test_set)
            self.log.records.append(record)
            progress.set_postfix(J=f"{record.mean_J:.4f}", consistency=f"{record.raw_consistency_rate:.3f}")
            logger.info(
                f"Epoch {epoch}: J {record.mean_J:.5f}, "
                f"lloss {[round(v, 4) for v in record.mean_lloss]}, "
                f"raw consistency {record.raw_consistency_rate:.4f}"
                + (f", test accuracy {[round(a, 4) for a in record.test_accuracy]}"
                   if record.test_accuracy else "")
            )

        checkpoint = Checkpoint(self.model, config)
        if config.checkpoint:
            save_checkpoint(checkpoint, config.checkpoint)
        return checkpoint, self.log

    def _run_epoch(
        self,
        epoch: int,
        X: np.ndarray,
        gold: np.ndarray,
        optimizer: Optimizer,
        test_set: Optional[LabeledDataset],
    ) -> EpochRecord:
        config = self.config
        model = self.model
        order = Rng(config.seed + epoch).permutation(X.shape[0])
        stats = EpochStats(model.depth)

        for batch_index, start in enumerate(range(0, X.shape[0], config.batch_size)):
            idx = order[start:start + config.batch_size]
            batch_gold = gold[idx]
            try:
                trace = model_forward(model, X[idx])
            except NumericError as e:
                logger.error(f"Forward pass failed at epoch {epoch}, batch {batch_index}: {str(e)}")
                raise NumericError(f"Forward pass failed at epoch {epoch}, batch {batch_index}: {str(e)}")
            report = hierarchical_loss(trace.dists, batch_gold, model.tree, config.loss)
            term = _non_finite_term(report)
            if term is not None:
                logger.error(f"Non-finite {term} at epoch {epoch}, batch {batch_index}")
                raise NumericError(f"Non-finite loss term {term} at epoch {epoch}, batch {batch_index}")
            logger.debug(f"Epoch {epoch} batch {batch_index}: J {report.J:.6f}")

            model.params.zero_grad()
            model_backward(model, trace, logit_grads=report.logit_grads)
            optimizer.step(model.params)
            stats.add(report, batch_gold)

        test_accuracy = None
        if test_set is not None and len(test_set) and config.eval_every and epoch % config.eval_every == 0:
            test_accuracy = score_dataset(model, test_set, config.decoder, config.beam_width).layer_accuracy
        return stats.record(epoch, test_accuracy)


def train(
    config: TrainConfig,
    tree: Optional[CategoryTree] = None,
    train_set: Optional[LabeledDataset] = None,
    test_set: Optional[LabeledDataset] = None,
) -> Tuple[Checkpoint, TrainingLog]:
    """Train a model from a configuration (and optionally preloaded data)."""
    return TrainingManager(config, tree, train_set, test_set).run()
