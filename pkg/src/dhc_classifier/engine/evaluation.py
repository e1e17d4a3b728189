"""Evaluation and prediction over a trained model."""
import asyncio
from typing import List, Optional, Sequence

import numpy as np

from ..data import HashingFeaturizer, LabeledDataset
from ..inference import decode_batch
from ..metrics import evaluation_report
from ..model import DhcModel
from ..models.config import DecoderType
from ..models.reports import DecodedPath, EvalReport
from ..utils.errors import ShapeError
from ..utils.logging import setup_logging
from .checkpoint import Checkpoint

logger = setup_logging(__name__)


def _check_input_dim(model: DhcModel, width: int) -> None:
    if width != model.input_dim:
        raise ShapeError(f"Dataset input_dim {width} != model input_dim {model.input_dim}")


def score_dataset(
    model: DhcModel,
    dataset: LabeledDataset,
    decoder: DecoderType = DecoderType.GREEDY,
    beam_width: int = 3,
) -> EvalReport:
    """Decode every example in the calling thread and compute all measures."""
    _check_input_dim(model, dataset.input_dim)
    dists = model.predict_proba(dataset.features())
    decoded = decode_batch(dists, model.tree, decoder, beam_width)
    return _report(model, dataset, dists, decoded, decoder)


def _report(
    model: DhcModel,
    dataset: LabeledDataset,
    dists: List[np.ndarray],
    decoded: Sequence[DecodedPath],
    decoder: DecoderType,
) -> EvalReport:
    raw = np.stack([np.argmax(d, axis=1) for d in dists], axis=1)
    preds = np.array([p.indices for p in decoded], dtype=np.int64)
    return evaluation_report(
        preds, dataset.gold_indices(), model.tree, raw_preds=raw, decoder=DecoderType(decoder).value
    )


def format_prediction(path: DecodedPath, names: dict) -> str:
    """TSV row: one display label per layer, then the joint log-probability score."""
    return "\t".join([*path.labels(names), f"{path.score:.6f}"])


class EvaluationManager:
    """Runs evaluation and prediction against a read-only checkpoint.

    Decoding fans out over ``workers`` threads in contiguous chunks; results
    are gathered back in input order.
    """

    def __init__(self, checkpoint: Checkpoint, workers: Optional[int] = None):
        self.checkpoint = checkpoint
        self.model = checkpoint.model
        self.workers = max(1, workers or checkpoint.config.workers)
        self.featurizer = HashingFeaturizer.from_config(checkpoint.config.featurizer)

    def _options(self, decoder: Optional[DecoderType], beam_width: Optional[int]):
        config = self.checkpoint.config
        return (
            DecoderType(decoder) if decoder is not None else config.decoder,
            beam_width if beam_width is not None else config.beam_width,
        )

    async def _decode(
        self, dists: List[np.ndarray], decoder: DecoderType, beam_width: int
    ) -> List[DecodedPath]:
        count = dists[0].shape[0]
        if count == 0:
            return []
        bounds = np.linspace(0, count, min(self.workers, count) + 1).astype(int)
        chunks = await asyncio.gather(*[
            asyncio.to_thread(
                decode_batch, dists, self.model.tree, decoder, beam_width, int(start), int(stop)
            )
            for start, stop in zip(bounds[:-1], bounds[1:])
        ])
        return [path for chunk in chunks for path in chunk]

    async def evaluate(
        self,
        dataset: LabeledDataset,
        decoder: Optional[DecoderType] = None,
        beam_width: Optional[int] = None,
    ) -> EvalReport:
        """Decode a labeled dataset and compute every measure.

        Args:
            dataset: Examples to score
            decoder: Decoder override (defaults to the checkpoint's configuration)
            beam_width: Beam width override

        Returns:
            EvalReport: Decoded and raw accuracy and consistency
        """
        decoder, beam_width = self._options(decoder, beam_width)
        _check_input_dim(self.model, dataset.input_dim)
        dists = self.model.predict_proba(dataset.features())
        decoded = await self._decode(dists, decoder, beam_width)
        report = _report(self.model, dataset, dists, decoded, decoder)
        logger.info(
            f"Evaluated {report.sample_count} examples with {decoder.value}: "
            f"layer accuracy {[round(a, 4) for a in report.layer_accuracy]}, "
            f"path accuracy {report.path_accuracy:.4f}, raw consistency {report.raw_consistency_rate:.4f}"
        )
        return report

    async def predict(
        self,
        texts: Sequence[str],
        decoder: Optional[DecoderType] = None,
        beam_width: Optional[int] = None,
    ) -> List[DecodedPath]:
        """One decoded path per input document, in input order."""
        decoder, beam_width = self._options(decoder, beam_width)
        if not texts:
            return []
        dists = self.model.predict_proba(self.featurizer.transform(texts))
        return await self._decode(dists, decoder, beam_width)

    async def predict_lines(
        self,
        texts: Sequence[str],
        decoder: Optional[DecoderType] = None,
        beam_width: Optional[int] = None,
    ) -> List[str]:
        paths = await self.predict(texts, decoder, beam_width)
        return [format_prediction(path, self.model.tree.name_map) for path in paths]
