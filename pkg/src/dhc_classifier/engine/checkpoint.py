"""Self-describing binary checkpoints.

Layout: ``DHC1`` magic, one version byte, a UTF-8 header of tab-separated
records ended by a blank line, then every parameter as little-endian float64
in manifest order.
"""
from pathlib import Path
from typing import Dict, List, Optional, Tuple, Union

import numpy as np
from pydantic import ValidationError

from ..hierarchy import CategoryTree, load_taxonomy, serialize_taxonomy
from ..model import DhcModel, build_model
from ..models.config import TrainConfig
from ..nncore import ParameterSet, Rng
from ..utils.errors import CheckpointError, DHCError
from ..utils.logging import setup_logging

logger = setup_logging(__name__)

MAGIC = b"DHC1"
FORMAT_VERSION = 1
HEADER_END = b"\n\n"
FLOAT = np.dtype("<f8")


class Checkpoint:
    """A trained model together with the tree and configuration it was built from."""

    def __init__(self, model: DhcModel, config: TrainConfig, version: int = FORMAT_VERSION):
        self.model = model
        self.config = config
        self.version = version

    @property
    def tree(self) -> CategoryTree:
        return self.model.tree

    @property
    def step(self) -> int:
        return self.model.params.step

    def to_bytes(self) -> bytes:
        params = self.model.params
        header: List[str] = [
            f"step\t{params.step}",
            f"taxonomy_sha256\t{self.tree.fingerprint()}",
        ]
        header += [f"taxonomy\t{line}" for line in serialize_taxonomy(self.tree).splitlines()]
        header.append(f"config\t{self.config.model_dump_json()}")
        offset = 0
        for name in params.names():
            rows, cols = params[name].shape
            header.append(f"param\t{name}\t{rows}\t{cols}\t{offset}")
            offset += rows * cols * FLOAT.itemsize
        payload = b"".join(
            np.ascontiguousarray(params[name], dtype=FLOAT).tobytes() for name in params.names()
        )
        return (
            MAGIC + bytes([self.version]) + "\n".join(header).encode("utf-8") + HEADER_END + payload
        )

    @classmethod
    def from_bytes(cls, data: bytes, taxonomy: Optional[CategoryTree] = None) -> "Checkpoint":
        """Decode checkpoint bytes.

        Args:
            data: Raw checkpoint content
            taxonomy: Tree the checkpoint must have been trained on, if known

        Returns:
            Checkpoint: Restored model and configuration
        """
        if len(data) < len(MAGIC) + 1 or data[:len(MAGIC)] != MAGIC:
            raise CheckpointError("Not a DHC checkpoint: version mismatch (bad magic bytes)")
        version = data[len(MAGIC)]
        if version != FORMAT_VERSION:
            raise CheckpointError(f"Checkpoint version {version} != supported {FORMAT_VERSION}")
        body = data[len(MAGIC) + 1:]
        end = body.find(HEADER_END)
        if end < 0:
            raise CheckpointError("Truncated checkpoint: header not terminated")
        payload = body[end + len(HEADER_END):]

        try:
            records = [line.split("\t") for line in body[:end].decode("utf-8").split("\n")]
        except UnicodeDecodeError as e:
            raise CheckpointError(f"Corrupt checkpoint header: {str(e)}")

        step = 0
        fingerprint = ""
        taxonomy_lines: List[str] = []
        config_json = ""
        manifest: List[Tuple[str, int, int, int]] = []
        try:
            for record in records:
                kind = record[0]
                if kind == "step":
                    step = int(record[1])
                elif kind == "taxonomy_sha256":
                    fingerprint = record[1]
                elif kind == "taxonomy":
                    taxonomy_lines.append("\t".join(record[1:]))
                elif kind == "config":
                    config_json = "\t".join(record[1:])
                elif kind == "param":
                    manifest.append((record[1], int(record[2]), int(record[3]), int(record[4])))
                else:
                    raise CheckpointError(f"Unknown header record {kind!r}")
            tree = load_taxonomy("\n".join(taxonomy_lines))
            config = TrainConfig.model_validate_json(config_json)
        except CheckpointError:
            raise
        except (IndexError, ValueError, ValidationError, DHCError) as e:
            raise CheckpointError(f"Corrupt checkpoint header: {str(e)}")

        if tree.fingerprint() != fingerprint:
            raise CheckpointError("Checkpoint taxonomy does not match its recorded hash")
        if taxonomy is not None and taxonomy.fingerprint() != fingerprint:
            raise CheckpointError(
                f"Taxonomy hash mismatch: checkpoint {fingerprint[:12]}, "
                f"supplied {taxonomy.fingerprint()[:12]}"
            )

        # A freshly built model fixes the expected names and shapes
        expected = build_model(tree, config.network, Rng(0)).params
        expected_manifest = [(n, *expected[n].shape) for n in expected.names()]
        if [(n, r, c) for n, r, c, _ in manifest] != expected_manifest:
            raise CheckpointError("Parameter manifest does not match the configured network")

        params = ParameterSet()
        for name, rows, cols, offset in manifest:
            size = rows * cols * FLOAT.itemsize
            chunk = payload[offset:offset + size]
            if len(chunk) != size:
                raise CheckpointError(f"Truncated checkpoint: parameter {name} is incomplete")
            params.add(name, np.frombuffer(chunk, dtype=FLOAT).reshape(rows, cols))
        total = sum(r * c for _, r, c, _ in manifest) * FLOAT.itemsize
        if len(payload) != total:
            raise CheckpointError(f"Checkpoint payload has {len(payload)} bytes, expected {total}")
        params.step = step
        return cls(DhcModel(tree, config.network, params), config, version)


def save_checkpoint(checkpoint: Checkpoint, path: Union[str, Path]) -> Path:
    """Write a checkpoint file."""
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_bytes(checkpoint.to_bytes())
    except OSError as e:
        logger.error(f"Checkpoint save failed: {str(e)}")
        raise CheckpointError(f"Checkpoint save failed: {str(e)}")
    logger.info(f"Saved checkpoint at step {checkpoint.step} to {path}")
    return path


def load_checkpoint(
    path: Union[str, Path], taxonomy: Optional[CategoryTree] = None
) -> Checkpoint:
    """Read a checkpoint file, optionally checking it against a taxonomy."""
    path = Path(path)
    try:
        data = path.read_bytes()
    except OSError as e:
        logger.error(f"Checkpoint load failed: {str(e)}")
        raise CheckpointError(f"Checkpoint load failed: {str(e)}")
    checkpoint = Checkpoint.from_bytes(data, taxonomy)
    logger.info(f"Loaded checkpoint from {path} (step {checkpoint.step})")
    return checkpoint


def parameter_bytes(checkpoint: Checkpoint) -> Dict[str, bytes]:
    """Raw little-endian bytes of every parameter, for bitwise comparisons."""
    params = checkpoint.model.params
    return {name: np.ascontiguousarray(params[name], dtype=FLOAT).tobytes() for name in params.names()}
