"""Tests for configuration files and validated settings."""
import logging
from pathlib import Path

import pytest

from dhc_classifier.models.config import (
    DecoderType,
    LossConfig,
    ModelConfig,
    OptimizerType,
    PlossMode,
    ShareMode,
    TrainConfig,
)
from dhc_classifier.utils.config import DEFAULTS, Config, describe_defaults
from dhc_classifier.utils.errors import ConfigurationError
from dhc_classifier.utils.logging import PACKAGE_LOGGER, set_log_level, setup_logging


def test_defaults():
    config = TrainConfig.from_values(Config().resolved())
    assert config.epochs == 50
    assert config.batch_size == 32
    assert config.test_fraction == 0.1
    assert config.taxonomy is None and config.checkpoint is None
    assert config.network.base_hidden_dims == [256]
    assert config.network.share_mode == ShareMode.HIERARCHICAL
    assert config.loss.alpha == [1.0] and config.loss.beta == [0.25]
    assert config.loss.ploss_mode == PlossMode.ERROR
    assert config.optim.optimizer == OptimizerType.ADAM
    assert config.decoder == DecoderType.GREEDY
    assert config.featurizer.input_dim == config.network.input_dim == 4096


def test_parse_skips_comments_and_blanks():
    values = Config.parse("# header\n\n  epochs = 7  \nlayer_dims = 8, 4\n")
    assert values == {"epochs": "7", "layer_dims": "8, 4"}


@pytest.mark.parametrize(
    "text, message",
    [
        ("epochs 7\n", "Line 1: expected 'key = value'"),
        ("epochs = 1\nbogus = 2\n", "Line 2: unknown key 'bogus'"),
        ("epochs = 1\nepochs = 2\n", "Line 2: duplicate key 'epochs'"),
    ],
)
def test_parse_errors(text, message):
    with pytest.raises(ConfigurationError, match=message):
        Config.parse(text)


def test_set_rejects_unknown_key():
    with pytest.raises(ConfigurationError):
        Config().set("nope", 1)


def test_paths_resolve_against_config_directory(tmp_path: Path):
    (tmp_path / "run.conf").write_text(
        "taxonomy = tax.tsv\ncheckpoint = /abs/model.ckpt\n", encoding="utf-8"
    )
    config = Config.from_file(tmp_path / "run.conf")
    assert config.get("taxonomy") == str(tmp_path.resolve() / "tax.tsv")
    assert config.get("checkpoint") == "/abs/model.ckpt"
    assert config.get("train_data") == ""


def test_missing_file():
    with pytest.raises(ConfigurationError, match="Failed to read config"):
        Config.from_file("/nonexistent/dhc.conf")


def test_from_file_lists_and_types(tmp_path: Path):
    (tmp_path / "dhc.conf").write_text(
        "input_dim = 64\nbase_hidden_dims = 32, 16\nlayer_dims = 8, 4\n"
        "alpha = 0.5, 1.0\nploss_mode = constant\nploss_constant = 3\n"
        "progress = false\ndecoder = beam\nbeam_width = 5\n",
        encoding="utf-8",
    )
    config = TrainConfig.from_file(tmp_path / "dhc.conf")
    assert config.network.base_hidden_dims == [32, 16]
    assert config.network.dims_for(2) == [8, 4]
    assert config.loss.alphas(2) == [0.5, 1.0]
    assert config.loss.betas(2) == [0.25]
    assert config.loss.ploss_constant == 3.0
    assert config.progress is False
    assert config.decoder == DecoderType.BEAM and config.beam_width == 5


@pytest.mark.parametrize(
    "overrides",
    [
        {"epochs": "0"},
        {"alpha": "1.5"},
        {"beta": "-0.1"},
        {"ploss_mode": "constant", "ploss_constant": "1.0"},
        {"share_mode": "sideways"},
        {"test_fraction": "1.0"},
        {"lr": "fast"},
        {"ngram_order": "0"},
    ],
)
def test_invalid_values(overrides):
    with pytest.raises(ConfigurationError, match="Invalid configuration"):
        TrainConfig.from_values(Config(overrides).resolved())


def test_broadcast_lengths():
    config = ModelConfig(layer_dims=[8, 4])
    assert config.dims_for(2) == [8, 4]
    with pytest.raises(ConfigurationError):
        config.dims_for(3)
    loss = LossConfig(alpha=[0.1, 0.2, 0.3])
    assert loss.alphas(3) == [0.1, 0.2, 0.3]
    with pytest.raises(ConfigurationError):
        loss.alphas(2)
    assert LossConfig().betas(1) == []


def test_with_overrides():
    base = TrainConfig()
    assert base.with_overrides() == base
    changed = base.with_overrides(seed=9, beta_zero=True, independent=True)
    assert changed.seed == 9
    assert changed.loss.beta == [0.0]
    assert changed.network.share_mode == ShareMode.INDEPENDENT
    assert base.loss.beta == [0.25]


def test_describe_defaults_lists_every_key():
    text = describe_defaults()
    for key in DEFAULTS:
        assert f"  {key} = " in text


def test_set_log_level():
    logger = setup_logging(PACKAGE_LOGGER)
    try:
        set_log_level("debug")
        assert logger.level == logging.DEBUG
        set_log_level(logging.WARNING)
        assert logger.level == logging.WARNING
        with pytest.raises(ConfigurationError, match="Unknown log level"):
            set_log_level("chatty")
    finally:
        set_log_level("INFO")
