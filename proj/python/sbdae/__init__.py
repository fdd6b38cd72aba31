"""Python bindings for the sbdae C++ library.

    >>> import sbdae
    >>> raw, pos, neg = sbdae.planted_corpus(vocab_size=300, n_train=300, n_test=200, seed=1)
    >>> corpus = sbdae.prepare(raw, min_df=1)
    >>> report, models = sbdae.run(corpus, method="sbdae", hidden_size=20)
    >>> report["test_error"]
"""

import json

from ._sbdae import (
    AeModel,
    Corpus,
    InvalidArgument,
    IoError,
    LinearModel,
    NumericalError,
    ParseError,
    Posterior,
    load_ae_model,
    load_corpus,
    load_linear_model,
    load_posterior,
    planted_corpus,
    prepare,
    set_log_level,
)
from . import _sbdae

__all__ = [
    "AeModel",
    "Corpus",
    "InvalidArgument",
    "IoError",
    "LinearModel",
    "NumericalError",
    "ParseError",
    "Posterior",
    "default_config",
    "load_ae_model",
    "load_corpus",
    "load_linear_model",
    "load_posterior",
    "planted_corpus",
    "prepare",
    "run",
    "set_log_level",
]


def default_config():
    """Pipeline defaults as a dict (same keys as the CLI's JSON config)."""
    cfg = json.loads(_sbdae.default_config_json())
    cfg["hidden_size"] = 0  # 0 = per-method default
    return cfg


def run(corpus, config=None, run_dir=None, **overrides):
    """Run one method end to end.

    `config` is a dict of pipeline settings; keyword arguments override it.
    Returns (report dict, dict of trained models).
    """
    cfg = dict(config or {})
    cfg.update(overrides)
    text, models = _sbdae._run(corpus, json.dumps(cfg), run_dir)
    return json.loads(text), models
