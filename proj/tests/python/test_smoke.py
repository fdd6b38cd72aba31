import json

import numpy as np
import pytest

import sbdae


@pytest.fixture(scope="module")
def corpus():
    raw, pos, neg = sbdae.planted_corpus(vocab_size=200, n_train=200, n_test=100, n_unlabeled=50,
                                         n_polar_per_class=5, seed=3)
    assert len(pos) == len(neg) == 5
    return sbdae.prepare(raw, min_df=1)


def test_corpus_shape(corpus):
    assert corpus.n_train == 200
    assert corpus.n_test == 100
    assert corpus.n_unlabeled == 50
    x = corpus.dense("train")
    assert x.shape == (200, corpus.dim)
    assert x.max() == 1.0
    assert set(corpus.labels("train")) <= {-1, 1}
    assert set(corpus.labels("unlabeled")) == {0}


def test_bow_run(corpus):
    report, models = sbdae.run(corpus, method="bow")
    assert report["method"] == "bow"
    assert report["chosen_beta"] is None
    assert 0.0 <= report["test_error"] <= 1.0
    assert models["bow_svm"].error_rate(corpus, "test") == report["test_error"]


def test_sbdae_run_is_reproducible(corpus, tmp_path):
    kw = dict(method="sbdae", hidden_size=6, beta_grid=[1e4, 1e8], ae_sgd={"epochs": 2})
    a, models = sbdae.run(corpus, run_dir=str(tmp_path / "run"), **kw)
    b, _ = sbdae.run(corpus, **kw)
    a.pop("seconds"), b.pop("seconds")
    assert a == b
    assert a["chosen_beta"] in (1e4, 1e8)
    ae = models["autoencoder"]
    assert ae.hidden == 6
    assert ae.loss == "marginalized_bregman"
    feats = ae.features(corpus, "test")
    assert feats.shape == (corpus.n_test, 6)
    assert (feats >= 0).all()
    back = sbdae.load_ae_model(str(tmp_path / "run" / "autoencoder.model"))
    np.testing.assert_array_equal(back.W, ae.W)
    manifest = json.loads((tmp_path / "run" / "manifest.json").read_text())
    assert manifest["method"] == "sbdae"


def test_top_words(corpus):
    _, models = sbdae.run(corpus, method="dae", hidden_size=4, ae_sgd={"epochs": 1})
    reps = models["autoencoder"].top_words(corpus, k_top=3, n_filters=2)
    assert len(reps) == 2
    assert len(reps[0]["activated"]) == 3


def test_errors(corpus, tmp_path):
    with pytest.raises(ValueError):
        sbdae.run(corpus, method="nope")
    with pytest.raises(ValueError):
        sbdae.run(corpus, not_a_key=1)
    with pytest.raises(OSError):
        sbdae.load_corpus(str(tmp_path / "missing.svm"))
    bad = tmp_path / "bad.svm"
    bad.write_text("+1 3:1 2:1\n")
    with pytest.raises(sbdae.ParseError):
        sbdae.load_corpus(str(bad))


def test_default_config():
    cfg = sbdae.default_config()
    assert cfg["method"] == "sbdae"
    assert cfg["beta_grid"] == [1e4, 1e5, 1e6, 1e7, 1e8]
