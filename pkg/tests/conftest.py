"""Shared fixtures.

Two tiers: `tiny_*` fixtures run a scaled-down corpus and small network
configs so unit tests stay fast; the `full_*` fixtures (used by the
acceptance module only) train the default configuration on the complete
demo corpus and are built at most once per session.
"""

import time

import numpy as np
import pytest

from cuisineshift import classifier, corpus, demo_data, embeddings, layout

TINY_SCALE = 0.04
TINY_MLP = classifier.MLPConfig(hidden_dims=(32, 16), epochs=40, batch_size=64, seed=0)
TINY_EMB = embeddings.EmbeddingConfig(dim=16, epochs=3, seed=0)


@pytest.fixture(scope="session")
def tiny_recipes():
    return demo_data.generate_demo_corpus(seed=7, scale=TINY_SCALE)


@pytest.fixture(scope="session")
def tiny_vocab(tiny_recipes):
    return corpus.build_vocabulary(tiny_recipes)


@pytest.fixture(scope="session")
def tiny_split(tiny_recipes):
    return corpus.split(tiny_recipes, 0.8, 13)


@pytest.fixture(scope="session")
def tiny_model(tiny_split, tiny_vocab):
    return classifier.train_classifier(tiny_split.train, tiny_vocab, TINY_MLP)


@pytest.fixture(scope="session")
def tiny_space(tiny_recipes, tiny_vocab):
    return embeddings.train_embeddings(tiny_recipes, tiny_vocab, TINY_EMB)


@pytest.fixture(scope="session")
def tiny_layout(tiny_space):
    return layout.spectral_circle_layout(layout.country_similarity(tiny_space))


@pytest.fixture(scope="session")
def tiny_artifacts(tmp_path_factory, tiny_model, tiny_space):
    """Model and embedding artifacts written once for service/CLI tests."""
    base = tmp_path_factory.mktemp("artifacts")
    model_path = base / "model.bin"
    emb_path = base / "embeddings.bin"
    classifier.save_model(tiny_model, model_path)
    embeddings.save_embeddings(tiny_space, emb_path)
    return {"model": model_path, "embeddings": emb_path}


@pytest.fixture(scope="session")
def tiny_data_json(tmp_path_factory, tiny_recipes):
    base = tmp_path_factory.mktemp("data")
    path = base / "recipes.json"
    demo_data.write_demo_json(path, tiny_recipes)
    return path


@pytest.fixture(scope="session")
def training_times():
    """Wall-clock seconds of the expensive fixture builds, by name."""
    return {}


@pytest.fixture(scope="session")
def full_recipes():
    return demo_data.generate_demo_corpus()


@pytest.fixture(scope="session")
def full_vocab(full_recipes):
    return corpus.build_vocabulary(full_recipes)


@pytest.fixture(scope="session")
def full_split(full_recipes):
    return corpus.split(full_recipes, 0.8, 13)


@pytest.fixture(scope="session")
def full_model(full_split, full_vocab, training_times):
    t0 = time.monotonic()
    model = classifier.train_classifier(full_split.train, full_vocab, classifier.MLPConfig())
    training_times["classifier"] = time.monotonic() - t0
    return model


@pytest.fixture(scope="session")
def full_space(full_recipes, full_vocab, training_times):
    t0 = time.monotonic()
    space = embeddings.train_embeddings(full_recipes, full_vocab, embeddings.EmbeddingConfig())
    training_times["embeddings"] = time.monotonic() - t0
    return space


# Handcrafted two-cuisine fixture: a/b always mark "redland", c/d "blueland",
# with "water" everywhere. Linearly separable, so small nets must nail it.
def _separable_recipes():
    rows = []
    for i in range(8):
        rows.append(corpus.make_recipe(f"r{i}", ["aji", "basil", "water"], "redland"))
    for i in range(8):
        rows.append(corpus.make_recipe(f"b{i}", ["cumin", "dill", "water"], "blueland"))
    return rows


@pytest.fixture(scope="session")
def separable_recipes():
    return _separable_recipes()


@pytest.fixture(scope="session")
def separable_vocab(separable_recipes):
    return corpus.build_vocabulary(separable_recipes)


def make_rng(seed=0):
    return np.random.default_rng(seed)
