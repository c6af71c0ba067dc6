"""Feedforward cuisine classifier: two hidden ReLU layers, inverted dropout,
softmax output, trained with mini-batch ADAM on mean cross-entropy.

Everything is plain numpy; no autograd framework. The backward pass is
validated against central finite differences (see gradient_check).
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from . import artifact_io
from .corpus import Recipe, Vocabulary, active_indices, vectorize
from .errors import DataError, NumericalError, UnknownTokenError

MODEL_KIND = "mlp-classifier"


@dataclass(frozen=True)
class MLPConfig:
    hidden_dims: tuple = (512, 256)
    dropout_rate: float = 0.2
    epochs: int = 200
    batch_size: int = 256
    step_size: float = 1e-3
    beta1: float = 0.9
    beta2: float = 0.999
    epsilon: float = 1e-8
    seed: int = 0

    def __post_init__(self):
        if len(self.hidden_dims) != 2 or any(d <= 0 for d in self.hidden_dims):
            raise DataError(f"hidden_dims must be two positive integers, got {self.hidden_dims}")
        if not 0.0 <= self.dropout_rate < 1.0:
            raise DataError(f"dropout_rate must be in [0, 1), got {self.dropout_rate}")
        if self.epochs < 0 or self.batch_size <= 0:
            raise DataError("epochs must be >= 0 and batch_size positive")

    def to_meta(self) -> dict:
        return {
            "hidden_dims": list(self.hidden_dims),
            "dropout_rate": self.dropout_rate,
            "epochs": self.epochs,
            "batch_size": self.batch_size,
            "step_size": self.step_size,
            "beta1": self.beta1,
            "beta2": self.beta2,
            "epsilon": self.epsilon,
            "seed": self.seed,
        }

    @classmethod
    def from_meta(cls, meta: dict) -> "MLPConfig":
        meta = dict(meta)
        meta["hidden_dims"] = tuple(meta["hidden_dims"])
        return cls(**meta)


@dataclass
class CuisineDistribution:
    """Full probability distribution over the vocabulary's countries."""

    probs: np.ndarray
    countries: tuple

    def __post_init__(self):
        self.probs = np.asarray(self.probs, dtype=np.float64)
        if self.probs.shape != (len(self.countries),):
            raise DataError("distribution length does not match country count")
        if np.any(self.probs < -1e-9) or abs(float(self.probs.sum()) - 1.0) > 1e-6:
            raise DataError("probabilities must be in [0,1] and sum to 1")

    def prob(self, country: str) -> float:
        return float(self.probs[self.countries.index(country)])

    def top(self, n: Optional[int] = None):
        order = np.lexsort((np.arange(len(self.probs)), -self.probs))
        pairs = [(self.countries[i], float(self.probs[i])) for i in order]
        return pairs if n is None else pairs[:n]

    def argmax_country(self) -> str:
        return self.countries[int(np.argmax(self.probs))]

    def as_mapping(self) -> dict:
        return {c: float(p) for c, p in zip(self.countries, self.probs)}


class MLPModel:
    """Trained weights plus the config and vocabulary they were built for."""

    def __init__(self, weights: dict, config: MLPConfig, vocab: Vocabulary):
        self.W1, self.b1 = weights["W1"], weights["b1"]
        self.W2, self.b2 = weights["W2"], weights["b2"]
        self.W3, self.b3 = weights["W3"], weights["b3"]
        self.config = config
        self.vocab = vocab
        self.loss_history: list = []
        h1, h2 = config.hidden_dims
        expected = {
            "W1": (vocab.num_ingredients, h1), "b1": (h1,),
            "W2": (h1, h2), "b2": (h2,),
            "W3": (h2, vocab.num_countries), "b3": (vocab.num_countries,),
        }
        for name, shape in expected.items():
            if getattr(self, name).shape != shape:
                raise DataError(f"{name} has shape {getattr(self, name).shape}, expected {shape}")

    def parameters(self):
        return {"W1": self.W1, "b1": self.b1, "W2": self.W2, "b2": self.b2,
                "W3": self.W3, "b3": self.b3}

    def check_finite(self):
        for name, arr in self.parameters().items():
            if not np.all(np.isfinite(arr)):
                raise NumericalError(f"parameter {name} contains non-finite values")


def softmax(logits: np.ndarray) -> np.ndarray:
    """Row-wise stable softmax."""
    z = logits - logits.max(axis=-1, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=-1, keepdims=True)


def init_model(vocab: Vocabulary, config: MLPConfig) -> MLPModel:
    """Symmetric uniform init scaled by fan-in; zero biases."""
    rng = np.random.default_rng(config.seed)
    h1, h2 = config.hidden_dims
    dims = [(vocab.num_ingredients, h1), (h1, h2), (h2, vocab.num_countries)]
    weights = {}
    for k, (fan_in, fan_out) in enumerate(dims, start=1):
        limit = 1.0 / np.sqrt(fan_in)
        weights[f"W{k}"] = rng.uniform(-limit, limit, size=(fan_in, fan_out))
        weights[f"b{k}"] = np.zeros(fan_out)
    return MLPModel(weights, config, vocab)


def _dropout_masks(model: MLPModel, batch_size: int, rng: np.random.Generator):
    rate = model.config.dropout_rate
    if rate == 0.0:
        return None
    h1, h2 = model.config.hidden_dims
    keep = 1.0 - rate
    m1 = (rng.random((batch_size, h1)) >= rate) / keep
    m2 = (rng.random((batch_size, h2)) >= rate) / keep
    return m1, m2


def _forward_cached(model: MLPModel, X: np.ndarray, masks=None):
    z1 = X @ model.W1 + model.b1
    a1 = np.maximum(z1, 0.0)
    d1 = a1 * masks[0] if masks is not None else a1
    z2 = d1 @ model.W2 + model.b2
    a2 = np.maximum(z2, 0.0)
    d2 = a2 * masks[1] if masks is not None else a2
    logits = d2 @ model.W3 + model.b3
    probs = softmax(logits)
    return probs, (X, z1, d1, z2, d2)


def forward_batch(model: MLPModel, X: np.ndarray, training_mode: bool = False,
                  rng: Optional[np.random.Generator] = None) -> np.ndarray:
    """Probabilities for a batch of indicator rows.

    Dropout is applied to the hidden layers only when training_mode is set
    (inverted dropout, so inference needs no rescaling).
    """
    X = np.atleast_2d(np.asarray(X, dtype=np.float64))
    if X.shape[1] != model.vocab.num_ingredients:
        raise DataError(
            f"indicator length {X.shape[1]} != vocabulary size {model.vocab.num_ingredients}"
        )
    masks = None
    if training_mode:
        masks = _dropout_masks(model, X.shape[0], rng or np.random.default_rng(model.config.seed))
    probs, _ = _forward_cached(model, X, masks)
    return probs


def forward(model: MLPModel, indicator, training_mode: bool = False,
            rng: Optional[np.random.Generator] = None) -> CuisineDistribution:
    values = indicator.values if hasattr(indicator, "values") else indicator
    probs = forward_batch(model, values, training_mode=training_mode, rng=rng)[0]
    return CuisineDistribution(probs=probs, countries=model.vocab.countries)


def loss_and_grads(model: MLPModel, X: np.ndarray, Y: np.ndarray, masks=None):
    """Mean cross-entropy and its analytic gradients for one batch.

    Y is one-hot (B, C). Passing explicit dropout masks makes the loss a
    deterministic function, which is what the finite-difference check needs.
    """
    B = X.shape[0]
    probs, (X, z1, d1, z2, d2) = _forward_cached(model, X, masks)
    eps = 1e-300  # guards log(0) for saturated wrong predictions
    loss = -float(np.sum(Y * np.log(probs + eps))) / B
    dlogits = (probs - Y) / B
    grads = {}
    grads["W3"] = d2.T @ dlogits
    grads["b3"] = dlogits.sum(axis=0)
    dd2 = dlogits @ model.W3.T
    if masks is not None:
        dd2 = dd2 * masks[1]
    dz2 = dd2 * (z2 > 0.0)
    grads["W2"] = d1.T @ dz2
    grads["b2"] = dz2.sum(axis=0)
    dd1 = dz2 @ model.W2.T
    if masks is not None:
        dd1 = dd1 * masks[0]
    dz1 = dd1 * (z1 > 0.0)
    grads["W1"] = X.T @ dz1
    grads["b1"] = dz1.sum(axis=0)
    return loss, grads


class _AdamState:
    def __init__(self, params: dict, config: MLPConfig):
        self.m = {k: np.zeros_like(v) for k, v in params.items()}
        self.v = {k: np.zeros_like(v) for k, v in params.items()}
        self.t = 0
        self.config = config

    def update(self, params: dict, grads: dict):
        cfg = self.config
        self.t += 1
        correct1 = 1.0 - cfg.beta1 ** self.t
        correct2 = 1.0 - cfg.beta2 ** self.t
        for k, g in grads.items():
            m = self.m[k]
            v = self.v[k]
            m *= cfg.beta1
            m += (1.0 - cfg.beta1) * g
            v *= cfg.beta2
            v += (1.0 - cfg.beta2) * np.square(g)
            params[k] -= cfg.step_size * (m / correct1) / (np.sqrt(v / correct2) + cfg.epsilon)


def _prepare_batch(index_lists, labels, lo, hi, order, I, C):
    rows = order[lo:hi]
    X = np.zeros((len(rows), I))
    Y = np.zeros((len(rows), C))
    for r, row in enumerate(rows):
        X[r, index_lists[row]] = 1.0
        Y[r, labels[row]] = 1.0
    return X, Y


def train_classifier(train: Sequence[Recipe], vocab: Vocabulary, config: MLPConfig,
                     log=None) -> MLPModel:
    """Mini-batch ADAM over mean cross-entropy for config.epochs passes.

    Deterministic for a fixed seed (single-threaded). Raises NumericalError
    if the loss goes non-finite. The returned model has dropout disabled for
    inference (training is the only consumer of the masks) and carries its
    per-epoch mean loss in model.loss_history.
    """
    if not train:
        raise DataError("training set is empty")
    index_lists = []
    labels = []
    for recipe in train:
        if recipe.cuisine is None:
            raise DataError(f"recipe {recipe.id!r} is unlabeled")
        idx, _ = active_indices(recipe.ingredients, vocab)
        if not idx:
            raise DataError(f"recipe {recipe.id!r} has no in-vocabulary ingredients")
        index_lists.append(idx)
        labels.append(vocab.country_id(recipe.cuisine))
    model = init_model(vocab, config)
    rng = np.random.default_rng(config.seed + 1)
    params = model.parameters()
    adam = _AdamState(params, config)
    n = len(index_lists)
    I, C = vocab.num_ingredients, vocab.num_countries
    started = time.monotonic()
    for epoch in range(config.epochs):
        order = rng.permutation(n)
        epoch_loss = 0.0
        for lo in range(0, n, config.batch_size):
            hi = min(lo + config.batch_size, n)
            X, Y = _prepare_batch(index_lists, labels, lo, hi, order, I, C)
            masks = _dropout_masks(model, hi - lo, rng)
            loss, grads = loss_and_grads(model, X, Y, masks)
            if not np.isfinite(loss):
                raise NumericalError(
                    f"training diverged: non-finite loss at epoch {epoch}, batch {lo // config.batch_size}"
                )
            adam.update(params, grads)
            epoch_loss += loss * (hi - lo)
        model.loss_history.append(epoch_loss / n)
        if log is not None:
            log(epoch, model.loss_history[-1], time.monotonic() - started)
    model.check_finite()
    return model


def predict(model: MLPModel, recipe: Recipe) -> CuisineDistribution:
    """Inference distribution (dropout off, deterministic)."""
    indicator = vectorize(recipe, model.vocab)
    return forward(model, indicator, training_mode=False)


def predict_proba_indices(model: MLPModel, index_lists, chunk: int = 1024) -> np.ndarray:
    """Batch inference over pre-resolved ingredient index lists."""
    I = model.vocab.num_ingredients
    out = np.empty((len(index_lists), model.vocab.num_countries))
    for lo in range(0, len(index_lists), chunk):
        rows = index_lists[lo : lo + chunk]
        X = np.zeros((len(rows), I))
        for r, idx in enumerate(rows):
            X[r, list(idx)] = 1.0
        out[lo : lo + len(rows)] = forward_batch(model, X)
    return out


def probe_ingredient(model: MLPModel, ingredient: str):
    """Distribution for a single-ingredient recipe, sorted descending."""
    if ingredient not in model.vocab.ingredient_index:
        raise UnknownTokenError(f"unknown ingredient: {ingredient!r}")
    recipe = Recipe(id=f"probe:{ingredient}", cuisine=None, ingredients=(ingredient,))
    return predict(model, recipe).top()


@dataclass
class EvaluationReport:
    accuracy: float
    confusion: np.ndarray  # rows = true country, columns = predicted
    countries: tuple

    @property
    def per_country_counts(self) -> np.ndarray:
        return self.confusion.sum(axis=1)


def evaluate(model: MLPModel, test: Sequence[Recipe]) -> EvaluationReport:
    """Argmax accuracy and confusion matrix over a labeled test set.

    Recipes whose every ingredient is OOV are still scored (on an all-zero
    indicator) so that the confusion row sums stay equal to the per-country
    test counts.
    """
    if not test:
        raise DataError("test set is empty")
    vocab = model.vocab
    index_lists = []
    truth = []
    for recipe in test:
        if recipe.cuisine is None:
            raise DataError(f"recipe {recipe.id!r} is unlabeled")
        idx, _ = active_indices(recipe.ingredients, vocab)
        index_lists.append(idx)
        truth.append(vocab.country_id(recipe.cuisine))
    probs = predict_proba_indices(model, index_lists)
    predicted = probs.argmax(axis=1)
    C = vocab.num_countries
    confusion = np.zeros((C, C), dtype=np.int64)
    for t, p in zip(truth, predicted):
        confusion[t, p] += 1
    accuracy = float(np.trace(confusion)) / len(test)
    return EvaluationReport(accuracy=accuracy, confusion=confusion, countries=vocab.countries)


def gradient_check(config: MLPConfig, recipes: Sequence[Recipe], vocab: Vocabulary,
                   eps: float = 1e-5, with_dropout_mask: bool = False) -> float:
    """Max relative error between analytic gradients and central differences.

    Sweeps every parameter of a freshly initialized model on the fixture's
    full batch; with_dropout_mask freezes one dropout mask and applies it in
    both paths. Intended for tiny fixtures (<= a few thousand parameters).
    """
    model = init_model(vocab, config)
    # nonzero biases keep pre-activations off the ReLU kinks, where central
    # differences are invalid (a fully dropped row otherwise lands exactly
    # on z=0 because the biases initialize to zero)
    jitter = np.random.default_rng(config.seed + 11)
    model.b1[...] = jitter.uniform(0.05, 0.2, size=model.b1.shape)
    model.b2[...] = jitter.uniform(0.05, 0.2, size=model.b2.shape)
    index_lists = [active_indices(r.ingredients, vocab)[0] for r in recipes]
    labels = [vocab.country_id(r.cuisine) for r in recipes]
    X, Y = _prepare_batch(index_lists, labels, 0, len(recipes),
                          np.arange(len(recipes)), vocab.num_ingredients, vocab.num_countries)
    masks = None
    if with_dropout_mask:
        masks = _dropout_masks(model, X.shape[0], np.random.default_rng(config.seed + 7))
        if masks is None:
            raise DataError("with_dropout_mask requires a nonzero dropout_rate")
    _, grads = loss_and_grads(model, X, Y, masks)
    params = model.parameters()
    worst = 0.0
    for name, param in params.items():
        flat = param.reshape(-1)
        gflat = grads[name].reshape(-1)
        for i in range(flat.size):
            keep = flat[i]
            flat[i] = keep + eps
            lo_plus, _ = loss_and_grads(model, X, Y, masks)
            flat[i] = keep - eps
            lo_minus, _ = loss_and_grads(model, X, Y, masks)
            flat[i] = keep
            numeric = (lo_plus - lo_minus) / (2.0 * eps)
            denom = max(abs(gflat[i]) + abs(numeric), 1e-8)
            worst = max(worst, abs(gflat[i] - numeric) / denom)
    return worst


def save_model(model: MLPModel, path) -> None:
    """Versioned, byte-stable artifact: config, vocabulary + hash, parameters."""
    meta = {
        "format": 1,
        "config": model.config.to_meta(),
        "vocab": model.vocab.to_meta(),
        "vocab_hash": model.vocab.content_hash(),
        "loss_history": [float(x) for x in model.loss_history],
    }
    artifact_io.save_artifact(path, MODEL_KIND, meta, model.parameters())


def load_model(path) -> MLPModel:
    meta, arrays = artifact_io.load_artifact(path, MODEL_KIND)
    vocab = Vocabulary.from_meta(meta["vocab"])
    if meta.get("vocab_hash") != vocab.content_hash():
        raise DataError(f"vocabulary hash mismatch in {path}")
    config = MLPConfig.from_meta(meta["config"])
    model = MLPModel(arrays, config, vocab)
    model.loss_history = list(meta.get("loss_history", []))
    model.check_finite()
    return model
