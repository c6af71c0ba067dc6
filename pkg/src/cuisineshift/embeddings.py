"""Country-extended skip-gram embeddings over recipes.

Ingredients and countries share one token space. Each recipe contributes
every ordered ingredient pair (no window: ingredient lists are unordered)
plus, per ingredient, a country->ingredient and an ingredient->country
pair. The softmax objective is optimized by negative sampling with
word2vec-style per-pair SGD; the hot loop is a numba kernel, and a plain
numpy reference step exists for the gradient and equivalence tests.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numba
import numpy as np

from . import artifact_io
from .corpus import Recipe, Vocabulary, normalize_ingredient
from .errors import DataError, NumericalError, UnknownTokenError

EMBEDDING_KIND = "skipgram-embeddings"
_NOISE_TABLE_SIZE = 2_000_000
_MIN_STEP_FRACTION = 1e-4
_PAIR_CHUNK = 1_000_000


@dataclass(frozen=True)
class EmbeddingConfig:
    dim: int = 100
    negative_samples: int = 5
    epochs: int = 10
    step_size: float = 0.025
    noise_power: float = 0.75
    seed: int = 0

    def __post_init__(self):
        if self.dim <= 0:
            raise DataError(f"embedding dim must be positive, got {self.dim}")
        if self.negative_samples < 1:
            raise DataError("need at least one negative sample per positive pair")
        if self.epochs < 0 or self.step_size <= 0:
            raise DataError("epochs must be >= 0 and step_size positive")

    def to_meta(self) -> dict:
        return {
            "dim": self.dim,
            "negative_samples": self.negative_samples,
            "epochs": self.epochs,
            "step_size": self.step_size,
            "noise_power": self.noise_power,
            "seed": self.seed,
        }

    @classmethod
    def from_meta(cls, meta: dict) -> "EmbeddingConfig":
        return cls(**meta)


class EmbeddingSpace:
    """Input and output vectors for every ingredient and country token.

    Token ids: ingredients keep their vocabulary indices; countries follow
    at offset num_ingredients. Queries (similarity, nearest, analogy) use
    the input vectors; output vectors only serve training.
    """

    def __init__(self, vocab: Vocabulary, input_vectors: np.ndarray,
                 output_vectors: np.ndarray, config: EmbeddingConfig):
        T = vocab.num_ingredients + vocab.num_countries
        if input_vectors.shape != (T, config.dim) or output_vectors.shape != (T, config.dim):
            raise DataError("vector table shapes do not match vocabulary and dim")
        self.vocab = vocab
        self.input_vectors = input_vectors
        self.output_vectors = output_vectors
        self.config = config
        self._unit_cache: Optional[np.ndarray] = None

    @property
    def tokens(self) -> tuple:
        return self.vocab.ingredients + self.vocab.countries

    @property
    def num_tokens(self) -> int:
        return len(self.vocab.ingredients) + len(self.vocab.countries)

    @property
    def country_offset(self) -> int:
        return self.vocab.num_ingredients

    def token_name(self, token_id: int) -> str:
        return self.tokens[token_id]

    def is_country(self, token_id: int) -> bool:
        return token_id >= self.country_offset

    def token_id(self, name: str) -> int:
        """Resolve a token name, preferring the country namespace on a tie."""
        key = normalize_ingredient(name)
        if key in self.vocab.country_index:
            return self.country_offset + self.vocab.country_index[key]
        if key in self.vocab.ingredient_index:
            return self.vocab.ingredient_index[key]
        raise UnknownTokenError(f"unknown token: {name!r}")

    def vector(self, name: str) -> np.ndarray:
        return self.input_vectors[self.token_id(name)]

    def _units(self) -> np.ndarray:
        if self._unit_cache is None:
            norms = np.linalg.norm(self.input_vectors.astype(np.float64), axis=1)
            safe = np.where(norms == 0.0, 1.0, norms)
            self._unit_cache = self.input_vectors.astype(np.float64) / safe[:, None]
            self._zero_rows = norms == 0.0
        return self._unit_cache

    def check_finite(self):
        if not (np.all(np.isfinite(self.input_vectors)) and np.all(np.isfinite(self.output_vectors))):
            raise NumericalError("embedding vectors contain non-finite values")


def pair_stream(recipes: Iterable[Recipe], vocab: Vocabulary):
    """Yield (center, context) token-id pairs per the windowless objective.

    For a recipe with n in-vocabulary ingredients and country c: all n(n-1)
    ordered ingredient pairs, then (c, w) and (w, c) for each ingredient.
    """
    offset = vocab.num_ingredients
    for recipe in recipes:
        if recipe.cuisine is None:
            raise DataError(f"recipe {recipe.id!r} is unlabeled")
        ids = [vocab.ingredient_index[g] for g in recipe.ingredients
               if g in vocab.ingredient_index]
        c = offset + vocab.country_id(recipe.cuisine)
        for i, wi in enumerate(ids):
            for j, wj in enumerate(ids):
                if i != j:
                    yield (wi, wj)
        for wi in ids:
            yield (c, wi)
            yield (wi, c)


def _recipe_token_ids(recipe: Recipe, vocab: Vocabulary) -> list:
    return [vocab.ingredient_index[g] for g in recipe.ingredients
            if g in vocab.ingredient_index]


def corpus_pair_count(recipes: Sequence[Recipe], vocab: Vocabulary) -> int:
    """Closed form sum over recipes of n(n-1) + 2n."""
    total = 0
    for recipe in recipes:
        n = len(_recipe_token_ids(recipe, vocab))
        total += n * (n - 1) + 2 * n
    return total


def _pair_array(recipes: Sequence[Recipe], vocab: Vocabulary) -> np.ndarray:
    total = corpus_pair_count(recipes, vocab)
    pairs = np.empty((total, 2), dtype=np.int32)
    offset = vocab.num_ingredients
    pos = 0
    for recipe in recipes:
        if recipe.cuisine is None:
            raise DataError(f"recipe {recipe.id!r} is unlabeled")
        ids = np.array(_recipe_token_ids(recipe, vocab), dtype=np.int32)
        n = len(ids)
        if n == 0:
            continue
        c = np.int32(offset + vocab.country_id(recipe.cuisine))
        if n > 1:
            centers = np.repeat(ids, n)
            contexts = np.tile(ids, n)
            keep = np.repeat(np.arange(n), n) != np.tile(np.arange(n), n)
            m = n * (n - 1)
            pairs[pos : pos + m, 0] = centers[keep]
            pairs[pos : pos + m, 1] = contexts[keep]
            pos += m
        pairs[pos : pos + n, 0] = c
        pairs[pos : pos + n, 1] = ids
        pos += n
        pairs[pos : pos + n, 0] = ids
        pairs[pos : pos + n, 1] = c
        pos += n
    assert pos == total
    return pairs


def _token_counts(recipes: Sequence[Recipe], vocab: Vocabulary) -> np.ndarray:
    counts = np.zeros(vocab.num_ingredients + vocab.num_countries, dtype=np.int64)
    offset = vocab.num_ingredients
    for recipe in recipes:
        for t in _recipe_token_ids(recipe, vocab):
            counts[t] += 1
        if recipe.cuisine in vocab.country_index:
            counts[offset + vocab.country_index[recipe.cuisine]] += 1
    return counts


def build_noise_table(counts: np.ndarray, power: float,
                      size: int = _NOISE_TABLE_SIZE) -> np.ndarray:
    """Integer sampling table for the unigram^power noise distribution."""
    weights = np.power(counts.astype(np.float64), power)
    total = weights.sum()
    if total <= 0:
        raise DataError("noise distribution is degenerate: all token counts are zero")
    cum = np.cumsum(weights / total)
    grid = (np.arange(size, dtype=np.float64) + 0.5) / size
    return np.searchsorted(cum, grid).astype(np.int32)


@numba.njit("float32(float32)", cache=True, nogil=True)
def _exp_f32(x):
    # scalar float32 exponential exactly as the compiled kernel evaluates it
    return math.exp(x)


@numba.njit(cache=True, nogil=True)
def _sgd_pairs(vin, vout, centers, contexts, negatives, lr0, min_frac,
               processed0, total_pairs):
    n = centers.shape[0]
    K = vin.shape[1]
    n_neg = negatives.shape[1]
    work = np.empty(K, dtype=np.float32)
    for p in range(n):
        frac = 1.0 - (processed0 + p) / total_pairs
        if frac < min_frac:
            frac = min_frac
        lr = np.float32(lr0 * frac)
        a = centers[p]
        b = contexts[p]
        for k in range(K):
            work[k] = 0.0
        dot = np.float32(0.0)
        for k in range(K):
            dot += vin[a, k] * vout[b, k]
        g = (np.float32(1.0) - np.float32(1.0 / (1.0 + math.exp(-dot)))) * lr
        for k in range(K):
            work[k] += g * vout[b, k]
            vout[b, k] += g * vin[a, k]
        for j in range(n_neg):
            t = negatives[p, j]
            if t == b:
                continue
            dot = np.float32(0.0)
            for k in range(K):
                dot += vin[a, k] * vout[t, k]
            g = -np.float32(1.0 / (1.0 + math.exp(-dot))) * lr
            for k in range(K):
                work[k] += g * vout[t, k]
                vout[t, k] += g * vin[a, k]
        for k in range(K):
            vin[a, k] += work[k]


def reference_pair_step(vin: np.ndarray, vout: np.ndarray, center: int, context: int,
                        negatives: Sequence[int], lr: float) -> None:
    """Python mirror of one kernel pair update, bit-exact against the kernel.

    Every add and multiply is sequenced here in plain Python, rounding to
    float32 exactly where the compiled kernel does (sequential dot
    accumulation, float32 g, mul-then-add updates), so the two routes can be
    compared with array_equal rather than allclose. The one transcendental
    goes through _exp_f32: float32 libm exponentials differ by an ulp
    between implementations, and matching any other one would make the
    comparison a test of libm rather than of the update arithmetic.
    """
    f32 = np.float32
    a, b = center, context
    K = vin.shape[1]
    lr = f32(lr)
    work = np.zeros(K, dtype=vin.dtype)

    def f32_dot(t):
        dot = f32(0.0)
        for k in range(K):
            dot = f32(dot + f32(vin[a, k] * vout[t, k]))
        return dot

    def f32_sigmoid(dot):
        # exp at float32 precision, then the add and division run in
        # float64 before rounding back, matching the kernel's promotion
        return f32(1.0 / (1.0 + float(_exp_f32(f32(-dot)))))

    g = f32((f32(1.0) - f32_sigmoid(f32_dot(b))) * lr)
    for k in range(K):
        work[k] = f32(work[k] + f32(g * vout[b, k]))
        vout[b, k] = f32(vout[b, k] + f32(g * vin[a, k]))
    for t in negatives:
        if t == b:
            continue
        g = f32(-f32_sigmoid(f32_dot(t)) * lr)
        for k in range(K):
            work[k] = f32(work[k] + f32(g * vout[t, k]))
            vout[t, k] = f32(vout[t, k] + f32(g * vin[a, k]))
    for k in range(K):
        vin[a, k] = f32(vin[a, k] + work[k])


def _sigmoid(x: float) -> float:
    if x >= 0:
        return 1.0 / (1.0 + math.exp(-x))
    e = math.exp(x)
    return e / (1.0 + e)


def pair_objective_and_grads(v_center: np.ndarray, v_context: np.ndarray,
                             v_negatives: np.ndarray):
    """Local negative-sampling objective for one positive pair, with grads.

        objective = log sigma(a.b) + sum_j log sigma(-a.n_j)

    Returns (objective, d/da, d/db, d/dn as rows). Pure float64; the
    independent side of the gradient check.
    """
    a = np.asarray(v_center, dtype=np.float64)
    b = np.asarray(v_context, dtype=np.float64)
    negs = np.atleast_2d(np.asarray(v_negatives, dtype=np.float64))
    s_pos = _sigmoid(float(a @ b))
    objective = math.log(max(s_pos, 1e-300))
    g_a = (1.0 - s_pos) * b
    g_b = (1.0 - s_pos) * a
    g_negs = np.zeros_like(negs)
    for j in range(negs.shape[0]):
        s = _sigmoid(float(a @ negs[j]))
        objective += math.log(max(1.0 - s, 1e-300))
        g_a -= s * negs[j]
        g_negs[j] = -s * a
    return objective, g_a, g_b, g_negs


def train_embeddings(recipes: Sequence[Recipe], vocab: Vocabulary,
                     config: EmbeddingConfig, log=None) -> EmbeddingSpace:
    """SGD over the pair stream; deterministic for a fixed seed.

    Negatives come from the unigram^noise_power table over all tokens; the
    step size decays linearly over the total pair budget. Input vectors are
    initialized uniform in [-0.5/dim, 0.5/dim], output vectors start at zero.
    """
    if not recipes:
        raise DataError("cannot train embeddings on an empty corpus")
    pairs = _pair_array(recipes, vocab)
    if len(pairs) == 0:
        raise DataError("corpus produced no training pairs")
    counts = _token_counts(recipes, vocab)
    table = build_noise_table(counts, config.noise_power)
    T = vocab.num_ingredients + vocab.num_countries
    rng = np.random.default_rng(config.seed)
    vin = ((rng.random((T, config.dim)) - 0.5) / config.dim).astype(np.float32)
    vout = np.zeros((T, config.dim), dtype=np.float32)
    total = len(pairs) * max(config.epochs, 1)
    processed = 0
    for epoch in range(config.epochs):
        order = rng.permutation(len(pairs))
        for lo in range(0, len(order), _PAIR_CHUNK):
            chunk = order[lo : lo + _PAIR_CHUNK]
            centers = np.ascontiguousarray(pairs[chunk, 0])
            contexts = np.ascontiguousarray(pairs[chunk, 1])
            draws = rng.integers(0, len(table), size=(len(chunk), config.negative_samples))
            negatives = table[draws]
            _sgd_pairs(vin, vout, centers, contexts, negatives,
                       config.step_size, _MIN_STEP_FRACTION, processed, total)
            processed += len(chunk)
        if not np.all(np.isfinite(vin)):
            raise NumericalError(f"embedding training diverged at epoch {epoch}")
        if log is not None:
            log(epoch, processed)
    space = EmbeddingSpace(vocab, vin, vout, config)
    space.check_finite()
    return space


def similarity(space: EmbeddingSpace, token_a: str, token_b: str) -> float:
    """Cosine similarity of two tokens' input vectors."""
    va = space.vector(token_a).astype(np.float64)
    vb = space.vector(token_b).astype(np.float64)
    na, nb = np.linalg.norm(va), np.linalg.norm(vb)
    if na == 0.0 or nb == 0.0:
        raise DataError(f"zero vector for {token_a!r} or {token_b!r}")
    return float(np.clip(va @ vb / (na * nb), -1.0, 1.0))


def nearest(space: EmbeddingSpace, query, k: int, kind: str = "all",
            exclude: Iterable[str] = ()):
    """Top-k tokens by cosine against the input vectors.

    query is a token name (auto-excluded from its own results) or a raw
    vector. kind filters to "ingredient" / "country" / "all". Ties break by
    token index ascending; zero-norm stored vectors are unrankable and
    skipped.
    """
    if k < 0:
        raise DataError(f"k must be non-negative, got {k}")
    if kind not in ("all", "ingredient", "country"):
        raise DataError(f"unknown filter kind: {kind!r}")
    excluded = {space.token_id(name) for name in exclude}
    if isinstance(query, str):
        qid = space.token_id(query)
        excluded.add(qid)
        q = space.input_vectors[qid].astype(np.float64)
    else:
        q = np.asarray(query, dtype=np.float64)
        if q.shape != (space.config.dim,):
            raise DataError(f"query vector must have shape ({space.config.dim},)")
    qn = np.linalg.norm(q)
    if qn == 0.0:
        raise DataError("query vector has zero norm")
    units = space._units()
    sims = units @ (q / qn)
    mask = ~space._zero_rows
    if kind == "ingredient":
        mask &= np.arange(space.num_tokens) < space.country_offset
    elif kind == "country":
        mask &= np.arange(space.num_tokens) >= space.country_offset
    for t in excluded:
        mask[t] = False
    candidates = np.flatnonzero(mask)
    ranked = candidates[np.lexsort((candidates, -sims[candidates]))]
    return [(space.token_name(int(t)), float(np.clip(sims[t], -1.0, 1.0)))
            for t in ranked[:k]]


def analogy(space: EmbeddingSpace, positive: str, minus: str, plus: str, k: int):
    """Neighbors of v_positive - v_minus + v_plus, ingredients only.

    The three query tokens and all country tokens are excluded.
    """
    q = (space.vector(positive).astype(np.float64)
         - space.vector(minus).astype(np.float64)
         + space.vector(plus).astype(np.float64))
    return nearest(space, q, k, kind="ingredient", exclude=(positive, minus, plus))


def authentic_ingredients(space: EmbeddingSpace, country: str, k: int = 5):
    """The k ingredients nearest to a country token."""
    key = normalize_ingredient(country)
    if key not in space.vocab.country_index:
        raise UnknownTokenError(f"unknown country: {country!r}")
    return nearest(space, key, k, kind="ingredient")


def save_embeddings(space: EmbeddingSpace, path) -> None:
    meta = {
        "format": 1,
        "config": space.config.to_meta(),
        "vocab": space.vocab.to_meta(),
        "vocab_hash": space.vocab.content_hash(),
    }
    arrays = {"input": space.input_vectors, "output": space.output_vectors}
    artifact_io.save_artifact(path, EMBEDDING_KIND, meta, arrays)


def load_embeddings(path) -> EmbeddingSpace:
    meta, arrays = artifact_io.load_artifact(path, EMBEDDING_KIND)
    vocab = Vocabulary.from_meta(meta["vocab"])
    if meta.get("vocab_hash") != vocab.content_hash():
        raise DataError(f"vocabulary hash mismatch in {path}")
    config = EmbeddingConfig.from_meta(meta["config"])
    space = EmbeddingSpace(vocab, arrays["input"], arrays["output"], config)
    space.check_finite()
    return space


def export_text(space: EmbeddingSpace, path) -> None:
    """Interoperability export: one "token<TAB>v1 v2 ... vK" row per token."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"{space.num_tokens} {space.config.dim}\n")
        for t in range(space.num_tokens):
            values = " ".join(f"{v:.6f}" for v in space.input_vectors[t])
            fh.write(f"{space.token_name(t)}\t{values}\n")
