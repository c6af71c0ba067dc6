"""Recipe corpus ingestion, vocabularies, splitting and vectorization.

The input file is the public "What's Cooking" export schema: a UTF-8 JSON
array of records {"id": ..., "cuisine": ..., "ingredients": [...]}, where
the cuisine field may be absent (unlabeled records).
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import DataError, UnclassifiableRecipeError, UnknownTokenError


def normalize_ingredient(raw: str) -> str:
    """Lowercase, trim, and collapse internal whitespace. Nothing else."""
    return " ".join(raw.lower().split())


def normalize_ingredients(raw: Iterable[str]) -> tuple:
    """Normalize and deduplicate, preserving first-appearance order."""
    seen = {}
    for item in raw:
        name = normalize_ingredient(str(item))
        if name:
            seen[name] = None
    return tuple(seen)


@dataclass(frozen=True)
class Recipe:
    """One recipe: opaque id, optional cuisine label, deduplicated ingredients.

    Ingredients are stored as a tuple in first-appearance order so that
    downstream index assignment stays deterministic, but they carry set
    semantics (no duplicates survive normalization).
    """

    id: object
    cuisine: Optional[str]
    ingredients: tuple

    def __post_init__(self):
        if not self.ingredients:
            raise DataError(f"recipe {self.id!r} has no ingredients")

    @property
    def ingredient_set(self) -> frozenset:
        return frozenset(self.ingredients)


def make_recipe(id, ingredients: Iterable[str], cuisine: Optional[str] = None) -> Recipe:
    return Recipe(id=id, cuisine=cuisine, ingredients=normalize_ingredients(ingredients))


def load_corpus(path) -> list:
    """Load and normalize a recipe JSON export.

    Raises DataError for an unreadable file, a malformed record (missing or
    empty ingredients array), or an empty corpus.
    """
    path = Path(path)
    try:
        with open(path, encoding="utf-8") as fh:
            records = json.load(fh)
    except OSError as exc:
        raise DataError(f"cannot read corpus {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise DataError(f"corpus {path} is not valid JSON: {exc}") from exc
    if not isinstance(records, list):
        raise DataError(f"corpus {path} must be a JSON array of records")
    recipes = []
    for pos, rec in enumerate(records):
        if not isinstance(rec, dict) or "ingredients" not in rec:
            raise DataError(f"record #{pos} has no ingredients array")
        if not isinstance(rec["ingredients"], list):
            raise DataError(f"record #{pos}: ingredients is not an array")
        ingredients = normalize_ingredients(rec["ingredients"])
        if not ingredients:
            raise DataError(f"record #{pos} has no usable ingredients")
        cuisine = rec.get("cuisine")
        if cuisine is not None:
            cuisine = str(cuisine).strip().lower()
        recipes.append(Recipe(id=rec.get("id", pos), cuisine=cuisine, ingredients=ingredients))
    if not recipes:
        raise DataError(f"corpus {path} is empty")
    return recipes


@dataclass(frozen=True)
class Vocabulary:
    """Frozen bijections ingredient<->index and country<->index.

    Built from the training split only; indices are dense, zero-based, and
    assigned in first-appearance order.
    """

    ingredients: tuple
    countries: tuple
    ingredient_index: dict = field(repr=False, compare=False, default=None)
    country_index: dict = field(repr=False, compare=False, default=None)

    def __post_init__(self):
        object.__setattr__(self, "ingredient_index", {g: i for i, g in enumerate(self.ingredients)})
        object.__setattr__(self, "country_index", {c: i for i, c in enumerate(self.countries)})

    @property
    def num_ingredients(self) -> int:
        return len(self.ingredients)

    @property
    def num_countries(self) -> int:
        return len(self.countries)

    def ingredient_id(self, name: str) -> int:
        try:
            return self.ingredient_index[name]
        except KeyError:
            raise UnknownTokenError(f"unknown ingredient: {name!r}") from None

    def country_id(self, name: str) -> int:
        try:
            return self.country_index[name]
        except KeyError:
            raise UnknownTokenError(f"unknown country: {name!r}") from None

    def content_hash(self) -> str:
        payload = json.dumps([list(self.ingredients), list(self.countries)]).encode()
        return hashlib.sha256(payload).hexdigest()

    def to_meta(self) -> dict:
        return {"ingredients": list(self.ingredients), "countries": list(self.countries)}

    @classmethod
    def from_meta(cls, meta: dict) -> "Vocabulary":
        return cls(ingredients=tuple(meta["ingredients"]), countries=tuple(meta["countries"]))


def build_vocabulary(recipes: Sequence[Recipe]) -> Vocabulary:
    """Index every ingredient and country in first-appearance order.

    All recipes must be labeled: the country table is part of the contract.
    """
    if not recipes:
        raise DataError("cannot build a vocabulary from an empty corpus")
    ingredients = {}
    countries = {}
    for recipe in recipes:
        if recipe.cuisine is None:
            raise DataError(f"recipe {recipe.id!r} is unlabeled")
        countries.setdefault(recipe.cuisine, None)
        for name in recipe.ingredients:
            ingredients.setdefault(name, None)
    return Vocabulary(ingredients=tuple(ingredients), countries=tuple(countries))


@dataclass(frozen=True)
class DatasetSplit:
    train: tuple
    test: tuple
    seed: int
    ratio: float


def split(recipes: Sequence[Recipe], ratio: float, seed: int) -> DatasetSplit:
    """Seeded uniform shuffle followed by a prefix cut.

    The train size is round(ratio * n), clamped so neither side is empty;
    identical (corpus, ratio, seed) always produces the identical partition.
    """
    if not 0.0 < ratio < 1.0:
        raise DataError(f"split ratio must be in (0, 1), got {ratio}")
    n = len(recipes)
    if n < 2:
        raise DataError("need at least 2 recipes to split")
    order = np.random.default_rng(seed).permutation(n)
    n_train = int(round(ratio * n))
    n_train = min(max(n_train, 1), n - 1)
    train = tuple(recipes[i] for i in order[:n_train])
    test = tuple(recipes[i] for i in order[n_train:])
    return DatasetSplit(train=train, test=test, seed=seed, ratio=ratio)


@dataclass(frozen=True)
class IndicatorVector:
    """Binary ingredient-presence vector plus the count of dropped OOV names."""

    values: np.ndarray
    dropped: int


def active_indices(ingredients: Iterable[str], vocab: Vocabulary):
    """Map ingredient names to vocabulary indices, dropping OOV ones.

    Returns (sorted unique indices, dropped count).
    """
    index = vocab.ingredient_index
    hits = set()
    dropped = 0
    for name in ingredients:
        idx = index.get(name)
        if idx is None:
            dropped += 1
        else:
            hits.add(idx)
    return sorted(hits), dropped


def vectorize(recipe: Recipe, vocab: Vocabulary, allow_empty: bool = False) -> IndicatorVector:
    """Binary indicator over the ingredient vocabulary.

    Out-of-vocabulary ingredients are silently dropped and counted. If every
    ingredient is OOV the recipe is unclassifiable and this raises, unless
    allow_empty is set (evaluation keeps such recipes to preserve counting
    identities).
    """
    indices, dropped = active_indices(recipe.ingredients, vocab)
    if not indices and not allow_empty:
        raise UnclassifiableRecipeError(
            f"recipe {recipe.id!r}: every ingredient is out of vocabulary"
        )
    values = np.zeros(vocab.num_ingredients, dtype=np.float32)
    values[indices] = 1.0
    return IndicatorVector(values=values, dropped=dropped)
