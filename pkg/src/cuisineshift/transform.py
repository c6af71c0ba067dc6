"""Interactive recipe transformation toward a target country style.

A session tracks a recipe through a cumulative sequence of one-out /
one-in ingredient substitutions. For a chosen ingredient, candidate
replacements come either from vector analogies (things that relate to
the target country the way the ingredient relates to the recipe's
current dominant country) or from a brute-force scan maximizing the
classifier probability; every suggestion is annotated with the target
and source probabilities the swap would produce.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .classifier import CuisineDistribution, MLPModel, predict_proba_indices
from .corpus import Vocabulary, active_indices, normalize_ingredient, normalize_ingredients
from .embeddings import EmbeddingSpace, nearest
from .errors import (
    DataError,
    IllegalSwapError,
    UnclassifiableRecipeError,
    UnknownTokenError,
)

_session_counter = itertools.count(1)


@dataclass(frozen=True)
class SubstitutionSuggestion:
    """One candidate swap: drop `original`, add `candidate`.

    analogy_similarity is the cosine between the candidate and the analogy
    query (None for the probability-only baseline); the prob fields are the
    classifier's P(target) and P(source) for the recipe after the swap.
    """

    original: str
    candidate: str
    analogy_similarity: Optional[float]
    prob_target_after: float
    prob_source_after: float


@dataclass(frozen=True)
class SessionState:
    """Recipe contents after a step, with its classification."""

    ingredients: Tuple[str, ...]
    distribution: CuisineDistribution
    applied: Optional[Tuple[str, str]]  # (replaced, replacement), None initially


@dataclass
class TransformSession:
    """A recipe being steered toward target_country, one swap at a time.

    states[0] is the recipe as opened; each apply appends a state. The
    source country is the classifier argmax on the CURRENT contents and is
    re-derived after every swap, never cached across mutations.
    """

    session_id: str
    target_country: str
    states: List[SessionState] = field(default_factory=list)
    dropped: Tuple[str, ...] = ()
    stop_reason: Optional[str] = None  # set by auto_transform

    @property
    def current_ingredients(self) -> Tuple[str, ...]:
        return self.states[-1].ingredients

    @property
    def current_distribution(self) -> CuisineDistribution:
        return self.states[-1].distribution

    @property
    def source_country(self) -> str:
        return self.current_distribution.argmax_country()

    @property
    def history(self) -> List[Tuple[str, str, CuisineDistribution]]:
        """(replaced, replacement, distribution after), oldest first."""
        return [(s.applied[0], s.applied[1], s.distribution) for s in self.states[1:]]

    def target_probability(self) -> float:
        return self.current_distribution.prob(self.target_country)


def classify_ingredients(ingredients: Sequence[str], model: MLPModel) -> CuisineDistribution:
    indices, _ = active_indices(ingredients, model.vocab)
    if not indices:
        raise UnclassifiableRecipeError("no in-vocabulary ingredients to classify")
    probs = predict_proba_indices(model, [indices])[0]
    return CuisineDistribution(probs=probs, countries=model.vocab.countries)


def new_session(ingredients: Sequence[str], target: str, model: MLPModel,
                session_id: Optional[str] = None) -> TransformSession:
    """Open a session. OOV ingredients are dropped and recorded."""
    vocab = model.vocab
    target_key = normalize_ingredient(target)
    if target_key not in vocab.country_index:
        raise UnknownTokenError(f"unknown target country: {target!r}")
    cleaned = normalize_ingredients(ingredients)
    if not cleaned:
        raise DataError("a session needs at least one ingredient")
    kept = tuple(g for g in cleaned if g in vocab.ingredient_index)
    dropped = tuple(g for g in cleaned if g not in vocab.ingredient_index)
    if not kept:
        raise UnclassifiableRecipeError("every ingredient is out-of-vocabulary")
    dist = classify_ingredients(kept, model)
    if session_id is None:
        session_id = f"s{next(_session_counter):06d}"
    session = TransformSession(session_id=session_id, target_country=target_key,
                               dropped=dropped)
    session.states.append(SessionState(ingredients=kept, distribution=dist, applied=None))
    return session


def _swap(ingredients: Tuple[str, ...], replaced: str, replacement: str) -> Tuple[str, ...]:
    """Replace in place, keeping display order."""
    return tuple(replacement if g == replaced else g for g in ingredients)


def _probs_after_swaps(session: TransformSession, swaps: Sequence[Tuple[str, str]],
                       model: MLPModel) -> np.ndarray:
    vocab = model.vocab
    rows = [active_indices(_swap(session.current_ingredients, out, inn), vocab)[0]
            for out, inn in swaps]
    return predict_proba_indices(model, rows)


def _check_suggest_inputs(session: TransformSession, ingredient: str, k: int,
                          vocab: Vocabulary) -> str:
    if k < 1:
        raise DataError(f"k must be >= 1, got {k}")
    name = normalize_ingredient(ingredient)
    if name not in vocab.ingredient_index:
        raise UnknownTokenError(f"unknown ingredient: {ingredient!r}")
    if name not in session.current_ingredients:
        raise IllegalSwapError(f"{name!r} is not in the current recipe")
    return name


def suggest_by_analogy(session: TransformSession, ingredient: str, model: MLPModel,
                       space: EmbeddingSpace, k: int = 10) -> List[SubstitutionSuggestion]:
    """Top-k replacements for one ingredient by analogy similarity.

    Candidates are the ingredient tokens nearest to
    v(ingredient) - v(source) + v(target); the ingredient itself, everything
    already in the recipe, and country tokens are excluded. Ranking is by
    similarity descending (the probability annotations are displayed, not
    used for ranking).
    """
    x = _check_suggest_inputs(session, ingredient, k, model.vocab)
    source = session.source_country
    query = (space.vector(x).astype(np.float64)
             - space.vector(source).astype(np.float64)
             + space.vector(session.target_country).astype(np.float64))
    exclude = set(session.current_ingredients)
    candidates = nearest(space, query, k, kind="ingredient", exclude=exclude)
    swaps = [(x, y) for y, _ in candidates]
    probs = _probs_after_swaps(session, swaps, model)
    t_col = model.vocab.country_id(session.target_country)
    s_col = model.vocab.country_id(source)
    return [
        SubstitutionSuggestion(
            original=x,
            candidate=y,
            analogy_similarity=sim,
            prob_target_after=float(p[t_col]),
            prob_source_after=float(p[s_col]),
        )
        for (y, sim), p in zip(candidates, probs)
    ]


def suggest_by_max_prob(session: TransformSession, ingredient: str, model: MLPModel,
                        k: int = 10, chunk: int = 4096) -> List[SubstitutionSuggestion]:
    """Baseline: scan the whole vocabulary for the best classifier score.

    Ranks every candidate not already in the recipe purely by
    P(target | recipe - ingredient + candidate); ties break by candidate
    vocabulary index. Exhaustive by design, so batched.
    """
    vocab = model.vocab
    x = _check_suggest_inputs(session, ingredient, k, vocab)
    source = session.source_country
    current_ids = {vocab.ingredient_id(g) for g in session.current_ingredients}
    base, _ = active_indices(session.current_ingredients, vocab)
    kept = np.array([i for i in base if i != vocab.ingredient_id(x)], dtype=np.int64)
    add_ids = np.array(
        [i for i in range(vocab.num_ingredients) if i not in current_ids],
        dtype=np.int64,
    )
    t_col = vocab.country_id(session.target_country)
    s_col = vocab.country_id(source)
    target_probs = np.empty(len(add_ids))
    source_probs = np.empty(len(add_ids))
    for lo in range(0, len(add_ids), chunk):
        adds = add_ids[lo : lo + chunk]
        rows = [np.append(kept, a) for a in adds]
        probs = predict_proba_indices(model, rows)
        target_probs[lo : lo + len(adds)] = probs[:, t_col]
        source_probs[lo : lo + len(adds)] = probs[:, s_col]
    order = np.lexsort((add_ids, -target_probs))[:k]
    return [
        SubstitutionSuggestion(
            original=x,
            candidate=vocab.ingredients[int(add_ids[i])],
            analogy_similarity=None,
            prob_target_after=float(target_probs[i]),
            prob_source_after=float(source_probs[i]),
        )
        for i in order
    ]


def apply_substitution(session: TransformSession, replaced: str, replacement: str,
                       model: MLPModel) -> TransformSession:
    """Swap one ingredient, recompute the distribution, append to history."""
    replaced = normalize_ingredient(replaced)
    replacement = normalize_ingredient(replacement)
    current = session.current_ingredients
    if replaced not in current:
        raise IllegalSwapError(f"{replaced!r} is not in the current recipe")
    if replacement == replaced:
        raise IllegalSwapError("swap would not change the recipe")
    if replacement in current:
        raise IllegalSwapError(f"{replacement!r} is already in the recipe")
    if replacement not in model.vocab.ingredient_index:
        raise UnknownTokenError(f"unknown ingredient: {replacement!r}")
    ingredients = _swap(current, replaced, replacement)
    dist = classify_ingredients(ingredients, model)
    session.states.append(
        SessionState(ingredients=ingredients, distribution=dist,
                     applied=(replaced, replacement))
    )
    return session


def auto_transform(ingredients: Sequence[str], target: str, model: MLPModel,
                   space: EmbeddingSpace, max_steps: int = 10,
                   threshold: float = 0.95, k: int = 10) -> TransformSession:
    """Greedy batch loop over the whole recipe.

    Each round collects the analogy suggestions of every current ingredient
    and applies the swap with the highest prob_target_after. Stops when
    P(target) reaches the threshold, when no swap improves on the current
    probability, or after max_steps; the reason lands in
    session.stop_reason.
    """
    if not (0.0 < threshold <= 1.0):
        raise DataError(f"threshold must be in (0, 1], got {threshold}")
    if max_steps < 0:
        raise DataError(f"max_steps must be >= 0, got {max_steps}")
    session = new_session(ingredients, target, model)
    for _ in range(max_steps):
        if session.target_probability() >= threshold:
            session.stop_reason = "threshold"
            return session
        best: Optional[SubstitutionSuggestion] = None
        for x in session.current_ingredients:
            for s in suggest_by_analogy(session, x, model, space, k=k):
                if best is None or s.prob_target_after > best.prob_target_after:
                    best = s
        if best is None or best.prob_target_after <= session.target_probability():
            session.stop_reason = "no_improvement"
            return session
        apply_substitution(session, best.original, best.candidate, model)
    session.stop_reason = (
        "threshold" if session.target_probability() >= threshold else "max_steps"
    )
    return session


def session_record(session: TransformSession) -> dict:
    """Plain-data export: the swap table with per-step distributions.

    Step 0 is the recipe as opened; each later row is one substitution.
    """
    steps = []
    for i, state in enumerate(session.states):
        steps.append(
            {
                "step": i,
                "replaced": state.applied[0] if state.applied else None,
                "replacement": state.applied[1] if state.applied else None,
                "ingredients": list(state.ingredients),
                "distribution": state.distribution.as_mapping(),
            }
        )
    return {
        "session_id": session.session_id,
        "target_country": session.target_country,
        "source_country": session.source_country,
        "dropped": list(session.dropped),
        "stop_reason": session.stop_reason,
        "steps": steps,
    }
