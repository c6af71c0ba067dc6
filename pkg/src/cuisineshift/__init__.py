"""Cuisine-style mixture classification, Newton-diagram visualization,
and analogy-based recipe transformation."""

from .classifier import (
    CuisineDistribution,
    EvaluationReport,
    MLPConfig,
    MLPModel,
    evaluate,
    load_model,
    predict,
    probe_ingredient,
    save_model,
    train_classifier,
)
from .corpus import (
    Recipe,
    Vocabulary,
    build_vocabulary,
    load_corpus,
    make_recipe,
    split,
    vectorize,
)
from .embeddings import (
    EmbeddingConfig,
    EmbeddingSpace,
    analogy,
    authentic_ingredients,
    load_embeddings,
    nearest,
    save_embeddings,
    similarity,
    train_embeddings,
)
from .errors import (
    CuisineShiftError,
    DataError,
    IllegalSwapError,
    NumericalError,
    UnclassifiableRecipeError,
    UnknownTokenError,
)
from .layout import (
    CircleLayout,
    DiagramPoint,
    barycentric_position,
    country_similarity,
    render_svg,
    spectral_circle_layout,
)
from .transform import (
    SubstitutionSuggestion,
    TransformSession,
    apply_substitution,
    auto_transform,
    new_session,
    suggest_by_analogy,
    suggest_by_max_prob,
)

__version__ = "0.1.0"

__all__ = [
    "CuisineDistribution", "EvaluationReport", "MLPConfig", "MLPModel",
    "evaluate", "load_model", "predict", "probe_ingredient", "save_model",
    "train_classifier",
    "Recipe", "Vocabulary", "build_vocabulary", "load_corpus", "make_recipe",
    "split", "vectorize",
    "EmbeddingConfig", "EmbeddingSpace", "analogy", "authentic_ingredients",
    "load_embeddings", "nearest", "save_embeddings", "similarity",
    "train_embeddings",
    "CuisineShiftError", "DataError", "IllegalSwapError", "NumericalError",
    "UnclassifiableRecipeError", "UnknownTokenError",
    "CircleLayout", "DiagramPoint", "barycentric_position",
    "country_similarity", "render_svg", "spectral_circle_layout",
    "SubstitutionSuggestion", "TransformSession", "apply_substitution",
    "auto_transform", "new_session", "suggest_by_analogy",
    "suggest_by_max_prob",
    "__version__",
]
