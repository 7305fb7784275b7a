"""Integrative complexity scoring over dependency-parsed text.

The pipeline reads CoNLL-U corpora, extracts binary semantic features
(keyword lexicon, category dictionary) and syntactic features (POS-tag
distributions, dependency subtree paths), trains a from-scratch multiclass
gradient-boosted tree classifier over bands 1..7, and ships an evaluation
harness plus corpus-scale analytics.
"""

__version__ = "0.1.0"

from .analytics import (
    ScoredRecord,
    ic_distribution,
    length_bin,
    length_binned_means,
    letter_values,
    ols_fit,
    score_corpus,
    score_percentiles,
)
from .baselines import (
    MajorityClassifier,
    NaiveBayesClassifier,
    SingleFeatureBaseline,
    train_majority,
    train_naive_bayes,
    train_single_feature,
)
from .conllu import (
    ParsedDocument,
    Sentence,
    Token,
    iter_parse_conllu,
    parse_conllu,
    parse_conllu_file,
    serialize_conllu,
    serialize_document,
)
from .errors import ICScoreError
from .evaluation import (
    FOUR,
    SEVEN,
    THREE,
    EvalReport,
    ModelSpec,
    aggregate_labels,
    build_report,
    confusion_matrix,
    evaluate_predictions,
    heldout_eval,
    kfold_cv,
    load_prediction_file,
    mse,
    weighted_f1,
)
from .features import DocumentVectorizer, FeatureSpace, fit_feature_space, vectorize
from .gbt import Attribution, GBTClassifier
from .lexicon import (
    CategoryDictionary,
    Lexicon,
    liwc_features,
    load_categories,
    load_categories_file,
    load_lexicon,
    load_lexicon_file,
    semantic_features,
)
from .model_io import load_model, make_model, save_model
from .syntax import enumerate_subtree_paths, pos_distribution, subtree_feature_values

__all__ = [
    "__version__",
    "ParsedDocument",
    "Sentence",
    "Token",
    "parse_conllu",
    "parse_conllu_file",
    "iter_parse_conllu",
    "serialize_conllu",
    "serialize_document",
    "Lexicon",
    "CategoryDictionary",
    "load_lexicon",
    "load_lexicon_file",
    "load_categories",
    "load_categories_file",
    "semantic_features",
    "liwc_features",
    "pos_distribution",
    "enumerate_subtree_paths",
    "subtree_feature_values",
    "FeatureSpace",
    "DocumentVectorizer",
    "fit_feature_space",
    "vectorize",
    "GBTClassifier",
    "Attribution",
    "MajorityClassifier",
    "SingleFeatureBaseline",
    "NaiveBayesClassifier",
    "train_majority",
    "train_single_feature",
    "train_naive_bayes",
    "weighted_f1",
    "mse",
    "confusion_matrix",
    "aggregate_labels",
    "SEVEN",
    "FOUR",
    "THREE",
    "EvalReport",
    "ModelSpec",
    "build_report",
    "kfold_cv",
    "heldout_eval",
    "load_prediction_file",
    "evaluate_predictions",
    "ScoredRecord",
    "score_corpus",
    "ic_distribution",
    "length_bin",
    "length_binned_means",
    "letter_values",
    "ols_fit",
    "score_percentiles",
    "save_model",
    "load_model",
    "make_model",
    "ICScoreError",
]
