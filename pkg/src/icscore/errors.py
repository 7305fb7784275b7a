"""Exception types shared across the package.

Parsing errors carry the 1-based line number of the offending input line
so CLI users can jump straight to the problem.
"""


class ICScoreError(Exception):
    """Base class for all errors raised by this package."""


class ConlluError(ICScoreError):
    """Base for CoNLL-U ingestion failures; ``line`` is 1-based."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class MalformedLineError(ConlluError):
    """Token line does not have the expected tab-separated shape."""


class DanglingHeadError(ConlluError):
    """HEAD points outside the sentence's token range."""


class CyclicTreeError(ConlluError):
    """HEAD graph of a sentence is not a single-rooted tree."""


class BadLabelError(ConlluError):
    """Document label is not an integer in 1..7."""


class LexiconFormatError(ICScoreError):
    """Base for lexicon / category-dictionary file problems."""


class DuplicateFeatureIdError(LexiconFormatError):
    pass


class EmptyPhraseError(LexiconFormatError):
    pass


class UnknownRoleError(LexiconFormatError):
    pass


class EmptyCorpusError(ICScoreError):
    """Fit was asked to run on zero documents."""


class InvalidParamsError(ICScoreError, ValueError):
    """Hyperparameter outside its documented domain."""


class LengthMismatchError(ICScoreError, ValueError):
    """Paired arrays differ in length."""


class DegenerateDataError(ICScoreError):
    """Training data empty or otherwise unusable."""


class DimensionMismatchError(ICScoreError):
    """Input vector width differs from the model's feature space."""


class UnknownClassError(ICScoreError, KeyError):
    """Attribution requested for a class the model was not trained on."""


class OutOfRangeSentimentError(ICScoreError, ValueError):
    """Sentiment value outside [-1, 1]."""


class EmptyInputError(ICScoreError, ValueError):
    """Metric or aggregate asked to run on zero items."""


class UnknownLabelError(ICScoreError, ValueError):
    """A label fell outside the class list handed to a metric."""


class TooFewExamplesError(ICScoreError, ValueError):
    """Cross-validation asked for more folds than there are examples."""


class MissingScoresError(ICScoreError):
    """Percentile analysis requested but no record carries a community score."""


class SpaceMismatchError(ICScoreError):
    """Resources handed to a vectorizer disagree with its frozen feature space."""


class UsageError(ICScoreError):
    """CLI invocation problem: bad flags, bad config, missing files. Exit code 2."""
