"""Annotation shim: raw JSONL corpora to CoNLL-U with sentiment metadata.

The scoring engine consumes CoNLL-U files; this package produces them from
raw social-media text. Everything here is rule-based and deterministic:
two runs over the same input with the same PIPELINE_VERSION emit identical
bytes, shard count included.
"""

__version__ = "0.1.0"

# Bump whenever tokenization, tagging, dependency, or sentiment rules
# change: downstream feature spaces are only comparable within a version.
PIPELINE_VERSION = __version__
