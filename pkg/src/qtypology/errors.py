"""Exception types shared across the pipeline.

Record-level problems found while loading a corpus are collected into a
report rather than raised; everything here signals a condition the caller
must handle (bad configuration, unusable inputs, broken artifacts).
"""

from __future__ import annotations


class QTypologyError(Exception):
    """Base class for all package errors."""


class ConfigError(QTypologyError):
    """A configuration value is missing, malformed, or out of range."""


class EmptySentenceError(QTypologyError):
    """Fragment extraction was asked to process a sentence with no tokens."""


class EmptyMatrixError(QTypologyError):
    """Every answer fragment fell below the document-frequency cutoff."""


class AlignmentError(QTypologyError):
    """Two matrices that must share an axis labelling do not."""


class RankWarning(QTypologyError):
    """Requested factor rank exceeds what the matrix supports."""


class InfeasibleClusteringError(QTypologyError):
    """Fewer usable vectors than requested clusters."""


class UnassignableQuestionError(QTypologyError):
    """A question has no usable sink motifs and cannot be typed."""


class DegenerateSampleError(QTypologyError):
    """A statistical test received a sample it cannot score."""


class UndefinedStatisticError(QTypologyError):
    """A statistic was requested for an empty group."""


class ModelFormatError(QTypologyError):
    """A saved model or matrix container cannot be read."""


class ModelVersionError(ModelFormatError):
    """The container was written by an incompatible format version."""


class MissingArtifactError(QTypologyError):
    """A pipeline stage needs an artifact a previous stage has not produced."""

    def __init__(self, stage: str, artifact: str):
        self.stage = stage
        self.artifact = artifact
        super().__init__(
            f"stage {stage!r} requires missing artifact {artifact!r}; "
            f"run the producing stage first"
        )
