"""Rhetorical typology of questions from a parsed question-answer corpus.

The pipeline extracts phrasing fragments from dependency-parsed question
sentences, mines frequent fragment combinations into motifs, embeds the
motifs in a latent space built from answer-side fragment co-occurrence,
clusters them into question types, and runs statistical analyses over
the typed questions.
"""

from .corpus import (
    Corpus,
    FilterConfig,
    GovernmentTimeline,
    ParsedSentence,
    QAPair,
    SpeakerMeta,
    TimelinePeriod,
    Token,
    filter_analysis_subset,
    load_corpus,
    save_corpus,
    tenure_years,
)
from .errors import (
    ConfigError,
    DegenerateSampleError,
    EmptyMatrixError,
    EmptySentenceError,
    InfeasibleClusteringError,
    MissingArtifactError,
    ModelFormatError,
    ModelVersionError,
    QTypologyError,
    UnassignableQuestionError,
    UndefinedStatisticError,
)
from .fragments import Fragment, FragmentConfig, FragmentSet, extract_fragments
from .latent import (
    AnswerMatrix,
    LatentSpace,
    MotifEmbedding,
    build_answer_matrix,
    build_motif_question_matrix,
    project_motifs,
    project_question,
    truncated_svd,
)
from .motifs import (
    Motif,
    MotifGraph,
    QuestionMotifView,
    build_motif_graph,
    merge_equivalent,
    mine_motifs,
    question_view,
    utterance_view,
)
from .typology import (
    ModelParams,
    TypeAssignment,
    TypeModel,
    assign_question,
    fit_types,
    load_model,
    save_model,
)

__version__ = "0.1.0"

__all__ = [
    "AnswerMatrix",
    "ConfigError",
    "Corpus",
    "DegenerateSampleError",
    "EmptyMatrixError",
    "EmptySentenceError",
    "FilterConfig",
    "Fragment",
    "FragmentConfig",
    "FragmentSet",
    "GovernmentTimeline",
    "InfeasibleClusteringError",
    "LatentSpace",
    "MissingArtifactError",
    "ModelFormatError",
    "ModelParams",
    "ModelVersionError",
    "Motif",
    "MotifEmbedding",
    "MotifGraph",
    "ParsedSentence",
    "QAPair",
    "QTypologyError",
    "QuestionMotifView",
    "SpeakerMeta",
    "TimelinePeriod",
    "Token",
    "TypeAssignment",
    "TypeModel",
    "UnassignableQuestionError",
    "UndefinedStatisticError",
    "assign_question",
    "build_answer_matrix",
    "build_motif_graph",
    "build_motif_question_matrix",
    "extract_fragments",
    "filter_analysis_subset",
    "fit_types",
    "load_corpus",
    "load_model",
    "merge_equivalent",
    "mine_motifs",
    "project_motifs",
    "project_question",
    "question_view",
    "save_corpus",
    "save_model",
    "tenure_years",
    "truncated_svd",
    "utterance_view",
]
