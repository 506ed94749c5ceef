"""Latent space over answers, and motif / question projections into it.

Answers are represented by their fragments: the term-document matrix has
one row per answer fragment, one column per answer, raw-count tf entries
reweighted by ln(N/df) idf and row-normalized to unit length. A rank-d
truncated SVD of that matrix gives the space; motifs are folded in from
their question-occurrence vectors, questions by summing the embeddings of
their sink motifs.

All factor math is float64. Deterministic given the config seed: the same
inputs always produce byte-identical factors on one platform.
"""

from __future__ import annotations

import json
import math
import struct
from dataclasses import dataclass
from typing import Sequence

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import svds

from .corpus import Corpus
from .errors import (
    AlignmentError,
    ConfigError,
    EmptyMatrixError,
    ModelFormatError,
    ModelVersionError,
    UnassignableQuestionError,
)
from .fragments import FragmentConfig, canonical_string, extract_fragments
from .motifs import QuestionMotifView

SINGULAR_VALUE_FLOOR = 1e-10  # relative to the largest singular value
_DENSE_CUTOFF = 500  # below this min-dimension, factor the dense array


@dataclass
class AnswerMatrix:
    """tf-idf fragment-by-answer matrix with unit-norm rows."""

    matrix: sp.csr_matrix
    row_labels: tuple[str, ...]  # fragment canonical strings
    col_labels: tuple[str, ...]  # pair ids
    zero_rows: tuple[str, ...]  # rows zeroed out by idf = 0


def build_answer_matrix(
    corpus: Corpus,
    cfg: FragmentConfig = FragmentConfig(),
    min_answer_freq: int = 100,
    smooth_idf: bool = False,
) -> AnswerMatrix:
    """Count answer fragments per pair and reweight.

    tf counts how many answer sentences of the pair contain the fragment.
    Fragments present in fewer than min_answer_freq answers are dropped;
    dropping everything raises EmptyMatrixError. A fragment present in
    every answer has idf 0 under the unsmoothed scheme, leaving an
    all-zero row that is kept but flagged.
    """
    if min_answer_freq < 1:
        raise ConfigError(f"min_answer_freq must be >= 1, got {min_answer_freq}")
    n_answers = len(corpus)
    tf: dict[str, dict[int, int]] = {}
    for col, pair in enumerate(corpus):
        for sent in pair.answer_sentences:
            for frag in extract_fragments(sent, cfg).fragments:
                canon = canonical_string(frag)
                row = tf.setdefault(canon, {})
                row[col] = row.get(col, 0) + 1
    kept = sorted(c for c, cols in tf.items() if len(cols) >= min_answer_freq)
    if not kept:
        raise EmptyMatrixError(
            f"no answer fragment occurs in >= {min_answer_freq} answers"
        )
    rows, cols, vals = [], [], []
    zero_rows = []
    for r, canon in enumerate(kept):
        df = len(tf[canon])
        if smooth_idf:
            idf = math.log((1 + n_answers) / (1 + df)) + 1.0
        else:
            idf = math.log(n_answers / df)
        if idf == 0.0:
            zero_rows.append(canon)
            continue
        entries = sorted(tf[canon].items())
        norm = math.sqrt(sum((count * idf) ** 2 for _, count in entries))
        for c, count in entries:
            rows.append(r)
            cols.append(c)
            vals.append(count * idf / norm)
    matrix = sp.csr_matrix(
        (vals, (rows, cols)), shape=(len(kept), n_answers), dtype=np.float64
    )
    return AnswerMatrix(
        matrix=matrix,
        row_labels=tuple(kept),
        col_labels=tuple(p.pair_id for p in corpus),
        zero_rows=tuple(zero_rows),
    )


@dataclass
class LatentSpace:
    """Rank-d factors of the answer matrix: A is approximately U S Vt."""

    U: np.ndarray  # fragments x d
    S: np.ndarray  # d, strictly positive, descending
    V: np.ndarray  # answers x d
    d: int
    fragment_labels: tuple[str, ...]
    answer_labels: tuple[str, ...]
    rank_deficient: bool = False


def _fix_signs(U: np.ndarray, V: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    # convention: the largest-magnitude entry of each U column is positive
    for j in range(U.shape[1]):
        idx = int(np.argmax(np.abs(U[:, j])))
        if U[idx, j] < 0:
            U[:, j] = -U[:, j]
            V[:, j] = -V[:, j]
    return U, V


def truncated_svd(answer_matrix: AnswerMatrix, rank: int, seed: int = 0) -> LatentSpace:
    """Top-rank SVD of the answer matrix.

    rank must not exceed the smaller matrix dimension. When the matrix has
    lower numerical rank than requested, the trailing components are
    dropped (singular values below 1e-10 of the largest) and the result is
    marked rank_deficient.
    """
    A = answer_matrix.matrix
    n_rows, n_cols = A.shape
    if rank < 1:
        raise ConfigError(f"rank must be >= 1, got {rank}")
    if rank > min(n_rows, n_cols):
        raise ConfigError(
            f"rank {rank} exceeds matrix dimensions {n_rows}x{n_cols}"
        )
    if min(n_rows, n_cols) <= _DENSE_CUTOFF or rank == min(n_rows, n_cols):
        dense = A.toarray()
        U_full, s_full, Vt_full = np.linalg.svd(dense, full_matrices=False)
        U = U_full[:, :rank]
        s = s_full[:rank]
        Vt = Vt_full[:rank]
    else:
        rng = np.random.default_rng(seed)
        v0 = rng.standard_normal(min(n_rows, n_cols))
        U, s, Vt = svds(A, k=rank, v0=v0)
        order = np.argsort(s)[::-1]
        U, s, Vt = U[:, order], s[order], Vt[order]
    keep = s >= SINGULAR_VALUE_FLOOR * (s[0] if s.size and s[0] > 0 else 1.0)
    effective = int(np.count_nonzero(keep))
    U = np.ascontiguousarray(U[:, :effective])
    s = np.ascontiguousarray(s[:effective])
    V = np.ascontiguousarray(Vt[:effective].T)
    U, V = _fix_signs(U, V)
    return LatentSpace(
        U=U,
        S=s,
        V=V,
        d=effective,
        fragment_labels=answer_matrix.row_labels,
        answer_labels=answer_matrix.col_labels,
        rank_deficient=effective < rank,
    )


@dataclass
class QuestionMatrix:
    """Binary motif-by-question occurrence matrix with unit-norm rows."""

    matrix: sp.csr_matrix
    motif_ids: tuple[int, ...]
    col_labels: tuple[str, ...]


def build_motif_question_matrix(
    views: Sequence[QuestionMotifView], motif_ids: Sequence[int]
) -> QuestionMatrix:
    """Row i, column j is set when motif i occurs in question j.

    Rows are scaled to unit norm; a motif contained in no question keeps
    an all-zero row and will project to a degenerate embedding.
    """
    col_of = {v.owner_id: j for j, v in enumerate(views)}
    if len(col_of) != len(views):
        raise AlignmentError("duplicate owner ids among question views")
    row_of = {mid: i for i, mid in enumerate(motif_ids)}
    counts = [0] * len(motif_ids)
    for v in views:
        for mid in v.contained:
            if mid in row_of:
                counts[row_of[mid]] += 1
    rows, cols, vals = [], [], []
    for j, v in enumerate(views):
        for mid in sorted(v.contained):
            i = row_of.get(mid)
            if i is not None:
                rows.append(i)
                cols.append(j)
                vals.append(1.0 / math.sqrt(counts[i]))
    matrix = sp.csr_matrix(
        (vals, (rows, cols)), shape=(len(motif_ids), len(views)), dtype=np.float64
    )
    return QuestionMatrix(
        matrix=matrix,
        motif_ids=tuple(motif_ids),
        col_labels=tuple(v.owner_id for v in views),
    )


@dataclass
class MotifEmbedding:
    """Unit-norm d-vectors per motif; degenerate ids projected to zero."""

    motif_ids: tuple[int, ...]
    vectors: np.ndarray  # motifs x d
    degenerate: frozenset[int]

    def vector_of(self, motif_id: int) -> np.ndarray:
        return self.vectors[self.motif_ids.index(motif_id)]


def project_motifs(question_matrix: QuestionMatrix, space: LatentSpace) -> MotifEmbedding:
    """Fold motif occurrence vectors into the latent space: Q V inv(S).

    Question columns must align with the answer columns the space was
    built from. Rows are unit-normalized afterwards; rows with no mass in
    the retained components are flagged degenerate and left at zero.
    """
    if question_matrix.col_labels != space.answer_labels:
        raise AlignmentError(
            "question matrix columns do not match the latent space's answers"
        )
    hat = question_matrix.matrix @ space.V / space.S
    norms = np.linalg.norm(hat, axis=1)
    degenerate = []
    out = np.zeros_like(hat)
    for i, mid in enumerate(question_matrix.motif_ids):
        if norms[i] < 1e-12:
            degenerate.append(mid)
        else:
            out[i] = hat[i] / norms[i]
    return MotifEmbedding(
        motif_ids=question_matrix.motif_ids,
        vectors=out,
        degenerate=frozenset(degenerate),
    )


def project_question(view: QuestionMotifView, embedding: MotifEmbedding) -> np.ndarray:
    """Embed a question as the normalized sum of its sink motif vectors.

    The sum is scaled by 1/sqrt(number of sinks) before normalization,
    which leaves the direction unchanged but keeps intermediate magnitudes
    tame. Questions with no usable (non-degenerate) sink cannot be placed.
    """
    usable = [mid for mid in sorted(view.sinks) if mid not in embedding.degenerate]
    if not usable:
        raise UnassignableQuestionError(
            f"question {view.owner_id!r} has no usable sink motifs"
        )
    idx = {mid: i for i, mid in enumerate(embedding.motif_ids)}
    total = np.zeros(embedding.vectors.shape[1])
    for mid in usable:
        total += embedding.vectors[idx[mid]]
    total /= math.sqrt(len(usable))
    norm = np.linalg.norm(total)
    if norm < 1e-12:
        raise UnassignableQuestionError(
            f"question {view.owner_id!r}: sink embeddings cancel out"
        )
    return total / norm


# ---------------------------------------------------------------------------
# binary container: magic, version, JSON header, raw float64 arrays

_MAGIC = b"QTYPCTR\x00"
_VERSION = 1


def write_container(path: str, meta: dict, arrays: dict[str, np.ndarray]) -> None:
    header = {
        "meta": meta,
        "arrays": [
            {"name": name, "shape": list(arr.shape)} for name, arr in arrays.items()
        ],
    }
    blob = json.dumps(header, sort_keys=True, separators=(",", ":")).encode("utf-8")
    with open(path, "wb") as fh:
        fh.write(_MAGIC)
        fh.write(struct.pack("<I", _VERSION))
        fh.write(struct.pack("<Q", len(blob)))
        fh.write(blob)
        for arr in arrays.values():
            fh.write(np.ascontiguousarray(arr, dtype="<f8").tobytes())


def read_container(path: str) -> tuple[dict, dict[str, np.ndarray]]:
    with open(path, "rb") as fh:
        magic = fh.read(len(_MAGIC))
        if magic != _MAGIC:
            raise ModelFormatError(f"{path}: bad magic {magic!r}")
        raw = fh.read(4)
        if len(raw) < 4:
            raise ModelFormatError(f"{path}: truncated version field")
        (version,) = struct.unpack("<I", raw)
        if version != _VERSION:
            raise ModelVersionError(
                f"{path}: container version {version}, expected {_VERSION}"
            )
        raw = fh.read(8)
        if len(raw) < 8:
            raise ModelFormatError(f"{path}: truncated header length")
        (hlen,) = struct.unpack("<Q", raw)
        blob = fh.read(hlen)
        if len(blob) < hlen:
            raise ModelFormatError(f"{path}: truncated header")
        try:
            header = json.loads(blob.decode("utf-8"))
        except (UnicodeDecodeError, json.JSONDecodeError) as exc:
            raise ModelFormatError(f"{path}: unreadable header: {exc}") from exc
        arrays = {}
        for spec in header["arrays"]:
            shape = tuple(spec["shape"])
            count = int(np.prod(shape)) if shape else 1
            data = fh.read(count * 8)
            if len(data) < count * 8:
                raise ModelFormatError(f"{path}: truncated array {spec['name']!r}")
            arrays[spec["name"]] = np.frombuffer(data, dtype="<f8").reshape(shape).copy()
        return header["meta"], arrays


def save_space(space: LatentSpace, path: str) -> None:
    write_container(
        path,
        meta={
            "kind": "latent_space",
            "d": space.d,
            "rank_deficient": space.rank_deficient,
            "fragment_labels": list(space.fragment_labels),
            "answer_labels": list(space.answer_labels),
        },
        arrays={"U": space.U, "S": space.S, "V": space.V},
    )


def load_space(path: str) -> LatentSpace:
    meta, arrays = read_container(path)
    if meta.get("kind") != "latent_space":
        raise ModelFormatError(f"{path}: container holds {meta.get('kind')!r}")
    return LatentSpace(
        U=arrays["U"],
        S=arrays["S"],
        V=arrays["V"],
        d=int(meta["d"]),
        fragment_labels=tuple(meta["fragment_labels"]),
        answer_labels=tuple(meta["answer_labels"]),
        rank_deficient=bool(meta["rank_deficient"]),
    )
