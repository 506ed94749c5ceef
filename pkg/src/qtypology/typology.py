"""Question types: clustering motif embeddings and assigning questions.

k-means is implemented here rather than borrowed so that seeding,
restart reduction, tie-breaking, and empty-cluster handling are all
pinned down: identical inputs and seed give identical models on every
run. Distances are Euclidean on the unit-norm embedding vectors.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import InfeasibleClusteringError, ModelFormatError
from .latent import (
    LatentSpace,
    MotifEmbedding,
    project_question,
    read_container,
    write_container,
)
from .motifs import QuestionMotifView


@dataclass(frozen=True)
class ModelParams:
    """Provenance for a fitted model: the pipeline knobs that shaped it."""

    min_support: int
    merge_prob: float
    min_answer_freq: int
    rank: int
    clusters: int
    seed: int

    def to_json(self) -> dict:
        return {
            "min_support": self.min_support,
            "merge_prob": self.merge_prob,
            "min_answer_freq": self.min_answer_freq,
            "rank": self.rank,
            "clusters": self.clusters,
            "seed": self.seed,
        }

    @staticmethod
    def from_json(obj: dict) -> "ModelParams":
        return ModelParams(
            min_support=int(obj["min_support"]),
            merge_prob=float(obj["merge_prob"]),
            min_answer_freq=int(obj["min_answer_freq"]),
            rank=int(obj["rank"]),
            clusters=int(obj["clusters"]),
            seed=int(obj["seed"]),
        )


@dataclass
class TypeModel:
    params: ModelParams
    centroids: np.ndarray  # k x d
    inertia: float
    inertia_history: tuple[float, ...] = ()
    motif_assignment: dict[int, int] = field(default_factory=dict)
    answer_fragment_assignment: dict[str, int] = field(default_factory=dict)
    unassigned_fragments: tuple[str, ...] = ()

    @property
    def k(self) -> int:
        return self.centroids.shape[0]


def _squared_distances(X: np.ndarray, centers: np.ndarray) -> np.ndarray:
    # |x - c|^2 = |x|^2 - 2 x.c + |c|^2, clipped against rounding
    d2 = (
        np.sum(X * X, axis=1)[:, None]
        - 2.0 * (X @ centers.T)
        + np.sum(centers * centers, axis=1)[None, :]
    )
    np.maximum(d2, 0.0, out=d2)
    return d2


def _plus_plus_init(X: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    n = X.shape[0]
    centers = np.empty((k, X.shape[1]), dtype=np.float64)
    centers[0] = X[int(rng.integers(n))]
    d2 = np.sum((X - centers[0]) ** 2, axis=1)
    for i in range(1, k):
        total = float(d2.sum())
        if total <= 0.0:
            idx = int(rng.integers(n))
        else:
            r = rng.random() * total
            idx = int(np.searchsorted(np.cumsum(d2), r, side="right"))
            idx = min(idx, n - 1)
        centers[i] = X[idx]
        np.minimum(d2, np.sum((X - centers[i]) ** 2, axis=1), out=d2)
    return centers


def _lloyd(
    X: np.ndarray, centers: np.ndarray, max_iter: int, tol: float
) -> tuple[np.ndarray, np.ndarray, float, list[float]]:
    k = centers.shape[0]
    history: list[float] = []
    labels = np.zeros(X.shape[0], dtype=np.int64)
    inertia = float("inf")
    for _ in range(max_iter):
        d2 = _squared_distances(X, centers)
        labels = np.argmin(d2, axis=1)
        point_d2 = d2[np.arange(X.shape[0]), labels]
        # an empty cluster steals the point farthest from its own centroid
        for c in range(k):
            if not np.any(labels == c):
                far = int(np.argmax(point_d2))
                centers[c] = X[far]
                labels[far] = c
                point_d2[far] = 0.0
        new_inertia = float(point_d2.sum())
        history.append(new_inertia)
        for c in range(k):
            members = X[labels == c]
            if len(members):
                centers[c] = members.mean(axis=0)
        if inertia != float("inf") and inertia - new_inertia <= tol * max(inertia, 1e-300):
            inertia = new_inertia
            break
        inertia = new_inertia
    return labels, centers, inertia, history


def fit_types(
    embedding: MotifEmbedding,
    k: int = 8,
    seed: int = 0,
    restarts: int = 10,
    max_iter: int = 300,
    tol: float = 1e-6,
    params: Optional[ModelParams] = None,
) -> TypeModel:
    """Cluster the non-degenerate motif embeddings into k types.

    Runs k-means++ plus Lloyd restarts times with per-restart sub-seeds
    derived from seed, and keeps the lowest-inertia run (first one on an
    exact tie). Raises InfeasibleClusteringError when fewer points than
    clusters are available.
    """
    usable = [
        i for i, mid in enumerate(embedding.motif_ids) if mid not in embedding.degenerate
    ]
    X = embedding.vectors[usable]
    if X.shape[0] < k:
        raise InfeasibleClusteringError(
            f"{X.shape[0]} embeddable motifs for k={k} clusters"
        )
    best: Optional[tuple[np.ndarray, np.ndarray, float, list[float]]] = None
    for r in range(restarts):
        rng = np.random.default_rng([seed, r])
        centers = _plus_plus_init(X, k, rng)
        labels, centers, inertia, history = _lloyd(X, centers.copy(), max_iter, tol)
        if best is None or inertia < best[2]:
            best = (labels, centers, inertia, history)
    labels, centers, inertia, history = best
    motif_assignment = {
        embedding.motif_ids[usable[i]]: int(labels[i]) for i in range(len(usable))
    }
    if params is None:
        params = ModelParams(
            min_support=0,
            merge_prob=0.0,
            min_answer_freq=0,
            rank=X.shape[1],
            clusters=k,
            seed=seed,
        )
    return TypeModel(
        params=params,
        centroids=centers,
        inertia=inertia,
        inertia_history=tuple(history),
        motif_assignment=motif_assignment,
    )


@dataclass(frozen=True)
class TypeAssignment:
    owner_id: str
    type_id: int
    distance: float


def assign_question(
    view: QuestionMotifView, embedding: MotifEmbedding, model: TypeModel
) -> TypeAssignment:
    """Type of the nearest centroid to the question's projected vector.

    Exact distance ties resolve to the lowest type id. Questions without
    usable sink motifs raise UnassignableQuestionError from the projection
    step and are expected to be discarded by the caller.
    """
    vec = project_question(view, embedding)
    d2 = np.sum((model.centroids - vec) ** 2, axis=1)
    type_id = int(np.argmin(d2))
    return TypeAssignment(
        owner_id=view.owner_id, type_id=type_id, distance=float(np.sqrt(d2[type_id]))
    )


def project_answer_fragments(space: LatentSpace) -> tuple[np.ndarray, list[int]]:
    """Unit-normalized U rows, plus indices of rows too small to normalize."""
    norms = np.linalg.norm(space.U, axis=1)
    skipped = [i for i in range(space.U.shape[0]) if norms[i] < 1e-12]
    out = np.zeros_like(space.U)
    nonzero = norms >= 1e-12
    out[nonzero] = space.U[nonzero] / norms[nonzero, None]
    return out, skipped


def assign_answer_fragments(space: LatentSpace, model: TypeModel) -> TypeModel:
    """Attach answer-fragment types to the model; returns the same model.

    Each fragment row of U is unit-normalized and typed by its nearest
    centroid; rows with no mass in the latent space are recorded as
    unassigned instead.
    """
    vectors, skipped = project_answer_fragments(space)
    skipped_set = set(skipped)
    assignment: dict[str, int] = {}
    unassigned = []
    d2 = _squared_distances(vectors, model.centroids)
    labels = np.argmin(d2, axis=1)
    for i, label in enumerate(space.fragment_labels):
        if i in skipped_set:
            unassigned.append(label)
        else:
            assignment[label] = int(labels[i])
    model.answer_fragment_assignment = assignment
    model.unassigned_fragments = tuple(unassigned)
    return model


def type_summary(
    model: TypeModel, motif_support: dict[int, int], motif_canonical: dict[int, str],
    space: Optional[LatentSpace] = None,
    top: int = 20,
) -> dict[int, dict]:
    """Per-type digest: strongest motifs and closest answer fragments."""
    summary: dict[int, dict] = {
        t: {"motifs": [], "answer_fragments": []} for t in range(model.k)
    }
    for mid, t in sorted(model.motif_assignment.items()):
        summary[t]["motifs"].append(
            {"motif_id": mid, "support": motif_support[mid], "canonical": motif_canonical[mid]}
        )
    for t in summary:
        summary[t]["motifs"].sort(key=lambda m: (-m["support"], m["canonical"]))
        summary[t]["motifs"] = summary[t]["motifs"][:top]
    if space is not None and model.answer_fragment_assignment:
        vectors, _ = project_answer_fragments(space)
        label_row = {lab: i for i, lab in enumerate(space.fragment_labels)}
        for lab, t in sorted(model.answer_fragment_assignment.items()):
            row = vectors[label_row[lab]]
            dist = float(np.linalg.norm(row - model.centroids[t]))
            summary[t]["answer_fragments"].append({"canonical": lab, "distance": dist})
        for t in summary:
            summary[t]["answer_fragments"].sort(key=lambda f: (f["distance"], f["canonical"]))
            summary[t]["answer_fragments"] = summary[t]["answer_fragments"][:top]
    return summary


def save_model(
    model: TypeModel, space: LatentSpace, embedding: MotifEmbedding, path: str
) -> None:
    """Persist model, space, and embedding in one container.

    Loading and saving again reproduces the file byte for byte.
    """
    write_container(
        path,
        meta={
            "kind": "type_model",
            "params": model.params.to_json(),
            "inertia": model.inertia,
            "inertia_history": list(model.inertia_history),
            "motif_assignment": [
                [mid, t] for mid, t in sorted(model.motif_assignment.items())
            ],
            "answer_fragment_assignment": [
                [lab, t] for lab, t in sorted(model.answer_fragment_assignment.items())
            ],
            "unassigned_fragments": list(model.unassigned_fragments),
            "motif_ids": list(embedding.motif_ids),
            "degenerate": sorted(embedding.degenerate),
            "d": space.d,
            "rank_deficient": space.rank_deficient,
            "fragment_labels": list(space.fragment_labels),
            "answer_labels": list(space.answer_labels),
        },
        arrays={
            "centroids": model.centroids,
            "embedding": embedding.vectors,
            "U": space.U,
            "S": space.S,
            "V": space.V,
        },
    )


def load_model(path: str) -> tuple[TypeModel, LatentSpace, MotifEmbedding]:
    meta, arrays = read_container(path)
    if meta.get("kind") != "type_model":
        raise ModelFormatError(f"{path}: container holds {meta.get('kind')!r}")
    model = TypeModel(
        params=ModelParams.from_json(meta["params"]),
        centroids=arrays["centroids"],
        inertia=float(meta["inertia"]),
        inertia_history=tuple(meta["inertia_history"]),
        motif_assignment={int(mid): int(t) for mid, t in meta["motif_assignment"]},
        answer_fragment_assignment={
            lab: int(t) for lab, t in meta["answer_fragment_assignment"]
        },
        unassigned_fragments=tuple(meta["unassigned_fragments"]),
    )
    space = LatentSpace(
        U=arrays["U"],
        S=arrays["S"],
        V=arrays["V"],
        d=int(meta["d"]),
        fragment_labels=tuple(meta["fragment_labels"]),
        answer_labels=tuple(meta["answer_labels"]),
        rank_deficient=bool(meta["rank_deficient"]),
    )
    embedding = MotifEmbedding(
        motif_ids=tuple(int(m) for m in meta["motif_ids"]),
        vectors=arrays["embedding"],
        degenerate=frozenset(int(m) for m in meta["degenerate"]),
    )
    return model, space, embedding
