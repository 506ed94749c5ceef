"""Staged command line pipeline.

Each subcommand runs one stage against a working directory, reading the
artifacts earlier stages left there and writing its own plus a manifest
recording parameter values, input and output content hashes, and timing.
Re-running a stage with the same inputs reproduces its artifacts byte for
byte; only the manifests carry timestamps.

Exit codes: 0 success, 2 configuration problems, 3 a required artifact is
missing, 4 the data itself cannot be processed.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import hashlib
import json
import logging
import math
import os
import sys
import time
from dataclasses import dataclass, field
from datetime import date as Date
from datetime import datetime, timezone
from pathlib import Path
from typing import Optional

from . import analysis as ana
from .corpus import (
    Corpus,
    FilterConfig,
    GovernmentTimeline,
    ParsedSentence,
    filter_analysis_subset,
    load_corpus,
    question_sentences_of,
    save_corpus,
)
from .errors import ConfigError, MissingArtifactError, QTypologyError
from .fragments import (
    FragmentConfig,
    FragmentSet,
    dump_fragments_tsv,
    extract_fragments,
    load_fragments_tsv,
)
from .latent import (
    build_answer_matrix,
    build_motif_question_matrix,
    load_space,
    project_motifs,
    project_question,
    save_space,
    truncated_svd,
)
from .motifs import (
    build_motif_graph,
    dag_to_json,
    load_motif_graph,
    load_views_jsonl,
    merges_to_tsv,
    motifs_to_tsv,
    question_view,
    utterance_view,
    views_to_jsonl,
)
from .typology import (
    ModelParams,
    TypeAssignment,
    assign_answer_fragments,
    assign_question,
    fit_types,
    load_model,
    save_model,
    type_summary,
)
from .errors import UnassignableQuestionError

log = logging.getLogger("qtypology")

WORKDIR_ENV = "QTYPOLOGY_WORKDIR"

STAGES = (
    "ingest",
    "fragments",
    "motifs",
    "space",
    "fit",
    "assign",
    "analyze",
    "report",
)

A_METADATA = "corpus.metadata.jsonl"
A_PARSES = "corpus.parses.conllu"
A_LOAD_REPORT = "load_report.json"
A_QFRAGS = "question_fragments.tsv"
A_MOTIFS = "motifs.tsv"
A_MERGES = "merges.tsv"
A_DAG = "dag.json"
A_VIEWS = "views.jsonl"
A_SPACE = "space.bin"
A_SPACE_REPORT = "space_report.json"
A_MODEL = "model.bin"
A_FIT_REPORT = "fit_report.json"
A_ASSIGNMENTS = "assignments.tsv"
A_ASSIGN_REPORT = "assign_report.json"
A_ANALYSIS = "analysis.json"
A_REPORT = "report.json"
A_FEATURES = "features.csv"


@dataclass
class PipelineConfig:
    metadata_path: Path
    parses_path: Path
    timeline: Optional[GovernmentTimeline]
    elections: list[Date]
    filters: FilterConfig
    fragments: FragmentConfig
    min_support: int
    merge_prob: float
    max_motif_size: int
    min_answer_freq: int
    smooth_idf: bool
    rank: int
    clusters: int
    seed: int
    restarts: int
    workdir: Optional[Path] = None


_KNOWN_KEYS = {
    "paths",
    "timeline",
    "elections",
    "filters",
    "fragments",
    "min_support",
    "merge_prob",
    "max_motif_size",
    "min_answer_freq",
    "smooth_idf",
    "rank",
    "clusters",
    "seed",
    "restarts",
    "workdir",
}


def _require_int(obj: dict, key: str, default: int, minimum: int) -> int:
    value = obj.get(key, default)
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"config key {key!r} must be an integer")
    if value < minimum:
        raise ConfigError(f"config key {key!r} must be >= {minimum}, got {value}")
    return value


def load_config(path: str | Path) -> PipelineConfig:
    """Read and validate the pipeline configuration file."""
    path = Path(path)
    try:
        with open(path, encoding="utf-8") as fh:
            obj = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
    if not isinstance(obj, dict):
        raise ConfigError("config root must be an object")
    unknown = set(obj) - _KNOWN_KEYS
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")

    paths = obj.get("paths")
    if not isinstance(paths, dict) or not {"metadata", "parses"} <= set(paths):
        raise ConfigError("config needs paths.metadata and paths.parses")
    base = path.parent
    metadata_path = (base / paths["metadata"]).resolve()
    parses_path = (base / paths["parses"]).resolve()

    timeline = None
    if "timeline" in obj:
        if not isinstance(obj["timeline"], list):
            raise ConfigError("timeline must be a list of periods")
        timeline = GovernmentTimeline.from_json(obj["timeline"])

    elections = []
    for raw in obj.get("elections", []):
        try:
            elections.append(Date.fromisoformat(raw))
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"bad election date {raw!r}: {exc}") from exc

    filters_obj = obj.get("filters", {})
    if not isinstance(filters_obj, dict):
        raise ConfigError("filters must be an object")
    for key, value in filters_obj.items():
        if key not in ("single_question_only", "require_metadata", "exclude_shadow"):
            raise ConfigError(f"unknown filter {key!r}")
        if not isinstance(value, bool):
            raise ConfigError(f"filter {key!r} must be a bool")
    filters = FilterConfig(**filters_obj)

    fragments_obj = obj.get("fragments", {})
    if not isinstance(fragments_obj, dict):
        raise ConfigError("fragments must be an object")
    try:
        fragments = FragmentConfig.from_json(fragments_obj)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad fragment config: {exc}") from exc

    merge_prob = obj.get("merge_prob", 0.9)
    if isinstance(merge_prob, bool) or not isinstance(merge_prob, (int, float)):
        raise ConfigError("merge_prob must be a number")
    merge_prob = float(merge_prob)
    if not 0.5 < merge_prob <= 1.0:
        raise ConfigError(f"merge_prob must be in (0.5, 1], got {merge_prob}")

    smooth_idf = obj.get("smooth_idf", False)
    if not isinstance(smooth_idf, bool):
        raise ConfigError("smooth_idf must be a bool")

    seed = obj.get("seed", 0)
    if isinstance(seed, bool) or not isinstance(seed, int):
        raise ConfigError("seed must be an integer")

    workdir = None
    if "workdir" in obj:
        if not isinstance(obj["workdir"], str):
            raise ConfigError("workdir must be a string")
        workdir = (base / obj["workdir"]).resolve()

    return PipelineConfig(
        metadata_path=metadata_path,
        parses_path=parses_path,
        timeline=timeline,
        elections=elections,
        filters=filters,
        fragments=fragments,
        min_support=_require_int(obj, "min_support", 100, 1),
        merge_prob=merge_prob,
        max_motif_size=_require_int(obj, "max_motif_size", 4, 1),
        min_answer_freq=_require_int(obj, "min_answer_freq", 100, 1),
        smooth_idf=smooth_idf,
        rank=_require_int(obj, "rank", 25, 1),
        clusters=_require_int(obj, "clusters", 8, 1),
        seed=seed,
        restarts=_require_int(obj, "restarts", 10, 1),
        workdir=workdir,
    )


def _sha256_file(path: Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


@dataclass
class StageResult:
    inputs: list[Path] = field(default_factory=list)
    outputs: list[Path] = field(default_factory=list)
    params: dict = field(default_factory=dict)


def _write_manifest(workdir: Path, stage: str, result: StageResult, elapsed: float) -> None:
    def rel(p: Path) -> str:
        try:
            return str(p.relative_to(workdir))
        except ValueError:
            return str(p)

    manifest = {
        "stage": stage,
        "params": result.params,
        "inputs": {rel(p): _sha256_file(p) for p in sorted(result.inputs)},
        "outputs": {rel(p): _sha256_file(p) for p in sorted(result.outputs)},
        "elapsed_seconds": round(elapsed, 3),
        "finished": datetime.now(timezone.utc).isoformat(timespec="seconds"),
    }
    with open(workdir / f"{stage}.manifest.json", "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _require_artifact(workdir: Path, name: str, stage: str) -> Path:
    path = workdir / name
    if not path.exists():
        raise MissingArtifactError(stage, name)
    return path


def _load_canonical(cfg: PipelineConfig, workdir: Path, stage: str) -> Corpus:
    metadata = _require_artifact(workdir, A_METADATA, stage)
    parses = _require_artifact(workdir, A_PARSES, stage)
    result = load_corpus(str(metadata), str(parses), timeline=cfg.timeline)
    if result.report.count():
        # the canonical files were written by ingest; anything wrong now
        # means they were edited or truncated after the fact
        raise QTypologyError(
            f"canonical corpus failed to reload cleanly: {result.report.kinds()}"
        )
    return result.corpus


def _write_json(path: Path, obj: dict) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True)
        fh.write("\n")


def stage_ingest(cfg: PipelineConfig, workdir: Path, workers: int) -> StageResult:
    for p in (cfg.metadata_path, cfg.parses_path):
        if not p.exists():
            raise QTypologyError(f"input file not found: {p}")
    result = load_corpus(
        str(cfg.metadata_path), str(cfg.parses_path), timeline=cfg.timeline
    )
    corpus, report = result.corpus, result.report
    if len(corpus) == 0:
        raise QTypologyError("no usable question-answer pairs in the input")
    log.info("ingest: %d pairs retained, %d records rejected", len(corpus), report.count())
    out_meta = workdir / A_METADATA
    out_parses = workdir / A_PARSES
    save_corpus(corpus, str(out_meta), str(out_parses))
    report_path = workdir / A_LOAD_REPORT
    _write_json(
        report_path,
        {
            "retained": len(corpus),
            "rejected": report.count(),
            "rejected_by_kind": report.kinds(),
            "first_errors": [
                {"kind": e.kind, "where": e.where, "message": e.message}
                for e in report.errors[:50]
            ],
        },
    )
    return StageResult(
        inputs=[cfg.metadata_path, cfg.parses_path],
        outputs=[out_meta, out_parses, report_path],
        params={"timeline_periods": len(cfg.timeline.periods) if cfg.timeline else 0},
    )


def _extract_for_pool(args: tuple[ParsedSentence, FragmentConfig]) -> FragmentSet:
    sentence, cfg = args
    return extract_fragments(sentence, cfg)


def stage_fragments(cfg: PipelineConfig, workdir: Path, workers: int) -> StageResult:
    corpus = _load_canonical(cfg, workdir, "fragments")
    sentences = [
        sent for pair in corpus for sent in question_sentences_of(pair)
    ]
    if workers > 1:
        # chunked map keeps results in submission order
        chunksize = max(1, len(sentences) // (workers * 4))
        with concurrent.futures.ProcessPoolExecutor(max_workers=workers) as pool:
            sets = list(
                pool.map(
                    _extract_for_pool,
                    ((s, cfg.fragments) for s in sentences),
                    chunksize=chunksize,
                )
            )
    else:
        sets = [extract_fragments(s, cfg.fragments) for s in sentences]
    out = workdir / A_QFRAGS
    dump_fragments_tsv(sets, str(out))
    log.info("fragments: %d question sentences", len(sets))
    return StageResult(
        inputs=[workdir / A_METADATA, workdir / A_PARSES],
        outputs=[out],
        params={"workers": workers, **cfg.fragments.to_json()},
    )


def _pair_of_sentence(owner_id: str) -> str:
    return owner_id.rsplit(":", 2)[0]


def stage_motifs(cfg: PipelineConfig, workdir: Path, workers: int) -> StageResult:
    qfrags = _require_artifact(workdir, A_QFRAGS, "motifs")
    sets = load_fragments_tsv(str(qfrags))
    graph = build_motif_graph(
        sets, min_support=cfg.min_support, p=cfg.merge_prob, max_size=cfg.max_motif_size
    )
    log.info("motifs: %d survivors, %d merges", len(graph.motifs), len(graph.merges))

    by_pair: dict[str, list] = {}
    order: list[str] = []
    for fs in sets:
        pair_id = _pair_of_sentence(fs.owner_id)
        if pair_id not in by_pair:
            by_pair[pair_id] = []
            order.append(pair_id)
        by_pair[pair_id].append(question_view(fs, graph))
    views = [utterance_view(pid, by_pair[pid], graph) for pid in order]

    out_motifs = workdir / A_MOTIFS
    out_merges = workdir / A_MERGES
    out_dag = workdir / A_DAG
    out_views = workdir / A_VIEWS
    motifs_to_tsv(graph, str(out_motifs))
    merges_to_tsv(graph, str(out_merges))
    dag_to_json(graph, str(out_dag))
    views_to_jsonl(views, str(out_views))
    return StageResult(
        inputs=[qfrags],
        outputs=[out_motifs, out_merges, out_dag, out_views],
        params={
            "min_support": cfg.min_support,
            "merge_prob": cfg.merge_prob,
            "max_motif_size": cfg.max_motif_size,
        },
    )


def stage_space(cfg: PipelineConfig, workdir: Path, workers: int) -> StageResult:
    corpus = _load_canonical(cfg, workdir, "space")
    matrix = build_answer_matrix(
        corpus,
        cfg.fragments,
        min_answer_freq=cfg.min_answer_freq,
        smooth_idf=cfg.smooth_idf,
    )
    space = truncated_svd(matrix, rank=cfg.rank, seed=cfg.seed)
    out_space = workdir / A_SPACE
    save_space(space, str(out_space))
    report_path = workdir / A_SPACE_REPORT
    _write_json(
        report_path,
        {
            "fragments": len(matrix.row_labels),
            "answers": len(matrix.col_labels),
            "zero_rows": len(matrix.zero_rows),
            "rank_requested": cfg.rank,
            "rank_effective": space.d,
            "rank_deficient": space.rank_deficient,
        },
    )
    log.info(
        "space: %d fragments x %d answers, rank %d", len(matrix.row_labels),
        len(matrix.col_labels), space.d,
    )
    return StageResult(
        inputs=[workdir / A_METADATA, workdir / A_PARSES],
        outputs=[out_space, report_path],
        params={
            "min_answer_freq": cfg.min_answer_freq,
            "smooth_idf": cfg.smooth_idf,
            "rank": cfg.rank,
            "seed": cfg.seed,
        },
    )


def stage_fit(cfg: PipelineConfig, workdir: Path, workers: int) -> StageResult:
    motifs_path = _require_artifact(workdir, A_MOTIFS, "fit")
    dag_path = _require_artifact(workdir, A_DAG, "fit")
    views_path = _require_artifact(workdir, A_VIEWS, "fit")
    space_path = _require_artifact(workdir, A_SPACE, "fit")
    graph = load_motif_graph(str(motifs_path), str(dag_path))
    views = load_views_jsonl(str(views_path))
    space = load_space(str(space_path))
    qmatrix = build_motif_question_matrix(views, [m.motif_id for m in graph.motifs])
    embedding = project_motifs(qmatrix, space)
    params = ModelParams(
        min_support=cfg.min_support,
        merge_prob=cfg.merge_prob,
        min_answer_freq=cfg.min_answer_freq,
        rank=cfg.rank,
        clusters=cfg.clusters,
        seed=cfg.seed,
    )
    model = fit_types(
        embedding,
        k=cfg.clusters,
        seed=cfg.seed,
        restarts=cfg.restarts,
        params=params,
    )
    assign_answer_fragments(space, model)
    out_model = workdir / A_MODEL
    save_model(model, space, embedding, str(out_model))
    sizes = [0] * model.k
    for t in model.motif_assignment.values():
        sizes[t] += 1
    report_path = workdir / A_FIT_REPORT
    _write_json(
        report_path,
        {
            "clusters": model.k,
            "inertia": model.inertia,
            "iterations": len(model.inertia_history),
            "motifs_per_type": sizes,
            "degenerate_motifs": len(embedding.degenerate),
            "unassigned_answer_fragments": len(model.unassigned_fragments),
        },
    )
    log.info("fit: inertia %.6f, motifs per type %s", model.inertia, sizes)
    return StageResult(
        inputs=[motifs_path, dag_path, views_path, space_path],
        outputs=[out_model, report_path],
        params={"clusters": cfg.clusters, "seed": cfg.seed, "restarts": cfg.restarts},
    )


def stage_assign(cfg: PipelineConfig, workdir: Path, workers: int) -> StageResult:
    model_path = _require_artifact(workdir, A_MODEL, "assign")
    views_path = _require_artifact(workdir, A_VIEWS, "assign")
    model, space, embedding = load_model(str(model_path))
    views = load_views_jsonl(str(views_path))
    assigned = []
    skipped = []
    for view in views:
        try:
            assigned.append(assign_question(view, embedding, model))
        except UnassignableQuestionError:
            skipped.append(view.owner_id)
    out_assign = workdir / A_ASSIGNMENTS
    with open(out_assign, "w", encoding="utf-8") as fh:
        for a in assigned:
            fh.write(f"{a.owner_id}\t{a.type_id}\t{a.distance!r}\n")
    report_path = workdir / A_ASSIGN_REPORT
    _write_json(
        report_path,
        {"assigned": len(assigned), "skipped": len(skipped), "skipped_ids": skipped[:100]},
    )
    log.info("assign: %d assigned, %d unassignable", len(assigned), len(skipped))
    return StageResult(
        inputs=[model_path, views_path],
        outputs=[out_assign, report_path],
        params={},
    )


def _read_assignments(path: Path) -> list[TypeAssignment]:
    out = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.rstrip("\n")
            if not line:
                continue
            owner, type_id, distance = line.split("\t")
            out.append(
                TypeAssignment(
                    owner_id=owner, type_id=int(type_id), distance=float(distance)
                )
            )
    return out


def _clean_float(value) -> Optional[float]:
    if value is None:
        return None
    value = float(value)
    if math.isnan(value) or math.isinf(value):
        return None
    return value


def stage_analyze(cfg: PipelineConfig, workdir: Path, workers: int) -> StageResult:
    assignments_path = _require_artifact(workdir, A_ASSIGNMENTS, "analyze")
    model_path = _require_artifact(workdir, A_MODEL, "analyze")
    corpus = _load_canonical(cfg, workdir, "analyze")
    model, _, _ = load_model(str(model_path))
    assignments = _read_assignments(assignments_path)
    subset = filter_analysis_subset(corpus, cfg.filters)
    records = ana.build_records(subset.corpus, assignments)
    k = model.k

    type_counts = [0] * k
    for r in records:
        type_counts[r.type_id] += 1

    log_odds = {}
    for t in range(k):
        try:
            res = ana.log_odds_by_group(
                records, t, lambda r: r.affiliation == "government"
            )
            log_odds[str(t)] = {
                "log_odds": res.log_odds,
                "ci_low": res.ci_low,
                "ci_high": res.ci_high,
                "corrected": res.corrected,
            }
        except QTypologyError:
            log_odds[str(t)] = None

    tenure = {}
    for affiliation in ("government", "opposition"):
        report = ana.median_tenure_by_type(records, affiliation, k)
        tenure[affiliation] = {
            "overall_median": _clean_float(report.overall_median),
            "overall_n": report.overall_n,
            "types": [
                {
                    "type_id": row.type_id,
                    "n": row.n,
                    "median_tenure": _clean_float(row.median_tenure),
                    "p_value": _clean_float(row.p_value),
                    "stars": row.stars,
                }
                for row in report.rows
            ],
        }

    switches = [
        {
            "direction": d.direction,
            "n_askers": d.n_askers,
            "types": [
                {
                    "type_id": row.type_id,
                    "mean_before": _clean_float(row.mean_before),
                    "mean_after": _clean_float(row.mean_after),
                    "p_value": _clean_float(row.p_value),
                    "stars": row.stars,
                    "degenerate": row.degenerate,
                }
                for row in d.rows
            ],
        }
        for d in ana.switch_analysis(records, cfg.elections, k)
    ] if cfg.elections else []

    cohorts = [
        {
            "affiliation": c.affiliation,
            "n_new": c.n_new,
            "n_old": c.n_old,
            "types": [
                {
                    "type_id": row.type_id,
                    "mean_new": _clean_float(row.mean_new),
                    "mean_old": _clean_float(row.mean_old),
                    "p_value": _clean_float(row.p_value),
                    "stars": row.stars,
                }
                for row in c.rows
            ],
        }
        for c in ana.cohort_analysis(records, cfg.elections, k)
    ] if cfg.elections else []

    out = workdir / A_ANALYSIS
    _write_json(
        out,
        {
            "records": len(records),
            "askers": len({r.asker_id for r in records}),
            "filtered_out": subset.removed,
            "type_counts": type_counts,
            "log_odds_government": log_odds,
            "tenure": tenure,
            "switches": switches,
            "cohorts": cohorts,
        },
    )
    log.info("analyze: %d records over %d types", len(records), k)
    return StageResult(
        inputs=[assignments_path, model_path, workdir / A_METADATA, workdir / A_PARSES],
        outputs=[out],
        params={
            "elections": [e.isoformat() for e in cfg.elections],
            "single_question_only": cfg.filters.single_question_only,
            "require_metadata": cfg.filters.require_metadata,
            "exclude_shadow": cfg.filters.exclude_shadow,
        },
    )


def stage_report(cfg: PipelineConfig, workdir: Path, workers: int) -> StageResult:
    model_path = _require_artifact(workdir, A_MODEL, "report")
    motifs_path = _require_artifact(workdir, A_MOTIFS, "report")
    dag_path = _require_artifact(workdir, A_DAG, "report")
    views_path = _require_artifact(workdir, A_VIEWS, "report")
    assignments_path = _require_artifact(workdir, A_ASSIGNMENTS, "report")
    model, space, embedding = load_model(str(model_path))
    graph = load_motif_graph(str(motifs_path), str(dag_path))
    views = load_views_jsonl(str(views_path))
    assignments = _read_assignments(assignments_path)

    summary = type_summary(
        model,
        {m.motif_id: m.support for m in graph.motifs},
        {m.motif_id: m.canonical() for m in graph.motifs},
        space=space,
    )
    out_report = workdir / A_REPORT
    _write_json(
        out_report,
        {"types": {str(t): body for t, body in summary.items()}},
    )

    by_owner = {v.owner_id: v for v in views}
    projections = {
        a.owner_id: project_question(by_owner[a.owner_id], embedding)
        for a in assignments
    }
    out_features = workdir / A_FEATURES
    ana.export_latent_features(assignments, projections, str(out_features))
    log.info("report: %d typed questions exported", len(assignments))
    return StageResult(
        inputs=[model_path, motifs_path, dag_path, views_path, assignments_path],
        outputs=[out_report, out_features],
        params={},
    )


STAGE_FUNCS = {
    "ingest": stage_ingest,
    "fragments": stage_fragments,
    "motifs": stage_motifs,
    "space": stage_space,
    "fit": stage_fit,
    "assign": stage_assign,
    "analyze": stage_analyze,
    "report": stage_report,
}


def run_stage(name: str, cfg: PipelineConfig, workdir: Path, workers: int) -> None:
    start = time.monotonic()
    result = STAGE_FUNCS[name](cfg, workdir, workers)
    _write_manifest(workdir, name, result, time.monotonic() - start)


def _resolve_workdir(arg: Optional[str], cfg: PipelineConfig) -> Path:
    if arg:
        return Path(arg).resolve()
    env = os.environ.get(WORKDIR_ENV)
    if env:
        return Path(env).resolve()
    if cfg.workdir is not None:
        return cfg.workdir
    raise ConfigError(
        f"no working directory: pass --workdir, set {WORKDIR_ENV}, "
        f"or put workdir in the config"
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qtypology",
        description="Induce a typology of questions from a parsed question-answer corpus.",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", required=True, help="pipeline config JSON")
    common.add_argument(
        "--workdir", help=f"artifact directory (overrides {WORKDIR_ENV} and config)"
    )
    common.add_argument(
        "--workers", type=int, default=1, help="parallel workers for fragment extraction"
    )
    common.add_argument("--verbose", action="store_true", help="log progress to stderr")

    sub = parser.add_subparsers(dest="command", required=True)
    descriptions = {
        "ingest": "validate the raw corpus and write its canonical form",
        "fragments": "extract phrasing fragments from question sentences",
        "motifs": "mine frequent fragment sets and build the motif graph",
        "space": "build the answer-fragment matrix and latent space",
        "fit": "embed motifs and cluster them into question types",
        "assign": "assign each question to its nearest type",
        "analyze": "run the statistical analyses on the filtered subset",
        "report": "write per-type digests and latent features",
    }
    for name in STAGES:
        sub.add_parser(name, parents=[common], help=descriptions[name])
    runall = sub.add_parser(
        "run-all", parents=[common], help="run every stage in order"
    )
    runall.add_argument(
        "--stage", choices=STAGES, help="stop after this stage instead of finishing"
    )
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        stream=sys.stderr,
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(message)s",
    )
    try:
        cfg = load_config(args.config)
        workdir = _resolve_workdir(args.workdir, cfg)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    workdir.mkdir(parents=True, exist_ok=True)

    if args.command == "run-all":
        stages = list(STAGES)
        if args.stage:
            stages = stages[: stages.index(args.stage) + 1]
    else:
        stages = [args.command]

    for name in stages:
        try:
            run_stage(name, cfg, workdir, args.workers)
        except ConfigError as exc:
            print(f"error in stage {name}: {exc}", file=sys.stderr)
            return 2
        except MissingArtifactError as exc:
            print(f"error in stage {name}: {exc}", file=sys.stderr)
            return 3
        except (QTypologyError, OSError) as exc:
            print(f"error in stage {name}: {exc}", file=sys.stderr)
            return 4
    return 0


if __name__ == "__main__":
    sys.exit(main())
