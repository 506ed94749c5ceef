"""Recurring fragment combinations (motifs) and their containment structure.

Motifs are itemsets over question fragments mined with the apriori
routine: every returned set occurs in at least min_support transactions,
and supports are exact. Near-duplicate motifs (conditional co-occurrence
above p in both directions) are collapsed to a single representative.
Survivors form a DAG whose edges connect each motif to the motifs
extending it by exactly one fragment.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Optional

from .fragments import Fragment, FragmentSet, canonical_string, fragment_sort_key, parse_canonical


def motif_string(fragments: Iterable[Fragment]) -> str:
    return "|".join(canonical_string(f) for f in sorted(fragments, key=fragment_sort_key))


def motif_sort_key(fragments: frozenset[Fragment]) -> tuple[int, str]:
    return (len(fragments), motif_string(fragments))


@dataclass(frozen=True)
class MotifCandidate:
    """A frequent itemset before id assignment.

    occurrence is a bitmask over transaction positions; bit i is set when
    transaction i contains every fragment of the motif.
    """

    fragments: frozenset[Fragment]
    support: int
    occurrence: int


@dataclass(frozen=True)
class Motif:
    motif_id: int
    fragments: frozenset[Fragment]
    support: int

    def canonical(self) -> str:
        return motif_string(self.fragments)


@dataclass(frozen=True)
class MergeRecord:
    """A motif collapsed into an equivalent representative."""

    fragments: frozenset[Fragment]
    support: int
    representative: frozenset[Fragment]


def mine_motifs(
    transactions: list[FragmentSet], min_support: int, max_size: int = 4
) -> list[MotifCandidate]:
    """Apriori over fragment sets; exact supports, sizes 1..max_size."""
    if min_support < 1:
        raise ValueError(f"min_support must be >= 1, got {min_support}")
    if max_size < 1:
        raise ValueError(f"max_size must be >= 1, got {max_size}")

    counts: dict[Fragment, int] = {}
    for t in transactions:
        for f in t.fragments:
            counts[f] = counts.get(f, 0) + 1
    frequent = sorted(
        (f for f, c in counts.items() if c >= min_support), key=fragment_sort_key
    )
    item_index = {f: i for i, f in enumerate(frequent)}

    # transactions as sorted tuples of frequent-item indices
    encoded: list[tuple[int, ...]] = [
        tuple(sorted(item_index[f] for f in t.fragments if f in item_index))
        for t in transactions
    ]

    out: list[MotifCandidate] = []
    occ1: dict[int, int] = {i: 0 for i in range(len(frequent))}
    for pos, items in enumerate(encoded):
        bit = 1 << pos
        for i in items:
            occ1[i] |= bit
    level: dict[tuple[int, ...], int] = {}
    for i, f in enumerate(frequent):
        mask = occ1[i]
        level[(i,)] = mask
        out.append(
            MotifCandidate(
                fragments=frozenset([f]), support=mask.bit_count(), occurrence=mask
            )
        )

    size = 1
    while level and size < max_size:
        size += 1
        prev = set(level)
        candidates: set[tuple[int, ...]] = set()
        ordered = sorted(level)
        # join step: two (k-1)-sets sharing all but their last item
        for idx, a in enumerate(ordered):
            for b in ordered[idx + 1 :]:
                if a[:-1] != b[:-1]:
                    break
                cand = a + (b[-1],)
                # prune: every (k-1)-subset must be frequent
                if all(cand[:j] + cand[j + 1 :] in prev for j in range(len(cand))):
                    candidates.add(cand)
        if not candidates:
            break
        tally: dict[tuple[int, ...], int] = {}
        occ: dict[tuple[int, ...], int] = {}
        for pos, items in enumerate(encoded):
            if len(items) < size:
                continue
            bit = 1 << pos
            for combo in combinations(items, size):
                if combo in candidates:
                    tally[combo] = tally.get(combo, 0) + 1
                    occ[combo] = occ.get(combo, 0) | bit
        level = {c: occ[c] for c, n in tally.items() if n >= min_support}
        for combo in sorted(level):
            frags = frozenset(frequent[i] for i in combo)
            out.append(
                MotifCandidate(
                    fragments=frags,
                    support=tally[combo],
                    occurrence=level[combo],
                )
            )

    out.sort(key=lambda m: motif_sort_key(m.fragments))
    return out


@dataclass
class MergeResult:
    survivors: list[MotifCandidate]
    merges: list[MergeRecord]


def merge_equivalent(candidates: list[MotifCandidate], p: float) -> MergeResult:
    """Collapse motifs that nearly always co-occur.

    Two motifs are equivalent when each occurs in more than fraction p of
    the other's transactions (strictly greater, both directions); classes
    are the transitive closure of that relation. The representative is the
    class member with fewest fragments, ties broken by smallest canonical
    string.
    """
    if not 0.5 < p <= 1.0:
        raise ValueError(f"p must be in (0.5, 1], got {p}")
    n = len(candidates)
    parent = list(range(n))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    def union(i: int, j: int) -> None:
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[max(ri, rj)] = min(ri, rj)

    # only pairs with supports within a factor of p can be equivalent
    order = sorted(range(n), key=lambda i: candidates[i].support)
    lo = 0
    for hi in range(n):
        chi = candidates[order[hi]]
        while candidates[order[lo]].support < p * chi.support:
            lo += 1
        for mid in range(lo, hi):
            cmid = candidates[order[mid]]
            inter = (chi.occurrence & cmid.occurrence).bit_count()
            if inter > p * chi.support and inter > p * cmid.support:
                union(order[hi], order[mid])

    classes: dict[int, list[int]] = {}
    for i in range(n):
        classes.setdefault(find(i), []).append(i)

    survivors: list[MotifCandidate] = []
    merges: list[MergeRecord] = []
    for members in classes.values():
        rep = min(members, key=lambda i: motif_sort_key(candidates[i].fragments))
        survivors.append(candidates[rep])
        for i in members:
            if i != rep:
                merges.append(
                    MergeRecord(
                        fragments=candidates[i].fragments,
                        support=candidates[i].support,
                        representative=candidates[rep].fragments,
                    )
                )
    survivors.sort(key=lambda m: motif_sort_key(m.fragments))
    merges.sort(key=lambda m: motif_sort_key(m.fragments))
    return MergeResult(survivors=survivors, merges=merges)


@dataclass
class MotifGraph:
    motifs: tuple[Motif, ...]
    edges: dict[int, tuple[int, ...]]  # motif_id -> ids of one-larger supersets
    merges: tuple[MergeRecord, ...] = ()
    _by_fragments: dict[frozenset[Fragment], int] = field(init=False, repr=False)
    _frag_index: dict[Fragment, list[int]] = field(init=False, repr=False)

    def __post_init__(self):
        self._by_fragments = {m.fragments: m.motif_id for m in self.motifs}
        self._frag_index = {}
        for m in self.motifs:
            for f in m.fragments:
                self._frag_index.setdefault(f, []).append(m.motif_id)

    def motif(self, motif_id: int) -> Motif:
        return self.motifs[motif_id]

    def id_of(self, fragments: frozenset[Fragment]) -> Optional[int]:
        return self._by_fragments.get(fragments)


def build_dag(survivors: list[MotifCandidate], merges: Iterable[MergeRecord] = ()) -> MotifGraph:
    """Assign ids in (size, canonical) order and link one-fragment extensions."""
    ordered = sorted(survivors, key=lambda m: motif_sort_key(m.fragments))
    motifs = tuple(
        Motif(motif_id=i, fragments=c.fragments, support=c.support)
        for i, c in enumerate(ordered)
    )
    by_fragments = {m.fragments: m.motif_id for m in motifs}
    edges: dict[int, list[int]] = {m.motif_id: [] for m in motifs}
    for m in motifs:
        if len(m.fragments) < 2:
            continue
        for f in m.fragments:
            sub = m.fragments - {f}
            sub_id = by_fragments.get(sub)
            if sub_id is not None:
                edges[sub_id].append(m.motif_id)
    return MotifGraph(
        motifs=motifs,
        edges={i: tuple(sorted(set(targets))) for i, targets in edges.items()},
        merges=tuple(merges),
    )


def build_motif_graph(
    transactions: list[FragmentSet], min_support: int, p: float, max_size: int = 4
) -> MotifGraph:
    """Mine, deduplicate, and structure in one call."""
    mined = mine_motifs(transactions, min_support=min_support, max_size=max_size)
    merged = merge_equivalent(mined, p=p)
    return build_dag(merged.survivors, merged.merges)


@dataclass(frozen=True)
class QuestionMotifView:
    owner_id: str
    contained: frozenset[int]
    sinks: frozenset[int]


def question_view(fs: FragmentSet, graph: MotifGraph) -> QuestionMotifView:
    """Motifs contained in one fragment set, and which of them are sinks.

    A sink has no outgoing DAG edge to another contained motif; sinks are
    the most specific phrasing patterns the question exhibits.
    """
    hits: dict[int, int] = {}
    for f in fs.fragments:
        for mid in graph._frag_index.get(f, ()):
            hits[mid] = hits.get(mid, 0) + 1
    contained = frozenset(
        mid for mid, n in hits.items() if n == len(graph.motifs[mid].fragments)
    )
    sinks = frozenset(
        mid
        for mid in contained
        if not any(succ in contained for succ in graph.edges.get(mid, ()))
    )
    return QuestionMotifView(owner_id=fs.owner_id, contained=contained, sinks=sinks)


def utterance_view(
    owner_id: str, views: list[QuestionMotifView], graph: MotifGraph
) -> QuestionMotifView:
    """Union the per-sentence views of a multi-question utterance."""
    contained = frozenset().union(*(v.contained for v in views)) if views else frozenset()
    sinks = frozenset(
        mid
        for mid in contained
        if not any(succ in contained for succ in graph.edges.get(mid, ()))
    )
    return QuestionMotifView(owner_id=owner_id, contained=contained, sinks=sinks)


def motifs_to_tsv(graph: MotifGraph, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for m in graph.motifs:
            fh.write(f"{m.motif_id}\t{m.support}\t{m.canonical()}\n")


def merges_to_tsv(graph: MotifGraph, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for rec in graph.merges:
            rep_id = graph.id_of(rec.representative)
            fh.write(f"{motif_string(rec.fragments)}\t{rec.support}\t{rep_id}\n")


def dag_to_json(graph: MotifGraph, path: str) -> None:
    payload = {
        "edges": sorted([a, b] for a, targets in graph.edges.items() for b in targets)
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, sort_keys=True)
        fh.write("\n")


def load_motif_graph(motifs_path: str, dag_path: str) -> MotifGraph:
    motifs = []
    with open(motifs_path, encoding="utf-8") as fh:
        for line in fh:
            line = line.rstrip("\n")
            if not line:
                continue
            mid, support, canon = line.split("\t")
            frags = frozenset(parse_canonical(c) for c in canon.split("|"))
            motifs.append(Motif(motif_id=int(mid), fragments=frags, support=int(support)))
    with open(dag_path, encoding="utf-8") as fh:
        payload = json.load(fh)
    edges: dict[int, list[int]] = {m.motif_id: [] for m in motifs}
    for a, b in payload["edges"]:
        edges[a].append(b)
    return MotifGraph(
        motifs=tuple(motifs),
        edges={i: tuple(sorted(t)) for i, t in edges.items()},
    )


def views_to_jsonl(views: list[QuestionMotifView], path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for v in views:
            obj = {
                "owner_id": v.owner_id,
                "contained": sorted(v.contained),
                "sinks": sorted(v.sinks),
            }
            fh.write(json.dumps(obj, sort_keys=True) + "\n")


def load_views_jsonl(path: str) -> list[QuestionMotifView]:
    out = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if not line.strip():
                continue
            obj = json.loads(line)
            out.append(
                QuestionMotifView(
                    owner_id=obj["owner_id"],
                    contained=frozenset(obj["contained"]),
                    sinks=frozenset(obj["sinks"]),
                )
            )
    return out
