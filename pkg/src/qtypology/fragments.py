"""Phrasing fragments extracted from dependency parses.

A sentence contributes four kinds of fragment: the parse root on its own,
one fragment per surviving (root, child) arc, and the sentence-initial
unigram and bigram. Arcs whose child heads a noun phrase or is a pronoun
are dropped so that fragments capture how a question is phrased rather
than what it mentions; a noun phrase opening with a WH-determiner keeps
just that determiner. Multi-part sentences are handled by re-running the
same extraction from the root of each coordinated or subordinated clause.

Fragments render to canonical strings: ``going→*`` for a root, ``is←going``
or ``going→do`` for arcs depending on linear order, and the literal words
for initial n-grams. All words are lowercased.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Optional

from .corpus import ParsedSentence, Token
from .errors import EmptySentenceError

ROOT_ONLY = "root_only"
ROOT_ARC = "root_arc"
INITIAL_UNIGRAM = "initial_unigram"
INITIAL_BIGRAM = "initial_bigram"

# display and tie-break order: sentence openers first, then roots, then arcs
KIND_ORDER = {INITIAL_UNIGRAM: 0, INITIAL_BIGRAM: 1, ROOT_ONLY: 2, ROOT_ARC: 3}

DEFAULT_NP_DEP_LABELS = frozenset({"nsubj", "nsubjpass", "dobj", "iobj", "pobj", "attr"})
DEFAULT_PRONOUN_POS_TAGS = frozenset({"PRP", "PRP$", "PRON"})
DEFAULT_WDT_POS_TAGS = frozenset({"WDT"})
DEFAULT_RECURSION_DEP_LABELS = frozenset({"conj", "parataxis", "ccomp", "advcl"})
DEFAULT_PUNCT_DEP_LABELS = frozenset({"punct"})
DEFAULT_PUNCT_POS_TAGS = frozenset(
    {"PUNCT", ".", ",", ":", "``", "''", "-LRB-", "-RRB-", "HYPH", "NFP", "SYM"}
)


@dataclass(frozen=True, slots=True)
class Fragment:
    kind: str
    root_lemma: Optional[str] = None
    child_lemma: Optional[str] = None
    child_precedes_root: bool = False
    surface_words: tuple[str, ...] = ()


def initial_unigram(word: str) -> Fragment:
    w = word.lower()
    return Fragment(kind=INITIAL_UNIGRAM, surface_words=(w,))


def initial_bigram(first: str, second: str) -> Fragment:
    w1, w2 = first.lower(), second.lower()
    return Fragment(kind=INITIAL_BIGRAM, surface_words=(w1, w2))


def root_only(root: str) -> Fragment:
    r = root.lower()
    return Fragment(kind=ROOT_ONLY, root_lemma=r, surface_words=(r,))


def root_arc(root: str, child: str, child_precedes_root: bool) -> Fragment:
    r, c = root.lower(), child.lower()
    words = (c, r) if child_precedes_root else (r, c)
    return Fragment(
        kind=ROOT_ARC,
        root_lemma=r,
        child_lemma=c,
        child_precedes_root=child_precedes_root,
        surface_words=words,
    )


def canonical_string(frag: Fragment) -> str:
    if frag.kind == INITIAL_UNIGRAM:
        return frag.surface_words[0]
    if frag.kind == INITIAL_BIGRAM:
        return " ".join(frag.surface_words)
    if frag.kind == ROOT_ONLY:
        return f"{frag.root_lemma}→*"
    if frag.kind == ROOT_ARC:
        if frag.child_precedes_root:
            return f"{frag.child_lemma}←{frag.root_lemma}"
        return f"{frag.root_lemma}→{frag.child_lemma}"
    raise ValueError(f"unknown fragment kind {frag.kind!r}")


def parse_canonical(text: str) -> Fragment:
    """Invert canonical_string. Token words never contain arrows or spaces."""
    if "←" in text:
        child, root = text.split("←", 1)
        return root_arc(root, child, child_precedes_root=True)
    if "→" in text:
        root, child = text.split("→", 1)
        if child == "*":
            return root_only(root)
        return root_arc(root, child, child_precedes_root=False)
    if " " in text:
        first, second = text.split(" ", 1)
        return initial_bigram(first, second)
    return initial_unigram(text)


def fragment_sort_key(frag: Fragment) -> tuple[int, str]:
    return (KIND_ORDER[frag.kind], canonical_string(frag))


@dataclass(frozen=True)
class FragmentSet:
    owner_id: str
    fragments: frozenset[Fragment]

    def canonicals(self) -> list[str]:
        return [canonical_string(f) for f in sorted(self.fragments, key=fragment_sort_key)]


@dataclass(frozen=True)
class FragmentConfig:
    """Knobs for the extraction rules.

    Tag sets are matched against both the fine-grained and the coarse POS
    column, so the defaults cover Penn-style and UD-style parses alike.
    Lemma substitution applies to root and arc fragments only; initial
    n-grams always keep the literal (lowercased) sentence opening.
    """

    np_dep_labels: frozenset[str] = DEFAULT_NP_DEP_LABELS
    pronoun_pos_tags: frozenset[str] = DEFAULT_PRONOUN_POS_TAGS
    wdt_pos_tags: frozenset[str] = DEFAULT_WDT_POS_TAGS
    recursion_dep_labels: frozenset[str] = DEFAULT_RECURSION_DEP_LABELS
    punct_dep_labels: frozenset[str] = DEFAULT_PUNCT_DEP_LABELS
    punct_pos_tags: frozenset[str] = DEFAULT_PUNCT_POS_TAGS
    use_lemma: bool = False

    def to_json(self) -> dict:
        return {
            "np_dep_labels": sorted(self.np_dep_labels),
            "pronoun_pos_tags": sorted(self.pronoun_pos_tags),
            "wdt_pos_tags": sorted(self.wdt_pos_tags),
            "recursion_dep_labels": sorted(self.recursion_dep_labels),
            "punct_dep_labels": sorted(self.punct_dep_labels),
            "punct_pos_tags": sorted(self.punct_pos_tags),
            "use_lemma": self.use_lemma,
        }

    @staticmethod
    def from_json(obj: dict) -> "FragmentConfig":
        cfg = FragmentConfig()
        kwargs = {}
        for name in (
            "np_dep_labels",
            "pronoun_pos_tags",
            "wdt_pos_tags",
            "recursion_dep_labels",
            "punct_dep_labels",
            "punct_pos_tags",
        ):
            if name in obj:
                kwargs[name] = frozenset(obj[name])
        if "use_lemma" in obj:
            kwargs["use_lemma"] = bool(obj["use_lemma"])
        return replace(cfg, **kwargs)


def is_filtered_child(child: Token, cfg: FragmentConfig) -> bool:
    """True when the arc to this child must not become a fragment.

    Children heading noun phrases are recognized by dependency label,
    pronouns by POS tag (either tag column).
    """
    if child.dep_label in cfg.np_dep_labels:
        return True
    return child.xpos in cfg.pronoun_pos_tags or child.upos in cfg.pronoun_pos_tags


def _is_punct(tok: Token, cfg: FragmentConfig) -> bool:
    if tok.dep_label in cfg.punct_dep_labels:
        return True
    return tok.xpos in cfg.punct_pos_tags or tok.upos in cfg.punct_pos_tags


def _is_wdt(tok: Token, cfg: FragmentConfig) -> bool:
    return tok.xpos in cfg.wdt_pos_tags or tok.upos in cfg.wdt_pos_tags


def extract_fragments(sentence: ParsedSentence, cfg: FragmentConfig = FragmentConfig()) -> FragmentSet:
    """Extract the fragment set of one parsed sentence.

    Raises EmptySentenceError on a tokenless sentence. The result always
    contains at least the root fragment and the initial unigram.
    """
    if not sentence.tokens:
        raise EmptySentenceError(f"{sentence.sent_id}: no tokens")

    def word_of(tok: Token) -> str:
        if cfg.use_lemma and tok.lemma:
            return tok.lemma.lower()
        return tok.surface.lower()

    out: set[Fragment] = set()

    def walk(root_idx: int) -> None:
        root_tok = sentence.token(root_idx)
        root_word = word_of(root_tok)
        out.add(root_only(root_word))
        for child in sentence.children(root_idx):
            if _is_punct(child, cfg):
                continue
            if is_filtered_child(child, cfg):
                if child.dep_label in cfg.np_dep_labels:
                    first_idx = sentence.subtree_indices(child.index)[0]
                    first_tok = sentence.token(first_idx)
                    if _is_wdt(first_tok, cfg):
                        out.add(
                            root_arc(
                                root_word,
                                word_of(first_tok),
                                child_precedes_root=first_tok.index < root_idx,
                            )
                        )
                continue
            out.add(
                root_arc(root_word, word_of(child), child_precedes_root=child.index < root_idx)
            )
            if child.dep_label in cfg.recursion_dep_labels:
                walk(child.index)

    walk(sentence.root_index)

    first = sentence.tokens[0]
    out.add(initial_unigram(first.surface))
    if len(sentence.tokens) >= 2:
        out.add(initial_bigram(first.surface, sentence.tokens[1].surface))

    return FragmentSet(owner_id=sentence.sent_id, fragments=frozenset(out))


def find_canonical_collisions(fragments: set[Fragment]) -> list[tuple[str, list[Fragment]]]:
    """Canonical strings mapping to more than one distinct fragment."""
    by_string: dict[str, list[Fragment]] = {}
    for f in fragments:
        by_string.setdefault(canonical_string(f), []).append(f)
    return sorted(
        (s, frags) for s, frags in by_string.items() if len(frags) > 1
    )


def dump_fragments_tsv(sets: list[FragmentSet], path: str) -> None:
    """One row per (owner, fragment), owners in given order, fragments sorted."""
    with open(path, "w", encoding="utf-8") as fh:
        for fs in sets:
            for canon in fs.canonicals():
                fh.write(f"{fs.owner_id}\t{canon}\n")


def load_fragments_tsv(path: str) -> list[FragmentSet]:
    by_owner: dict[str, set[Fragment]] = {}
    order: list[str] = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.rstrip("\n")
            if not line:
                continue
            owner, _, canon = line.partition("\t")
            if owner not in by_owner:
                by_owner[owner] = set()
                order.append(owner)
            by_owner[owner].add(parse_canonical(canon))
    return [FragmentSet(owner_id=o, fragments=frozenset(by_owner[o])) for o in order]
