"""Question-answer corpus model and loaders.

A corpus pairs a JSONL metadata file with a CoNLL-U file of dependency
parses. The two are aligned by sentence id: the parse of sentence i of the
question of pair P carries the id ``P:q:i``, the answer side ``P:a:i``,
both 0-based. A sentence counts as a question if and only if its raw text
ends with a question mark.

Records that fail validation are collected into a load report and left out
of the corpus instead of being dropped silently. Pair order inside a
corpus is always (date, pair_id), so loading the same files twice yields
the same corpus and serializing it twice yields the same bytes.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from datetime import date as Date
from typing import Iterator, Optional

from .errors import ConfigError

GOVERNMENT = "government"
OPPOSITION = "opposition"
OTHER = "other"


@dataclass(frozen=True, slots=True)
class Token:
    """One token of a dependency parse, 1-based index, head 0 for the root."""

    index: int
    surface: str
    lemma: str
    upos: str
    xpos: str
    head: int
    dep_label: str

    @property
    def pos_tag(self) -> str:
        """Fine-grained tag when present, else the coarse one."""
        return self.xpos if self.xpos else self.upos


class InvalidParse(ValueError):
    """Raised by ParsedSentence.validate for malformed trees."""


@dataclass(frozen=True)
class ParsedSentence:
    sent_id: str
    raw_text: str
    tokens: tuple[Token, ...]

    @property
    def is_question(self) -> bool:
        return self.raw_text.rstrip().endswith("?")

    @property
    def root_index(self) -> int:
        for tok in self.tokens:
            if tok.head == 0:
                return tok.index
        raise InvalidParse(f"{self.sent_id}: no root token")

    def token(self, index: int) -> Token:
        return self.tokens[index - 1]

    def children(self, index: int) -> tuple[Token, ...]:
        return tuple(t for t in self.tokens if t.head == index)

    def subtree_indices(self, index: int) -> list[int]:
        """All token indices in the subtree rooted at index, ascending."""
        kids: dict[int, list[int]] = {}
        for t in self.tokens:
            kids.setdefault(t.head, []).append(t.index)
        out, stack = [], [index]
        while stack:
            i = stack.pop()
            out.append(i)
            stack.extend(kids.get(i, ()))
        return sorted(out)

    def validate(self) -> None:
        """Check the tokens form a single rooted tree.

        Raises InvalidParse on duplicate or non-contiguous indices, heads
        out of range, self-heads, zero or several roots, or cycles.
        """
        n = len(self.tokens)
        if n == 0:
            raise InvalidParse(f"{self.sent_id}: empty sentence")
        if [t.index for t in self.tokens] != list(range(1, n + 1)):
            raise InvalidParse(f"{self.sent_id}: token indices not 1..{n}")
        roots = [t.index for t in self.tokens if t.head == 0]
        if len(roots) != 1:
            raise InvalidParse(f"{self.sent_id}: expected 1 root, found {len(roots)}")
        for t in self.tokens:
            if not 0 <= t.head <= n:
                raise InvalidParse(f"{self.sent_id}: head {t.head} out of range")
            if t.head == t.index:
                raise InvalidParse(f"{self.sent_id}: token {t.index} heads itself")
        # every node must reach the root without revisiting anything
        for t in self.tokens:
            seen = set()
            cur = t.index
            while cur != 0:
                if cur in seen:
                    raise InvalidParse(f"{self.sent_id}: cycle through token {cur}")
                seen.add(cur)
                cur = self.tokens[cur - 1].head


@dataclass(frozen=True)
class SpeakerMeta:
    speaker_id: str
    party: Optional[str]
    affiliation: Optional[str]  # government | opposition | other | None
    first_office_date: Optional[Date]
    is_minister: Optional[bool]
    is_shadow: Optional[bool]


@dataclass(frozen=True)
class QAPair:
    pair_id: str
    date: Date
    asker: SpeakerMeta
    answerer: SpeakerMeta
    department: Optional[str]
    question_text: str
    answer_text: str
    question_sentences: tuple[ParsedSentence, ...]
    answer_sentences: tuple[ParsedSentence, ...]


def question_sentences_of(pair: QAPair) -> tuple[ParsedSentence, ...]:
    """The question-side sentences that actually end in a question mark."""
    return tuple(s for s in pair.question_sentences if s.is_question)


@dataclass(frozen=True)
class TimelinePeriod:
    start: Date
    end: Date  # inclusive
    government_party: str
    opposition_party: str


@dataclass(frozen=True)
class GovernmentTimeline:
    """Which party governed when, and who the official opposition was.

    Affiliation is resolved per question date: the governing party maps to
    ``government``, the single official opposition party to ``opposition``,
    every other party to ``other``. Dates outside all periods, or speakers
    without a party, resolve to None.
    """

    periods: tuple[TimelinePeriod, ...]

    def period_of(self, on: Date) -> Optional[TimelinePeriod]:
        for p in self.periods:
            if p.start <= on <= p.end:
                return p
        return None

    def affiliation_of(self, party: Optional[str], on: Date) -> Optional[str]:
        if not party:
            return None
        period = self.period_of(on)
        if period is None:
            return None
        if party == period.government_party:
            return GOVERNMENT
        if party == period.opposition_party:
            return OPPOSITION
        return OTHER

    @staticmethod
    def from_json(obj: list[dict]) -> "GovernmentTimeline":
        periods = []
        for entry in obj:
            try:
                periods.append(
                    TimelinePeriod(
                        start=Date.fromisoformat(entry["start"]),
                        end=Date.fromisoformat(entry["end"]),
                        government_party=entry["government"],
                        opposition_party=entry["opposition"],
                    )
                )
            except (KeyError, ValueError) as exc:
                raise ConfigError(f"bad timeline entry {entry!r}: {exc}") from exc
        return GovernmentTimeline(periods=tuple(periods))


@dataclass
class Corpus:
    pairs: tuple[QAPair, ...]
    _by_id: dict[str, QAPair] = field(init=False, repr=False)

    def __post_init__(self):
        ordered = tuple(sorted(self.pairs, key=lambda p: (p.date.isoformat(), p.pair_id)))
        object.__setattr__(self, "pairs", ordered)
        self._by_id = {p.pair_id: p for p in ordered}

    def __len__(self) -> int:
        return len(self.pairs)

    def __iter__(self) -> Iterator[QAPair]:
        return iter(self.pairs)

    def get(self, pair_id: str) -> QAPair:
        return self._by_id[pair_id]

    def __contains__(self, pair_id: str) -> bool:
        return pair_id in self._by_id


@dataclass(frozen=True)
class LoadError:
    kind: str  # bad-json | bad-record | bad-date | duplicate | bad-parse | orphan-parse | missing-parse | no-question-sentence
    where: str  # line number or sentence/pair id
    message: str


@dataclass
class LoadReport:
    errors: list[LoadError] = field(default_factory=list)

    def add(self, kind: str, where: str, message: str) -> None:
        self.errors.append(LoadError(kind, where, message))

    def count(self, kind: Optional[str] = None) -> int:
        if kind is None:
            return len(self.errors)
        return sum(1 for e in self.errors if e.kind == kind)

    def kinds(self) -> dict[str, int]:
        out: dict[str, int] = {}
        for e in self.errors:
            out[e.kind] = out.get(e.kind, 0) + 1
        return dict(sorted(out.items()))


@dataclass
class LoadResult:
    corpus: Corpus
    report: LoadReport


def _parse_speaker(obj: dict, role: str) -> SpeakerMeta:
    if not isinstance(obj, dict):
        raise ValueError(f"{role} is not an object")
    speaker_id = obj.get("speaker_id")
    if not isinstance(speaker_id, str) or not speaker_id:
        raise ValueError(f"{role}.speaker_id missing or empty")
    party = obj.get("party")
    if party is not None and not isinstance(party, str):
        raise ValueError(f"{role}.party must be a string or null")
    raw_first = obj.get("first_office_date")
    if raw_first is None:
        first = None
    elif isinstance(raw_first, str):
        first = Date.fromisoformat(raw_first)  # ValueError propagates
    else:
        raise ValueError(f"{role}.first_office_date must be a string or null")
    is_minister = obj.get("is_minister")
    if is_minister is not None and not isinstance(is_minister, bool):
        raise ValueError(f"{role}.is_minister must be a bool or null")
    is_shadow = obj.get("is_shadow")
    if is_shadow is not None and not isinstance(is_shadow, bool):
        raise ValueError(f"{role}.is_shadow must be a bool or null")
    return SpeakerMeta(
        speaker_id=speaker_id,
        party=party,
        affiliation=None,
        first_office_date=first,
        is_minister=is_minister,
        is_shadow=is_shadow,
    )


def _read_metadata(path: str, report: LoadReport) -> dict[str, dict]:
    """Parse the JSONL metadata file into raw records keyed by pair id."""
    records: dict[str, dict] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                report.add("bad-json", f"line {lineno}", str(exc))
                continue
            pair_id = obj.get("pair_id")
            if not isinstance(pair_id, str) or not pair_id:
                report.add("bad-record", f"line {lineno}", "pair_id missing or empty")
                continue
            if pair_id in records:
                report.add("duplicate", f"line {lineno}", f"duplicate pair_id {pair_id!r}")
                continue
            try:
                when = Date.fromisoformat(obj.get("date", ""))
            except (TypeError, ValueError):
                report.add(
                    "bad-date",
                    f"line {lineno}",
                    f"pair {pair_id!r}: unparseable date {obj.get('date')!r}",
                )
                continue
            try:
                asker = _parse_speaker(obj.get("asker"), "asker")
                answerer = _parse_speaker(obj.get("answerer"), "answerer")
            except ValueError as exc:
                report.add("bad-record", f"line {lineno}", f"pair {pair_id!r}: {exc}")
                continue
            q_text = obj.get("question_text")
            a_text = obj.get("answer_text")
            if not isinstance(q_text, str) or not isinstance(a_text, str):
                report.add(
                    "bad-record",
                    f"line {lineno}",
                    f"pair {pair_id!r}: question_text/answer_text must be strings",
                )
                continue
            department = obj.get("department")
            if department is not None and not isinstance(department, str):
                report.add("bad-record", f"line {lineno}", f"pair {pair_id!r}: bad department")
                continue
            records[pair_id] = {
                "date": when,
                "asker": asker,
                "answerer": answerer,
                "question_text": q_text,
                "answer_text": a_text,
                "department": department,
            }
    return records


def _iter_conllu_blocks(path: str) -> Iterator[tuple[list[str], list[str]]]:
    """Yield (comment_lines, token_lines) per blank-line-separated block."""
    comments: list[str] = []
    rows: list[str] = []
    with open(path, encoding="utf-8") as fh:
        for raw in fh:
            line = raw.rstrip("\n")
            if not line.strip():
                if comments or rows:
                    yield comments, rows
                    comments, rows = [], []
                continue
            if line.startswith("#"):
                comments.append(line)
            else:
                rows.append(line)
    if comments or rows:
        yield comments, rows


def _parse_sentence(comments: list[str], rows: list[str]) -> ParsedSentence:
    sent_id = ""
    raw_text = ""
    for c in comments:
        body = c.lstrip("#").strip()
        if body.startswith("sent_id"):
            _, _, value = body.partition("=")
            sent_id = value.strip()
        elif body.startswith("text"):
            _, _, value = body.partition("=")
            raw_text = value.strip()
    if not sent_id:
        raise ValueError("block has no sent_id comment")
    tokens = []
    for row in rows:
        cols = row.split("\t")
        if len(cols) < 8:
            raise ValueError(f"{sent_id}: token line has {len(cols)} columns, expected >= 8")
        idx_col = cols[0]
        if "-" in idx_col or "." in idx_col:
            continue  # multiword ranges and empty nodes carry no tree structure
        try:
            index = int(idx_col)
            head = int(cols[6])
        except ValueError as exc:
            raise ValueError(f"{sent_id}: non-integer ID or HEAD: {exc}") from exc
        tokens.append(
            Token(
                index=index,
                surface=cols[1],
                lemma="" if cols[2] == "_" else cols[2],
                upos="" if cols[3] == "_" else cols[3],
                xpos="" if cols[4] == "_" else cols[4],
                head=head,
                dep_label=cols[7],
            )
        )
    if not raw_text:
        raw_text = " ".join(t.surface for t in tokens)
    sent = ParsedSentence(sent_id=sent_id, raw_text=raw_text, tokens=tuple(tokens))
    sent.validate()
    return sent


def _split_sent_id(sent_id: str) -> tuple[str, str, int]:
    pair_id, side, idx = sent_id.rsplit(":", 2)
    if side not in ("q", "a"):
        raise ValueError(f"side must be q or a, got {side!r}")
    return pair_id, side, int(idx)


def load_corpus(
    metadata_path: str,
    parses_path: str,
    timeline: Optional[GovernmentTimeline] = None,
) -> LoadResult:
    """Load and align metadata with parses, collecting errors as we go.

    Pairs survive only if their record validates, all their sentences
    parse into well-formed trees with contiguous 0-based indices on both
    sides, and at least one question-side sentence ends in a question
    mark. Affiliation is resolved against the timeline when one is given.
    """
    report = LoadReport()
    records = _read_metadata(metadata_path, report)

    parses: dict[str, dict[str, dict[int, ParsedSentence]]] = {}
    seen_ids: set[str] = set()
    for comments, rows in _iter_conllu_blocks(parses_path):
        try:
            sent = _parse_sentence(comments, rows)
        except (ValueError, InvalidParse) as exc:
            report.add("bad-parse", comments[0] if comments else "?", str(exc))
            continue
        if sent.sent_id in seen_ids:
            report.add("duplicate", sent.sent_id, "duplicate sent_id")
            continue
        seen_ids.add(sent.sent_id)
        try:
            pair_id, side, idx = _split_sent_id(sent.sent_id)
        except ValueError as exc:
            report.add("orphan-parse", sent.sent_id, f"unparseable sent_id: {exc}")
            continue
        if pair_id not in records:
            report.add("orphan-parse", sent.sent_id, f"no metadata record for {pair_id!r}")
            continue
        parses.setdefault(pair_id, {"q": {}, "a": {}})[side][idx] = sent

    pairs = []
    for pair_id, rec in records.items():
        sides = parses.get(pair_id, {"q": {}, "a": {}})
        ok = True
        ordered: dict[str, tuple[ParsedSentence, ...]] = {}
        for side in ("q", "a"):
            got = sides[side]
            if not got:
                report.add("missing-parse", pair_id, f"no {side}-side sentences")
                ok = False
                continue
            if set(got) != set(range(len(got))):
                report.add(
                    "missing-parse",
                    pair_id,
                    f"{side}-side sentence indices {sorted(got)} are not 0..{len(got) - 1}",
                )
                ok = False
                continue
            ordered[side] = tuple(got[i] for i in range(len(got)))
        if not ok:
            continue
        if not any(s.is_question for s in ordered["q"]):
            report.add("no-question-sentence", pair_id, "no question-side sentence ends in '?'")
            continue
        asker: SpeakerMeta = rec["asker"]
        answerer: SpeakerMeta = rec["answerer"]
        if timeline is not None:
            asker = SpeakerMeta(
                speaker_id=asker.speaker_id,
                party=asker.party,
                affiliation=timeline.affiliation_of(asker.party, rec["date"]),
                first_office_date=asker.first_office_date,
                is_minister=asker.is_minister,
                is_shadow=asker.is_shadow,
            )
            answerer = SpeakerMeta(
                speaker_id=answerer.speaker_id,
                party=answerer.party,
                affiliation=timeline.affiliation_of(answerer.party, rec["date"]),
                first_office_date=answerer.first_office_date,
                is_minister=answerer.is_minister,
                is_shadow=answerer.is_shadow,
            )
        pairs.append(
            QAPair(
                pair_id=pair_id,
                date=rec["date"],
                asker=asker,
                answerer=answerer,
                department=rec["department"],
                question_text=rec["question_text"],
                answer_text=rec["answer_text"],
                question_sentences=ordered["q"],
                answer_sentences=ordered["a"],
            )
        )
    return LoadResult(corpus=Corpus(pairs=tuple(pairs)), report=report)


def _speaker_json(meta: SpeakerMeta) -> dict:
    return {
        "speaker_id": meta.speaker_id,
        "party": meta.party,
        "first_office_date": (
            meta.first_office_date.isoformat() if meta.first_office_date else None
        ),
        "is_minister": meta.is_minister,
        "is_shadow": meta.is_shadow,
    }


def save_corpus(corpus: Corpus, metadata_path: str, parses_path: str) -> None:
    """Write the corpus back out in its canonical serialized form.

    Loading the result and saving again reproduces the files byte for
    byte, which is what lets downstream stages hash their inputs.
    """
    with open(metadata_path, "w", encoding="utf-8") as fh:
        for pair in corpus:
            obj = {
                "pair_id": pair.pair_id,
                "date": pair.date.isoformat(),
                "asker": _speaker_json(pair.asker),
                "answerer": _speaker_json(pair.answerer),
                "department": pair.department,
                "question_text": pair.question_text,
                "answer_text": pair.answer_text,
            }
            fh.write(json.dumps(obj, ensure_ascii=False, separators=(",", ":")) + "\n")
    with open(parses_path, "w", encoding="utf-8") as fh:
        for pair in corpus:
            for sent in list(pair.question_sentences) + list(pair.answer_sentences):
                fh.write(f"# sent_id = {sent.sent_id}\n")
                fh.write(f"# text = {sent.raw_text}\n")
                for t in sent.tokens:
                    cols = [
                        str(t.index),
                        t.surface,
                        t.lemma or "_",
                        t.upos or "_",
                        t.xpos or "_",
                        "_",
                        str(t.head),
                        t.dep_label,
                        "_",
                        "_",
                    ]
                    fh.write("\t".join(cols) + "\n")
                fh.write("\n")


@dataclass(frozen=True)
class FilterConfig:
    """Which pair-level restrictions the analysis subset applies."""

    single_question_only: bool = True
    require_metadata: bool = True
    exclude_shadow: bool = True


@dataclass
class FilterResult:
    corpus: Corpus
    input_count: int
    retained_count: int
    removed: dict[str, int]


def filter_analysis_subset(corpus: Corpus, rules: FilterConfig) -> FilterResult:
    """Restrict a corpus for downstream analyses.

    Rules are checked in a fixed order and each removed pair is charged to
    the first rule that rejects it, so the removal counts plus the
    retained count always sum to the input count. Applying the same rules
    to the result changes nothing.
    """
    removed = {"single_question_only": 0, "require_metadata": 0, "exclude_shadow": 0}
    kept = []
    for pair in corpus:
        if rules.single_question_only and len(question_sentences_of(pair)) != 1:
            removed["single_question_only"] += 1
            continue
        if rules.require_metadata and (
            pair.asker.affiliation is None
            or pair.answerer.affiliation is None
            or pair.asker.is_minister is None
            or pair.answerer.is_minister is None
        ):
            removed["require_metadata"] += 1
            continue
        if rules.exclude_shadow and pair.asker.is_shadow is not False:
            removed["exclude_shadow"] += 1
            continue
        kept.append(pair)
    return FilterResult(
        corpus=Corpus(pairs=tuple(kept)),
        input_count=len(corpus),
        retained_count=len(kept),
        removed=removed,
    )


def tenure_years(speaker: SpeakerMeta, on: Date) -> Optional[int]:
    """Completed calendar years since the speaker first held office.

    None when the first-office date is unknown; such speakers are simply
    ineligible for tenure analyses rather than an error.
    """
    first = speaker.first_office_date
    if first is None:
        return None
    years = on.year - first.year
    if (on.month, on.day) < (first.month, first.day):
        years -= 1
    return years
