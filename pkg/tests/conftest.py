"""Shared fixtures: hand-built parse trees and a small motif universe."""

from __future__ import annotations

from datetime import date as Date

import pytest

from qtypology.corpus import (
    Corpus,
    GovernmentTimeline,
    ParsedSentence,
    QAPair,
    SpeakerMeta,
    TimelinePeriod,
    Token,
)
from qtypology.fragments import (
    FragmentSet,
    initial_bigram,
    root_arc,
)

Row = tuple[str, str, str, str, int, str]


def make_sentence(sent_id: str, rows: list[Row], text: str = "") -> ParsedSentence:
    """Rows are (surface, lemma, upos, xpos, head, dep_label), 1-indexed heads."""
    tokens = tuple(
        Token(
            index=i,
            surface=surface,
            lemma=lemma,
            upos=upos,
            xpos=xpos,
            head=head,
            dep_label=dep,
        )
        for i, (surface, lemma, upos, xpos, head, dep) in enumerate(rows, start=1)
    )
    if not text:
        text = " ".join(r[0] for r in rows)
    sent = ParsedSentence(sent_id=sent_id, raw_text=text, tokens=tokens)
    sent.validate()
    return sent


@pytest.fixture
def example_question() -> ParsedSentence:
    """The canonical what-is-the-minister-going-to-do question."""
    return make_sentence(
        "example:q:0",
        [
            ("What", "what", "PRON", "WP", 7, "dobj"),
            ("is", "be", "AUX", "VBZ", 5, "aux"),
            ("the", "the", "DET", "DT", 4, "det"),
            ("minister", "minister", "NOUN", "NN", 5, "nsubj"),
            ("going", "go", "VERB", "VBG", 0, "root"),
            ("to", "to", "PART", "TO", 7, "aux"),
            ("do", "do", "VERB", "VB", 5, "xcomp"),
            ("about", "about", "ADP", "IN", 7, "prep"),
            ("housing", "housing", "NOUN", "NN", 8, "pobj"),
            ("?", "?", "PUNCT", ".", 5, "punct"),
        ],
        text="What is the minister going to do about housing?",
    )


EXPECTED_EXAMPLE_CANONICALS = {"what", "what is", "going→*", "is←going", "going→do"}


# A five-fragment universe whose co-occurrence pattern is controlled
# exactly, so motif supports, merges, edges, and sinks can be checked by
# hand. The three core fragments mirror the canonical example question.
FRAG_B = initial_bigram("what", "is")
FRAG_D = root_arc("going", "is", child_precedes_root=True)
FRAG_E = root_arc("going", "do", child_precedes_root=False)
FRAG_Z = initial_bigram("when", "is")
FRAG_W = root_arc("explain", "can", child_precedes_root=True)

MOTIF_TRANSACTION_PLAN = [
    (frozenset({FRAG_B, FRAG_D, FRAG_E}), 40),
    (frozenset({FRAG_B, FRAG_D}), 20),
    (frozenset({FRAG_B}), 20),
    (frozenset({FRAG_D, FRAG_E, FRAG_Z}), 20),
    (frozenset({FRAG_E}), 20),
    (frozenset({FRAG_B, FRAG_E, FRAG_W}), 20),
]


def motif_transactions() -> list[FragmentSet]:
    out = []
    serial = 0
    for fragments, copies in MOTIF_TRANSACTION_PLAN:
        for _ in range(copies):
            out.append(FragmentSet(owner_id=f"t{serial:04d}:q:0", fragments=fragments))
            serial += 1
    return out


@pytest.fixture
def motif_fixture_transactions() -> list[FragmentSet]:
    return motif_transactions()


def speaker(
    speaker_id: str,
    party: str | None = "Unity",
    affiliation: str | None = None,
    first_office: Date | None = Date(1990, 6, 15),
    is_minister: bool | None = False,
    is_shadow: bool | None = False,
) -> SpeakerMeta:
    return SpeakerMeta(
        speaker_id=speaker_id,
        party=party,
        affiliation=affiliation,
        first_office_date=first_office,
        is_minister=is_minister,
        is_shadow=is_shadow,
    )


def simple_pair(
    pair_id: str,
    day: Date = Date(1995, 3, 14),
    asker: SpeakerMeta | None = None,
    answerer: SpeakerMeta | None = None,
    question: ParsedSentence | None = None,
    answers: tuple[ParsedSentence, ...] | None = None,
) -> QAPair:
    if question is None:
        question = make_sentence(
            f"{pair_id}:q:0",
            [
                ("Why", "why", "ADV", "WRB", 2, "advmod"),
                ("wait", "wait", "VERB", "VB", 0, "root"),
                ("?", "?", "PUNCT", ".", 2, "punct"),
            ],
            text="Why wait?",
        )
    if answers is None:
        answers = (
            make_sentence(
                f"{pair_id}:a:0",
                [
                    ("We", "we", "PRON", "PRP", 2, "nsubj"),
                    ("acted", "act", "VERB", "VBD", 0, "root"),
                    (".", ".", "PUNCT", ".", 2, "punct"),
                ],
                text="We acted.",
            ),
        )
    return QAPair(
        pair_id=pair_id,
        date=day,
        asker=asker or speaker("mp-1"),
        answerer=answerer or speaker("min-1", is_minister=True),
        department="health",
        question_text=question.raw_text,
        answer_text=" ".join(a.raw_text for a in answers),
        question_sentences=(question,),
        answer_sentences=answers,
    )


@pytest.fixture
def two_period_timeline() -> GovernmentTimeline:
    return GovernmentTimeline(
        periods=(
            TimelinePeriod(Date(1994, 1, 1), Date(1997, 4, 30), "Unity", "Reform"),
            TimelinePeriod(Date(1997, 5, 1), Date(2000, 12, 31), "Reform", "Unity"),
        )
    )


@pytest.fixture
def tiny_corpus() -> Corpus:
    return Corpus(
        pairs=(
            simple_pair("p-001", Date(1995, 3, 14)),
            simple_pair("p-002", Date(1995, 4, 2)),
            simple_pair("p-003", Date(1996, 1, 9)),
        )
    )
