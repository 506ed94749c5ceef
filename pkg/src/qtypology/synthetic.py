"""Deterministic synthetic question-period corpus for end-to-end runs.

The generator fabricates around five hundred question-answer pairs drawn
from three phrasing families. Each family couples its own question
templates (hand-built dependency trees) with an answer vocabulary that
shares no content words with the other families, so the induced latent
space separates the families cleanly and a three-way clustering should
recover them almost perfectly. Speaker metadata, a two-period government
timeline, and a mid-corpus election are wired in so the propensity,
switch, cohort, and tenure analyses all have something to find.

Everything is driven by one integer seed; equal seeds give byte-equal
output files.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from datetime import date as Date
from pathlib import Path

import numpy as np

from .corpus import (
    Corpus,
    GovernmentTimeline,
    ParsedSentence,
    QAPair,
    SpeakerMeta,
    TimelinePeriod,
    Token,
    save_corpus,
)
from .fragments import FragmentConfig

FAMILIES = ("remedy", "update", "agree")

ELECTION = Date(1997, 5, 1)
TIMELINE = GovernmentTimeline(
    periods=(
        TimelinePeriod(Date(1994, 1, 1), Date(1997, 4, 30), "Unity", "Reform"),
        TimelinePeriod(Date(1997, 5, 1), Date(2000, 12, 31), "Reform", "Unity"),
    )
)

# family mix depends on which side the asker is on; the remedy/update
# swap across the election is what the switch analysis should detect
FAMILY_WEIGHTS = {
    "government": (0.15, 0.60, 0.25),
    "opposition": (0.60, 0.15, 0.25),
}

FILLERS = (
    "farming",
    "housing",
    "pensions",
    "policing",
    "tourism",
    "fisheries",
    "broadband",
    "childcare",
    "flooding",
    "recycling",
)

DEPARTMENTS = ("health", "transport", "education", "treasury")

# row format: surface, lemma, upos, xpos, head, dep_label
Row = tuple[str, str, str, str, int, str]


def _build_sentence(sent_id: str, text: str, rows: list[Row]) -> ParsedSentence:
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
    sent = ParsedSentence(sent_id=sent_id, raw_text=text, tokens=tokens)
    sent.validate()
    return sent


def _question_remedy_0(filler: str) -> tuple[str, list[Row]]:
    text = f"What is the minister going to do about {filler}?"
    rows: list[Row] = [
        ("What", "what", "PRON", "WP", 7, "dobj"),
        ("is", "be", "AUX", "VBZ", 5, "aux"),
        ("the", "the", "DET", "DT", 4, "det"),
        ("minister", "minister", "NOUN", "NN", 5, "nsubj"),
        ("going", "go", "VERB", "VBG", 0, "root"),
        ("to", "to", "PART", "TO", 7, "aux"),
        ("do", "do", "VERB", "VB", 5, "xcomp"),
        ("about", "about", "ADP", "IN", 7, "prep"),
        (filler, filler, "NOUN", "NN", 8, "pobj"),
        ("?", "?", "PUNCT", ".", 5, "punct"),
    ]
    return text, rows


def _question_remedy_1(filler: str) -> tuple[str, list[Row]]:
    text = f"What does the minister propose to do about {filler}?"
    rows: list[Row] = [
        ("What", "what", "PRON", "WP", 7, "dobj"),
        ("does", "do", "AUX", "VBZ", 5, "aux"),
        ("the", "the", "DET", "DT", 4, "det"),
        ("minister", "minister", "NOUN", "NN", 5, "nsubj"),
        ("propose", "propose", "VERB", "VB", 0, "root"),
        ("to", "to", "PART", "TO", 7, "aux"),
        ("do", "do", "VERB", "VB", 5, "xcomp"),
        ("about", "about", "ADP", "IN", 7, "prep"),
        (filler, filler, "NOUN", "NN", 8, "pobj"),
        ("?", "?", "PUNCT", ".", 5, "punct"),
    ]
    return text, rows


def _question_update_0(filler: str) -> tuple[str, list[Row]]:
    text = f"Will the minister update the house on {filler}?"
    rows: list[Row] = [
        ("Will", "will", "AUX", "MD", 4, "aux"),
        ("the", "the", "DET", "DT", 3, "det"),
        ("minister", "minister", "NOUN", "NN", 4, "nsubj"),
        ("update", "update", "VERB", "VB", 0, "root"),
        ("the", "the", "DET", "DT", 6, "det"),
        ("house", "house", "NOUN", "NN", 4, "dobj"),
        ("on", "on", "ADP", "IN", 4, "prep"),
        (filler, filler, "NOUN", "NN", 7, "pobj"),
        ("?", "?", "PUNCT", ".", 4, "punct"),
    ]
    return text, rows


def _question_update_1(filler: str) -> tuple[str, list[Row]]:
    text = f"When will the minister publish a statement on {filler}?"
    rows: list[Row] = [
        ("When", "when", "ADV", "WRB", 5, "advmod"),
        ("will", "will", "AUX", "MD", 5, "aux"),
        ("the", "the", "DET", "DT", 4, "det"),
        ("minister", "minister", "NOUN", "NN", 5, "nsubj"),
        ("publish", "publish", "VERB", "VB", 0, "root"),
        ("a", "a", "DET", "DT", 7, "det"),
        ("statement", "statement", "NOUN", "NN", 5, "dobj"),
        ("on", "on", "ADP", "IN", 5, "prep"),
        (filler, filler, "NOUN", "NN", 8, "pobj"),
        ("?", "?", "PUNCT", ".", 5, "punct"),
    ]
    return text, rows


def _question_agree_0(filler: str) -> tuple[str, list[Row]]:
    text = f"Does the minister agree that we must act on {filler}?"
    rows: list[Row] = [
        ("Does", "do", "AUX", "VBZ", 4, "aux"),
        ("the", "the", "DET", "DT", 3, "det"),
        ("minister", "minister", "NOUN", "NN", 4, "nsubj"),
        ("agree", "agree", "VERB", "VB", 0, "root"),
        ("that", "that", "SCONJ", "IN", 8, "mark"),
        ("we", "we", "PRON", "PRP", 8, "nsubj"),
        ("must", "must", "AUX", "MD", 8, "aux"),
        ("act", "act", "VERB", "VB", 4, "ccomp"),
        ("on", "on", "ADP", "IN", 8, "prep"),
        (filler, filler, "NOUN", "NN", 9, "pobj"),
        ("?", "?", "PUNCT", ".", 4, "punct"),
    ]
    return text, rows


def _question_agree_1(filler: str) -> tuple[str, list[Row]]:
    text = f"Does the secretary accept that reform must come to {filler}?"
    rows: list[Row] = [
        ("Does", "do", "AUX", "VBZ", 4, "aux"),
        ("the", "the", "DET", "DT", 3, "det"),
        ("secretary", "secretary", "NOUN", "NN", 4, "nsubj"),
        ("accept", "accept", "VERB", "VB", 0, "root"),
        ("that", "that", "SCONJ", "IN", 8, "mark"),
        ("reform", "reform", "NOUN", "NN", 8, "nsubj"),
        ("must", "must", "AUX", "MD", 8, "aux"),
        ("come", "come", "VERB", "VB", 4, "ccomp"),
        ("to", "to", "ADP", "IN", 8, "prep"),
        (filler, filler, "NOUN", "NN", 9, "pobj"),
        ("?", "?", "PUNCT", ".", 4, "punct"),
    ]
    return text, rows


QUESTION_TEMPLATES = {
    "remedy": (_question_remedy_0, _question_remedy_1),
    "update": (_question_update_0, _question_update_1),
    "agree": (_question_agree_0, _question_agree_1),
}


def _answer_remedy_0() -> tuple[str, list[Row]]:
    return "We are reviewing the budget.", [
        ("We", "we", "PRON", "PRP", 3, "nsubj"),
        ("are", "be", "AUX", "VBP", 3, "aux"),
        ("reviewing", "review", "VERB", "VBG", 0, "root"),
        ("the", "the", "DET", "DT", 5, "det"),
        ("budget", "budget", "NOUN", "NN", 3, "dobj"),
        (".", ".", "PUNCT", ".", 3, "punct"),
    ]


def _answer_remedy_1() -> tuple[str, list[Row]]:
    return "We are restoring the funding urgently.", [
        ("We", "we", "PRON", "PRP", 3, "nsubj"),
        ("are", "be", "AUX", "VBP", 3, "aux"),
        ("restoring", "restore", "VERB", "VBG", 0, "root"),
        ("the", "the", "DET", "DT", 5, "det"),
        ("funding", "funding", "NOUN", "NN", 3, "dobj"),
        ("urgently", "urgently", "ADV", "RB", 3, "advmod"),
        (".", ".", "PUNCT", ".", 3, "punct"),
    ]


def _answer_remedy_2() -> tuple[str, list[Row]]:
    return "We are rebuilding the programme.", [
        ("We", "we", "PRON", "PRP", 3, "nsubj"),
        ("are", "be", "AUX", "VBP", 3, "aux"),
        ("rebuilding", "rebuild", "VERB", "VBG", 0, "root"),
        ("the", "the", "DET", "DT", 5, "det"),
        ("programme", "programme", "NOUN", "NN", 3, "dobj"),
        (".", ".", "PUNCT", ".", 3, "punct"),
    ]


def _answer_update_0() -> tuple[str, list[Row]]:
    return "My department will publish figures shortly.", [
        ("My", "my", "PRON", "PRP$", 2, "poss"),
        ("department", "department", "NOUN", "NN", 4, "nsubj"),
        ("will", "will", "AUX", "MD", 4, "aux"),
        ("publish", "publish", "VERB", "VB", 0, "root"),
        ("figures", "figure", "NOUN", "NNS", 4, "dobj"),
        ("shortly", "shortly", "ADV", "RB", 4, "advmod"),
        (".", ".", "PUNCT", ".", 4, "punct"),
    ]


def _answer_update_1() -> tuple[str, list[Row]]:
    return "My department will issue statistics shortly.", [
        ("My", "my", "PRON", "PRP$", 2, "poss"),
        ("department", "department", "NOUN", "NN", 4, "nsubj"),
        ("will", "will", "AUX", "MD", 4, "aux"),
        ("issue", "issue", "VERB", "VB", 0, "root"),
        ("statistics", "statistic", "NOUN", "NNS", 4, "dobj"),
        ("shortly", "shortly", "ADV", "RB", 4, "advmod"),
        (".", ".", "PUNCT", ".", 4, "punct"),
    ]


def _answer_update_2() -> tuple[str, list[Row]]:
    return "My officials will release tables shortly.", [
        ("My", "my", "PRON", "PRP$", 2, "poss"),
        ("officials", "official", "NOUN", "NNS", 4, "nsubj"),
        ("will", "will", "AUX", "MD", 4, "aux"),
        ("release", "release", "VERB", "VB", 0, "root"),
        ("tables", "table", "NOUN", "NNS", 4, "dobj"),
        ("shortly", "shortly", "ADV", "RB", 4, "advmod"),
        (".", ".", "PUNCT", ".", 4, "punct"),
    ]


def _answer_agree_0() -> tuple[str, list[Row]]:
    return "I can confirm that support continues.", [
        ("I", "i", "PRON", "PRP", 3, "nsubj"),
        ("can", "can", "AUX", "MD", 3, "aux"),
        ("confirm", "confirm", "VERB", "VB", 0, "root"),
        ("that", "that", "SCONJ", "IN", 6, "mark"),
        ("support", "support", "NOUN", "NN", 6, "nsubj"),
        ("continues", "continue", "VERB", "VBZ", 3, "ccomp"),
        (".", ".", "PUNCT", ".", 3, "punct"),
    ]


def _answer_agree_1() -> tuple[str, list[Row]]:
    return "I can confirm that commitment stands.", [
        ("I", "i", "PRON", "PRP", 3, "nsubj"),
        ("can", "can", "AUX", "MD", 3, "aux"),
        ("confirm", "confirm", "VERB", "VB", 0, "root"),
        ("that", "that", "SCONJ", "IN", 6, "mark"),
        ("commitment", "commitment", "NOUN", "NN", 6, "nsubj"),
        ("stands", "stand", "VERB", "VBZ", 3, "ccomp"),
        (".", ".", "PUNCT", ".", 3, "punct"),
    ]


def _answer_agree_2() -> tuple[str, list[Row]]:
    return "Our commitment remains firm.", [
        ("Our", "our", "PRON", "PRP$", 2, "poss"),
        ("commitment", "commitment", "NOUN", "NN", 3, "nsubj"),
        ("remains", "remain", "VERB", "VBZ", 0, "root"),
        ("firm", "firm", "ADJ", "JJ", 3, "acomp"),
        (".", ".", "PUNCT", ".", 3, "punct"),
    ]


ANSWER_TEMPLATES = {
    "remedy": (_answer_remedy_0, _answer_remedy_1, _answer_remedy_2),
    "update": (_answer_update_0, _answer_update_1, _answer_update_2),
    "agree": (_answer_agree_0, _answer_agree_1, _answer_agree_2),
}


@dataclass(frozen=True)
class _Asker:
    meta: SpeakerMeta
    n_questions: int
    earliest: Date


def _make_speakers() -> tuple[list[_Asker], dict[str, list[SpeakerMeta]]]:
    askers = []
    for party in ("Unity", "Reform"):
        slug = party.lower()
        # long-serving members span the election, so they qualify for
        # the switch analysis; the staggered start dates spread tenure
        for i in range(6):
            askers.append(
                _Asker(
                    meta=SpeakerMeta(
                        speaker_id=f"mp-{slug}-{i:02d}",
                        party=party,
                        affiliation=None,
                        first_office_date=Date(1979 + 2 * i, 6, 15),
                        is_minister=False,
                        is_shadow=False,
                    ),
                    n_questions=30,
                    earliest=Date(1994, 1, 10),
                )
            )
        for i in range(6):
            askers.append(
                _Asker(
                    meta=SpeakerMeta(
                        speaker_id=f"mp-{slug}-new-{i:02d}",
                        party=party,
                        affiliation=None,
                        first_office_date=ELECTION,
                        is_minister=False,
                        is_shadow=False,
                    ),
                    n_questions=12,
                    earliest=Date(1997, 5, 2),
                )
            )
    ministers = {
        party: [
            SpeakerMeta(
                speaker_id=f"min-{party.lower()}-{i}",
                party=party,
                affiliation=None,
                first_office_date=Date(1985, 3, 1),
                is_minister=True,
                is_shadow=False,
            )
            for i in range(2)
        ]
        for party in ("Unity", "Reform")
    }
    return askers, ministers


LATEST = Date(2000, 12, 20)


def generate_corpus(seed: int = 7) -> Corpus:
    """Build the synthetic corpus in memory, affiliations resolved."""
    rng = np.random.default_rng(seed)
    askers, ministers = _make_speakers()
    serials = {family: 0 for family in FAMILIES}
    pairs = []
    for asker in askers:
        lo = asker.earliest.toordinal()
        hi = LATEST.toordinal()
        for _ in range(asker.n_questions):
            day = Date.fromordinal(int(rng.integers(lo, hi + 1)))
            affiliation = TIMELINE.affiliation_of(asker.meta.party, day)
            weights = FAMILY_WEIGHTS[affiliation]
            family = FAMILIES[
                int(rng.choice(len(FAMILIES), p=np.array(weights)))
            ]
            serial = serials[family]
            serials[family] += 1
            pair_id = f"{family}-{serial:04d}"

            q_template = QUESTION_TEMPLATES[family][int(rng.integers(2))]
            filler = FILLERS[int(rng.integers(len(FILLERS)))]
            q_text, q_rows = q_template(filler)
            question = _build_sentence(f"{pair_id}:q:0", q_text, q_rows)

            answer_sents = []
            a_text_parts = []
            n_answer = 2 if rng.random() < 0.5 else 1
            for j in range(n_answer):
                a_template = ANSWER_TEMPLATES[family][int(rng.integers(3))]
                a_text, a_rows = a_template()
                answer_sents.append(
                    _build_sentence(f"{pair_id}:a:{j}", a_text, a_rows)
                )
                a_text_parts.append(a_text)

            governing = TIMELINE.period_of(day).government_party
            answerer = ministers[governing][int(rng.integers(2))]
            pairs.append(
                QAPair(
                    pair_id=pair_id,
                    date=day,
                    asker=SpeakerMeta(
                        speaker_id=asker.meta.speaker_id,
                        party=asker.meta.party,
                        affiliation=affiliation,
                        first_office_date=asker.meta.first_office_date,
                        is_minister=asker.meta.is_minister,
                        is_shadow=asker.meta.is_shadow,
                    ),
                    answerer=SpeakerMeta(
                        speaker_id=answerer.speaker_id,
                        party=answerer.party,
                        affiliation="government",
                        first_office_date=answerer.first_office_date,
                        is_minister=answerer.is_minister,
                        is_shadow=answerer.is_shadow,
                    ),
                    department=DEPARTMENTS[serial % len(DEPARTMENTS)],
                    question_text=q_text,
                    answer_text=" ".join(a_text_parts),
                    question_sentences=(question,),
                    answer_sentences=tuple(answer_sents),
                )
            )
    return Corpus(pairs=pairs)


def default_config(seed: int = 7) -> dict:
    """Pipeline configuration sized for the synthetic corpus."""
    return {
        "paths": {"metadata": "metadata.jsonl", "parses": "parses.conllu"},
        "timeline": [
            {
                "start": p.start.isoformat(),
                "end": p.end.isoformat(),
                "government": p.government_party,
                "opposition": p.opposition_party,
            }
            for p in TIMELINE.periods
        ],
        "elections": [ELECTION.isoformat()],
        "filters": {
            "single_question_only": True,
            "require_metadata": True,
            "exclude_shadow": True,
        },
        "fragments": FragmentConfig().to_json(),
        "min_support": 30,
        "merge_prob": 0.9,
        "max_motif_size": 4,
        "min_answer_freq": 20,
        "smooth_idf": False,
        "rank": 8,
        "clusters": 3,
        "seed": seed,
        "restarts": 10,
    }


def family_of(pair_id: str) -> str:
    """Ground-truth phrasing family, recoverable from the pair id."""
    return pair_id.rsplit("-", 1)[0]


def write_synthetic_workdir(out_dir: str | Path, seed: int = 7) -> Corpus:
    """Write metadata, parses, and a ready-to-run config into out_dir."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    corpus = generate_corpus(seed=seed)
    save_corpus(corpus, str(out / "metadata.jsonl"), str(out / "parses.conllu"))
    with open(out / "config.json", "w", encoding="utf-8") as fh:
        json.dump(default_config(seed=seed), fh, indent=2, sort_keys=True)
        fh.write("\n")
    return corpus
