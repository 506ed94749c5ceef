"""Fragment extraction rules, canonical strings, and serialization."""

from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from qtypology.errors import EmptySentenceError
from qtypology.corpus import ParsedSentence, Token
from qtypology.fragments import (
    Fragment,
    FragmentConfig,
    FragmentSet,
    canonical_string,
    dump_fragments_tsv,
    extract_fragments,
    find_canonical_collisions,
    fragment_sort_key,
    initial_bigram,
    initial_unigram,
    load_fragments_tsv,
    parse_canonical,
    root_arc,
    root_only,
)

from conftest import EXPECTED_EXAMPLE_CANONICALS, make_sentence


def canonicals(sentence, cfg=FragmentConfig()):
    return set(extract_fragments(sentence, cfg).canonicals())


class TestCanonicalExample:
    def test_exact_fragment_set(self, example_question):
        assert canonicals(example_question) == EXPECTED_EXAMPLE_CANONICALS

    def test_no_recursion_into_xcomp(self, example_question):
        got = canonicals(example_question)
        assert "do→*" not in got
        assert "do→about" not in got

    def test_lemma_mode_swaps_tree_words_only(self, example_question):
        cfg = FragmentConfig(use_lemma=True)
        assert canonicals(example_question, cfg) == {
            "what", "what is", "go→*", "be←go", "go→do",
        }


class TestFilters:
    def test_np_children_filtered(self):
        # "The surgery closed." with a det under the subject
        sent = make_sentence(
            "s:q:0",
            [
                ("The", "the", "DET", "DT", 2, "det"),
                ("surgery", "surgery", "NOUN", "NN", 3, "nsubj"),
                ("closed", "close", "VERB", "VBD", 0, "root"),
                (".", ".", "PUNCT", ".", 3, "punct"),
            ],
        )
        assert canonicals(sent) == {"the", "the surgery", "closed→*"}

    def test_pronoun_child_filtered_by_tag(self):
        # "Give me strength?" dative pronoun has a non-NP label
        sent = make_sentence(
            "s:q:0",
            [
                ("Give", "give", "VERB", "VB", 0, "root"),
                ("me", "i", "PRON", "PRP", 1, "dative"),
                ("strength", "strength", "NOUN", "NN", 1, "dobj"),
                ("?", "?", "PUNCT", ".", 1, "punct"),
            ],
        )
        assert canonicals(sent) == {"give", "give me", "give→*"}

    def test_wdt_opening_noun_phrase_keeps_determiner_arc(self):
        # "Which option does he prefer?"
        sent = make_sentence(
            "s:q:0",
            [
                ("Which", "which", "DET", "WDT", 2, "det"),
                ("option", "option", "NOUN", "NN", 5, "dobj"),
                ("does", "do", "AUX", "VBZ", 5, "aux"),
                ("he", "he", "PRON", "PRP", 5, "nsubj"),
                ("prefer", "prefer", "VERB", "VB", 0, "root"),
                ("?", "?", "PUNCT", ".", 5, "punct"),
            ],
        )
        assert canonicals(sent) == {
            "which", "which option", "prefer→*", "does←prefer", "which←prefer",
        }

    def test_np_not_opening_with_wdt_stays_filtered(self):
        # "The option which he prefers stands?" subject subtree starts
        # with a determiner, so the embedded WDT changes nothing
        sent = make_sentence(
            "s:q:0",
            [
                ("The", "the", "DET", "DT", 2, "det"),
                ("option", "option", "NOUN", "NN", 6, "nsubj"),
                ("which", "which", "DET", "WDT", 5, "dobj"),
                ("he", "he", "PRON", "PRP", 5, "nsubj"),
                ("prefers", "prefer", "VERB", "VBZ", 2, "relcl"),
                ("stands", "stand", "VERB", "VBZ", 0, "root"),
                ("?", "?", "PUNCT", ".", 6, "punct"),
            ],
        )
        assert canonicals(sent) == {"the", "the option", "stands→*"}

    def test_punct_children_skipped_by_label_and_tag(self):
        sent = make_sentence(
            "s:q:0",
            [
                ("Proceed", "proceed", "VERB", "VB", 0, "root"),
                (",", ",", "PUNCT", ",", 1, "punct"),
                ("then", "then", "ADV", "RB", 1, "advmod"),
                ("-", "-", "X", "HYPH", 1, "dep"),  # punct tag, odd label
                ("?", "?", "PUNCT", ".", 1, "punct"),
            ],
        )
        assert canonicals(sent) == {
            "proceed", "proceed ,", "proceed→*", "proceed→then",
        }


class TestRecursion:
    def test_conjoined_clause_contributes_roots_and_arcs(self):
        # "Will he act or will he delay?"
        sent = make_sentence(
            "s:q:0",
            [
                ("Will", "will", "AUX", "MD", 3, "aux"),
                ("he", "he", "PRON", "PRP", 3, "nsubj"),
                ("act", "act", "VERB", "VB", 0, "root"),
                ("or", "or", "CCONJ", "CC", 3, "cc"),
                ("will", "will", "AUX", "MD", 7, "aux"),
                ("he", "he", "PRON", "PRP", 7, "nsubj"),
                ("delay", "delay", "VERB", "VB", 3, "conj"),
                ("?", "?", "PUNCT", ".", 3, "punct"),
            ],
        )
        assert canonicals(sent) == {
            "will", "will he",
            "act→*", "will←act", "act→or", "act→delay",
            "delay→*", "will←delay",
        }

    def test_no_initial_ngrams_from_inner_clauses(self):
        sent = make_sentence(
            "s:q:0",
            [
                ("He", "he", "PRON", "PRP", 2, "nsubj"),
                ("said", "say", "VERB", "VBD", 0, "root"),
                ("go", "go", "VERB", "VB", 2, "ccomp"),
                ("now", "now", "ADV", "RB", 3, "advmod"),
                ("?", "?", "PUNCT", ".", 2, "punct"),
            ],
        )
        got = canonicals(sent)
        # the inner clause adds go→* and go→now but no "go now" bigram
        assert "go→*" in got and "go→now" in got
        assert "go now" not in got
        assert got == {"he", "he said", "said→*", "said→go", "go→*", "go→now"}

    def test_recursion_depth_beyond_one_level(self):
        # ccomp inside a conj clause keeps unwinding
        sent = make_sentence(
            "s:q:0",
            [
                ("Stop", "stop", "VERB", "VB", 0, "root"),
                ("or", "or", "CCONJ", "CC", 1, "cc"),
                ("admit", "admit", "VERB", "VB", 1, "conj"),
                ("you", "you", "PRON", "PRP", 5, "nsubj"),
                ("failed", "fail", "VERB", "VBD", 3, "ccomp"),
                ("?", "?", "PUNCT", ".", 1, "punct"),
            ],
        )
        assert canonicals(sent) == {
            "stop", "stop or",
            "stop→*", "stop→or", "stop→admit",
            "admit→*", "admit→failed",
            "failed→*",
        }


class TestEdges:
    def test_empty_sentence_raises(self):
        with pytest.raises(EmptySentenceError):
            extract_fragments(ParsedSentence("s", "", ()))

    def test_single_token_sentence_has_no_bigram(self):
        sent = make_sentence("s:q:0", [("Why", "why", "ADV", "WRB", 0, "root")])
        assert canonicals(sent) == {"why", "why→*"}

    def test_initial_ngrams_are_literal_token_sequence(self):
        # the opening bigram reads the raw token stream, punctuation and all
        sent = make_sentence(
            "s:q:0",
            [
                ("Why", "why", "ADV", "WRB", 2, "advmod"),
                ("wait", "wait", "VERB", "VB", 0, "root"),
                ("?", "?", "PUNCT", ".", 2, "punct"),
            ],
        )
        assert "why wait" in canonicals(sent)

    def test_surfaces_lowercased(self):
        sent = make_sentence(
            "s:q:0",
            [
                ("WHY", "why", "ADV", "WRB", 2, "advmod"),
                ("Wait", "wait", "VERB", "VB", 0, "root"),
            ],
        )
        assert canonicals(sent) == {"why", "why wait", "wait→*", "why←wait"}


class TestCanonicalStrings:
    def test_kind_rendering(self):
        assert canonical_string(initial_unigram("What")) == "what"
        assert canonical_string(initial_bigram("What", "Is")) == "what is"
        assert canonical_string(root_only("Going")) == "going→*"
        assert canonical_string(root_arc("going", "is", True)) == "is←going"
        assert canonical_string(root_arc("going", "do", False)) == "going→do"

    def test_sort_key_orders_kinds_then_strings(self):
        frags = [
            root_arc("a", "b", False),
            root_only("z"),
            initial_bigram("a", "a"),
            initial_unigram("z"),
            initial_unigram("a"),
        ]
        ordered = [canonical_string(f) for f in sorted(frags, key=fragment_sort_key)]
        assert ordered == ["a", "z", "a a", "z→*", "a→b"]

    @given(
        kind=st.sampled_from(["u", "b", "r", "al", "ar"]),
        w1=st.text(alphabet="abcdefg'", min_size=1, max_size=8),
        w2=st.text(alphabet="abcdefg'", min_size=1, max_size=8),
    )
    def test_parse_canonical_inverts_canonical_string(self, kind, w1, w2):
        if kind == "u":
            frag = initial_unigram(w1)
        elif kind == "b":
            frag = initial_bigram(w1, w2)
        elif kind == "r":
            frag = root_only(w1)
        elif kind == "al":
            frag = root_arc(w1, w2, child_precedes_root=True)
        else:
            frag = root_arc(w1, w2, child_precedes_root=False)
        assert parse_canonical(canonical_string(frag)) == frag

    def test_collision_detector(self):
        # a unigram containing a space is indistinguishable from a bigram
        fake = initial_unigram("what is")
        real = initial_bigram("what", "is")
        collisions = find_canonical_collisions({fake, real, root_only("go")})
        assert len(collisions) == 1
        assert collisions[0][0] == "what is"


class TestConfigAndSerialization:
    def test_config_json_round_trip(self):
        cfg = FragmentConfig(
            np_dep_labels=frozenset({"nsubj"}),
            use_lemma=True,
        )
        assert FragmentConfig.from_json(cfg.to_json()) == cfg

    def test_default_config_round_trip(self):
        cfg = FragmentConfig()
        assert FragmentConfig.from_json(cfg.to_json()) == cfg

    def test_tsv_round_trip(self, tmp_path, example_question):
        fs1 = extract_fragments(example_question)
        fs2 = FragmentSet(
            owner_id="other:q:0",
            fragments=frozenset({root_only("act"), initial_unigram("will")}),
        )
        path = tmp_path / "frags.tsv"
        dump_fragments_tsv([fs1, fs2], str(path))
        loaded = load_fragments_tsv(str(path))
        assert [fs.owner_id for fs in loaded] == [fs1.owner_id, fs2.owner_id]
        assert loaded[0].fragments == fs1.fragments
        assert loaded[1].fragments == fs2.fragments


@st.composite
def random_parsed_sentence(draw):
    n = draw(st.integers(min_value=1, max_value=9))
    words = draw(
        st.lists(
            st.text(alphabet="abcde", min_size=1, max_size=4),
            min_size=n, max_size=n,
        )
    )
    deps = ["det", "aux", "nsubj", "dobj", "prep", "punct", "conj", "ccomp", "advmod"]
    tags = ["NN", "VB", "DT", "PRP", "WDT", ".", "MD", "RB"]
    tokens = []
    for i in range(1, n + 1):
        head = 0 if i == 1 else draw(st.integers(min_value=1, max_value=i - 1))
        dep = "root" if i == 1 else draw(st.sampled_from(deps))
        tokens.append(
            Token(
                index=i,
                surface=words[i - 1],
                lemma=words[i - 1],
                upos="X",
                xpos=draw(st.sampled_from(tags)),
                head=head,
                dep_label=dep,
            )
        )
    return ParsedSentence(sent_id="r:q:0", raw_text=" ".join(words), tokens=tuple(tokens))


class TestExtractionProperties:
    @given(sent=random_parsed_sentence())
    def test_root_and_unigram_always_present(self, sent):
        got = canonicals(sent)
        root_word = sent.token(sent.root_index).surface.lower()
        assert f"{root_word}→*" in got
        assert sent.tokens[0].surface.lower() in got

    @given(sent=random_parsed_sentence())
    def test_deterministic_and_round_trippable(self, sent):
        a = extract_fragments(sent)
        b = extract_fragments(sent)
        assert a == b
        for canon in a.canonicals():
            assert canonical_string(parse_canonical(canon)) == canon
