import pytest
from hypothesis import given, settings, strategies as st

from corpuskit.bpe import (
    END_OF_WORD,
    BpeModel,
    apply_bpe,
    bpe_decode,
    format_codes,
    learn_bpe,
    parse_codes,
    read_codes,
    sample_concat,
    write_codes,
)
from corpuskit.corpus import Corpus, LanguageTag, Sentence
from corpuskit.errors import EmptyCorpus, EmptyInput, FormatError

from oracles import oracle_learn_bpe

FIXTURE = ["low"] * 5 + ["lower"] * 2 + ["newest"] * 6 + ["widest"] * 3


class TestLearnBpe:
    def test_first_merge_is_es(self):
        # pair counts by hand: "es" occurs in newest (6) + widest (3) = 9,
        # tied with ("s","t") and ("t","</w>"); lexicographic tie-break wins
        model = learn_bpe(FIXTURE, 10)
        assert model.merges[0] == ("e", "s")

    def test_min_frequency_stops(self):
        model = learn_bpe(["aa"], 10)
        assert model.merges == ()

    def test_ab_fixture(self):
        model = learn_bpe(["ab ab ab"], 5)
        assert model.merges == (("a", "b"), ("ab", END_OF_WORD))

    def test_merge_count_bound(self):
        model = learn_bpe(FIXTURE, 3)
        assert len(model.merges) == 3
        rich = learn_bpe(FIXTURE, 10_000)
        assert len(rich.merges) <= 10_000

    def test_empty_input(self):
        with pytest.raises(EmptyInput):
            learn_bpe([], 5)
        with pytest.raises(EmptyInput):
            learn_bpe(["   "], 5)

    def test_self_replay_determinism(self):
        first = learn_bpe(FIXTURE, 50)
        second = learn_bpe(FIXTURE, 50)
        assert first.merges == second.merges

    def test_oracle_equivalence_fixture(self):
        learned = learn_bpe(FIXTURE, 10)
        assert list(learned.merges) == oracle_learn_bpe(FIXTURE, 10)

    @settings(max_examples=60, deadline=None)
    @given(
        sentences=st.lists(
            st.text(alphabet="abcdef ", min_size=1, max_size=30), min_size=1, max_size=8
        ),
        num_merges=st.integers(min_value=1, max_value=25),
    )
    def test_oracle_equivalence_random(self, sentences, num_merges):
        # incremental pair updates must equal a full recount every iteration
        if not any(sentence.split() for sentence in sentences):
            return
        learned = learn_bpe(sentences, num_merges)
        assert list(learned.merges) == oracle_learn_bpe(sentences, num_merges)


class TestApplyDecode:
    def test_identity_segmentation(self):
        model = BpeModel(merges=())
        assert apply_bpe(model, "ab") == ["a", "b", END_OF_WORD]

    def test_trained_segmentation(self):
        model = learn_bpe(FIXTURE, 10_000)
        pieces = apply_bpe(model, "lowest")
        assert "".join(pieces).replace(END_OF_WORD, "") == "lowest"
        # the "est</w>" family unit learned from newest/widest applies
        assert pieces == ["low", "est</w>"]

    def test_unseen_characters_stay_single(self):
        model = learn_bpe(FIXTURE, 10_000)
        pieces = apply_bpe(model, "ioʋZ")
        assert bpe_decode(pieces) == "ioʋZ"

    def test_later_merge_can_enable_earlier(self):
        # rank order is re-scanned after every application
        model = BpeModel(merges=(("ab", "c"), ("a", "b")))
        assert apply_bpe(model, "abc") == ["abc", END_OF_WORD]

    def test_decode_examples(self):
        assert bpe_decode(["a", "b", END_OF_WORD]) == "ab"
        assert bpe_decode([]) == ""
        assert bpe_decode(["lo", "wer</w>", "ne", "west</w>"]) == "lower newest"

    def test_training_words_roundtrip(self):
        model = learn_bpe(FIXTURE, 10_000)
        for word in ("low", "lower", "newest", "widest"):
            assert bpe_decode(apply_bpe(model, word)) == word

    @settings(max_examples=200, deadline=None)
    @given(
        token=st.text(min_size=1, max_size=12).filter(
            lambda t: not any(ch.isspace() for ch in t) and END_OF_WORD not in t
        )
    )
    def test_roundtrip_random_tokens(self, token):
        # tokens containing the literal marker string are ambiguous by
        # construction of the codes format and excluded
        model = learn_bpe(FIXTURE, 100)
        assert bpe_decode(apply_bpe(model, token)) == token


class TestCodesFormat:
    def test_header(self):
        model = learn_bpe(["ab ab ab"], 5)
        assert format_codes(model).startswith("#version: 0.2\n")

    def test_roundtrip_byte_identical(self, tmp_path):
        model = learn_bpe(FIXTURE, 25)
        path = tmp_path / "codes.bpe"
        write_codes(model, path)
        first = path.read_bytes()
        reparsed = read_codes(path)
        assert reparsed == model
        write_codes(reparsed, path)
        assert path.read_bytes() == first

    def test_missing_header_rejected(self):
        with pytest.raises(FormatError):
            parse_codes("a b\n")

    def test_malformed_line_rejected(self):
        with pytest.raises(FormatError):
            parse_codes("#version: 0.2\na b c\n")

    def test_duplicate_pair_rejected(self):
        with pytest.raises(FormatError):
            parse_codes("#version: 0.2\na b\na b\n")


class TestSampleConcat:
    def corpus(self) -> Corpus:
        sentences = []
        for code, n in (("bbb", 5), ("aaa", 5)):
            for i in range(n):
                sentences.append(Sentence(f"w{i} {code}", LanguageTag(code)))
        return Corpus.from_sentences(sentences)

    def test_sample_all_when_n_large(self):
        corpus = self.corpus()
        sampled = sample_concat(corpus, 99, seed=1)
        assert len(sampled) == 10
        # lexicographic language order: all aaa sentences precede bbb
        assert all("aaa" in s for s in sampled[:5])
        assert all("bbb" in s for s in sampled[5:])

    def test_sample_exact_count(self):
        corpus = self.corpus()
        assert len(sample_concat(corpus, 3, seed=1)) == 6

    def test_deterministic(self):
        corpus = self.corpus()
        assert sample_concat(corpus, 2, seed=42) == sample_concat(corpus, 2, seed=42)
        assert sample_concat(corpus, 2, seed=42) != sample_concat(corpus, 2, seed=43)

    def test_empty_corpus(self):
        with pytest.raises(EmptyCorpus):
            sample_concat(Corpus({}), 3, seed=1)

    def test_bad_n(self):
        with pytest.raises(ValueError):
            sample_concat(self.corpus(), 0, seed=1)
